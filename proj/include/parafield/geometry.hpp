#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "parafield/field.hpp"
#include "parafield/report.hpp"
#include "parafield/rng.hpp"

namespace parafield {

/// Point (gamma, gamma.gamma) of the paraboloid in F^n; the height is
/// computed at construction, so instances are on the surface by invariant.
class ParaboloidPoint {
public:
    explicit ParaboloidPoint(FVector base);

    const FVector& base() const { return base_; }
    const FieldElement& height() const { return height_; }
    int dim() const { return static_cast<int>(base_.size()) + 1; }

    /// Full coordinate vector (gamma_0, ..., gamma_{n-2}, height).
    FVector as_vector() const;

    bool operator==(const ParaboloidPoint& rhs) const;

private:
    FVector base_;
    FieldElement height_;
};

/// True iff the last coordinate equals the dot product of the first n-1.
bool on_paraboloid(const FVector& x);

/// Galilean symmetry g_delta: (gamma, tau) -> (gamma + delta, tau + 2 gamma.delta + delta.delta).
ParaboloidPoint galilean(const FVector& delta, const ParaboloidPoint& pt);

/// The full surface for one (field, dimension), with the canonical point
/// enumeration (rank of the base vector). Cheap to copy; the coordinate
/// table is shared and immutable.
class Paraboloid {
public:
    Paraboloid(FieldPtr field, int n, uint64_t enumeration_cap = kDefaultEnumCap);

    static constexpr uint64_t kDefaultEnumCap = 1ull << 20;

    const FieldPtr& field() const { return field_; }
    int dim() const { return n_; }
    uint64_t size() const { return size_; }

    ParaboloidPoint point(uint64_t i) const;
    uint64_t index_of(const ParaboloidPoint& pt) const;

    /// Flattened coordinates of point i: n element ranks (base digits then height).
    const uint16_t* coords(uint64_t i) const { return coords_->data() + i * n_; }

    bool operator==(const Paraboloid& rhs) const;

private:
    FieldPtr field_;
    int n_ = 0;
    uint64_t size_ = 0;
    std::shared_ptr<const std::vector<uint16_t>> coords_;
};

/// Subset of one paraboloid, stored as sorted point ranks with a canonical
/// bit-mask encoding against the surface enumeration.
class ParaboloidSubset {
public:
    ParaboloidSubset(Paraboloid domain, std::vector<uint32_t> indices);

    static ParaboloidSubset empty(const Paraboloid& domain);
    static ParaboloidSubset full(const Paraboloid& domain);
    /// Every point kept independently with probability 1/2.
    static ParaboloidSubset random(const Paraboloid& domain, Rng& rng);
    static ParaboloidSubset from_mask_hex(const Paraboloid& domain, const std::string& hex);

    const Paraboloid& domain() const { return domain_; }
    const std::vector<uint32_t>& indices() const { return indices_; }
    uint64_t size() const { return indices_.size(); }
    bool contains(uint32_t point_rank) const;
    ParaboloidPoint point(size_t member) const { return domain_.point(indices_[member]); }

    std::vector<uint64_t> mask_words() const;
    std::string mask_hex() const;

    bool operator==(const ParaboloidSubset& rhs) const;

private:
    Paraboloid domain_;
    std::vector<uint32_t> indices_;
};

/// Numeric mask comparison (for deterministic tie-breaking): -1, 0, +1.
int compare_masks(const std::vector<uint64_t>& a, const std::vector<uint64_t>& b);

/// The full surface as a subset, |P| = q^(n-1) points.
ParaboloidSubset full_paraboloid(const FieldPtr& field, int n,
                                 uint64_t enumeration_cap = Paraboloid::kDefaultEnumCap);

/// Image of a subset under g_delta (a bijection of the surface).
ParaboloidSubset galilean_image(const FVector& delta, const ParaboloidSubset& s);

/// Affine line {x in F^2 : normal.x = offset}, normal != 0. Lines built via
/// line_of(y) keep their base vector y, whose line is {x : y.x = y.y}.
class Line {
public:
    static Line through(FVector normal, FieldElement offset);

    const FVector& normal() const { return normal_; }
    const FieldElement& offset() const { return offset_; }
    const std::optional<FVector>& base() const { return base_; }

    bool contains(const FVector& x) const;
    /// Ranks of the q points on the line, sorted.
    std::vector<uint32_t> point_ranks() const;
    /// Rank of the scaled representation (leading normal coordinate 1);
    /// equal keys iff equal point sets.
    uint64_t canonical_key() const;

    bool operator==(const Line& rhs) const { return canonical_key() == rhs.canonical_key(); }

private:
    Line(FVector normal, FieldElement offset, std::optional<FVector> base);
    friend Line line_of(const FVector& y);

    FVector normal_;
    FieldElement offset_;
    std::optional<FVector> base_;
};

Line line_of(const FVector& y);

/// All q(q+1) affine lines of F^2, deduplicated, in deterministic order.
std::vector<Line> all_lines(const FieldPtr& field);

struct IncidenceInstance {
    FieldPtr field;
    std::vector<uint32_t> point_ranks;  // points of F^2, sorted unique
    std::vector<Line> lines;            // unique
};

struct IncidenceResult {
    uint64_t count = 0;
    double bound = 0.0;
    bool holds = false;
};

/// Exact incidence count against min(|P|^(1/2)|L| + |P|, |P||L|^(1/2) + |L|).
IncidenceResult count_incidences(const IncidenceInstance& inst);

/// Injectivity of y -> line_of(y) over nonzero y in F^2. Asserted when -1 is
/// not a square; otherwise reports the first colliding pair as a witness.
LemmaReport lines_distinct_check(const FieldPtr& field);

/// Checks that no d in P minus the origin has -d in P. Asserted for n = 3
/// with -1 not a square; report-only otherwise.
LemmaReport minus_d_check(const FieldPtr& field, int n);

struct PairCounts {
    uint64_t lhs = 0;
    uint64_t rhs = 0;
};

/// The two sides of the Galilean shift identity for b = (nu, nu.nu):
///   lhs = #{(a, d) in A x B : a - d + b in P}
///   rhs = #{(a', d') in g_{-nu}(A) x g_{-nu}(B) : a' - d' in P}.
PairCounts galilean_difference_counts(const ParaboloidSubset& A, const ParaboloidSubset& B,
                                      const ParaboloidPoint& b);

}  // namespace parafield
