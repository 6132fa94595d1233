#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "parafield/fourier.hpp"
#include "parafield/geometry.hpp"
#include "parafield/report.hpp"

namespace parafield {

/// Explicit constant of the three-dimensional L^4 extension bound:
/// 4 * (1/((1 - 2^(-1/5))(1 - 2^(-2/5))) + 1/(1 - 2^(-3/5)))^(1/2),
/// roughly 23.611. The formula is stated alongside a claimed value of 6,
/// which it does not meet; both numbers are reported, see
/// paper_constant_claimed().
double paper_constant_3d();

/// The threshold the constant is asserted to satisfy (6.0). Reported next to
/// the formula value so the discrepancy stays visible.
double paper_constant_claimed();

/// Smallest power of two that is >= v (v > 0); e.g. 0.3 -> 0.5.
double dyadic_round_up(double v);

/// Disjoint level sets E_j representing g = sum_j 2^{-j} chi_{E_j}, together
/// with the total normalization `scale` such that
///   g / 2 <= |f| / scale <= g   pointwise on the support of f.
/// Built by normalizing |f| to unit counting L^p norm, rounding each value up
/// to a power of two, and rescaling by the largest rounded value so the top
/// level sits at j = 0.
class DyadicDecomposition {
public:
    struct Term {
        int level;
        ParaboloidSubset set;
    };

    DyadicDecomposition(Paraboloid domain, std::vector<Term> terms, double scale);

    const Paraboloid& domain() const { return domain_; }
    const std::vector<Term>& terms() const { return terms_; }
    double scale() const { return scale_; }

    /// sum_j 2^{-j e} |E_j|; equals 1 when the input already carried the
    /// normalized dyadic form.
    double weight_sum(const Rational& exponent) const;

    SurfaceFunction reconstruct() const;
    Json to_json() const;
    static DyadicDecomposition from_json(const Paraboloid& domain, const Json& j);

private:
    Paraboloid domain_;
    std::vector<Term> terms_;  // levels strictly increasing
    double scale_;
};

DyadicDecomposition dyadic_decompose(const SurfaceFunction& f, const Rational& exponent);

/// ||(f dsigma)^vee||_{L^q(F^n, dx)} / ||f||_{L^p(P, dsigma)}; f must be nonzero.
double restriction_ratio(const SurfaceFunction& f, const ExponentPair& pair);

enum class Strategy { exhaustive_char, random_char, random_dyadic, local_search };

Strategy parse_strategy(const std::string& name);
std::string to_string(Strategy s);

struct SearchResult {
    uint32_t p = 0;
    uint32_t m = 1;
    int n = 0;
    std::string exponent_p, exponent_q;
    Strategy strategy = Strategy::random_char;
    uint64_t budget = 0;
    uint64_t seed = 0;
    double best_ratio = 0.0;
    Json argmax;  // {"kind": "subset", "mask": ...} or {"kind": "dyadic", "terms": [...], ...}
    uint64_t evaluations = 0;
    bool condition_satisfied = false;
    std::string condition_note;

    Json to_json() const;
    std::vector<ReportRow> rows(const std::string& command) const;
};

/// Maximizes restriction_ratio over the strategy's search class; the result
/// is a lower bound on the true constant. Deterministic given the seed.
SearchResult estimate_constant(const FieldPtr& field, int n, const ExponentPair& pair, Strategy strategy,
                               uint64_t budget, uint64_t seed, int threads = 1);

/// Re-evaluates the ratio of the recorded argmax; used to audit results.
double re_evaluate(const SearchResult& result);

struct FieldCondition {
    bool satisfied = false;
    std::string description;
};

/// Field condition under which the uniform estimates apply for dimension n:
/// for n = 3, -1 not a square; for n >= 4 the parity/field condition.
FieldCondition theorem_field_condition(const FieldPtr& field, int n);

/// One estimate per prime, same seed derivation, with the condition flagged.
std::vector<SearchResult> scan_fields(const std::vector<uint32_t>& primes, int n, const ExponentPair& pair,
                                      Strategy strategy, uint64_t budget, uint64_t seed, int threads = 1);

}  // namespace parafield
