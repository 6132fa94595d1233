#include "parafield/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace parafield {

namespace {

const Field& field_of(const FVector& v) {
    if (v.empty()) throw std::invalid_argument("empty vector");
    return v[0].field();
}

}  // namespace

ParaboloidPoint::ParaboloidPoint(FVector base) : base_(std::move(base)), height_(dot(base_, base_)) {
    if (base_.empty()) throw std::invalid_argument("paraboloid point needs a nonempty base");
}

FVector ParaboloidPoint::as_vector() const {
    FVector out = base_;
    out.push_back(height_);
    return out;
}

bool ParaboloidPoint::operator==(const ParaboloidPoint& rhs) const {
    return base_.size() == rhs.base_.size() && rank_of(base_) == rank_of(rhs.base_) &&
           base_[0].field().same_spec(rhs.base_[0].field());
}

bool on_paraboloid(const FVector& x) {
    if (x.size() < 2) throw std::invalid_argument("need at least 2 coordinates");
    FVector base(x.begin(), x.end() - 1);
    return dot(base, base) == x.back();
}

ParaboloidPoint galilean(const FVector& delta, const ParaboloidPoint& pt) {
    if (delta.size() != pt.base().size()) throw std::invalid_argument("galilean: dimension mismatch");
    return ParaboloidPoint(add(pt.base(), delta));
}

Paraboloid::Paraboloid(FieldPtr field, int n, uint64_t enumeration_cap) : field_(std::move(field)), n_(n) {
    if (n_ < 2) throw std::invalid_argument("paraboloid needs dimension >= 2");
    const uint64_t q = field_->order();
    uint64_t size = 1;
    for (int i = 0; i < n_ - 1; ++i) {
        size *= q;
        if (size > enumeration_cap) {
            throw SizeCapError("paraboloid size " + std::to_string(q) + "^" + std::to_string(n_ - 1) +
                               " exceeds enumeration cap " + std::to_string(enumeration_cap));
        }
    }
    size_ = size;

    auto coords = std::make_shared<std::vector<uint16_t>>(size_ * n_);
    std::vector<uint32_t> digits(static_cast<size_t>(n_ - 1), 0);
    const Field& F = *field_;
    for (uint64_t i = 0; i < size_; ++i) {
        uint32_t height = 0;
        for (int j = 0; j < n_ - 1; ++j) {
            (*coords)[i * n_ + j] = static_cast<uint16_t>(digits[j]);
            height = F.add_i(height, F.mul_i(digits[j], digits[j]));
        }
        (*coords)[i * n_ + n_ - 1] = static_cast<uint16_t>(height);
        // odometer step, last digit fastest
        for (int j = n_ - 2; j >= 0; --j) {
            if (++digits[j] < q) break;
            digits[j] = 0;
        }
    }
    coords_ = std::move(coords);
}

ParaboloidPoint Paraboloid::point(uint64_t i) const {
    if (i >= size_) throw std::invalid_argument("paraboloid point rank out of range");
    FVector base(static_cast<size_t>(n_ - 1));
    const uint16_t* c = coords(i);
    for (int j = 0; j < n_ - 1; ++j) base[j] = field_->element(c[j]);
    return ParaboloidPoint(std::move(base));
}

uint64_t Paraboloid::index_of(const ParaboloidPoint& pt) const {
    if (pt.dim() != n_) throw std::invalid_argument("point dimension mismatch");
    return rank_of(pt.base());
}

bool Paraboloid::operator==(const Paraboloid& rhs) const {
    return n_ == rhs.n_ && field_->same_spec(*rhs.field_);
}

ParaboloidSubset::ParaboloidSubset(Paraboloid domain, std::vector<uint32_t> indices)
    : domain_(std::move(domain)), indices_(std::move(indices)) {
    std::sort(indices_.begin(), indices_.end());
    indices_.erase(std::unique(indices_.begin(), indices_.end()), indices_.end());
    if (!indices_.empty() && indices_.back() >= domain_.size()) {
        throw std::invalid_argument("subset member out of range");
    }
}

ParaboloidSubset ParaboloidSubset::empty(const Paraboloid& domain) { return {domain, {}}; }

ParaboloidSubset ParaboloidSubset::full(const Paraboloid& domain) {
    std::vector<uint32_t> all(domain.size());
    for (uint64_t i = 0; i < domain.size(); ++i) all[i] = static_cast<uint32_t>(i);
    return {domain, std::move(all)};
}

ParaboloidSubset ParaboloidSubset::random(const Paraboloid& domain, Rng& rng) {
    std::vector<uint32_t> members;
    for (uint64_t i = 0; i < domain.size(); ++i) {
        if (rng.coin()) members.push_back(static_cast<uint32_t>(i));
    }
    return {domain, std::move(members)};
}

ParaboloidSubset ParaboloidSubset::from_mask_hex(const Paraboloid& domain, const std::string& hex) {
    std::string digits = hex;
    if (digits.rfind("0x", 0) == 0) digits = digits.substr(2);
    std::vector<uint32_t> members;
    const size_t len = digits.size();
    for (size_t i = 0; i < len; ++i) {
        const char c = digits[len - 1 - i];
        uint32_t nib = 0;
        if (c >= '0' && c <= '9') nib = static_cast<uint32_t>(c - '0');
        else if (c >= 'a' && c <= 'f') nib = static_cast<uint32_t>(c - 'a' + 10);
        else if (c >= 'A' && c <= 'F') nib = static_cast<uint32_t>(c - 'A' + 10);
        else throw std::invalid_argument("bad mask hex: " + hex);
        for (uint32_t b = 0; b < 4; ++b) {
            if (nib & (1u << b)) members.push_back(static_cast<uint32_t>(4 * i + b));
        }
    }
    return {domain, std::move(members)};
}

bool ParaboloidSubset::contains(uint32_t point_rank) const {
    return std::binary_search(indices_.begin(), indices_.end(), point_rank);
}

std::vector<uint64_t> ParaboloidSubset::mask_words() const {
    std::vector<uint64_t> words((domain_.size() + 63) / 64, 0);
    for (uint32_t i : indices_) words[i >> 6] |= (1ull << (i & 63));
    return words;
}

std::string ParaboloidSubset::mask_hex() const {
    const auto words = mask_words();
    std::string out;
    bool leading = true;
    for (size_t w = words.size(); w-- > 0;) {
        for (int nib = 15; nib >= 0; --nib) {
            const uint32_t v = static_cast<uint32_t>((words[w] >> (4 * nib)) & 0xf);
            if (leading && v == 0) continue;
            leading = false;
            out += "0123456789abcdef"[v];
        }
    }
    if (out.empty()) out = "0";
    return "0x" + out;
}

bool ParaboloidSubset::operator==(const ParaboloidSubset& rhs) const {
    return domain_ == rhs.domain_ && indices_ == rhs.indices_;
}

int compare_masks(const std::vector<uint64_t>& a, const std::vector<uint64_t>& b) {
    const size_t n = std::max(a.size(), b.size());
    for (size_t i = n; i-- > 0;) {
        const uint64_t wa = i < a.size() ? a[i] : 0;
        const uint64_t wb = i < b.size() ? b[i] : 0;
        if (wa != wb) return wa < wb ? -1 : 1;
    }
    return 0;
}

ParaboloidSubset full_paraboloid(const FieldPtr& field, int n, uint64_t enumeration_cap) {
    return ParaboloidSubset::full(Paraboloid(field, n, enumeration_cap));
}

ParaboloidSubset galilean_image(const FVector& delta, const ParaboloidSubset& s) {
    const Paraboloid& dom = s.domain();
    if (static_cast<int>(delta.size()) != dom.dim() - 1) throw std::invalid_argument("galilean: dimension mismatch");
    const Field& F = *dom.field();
    const uint64_t q = F.order();
    std::vector<uint32_t> image;
    image.reserve(s.size());
    for (uint32_t i : s.indices()) {
        const uint16_t* c = dom.coords(i);
        uint64_t rank = 0;
        for (int j = 0; j < dom.dim() - 1; ++j) rank = rank * q + F.add_i(c[j], delta[j].index());
        image.push_back(static_cast<uint32_t>(rank));
    }
    return {dom, std::move(image)};
}

// ---------------------------------------------------------------------------
// Lines

Line::Line(FVector normal, FieldElement offset, std::optional<FVector> base)
    : normal_(std::move(normal)), offset_(offset), base_(std::move(base)) {}

Line Line::through(FVector normal, FieldElement offset) {
    if (normal.size() != 2) throw std::invalid_argument("lines live in F^2");
    if (normal[0].is_zero() && normal[1].is_zero()) throw std::invalid_argument("line normal must be nonzero");
    return Line(std::move(normal), offset, std::nullopt);
}

Line line_of(const FVector& y) {
    if (y.size() != 2) throw std::invalid_argument("line_of: base must lie in F^2");
    if (y[0].is_zero() && y[1].is_zero()) throw std::invalid_argument("line_of: zero base excluded");
    FieldElement offset = dot(y, y);
    return Line(y, offset, y);
}

bool Line::contains(const FVector& x) const { return dot(normal_, x) == offset_; }

std::vector<uint32_t> Line::point_ranks() const {
    const Field& F = field_of(normal_);
    const uint64_t q = F.order();
    const uint32_t a0 = normal_[0].index();
    const uint32_t a1 = normal_[1].index();
    const uint32_t c = offset_.index();
    std::vector<uint32_t> out;
    out.reserve(q);
    if (a0 != 0) {
        // x0 = (c - a1*x1) / a0
        const uint32_t a0inv = F.inv_i(a0);
        for (uint32_t x1 = 0; x1 < q; ++x1) {
            const uint32_t x0 = F.mul_i(a0inv, F.sub_i(c, F.mul_i(a1, x1)));
            out.push_back(static_cast<uint32_t>(static_cast<uint64_t>(x0) * q + x1));
        }
    } else {
        const uint32_t x1 = F.mul_i(F.inv_i(a1), c);
        for (uint32_t x0 = 0; x0 < q; ++x0) {
            out.push_back(static_cast<uint32_t>(static_cast<uint64_t>(x0) * q + x1));
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

uint64_t Line::canonical_key() const {
    const Field& F = field_of(normal_);
    const uint64_t q = F.order();
    const uint32_t lead = normal_[0].is_zero() ? normal_[1].index() : normal_[0].index();
    const uint32_t s = F.inv_i(lead);
    const uint32_t n0 = F.mul_i(s, normal_[0].index());
    const uint32_t n1 = F.mul_i(s, normal_[1].index());
    const uint32_t c = F.mul_i(s, offset_.index());
    return (static_cast<uint64_t>(n0) * q + n1) * q + c;
}

std::vector<Line> all_lines(const FieldPtr& field) {
    const uint64_t q = field->order();
    std::vector<Line> out;
    out.reserve(q * (q + 1));
    // normals (1, t) for every t, plus (0, 1); every offset
    for (uint64_t t = 0; t <= q; ++t) {
        FVector normal(2);
        if (t < q) {
            normal[0] = field->one();
            normal[1] = field->element(t);
        } else {
            normal[0] = field->zero();
            normal[1] = field->one();
        }
        for (uint64_t c = 0; c < q; ++c) {
            out.push_back(Line::through(normal, field->element(c)));
        }
    }
    return out;
}

IncidenceResult count_incidences(const IncidenceInstance& inst) {
    // instances are sets: drop duplicate points and duplicate lines
    std::vector<uint32_t> points = inst.point_ranks;
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    std::vector<const Line*> lines;
    {
        std::map<uint64_t, const Line*> by_key;
        for (const Line& l : inst.lines) by_key.emplace(l.canonical_key(), &l);
        for (const auto& [key, l] : by_key) lines.push_back(l);
    }

    IncidenceResult res;
    for (const Line* line : lines) {
        const auto on_line = line->point_ranks();
        // both sorted: count the intersection
        size_t i = 0, j = 0;
        while (i < points.size() && j < on_line.size()) {
            if (points[i] < on_line[j]) ++i;
            else if (on_line[j] < points[i]) ++j;
            else {
                ++res.count;
                ++i;
                ++j;
            }
        }
    }
    const double np = static_cast<double>(points.size());
    const double nl = static_cast<double>(lines.size());
    res.bound = std::min(std::sqrt(np) * nl + np, np * std::sqrt(nl) + nl);
    res.holds = static_cast<double>(res.count) <= res.bound + 1e-9;
    return res;
}

LemmaReport lines_distinct_check(const FieldPtr& field) {
    const uint64_t q = field->order();
    const bool minus_one_square = field->is_square(field->from_int(-1));
    LemmaReport rep;
    rep.check = "lines-distinct";
    rep.instance.emplace_back("q", std::to_string(q));
    rep.instance.emplace_back("minus_one_square", minus_one_square ? "true" : "false");

    std::map<uint64_t, uint64_t> seen;  // canonical key -> first base rank
    std::optional<std::pair<uint64_t, uint64_t>> collision;
    uint64_t distinct = 0;
    for (uint64_t r = 1; r < q * q; ++r) {
        FVector y = vector_from_rank(field, 2, r);
        const Line line = line_of(y);
        const auto [it, inserted] = seen.emplace(line.canonical_key(), r);
        if (inserted) {
            ++distinct;
        } else if (!collision) {
            collision = {it->second, r};
        }
    }
    rep.instance.emplace_back("distinct_lines", std::to_string(distinct));
    rep.worst_ratio = static_cast<double>(distinct) / static_cast<double>(q * q - 1);

    if (!minus_one_square) {
        rep.verdict = collision ? Verdict::fail : Verdict::pass;
    } else {
        rep.verdict = Verdict::report_only;
    }
    if (collision) {
        Json w;
        w["check"] = rep.check;
        w["field"] = {{"p", field->characteristic()}, {"m", field->degree()}};
        w["instance"] = {{"y", collision->first}, {"y_prime", collision->second}};
        w["claim"] = {{"metric", "collisions"}, {"op", "=="}, {"value", 0.0}};
        w["observed"] = 1.0;
        rep.witness = w;
    }
    return rep;
}

LemmaReport minus_d_check(const FieldPtr& field, int n) {
    const Paraboloid P(field, n);
    const Field& F = *field;
    LemmaReport rep;
    rep.check = "minus-d";
    rep.instance.emplace_back("q", std::to_string(F.order()));
    rep.instance.emplace_back("n", std::to_string(n));
    const bool minus_one_square = F.is_square(F.from_int(-1));
    rep.instance.emplace_back("minus_one_square", minus_one_square ? "true" : "false");

    uint64_t violations = 0;
    std::optional<uint64_t> first_witness;
    for (uint64_t i = 1; i < P.size(); ++i) {  // skip the origin
        const uint16_t* c = P.coords(i);
        // -d lies on P iff the height of d is zero: gamma.gamma = 0
        if (c[n - 1] == 0) {
            ++violations;
            if (!first_witness) first_witness = i;
        }
    }
    rep.instance.emplace_back("violations", std::to_string(violations));
    rep.worst_ratio = static_cast<double>(violations);

    const bool asserted = (n == 3) && !minus_one_square;
    if (asserted) {
        rep.verdict = violations == 0 ? Verdict::pass : Verdict::fail;
    } else {
        rep.verdict = Verdict::report_only;
    }
    if (violations > 0) {
        Json w;
        w["check"] = rep.check;
        w["field"] = {{"p", F.characteristic()}, {"m", F.degree()}};
        w["n"] = n;
        w["instance"] = {{"d", *first_witness}};
        w["claim"] = {{"metric", "violations"}, {"op", "=="}, {"value", 0.0}};
        w["observed"] = static_cast<double>(violations);
        rep.witness = w;
    }
    return rep;
}

PairCounts galilean_difference_counts(const ParaboloidSubset& A, const ParaboloidSubset& B,
                                      const ParaboloidPoint& b) {
    const Paraboloid& dom = A.domain();
    if (!(dom == B.domain())) throw std::invalid_argument("subsets over different surfaces");
    if (b.dim() != dom.dim()) throw std::invalid_argument("base point dimension mismatch");
    const Field& F = *dom.field();
    const int n = dom.dim();
    const FVector b_vec = b.as_vector();

    PairCounts out;
    // lhs: a - d + b on the surface
    for (uint32_t ia : A.indices()) {
        const uint16_t* ca = dom.coords(ia);
        for (uint32_t id : B.indices()) {
            const uint16_t* cd = dom.coords(id);
            uint32_t height = 0;
            uint32_t last = 0;
            for (int j = 0; j < n; ++j) {
                const uint32_t v = F.add_i(F.sub_i(ca[j], cd[j]), b_vec[j].index());
                if (j < n - 1) height = F.add_i(height, F.mul_i(v, v));
                else last = v;
            }
            if (height == last) ++out.lhs;
        }
    }

    const FVector minus_nu = neg(b.base());
    const ParaboloidSubset A2 = galilean_image(minus_nu, A);
    const ParaboloidSubset B2 = galilean_image(minus_nu, B);
    for (uint32_t ia : A2.indices()) {
        const uint16_t* ca = dom.coords(ia);
        for (uint32_t id : B2.indices()) {
            const uint16_t* cd = dom.coords(id);
            uint32_t height = 0;
            uint32_t last = 0;
            for (int j = 0; j < n; ++j) {
                const uint32_t v = F.sub_i(ca[j], cd[j]);
                if (j < n - 1) height = F.add_i(height, F.mul_i(v, v));
                else last = v;
            }
            if (height == last) ++out.rhs;
        }
    }
    return out;
}

}  // namespace parafield
