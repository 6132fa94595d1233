#include "parafield/energy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "parafield/parallel.hpp"

namespace parafield {

namespace {

uint64_t pow_u64(uint64_t base, int exp) {
    uint64_t r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

void require_same_domain(const ParaboloidSubset& A, const ParaboloidSubset& B) {
    if (!(A.domain() == B.domain())) throw FieldMismatchError("subsets over different surfaces");
}

// Rank in F^n of the coordinatewise sum of two surface points.
inline uint64_t sum_rank(const Field& F, uint64_t q, int n, const uint16_t* a, const uint16_t* b) {
    uint64_t r = 0;
    for (int j = 0; j < n; ++j) r = r * q + F.add_i(a[j], b[j]);
    return r;
}

// Sparse accumulation of r_{A+B} over F^n: dense counter plus touched list,
// reset between calls by the caller loop.
struct SumCounter {
    explicit SumCounter(uint64_t cells) : count(cells, 0) { touched.reserve(1024); }
    void clear() {
        for (uint64_t t : touched) count[t] = 0;
        touched.clear();
    }
    void bump(uint64_t r) {
        if (count[r]++ == 0) touched.push_back(r);
    }
    std::vector<uint32_t> count;
    std::vector<uint64_t> touched;
};

double min_bilinear_rhs(double na, double nb) {
    return std::min(std::sqrt(na) * nb * nb + na * nb, na * std::pow(nb, 1.5) + nb * nb);
}

}  // namespace

uint64_t additive_energy(const ParaboloidSubset& A, const ParaboloidSubset& B) {
    require_same_domain(A, B);
    const Paraboloid& P = A.domain();
    const Field& F = *P.field();
    const uint64_t q = F.order();
    const int n = P.dim();

    SumCounter counter(pow_u64(q, n));
    for (uint32_t ia : A.indices()) {
        const uint16_t* ca = P.coords(ia);
        for (uint32_t ib : B.indices()) {
            counter.bump(sum_rank(F, q, n, ca, P.coords(ib)));
        }
    }
    uint64_t energy = 0;
    for (uint64_t t : counter.touched) {
        const uint64_t r = counter.count[t];
        energy += r * r;
    }
    return energy;
}

double quadruple_form(const SurfaceFunction& f) {
    const Paraboloid& P = f.domain();
    const Field& F = *P.field();
    const uint64_t q = F.order();
    const int n = P.dim();

    std::vector<Complex> acc(pow_u64(q, n), Complex(0.0, 0.0));
    for (uint64_t ia = 0; ia < P.size(); ++ia) {
        if (f[ia] == Complex(0.0, 0.0)) continue;
        const uint16_t* ca = P.coords(ia);
        for (uint64_t ib = 0; ib < P.size(); ++ib) {
            if (f[ib] == Complex(0.0, 0.0)) continue;
            acc[sum_rank(F, q, n, ca, P.coords(ib))] += f[ia] * f[ib];
        }
    }
    double out = 0;
    for (const auto& z : acc) out += std::norm(z);
    return out;
}

BilinearL2 bilinear_l2_detailed(const ParaboloidSubset& A, const ParaboloidSubset& B) {
    require_same_domain(A, B);
    const Paraboloid& P = A.domain();
    const int n = P.dim();
    const double q = static_cast<double>(P.field()->order());
    const double psize = static_cast<double>(P.size());

    BilinearL2 out;
    out.energy = additive_energy(A, B);
    out.value = std::pow(q, n) / std::pow(psize, 4) * static_cast<double>(out.energy);

    const SpaceFunction ga = extension(SurfaceFunction::indicator(A));
    const SpaceFunction gb = extension(SurfaceFunction::indicator(B));
    double direct = 0;
    for (uint64_t x = 0; x < ga.size(); ++x) direct += std::norm(ga[x] * gb[x]);
    out.direct = direct;

    const double denom = std::max(std::abs(out.value), std::abs(out.direct));
    out.rel_error = denom == 0.0 ? 0.0 : std::abs(out.value - out.direct) / denom;
    if (out.rel_error > 1e-9) {
        throw InternalCheckError("bilinear L2 cross-check failed: exact " + format_double(out.value) +
                                 " vs direct " + format_double(out.direct));
    }
    return out;
}

double bilinear_l2(const ParaboloidSubset& A, const ParaboloidSubset& B) {
    return bilinear_l2_detailed(A, B).value;
}

namespace {

void require_bilinear_bound_preconditions(const Paraboloid& P) {
    if (P.dim() != 3) throw std::invalid_argument("the explicit bilinear bound is three-dimensional");
    const Field& F = *P.field();
    if (F.is_square(F.from_int(-1))) {
        throw std::invalid_argument("-1 is a square in F_" + std::to_string(F.order()) +
                                    "; the distinct-lines step needs it to be a non-square");
    }
}

double bound_ratio(uint64_t energy, uint64_t na, uint64_t nb) {
    const double rhs = 2.0 * min_bilinear_rhs(static_cast<double>(na), static_cast<double>(nb));
    if (rhs == 0.0) return energy == 0 ? 0.0 : std::numeric_limits<double>::infinity();
    return static_cast<double>(energy) / rhs;
}

Json bilinear_witness(const Field& F, const ParaboloidSubset& A, const ParaboloidSubset& B, double ratio) {
    Json w;
    w["check"] = "lemma2";
    w["field"] = {{"p", F.characteristic()}, {"m", F.degree()}};
    w["n"] = 3;
    w["instance"] = {{"A", A.mask_hex()}, {"B", B.mask_hex()}};
    w["claim"] = {{"metric", "ratio"}, {"op", "<="}, {"value", 1.0}};
    w["observed"] = ratio;
    return w;
}

}  // namespace

LemmaReport bilinear_bound_check(const ParaboloidSubset& A, const ParaboloidSubset& B) {
    require_same_domain(A, B);
    require_bilinear_bound_preconditions(A.domain());
    const BilinearL2 bl = bilinear_l2_detailed(A, B);
    const double ratio = bound_ratio(bl.energy, A.size(), B.size());

    LemmaReport rep;
    rep.check = "lemma2";
    rep.instance.emplace_back("q", std::to_string(A.domain().field()->order()));
    rep.instance.emplace_back("A", A.mask_hex());
    rep.instance.emplace_back("B", B.mask_hex());
    rep.worst_ratio = ratio;
    rep.verdict = ratio <= 1.0 + 1e-9 ? Verdict::pass : Verdict::fail;
    if (rep.failed()) rep.witness = bilinear_witness(*A.domain().field(), A, B, ratio);
    return rep;
}

namespace {

struct WorstPair {
    double ratio = -1.0;
    uint64_t key_a = 0;  // mask as integer; surfaces here have at most 63 points
    uint64_t key_b = 0;

    void consider(double r, uint64_t a, uint64_t b) {
        if (r > ratio || (r == ratio && (a < key_a || (a == key_a && b < key_b)))) {
            ratio = r;
            key_a = a;
            key_b = b;
        }
    }
    void merge(const WorstPair& other) {
        if (other.ratio >= 0) consider(other.ratio, other.key_a, other.key_b);
    }
};

}  // namespace

LemmaReport bilinear_bound_exhaustive(const FieldPtr& field, int threads) {
    const Paraboloid P(field, 3);
    require_bilinear_bound_preconditions(P);
    const Field& F = *field;
    const uint64_t q = F.order();
    const uint64_t psize = P.size();
    if (psize > 20) throw SizeCapError("exhaustive pair verification needs |P| <= 20");
    const uint64_t masks = 1ull << psize;

    // rank of a+b for every pair of surface points, precomputed once
    std::vector<uint32_t> pair_rank(psize * psize);
    for (uint64_t a = 0; a < psize; ++a) {
        for (uint64_t b = 0; b < psize; ++b) {
            pair_rank[a * psize + b] =
                static_cast<uint32_t>(sum_rank(F, q, 3, P.coords(a), P.coords(b)));
        }
    }

    const uint64_t cells = pow_u64(q, 3);
    std::vector<WorstPair> chunk_worst(static_cast<size_t>(resolve_threads(threads)));
    std::vector<uint8_t> any_failure(chunk_worst.size(), 0);

    const uint64_t total_pairs = masks * masks;
    const int nthreads = static_cast<int>(chunk_worst.size());
    parallel_for(static_cast<uint64_t>(nthreads), nthreads, [&](uint64_t wbegin, uint64_t wend) {
        for (uint64_t w = wbegin; w < wend; ++w) {
            const uint64_t begin = total_pairs * w / nthreads;
            const uint64_t end = total_pairs * (w + 1) / nthreads;
            SumCounter counter(cells);
            std::vector<uint32_t> amembers, bmembers;
            WorstPair& worst = chunk_worst[w];
            for (uint64_t pair = begin; pair < end; ++pair) {
                const uint64_t mask_a = pair / masks;
                const uint64_t mask_b = pair % masks;
                amembers.clear();
                bmembers.clear();
                for (uint64_t i = 0; i < psize; ++i) {
                    if (mask_a & (1ull << i)) amembers.push_back(static_cast<uint32_t>(i));
                    if (mask_b & (1ull << i)) bmembers.push_back(static_cast<uint32_t>(i));
                }
                counter.clear();
                for (uint32_t ia : amembers) {
                    const uint32_t* row = &pair_rank[ia * psize];
                    for (uint32_t ib : bmembers) counter.bump(row[ib]);
                }
                uint64_t energy = 0;
                for (uint64_t t : counter.touched) {
                    const uint64_t r = counter.count[t];
                    energy += r * r;
                }
                const double ratio = bound_ratio(energy, amembers.size(), bmembers.size());
                worst.consider(ratio, mask_a, mask_b);
                if (ratio > 1.0 + 1e-9) any_failure[w] = 1;
            }
        }
    });

    WorstPair worst;
    for (const auto& w : chunk_worst) worst.merge(w);
    bool failed = std::any_of(any_failure.begin(), any_failure.end(), [](uint8_t f) { return f != 0; });

    LemmaReport rep;
    rep.check = "lemma2";
    rep.instance.emplace_back("q", std::to_string(q));
    rep.instance.emplace_back("mode", "exhaustive");
    rep.instance.emplace_back("pairs", std::to_string(total_pairs));
    char hex[32];
    snprintf(hex, sizeof(hex), "0x%llx", static_cast<unsigned long long>(worst.key_a));
    rep.instance.emplace_back("worst_A", hex);
    snprintf(hex, sizeof(hex), "0x%llx", static_cast<unsigned long long>(worst.key_b));
    rep.instance.emplace_back("worst_B", hex);
    rep.worst_ratio = worst.ratio;
    rep.verdict = failed ? Verdict::fail : Verdict::pass;
    if (failed) {
        std::vector<uint32_t> am, bm;
        for (uint64_t i = 0; i < psize; ++i) {
            if (worst.key_a & (1ull << i)) am.push_back(static_cast<uint32_t>(i));
            if (worst.key_b & (1ull << i)) bm.push_back(static_cast<uint32_t>(i));
        }
        rep.witness = bilinear_witness(F, ParaboloidSubset(P, am), ParaboloidSubset(P, bm), worst.ratio);
    }
    return rep;
}

LemmaReport bilinear_bound_random(const FieldPtr& field, uint64_t trials, uint64_t seed, int threads) {
    const Paraboloid P(field, 3);
    require_bilinear_bound_preconditions(P);
    const Field& F = *field;
    const uint64_t q = F.order();
    const uint64_t cells = pow_u64(q, 3);
    const Rng master(seed);

    std::vector<double> ratios(trials, 0.0);
    std::vector<uint8_t> fails(trials, 0);
    parallel_for(trials, threads, [&](uint64_t begin, uint64_t end) {
        SumCounter counter(cells);
        for (uint64_t t = begin; t < end; ++t) {
            Rng rng = master.fork(t);
            const ParaboloidSubset A = ParaboloidSubset::random(P, rng);
            const ParaboloidSubset B = ParaboloidSubset::random(P, rng);
            counter.clear();
            for (uint32_t ia : A.indices()) {
                const uint16_t* ca = P.coords(ia);
                for (uint32_t ib : B.indices()) counter.bump(sum_rank(F, q, 3, ca, P.coords(ib)));
            }
            uint64_t energy = 0;
            for (uint64_t u : counter.touched) {
                const uint64_t r = counter.count[u];
                energy += r * r;
            }
            ratios[t] = bound_ratio(energy, A.size(), B.size());
            fails[t] = ratios[t] > 1.0 + 1e-9 ? 1 : 0;
        }
    });

    uint64_t worst_trial = 0;
    for (uint64_t t = 1; t < trials; ++t) {
        if (ratios[t] > ratios[worst_trial]) worst_trial = t;
    }
    const bool failed = std::any_of(fails.begin(), fails.end(), [](uint8_t f) { return f != 0; });

    LemmaReport rep;
    rep.check = "lemma2";
    rep.instance.emplace_back("q", std::to_string(q));
    rep.instance.emplace_back("mode", "random");
    rep.instance.emplace_back("trials", std::to_string(trials));
    rep.instance.emplace_back("seed", std::to_string(seed));
    rep.instance.emplace_back("worst_trial", std::to_string(worst_trial));
    rep.worst_ratio = trials == 0 ? 0.0 : ratios[worst_trial];
    rep.verdict = failed ? Verdict::fail : Verdict::pass;
    if (failed) {
        Rng rng = master.fork(worst_trial);
        const ParaboloidSubset A = ParaboloidSubset::random(P, rng);
        const ParaboloidSubset B = ParaboloidSubset::random(P, rng);
        rep.witness = bilinear_witness(F, A, B, rep.worst_ratio);
    }
    return rep;
}

double delta_character_sum(const FieldElement& t) {
    const Field& F = t.field();
    Complex acc(0.0, 0.0);
    for (uint64_t s = 0; s < F.order(); ++s) {
        acc += F.character_i(F.mul_i(static_cast<uint32_t>(s), t.index()));
    }
    return acc.real() / static_cast<double>(F.order());
}

namespace {

void require_higher_dim(const ParaboloidSubset& B, size_t a_len) {
    const int n = B.domain().dim();
    if (n < 4) throw std::invalid_argument("M(a) is defined for dimension >= 4");
    if (a_len != static_cast<size_t>(n - 1)) throw std::invalid_argument("base point has wrong length");
}

// quad(a, b, d) = a.b - a.d - b.d + d.d over base vectors; the inner sum of
// M(a) ranges over s != 0 applied to this value.
struct QuadEvaluator {
    QuadEvaluator(const FVector& a_base, const ParaboloidSubset& B)
        : P(B.domain()), F(*P.field()), q(F.order()), nm1(P.dim() - 1) {
        a_idx.reserve(nm1);
        for (const auto& x : a_base) a_idx.push_back(x.index());
        // a.b per member of B
        ab.reserve(B.size());
        for (uint32_t ib : B.indices()) {
            const uint16_t* cb = P.coords(ib);
            uint32_t t = 0;
            for (int j = 0; j < nm1; ++j) t = F.add_i(t, F.mul_i(a_idx[j], cb[j]));
            ab.push_back(t);
        }
    }

    // precomputed per-d quantities
    void set_d(const uint32_t* dc) {
        ad = 0;
        dd = 0;
        d = dc;
        for (int j = 0; j < nm1; ++j) {
            ad = F.add_i(ad, F.mul_i(a_idx[j], dc[j]));
            dd = F.add_i(dd, F.mul_i(dc[j], dc[j]));
        }
        base = F.add_i(F.sub_i(0, ad), dd);  // -a.d + d.d
    }

    uint32_t quad(size_t member, const uint16_t* cb) const {
        uint32_t bd = 0;
        for (int j = 0; j < nm1; ++j) bd = F.add_i(bd, F.mul_i(cb[j], d[j]));
        return F.add_i(ab[member], F.sub_i(base, bd));
    }

    const Paraboloid& P;
    const Field& F;
    uint64_t q;
    int nm1;
    std::vector<uint32_t> a_idx;
    std::vector<uint32_t> ab;
    const uint32_t* d = nullptr;
    uint32_t ad = 0, dd = 0, base = 0;
};

// Odometer over F^{n-1}.
struct BaseIter {
    BaseIter(uint64_t q, int len) : q_(q), digits_(static_cast<size_t>(len), 0) {}
    const uint32_t* data() const { return digits_.data(); }
    void step() {
        for (size_t j = digits_.size(); j-- > 0;) {
            if (++digits_[j] < q_) return;
            digits_[j] = 0;
        }
    }
    uint64_t q_;
    std::vector<uint32_t> digits_;
};

}  // namespace

double m_quantity(const FVector& a_base, const ParaboloidSubset& B) {
    require_higher_dim(B, a_base.size());
    const Paraboloid& P = B.domain();
    const Field& F = *P.field();
    const uint64_t q = F.order();
    const uint64_t bases = P.size();  // |F|^{n-1}

    QuadEvaluator ev(a_base, B);
    double total = 0;
    BaseIter d(q, P.dim() - 1);
    for (uint64_t dr = 0; dr < bases; ++dr, d.step()) {
        ev.set_d(d.data());
        Complex inner(0.0, 0.0);
        size_t member = 0;
        for (uint32_t ib : B.indices()) {
            const uint32_t t = ev.quad(member++, P.coords(ib));
            for (uint32_t s = 1; s < q; ++s) inner += F.character_i(F.mul_i(s, t));
        }
        total += std::norm(inner);
    }
    return total;
}

double m_quantity_counting(const FVector& a_base, const ParaboloidSubset& B) {
    require_higher_dim(B, a_base.size());
    const Paraboloid& P = B.domain();
    const Field& F = *P.field();
    const uint64_t q = F.order();
    const uint64_t bases = P.size();
    const int nm1 = P.dim() - 1;

    // Self-contained evaluation, sharing nothing with the character-sum
    // route beyond the field: sum over s of e(s t) is q at t = 0 and -1
    // otherwise, so the inner sum collapses to q * #zeros - |B| per d.
    const int64_t sz = static_cast<int64_t>(B.size());
    double total = 0;
    BaseIter d(q, nm1);
    for (uint64_t dr = 0; dr < bases; ++dr, d.step()) {
        const uint32_t* dc = d.data();
        uint32_t ad = 0, dd = 0;
        for (int j = 0; j < nm1; ++j) {
            ad = F.add_i(ad, F.mul_i(a_base[j].index(), dc[j]));
            dd = F.add_i(dd, F.mul_i(dc[j], dc[j]));
        }
        int64_t zeros = 0;
        for (uint32_t ib : B.indices()) {
            const uint16_t* cb = P.coords(ib);
            uint32_t ab = 0, bd = 0;
            for (int j = 0; j < nm1; ++j) {
                ab = F.add_i(ab, F.mul_i(a_base[j].index(), cb[j]));
                bd = F.add_i(bd, F.mul_i(cb[j], dc[j]));
            }
            if (F.add_i(F.sub_i(F.sub_i(ab, ad), bd), dd) == 0) ++zeros;
        }
        const int64_t inner = static_cast<int64_t>(q) * zeros - sz;
        total += static_cast<double>(inner) * static_cast<double>(inner);
    }
    return total;
}

bool higher_dim_conditions(const FieldPtr& field, int n, std::string* note) {
    bool ok;
    std::string why;
    if (n >= 4 && n % 2 == 0) {
        ok = true;
        why = "n even";
    } else if (n >= 5 && n % 2 == 1) {
        const bool p3 = field->characteristic() % 4 == 3;
        const bool m_ok = (field->degree() * static_cast<uint32_t>(n - 1)) % 4 != 0;
        ok = p3 && m_ok;
        why = ok ? "n odd, p = 3 mod 4, m(n-1) not divisible by 4"
                 : (p3 ? "m(n-1) divisible by 4" : "p = 1 mod 4");
    } else {
        ok = false;
        why = "n < 4";
    }
    if (note) *note = why;
    return ok;
}

EnergyRatio higher_dim_energy_ratio(const ParaboloidSubset& A, const ParaboloidSubset& B) {
    require_same_domain(A, B);
    const int n = A.domain().dim();
    if (n < 4) throw std::invalid_argument("the higher-dimensional energy form needs n >= 4");
    const double q = static_cast<double>(A.domain().field()->order());
    const double na = static_cast<double>(A.size());
    const double nb = static_cast<double>(B.size());

    EnergyRatio out;
    out.energy = additive_energy(A, B);
    out.bound_value = std::pow(q, (n - 2) / 4.0) * na * std::pow(nb, 1.5) +
                      std::pow(q, (n - 2) / 2.0) * na * nb + na * nb * nb / q;
    out.ratio = out.bound_value == 0.0 ? 0.0 : static_cast<double>(out.energy) / out.bound_value;
    out.conditions_met = higher_dim_conditions(A.domain().field(), n, &out.condition_note);
    return out;
}

uint64_t shifted_triple_count(const ParaboloidSubset& A, const ParaboloidSubset& B) {
    require_same_domain(A, B);
    const Paraboloid& P = A.domain();
    const Field& F = *P.field();
    const int n = P.dim();

    uint64_t count = 0;
    for (uint32_t ia : A.indices()) {
        const uint16_t* ca = P.coords(ia);
        for (uint32_t ib : B.indices()) {
            const uint16_t* cb = P.coords(ib);
            for (uint32_t id : B.indices()) {
                const uint16_t* cd = P.coords(id);
                uint32_t height = 0;
                uint32_t last = 0;
                for (int j = 0; j < n; ++j) {
                    const uint32_t v = F.sub_i(F.add_i(ca[j], cb[j]), cd[j]);
                    if (j < n - 1) height = F.add_i(height, F.mul_i(v, v));
                    else last = v;
                }
                if (height == last) ++count;
            }
        }
    }
    return count;
}

double shifted_triple_count_via_delta(const ParaboloidSubset& A, const ParaboloidSubset& B) {
    require_same_domain(A, B);
    const Paraboloid& P = A.domain();
    const Field& F = *P.field();
    const uint64_t q = F.order();
    const int nm1 = P.dim() - 1;

    // delta(t) for every t, each evaluated through its character sum
    std::vector<double> delta(q);
    for (uint64_t t = 0; t < q; ++t) delta[t] = delta_character_sum(F.element(t));

    double total = 0;
    for (uint32_t ia : A.indices()) {
        const uint16_t* ca = P.coords(ia);
        for (uint32_t ib : B.indices()) {
            const uint16_t* cb = P.coords(ib);
            uint32_t abdot = 0;
            for (int j = 0; j < nm1; ++j) abdot = F.add_i(abdot, F.mul_i(ca[j], cb[j]));
            for (uint32_t id : B.indices()) {
                const uint16_t* cd = P.coords(id);
                uint32_t t = abdot;
                for (int j = 0; j < nm1; ++j) {
                    const uint32_t adj = F.mul_i(ca[j], cd[j]);
                    const uint32_t bdj = F.mul_i(cb[j], cd[j]);
                    const uint32_t ddj = F.mul_i(cd[j], cd[j]);
                    t = F.add_i(F.sub_i(F.sub_i(t, adj), bdj), ddj);
                }
                total += delta[t];
            }
        }
    }
    return total;
}

}  // namespace parafield
