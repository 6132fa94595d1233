#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "parafield/energy.hpp"
#include "parafield/rng.hpp"

using namespace parafield;

namespace {

// all subsets of `universe` of size <= max_size, by mask order
std::vector<std::vector<uint32_t>> small_subsets(uint32_t universe, uint32_t max_size) {
    std::vector<std::vector<uint32_t>> out;
    for (uint64_t mask = 0; mask < (1ull << universe); ++mask) {
        if (static_cast<uint32_t>(__builtin_popcountll(mask)) > max_size) continue;
        std::vector<uint32_t> members;
        for (uint32_t i = 0; i < universe; ++i) {
            if (mask & (1ull << i)) members.push_back(i);
        }
        out.push_back(std::move(members));
    }
    return out;
}

}  // namespace

TEST_CASE("additive energy basics") {
    auto F3 = make_field(3);
    const Paraboloid P(F3, 3);
    SUBCASE("empty set") {
        CHECK(additive_energy(ParaboloidSubset::empty(P), ParaboloidSubset::full(P)) == 0);
        CHECK(additive_energy(ParaboloidSubset::full(P), ParaboloidSubset::empty(P)) == 0);
    }
    SUBCASE("singletons force the trivial quadruple") {
        CHECK(additive_energy(ParaboloidSubset(P, {2}), ParaboloidSubset(P, {5})) == 1);
    }
    SUBCASE("full surface energy, frozen against the four-loop oracle") {
        const auto full = ParaboloidSubset::full(P);
        const uint64_t e = additive_energy(full, full);
        CHECK(e == 297);
        CHECK(e == oracles::energy_four_loops(full, full));
    }
    SUBCASE("mismatched surfaces") {
        const Paraboloid P4(F3, 4);
        CHECK_THROWS_AS(additive_energy(ParaboloidSubset::full(P), ParaboloidSubset::full(P4)),
                        FieldMismatchError);
    }
}

TEST_CASE("energy equals the four-loop count on small subsets") {
    auto F3 = make_field(3);
    SUBCASE("n = 3, every pair drawn from the first six points, sizes <= 4") {
        const Paraboloid P(F3, 3);
        const auto pool = small_subsets(6, 4);
        for (const auto& am : pool) {
            for (const auto& bm : pool) {
                const ParaboloidSubset A(P, am);
                const ParaboloidSubset B(P, bm);
                REQUIRE(additive_energy(A, B) == oracles::energy_four_loops(A, B));
            }
        }
    }
    SUBCASE("n = 4, seeded size-bounded pairs over the full surface") {
        const Paraboloid P(F3, 4);
        Rng rng(41);
        for (int trial = 0; trial < 50; ++trial) {
            std::vector<uint32_t> am, bm;
            for (uint64_t k = rng.below(6); k-- > 0;) am.push_back(static_cast<uint32_t>(rng.below(P.size())));
            for (uint64_t k = rng.below(6); k-- > 0;) bm.push_back(static_cast<uint32_t>(rng.below(P.size())));
            const ParaboloidSubset A(P, am);
            const ParaboloidSubset B(P, bm);
            REQUIRE(additive_energy(A, B) == oracles::energy_four_loops(A, B));
        }
    }
}

TEST_CASE("energy properties") {
    auto F3 = make_field(3);
    const Paraboloid P(F3, 3);
    Rng rng(99);
    for (int trial = 0; trial < 40; ++trial) {
        const auto A = ParaboloidSubset::random(P, rng);
        const auto B = ParaboloidSubset::random(P, rng);
        const uint64_t e = additive_energy(A, B);
        // trivial bounds
        REQUIRE(e <= A.size() * A.size() * B.size());
        REQUIRE(e <= A.size() * B.size() * B.size());
        // symmetric under swapping the roles of the two sets
        REQUIRE(additive_energy(B, A) == e);
        // monotone under enlarging A
        auto bigger = A.indices();
        const uint32_t extra = static_cast<uint32_t>(rng.below(P.size()));
        bigger.push_back(extra);
        REQUIRE(additive_energy(ParaboloidSubset(P, bigger), B) >= e);
    }
}

TEST_CASE("quadruple form") {
    auto F3 = make_field(3);
    const Paraboloid P(F3, 3);
    SUBCASE("indicator reduces to additive energy") {
        Rng rng(51);
        for (int trial = 0; trial < 10; ++trial) {
            const auto A = ParaboloidSubset::random(P, rng);
            const double qf = quadruple_form(SurfaceFunction::indicator(A));
            REQUIRE(qf == doctest::Approx(static_cast<double>(additive_energy(A, A))).epsilon(1e-12));
        }
    }
    SUBCASE("zero function") {
        CHECK(quadruple_form(SurfaceFunction(P)) == 0.0);
    }
    SUBCASE("matches the L4 norm identity") {
        // sum_{a+b=c+d} f(a) f(b) conj(f c) conj(f d) = ||(f ds)^v||_4^4 |P|^4 / q^n
        for (uint32_t q : {3u, 7u}) {
            auto F = make_field(q);
            const Paraboloid Pq(F, 3);
            Rng rng(Rng(53).fork(q).next());
            for (int trial = 0; trial < 5; ++trial) {
                const auto f = SurfaceFunction::random(Pq, rng);
                const double lhs = quadruple_form(f);
                const double l4 = lq_norm(extension(f), Rational(4));
                const double rhs = std::pow(l4, 4.0) * std::pow(static_cast<double>(Pq.size()), 4.0) /
                                   std::pow(static_cast<double>(q), 3.0);
                REQUIRE(lhs == doctest::Approx(rhs).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("bilinear L2 via both routes") {
    auto F3 = make_field(3);
    const Paraboloid P(F3, 3);
    SUBCASE("empty sets") {
        CHECK(bilinear_l2(ParaboloidSubset::empty(P), ParaboloidSubset::empty(P)) == 0.0);
    }
    SUBCASE("full surface") {
        const auto full = ParaboloidSubset::full(P);
        const auto detail = bilinear_l2_detailed(full, full);
        CHECK(detail.energy == 297);
        CHECK(detail.value == doctest::Approx(27.0 / 6561.0 * 297.0).epsilon(1e-12));
        CHECK(detail.rel_error <= 1e-9);
    }
    SUBCASE("singletons") {
        const auto v = bilinear_l2(ParaboloidSubset(P, {1}), ParaboloidSubset(P, {4}));
        CHECK(v == doctest::Approx(27.0 / 6561.0).epsilon(1e-12));
    }
    SUBCASE("random pairs keep the two routes within 1e-9") {
        for (uint32_t q : {3u, 7u}) {
            auto F = make_field(q);
            const Paraboloid Pq(F, 3);
            Rng rng(Rng(61).fork(q).next());
            for (int trial = 0; trial < 10; ++trial) {
                const auto A = ParaboloidSubset::random(Pq, rng);
                const auto B = ParaboloidSubset::random(Pq, rng);
                const auto detail = bilinear_l2_detailed(A, B);
                REQUIRE(detail.rel_error <= 1e-9);
            }
        }
    }
}

TEST_CASE("explicit bilinear bound") {
    auto F3 = make_field(3);
    const Paraboloid P(F3, 3);
    SUBCASE("single pair") {
        const auto rep = bilinear_bound_check(ParaboloidSubset::full(P), ParaboloidSubset::full(P));
        CHECK(rep.verdict == Verdict::pass);
        CHECK(rep.worst_ratio == doctest::Approx(297.0 / 648.0).epsilon(1e-12));
    }
    SUBCASE("empty operand passes") {
        const auto rep = bilinear_bound_check(ParaboloidSubset::empty(P), ParaboloidSubset::full(P));
        CHECK(rep.verdict == Verdict::pass);
        CHECK(rep.worst_ratio == 0.0);
    }
    SUBCASE("precondition: -1 must not be a square") {
        auto F5 = make_field(5);
        const Paraboloid P5(F5, 3);
        CHECK_THROWS_AS(bilinear_bound_check(ParaboloidSubset::full(P5), ParaboloidSubset::full(P5)),
                        std::invalid_argument);
        CHECK_THROWS_AS(bilinear_bound_exhaustive(F5), std::invalid_argument);
    }
    SUBCASE("exhaustive over F_3 passes with the worst pair recorded") {
        const auto rep = bilinear_bound_exhaustive(F3, 2);
        CHECK(rep.verdict == Verdict::pass);
        CHECK(rep.worst_ratio <= 1.0);
        CHECK(rep.worst_ratio > 0.3);  // the bound is not vacuous
    }
    SUBCASE("random pairs over F_7") {
        const auto rep = bilinear_bound_random(make_field(7), 200, 1, 2);
        CHECK(rep.verdict == Verdict::pass);
        CHECK(rep.worst_ratio <= 1.0);
    }
}

TEST_CASE("delta via characters") {
    for (auto [p, m] : std::vector<std::pair<uint32_t, uint32_t>>{{7, 1}, {3, 2}}) {
        auto F = make_field(p, m);
        CHECK(delta_character_sum(F->zero()) == doctest::Approx(1.0).epsilon(1e-12));
        for (uint64_t t = 1; t < F->order(); ++t) {
            REQUIRE(std::abs(delta_character_sum(F->element(t))) <= 1e-12);
        }
    }
}

TEST_CASE("delta expansion reproduces the shifted triple count") {
    auto F3 = make_field(3);
    const Paraboloid P(F3, 4);
    Rng rng(71);
    for (int trial = 0; trial < 10; ++trial) {
        const auto A = ParaboloidSubset::random(P, rng);
        const auto B = ParaboloidSubset::random(P, rng);
        const uint64_t exact = shifted_triple_count(A, B);
        const double via_delta = shifted_triple_count_via_delta(A, B);
        REQUIRE(std::abs(via_delta - static_cast<double>(exact)) <= 1e-9);
    }
}

TEST_CASE("M quantity") {
    auto F3 = make_field(3);
    const Paraboloid P(F3, 4);
    const FVector origin = {F3->zero(), F3->zero(), F3->zero()};
    SUBCASE("empty B gives zero") {
        CHECK(m_quantity(origin, ParaboloidSubset::empty(P)) == 0.0);
        CHECK(m_quantity_counting(origin, ParaboloidSubset::empty(P)) == 0.0);
    }
    SUBCASE("dimension below four rejected") {
        const Paraboloid P3(F3, 3);
        CHECK_THROWS_AS(m_quantity({F3->zero(), F3->zero()}, ParaboloidSubset::full(P3)),
                        std::invalid_argument);
    }
    SUBCASE("the two evaluations agree on seeded singletons") {
        Rng rng(81);
        for (int trial = 0; trial < 5; ++trial) {
            const ParaboloidSubset B(P, {static_cast<uint32_t>(rng.below(P.size()))});
            const FVector a = vector_from_rank(F3, 3, rng.below(27));
            const double direct = m_quantity(a, B);
            const double counted = m_quantity_counting(a, B);
            REQUIRE(direct == doctest::Approx(counted).epsilon(1e-9));
        }
    }
    SUBCASE("full surface has a closed-form value") {
        // For B the whole surface only d = a contributes: (q^n - q^{n-1})^2.
        const auto B = ParaboloidSubset::full(P);
        Rng rng(83);
        const FVector a = vector_from_rank(F3, 3, rng.below(27));
        const double expected = std::pow(81.0 - 27.0, 2.0);
        CHECK(m_quantity(a, B) == doctest::Approx(expected).epsilon(1e-9));
        CHECK(m_quantity_counting(a, B) == doctest::Approx(expected).epsilon(1e-12));
        // ratio against q^{(n+2)/2} |B|^2 + q^n |B| stays well below one
        const double bound = std::pow(3.0, 3.0) * 27.0 * 27.0 + std::pow(3.0, 4.0) * 27.0;
        CHECK(m_quantity(a, B) / bound < 1.0);
    }
}

TEST_CASE("higher-dimensional energy ratio") {
    auto F3 = make_field(3);
    const Paraboloid P(F3, 4);
    SUBCASE("empty B") {
        const auto r = higher_dim_energy_ratio(ParaboloidSubset::full(P), ParaboloidSubset::empty(P));
        CHECK(r.ratio == 0.0);
        CHECK(r.conditions_met);  // n = 4 even
    }
    SUBCASE("seeded pairs give finite ratios") {
        Rng rng(91);
        for (int trial = 0; trial < 10; ++trial) {
            const auto A = ParaboloidSubset::random(P, rng);
            const auto B = ParaboloidSubset::random(P, rng);
            const auto r = higher_dim_energy_ratio(A, B);
            REQUIRE(std::isfinite(r.ratio));
            REQUIRE(r.ratio >= 0.0);
            if (A.size() && B.size()) {
                REQUIRE(r.energy == additive_energy(A, B));
            }
        }
    }
    SUBCASE("condition bookkeeping") {
        std::string note;
        CHECK(higher_dim_conditions(F3, 4, &note));
        CHECK_FALSE(higher_dim_conditions(F3, 5, &note));  // m(n-1) = 4
        CHECK(higher_dim_conditions(F3, 7, &note));        // m(n-1) = 6
        CHECK_FALSE(higher_dim_conditions(make_field(5), 7, &note));  // p = 1 mod 4
        CHECK_FALSE(higher_dim_conditions(F3, 3, &note));
    }
    SUBCASE("n = 3 rejected") {
        const Paraboloid P3(F3, 3);
        CHECK_THROWS_AS(higher_dim_energy_ratio(ParaboloidSubset::full(P3), ParaboloidSubset::full(P3)),
                        std::invalid_argument);
    }
}
