#pragma once

#include <cstdint>
#include <string>

#include "parafield/fourier.hpp"
#include "parafield/geometry.hpp"
#include "parafield/report.hpp"

namespace parafield {

/// Additive energy: the exact number of quadruples a + b = c + d with
/// a, c in A and b, d in B, computed as sum_x r_{A+B}(x)^2.
uint64_t additive_energy(const ParaboloidSubset& A, const ParaboloidSubset& B);

/// sum_x |sum_{a+b=x} f(a) f(b)|^2, equal to the quadruple sum
/// sum_{a+b=c+d} f(a) f(b) conj(f(c)) conj(f(d)); real and nonnegative.
double quadruple_form(const SurfaceFunction& f);

struct BilinearL2 {
    double value = 0.0;   // exact path: |F|^n / |P|^4 * energy
    double direct = 0.0;  // float path: sum_x |(chi_A ds)^v (chi_B ds)^v|^2
    uint64_t energy = 0;
    double rel_error = 0.0;
};

/// Both evaluation routes of ||(chi_A dsigma)^vee (chi_B dsigma)^vee||_2^2.
/// Throws InternalCheckError if they disagree beyond 1e-9 relative.
BilinearL2 bilinear_l2_detailed(const ParaboloidSubset& A, const ParaboloidSubset& B);

/// Exact-path value after the internal cross-check.
double bilinear_l2(const ParaboloidSubset& A, const ParaboloidSubset& B);

/// Explicit bilinear bound for n = 3 (requires -1 not a square):
///   energy <= 2 * min(|A|^(1/2)|B|^2 + |A||B|, |A||B|^(3/2) + |B|^2).
/// The reported ratio is energy over that right-hand side.
LemmaReport bilinear_bound_check(const ParaboloidSubset& A, const ParaboloidSubset& B);

/// Every pair of subsets of the full surface (n = 3). Deterministic
/// reduction: worst ratio, ties broken by smallest (maskA, maskB).
LemmaReport bilinear_bound_exhaustive(const FieldPtr& field, int threads = 1);

/// Seeded random pairs.
LemmaReport bilinear_bound_random(const FieldPtr& field, uint64_t trials, uint64_t seed, int threads = 1);

/// |F|^{-1} sum_{s in F} e(s t): 1.0 at t = 0 and 0.0 elsewhere (to rounding).
double delta_character_sum(const FieldElement& t);

/// M(a) with respect to B: sum over d in F^{n-1} of
/// |sum_{b in B, s != 0} e(s(a.b - a.d - b.d + d.d))|^2, evaluated directly
/// as a character sum (dot products taken between base vectors).
double m_quantity(const FVector& a_base, const ParaboloidSubset& B);

/// Independent evaluation of the same quantity by exact zero-counting:
/// sum_d (q * #{b : a.b - a.d - b.d + d.d = 0} - |B|)^2.
double m_quantity_counting(const FVector& a_base, const ParaboloidSubset& B);

struct EnergyRatio {
    uint64_t energy = 0;
    double bound_value = 0.0;
    double ratio = 0.0;
    bool conditions_met = false;
    std::string condition_note;
};

/// Energy against |F|^((n-2)/4)|A||B|^(3/2) + |F|^((n-2)/2)|A||B| + |F|^{-1}|A||B|^2
/// for n >= 4. Report-only; the parity/field conditions are flagged, not enforced.
EnergyRatio higher_dim_energy_ratio(const ParaboloidSubset& A, const ParaboloidSubset& B);

/// Exact count of triples (a, b, d) in A x B x B with a + b - d on the surface.
uint64_t shifted_triple_count(const ParaboloidSubset& A, const ParaboloidSubset& B);

/// The same count through the character expansion of the delta function:
/// sum over triples of delta(a.b - a.d - b.d + d.d) evaluated in floats.
double shifted_triple_count_via_delta(const ParaboloidSubset& A, const ParaboloidSubset& B);

/// Parity/field conditions of the higher-dimensional estimates for (field, n):
/// n >= 4 even, or n odd with p = 3 mod 4 and m(n-1) not a multiple of 4.
bool higher_dim_conditions(const FieldPtr& field, int n, std::string* note = nullptr);

}  // namespace parafield
