#pragma once

#include <cstdint>
#include <vector>

#include "parafield/field.hpp"
#include "parafield/geometry.hpp"
#include "parafield/rational.hpp"
#include "parafield/rng.hpp"

namespace parafield {

/// Complex-valued function on F^n under the counting measure (mass 1 per
/// point), indexed by the canonical enumeration of F^n. The same type hosts
/// functions on the dual copy; the measure convention is carried by the
/// operations, not the type.
class SpaceFunction {
public:
    SpaceFunction(FieldPtr field, int n);

    static SpaceFunction constant(const FieldPtr& field, int n, Complex value);
    static SpaceFunction point_mass(const FieldPtr& field, int n, uint64_t rank, Complex value = 1.0);
    static SpaceFunction random(const FieldPtr& field, int n, Rng& rng);

    const FieldPtr& field() const { return field_; }
    int dim() const { return n_; }
    uint64_t size() const { return values_.size(); }

    Complex& operator[](uint64_t i) { return values_[i]; }
    const Complex& operator[](uint64_t i) const { return values_[i]; }
    const std::vector<Complex>& values() const { return values_; }

    double max_abs() const;

private:
    FieldPtr field_;
    int n_;
    std::vector<Complex> values_;
};

/// Complex-valued function on the paraboloid under the normalized surface
/// measure (mass 1/|P| per point), indexed by the surface enumeration.
class SurfaceFunction {
public:
    explicit SurfaceFunction(Paraboloid domain);

    static SurfaceFunction constant(const Paraboloid& domain, Complex value);
    static SurfaceFunction indicator(const ParaboloidSubset& s);
    static SurfaceFunction point_mass(const Paraboloid& domain, uint64_t rank, Complex value = 1.0);
    static SurfaceFunction random(const Paraboloid& domain, Rng& rng);

    const Paraboloid& domain() const { return domain_; }
    uint64_t size() const { return values_.size(); }

    Complex& operator[](uint64_t i) { return values_[i]; }
    const Complex& operator[](uint64_t i) const { return values_[i]; }

    bool is_zero() const;

private:
    Paraboloid domain_;
    std::vector<Complex> values_;
};

/// Forward transform: fhat(xi) = sum_x f(x) e(-x.xi).
SpaceFunction fourier_forward(const SpaceFunction& f);

/// Inverse transform: g_check(x) = q^{-n} sum_xi g(xi) e(x.xi).
SpaceFunction fourier_inverse(const SpaceFunction& g);

/// Extension operator: (f dsigma)^vee(x) = |P|^{-1} sum_{xi in P} f(xi) e(x.xi).
SpaceFunction extension(const SurfaceFunction& f);

/// Counting-measure norm (sum_x |f|^e)^(1/e); requires e >= 1.
double lq_norm(const SpaceFunction& f, const Rational& exponent);

/// Surface norm (|P|^{-1} sum_xi |f|^e)^(1/e); requires e >= 1.
double lq_norm(const SurfaceFunction& f, const Rational& exponent);

/// Exponent pair (p, q) of an extension estimate, with exact conjugates.
struct ExponentPair {
    Rational p;
    Rational q;

    ExponentPair(Rational p_, Rational q_);

    Rational p_conjugate() const { return conjugate_exponent(p); }
    Rational q_conjugate() const { return conjugate_exponent(q); }

    /// Parses "a/b,c/d".
    static ExponentPair parse(const std::string& text);
    std::string str() const { return to_string(p) + "," + to_string(q); }
};

}  // namespace parafield
