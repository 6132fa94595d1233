#include "parafield/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace parafield {

namespace {

constexpr uint64_t kSpaceCap = 1ull << 22;

uint64_t space_size(const FieldPtr& field, int n) {
    if (n < 1) throw std::invalid_argument("dimension must be >= 1");
    uint64_t size = 1;
    for (int i = 0; i < n; ++i) {
        size *= field->order();
        if (size > kSpaceCap) throw SizeCapError("q^n too large to materialize");
    }
    return size;
}

// Odometer over F^n coordinate ranks, last coordinate fastest; keeps the
// iteration order identical to the canonical rank order.
struct CoordIter {
    explicit CoordIter(uint64_t q, int n) : q_(q), digits_(static_cast<size_t>(n), 0) {}
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

SpaceFunction::SpaceFunction(FieldPtr field, int n)
    : field_(std::move(field)), n_(n), values_(space_size(field_, n)) {}

SpaceFunction SpaceFunction::constant(const FieldPtr& field, int n, Complex value) {
    SpaceFunction f(field, n);
    std::fill(f.values_.begin(), f.values_.end(), value);
    return f;
}

SpaceFunction SpaceFunction::point_mass(const FieldPtr& field, int n, uint64_t rank, Complex value) {
    SpaceFunction f(field, n);
    if (rank >= f.size()) throw std::invalid_argument("point mass rank out of range");
    f[rank] = value;
    return f;
}

SpaceFunction SpaceFunction::random(const FieldPtr& field, int n, Rng& rng) {
    SpaceFunction f(field, n);
    for (auto& v : f.values_) v = Complex(rng.symmetric(), rng.symmetric());
    return f;
}

double SpaceFunction::max_abs() const {
    double m = 0;
    for (const auto& v : values_) m = std::max(m, std::abs(v));
    return m;
}

SurfaceFunction::SurfaceFunction(Paraboloid domain) : domain_(std::move(domain)), values_(domain_.size()) {}

SurfaceFunction SurfaceFunction::constant(const Paraboloid& domain, Complex value) {
    SurfaceFunction f(domain);
    std::fill(f.values_.begin(), f.values_.end(), value);
    return f;
}

SurfaceFunction SurfaceFunction::indicator(const ParaboloidSubset& s) {
    SurfaceFunction f(s.domain());
    for (uint32_t i : s.indices()) f[i] = 1.0;
    return f;
}

SurfaceFunction SurfaceFunction::point_mass(const Paraboloid& domain, uint64_t rank, Complex value) {
    SurfaceFunction f(domain);
    if (rank >= f.size()) throw std::invalid_argument("point mass rank out of range");
    f[rank] = value;
    return f;
}

SurfaceFunction SurfaceFunction::random(const Paraboloid& domain, Rng& rng) {
    SurfaceFunction f(domain);
    for (uint64_t i = 0; i < f.size(); ++i) f[i] = Complex(rng.symmetric(), rng.symmetric());
    return f;
}

bool SurfaceFunction::is_zero() const {
    for (const auto& v : values_) {
        if (v != Complex(0.0, 0.0)) return false;
    }
    return true;
}

namespace {

// Shared kernel: out(x) = scale * sum_xi g(xi) e(sign * x.xi) over all of F^n.
SpaceFunction transform(const SpaceFunction& g, int sign, double scale) {
    const Field& F = *g.field();
    const int n = g.dim();
    const uint64_t q = F.order();
    const uint64_t total = g.size();
    SpaceFunction out(g.field(), n);

    // coordinates of every rank, decoded once
    std::vector<uint32_t> coords(total * static_cast<uint64_t>(n));
    {
        CoordIter it(q, n);
        for (uint64_t r = 0; r < total; ++r, it.step()) {
            for (int j = 0; j < n; ++j) coords[r * n + j] = it.data()[j];
        }
    }

    for (uint64_t xr = 0; xr < total; ++xr) {
        const uint32_t* xc = &coords[xr * n];
        Complex acc(0.0, 0.0);
        for (uint64_t er = 0; er < total; ++er) {
            const Complex& v = g[er];
            if (v == Complex(0.0, 0.0)) continue;
            const uint32_t* ec = &coords[er * n];
            uint32_t t = 0;
            for (int j = 0; j < n; ++j) t = F.add_i(t, F.mul_i(xc[j], ec[j]));
            if (sign < 0) t = F.neg_i(t);
            acc += v * F.character_i(t);
        }
        out[xr] = acc * scale;
    }
    return out;
}

}  // namespace

SpaceFunction fourier_forward(const SpaceFunction& f) { return transform(f, -1, 1.0); }

SpaceFunction fourier_inverse(const SpaceFunction& g) {
    return transform(g, +1, 1.0 / static_cast<double>(g.size()));
}

SpaceFunction extension(const SurfaceFunction& f) {
    const Paraboloid& P = f.domain();
    const Field& F = *P.field();
    const int n = P.dim();
    const uint64_t q = F.order();
    const uint64_t total = space_size(P.field(), n);
    const double scale = 1.0 / static_cast<double>(P.size());

    SpaceFunction out(P.field(), n);
    CoordIter x(q, n);
    for (uint64_t xr = 0; xr < total; ++xr, x.step()) {
        const uint32_t* xc = x.data();
        Complex acc(0.0, 0.0);
        for (uint64_t i = 0; i < P.size(); ++i) {
            const Complex& v = f[i];
            if (v == Complex(0.0, 0.0)) continue;
            const uint16_t* pc = P.coords(i);
            uint32_t t = 0;
            for (int j = 0; j < n; ++j) t = F.add_i(t, F.mul_i(xc[j], pc[j]));
            acc += v * F.character_i(t);
        }
        out[xr] = acc * scale;
    }
    return out;
}

double lq_norm(const SpaceFunction& f, const Rational& exponent) {
    if (exponent < Rational(1)) throw std::invalid_argument("norm exponent must be >= 1");
    const double e = to_double(exponent);
    double sum = 0;
    for (const auto& v : f.values()) sum += std::pow(std::abs(v), e);
    return std::pow(sum, 1.0 / e);
}

double lq_norm(const SurfaceFunction& f, const Rational& exponent) {
    if (exponent < Rational(1)) throw std::invalid_argument("norm exponent must be >= 1");
    const double e = to_double(exponent);
    double sum = 0;
    for (uint64_t i = 0; i < f.size(); ++i) sum += std::pow(std::abs(f[i]), e);
    return std::pow(sum / static_cast<double>(f.domain().size()), 1.0 / e);
}

ExponentPair::ExponentPair(Rational p_, Rational q_) : p(std::move(p_)), q(std::move(q_)) {
    if (p < Rational(1) || q < Rational(1)) throw std::invalid_argument("exponents must be >= 1");
}

ExponentPair ExponentPair::parse(const std::string& text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("exponent pair must look like a/b,c/d");
    return {parse_rational(text.substr(0, comma)), parse_rational(text.substr(comma + 1))};
}

}  // namespace parafield
