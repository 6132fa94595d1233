#pragma once

#include <boost/rational.hpp>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace parafield {

// Exact rational arithmetic for exponents such as 8/5 or 4n/(3n-2).
using Rational = boost::rational<long long>;

inline double to_double(const Rational& r) { return boost::rational_cast<double>(r); }

// Parses "a" or "a/b" with b > 0.
inline Rational parse_rational(const std::string& text) {
    const auto slash = text.find('/');
    try {
        if (slash == std::string::npos) {
            return Rational(std::stoll(text), 1);
        }
        const long long num = std::stoll(text.substr(0, slash));
        const long long den = std::stoll(text.substr(slash + 1));
        if (den <= 0) throw std::invalid_argument("rational denominator must be positive: " + text);
        return Rational(num, den);
    } catch (const std::logic_error&) {
        throw std::invalid_argument("cannot parse rational: " + text);
    }
}

inline std::string to_string(const Rational& r) {
    if (r.denominator() == 1) return std::to_string(r.numerator());
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

// Conjugate exponent: 1/r + 1/r' = 1. Requires r > 1.
inline Rational conjugate_exponent(const Rational& r) {
    if (r <= Rational(1)) throw std::domain_error("conjugate exponent needs r > 1");
    return r / (r - Rational(1));
}

}  // namespace parafield
