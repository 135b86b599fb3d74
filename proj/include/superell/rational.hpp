// SPDX-FileCopyrightText: 2026 superell developers
// SPDX-License-Identifier: Apache-2.0
//
// Exact unbounded integer/rational arithmetic used throughout the theory
// layer. Floating point only appears when rendering distances for reports.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace superell {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Int int_pow(const Int& base, unsigned exp) {
    Int r = 1;
    Int b = base;
    unsigned e = exp;
    while (e > 0) {
        if (e & 1u) r *= b;
        b *= b;
        e >>= 1;
    }
    return r;
}

/// base^exp with exp possibly negative; base must be nonzero for exp < 0.
inline Rational rational_pow(const Rational& base, int exp) {
    if (exp >= 0) {
        Rational r(int_pow(numerator(base), static_cast<unsigned>(exp)),
                    int_pow(denominator(base), static_cast<unsigned>(exp)));
        return r;
    }
    if (base == 0) throw std::domain_error("rational_pow: zero base with negative exponent");
    return Rational(int_pow(denominator(base), static_cast<unsigned>(-exp)),
                    int_pow(numerator(base), static_cast<unsigned>(-exp)));
}

/// q^exp as an exact rational, exp may be negative (q^{-s} weights).
inline Rational q_pow(std::uint64_t q, int exp) {
    return rational_pow(Rational(Int(q)), exp);
}

inline double to_double(const Rational& x) { return x.convert_to<double>(); }

/// Fixed-point decimal rendering, rounded half away from zero.
inline std::string decimal_string(const Rational& x, unsigned places) {
    const bool neg = x < 0;
    const Rational ax = neg ? Rational(-x) : x;
    const Int scale = int_pow(Int(10), places);
    // round(ax * scale) = floor(ax * scale + 1/2)
    const Rational scaled = ax * Rational(scale) + Rational(1, 2);
    const Int rounded = numerator(scaled) / denominator(scaled);
    const Int ip = rounded / scale;
    const Int fp = rounded % scale;
    std::string frac = fp.str();
    frac.insert(frac.begin(), places - frac.size(), '0');
    std::string out = ip.str() + "." + frac;
    if (neg && rounded != 0) out.insert(out.begin(), '-');
    return out;
}

}  // namespace superell
