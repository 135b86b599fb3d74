// SPDX-FileCopyrightText: 2026 superell developers
// SPDX-License-Identifier: Apache-2.0

#include "superell/dist.hpp"

#include <numeric>
#include <stdexcept>

namespace superell {

void ExactDist::add_mass(std::int64_t outcome, const Rational& mass) {
    if (mass < 0) throw std::invalid_argument("ExactDist: negative mass");
    if (outcome < 0) throw std::invalid_argument("ExactDist: negative outcome");
    if (mass == 0) return;
    masses_[outcome] += mass;
}

Rational ExactDist::mass(std::int64_t outcome) const {
    const auto it = masses_.find(outcome);
    return it == masses_.end() ? Rational(0) : it->second;
}

Rational ExactDist::total() const {
    Rational t = 0;
    for (const auto& [k, v] : masses_) t += v;
    return t;
}

Rational ExactDist::mean() const {
    Rational t = 0;
    for (const auto& [k, v] : masses_) t += Rational(Int(k)) * v;
    return t;
}

ExactDist ExactDist::convolve(const ExactDist& other) const {
    ExactDist out;
    for (const auto& [ka, va] : masses_)
        for (const auto& [kb, vb] : other.masses_) out.add_mass(ka + kb, va * vb);
    return out;
}

ExactDist ExactDist::convolve_power(std::uint64_t q) const {
    ExactDist unit;
    unit.add_mass(0, 1);
    if (q == 0) return unit;
    // square-and-multiply on distributions
    ExactDist acc = unit, base = *this;
    std::uint64_t e = q;
    while (e > 0) {
        if (e & 1ull) acc = acc.convolve(base);
        e >>= 1;
        if (e > 0) base = base.convolve(base);
    }
    return acc;
}

Rational ExactDist::joint_prob(std::span<const std::int64_t> outcomes) const {
    Rational p = 1;
    for (const std::int64_t k : outcomes) {
        p *= mass(k);
        if (p == 0) return p;
    }
    return p;
}

void validate_params(const LimitParams& p) {
    if (p.q < 2) throw std::invalid_argument("LimitParams: q must be >= 2");
    if (p.m < 2) throw std::invalid_argument("LimitParams: m must be >= 2");
    if (p.n < 2) throw std::invalid_argument("LimitParams: n must be >= 2");
    if (std::gcd(p.q, std::uint64_t(p.m)) != 1)
        throw std::invalid_argument("LimitParams: gcd(q, m) must be 1");
}

ExactDist xj_singular(const LimitParams& p) {
    validate_params(p);
    const std::uint64_t g = std::gcd(std::uint64_t(p.m), p.q - 1);
    const Rational qinv = q_pow(p.q, -1);
    const Rational denom = 1 - q_pow(p.q, -static_cast<int>(p.n));
    ExactDist out;
    out.add_mass(0, (1 - Rational(1, Int(g))) * (1 - qinv) / denom);
    out.add_mass(1, (qinv - q_pow(p.q, -static_cast<int>(p.n))) / denom);
    out.add_mass(static_cast<std::int64_t>(g), Rational(1, Int(g)) * (1 - qinv) / denom);
    return out;
}

ExactDist xj_normalization(const LimitParams& p) {
    validate_params(p);
    const Rational qinv = q_pow(p.q, -1);
    const Rational denom = 1 - q_pow(p.q, -static_cast<int>(p.n));
    ExactDist out;
    for (unsigned s = 0; s < p.n; ++s) {
        // gcd(m, 0) = m makes the s = 0 term the unramified case
        const std::uint64_t ns = std::gcd(std::gcd(std::uint64_t(p.m), std::uint64_t(s)), p.q - 1);
        const Rational ws = q_pow(p.q, -static_cast<int>(s)) * (1 - qinv) / denom;
        out.add_mass(static_cast<std::int64_t>(ns), ws / Rational(Int(ns)));
        out.add_mass(0, ws * (1 - Rational(1, Int(ns))));
    }
    return out;
}

Rational normalization_unweighted_zero_mass(const LimitParams& p) {
    validate_params(p);
    const Rational qinv = q_pow(p.q, -1);
    const Rational denom = 1 - q_pow(p.q, -static_cast<int>(p.n));
    Rational mass = 0;
    for (unsigned s = 0; s < p.n; ++s) {
        const std::uint64_t ns = std::gcd(std::gcd(std::uint64_t(p.m), std::uint64_t(s)), p.q - 1);
        mass += (1 - Rational(1, Int(ns))) * (1 - qinv) / denom;
    }
    return mass;
}

ExactDist total_dist(const ExactDist& x, std::uint64_t q) { return x.convolve_power(q); }

Rational interpolation_main_term(std::uint64_t q, unsigned n, unsigned d, unsigned l) {
    if (n < 2) throw std::invalid_argument("interpolation_main_term: n must be >= 2");
    if (d < l) throw std::invalid_argument("interpolation_main_term: require d >= l");
    if (l > q) throw std::invalid_argument("interpolation_main_term: require l <= q");
    const Rational zeta_inv = 1 - q_pow(q, 1 - static_cast<int>(n));  // 1/zeta(n)
    const Rational local = rational_pow(1 - q_pow(q, -static_cast<int>(n)), static_cast<int>(l));
    return q_pow(q, static_cast<int>(d - l)) * Rational(Int(q) - 1) * zeta_inv / local;
}

Rational refined_main_term(std::uint64_t q, unsigned n, unsigned d, std::span<const unsigned> s) {
    if (n < 2) throw std::invalid_argument("refined_main_term: n must be >= 2");
    if (s.size() != q) throw std::invalid_argument("refined_main_term: need one valuation per site");
    long long sum = 0;
    for (const unsigned si : s) sum += si;
    const Rational zeta_inv = 1 - q_pow(q, 1 - static_cast<int>(n));
    const Rational local = rational_pow(1 - q_pow(q, -static_cast<int>(n)), static_cast<int>(q));
    const int exp = static_cast<int>(static_cast<long long>(d) - sum - static_cast<long long>(q));
    return q_pow(q, exp) * Rational(Int(q) - 1) * zeta_inv / local;
}

std::pair<ExactDist, ExactDist> trigonal_contrast(std::uint64_t q) {
    if (q % 3 != 1) throw std::invalid_argument("trigonal_contrast: require q = 1 mod 3");
    const Rational qi = q_pow(q, -1);
    const Rational qi2 = q_pow(q, -2);
    ExactDist ours;
    {
        const Rational denom = 1 + qi + qi2;
        ours.add_mass(0, Rational(2, 3) / denom);
        ours.add_mass(1, (qi + qi2) / denom);
        ours.add_mass(3, Rational(1, 3) / denom);
    }
    ExactDist prior;
    {
        const Rational denom = 1 + 2 * qi;
        prior.add_mass(0, Rational(2, 3) / denom);
        prior.add_mass(1, 2 * qi / denom);
        prior.add_mass(3, Rational(1, 3) / denom);
    }
    return {ours, prior};
}

}  // namespace superell
