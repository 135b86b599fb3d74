// SPDX-FileCopyrightText: 2026 superell developers
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <utility>

#include "superell/rational.hpp"

namespace superell {

/// Probability mass function on nonnegative integer outcomes with exact
/// rational masses. Zero masses are omitted; colliding outcomes merge by
/// addition.
class ExactDist {
public:
    ExactDist() = default;

    void add_mass(std::int64_t outcome, const Rational& mass);
    const std::map<std::int64_t, Rational>& masses() const { return masses_; }
    Rational mass(std::int64_t outcome) const;
    Rational total() const;
    Rational mean() const;
    bool is_normalized() const { return total() == 1; }

    ExactDist convolve(const ExactDist& other) const;
    /// q-fold convolution (distribution of the sum of q iid copies).
    ExactDist convolve_power(std::uint64_t q) const;
    /// Product of per-site masses (independence across x-values).
    Rational joint_prob(std::span<const std::int64_t> outcomes) const;

private:
    std::map<std::int64_t, Rational> masses_;
};

enum class Variant { Singular, Normalization };

struct LimitParams {
    std::uint64_t q;  // prime power
    unsigned m;       // cover degree, gcd(q, m) = 1
    unsigned n;       // power-free exponent, n >= 2
    Variant variant = Variant::Singular;
};

void validate_params(const LimitParams& p);

/// Per-site distribution for the singular affine model: outcomes
/// {0, 1, (m,q-1)} with the three-term masses; merged when (m,q-1) = 1.
ExactDist xj_singular(const LimitParams& p);

/// Per-site distribution for the normalization, built from the conditional
/// structure: P(valuation = s) = q^{-s}(1-q^{-1})/(1-q^{-n}) for s < n, and
/// given s the count is gcd(m,s,q-1) with probability 1/gcd else 0.
ExactDist xj_normalization(const LimitParams& p);

/// The zero-outcome mass without its q^{-s} valuation weights. Not a pmf
/// for composite m; exposed only so reports can show the discrepancy against
/// the weighted form.
Rational normalization_unweighted_zero_mass(const LimitParams& p);

ExactDist total_dist(const ExactDist& x, std::uint64_t q);

/// Main term q^{d-l}(q-1) / (zeta(n) (1-q^{-n})^l) of the interpolation
/// count, and its refinement to prescribed valuations.
Rational interpolation_main_term(std::uint64_t q, unsigned n, unsigned d, unsigned l);
Rational refined_main_term(std::uint64_t q, unsigned n, unsigned d, std::span<const unsigned> s);

/// (degree-limit, signature-limit) trigonal pmfs for q = 1 mod 3.
std::pair<ExactDist, ExactDist> trigonal_contrast(std::uint64_t q);

}  // namespace superell
