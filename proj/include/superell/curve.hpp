// SPDX-FileCopyrightText: 2026 superell developers
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "superell/field.hpp"
#include "superell/poly.hpp"

namespace superell {

/// The affine curve y^m = f(x) over F_q, gcd(q, m) = 1, f != 0.
struct SuperellipticModel {
    SuperellipticModel(unsigned m_, Poly f_);

    const Field& field() const { return f.field(); }
    unsigned m;
    Poly f;
};

/// Per-x-value local data: f = (x - x0)^s * g with g(x0) = a != 0, plus the
/// point counts on the affine model and (when defined) its normalization.
struct LocalPointData {
    felem x0;
    unsigned s;
    felem a;
    unsigned affine_count;
    std::optional<unsigned> normalization_count;  // nullopt: geometrically reducible
};

struct CurveProfile {
    std::vector<LocalPointData> locals;  // indexed by x0 = 0..q-1
    std::uint64_t total_affine = 0;
    std::optional<std::uint64_t> total_normalized;
    bool smooth = false;
    bool geometrically_irreducible = false;
    bool irreducible_over_field = false;
    unsigned n = 0;  // power-free exponent the indicator below refers to
    bool nth_power_free = false;
};

/// Solutions y of y^m = f(x0): 1 when f(x0) = 0, gcd(m, q-1) when f(x0) is a
/// nonzero m-th power, 0 otherwise.
unsigned affine_count_at(const SuperellipticModel& model, felem x0);

/// y^m - f irreducible over the algebraic closure, i.e.
/// gcd(m, bar_power(f)) = 1. f nonconstant.
bool is_geometrically_irreducible(const SuperellipticModel& model);

/// Binomial criterion in F_q(x): reducible iff f is an l-th power for some
/// prime l | m, or 4 | m and f lies in -4 (F_q(x))^4.
bool is_irreducible_over_field(const SuperellipticModel& model);

/// Criterion core on precomputed shape data (shared with the scan kernel):
/// bar_pw = power over the closure, field_pw = power over F_q, unit = leading
/// coefficient.
bool binomial_criterion_irreducible(const Field& F, unsigned m, unsigned bar_pw,
                                    unsigned field_pw, felem unit);

/// Degree-1 points of the normalization above x0: with d = gcd(m, s)
/// (gcd(m, 0) = m), gcd(d, q-1) if the unit is a d-th power, else 0.
/// Requires geometric irreducibility.
unsigned normalization_count_at(const SuperellipticModel& model, felem x0);

inline constexpr std::uint64_t kDefaultSplittingBound = std::uint64_t(1) << 31;

/// Independent oracle for normalization_count_at: builds the splitting
/// extension F_{q^e} of z^d = a in polynomial basis, enumerates all d roots
/// there, and counts those fixed by the Frobenius z -> z^q. Throws
/// std::length_error when the splitting field would exceed the bound.
unsigned branch_orbit_count(const SuperellipticModel& model, felem x0,
                            std::uint64_t splitting_order_bound = kDefaultSplittingBound);

CurveProfile profile(const SuperellipticModel& model, unsigned n);

}  // namespace superell
