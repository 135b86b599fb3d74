// SPDX-FileCopyrightText: 2026 superell developers
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "superell/field.hpp"
#include "superell/rational.hpp"

namespace superell {

/// Univariate polynomial over F_q. Coefficients are stored low-to-high with
/// the trailing entry nonzero; the zero polynomial has an empty coefficient
/// vector and degree() == -1.
class Poly {
public:
    explicit Poly(const Field& f) : field_(&f) {}
    Poly(const Field& f, std::vector<felem> coeffs) : field_(&f), c_(std::move(coeffs)) { trim(); }

    static Poly constant(const Field& f, felem c) {
        return c == 0 ? Poly(f) : Poly(f, std::vector<felem>{c});
    }
    /// c * x^d
    static Poly monomial(const Field& f, felem c, unsigned d) {
        if (c == 0) return Poly(f);
        std::vector<felem> v(d + 1, 0);
        v[d] = c;
        return Poly(f, std::move(v));
    }

    const Field& field() const { return *field_; }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    bool is_constant() const { return c_.size() <= 1; }
    felem coeff(std::size_t i) const { return i < c_.size() ? c_[i] : 0; }
    felem leading() const { return c_.empty() ? 0 : c_.back(); }
    std::span<const felem> coeffs() const { return c_; }

    friend bool operator==(const Poly& a, const Poly& b) {
        return a.field_ == b.field_ && a.c_ == b.c_;
    }

private:
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }
    const Field* field_;
    std::vector<felem> c_;
};

Poly operator+(const Poly& a, const Poly& b);
Poly operator-(const Poly& a, const Poly& b);
Poly operator*(const Poly& a, const Poly& b);
Poly scale(const Poly& a, felem c);
Poly monic(const Poly& a);

felem eval(const Poly& f, felem x0);
Poly derivative(const Poly& f);
/// (quotient, remainder); throws on zero divisor.
std::pair<Poly, Poly> divrem(const Poly& a, const Poly& b);
/// Monic gcd; gcd(0, 0) = 0.
Poly gcd_poly(const Poly& a, const Poly& b);
Poly pow_poly(const Poly& a, unsigned e);

struct SquarefreePart {
    Poly factor;            // monic, square-free, nonconstant
    unsigned multiplicity;  // >= 1
};

/// f = unit * prod factor^multiplicity, parts pairwise coprime and sorted by
/// multiplicity.
struct SquarefreeDecomposition {
    felem unit;
    std::vector<SquarefreePart> parts;
};

/// Characteristic-p square-free decomposition. Vanishing derivatives are
/// handled through coefficient-wise p-th roots (F_q is perfect).
SquarefreeDecomposition squarefree_decompose(const Poly& f);

/// Largest multiplicity in the decomposition; 0 for nonzero constants.
unsigned max_multiplicity(const Poly& f);

bool is_squarefree(const Poly& f);
bool is_nth_power_free(const Poly& f, unsigned n);

/// 0 if f is not square-free, else (-1)^(number of distinct monic
/// irreducible factors). Nonzero constants count as an empty product (+1).
int mobius(const Poly& f);

/// Greatest r with f = g^r over the algebraic closure: the gcd of the
/// multiplicities (the unit is absorbed over the closure). f nonconstant.
unsigned bar_power(const Poly& f);

/// Greatest r with f = g^r for g in F_q[x]: the largest divisor of
/// bar_power(f) whose unit is an r-th power in F_q^*.
unsigned power_over_field(const Poly& f);

/// (s, a) with f = (x - x0)^s * g, g(x0) = a != 0.
std::pair<unsigned, felem> valuation_and_unit(const Poly& f, felem x0);

std::string to_text(const Poly& f);
Poly poly_from_text(const Field& f, std::string_view text);

/// Deterministic stream of all polynomials of exact degree d: lower
/// coefficients run over F_q with the constant term fastest, the leading
/// coefficient over F_q^*, so index i < (q-1) q^d maps to
///   c_j = digit j of i in base q (j < d),  c_d = 1 + i / q^d.
/// Supports disjoint contiguous sub-ranges for parallel scans.
class DegreeStream {
public:
    /// Full stream; throws std::length_error when (q-1) q^d exceeds budget.
    DegreeStream(const Field& f, unsigned d, std::uint64_t budget);
    /// Sub-range [first, last); no budget check.
    DegreeStream(const Field& f, unsigned d, std::uint64_t first, std::uint64_t last);

    static Int total_count(const Field& f, unsigned d);

    /// Advance to the next polynomial; false when the range is exhausted.
    bool next();
    const std::vector<felem>& coeffs() const { return c_; }
    std::uint64_t index() const { return idx_; }
    Poly current() const { return Poly(*field_, c_); }

private:
    void set_from_index(std::uint64_t i);
    const Field* field_;
    unsigned d_;
    std::uint64_t idx_ = 0, last_ = 0;
    bool started_ = false;
    std::vector<felem> c_;
};

/// zeta_q(s) = 1/(1 - q^(1-s)) for s >= 2.
Rational zeta_value(const Field& f, unsigned s);
Rational zeta_value_q(std::uint64_t q, unsigned s);

/// #{f of exact degree d, n-th power-free} = (q-1)(q^d - q^(d-n+1)) for
/// d >= n, and (q-1) q^d for d < n.
Int count_nth_power_free(const Field& f, unsigned n, unsigned d);
Int count_nth_power_free_q(std::uint64_t q, unsigned n, unsigned d);

namespace polyops {

/// Scratch buffers for the allocation-free scan kernel.
struct Scratch {
    std::vector<felem> da, ga, gb, t;
};

int degree_of(std::span<const felem> c);
felem eval_span(const Field& F, std::span<const felem> c, felem x0);

/// What a scan needs to admit/filter a polynomial: the largest square-free
/// multiplicity, the gcd of multiplicities, and the leading unit. Square-free
/// polynomials take a derivative+gcd fast path; the rest go through the full
/// decomposition.
struct Shape {
    unsigned max_multiplicity;
    unsigned bar_power;
    felem unit;
    unsigned power_over_field;  // filled only when request_power is set
};

Shape analyze_shape(const Field& F, std::span<const felem> c, Scratch& ws, bool request_power = false);

/// Valuation of (x - x0) in c plus the cofactor value there, using the
/// scratch buffer. c must not be the zero polynomial.
std::pair<unsigned, felem> valuation_and_unit_span(const Field& F, std::span<const felem> c,
                                                   felem x0, std::vector<felem>& tmp);

}  // namespace polyops

}  // namespace superell
