// SPDX-FileCopyrightText: 2026 superell developers
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace superell {

/// Canonical encoding of a field element: an integer in [0, q).
/// For F_p this is the residue itself; for F_{p^k} = F_p[x]/(h) the element
/// sum c_i x^i is encoded as sum c_i p^i (digits against the modulus basis).
using felem = std::uint32_t;

/// A finite field F_q, q = p^k, with total table-based arithmetic.
///
/// Multiplication, inversion and powering go through exp/log tables over a
/// fixed generator, so they are O(1) during enumeration scans. The modulus
/// polynomial for k > 1 is the smallest irreducible in coefficient-
/// lexicographic order, which makes runs reproducible; it is rendered into
/// every report. Instances are immutable after construction and safe to
/// share across threads.
class Field {
public:
    static constexpr std::uint64_t kDefaultOrderBound = std::uint64_t(1) << 16;
    // Above this the full addition table is skipped and extension-field
    // addition falls back to digit-wise base-p arithmetic.
    static constexpr std::uint64_t kAddTableMax = 1024;

    Field(std::uint32_t p, std::uint32_t k, std::uint64_t order_bound = kDefaultOrderBound);

    std::uint32_t p() const { return p_; }
    std::uint32_t k() const { return k_; }
    std::uint32_t q() const { return q_; }
    felem generator() const { return exp_[1]; }
    /// "x^2+x+1 over F_2" for k > 1, empty for prime fields.
    const std::string& modulus_text() const { return modulus_text_; }
    /// Modulus lower coefficients (degree < k), low-to-high; empty for k = 1.
    const std::vector<felem>& modulus_coeffs() const { return modulus_; }

    bool is_element(felem a) const { return a < q_; }

    felem add(felem a, felem b) const {
        if (k_ == 1) {
            felem s = a + b;
            return s >= q_ ? s - q_ : s;
        }
        if (!add_.empty()) return add_[std::size_t(a) * q_ + b];
        return add_digitwise(a, b);
    }

    felem neg(felem a) const {
        if (k_ == 1) return a == 0 ? 0 : q_ - a;
        return neg_[a];
    }

    felem sub(felem a, felem b) const { return add(a, neg(b)); }

    felem mul(felem a, felem b) const {
        if (a == 0 || b == 0) return 0;
        return exp_[std::size_t(log_[a]) + log_[b]];
    }

    felem inv(felem a) const {
        if (a == 0) throw std::domain_error("Field::inv: inversion of zero");
        return exp_[(q_ - 1) - log_[a]];
    }

    felem pow(felem a, std::uint64_t e) const {
        if (a == 0) return e == 0 ? 1 : 0;
        const std::uint64_t ord = q_ - 1;
        const std::uint64_t t = (std::uint64_t(log_[a]) * (e % ord)) % ord;
        return exp_[t];
    }

    felem frobenius(felem a) const { return pow(a, p_); }

    /// Multiplicative order (a != 0).
    std::uint64_t element_order(felem a) const;

    /// a in (F_q^*)^r, decided by a^((q-1)/gcd(r,q-1)) = 1. Throws on a = 0:
    /// zero is the caller's branch.
    bool is_rth_power(felem a, std::uint64_t r) const {
        if (a == 0) throw std::domain_error("Field::is_rth_power: zero argument");
        if (r == 0) throw std::invalid_argument("Field::is_rth_power: r must be positive");
        const std::uint64_t g = std::gcd(r, std::uint64_t(q_ - 1));
        return pow(a, (q_ - 1) / g) == 1;
    }

    /// |{y in F_q : y^m = a}|: 1 for a = 0, gcd(m, q-1) for nonzero m-th
    /// powers, 0 otherwise.
    std::uint32_t root_count(felem a, std::uint64_t m) const {
        if (m == 0) throw std::invalid_argument("Field::root_count: m must be positive");
        if (a == 0) return 1;
        if (!is_rth_power(a, m)) return 0;
        return static_cast<std::uint32_t>(std::gcd(m, std::uint64_t(q_ - 1)));
    }

    /// Discrete log against the fixed generator (a != 0).
    std::uint32_t log(felem a) const {
        if (a == 0) throw std::domain_error("Field::log: zero has no logarithm");
        return log_[a];
    }
    felem exp(std::uint64_t i) const { return exp_[i % (q_ - 1)]; }

private:
    felem add_digitwise(felem a, felem b) const;

    std::uint32_t p_ = 0, k_ = 0, q_ = 0;
    std::vector<felem> modulus_;   // lower coefficients of the monic modulus
    std::string modulus_text_;
    std::vector<felem> exp_;       // size 2(q-1); exp_[i] = g^(i mod (q-1))
    std::vector<std::uint32_t> log_;  // size q; log_[0] unused
    std::vector<felem> neg_;       // size q for k > 1
    std::vector<felem> add_;       // q*q table for small extension fields
};

/// Checked element wrapper: carries its field and rejects mixed-field
/// operands. The scan kernels use raw felem + Field methods instead.
class FieldElement {
public:
    FieldElement(const Field& f, felem v) : field_(&f), v_(v) {
        if (!f.is_element(v)) throw std::invalid_argument("FieldElement: value out of range");
    }

    felem value() const { return v_; }
    const Field& field() const { return *field_; }

    friend FieldElement operator+(const FieldElement& a, const FieldElement& b) {
        check(a, b);
        return FieldElement(*a.field_, a.field_->add(a.v_, b.v_));
    }
    friend FieldElement operator-(const FieldElement& a, const FieldElement& b) {
        check(a, b);
        return FieldElement(*a.field_, a.field_->sub(a.v_, b.v_));
    }
    friend FieldElement operator*(const FieldElement& a, const FieldElement& b) {
        check(a, b);
        return FieldElement(*a.field_, a.field_->mul(a.v_, b.v_));
    }
    FieldElement operator-() const { return FieldElement(*field_, field_->neg(v_)); }
    FieldElement inverse() const { return FieldElement(*field_, field_->inv(v_)); }
    FieldElement pow(std::uint64_t e) const { return FieldElement(*field_, field_->pow(v_, e)); }

    friend bool operator==(const FieldElement& a, const FieldElement& b) {
        check(a, b);
        return a.v_ == b.v_;
    }

private:
    static void check(const FieldElement& a, const FieldElement& b) {
        if (a.field_ != b.field_) throw std::invalid_argument("mixed-field operands");
    }
    const Field* field_;
    felem v_;
};

bool is_prime(std::uint64_t n);

/// Construct F_{p^k}; validates primality and the order bound.
std::shared_ptr<const Field> make_field(std::uint32_t p, std::uint32_t k,
                                        std::uint64_t order_bound = Field::kDefaultOrderBound);

}  // namespace superell
