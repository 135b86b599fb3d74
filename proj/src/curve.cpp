// SPDX-FileCopyrightText: 2026 superell developers
// SPDX-License-Identifier: Apache-2.0

#include "superell/curve.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

namespace superell {

SuperellipticModel::SuperellipticModel(unsigned m_, Poly f_) : m(m_), f(std::move(f_)) {
    if (m < 2) throw std::invalid_argument("SuperellipticModel: m must be >= 2");
    if (f.is_zero()) throw std::invalid_argument("SuperellipticModel: f must be nonzero");
    if (m % field().p() == 0)  // gcd(q, m) = 1 iff p does not divide m
        throw std::invalid_argument("SuperellipticModel: gcd(q, m) must be 1");
}

unsigned affine_count_at(const SuperellipticModel& model, felem x0) {
    return model.field().root_count(eval(model.f, x0), model.m);
}

bool is_geometrically_irreducible(const SuperellipticModel& model) {
    if (model.f.is_constant())
        throw std::invalid_argument("is_geometrically_irreducible: constant f");
    return std::gcd(model.m, bar_power(model.f)) == 1;
}

bool binomial_criterion_irreducible(const Field& F, unsigned m, unsigned bar_pw,
                                    unsigned field_pw, felem unit) {
    for (unsigned l = 2; l <= m; ++l) {
        if (m % l != 0 || !is_prime(l)) continue;
        if (field_pw % l == 0) return false;
    }
    if (m % 4 == 0 && bar_pw % 4 == 0) {
        // f in -4 (F_q(x))^4 iff unit / (-4) is a fourth power
        const felem four = F.add(F.add(1, 1), F.add(1, 1));
        const felem t = F.mul(unit, F.inv(F.neg(four)));
        if (F.is_rth_power(t, 4)) return false;
    }
    return true;
}

bool is_irreducible_over_field(const SuperellipticModel& model) {
    if (model.f.is_constant())
        throw std::invalid_argument("is_irreducible_over_field: constant f");
    return binomial_criterion_irreducible(model.field(), model.m, bar_power(model.f),
                                          power_over_field(model.f), model.f.leading());
}

namespace {

unsigned local_gcd_exponent(unsigned m, unsigned s) {
    return s == 0 ? m : static_cast<unsigned>(std::gcd(m, s));
}

unsigned normalization_count_from(const Field& F, unsigned m, unsigned s, felem a) {
    const unsigned d = local_gcd_exponent(m, s);
    if (!F.is_rth_power(a, d)) return 0;
    return static_cast<unsigned>(std::gcd(std::uint64_t(d), std::uint64_t(F.q() - 1)));
}

// ---------------------------------------------------------------------------
// Splitting-extension scratch arithmetic for the Frobenius-orbit oracle.
// Polynomial basis over the base field, no tables: the minimal splitting
// fields on the verification grid reach order ~10^9, far beyond what the
// table-backed Field supports.
// ---------------------------------------------------------------------------

using Ext = std::vector<felem>;  // length e, low-to-high over the base field

int ext_deg(const Ext& a) {
    for (int i = static_cast<int>(a.size()) - 1; i >= 0; --i)
        if (a[std::size_t(i)] != 0) return i;
    return -1;
}

Ext ext_mul_mod(const Field& F, const Ext& a, const Ext& b, const Ext& mod_lower) {
    const std::size_t e = mod_lower.size();
    Ext r(2 * e - 1, 0);
    for (std::size_t i = 0; i < e; ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < e; ++j)
            r[i + j] = F.add(r[i + j], F.mul(a[i], b[j]));
    }
    for (int i = static_cast<int>(r.size()) - 1; i >= static_cast<int>(e); --i) {
        const felem c = r[std::size_t(i)];
        if (c == 0) continue;
        r[std::size_t(i)] = 0;
        for (std::size_t j = 0; j < e; ++j)
            r[std::size_t(i) - e + j] = F.sub(r[std::size_t(i) - e + j], F.mul(c, mod_lower[j]));
    }
    r.resize(e);
    return r;
}

class SplittingExt {
public:
    SplittingExt(const Field& base, unsigned e) : F_(base), e_(e) {
        if (e_ == 1) {
            mod_ = {0};  // F_q[z]/(z); arithmetic on constants never reduces
            return;
        }
        // smallest irreducible monic modulus in coefficient-lex order over F_q
        std::vector<felem> cand(e_ + 1, 0);
        cand[e_] = 1;
        for (std::uint64_t t = 0;; ++t) {
            std::uint64_t v = t;
            for (unsigned i = 0; i < e_; ++i) {
                cand[i] = static_cast<felem>(v % F_.q());
                v /= F_.q();
            }
            if (v != 0) throw std::logic_error("SplittingExt: no irreducible modulus");
            if (irreducible(cand)) break;
        }
        mod_.assign(cand.begin(), cand.begin() + e_);
    }

    const Field& base() const { return F_; }
    unsigned degree() const { return e_; }
    std::uint64_t order() const {  // q^e
        std::uint64_t n = 1;
        for (unsigned i = 0; i < e_; ++i) n *= F_.q();
        return n;
    }

    Ext zero() const { return Ext(e_, 0); }
    Ext one() const {
        Ext r(e_, 0);
        r[0] = 1;
        return r;
    }
    Ext embed(felem a) const {
        Ext r(e_, 0);
        r[0] = a;
        return r;
    }
    Ext element_at(std::uint64_t idx) const {
        Ext r(e_, 0);
        for (unsigned i = 0; i < e_; ++i) {
            r[i] = static_cast<felem>(idx % F_.q());
            idx /= F_.q();
        }
        return r;
    }
    std::uint64_t encode(const Ext& a) const {
        std::uint64_t v = 0;
        for (int i = static_cast<int>(e_) - 1; i >= 0; --i) v = v * F_.q() + a[std::size_t(i)];
        return v;
    }

    Ext mul(const Ext& a, const Ext& b) const { return ext_mul_mod(F_, a, b, mod_); }

    Ext pow(Ext a, std::uint64_t e) const {
        Ext r = one();
        while (e > 0) {
            if (e & 1ull) r = mul(r, a);
            a = mul(a, a);
            e >>= 1;
        }
        return r;
    }

    bool is_one(const Ext& a) const {
        if (a[0] != 1) return false;
        return ext_deg(a) == 0;
    }

private:
    // irreducibility over F_q: x^(q^e) = x mod h and gcd(x^(q^(e/l)) - x, h)
    // constant for primes l | e
    bool irreducible(const std::vector<felem>& h) const {
        Poly hp(F_, h);
        if (hp.degree() != static_cast<int>(e_)) return false;
        const Poly x = Poly::monomial(F_, 1, 1);
        Poly t = divrem(x, hp).second;
        std::vector<Poly> powers;  // powers[i] = x^(q^(i+1)) mod h
        for (unsigned i = 0; i < e_; ++i) {
            Poly next = Poly::constant(F_, 1);
            // t^q mod h by square-and-multiply
            {
                Poly base = t;
                std::uint64_t ee = F_.q();
                while (ee > 0) {
                    if (ee & 1ull) next = divrem(next * base, hp).second;
                    base = divrem(base * base, hp).second;
                    ee >>= 1;
                }
            }
            t = next;
            powers.push_back(t);
        }
        const Poly x_red = divrem(x, hp).second;
        if (!(powers[e_ - 1] == x_red)) return false;
        for (unsigned l = 2; l <= e_; ++l) {
            if (e_ % l != 0 || !is_prime(l)) continue;
            const Poly g = gcd_poly(hp, powers[e_ / l - 1] - x_red);
            if (g.degree() > 0) return false;
        }
        return true;
    }

    const Field& F_;
    unsigned e_;
    Ext mod_;
};

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            out.push_back(d);
            while (n % d == 0) n /= d;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

Ext find_generator(const SplittingExt& E, std::uint64_t group_order) {
    const auto primes = prime_factors(group_order);
    for (std::uint64_t idx = 2;; ++idx) {
        if (idx >= E.order()) throw std::logic_error("SplittingExt: generator search failed");
        const Ext cand = E.element_at(idx);
        bool ok = true;
        for (const std::uint64_t l : primes) {
            if (E.is_one(E.pow(cand, group_order / l))) {
                ok = false;
                break;
            }
        }
        if (ok) return cand;
    }
}

std::uint64_t bsgs_dlog(const SplittingExt& E, const Ext& g, const Ext& target, std::uint64_t n) {
    std::uint64_t mu = 1;
    while (mu * mu < n) ++mu;
    std::unordered_map<std::uint64_t, std::uint32_t> baby;
    baby.reserve(mu * 2);
    Ext cur = E.one();
    for (std::uint64_t j = 0; j < mu; ++j) {
        baby.emplace(E.encode(cur), static_cast<std::uint32_t>(j));
        cur = E.mul(cur, g);
    }
    const Ext giant = E.pow(g, n - mu % n);  // g^{-mu}
    Ext y = target;
    for (std::uint64_t i = 0; i <= mu; ++i) {
        const auto it = baby.find(E.encode(y));
        if (it != baby.end()) return (i * mu + it->second) % n;
        y = E.mul(y, giant);
    }
    throw std::logic_error("bsgs_dlog: no logarithm found");
}

}  // namespace

unsigned normalization_count_at(const SuperellipticModel& model, felem x0) {
    if (!is_geometrically_irreducible(model))
        throw std::domain_error("normalization_count_at: geometrically reducible model");
    const auto [s, a] = valuation_and_unit(model.f, x0);
    return normalization_count_from(model.field(), model.m, s, a);
}

unsigned branch_orbit_count(const SuperellipticModel& model, felem x0,
                            std::uint64_t splitting_order_bound) {
    if (!is_geometrically_irreducible(model))
        throw std::domain_error("branch_orbit_count: geometrically reducible model");
    const Field& F = model.field();
    const auto [s, a] = valuation_and_unit(model.f, x0);
    const unsigned d = local_gcd_exponent(model.m, s);
    const std::uint64_t q = F.q();
    const std::uint64_t ord_a = F.element_order(a);

    // smallest e with d | q^e - 1 and a a d-th power there, i.e.
    // ord(a) | (q^e - 1)/d
    unsigned e = 0;
    std::uint64_t qe = 1;
    for (unsigned cand = 1;; ++cand) {
        if (qe > splitting_order_bound / q)
            throw std::length_error("branch_orbit_count: splitting field exceeds the order bound");
        qe *= q;
        const std::uint64_t n = qe - 1;
        if (n % d == 0 && (n / d) % ord_a == 0) {
            e = cand;
            break;
        }
    }

    const SplittingExt E(F, e);
    const std::uint64_t n = qe - 1;
    if (n == 1) return 1;  // F_2: trivial unit group, the single root is fixed
    const Ext g = find_generator(E, n);
    const Ext a_emb = E.embed(a);
    const std::uint64_t t = bsgs_dlog(E, g, a_emb, n);
    if (t % d != 0) throw std::logic_error("branch_orbit_count: dlog not divisible by d");

    const Ext zeta = E.pow(g, n / d);
    Ext z = E.pow(g, t / d);
    unsigned fixed = 0;
    for (unsigned j = 0; j < d; ++j) {
        if (!(E.pow(z, d) == a_emb)) throw std::logic_error("branch_orbit_count: bad root");
        if (E.pow(z, q) == z) ++fixed;
        z = E.mul(z, zeta);
    }
    return fixed;
}

CurveProfile profile(const SuperellipticModel& model, unsigned n) {
    const Field& F = model.field();
    CurveProfile pr;
    pr.n = n;
    pr.nth_power_free = is_nth_power_free(model.f, n);
    pr.smooth = is_nth_power_free(model.f, 2);
    if (!model.f.is_constant()) {
        pr.geometrically_irreducible = is_geometrically_irreducible(model);
        pr.irreducible_over_field = is_irreducible_over_field(model);
    }
    pr.locals.reserve(F.q());
    std::uint64_t norm_total = 0;
    for (felem x0 = 0; x0 < F.q(); ++x0) {
        const auto [s, a] = valuation_and_unit(model.f, x0);
        LocalPointData d{x0, s, a, 0, std::nullopt};
        d.affine_count = (s >= 1) ? 1 : F.root_count(a, model.m);
        if (pr.geometrically_irreducible) {
            d.normalization_count = normalization_count_from(F, model.m, s, a);
            norm_total += *d.normalization_count;
        }
        pr.total_affine += d.affine_count;
        pr.locals.push_back(std::move(d));
    }
    if (pr.geometrically_irreducible) pr.total_normalized = norm_total;
    return pr;
}

}  // namespace superell
