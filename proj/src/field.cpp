// SPDX-FileCopyrightText: 2026 superell developers
// SPDX-License-Identifier: Apache-2.0

#include "superell/field.hpp"

#include <algorithm>
#include <cstddef>
#include <numeric>

namespace superell {
namespace {

// Dense polynomial arithmetic over F_p on raw digit vectors; only used while
// bootstrapping the tables.
using PVec = std::vector<std::uint32_t>;

int pdeg(const PVec& a) {
    for (int i = static_cast<int>(a.size()) - 1; i >= 0; --i)
        if (a[std::size_t(i)] != 0) return i;
    return -1;
}

PVec pmul_mod(const PVec& a, const PVec& b, const PVec& mod, std::uint32_t p) {
    const std::size_t k = mod.size() - 1;  // mod is monic of degree k
    PVec r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            r[i + j] = (r[i + j] + std::uint64_t(a[i]) * b[j]) % p;
    }
    // reduce modulo the monic modulus
    for (int i = static_cast<int>(r.size()) - 1; i >= static_cast<int>(k); --i) {
        const std::uint32_t c = r[std::size_t(i)];
        if (c == 0) continue;
        r[std::size_t(i)] = 0;
        for (std::size_t j = 0; j < k; ++j) {
            const std::uint64_t t = std::uint64_t(c) * mod[j];
            const std::size_t idx = std::size_t(i) - k + j;
            r[idx] = static_cast<std::uint32_t>((r[idx] + p - (t % p)) % p);
        }
    }
    r.resize(k == 0 ? 1 : k);
    return r;
}

PVec ppow_mod(PVec base, std::uint64_t e, const PVec& mod, std::uint32_t p) {
    PVec r{1};
    while (e > 0) {
        if (e & 1) r = pmul_mod(r, base, mod, p);
        base = pmul_mod(base, base, mod, p);
        e >>= 1;
    }
    return r;
}

PVec pgcd(PVec a, PVec b, std::uint32_t p) {
    auto inv_mod_p = [p](std::uint32_t x) {
        // p prime, x != 0
        std::uint64_t r = 1, b = x, e = p - 2;
        while (e) {
            if (e & 1) r = r * b % p;
            b = b * b % p;
            e >>= 1;
        }
        return static_cast<std::uint32_t>(r);
    };
    while (pdeg(b) >= 0) {
        // a mod b
        int db = pdeg(b);
        const std::uint32_t lb_inv = inv_mod_p(b[std::size_t(db)]);
        for (int i = pdeg(a); i >= db; i = pdeg(a)) {
            const std::uint32_t c = static_cast<std::uint32_t>(std::uint64_t(a[std::size_t(i)]) * lb_inv % p);
            for (int j = 0; j <= db; ++j) {
                const std::size_t idx = std::size_t(i - db + j);
                a[idx] = static_cast<std::uint32_t>((a[idx] + std::uint64_t(p) * p - std::uint64_t(c) * b[std::size_t(j)] % p) % p);
            }
        }
        std::swap(a, b);
    }
    return a;
}

bool is_irreducible_mod_p(const PVec& h, std::uint32_t p) {
    const int k = pdeg(h);
    if (k < 1) return false;
    // x^(p^k) == x mod h, and gcd(x^(p^(k/l)) - x, h) = 1 for prime l | k.
    PVec x{0, 1};
    PVec t = x;
    std::vector<PVec> powers(std::size_t(k) + 1);  // powers[i] = x^(p^i) mod h
    powers[0] = x;
    for (int i = 1; i <= k; ++i) {
        t = ppow_mod(t, p, h, p);
        powers[std::size_t(i)] = t;
    }
    PVec diff = powers[std::size_t(k)];
    diff.resize(std::max<std::size_t>(diff.size(), 2), 0);
    diff[1] = (diff[1] + p - 1) % p;
    if (pdeg(diff) >= 0) return false;
    for (int l = 2; l <= k; ++l) {
        if (k % l != 0) continue;
        bool lprime = true;
        for (int d = 2; d * d <= l; ++d)
            if (l % d == 0) { lprime = false; break; }
        if (!lprime) continue;
        PVec g = powers[std::size_t(k / l)];
        g.resize(std::max<std::size_t>(g.size(), 2), 0);
        g[1] = (g[1] + p - 1) % p;
        PVec gg = pgcd(h, g, p);
        if (pdeg(gg) > 0) return false;
    }
    return true;
}

std::string render_modulus(const PVec& lower, std::uint32_t k, std::uint32_t p) {
    std::string s = "x^" + std::to_string(k);
    for (int i = static_cast<int>(k) - 1; i >= 0; --i) {
        const std::uint32_t c = lower[std::size_t(i)];
        if (c == 0) continue;
        s += "+";
        if (i == 0) {
            s += std::to_string(c);
        } else {
            if (c != 1) s += std::to_string(c);
            s += (i == 1) ? "x" : ("x^" + std::to_string(i));
        }
    }
    s += " over F_" + std::to_string(p);
    return s;
}

}  // namespace

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

Field::Field(std::uint32_t p, std::uint32_t k, std::uint64_t order_bound) : p_(p), k_(k) {
    if (!is_prime(p)) throw std::invalid_argument("Field: p = " + std::to_string(p) + " is not prime");
    if (k < 1) throw std::invalid_argument("Field: extension degree must be >= 1");
    // hard ceiling regardless of the configured bound: the exp/log tables are
    // dense in q
    constexpr std::uint64_t kTableCeiling = std::uint64_t(1) << 20;
    std::uint64_t q = 1;
    for (std::uint32_t i = 0; i < k; ++i) {
        q *= p;
        if (q > order_bound || q > kTableCeiling)
            throw std::length_error("Field: p^k exceeds the order bound " +
                                    std::to_string(std::min(order_bound, kTableCeiling)));
    }
    q_ = static_cast<std::uint32_t>(q);

    PVec mod;  // full modulus, degree k, monic
    if (k_ > 1) {
        // smallest irreducible monic polynomial in coefficient-lex order
        PVec cand(std::size_t(k_) + 1, 0);
        cand[k_] = 1;
        std::uint64_t t = 0;
        for (;; ++t) {
            std::uint64_t v = t;
            for (std::uint32_t i = 0; i < k_; ++i) {
                cand[i] = static_cast<std::uint32_t>(v % p_);
                v /= p_;
            }
            if (v != 0) throw std::logic_error("Field: no irreducible modulus found");
            if (is_irreducible_mod_p(cand, p_)) break;
        }
        mod = cand;
        modulus_ = PVec(cand.begin(), cand.begin() + k_);
        modulus_text_ = render_modulus(modulus_, k_, p_);
    }

    auto encode = [&](const PVec& e) {
        std::uint64_t v = 0;
        for (int i = static_cast<int>(e.size()) - 1; i >= 0; --i) v = v * p_ + e[std::size_t(i)];
        return static_cast<felem>(v);
    };
    auto decode = [&](felem v) {
        PVec e(k_, 0);
        for (std::uint32_t i = 0; i < k_; ++i) {
            e[i] = v % p_;
            v /= p_;
        }
        return e;
    };

    auto mul_raw = [&](felem a, felem b) -> felem {
        if (k_ == 1) return static_cast<felem>(std::uint64_t(a) * b % p_);
        return encode(pmul_mod(decode(a), decode(b), mod, p_));
    };

    // exp/log over a generator found by walking candidate powers
    exp_.assign(2 * std::size_t(q_ - 1), 0);
    log_.assign(q_, 0);
    std::vector<felem> walk(q_ - 1, 0);
    felem gen = 0;
    if (q_ == 2) {
        gen = 1;
        walk[0] = 1;
    } else {
        for (felem cand = 2; cand < q_; ++cand) {
            felem x = 1;
            bool good = true;
            for (std::uint32_t i = 0; i < q_ - 1; ++i) {
                walk[i] = x;  // cand^i
                if (x == 1 && i > 0) {
                    good = false;
                    break;
                }
                x = mul_raw(x, cand);
            }
            if (good && x == 1) {
                gen = cand;
                break;
            }
        }
        if (gen == 0) throw std::logic_error("Field: generator search failed");
    }
    for (std::uint32_t i = 0; i < q_ - 1; ++i) {
        exp_[i] = walk[i];
        exp_[i + (q_ - 1)] = walk[i];
        log_[walk[i]] = i;
    }
    log_[0] = q_;  // sentinel, never read through public paths

    if (k_ > 1) {
        neg_.assign(q_, 0);
        for (felem a = 0; a < q_; ++a) {
            felem v = a, out = 0;
            std::uint64_t mul = 1;
            for (std::uint32_t i = 0; i < k_; ++i) {
                const felem d = v % p_;
                v /= p_;
                out += static_cast<felem>(((p_ - d) % p_) * mul);
                mul *= p_;
            }
            neg_[a] = out;
        }
        if (q_ <= kAddTableMax) {
            add_.assign(std::size_t(q_) * q_, 0);
            for (felem a = 0; a < q_; ++a)
                for (felem b = 0; b < q_; ++b)
                    add_[std::size_t(a) * q_ + b] = add_digitwise(a, b);
        }
    }
}

felem Field::add_digitwise(felem a, felem b) const {
    felem out = 0;
    std::uint64_t mul = 1;
    for (std::uint32_t i = 0; i < k_; ++i) {
        const felem s = (a % p_ + b % p_) % p_;
        a /= p_;
        b /= p_;
        out += static_cast<felem>(s * mul);
        mul *= p_;
    }
    return out;
}

std::uint64_t Field::element_order(felem a) const {
    if (a == 0) throw std::domain_error("Field::element_order: zero argument");
    const std::uint64_t n = q_ - 1;
    const std::uint64_t t = log_[a];
    return n / std::gcd(n, t);
}

std::shared_ptr<const Field> make_field(std::uint32_t p, std::uint32_t k, std::uint64_t order_bound) {
    return std::make_shared<const Field>(p, k, order_bound);
}

}  // namespace superell
