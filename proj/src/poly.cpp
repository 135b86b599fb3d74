// SPDX-FileCopyrightText: 2026 superell developers
// SPDX-License-Identifier: Apache-2.0

#include "superell/poly.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>

namespace superell {

namespace {

void check_same_field(const Poly& a, const Poly& b) {
    if (&a.field() != &b.field()) throw std::invalid_argument("polynomials from different fields");
}

felem int_in_field(const Field& F, unsigned n) {
    // n * 1 lives in the prime subfield, whose encodings are 0..p-1
    return static_cast<felem>(n % F.p());
}

}  // namespace

Poly operator+(const Poly& a, const Poly& b) {
    check_same_field(a, b);
    const Field& F = a.field();
    std::vector<felem> c(std::max(a.coeffs().size(), b.coeffs().size()), 0);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = F.add(a.coeff(i), b.coeff(i));
    return Poly(F, std::move(c));
}

Poly operator-(const Poly& a, const Poly& b) {
    check_same_field(a, b);
    const Field& F = a.field();
    std::vector<felem> c(std::max(a.coeffs().size(), b.coeffs().size()), 0);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = F.sub(a.coeff(i), b.coeff(i));
    return Poly(F, std::move(c));
}

Poly operator*(const Poly& a, const Poly& b) {
    check_same_field(a, b);
    const Field& F = a.field();
    if (a.is_zero() || b.is_zero()) return Poly(F);
    std::vector<felem> c(a.coeffs().size() + b.coeffs().size() - 1, 0);
    for (std::size_t i = 0; i < a.coeffs().size(); ++i) {
        const felem ai = a.coeff(i);
        if (ai == 0) continue;
        for (std::size_t j = 0; j < b.coeffs().size(); ++j)
            c[i + j] = F.add(c[i + j], F.mul(ai, b.coeff(j)));
    }
    return Poly(F, std::move(c));
}

Poly scale(const Poly& a, felem c) {
    const Field& F = a.field();
    std::vector<felem> v(a.coeffs().begin(), a.coeffs().end());
    for (auto& x : v) x = F.mul(x, c);
    return Poly(F, std::move(v));
}

Poly monic(const Poly& a) {
    if (a.is_zero()) return a;
    return scale(a, a.field().inv(a.leading()));
}

felem eval(const Poly& f, felem x0) { return polyops::eval_span(f.field(), f.coeffs(), x0); }

Poly derivative(const Poly& f) {
    const Field& F = f.field();
    if (f.is_constant()) return Poly(F);
    std::vector<felem> c(f.coeffs().size() - 1, 0);
    for (std::size_t i = 1; i < f.coeffs().size(); ++i)
        c[i - 1] = F.mul(f.coeff(i), int_in_field(F, static_cast<unsigned>(i)));
    return Poly(F, std::move(c));
}

std::pair<Poly, Poly> divrem(const Poly& a, const Poly& b) {
    check_same_field(a, b);
    const Field& F = a.field();
    if (b.is_zero()) throw std::domain_error("divrem: division by zero polynomial");
    if (a.degree() < b.degree()) return {Poly(F), a};
    std::vector<felem> r(a.coeffs().begin(), a.coeffs().end());
    const int db = b.degree();
    std::vector<felem> q(a.coeffs().size() - b.coeffs().size() + 1, 0);
    const felem lb_inv = F.inv(b.leading());
    for (int i = a.degree(); i >= db; --i) {
        const felem c = F.mul(r[std::size_t(i)], lb_inv);
        if (c == 0) continue;
        q[std::size_t(i - db)] = c;
        for (int j = 0; j <= db; ++j)
            r[std::size_t(i - db + j)] = F.sub(r[std::size_t(i - db + j)], F.mul(c, b.coeff(std::size_t(j))));
    }
    return {Poly(F, std::move(q)), Poly(F, std::move(r))};
}

Poly gcd_poly(const Poly& a, const Poly& b) {
    Poly x = a, y = b;
    while (!y.is_zero()) {
        Poly r = divrem(x, y).second;
        x = std::move(y);
        y = std::move(r);
    }
    return monic(x);
}

Poly pow_poly(const Poly& a, unsigned e) {
    Poly r = Poly::constant(a.field(), 1);
    Poly b = a;
    while (e > 0) {
        if (e & 1u) r = r * b;
        b = b * b;
        e >>= 1;
    }
    return r;
}

namespace {

Poly poly_powmod(Poly base, std::uint64_t e, const Poly& mod) {
    const Field& F = base.field();
    Poly r = Poly::constant(F, 1);
    base = divrem(base, mod).second;
    while (e > 0) {
        if (e & 1ull) r = divrem(r * base, mod).second;
        base = divrem(base * base, mod).second;
        e >>= 1;
    }
    return r;
}

// f with f' = 0 is g(x)^p; recover g by sampling coefficients at multiples of
// p and taking p-th roots (c^(p^(k-1)))
Poly pth_root(const Poly& f) {
    const Field& F = f.field();
    const std::uint32_t p = F.p();
    std::uint64_t root_exp = 1;
    for (std::uint32_t i = 0; i + 1 < F.k(); ++i) root_exp *= p;
    std::vector<felem> c(f.coeffs().size() / p + 1, 0);
    for (std::size_t i = 0; i < f.coeffs().size(); ++i) {
        if (f.coeff(i) == 0) continue;
        assert(i % p == 0);
        c[i / p] = F.pow(f.coeff(i), root_exp);
    }
    return Poly(F, std::move(c));
}

void sqfree_rec(const Poly& w, unsigned scale, std::vector<SquarefreePart>& out) {
    const Field& F = w.field();
    const Poly d = derivative(w);
    if (d.is_zero()) {
        sqfree_rec(pth_root(w), scale * F.p(), out);
        return;
    }
    Poly c = gcd_poly(w, d);
    Poly x = divrem(w, c).first;
    unsigned i = 1;
    while (!x.is_constant()) {
        Poly y = gcd_poly(x, c);
        Poly z = divrem(x, y).first;
        if (!z.is_constant()) out.push_back({z, i * scale});
        x = std::move(y);
        c = divrem(c, x).first;
        ++i;
    }
    if (!c.is_constant()) sqfree_rec(pth_root(c), scale * F.p(), out);
}

}  // namespace

SquarefreeDecomposition squarefree_decompose(const Poly& f) {
    if (f.is_zero()) throw std::domain_error("squarefree_decompose: zero polynomial");
    SquarefreeDecomposition out{f.leading(), {}};
    if (f.is_constant()) return out;
    sqfree_rec(monic(f), 1, out.parts);
    std::sort(out.parts.begin(), out.parts.end(),
              [](const SquarefreePart& a, const SquarefreePart& b) { return a.multiplicity < b.multiplicity; });
    return out;
}

unsigned max_multiplicity(const Poly& f) {
    const auto dec = squarefree_decompose(f);
    unsigned m = 0;
    for (const auto& part : dec.parts) m = std::max(m, part.multiplicity);
    return m;
}

bool is_squarefree(const Poly& f) { return is_nth_power_free(f, 2); }

bool is_nth_power_free(const Poly& f, unsigned n) {
    if (n < 2) throw std::invalid_argument("is_nth_power_free: n must be >= 2");
    if (f.is_zero()) throw std::domain_error("is_nth_power_free: zero polynomial");
    if (f.is_constant()) return true;
    // fast path: derivative + gcd
    const Poly d = derivative(f);
    if (!d.is_zero()) {
        if (gcd_poly(f, d).is_constant()) return true;
        if (n == 2) return false;
    }
    return max_multiplicity(f) < n;
}

namespace {

// number of monic irreducible factors of a monic square-free polynomial,
// by distinct-degree splitting (only the count is needed)
unsigned ddf_factor_count(const Poly& g) {
    const Field& F = g.field();
    unsigned count = 0;
    Poly rem = g;
    const Poly x = Poly::monomial(F, 1, 1);
    Poly h = divrem(x, rem).second;
    unsigned d = 1;
    while (static_cast<int>(2 * d) <= rem.degree()) {
        h = poly_powmod(h, F.q(), rem);
        const Poly u = gcd_poly(rem, h - x);
        if (u.degree() > 0) {
            count += static_cast<unsigned>(u.degree()) / d;
            rem = divrem(rem, u).first;
            h = divrem(h, rem).second;
        }
        ++d;
    }
    if (rem.degree() > 0) ++count;
    return count;
}

}  // namespace

int mobius(const Poly& f) {
    if (f.is_zero()) throw std::domain_error("mobius: zero polynomial");
    if (f.is_constant()) return 1;  // empty product
    const auto dec = squarefree_decompose(f);
    for (const auto& part : dec.parts)
        if (part.multiplicity >= 2) return 0;
    unsigned k = 0;
    for (const auto& part : dec.parts) k += ddf_factor_count(part.factor);
    return (k % 2 == 0) ? 1 : -1;
}

unsigned bar_power(const Poly& f) {
    if (f.is_constant()) throw std::invalid_argument("bar_power: constant polynomial");
    const auto dec = squarefree_decompose(f);
    unsigned g = 0;
    for (const auto& part : dec.parts) g = std::gcd(g, part.multiplicity);
    return g;
}

unsigned power_over_field(const Poly& f) {
    if (f.is_constant()) throw std::invalid_argument("power_over_field: constant polynomial");
    const Field& F = f.field();
    const unsigned b = bar_power(f);
    const felem unit = f.leading();
    for (unsigned r = b; r >= 1; --r) {
        if (b % r != 0) continue;
        if (F.is_rth_power(unit, r)) return r;
    }
    return 1;
}

std::pair<unsigned, felem> valuation_and_unit(const Poly& f, felem x0) {
    if (f.is_zero()) throw std::domain_error("valuation_and_unit: zero polynomial");
    std::vector<felem> tmp;
    return polyops::valuation_and_unit_span(f.field(), f.coeffs(), x0, tmp);
}

std::string to_text(const Poly& f) {
    if (f.is_zero()) return "0";
    std::string s;
    for (std::size_t i = 0; i < f.coeffs().size(); ++i) {
        if (i) s += ',';
        s += std::to_string(f.coeff(i));
    }
    return s;
}

Poly poly_from_text(const Field& F, std::string_view text) {
    std::vector<felem> c;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t comma = text.find(',', pos);
        if (comma == std::string_view::npos) comma = text.size();
        const std::string_view tok = text.substr(pos, comma - pos);
        if (tok.empty()) throw std::invalid_argument("poly_from_text: empty coefficient");
        std::uint64_t v = 0;
        for (char ch : tok) {
            if (ch < '0' || ch > '9') throw std::invalid_argument("poly_from_text: bad coefficient");
            v = v * 10 + static_cast<std::uint64_t>(ch - '0');
            if (v >= F.q() * 10ull) break;
        }
        if (v >= F.q()) throw std::invalid_argument("poly_from_text: coefficient out of range");
        c.push_back(static_cast<felem>(v));
        pos = comma + 1;
        if (comma == text.size()) break;
    }
    return Poly(F, std::move(c));
}

DegreeStream::DegreeStream(const Field& f, unsigned d, std::uint64_t budget) : field_(&f), d_(d) {
    const Int total = total_count(f, d);
    if (total > Int(budget))
        throw std::length_error("DegreeStream: (q-1)q^d = " + total.str() + " exceeds budget " +
                                std::to_string(budget));
    idx_ = 0;
    last_ = total.convert_to<std::uint64_t>();
    c_.assign(d_ + 1, 0);
}

DegreeStream::DegreeStream(const Field& f, unsigned d, std::uint64_t first, std::uint64_t last)
    : field_(&f), d_(d), idx_(first), last_(last) {
    const Int total = total_count(f, d);
    if (first > last || Int(last) > total)
        throw std::invalid_argument("DegreeStream: invalid sub-range");
    c_.assign(d_ + 1, 0);
}

Int DegreeStream::total_count(const Field& f, unsigned d) {
    return Int(f.q() - 1) * int_pow(Int(f.q()), d);
}

void DegreeStream::set_from_index(std::uint64_t i) {
    const std::uint64_t q = field_->q();
    for (unsigned j = 0; j < d_; ++j) {
        c_[j] = static_cast<felem>(i % q);
        i /= q;
    }
    c_[d_] = static_cast<felem>(1 + i);
}

bool DegreeStream::next() {
    if (!started_) {
        if (idx_ >= last_) return false;
        set_from_index(idx_);
        started_ = true;
        return true;
    }
    if (idx_ + 1 >= last_) return false;
    ++idx_;
    const felem q = static_cast<felem>(field_->q());
    for (unsigned j = 0; j < d_; ++j) {
        if (++c_[j] < q) return true;
        c_[j] = 0;
    }
    ++c_[d_];
    return true;
}

Rational zeta_value_q(std::uint64_t q, unsigned s) {
    if (s < 2) throw std::domain_error("zeta_value: pole at s = 1 (require s >= 2)");
    const Int qs = int_pow(Int(q), s - 1);
    return Rational(qs, qs - 1);
}

Rational zeta_value(const Field& f, unsigned s) { return zeta_value_q(f.q(), s); }

Int count_nth_power_free_q(std::uint64_t q, unsigned n, unsigned d) {
    if (n < 2) throw std::invalid_argument("count_nth_power_free: n must be >= 2");
    const Int qi(q);
    if (d < n) return (qi - 1) * int_pow(qi, d);
    return (qi - 1) * (int_pow(qi, d) - int_pow(qi, d - n + 1));
}

Int count_nth_power_free(const Field& f, unsigned n, unsigned d) {
    return count_nth_power_free_q(f.q(), n, d);
}

namespace polyops {

int degree_of(std::span<const felem> c) {
    for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i)
        if (c[std::size_t(i)] != 0) return i;
    return -1;
}

felem eval_span(const Field& F, std::span<const felem> c, felem x0) {
    felem r = 0;
    for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i) r = F.add(F.mul(r, x0), c[std::size_t(i)]);
    return r;
}

namespace {

// in-place euclid; returns the gcd degree, buffers are clobbered
int euclid_degree(const Field& F, std::vector<felem>& a, std::vector<felem>& b) {
    int da = degree_of(a), db = degree_of(b);
    if (da < db) {
        std::swap(a, b);
        std::swap(da, db);
    }
    while (db >= 0) {
        const felem lb_inv = F.inv(b[std::size_t(db)]);
        for (int i = da; i >= db; --i) {
            const felem c = F.mul(a[std::size_t(i)], lb_inv);
            if (c == 0) continue;
            for (int j = 0; j < db; ++j)
                a[std::size_t(i - db + j)] = F.sub(a[std::size_t(i - db + j)], F.mul(c, b[std::size_t(j)]));
            a[std::size_t(i)] = 0;
        }
        da = degree_of(a);
        std::swap(a, b);
        std::swap(da, db);
    }
    return da;
}

}  // namespace

namespace {

// GF(2) polynomials of degree <= 63 fit one word, so the whole multiplicity
// analysis runs on bitwise gcds there
inline int gf2_deg(std::uint64_t x) { return 63 - __builtin_clzll(x); }

std::uint64_t gf2_gcd(std::uint64_t a, std::uint64_t b) {
    while (b != 0) {
        const int db = gf2_deg(b);
        while (a != 0 && gf2_deg(a) >= db) a ^= b << (gf2_deg(a) - db);
        std::swap(a, b);
    }
    return a;
}

std::uint64_t gf2_div(std::uint64_t a, std::uint64_t b) {
    std::uint64_t q = 0;
    const int db = gf2_deg(b);
    while (a != 0 && gf2_deg(a) >= db) {
        const int sh = gf2_deg(a) - db;
        q |= std::uint64_t(1) << sh;
        a ^= b << sh;
    }
    return q;  // exact divisions only
}

std::uint64_t gf2_sqrt(std::uint64_t a) {  // a in F_2[x^2]
    std::uint64_t r = 0;
    for (int i = 0; 2 * i <= gf2_deg(a); ++i) r |= ((a >> (2 * i)) & 1u) << i;
    return r;
}

// multiplicity profile of a nonconstant word polynomial: largest multiplicity
// and the gcd of all multiplicities
void gf2_multiplicities(std::uint64_t f, unsigned scale, unsigned& maxm, unsigned& barg) {
    const std::uint64_t deriv = (f >> 1) & 0x5555555555555555ull;
    if (deriv == 0) {
        gf2_multiplicities(gf2_sqrt(f), 2 * scale, maxm, barg);
        return;
    }
    std::uint64_t c = gf2_gcd(f, deriv);
    std::uint64_t x = gf2_div(f, c);
    unsigned i = 1;
    while (gf2_deg(x) > 0) {
        const std::uint64_t y = gf2_gcd(x, c);
        if (gf2_deg(gf2_div(x, y)) > 0) {
            maxm = std::max(maxm, i * scale);
            barg = std::gcd(barg, i * scale);
        }
        x = y;
        c = gf2_div(c, y);
        ++i;
    }
    if (gf2_deg(c) > 0) gf2_multiplicities(gf2_sqrt(c), 2 * scale, maxm, barg);
}

}  // namespace

Shape analyze_shape(const Field& F, std::span<const felem> c, Scratch& ws, bool request_power) {
    Shape out{0, 0, 0, 0};
    const int d = degree_of(c);
    if (d < 0) throw std::domain_error("analyze_shape: zero polynomial");
    out.unit = c[std::size_t(d)];
    if (d == 0) return out;

    if (F.q() == 2 && d <= 63) {
        std::uint64_t bits = 0;
        for (int i = 0; i <= d; ++i) bits |= std::uint64_t(c[std::size_t(i)] & 1u) << i;
        unsigned maxm = 0, barg = 0;
        gf2_multiplicities(bits, 1, maxm, barg);
        out.max_multiplicity = maxm;
        out.bar_power = barg;
        out.power_over_field = barg;  // the only unit is 1
        return out;
    } else {
        ws.da.assign(std::size_t(d), 0);
        bool deriv_zero = true;
        for (int i = 1; i <= d; ++i) {
            const felem v =
                F.mul(c[std::size_t(i)], static_cast<felem>(static_cast<unsigned>(i) % F.p()));
            ws.da[std::size_t(i - 1)] = v;
            if (v != 0) deriv_zero = false;
        }
        if (!deriv_zero) {
            ws.ga.assign(c.begin(), c.end());
            ws.gb = ws.da;
            if (euclid_degree(F, ws.ga, ws.gb) == 0) {
                out.max_multiplicity = 1;
                out.bar_power = 1;
                out.power_over_field = 1;
                return out;
            }
        }
    }
    // slow path: full decomposition
    Poly f(F, std::vector<felem>(c.begin(), c.end()));
    const auto dec = squarefree_decompose(f);
    unsigned mm = 0, bp = 0;
    for (const auto& part : dec.parts) {
        mm = std::max(mm, part.multiplicity);
        bp = std::gcd(bp, part.multiplicity);
    }
    out.max_multiplicity = mm;
    out.bar_power = bp;
    if (request_power) {
        unsigned r = bp;
        for (; r >= 1; --r) {
            if (bp % r != 0) continue;
            if (F.is_rth_power(out.unit, r)) break;
        }
        out.power_over_field = std::max(1u, r);
    }
    return out;
}

std::pair<unsigned, felem> valuation_and_unit_span(const Field& F, std::span<const felem> c,
                                                   felem x0, std::vector<felem>& tmp) {
    const felem v = eval_span(F, c, x0);
    if (v != 0) return {0, v};
    tmp.assign(c.begin(), c.end());
    int e = degree_of(tmp);
    unsigned s = 0;
    while (true) {
        // synthetic division by (x - x0); remainder must vanish
        felem carry = tmp[std::size_t(e)];
        for (int i = e - 1; i >= 0; --i) {
            const felem ti = tmp[std::size_t(i)];
            tmp[std::size_t(i)] = carry;
            carry = F.add(ti, F.mul(x0, carry));
        }
        assert(carry == 0);
        --e;
        ++s;
        const felem val = eval_span(F, std::span<const felem>(tmp.data(), std::size_t(e) + 1), x0);
        if (val != 0) return {s, val};
    }
}

}  // namespace polyops

}  // namespace superell
