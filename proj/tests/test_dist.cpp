// SPDX-FileCopyrightText: 2026 superell developers
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <numeric>
#include <vector>

#include "superell/dist.hpp"
#include "superell/field.hpp"
#include "superell/poly.hpp"

using namespace superell;

namespace {

std::vector<std::uint64_t> prime_powers_upto(std::uint64_t bound) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t p = 2; p <= bound; ++p) {
        if (!is_prime(p)) continue;
        for (std::uint64_t q = p; q <= bound; q *= p) out.push_back(q);
    }
    return out;
}

}  // namespace

TEST_CASE("singular per-site distribution") {
    {
        const ExactDist d = xj_singular({5, 2, 2, Variant::Singular});
        CHECK(d.mass(0) == Rational(5, 12));
        CHECK(d.mass(1) == Rational(1, 6));
        CHECK(d.mass(2) == Rational(5, 12));
        CHECK(d.is_normalized());
    }
    {
        const ExactDist d = xj_singular({7, 3, 2, Variant::Singular});
        CHECK(d.mass(0) == Rational(7, 12));
        CHECK(d.mass(1) == Rational(1, 8));
        CHECK(d.mass(3) == Rational(7, 24));
    }
    {
        // gcd(m, q-1) = 1 degenerates to a point mass at 1
        const ExactDist d = xj_singular({4, 5, 2, Variant::Singular});
        CHECK(d.masses().size() == 1);
        CHECK(d.mass(1) == 1);
    }
    CHECK_THROWS_AS(xj_singular({4, 2, 2, Variant::Singular}), std::invalid_argument);
}

TEST_CASE("normalization per-site distribution") {
    {
        const ExactDist d = xj_normalization({7, 3, 3, Variant::Normalization});
        CHECK(d.mass(0) == Rational(98, 171));
        CHECK(d.mass(1) == Rational(24, 171));
        CHECK(d.mass(3) == Rational(49, 171));
        CHECK(d.is_normalized());
    }
    {
        // composite m: the valuation-weighted masses
        const ExactDist d = xj_normalization({5, 4, 4, Variant::Normalization});
        CHECK(d.mass(0) == Rational(385, 624));
        CHECK(d.mass(1) == Rational(104, 624));
        CHECK(d.mass(2) == Rational(10, 624));
        CHECK(d.mass(4) == Rational(125, 624));
        CHECK(d.is_normalized());
        // the unweighted zero mass alone exceeds 1
        CHECK(normalization_unweighted_zero_mass({5, 4, 4, Variant::Normalization}) ==
              Rational(625, 624));
    }
    {
        const ExactDist d = xj_normalization({4, 5, 2, Variant::Normalization});
        CHECK(d.masses().size() == 1);
        CHECK(d.mass(1) == 1);
    }
}

TEST_CASE("normalization, mean one, and support over the parameter grid") {
    for (const std::uint64_t q : prime_powers_upto(31)) {
        for (unsigned m = 2; m <= 12; ++m) {
            if (std::gcd(q, std::uint64_t(m)) != 1) continue;
            for (unsigned n = 2; n <= 12; ++n) {
                const LimitParams params{q, m, n, Variant::Singular};
                const ExactDist s = xj_singular(params);
                const ExactDist t = xj_normalization({q, m, n, Variant::Normalization});
                CHECK(s.total() == 1);
                CHECK(t.total() == 1);
                CHECK(s.mean() == 1);
                CHECK(t.mean() == 1);
                // support: singular in {0, 1, (m, q-1)}
                const std::int64_t g = static_cast<std::int64_t>(std::gcd(q - 1, std::uint64_t(m)));
                for (const auto& [k, mass] : s.masses()) CHECK((k == 0 || k == 1 || k == g));
                // normalization in {0} union {gcd(m, s, q-1)}
                for (const auto& [k, mass] : t.masses()) {
                    bool ok = (k == 0);
                    for (unsigned sv = 0; sv < n && !ok; ++sv) {
                        const std::uint64_t ns =
                            std::gcd(std::gcd(std::uint64_t(m), std::uint64_t(sv)), q - 1);
                        ok = (k == static_cast<std::int64_t>(ns));
                    }
                    CHECK(ok);
                }
            }
        }
    }
}

TEST_CASE("hyperelliptic and trigonal specializations") {
    for (const std::uint64_t q : prime_powers_upto(31)) {
        for (unsigned m = 2; m <= 12; ++m) {
            if (std::gcd(q, std::uint64_t(m)) != 1) continue;
            // n = 2 singular reproduces the smooth-curve closed form
            const ExactDist d = xj_singular({q, m, 2, Variant::Singular});
            const std::uint64_t g = std::gcd(q - 1, std::uint64_t(m));
            const Rational denom = 1 + q_pow(q, -1);
            ExactDist expected;
            expected.add_mass(0, (1 - Rational(1, Int(g))) / denom);
            expected.add_mass(1, q_pow(q, -1) / denom);
            expected.add_mass(static_cast<std::int64_t>(g), Rational(1, Int(g)) / denom);
            CHECK(d.masses() == expected.masses());
        }
        // m = 2, n = 2: hyperelliptic masses (1/2, q^{-1}, 1/2)/(1 + q^{-1})
        if (q % 2 == 1) {
            const ExactDist d = xj_singular({q, 2, 2, Variant::Singular});
            const Rational denom = 1 + q_pow(q, -1);
            CHECK(d.mass(0) == Rational(1, 2) / denom);
            CHECK(d.mass(1) == q_pow(q, -1) / denom);
            CHECK(d.mass(2) == Rational(1, 2) / denom);
        }
        // m = n = 3, q = 1 mod 3: the trigonal display
        if (q % 3 == 1) {
            const ExactDist d = xj_normalization({q, 3, 3, Variant::Normalization});
            const auto [ours, prior] = trigonal_contrast(q);
            CHECK(d.masses() == ours.masses());
        }
    }
}

TEST_CASE("trigonal contrast table") {
    const auto [ours, prior] = trigonal_contrast(7);
    CHECK(ours.mass(0) == Rational(98, 171));
    CHECK(prior.mass(0) == Rational(14, 27));
    CHECK(ours.total() == 1);
    CHECK(prior.total() == 1);
    CHECK_THROWS_AS(trigonal_contrast(5), std::invalid_argument);
}

TEST_CASE("total distribution by convolution") {
    ExactDist degenerate;
    degenerate.add_mass(1, 1);
    const ExactDist seven = total_dist(degenerate, 7);
    CHECK(seven.mass(7) == 1);

    const ExactDist x = xj_singular({3, 2, 2, Variant::Singular});
    const ExactDist t = total_dist(x, 3);
    CHECK(t.mass(0) == Rational(27, 512));  // (3/8)^3
    CHECK(t.total() == 1);
    CHECK(t.mean() == 3 * x.mean());

    // dynamic-programming oracle: sum joint probabilities over all tuples
    ExactDist oracle;
    const std::vector<std::int64_t> support{0, 1, 2};
    for (const std::int64_t a : support)
        for (const std::int64_t b : support)
            for (const std::int64_t c : support) {
                const std::int64_t key[3] = {a, b, c};
                oracle.add_mass(a + b + c, x.joint_prob(key));
            }
    CHECK(t.masses() == oracle.masses());
}

TEST_CASE("joint probabilities") {
    const ExactDist x = xj_singular({3, 2, 2, Variant::Singular});
    const std::int64_t all_two[3] = {2, 2, 2};
    CHECK(x.joint_prob(all_two) == Rational(27, 512));
    const std::int64_t outside[3] = {5, 5, 5};
    CHECK(x.joint_prob(outside) == 0);
    const std::int64_t mixed[3] = {0, 1, 2};
    CHECK(x.joint_prob(mixed) == x.mass(0) * x.mass(1) * x.mass(2));
}

TEST_CASE("interpolation main terms") {
    CHECK(interpolation_main_term(3, 2, 4, 1) == Rational(81, 2));
    // l = 0 matches the closed-form power-free count for d >= n
    for (unsigned d = 2; d <= 6; ++d)
        CHECK(interpolation_main_term(3, 2, d, 0) == Rational(count_nth_power_free_q(3, 2, d)));
    // refined term: prescribing valuations s shifts the degree
    const std::vector<unsigned> s{1, 0, 2};
    CHECK(refined_main_term(3, 2, 9, s) == interpolation_main_term(3, 2, 9 - 3, 3));
    CHECK_THROWS_AS(interpolation_main_term(3, 2, 1, 2), std::invalid_argument);
}

TEST_CASE("mass bookkeeping") {
    ExactDist d;
    d.add_mass(2, Rational(1, 2));
    d.add_mass(2, Rational(1, 2));
    CHECK(d.masses().size() == 1);  // merged
    CHECK(d.mass(2) == 1);
    d.add_mass(5, Rational(0));
    CHECK(d.masses().size() == 1);  // zero masses omitted
    CHECK_THROWS_AS(d.add_mass(1, Rational(-1, 2)), std::invalid_argument);
}
