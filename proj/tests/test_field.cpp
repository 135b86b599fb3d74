// SPDX-FileCopyrightText: 2026 superell developers
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <numeric>
#include <set>
#include <vector>

#include "superell/field.hpp"

using namespace superell;

namespace {

// prime powers p^k <= bound as (p, k)
std::vector<std::pair<std::uint32_t, std::uint32_t>> prime_powers_upto(std::uint32_t bound) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
    for (std::uint32_t p = 2; p <= bound; ++p) {
        if (!is_prime(p)) continue;
        std::uint64_t q = p;
        std::uint32_t k = 1;
        while (q <= bound) {
            out.emplace_back(p, k);
            q *= p;
            ++k;
        }
    }
    return out;
}

}  // namespace

TEST_CASE("prime field construction") {
    const auto F3 = make_field(3, 1);
    CHECK(F3->q() == 3);
    CHECK(F3->p() == 3);
    CHECK(F3->modulus_text().empty());
    // elements are exactly {0, 1, 2}
    CHECK(F3->is_element(2));
    CHECK_FALSE(F3->is_element(3));
}

TEST_CASE("F_4 modulus is the unique irreducible quadratic over F_2") {
    // oracle: a quadratic over F_2 is reducible iff it has a root
    std::vector<std::vector<unsigned>> irreducible;
    for (unsigned c0 = 0; c0 < 2; ++c0)
        for (unsigned c1 = 0; c1 < 2; ++c1) {
            bool has_root = false;
            for (unsigned x = 0; x < 2; ++x)
                if (((x * x) + c1 * x + c0) % 2 == 0) has_root = true;
            if (!has_root) irreducible.push_back({c0, c1});
        }
    REQUIRE(irreducible.size() == 1);
    CHECK(irreducible[0] == std::vector<unsigned>{1, 1});

    const auto F4 = make_field(2, 2);
    CHECK(F4->modulus_text() == "x^2+x+1 over F_2");
    CHECK(F4->q() == 4);
}

TEST_CASE("make_field rejects bad input") {
    CHECK_THROWS_AS(make_field(4, 1), std::invalid_argument);
    CHECK_THROWS_AS(make_field(1, 1), std::invalid_argument);
    CHECK_THROWS_AS(make_field(2, 20), std::length_error);  // 2^20 over the default bound
}

TEST_CASE("arithmetic examples") {
    const auto F7 = make_field(7, 1);
    CHECK(F7->mul(3, 5) == 1);
    CHECK(F7->add(5, 4) == 2);
    CHECK(F7->sub(2, 5) == 4);
    CHECK_THROWS_AS(F7->inv(0), std::domain_error);

    // F_4 with modulus x^2+x+1: x * x = x + 1 (encodings 2 and 3)
    const auto F4 = make_field(2, 2);
    CHECK(F4->mul(2, 2) == 3);
    CHECK(F4->add(2, 3) == 1);  // x + (x+1) = 1
}

TEST_CASE("field axioms and table consistency on all fields up to 64") {
    for (const auto& [p, k] : prime_powers_upto(64)) {
        const auto F = make_field(p, k);
        const std::uint32_t q = F->q();
        CAPTURE(q);

        // exp/log mutually inverse bijections on F_q^*
        std::set<felem> seen;
        for (std::uint32_t i = 0; i < q - 1; ++i) {
            const felem e = F->exp(i);
            CHECK(F->log(e) == i);
            seen.insert(e);
        }
        CHECK(seen.size() == q - 1);

        // generator has multiplicative order exactly q-1
        CHECK(F->element_order(F->generator()) == q - 1);

        for (felem a = 0; a < q; ++a) {
            CHECK(F->add(a, F->neg(a)) == 0);
            if (a != 0) CHECK(F->mul(a, F->inv(a)) == 1);
            // Frobenius fixes exactly the prime subfield (encodings < p)
            CHECK((F->frobenius(a) == a) == (a < p));
        }

        // spot-check associativity/distributivity on a few triples
        for (felem a = 0; a < std::min<felem>(q, 5); ++a)
            for (felem b = 0; b < std::min<felem>(q, 5); ++b)
                for (felem c = 0; c < std::min<felem>(q, 5); ++c) {
                    CHECK(F->mul(a, F->add(b, c)) == F->add(F->mul(a, b), F->mul(a, c)));
                    CHECK(F->mul(F->mul(a, b), c) == F->mul(a, F->mul(b, c)));
                }
    }
}

TEST_CASE("power residue examples") {
    const auto F7 = make_field(7, 1);
    CHECK(F7->is_rth_power(1, 3));
    CHECK_FALSE(F7->is_rth_power(3, 3));
    CHECK(F7->is_rth_power(6, 3));  // cubes in F_7^* are {1, 6}
    CHECK_THROWS_AS(F7->is_rth_power(0, 3), std::domain_error);

    const auto F5 = make_field(5, 1);
    CHECK(F5->is_rth_power(4, 2));  // 2^2 = 4
}

TEST_CASE("root_count examples") {
    const auto F7 = make_field(7, 1);
    CHECK(F7->root_count(0, 3) == 1);
    CHECK(F7->root_count(6, 3) == 3);  // roots {3, 5, 6}
    const auto F5 = make_field(5, 1);
    CHECK(F5->root_count(2, 3) == 1);  // cubing is a bijection, 3^3 = 27 = 2
}

TEST_CASE("root_count and is_rth_power against exhaustive enumeration") {
    for (const auto& [p, k] : prime_powers_upto(64)) {
        const auto F = make_field(p, k);
        const std::uint32_t q = F->q();
        CAPTURE(q);
        for (unsigned m = 1; m <= 12; ++m) {
            std::vector<std::uint32_t> counted(q, 0);
            for (felem y = 0; y < q; ++y) ++counted[F->pow(y, m)];
            std::uint64_t total = 0;
            for (felem a = 0; a < q; ++a) {
                CHECK(F->root_count(a, m) == counted[a]);
                total += F->root_count(a, m);
                if (a != 0) {
                    // membership in the enumerated set {b^m : b in F_q^*}
                    CHECK(F->is_rth_power(a, m) == (counted[a] > 0));
                }
            }
            CHECK(total == q);  // y -> y^m is total
        }
    }
}

TEST_CASE("pow matches repeated multiplication") {
    const auto F9 = make_field(3, 2);
    for (felem a = 0; a < 9; ++a) {
        felem acc = 1;
        for (unsigned e = 0; e <= 10; ++e) {
            CHECK(F9->pow(a, e) == acc);
            acc = F9->mul(acc, a);
        }
    }
}

TEST_CASE("FieldElement wrapper rejects mixed fields") {
    const auto F5 = make_field(5, 1);
    const auto F7 = make_field(7, 1);
    const FieldElement a(*F5, 3), b(*F5, 4);
    CHECK((a * b).value() == 2);
    CHECK((a + b).value() == 2);
    const FieldElement c(*F7, 3);
    CHECK_THROWS_AS((void)(a + c), std::invalid_argument);
    CHECK_THROWS_AS(FieldElement(*F5, 5), std::invalid_argument);
}
