// SPDX-FileCopyrightText: 2026 superell developers
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <string>

#include "superell/experiment.hpp"

using namespace superell;
using nlohmann::json;

namespace {

json strip_runtime(json doc) {
    doc["runtime_ms"] = 0;
    return doc;
}

std::uint64_t hist_count(const json& doc, std::int64_t outcome) {
    for (const auto& row : doc.at("histogram"))
        if (row.at("outcome").is_number() && row.at("outcome").get<std::int64_t>() == outcome)
            return row.at("count").get<std::uint64_t>();
    return 0;
}

}  // namespace

TEST_CASE("exhaustive scan bookkeeping at q=3, m=2, n=2, d=2") {
    ExperimentConfig cfg;
    cfg.p = 3;
    cfg.m = 2;
    cfg.n = 2;
    cfg.d = 2;
    const auto rep = run_exhaustive(cfg);
    CHECK(rep.doc.at("trials").get<std::uint64_t>() == 12);  // (q-1)(q^2 - q)
    // empirical mean is exactly q at this degree
    CHECK(rep.doc.at("mean").at("num").get<std::string>() == "3");
    CHECK(rep.doc.at("mean").at("den").get<std::string>() == "1");
    CHECK(rep.doc.at("field").at("modulus").get<std::string>().empty());
    CHECK(rep.doc.at("undefined_count").get<std::uint64_t>() == 0);
}

TEST_CASE("trials equal the closed-form count") {
    for (const unsigned d : {3u, 4u, 5u}) {
        ExperimentConfig cfg;
        cfg.p = 3;
        cfg.m = 2;
        cfg.n = 2;
        cfg.d = d;
        const auto rep = run_exhaustive(cfg);
        CHECK(Int(rep.doc.at("trials").get<std::uint64_t>()) == count_nth_power_free_q(3, 2, d));
    }
}

TEST_CASE("csv format") {
    ExperimentConfig cfg;
    cfg.p = 3;
    cfg.m = 2;
    cfg.n = 2;
    cfg.d = 5;
    const auto rep = run_exhaustive(cfg);
    CHECK(rep.doc.at("trials").get<std::uint64_t>() == 324);
    const std::string csv = rep.csv_text();
    CHECK(csv.rfind("outcome,count,empirical,theory\n", 0) == 0);
    // counts across rows sum to the trials
    std::uint64_t sum = 0;
    std::size_t pos = csv.find('\n') + 1;
    while (pos < csv.size()) {
        const std::size_t c1 = csv.find(',', pos);
        const std::size_t c2 = csv.find(',', c1 + 1);
        sum += std::stoull(csv.substr(c1 + 1, c2 - c1 - 1));
        pos = csv.find('\n', pos) + 1;
    }
    CHECK(sum == 324);
}

TEST_CASE("subset filters") {
    // n = 3 admits all 18 degree-2 polynomials over F_3; the c g^2 forms are
    // geometrically reducible for m = 2 and there are exactly 6 of them
    ExperimentConfig cfg;
    cfg.p = 3;
    cfg.m = 2;
    cfg.n = 3;
    cfg.d = 2;
    const auto all = run_exhaustive(cfg);
    CHECK(all.doc.at("trials").get<std::uint64_t>() == 18);
    cfg.filter = SubsetFilter::GeometricallyIrreducible;
    const auto geom = run_exhaustive(cfg);
    CHECK(geom.doc.at("trials").get<std::uint64_t>() == 12);
    // with n = 2 the admitted family is already square-free, nothing is cut
    cfg.n = 2;
    const auto geom2 = run_exhaustive(cfg);
    CHECK(geom2.doc.at("trials").get<std::uint64_t>() == 12);

    // filter monotonicity: pointwise <= the unfiltered histogram
    ExperimentConfig big;
    big.p = 5;
    big.m = 2;
    big.n = 3;
    big.d = 3;
    const auto unfiltered = run_exhaustive(big);
    big.filter = SubsetFilter::Irreducible;
    const auto filtered = run_exhaustive(big);
    for (const auto& row : filtered.doc.at("histogram")) {
        const auto k = row.at("outcome").get<std::int64_t>();
        CHECK(row.at("count").get<std::uint64_t>() <= hist_count(unfiltered.doc, k));
    }
}

TEST_CASE("partition soundness: thread count does not change the report") {
    ExperimentConfig cfg;
    cfg.p = 3;
    cfg.m = 2;
    cfg.n = 2;
    cfg.d = 6;
    cfg.threads = 1;
    const auto one = run_exhaustive(cfg);
    cfg.threads = 3;
    const auto three = run_exhaustive(cfg);
    cfg.threads = 7;
    const auto seven = run_exhaustive(cfg);
    CHECK(strip_runtime(one.doc) == strip_runtime(three.doc));
    CHECK(strip_runtime(one.doc) == strip_runtime(seven.doc));
}

TEST_CASE("monte carlo determinism and acceptance rate") {
    ExperimentConfig cfg;
    cfg.p = 3;
    cfg.m = 2;
    cfg.n = 2;
    cfg.d = 10;
    cfg.samples = 20000;
    cfg.seed = 424242;
    const auto a = run_montecarlo(cfg);
    const auto b = run_montecarlo(cfg);
    CHECK(strip_runtime(a.doc).dump() == strip_runtime(b.doc).dump());
    cfg.threads = 4;
    const auto c = run_montecarlo(cfg);
    CHECK(strip_runtime(a.doc).dump() == strip_runtime(c.doc).dump());
    cfg.seed = 7;
    const auto d = run_montecarlo(cfg);
    CHECK(strip_runtime(a.doc).dump() != strip_runtime(d.doc).dump());

    // acceptance rate approaches 1 - q^(1-n) = 2/3 (exact mean for d >= n)
    const double draws = static_cast<double>(a.doc.at("draws").get<std::uint64_t>());
    const double rate = 20000.0 / draws;
    const double sigma = std::sqrt((2.0 / 3.0) * (1.0 / 3.0) / draws);
    CHECK(std::abs(rate - 2.0 / 3.0) <= 5 * sigma);
}

TEST_CASE("monte carlo matches exhaustive frequencies") {
    ExperimentConfig cfg;
    cfg.p = 5;
    cfg.m = 2;
    cfg.n = 2;
    cfg.d = 4;
    const auto exact = run_exhaustive(cfg);
    cfg.samples = 50000;
    cfg.seed = 99;
    const auto mc = run_montecarlo(cfg);
    const double trials_e = exact.doc.at("trials").get<double>();
    const double trials_m = static_cast<double>(cfg.samples);
    for (const auto& row : exact.doc.at("histogram")) {
        const auto k = row.at("outcome").get<std::int64_t>();
        const double pe = row.at("count").get<double>() / trials_e;
        const double pm = static_cast<double>(hist_count(mc.doc, k)) / trials_m;
        const double sigma = std::sqrt(pe * (1 - pe) / trials_m);
        CHECK(std::abs(pm - pe) <= 5 * sigma + 1e-12);
    }
}

TEST_CASE("tv distance") {
    // hand case: empirical (1/2, 1/2) on {0,1} vs theory (3/8, 1/4, 3/8)
    Histogram h;
    h.counts[{0}] = 1;
    h.counts[{1}] = 1;
    h.trials = 2;
    const ExactDist th = xj_singular({3, 2, 2, Variant::Singular});
    const auto [tv, tvf] = tv_distance(h, th);
    CHECK(tv == Rational(3, 8));
    CHECK(tvf == doctest::Approx(0.375));

    Histogram empty;
    CHECK_THROWS_AS(tv_distance(empty, th), std::domain_error);

    // identical distributions: zero distance
    Histogram exact;
    exact.counts[{0}] = 3;
    exact.counts[{1}] = 2;
    exact.counts[{2}] = 3;
    exact.trials = 8;
    CHECK(tv_distance(exact, th).first == 0);

    // disjoint supports: distance 1
    Histogram far;
    far.counts[{9}] = 5;
    far.trials = 5;
    CHECK(tv_distance(far, th).first == 1);
}

TEST_CASE("counting verification suite") {
    CountingVerifyConfig cfg;
    cfg.p = 3;
    cfg.n_lo = 2;
    cfg.n_hi = 4;
    cfg.d_lo = 0;
    cfg.d_hi = 8;
    const auto rep = verify_counting_identities(cfg);
    CHECK(rep.ok);
    CHECK(rep.doc.at("failures").get<unsigned>() == 0);
    // the d = 2, n = 2 row shows the exact identity 12 = 12
    bool found = false;
    for (const auto& row : rep.doc.at("rows")) {
        if (row.at("d") == 2 && row.at("n") == 2) {
            CHECK(row.at("brute").get<std::string>() == "12");
            CHECK(row.at("closed").get<std::string>() == "12");
            found = true;
        }
        if (row.at("d") == 1 && row.at("n") == 2) CHECK(row.at("brute").get<std::string>() == "6");
    }
    CHECK(found);
}

TEST_CASE("interpolation envelope with a direct oracle cross-check") {
    CountingVerifyConfig cfg;
    cfg.p = 3;
    cfg.n_lo = 2;
    cfg.n_hi = 2;
    cfg.d_lo = 6;
    cfg.d_hi = 8;
    cfg.interpolation_ls = {1, 2};
    cfg.tuples_per_case = 10;
    cfg.seed = 5;
    const auto rep = verify_counting_identities(cfg);
    CHECK(rep.ok);
    CHECK(rep.doc.at("max_ratio").get<double>() >= 0.0);

    // direct oracle for one case: d = 6, l = 1, x = 0, a = 1
    const auto F = make_field(3, 1);
    std::uint64_t brute = 0;
    DegreeStream st(*F, 6, std::uint64_t(1) << 40);
    while (st.next()) {
        const Poly f = st.current();
        if (!is_squarefree(f)) continue;
        if (eval(f, 0) == 1) ++brute;
    }
    const Rational main = interpolation_main_term(3, 2, 6, 1);
    CHECK(main == Rational(729, 2));
    const Rational err = abs(Rational(Int(brute)) - main);
    CHECK(err <= Rational(4 * 81));  // 4 q^(d/n + 1) = 4 * 3^4
}

TEST_CASE("local rule verification suite") {
    LocalVerifyConfig cfg;
    cfg.fields = {{5, 1}, {3, 1}};
    cfg.m_max = 4;
    cfg.s_max = 4;
    const auto rep = verify_local_rule(cfg);
    CHECK(rep.ok);
    CHECK(rep.doc.at("failures").get<unsigned>() == 0);
    CHECK(rep.doc.at("skipped").get<unsigned>() == 0);
    // the q=5, m=2, s=2 rows: a=1 gives 2, a=2 gives 0
    for (const auto& row : rep.doc.at("rows")) {
        if (row.at("q") == 5 && row.at("m") == 2 && row.at("s") == 2) {
            if (row.at("a") == 1) CHECK(row.at("closed") == 2);
            if (row.at("a") == 2) CHECK(row.at("closed") == 0);
        }
    }
}

TEST_CASE("convergence scan emits a TV table") {
    ConvergenceConfig cfg;
    cfg.base.p = 3;
    cfg.base.m = 2;
    cfg.base.n = 2;
    cfg.d_lo = 4;
    cfg.d_hi = 6;
    const auto rep = convergence_scan(cfg);
    CHECK(rep.ok);  // informational without a gate
    CHECK(rep.doc.at("rows").size() == 3);
    for (const auto& row : rep.doc.at("rows")) CHECK(row.at("tv").contains("float"));
}

TEST_CASE("normalization-variant scan counts undefined statistics") {
    // m = 2, n = 3, d = 2 over F_3: the 6 reducible c g^2 forms are admitted
    // but carry no normalization statistic
    ExperimentConfig cfg;
    cfg.p = 3;
    cfg.m = 2;
    cfg.n = 3;
    cfg.d = 2;
    cfg.variant = Variant::Normalization;
    const auto rep = run_exhaustive(cfg);
    CHECK(rep.doc.at("trials").get<std::uint64_t>() == 18);
    CHECK(rep.doc.at("undefined_count").get<std::uint64_t>() == 6);
}

TEST_CASE("scan statistics match per-curve profiles") {
    const auto F = make_field(3, 1);
    {
        // joint statistic, singular variant
        ExperimentConfig cfg;
        cfg.p = 3;
        cfg.m = 2;
        cfg.n = 2;
        cfg.d = 3;
        cfg.statistic = Statistic::Joint;
        const auto rep = run_exhaustive(cfg);
        std::map<std::vector<std::int32_t>, std::uint64_t> expect;
        DegreeStream st(*F, 3, std::uint64_t(1) << 40);
        while (st.next()) {
            const Poly f = st.current();
            if (!is_nth_power_free(f, 2)) continue;
            const auto pr = profile(SuperellipticModel(2, f), 2);
            std::vector<std::int32_t> key;
            for (const auto& site : pr.locals)
                key.push_back(static_cast<std::int32_t>(site.affine_count));
            ++expect[key];
        }
        std::map<std::vector<std::int32_t>, std::uint64_t> got;
        for (const auto& row : rep.doc.at("histogram"))
            got[row.at("outcome").get<std::vector<std::int32_t>>()] =
                row.at("count").get<std::uint64_t>();
        CHECK(got == expect);
    }
    {
        // total statistic, normalization variant, with undefined bookkeeping
        ExperimentConfig cfg;
        cfg.p = 3;
        cfg.m = 2;
        cfg.n = 3;
        cfg.d = 3;
        cfg.variant = Variant::Normalization;
        const auto rep = run_exhaustive(cfg);
        std::map<std::int64_t, std::uint64_t> expect;
        std::uint64_t undefined = 0, admitted = 0;
        DegreeStream st(*F, 3, std::uint64_t(1) << 40);
        while (st.next()) {
            const Poly f = st.current();
            if (!is_nth_power_free(f, 3)) continue;
            ++admitted;
            const auto pr = profile(SuperellipticModel(2, f), 3);
            if (!pr.total_normalized) {
                ++undefined;
                continue;
            }
            ++expect[static_cast<std::int64_t>(*pr.total_normalized)];
        }
        CHECK(rep.doc.at("trials").get<std::uint64_t>() == admitted);
        CHECK(rep.doc.at("undefined_count").get<std::uint64_t>() == undefined);
        for (const auto& row : rep.doc.at("histogram"))
            CHECK(row.at("count").get<std::uint64_t>() ==
                  expect.at(row.at("outcome").get<std::int64_t>()));
    }
}

TEST_CASE("run_from_json dispatch") {
    {
        const auto rep = run_from_json(
            R"({"command":"theory","p":7,"m":3,"n":3,"variant":"normalization"})");
        const auto& pmf = rep.doc.at("pmf");
        CHECK(Rational(Int(pmf.at("0").at("num").get<std::string>()),
                       Int(pmf.at("0").at("den").get<std::string>())) == Rational(98, 171));
        CHECK(Rational(Int(pmf.at("1").at("num").get<std::string>()),
                       Int(pmf.at("1").at("den").get<std::string>())) == Rational(24, 171));
        CHECK(Rational(Int(pmf.at("3").at("num").get<std::string>()),
                       Int(pmf.at("3").at("den").get<std::string>())) == Rational(49, 171));
    }
    {
        const auto rep = run_from_json(R"({"command":"scan","p":3,"m":2,"n":2,"d":2})");
        CHECK(rep.doc.at("trials").get<std::uint64_t>() == 12);
    }
    {
        const auto rep = run_from_json(R"({"command":"contrast","p":7})");
        CHECK(rep.doc.at("q") == 7);
        CHECK(rep.doc.contains("degree_limit"));
        CHECK(rep.doc.contains("signature_limit"));
    }
    CHECK_THROWS_AS(run_from_json(R"({"command":"bogus"})"), std::invalid_argument);
}

TEST_CASE("budget guard") {
    ExperimentConfig cfg;
    cfg.p = 3;
    cfg.m = 2;
    cfg.n = 2;
    cfg.d = 20;
    CHECK_THROWS_AS(run_exhaustive(cfg), std::length_error);

    // SUPERELL_BUDGET overrides the configured budget
    cfg.d = 4;
    setenv("SUPERELL_BUDGET", "10", 1);
    CHECK_THROWS_AS(run_exhaustive(cfg), std::length_error);
    setenv("SUPERELL_BUDGET", "1000000", 1);
    CHECK_NOTHROW(run_exhaustive(cfg));
    setenv("SUPERELL_BUDGET", "bogus", 1);
    CHECK_THROWS_AS(run_exhaustive(cfg), std::invalid_argument);
    unsetenv("SUPERELL_BUDGET");
}

TEST_CASE("monte carlo rejection cap guards dead configs") {
    ExperimentConfig cfg;
    cfg.p = 3;
    cfg.m = 2;
    cfg.n = 2;
    cfg.d = 8;
    cfg.samples = 50;
    cfg.seed = 3;
    cfg.rejection_cap = 1;  // acceptance is 2/3 per draw, some sample will miss
    CHECK_THROWS_AS(run_montecarlo(cfg), std::length_error);
}

TEST_CASE("profile command serializes per-x records") {
    const auto rep = run_from_json(R"({"command":"profile","p":5,"m":2,"n":2,"f":"0,1,1"})");
    // f = x^2 + x = x (x + 1): square-free, so normalized = affine everywhere
    const auto& pr = rep.doc.at("profile");
    CHECK(pr.at("smooth").get<bool>());
    CHECK(pr.at("geometrically_irreducible").get<bool>());
    CHECK(pr.at("sites").size() == 5);
    std::uint64_t total = 0;
    for (const auto& site : pr.at("sites")) {
        CHECK(site.at("affine") == site.at("normalized"));
        total += site.at("affine").get<std::uint64_t>();
    }
    CHECK(total == pr.at("total_affine").get<std::uint64_t>());

    // geometrically reducible: normalization marked undefined
    const auto red = run_from_json(R"({"command":"profile","p":5,"m":2,"n":3,"f":"0,0,1"})");
    const auto& pr2 = red.doc.at("profile");
    CHECK_FALSE(pr2.at("geometrically_irreducible").get<bool>());
    for (const auto& site : pr2.at("sites")) CHECK(site.at("normalized").is_string());
    CHECK(pr2.at("total_normalized").is_null());
}

TEST_CASE("joint statistic stores sparse vectors") {
    ExperimentConfig cfg;
    cfg.p = 3;
    cfg.m = 2;
    cfg.n = 2;
    cfg.d = 4;
    cfg.statistic = Statistic::Joint;
    const auto rep = run_exhaustive(cfg);
    CHECK(rep.doc.at("trials").get<std::uint64_t>() == 108);
    std::uint64_t sum = 0;
    for (const auto& row : rep.doc.at("histogram")) {
        CHECK(row.at("outcome").is_array());
        CHECK(row.at("outcome").size() == 3);
        sum += row.at("count").get<std::uint64_t>();
    }
    CHECK(sum == 108);
    CHECK_FALSE(rep.doc.at("tv").is_null());  // 3 sites: product support fits
}
