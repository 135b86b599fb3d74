// SPDX-FileCopyrightText: 2026 superell developers
// SPDX-License-Identifier: Apache-2.0

#include "superell/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <numeric>
#include <span>
#include <stdexcept>
#include <thread>

namespace superell {

const char* library_version() { return "0.1.0"; }

using nlohmann::json;

namespace {

// ---------------------------------------------------------------------------
// small helpers
// ---------------------------------------------------------------------------

std::uint64_t resolve_budget(std::uint64_t configured) {
    if (const char* env = std::getenv("SUPERELL_BUDGET")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end == env || *end != '\0' || v == 0)
            throw std::invalid_argument("SUPERELL_BUDGET: not a positive integer");
        return v;
    }
    return configured;
}

const char* variant_name(Variant v) {
    return v == Variant::Singular ? "singular" : "normalization";
}
const char* statistic_name(Statistic s) {
    switch (s) {
        case Statistic::Total: return "total";
        case Statistic::Marginal: return "marginal";
        case Statistic::Joint: return "joint";
    }
    return "total";
}
const char* filter_name(SubsetFilter f) {
    switch (f) {
        case SubsetFilter::All: return "all";
        case SubsetFilter::GeometricallyIrreducible: return "geometrically-irreducible";
        case SubsetFilter::Irreducible: return "irreducible";
    }
    return "all";
}

Variant variant_from(const std::string& s) {
    if (s == "singular") return Variant::Singular;
    if (s == "normalization") return Variant::Normalization;
    throw std::invalid_argument("unknown variant: " + s);
}
Statistic statistic_from(const std::string& s) {
    if (s == "total") return Statistic::Total;
    if (s == "marginal") return Statistic::Marginal;
    if (s == "joint") return Statistic::Joint;
    throw std::invalid_argument("unknown statistic: " + s);
}
SubsetFilter filter_from(const std::string& s) {
    if (s == "all") return SubsetFilter::All;
    if (s == "geometrically-irreducible" || s == "geom-irreducible")
        return SubsetFilter::GeometricallyIrreducible;
    if (s == "irreducible") return SubsetFilter::Irreducible;
    throw std::invalid_argument("unknown filter: " + s);
}

json rational_json(const Rational& r) {
    return json{{"num", numerator(r).str()}, {"den", denominator(r).str()}};
}

json outcome_json(const std::vector<std::int32_t>& key) {
    if (key.size() == 1) return json(key[0]);
    return json(key);
}

class Stopwatch {
public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    std::int64_t ms() const {
        return std::chrono::duration_cast<std::chrono::milliseconds>(
                   std::chrono::steady_clock::now() - start_)
            .count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

std::vector<std::pair<std::uint64_t, std::uint64_t>> split_ranges(std::uint64_t total, unsigned t) {
    const unsigned T = std::max(1u, t);
    std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
    const std::uint64_t base = total / T, rem = total % T;
    std::uint64_t start = 0;
    for (unsigned i = 0; i < T; ++i) {
        const std::uint64_t len = base + (i < rem ? 1 : 0);
        out.emplace_back(start, start + len);
        start += len;
    }
    return out;
}

template <typename Shard, typename Fn>
std::vector<Shard> run_sharded(std::uint64_t total, unsigned threads, Fn&& fn) {
    const auto ranges = split_ranges(total, threads);
    std::vector<Shard> results(ranges.size());
    if (ranges.size() == 1) {
        results[0] = fn(ranges[0].first, ranges[0].second);
        return results;
    }
    std::vector<std::thread> pool;
    pool.reserve(ranges.size());
    for (std::size_t i = 0; i < ranges.size(); ++i)
        pool.emplace_back([&, i] { results[i] = fn(ranges[i].first, ranges[i].second); });
    for (auto& th : pool) th.join();
    return results;
}

// ---------------------------------------------------------------------------
// scan kernel
// ---------------------------------------------------------------------------

// Per-valuation local point-count data, precomputed so the hot loop is pure
// table lookups. Index s ranges over [0, n) (admitted polynomials cannot have
// higher multiplicities).
struct SiteTables {
    unsigned g_mq = 1;
    std::vector<unsigned> count_if_power;  // [s] -> gcd(d0(s), q-1)
    std::vector<std::vector<char>> is_power;  // [s][a]
};

SiteTables build_site_tables(const Field& F, unsigned m, unsigned n) {
    SiteTables t;
    t.g_mq = static_cast<unsigned>(std::gcd(std::uint64_t(m), std::uint64_t(F.q() - 1)));
    t.count_if_power.resize(n);
    t.is_power.assign(n, std::vector<char>(F.q(), 0));
    for (unsigned s = 0; s < n; ++s) {
        const unsigned d0 = (s == 0) ? m : static_cast<unsigned>(std::gcd(m, s));
        t.count_if_power[s] =
            static_cast<unsigned>(std::gcd(std::uint64_t(d0), std::uint64_t(F.q() - 1)));
        for (felem a = 1; a < F.q(); ++a) t.is_power[s][a] = F.is_rth_power(a, d0) ? 1 : 0;
    }
    return t;
}

struct ShardOut {
    std::vector<std::uint64_t> scalar;
    std::map<std::vector<std::int32_t>, std::uint64_t> joint;
    std::uint64_t admitted = 0;
    std::uint64_t rejected_power = 0;
    std::uint64_t filtered_out = 0;
    std::uint64_t undefined = 0;
    std::uint64_t draws = 0;  // Monte Carlo only
};

struct ScanContext {
    const ExperimentConfig& cfg;
    const Field& F;
    const SiteTables& tab;
};

// statistic of one admitted polynomial; returns false when undefined
bool eval_statistic(const ScanContext& ctx, std::span<const felem> c, bool geom,
                    polyops::Scratch& ws, std::vector<felem>& valbuf,
                    std::vector<std::int32_t>& sites, std::int32_t& scalar_out) {
    const Field& F = ctx.F;
    const unsigned q = F.q();
    const auto& tab = ctx.tab;
    const bool normalization = ctx.cfg.variant == Variant::Normalization;
    if (normalization && !geom) return false;

    auto site_count = [&](felem x0) -> std::int32_t {
        const felem v = polyops::eval_span(F, c, x0);
        if (!normalization) {
            if (v == 0) return 1;
            return tab.is_power[0][v] ? static_cast<std::int32_t>(tab.g_mq) : 0;
        }
        if (v != 0) return tab.is_power[0][v] ? static_cast<std::int32_t>(tab.count_if_power[0]) : 0;
        const auto [s, a] = polyops::valuation_and_unit_span(F, c, x0, valbuf);
        return tab.is_power[s][a] ? static_cast<std::int32_t>(tab.count_if_power[s]) : 0;
    };

    switch (ctx.cfg.statistic) {
        case Statistic::Total: {
            std::int32_t total = 0;
            for (felem x0 = 0; x0 < q; ++x0) total += site_count(x0);
            scalar_out = total;
            return true;
        }
        case Statistic::Marginal:
            scalar_out = site_count(ctx.cfg.marginal_x);
            return true;
        case Statistic::Joint: {
            sites.resize(q);
            for (felem x0 = 0; x0 < q; ++x0) sites[x0] = site_count(x0);
            scalar_out = -1;
            return true;
        }
    }
    (void)ws;
    return false;
}

// admit/filter one polynomial; returns true when it belongs to the sampled
// family, with geom set for the statistic stage
bool admit(const ScanContext& ctx, std::span<const felem> c, polyops::Scratch& ws, bool& geom,
           ShardOut& out) {
    const bool need_power = ctx.cfg.filter == SubsetFilter::Irreducible;
    const auto shape = polyops::analyze_shape(ctx.F, c, ws, need_power);
    if (shape.max_multiplicity >= ctx.cfg.n) {
        ++out.rejected_power;
        return false;
    }
    geom = std::gcd(std::uint64_t(ctx.cfg.m), std::uint64_t(shape.bar_power)) == 1;
    if (ctx.cfg.filter == SubsetFilter::GeometricallyIrreducible && !geom) {
        ++out.filtered_out;
        return false;
    }
    if (ctx.cfg.filter == SubsetFilter::Irreducible &&
        !binomial_criterion_irreducible(ctx.F, ctx.cfg.m, shape.bar_power, shape.power_over_field,
                                        shape.unit)) {
        ++out.filtered_out;
        return false;
    }
    return true;
}

void accumulate(const ScanContext& ctx, std::span<const felem> c, bool geom, polyops::Scratch& ws,
                std::vector<felem>& valbuf, std::vector<std::int32_t>& sites, ShardOut& out) {
    ++out.admitted;
    std::int32_t scalar = 0;
    if (!eval_statistic(ctx, c, geom, ws, valbuf, sites, scalar)) {
        ++out.undefined;
        return;
    }
    if (ctx.cfg.statistic == Statistic::Joint) {
        ++out.joint[sites];
    } else {
        if (static_cast<std::size_t>(scalar) >= out.scalar.size())
            out.scalar.resize(std::size_t(scalar) + 1, 0);
        ++out.scalar[std::size_t(scalar)];
    }
}

ShardOut scan_exhaustive_range(const ScanContext& ctx, std::uint64_t first, std::uint64_t last) {
    ShardOut out;
    out.scalar.assign(std::size_t(ctx.F.q()) * ctx.cfg.m + 2, 0);
    DegreeStream st(ctx.F, ctx.cfg.d, first, last);
    polyops::Scratch ws;
    std::vector<felem> valbuf;
    std::vector<std::int32_t> sites;
    while (st.next()) {
        bool geom = false;
        if (!admit(ctx, st.coeffs(), ws, geom, out)) continue;
        accumulate(ctx, st.coeffs(), geom, ws, valbuf, sites, out);
    }
    return out;
}

ShardOut scan_montecarlo_range(const ScanContext& ctx, std::uint64_t first, std::uint64_t last) {
    ShardOut out;
    out.scalar.assign(std::size_t(ctx.F.q()) * ctx.cfg.m + 2, 0);
    polyops::Scratch ws;
    std::vector<felem> valbuf;
    std::vector<std::int32_t> sites;
    const std::uint64_t q = ctx.F.q();
    std::vector<felem> c(ctx.cfg.d + 1, 0);
    for (std::uint64_t i = first; i < last; ++i) {
        SplitMix64 gen(stream_seed(ctx.cfg.seed, i));
        std::uint64_t attempts = 0;
        while (true) {
            if (++attempts > ctx.cfg.rejection_cap)
                throw std::length_error("run_montecarlo: rejection cap exceeded");
            ++out.draws;
            for (unsigned j = 0; j < ctx.cfg.d; ++j) c[j] = static_cast<felem>(gen.below(q));
            c[ctx.cfg.d] = static_cast<felem>(1 + gen.below(q - 1));
            bool geom = false;
            ShardOut probe;  // rejected draws are not part of the family
            if (!admit(ctx, c, ws, geom, probe)) continue;
            accumulate(ctx, c, geom, ws, valbuf, sites, out);
            break;
        }
    }
    return out;
}

Histogram merge_shards(const std::vector<ShardOut>& shards, std::uint64_t* draws_out) {
    Histogram h;
    std::uint64_t draws = 0;
    std::map<std::vector<std::int32_t>, std::uint64_t> merged;
    std::vector<std::uint64_t> scalar;
    for (const auto& s : shards) {
        h.trials += s.admitted;
        h.undefined += s.undefined;
        draws += s.draws;
        if (scalar.size() < s.scalar.size()) scalar.resize(s.scalar.size(), 0);
        for (std::size_t i = 0; i < s.scalar.size(); ++i) scalar[i] += s.scalar[i];
        for (const auto& [k, v] : s.joint) merged[k] += v;
    }
    for (std::size_t i = 0; i < scalar.size(); ++i)
        if (scalar[i] > 0) h.counts[{static_cast<std::int32_t>(i)}] = scalar[i];
    for (const auto& [k, v] : merged) h.counts[k] += v;
    if (draws_out) *draws_out = draws;
    return h;
}

// ---------------------------------------------------------------------------
// reports
// ---------------------------------------------------------------------------

// Thread count is deliberately not echoed: results are independent of the
// shard layout and reports must be byte-identical across thread counts.
json config_echo(const ExperimentConfig& cfg, Mode mode) {
    return json{{"p", cfg.p},
                {"k", cfg.k},
                {"m", cfg.m},
                {"n", cfg.n},
                {"variant", variant_name(cfg.variant)},
                {"statistic", statistic_name(cfg.statistic)},
                {"marginal_x", cfg.marginal_x},
                {"d", cfg.d},
                {"mode", mode == Mode::Exhaustive ? "exhaustive" : "montecarlo"},
                {"samples", cfg.samples},
                {"seed", cfg.seed},
                {"filter", filter_name(cfg.filter)},
                {"budget", cfg.budget},
                {"rejection_cap", cfg.rejection_cap},
                {"rng", kRngName}};
}

ExactDist site_theory(const ExperimentConfig& cfg, std::uint64_t q) {
    const LimitParams params{q, cfg.m, cfg.n, cfg.variant};
    return cfg.variant == Variant::Singular ? xj_singular(params) : xj_normalization(params);
}

// TV over the product support for the joint statistic; nullopt when the
// support is too large to enumerate
std::optional<std::pair<Rational, double>> joint_tv(const Histogram& hist, const ExactDist& xj,
                                                    std::uint64_t q) {
    if (hist.trials == 0) return std::nullopt;
    std::vector<std::int64_t> support;
    for (const auto& [k, v] : xj.masses()) support.push_back(k);
    double size = 1;
    for (std::uint64_t i = 0; i < q; ++i) {
        size *= static_cast<double>(support.size());
        if (size > 200000) return std::nullopt;
    }
    Rational sum = 0;
    Rational covered_emp = 0;
    std::vector<std::size_t> idx(q, 0);
    std::vector<std::int32_t> key(q);
    while (true) {
        Rational mass = 1;
        for (std::uint64_t i = 0; i < q; ++i) {
            key[i] = static_cast<std::int32_t>(support[idx[i]]);
            mass *= xj.mass(support[idx[i]]);
        }
        Rational emp = 0;
        const auto it = hist.counts.find(key);
        if (it != hist.counts.end()) emp = Rational(Int(it->second), Int(hist.trials));
        covered_emp += emp;
        sum += abs(emp - mass);
        // odometer over the support tuples
        std::uint64_t pos = 0;
        while (pos < q && ++idx[pos] == support.size()) {
            idx[pos] = 0;
            ++pos;
        }
        if (pos == q) break;
    }
    // empirical tuples outside the theory support
    Rational total_emp(Int(hist.occurrences()), Int(hist.trials));
    sum += total_emp - covered_emp;
    const Rational tv = sum / 2;
    return std::make_pair(tv, to_double(tv));
}

json histogram_rows(const Histogram& hist) {
    json rows = json::array();
    for (const auto& [k, v] : hist.counts) rows.push_back(json{{"outcome", outcome_json(k)}, {"count", v}});
    return rows;
}

json theory_rows(const ExperimentConfig& cfg, const Histogram& hist, const ExactDist& xj,
                 std::uint64_t q) {
    json rows = json::array();
    if (cfg.statistic == Statistic::Joint) {
        for (const auto& [k, v] : hist.counts) {
            std::vector<std::int64_t> outcomes(k.begin(), k.end());
            const Rational p = xj.joint_prob(outcomes);
            json row{{"outcome", outcome_json(k)}};
            row.update(rational_json(p));
            rows.push_back(row);
        }
        return rows;
    }
    const ExactDist th = cfg.statistic == Statistic::Total ? total_dist(xj, q) : xj;
    for (const auto& [k, mass] : th.masses()) {
        json row{{"outcome", k}};
        row.update(rational_json(mass));
        rows.push_back(row);
    }
    return rows;
}

Rational empirical_mean(const Histogram& hist) {
    Int acc = 0;
    for (const auto& [k, v] : hist.counts) {
        std::int64_t outcome = 0;
        for (const std::int32_t x : k) outcome += x;  // joint outcomes contribute their site sum
        acc += Int(outcome) * Int(v);
    }
    return Rational(acc, Int(hist.trials));
}

ExperimentReport build_scan_report(const ExperimentConfig& cfg, Mode mode, const Field& F,
                                   const Histogram& hist, std::uint64_t draws,
                                   const Stopwatch& watch) {
    const std::uint64_t q = F.q();
    const ExactDist xj = site_theory(cfg, q);

    json doc;
    doc["config"] = config_echo(cfg, mode);
    doc["field"] = json{{"p", F.p()}, {"k", F.k()}, {"modulus", F.modulus_text()}};
    doc["seed"] = cfg.seed;
    doc["trials"] = hist.trials;
    doc["undefined_count"] = hist.undefined;
    if (mode == Mode::MonteCarlo) doc["draws"] = draws;
    doc["histogram"] = histogram_rows(hist);
    doc["theory"] = theory_rows(cfg, hist, xj, q);

    doc["tv"] = nullptr;
    doc["mean"] = nullptr;
    if (hist.trials > 0) {
        if (cfg.statistic == Statistic::Joint) {
            if (const auto tv = joint_tv(hist, xj, q)) {
                doc["tv"] = rational_json(tv->first);
                doc["tv"]["float"] = tv->second;
            }
        } else {
            const ExactDist th = cfg.statistic == Statistic::Total ? total_dist(xj, q) : xj;
            const auto tv = tv_distance(hist, th);
            doc["tv"] = rational_json(tv.first);
            doc["tv"]["float"] = tv.second;
        }
        doc["mean"] = rational_json(empirical_mean(hist));
    }
    doc["runtime_ms"] = watch.ms();
    doc["version"] = library_version();

    ExperimentReport rep;
    rep.doc = std::move(doc);
    rep.ok = true;
    return rep;
}

void validate_config(const ExperimentConfig& cfg, const Field& F) {
    if (cfg.m < 2) throw std::invalid_argument("config: m must be >= 2");
    if (cfg.n < 2) throw std::invalid_argument("config: n must be >= 2");
    if (cfg.m % F.p() == 0) throw std::invalid_argument("config: gcd(q, m) must be 1");
    if (cfg.marginal_x >= F.q()) throw std::invalid_argument("config: marginal_x out of range");
}

}  // namespace

std::uint64_t Histogram::occurrences() const {
    std::uint64_t n = 0;
    for (const auto& [k, v] : counts) n += v;
    return n;
}

void Histogram::merge(const Histogram& other) {
    trials += other.trials;
    undefined += other.undefined;
    for (const auto& [k, v] : other.counts) counts[k] += v;
}

std::pair<Rational, double> tv_distance(const Histogram& empirical, const ExactDist& theory) {
    if (empirical.trials == 0) throw std::domain_error("tv_distance: empty histogram");
    Rational sum = 0;
    std::map<std::int64_t, Rational> diff;
    for (const auto& [k, mass] : theory.masses()) diff[k] = mass;
    for (const auto& [k, count] : empirical.counts) {
        if (k.size() != 1) throw std::invalid_argument("tv_distance: scalar outcomes required");
        diff[k[0]] -= Rational(Int(count), Int(empirical.trials));
    }
    for (const auto& [k, v] : diff) sum += abs(v);
    const Rational tv = sum / 2;
    return {tv, to_double(tv)};
}

ExperimentReport run_exhaustive(const ExperimentConfig& cfg_in) {
    const Stopwatch watch;
    ExperimentConfig cfg = cfg_in;
    cfg.budget = resolve_budget(cfg.budget);
    const auto field = make_field(cfg.p, cfg.k);
    validate_config(cfg, *field);

    const Int total = DegreeStream::total_count(*field, cfg.d);
    if (total > Int(cfg.budget))
        throw std::length_error("run_exhaustive: (q-1)q^d = " + total.str() + " exceeds budget " +
                                std::to_string(cfg.budget));
    const std::uint64_t n = total.convert_to<std::uint64_t>();

    const SiteTables tab = build_site_tables(*field, cfg.m, cfg.n);
    const ScanContext ctx{cfg, *field, tab};
    const auto shards = run_sharded<ShardOut>(
        n, cfg.threads, [&](std::uint64_t a, std::uint64_t b) { return scan_exhaustive_range(ctx, a, b); });
    const Histogram hist = merge_shards(shards, nullptr);
    return build_scan_report(cfg, Mode::Exhaustive, *field, hist, 0, watch);
}

ExperimentReport run_montecarlo(const ExperimentConfig& cfg_in) {
    const Stopwatch watch;
    ExperimentConfig cfg = cfg_in;
    cfg.budget = resolve_budget(cfg.budget);
    if (cfg.samples < 1) throw std::invalid_argument("run_montecarlo: sample count must be >= 1");
    const auto field = make_field(cfg.p, cfg.k);
    validate_config(cfg, *field);

    const SiteTables tab = build_site_tables(*field, cfg.m, cfg.n);
    const ScanContext ctx{cfg, *field, tab};
    const auto shards = run_sharded<ShardOut>(
        cfg.samples, cfg.threads,
        [&](std::uint64_t a, std::uint64_t b) { return scan_montecarlo_range(ctx, a, b); });
    std::uint64_t draws = 0;
    const Histogram hist = merge_shards(shards, &draws);
    return build_scan_report(cfg, Mode::MonteCarlo, *field, hist, draws, watch);
}

// ---------------------------------------------------------------------------
// verification suites
// ---------------------------------------------------------------------------

namespace {

struct CountShard {
    std::vector<std::uint64_t> by_multiplicity;      // [maxmult] occurrences
    std::vector<std::uint64_t> value_buckets;        // [vec * (n_hi+1) + clamp]
};

}  // namespace

ExperimentReport verify_counting_identities(const CountingVerifyConfig& cfg_in) {
    const Stopwatch watch;
    CountingVerifyConfig cfg = cfg_in;
    cfg.budget = resolve_budget(cfg.budget);
    if (cfg.n_lo < 2 || cfg.n_lo > cfg.n_hi)
        throw std::invalid_argument("verify_counting_identities: bad n range");
    if (cfg.d_lo > cfg.d_hi) throw std::invalid_argument("verify_counting_identities: bad d range");
    const auto field = make_field(cfg.p, cfg.k);
    const Field& F = *field;
    const std::uint64_t q = F.q();

    const bool interpolate = !cfg.interpolation_ls.empty();
    std::uint64_t vec_space = 1;
    if (interpolate) {
        for (std::uint64_t i = 0; i < q; ++i) {
            vec_space *= q;
            if (vec_space * (cfg.n_hi + 1) > (std::uint64_t(1) << 27))
                throw std::length_error("verify_counting_identities: interpolation tally too large for q");
        }
        for (const unsigned l : cfg.interpolation_ls)
            if (l < 1 || l > q)
                throw std::invalid_argument("verify_counting_identities: l must be in [1, q]");
    }

    json rows = json::array();
    unsigned failures = 0;
    double max_ratio = 0.0;
    SplitMix64 sampler(cfg.seed);

    for (unsigned d = cfg.d_lo; d <= cfg.d_hi; ++d) {
        const Int total = DegreeStream::total_count(F, d);
        if (total > Int(cfg.budget))
            throw std::length_error("verify_counting_identities: (q-1)q^d exceeds budget at d = " +
                                    std::to_string(d));
        const std::uint64_t n_items = total.convert_to<std::uint64_t>();
        const unsigned clamp_max = cfg.n_hi;

        auto scan = [&](std::uint64_t first, std::uint64_t last) {
            CountShard out;
            out.by_multiplicity.assign(std::size_t(d) + 2, 0);
            if (interpolate) out.value_buckets.assign(vec_space * (clamp_max + 1), 0);
            DegreeStream st(F, d, first, last);
            polyops::Scratch ws;
            while (st.next()) {
                const auto shape = polyops::analyze_shape(F, st.coeffs(), ws);
                ++out.by_multiplicity[shape.max_multiplicity];
                if (interpolate) {
                    std::uint64_t vec = 0;
                    for (felem x0 = static_cast<felem>(q); x0-- > 0;)
                        vec = vec * q + polyops::eval_span(F, st.coeffs(), x0);
                    const unsigned clamp = std::min(shape.max_multiplicity, clamp_max);
                    ++out.value_buckets[vec * (clamp_max + 1) + clamp];
                }
            }
            return out;
        };
        const auto shards = run_sharded<CountShard>(n_items, cfg.threads, scan);
        CountShard tally;
        tally.by_multiplicity.assign(std::size_t(d) + 2, 0);
        if (interpolate) tally.value_buckets.assign(vec_space * (clamp_max + 1), 0);
        for (const auto& s : shards) {
            for (std::size_t i = 0; i < s.by_multiplicity.size(); ++i)
                tally.by_multiplicity[i] += s.by_multiplicity[i];
            for (std::size_t i = 0; i < s.value_buckets.size(); ++i)
                tally.value_buckets[i] += s.value_buckets[i];
        }

        for (unsigned n = cfg.n_lo; n <= cfg.n_hi; ++n) {
            Int brute = 0;
            for (unsigned mm = 0; mm < n && mm < tally.by_multiplicity.size(); ++mm)
                brute += Int(tally.by_multiplicity[mm]);
            const Int closed = count_nth_power_free_q(q, n, d);
            const bool pass = brute == closed;
            if (!pass) ++failures;
            rows.push_back(json{{"check", "exact-count"},
                                {"q", q},
                                {"n", n},
                                {"d", d},
                                {"brute", brute.str()},
                                {"closed", closed.str()},
                                {"pass", pass}});
        }

        if (!interpolate) continue;
        for (unsigned n = cfg.n_lo; n <= cfg.n_hi; ++n) {
            for (const unsigned l : cfg.interpolation_ls) {
                if (d < l) continue;
                for (unsigned t = 0; t < cfg.tuples_per_case; ++t) {
                    // sample l distinct x-values and nonzero prescribed values
                    std::vector<felem> xs;
                    while (xs.size() < l) {
                        const felem x = static_cast<felem>(sampler.below(q));
                        if (std::find(xs.begin(), xs.end(), x) == xs.end()) xs.push_back(x);
                    }
                    std::vector<felem> as;
                    for (unsigned i = 0; i < l; ++i)
                        as.push_back(static_cast<felem>(1 + sampler.below(q - 1)));

                    Int brute = 0;
                    for (std::uint64_t vec = 0; vec < vec_space; ++vec) {
                        bool match = true;
                        for (unsigned i = 0; i < l && match; ++i) {
                            std::uint64_t digit = vec;
                            for (felem x0 = 0; x0 < xs[i]; ++x0) digit /= q;
                            if (digit % q != as[i]) match = false;
                        }
                        if (!match) continue;
                        for (unsigned mm = 0; mm < n && mm <= clamp_max; ++mm)
                            brute += Int(tally.value_buckets[vec * (clamp_max + 1) + mm]);
                    }

                    const Rational main = interpolation_main_term(q, n, d, l);
                    const Rational err = abs(Rational(brute) - main);
                    // |err| <= C q^(d/n+1), compared exactly as err^n <= C^n q^(d+n)
                    const Rational lhs = rational_pow(err, static_cast<int>(n));
                    const Rational rhs(int_pow(Int(cfg.error_constant), n) * int_pow(Int(q), d + n));
                    const bool pass = lhs <= rhs;
                    if (!pass) ++failures;
                    const double ratio =
                        to_double(err) / std::pow(static_cast<double>(q),
                                                  static_cast<double>(d) / n + 1.0);
                    max_ratio = std::max(max_ratio, ratio);
                    json xs_json = json::array(), as_json = json::array();
                    for (const felem x : xs) xs_json.push_back(x);
                    for (const felem a : as) as_json.push_back(a);
                    json row{{"check", "interpolation"}, {"q", q},     {"n", n},
                             {"d", d},                   {"l", l},     {"xs", xs_json},
                             {"as", as_json},            {"brute", brute.str()},
                             {"ratio", ratio},           {"pass", pass}};
                    row["main"] = rational_json(main);
                    rows.push_back(row);
                }
            }
        }
    }

    json doc;
    doc["suite"] = "counting";
    doc["config"] = json{{"p", cfg.p},
                         {"k", cfg.k},
                         {"n_lo", cfg.n_lo},
                         {"n_hi", cfg.n_hi},
                         {"d_lo", cfg.d_lo},
                         {"d_hi", cfg.d_hi},
                         {"ls", cfg.interpolation_ls},
                         {"tuples", cfg.tuples_per_case},
                         {"seed", cfg.seed},
                         {"error_constant", cfg.error_constant},
                         {"budget", cfg.budget}};
    doc["field"] = json{{"p", F.p()}, {"k", F.k()}, {"modulus", F.modulus_text()}};
    doc["rows"] = std::move(rows);
    doc["failures"] = failures;
    doc["max_ratio"] = max_ratio;
    doc["runtime_ms"] = watch.ms();
    doc["version"] = library_version();

    ExperimentReport rep;
    rep.doc = std::move(doc);
    rep.ok = failures == 0;
    return rep;
}

ExperimentReport verify_local_rule(const LocalVerifyConfig& cfg) {
    const Stopwatch watch;
    json rows = json::array();
    unsigned failures = 0, skipped = 0;

    for (const auto& [p, k] : cfg.fields) {
        const auto field = make_field(p, k);
        const Field& F = *field;
        const std::uint64_t q = F.q();
        for (unsigned m = 2; m <= cfg.m_max; ++m) {
            if (m % p == 0) continue;
            for (unsigned s = 0; s <= cfg.s_max; ++s) {
                for (felem a = 1; a < q; ++a) {
                    // f = x^s (x + a): bar power 1, so the local rule applies
                    std::vector<felem> coeffs(s + 2, 0);
                    coeffs[s] = a;
                    coeffs[s + 1] = 1;
                    const SuperellipticModel model(m, Poly(F, std::move(coeffs)));

                    const unsigned d0 = (s == 0) ? m : static_cast<unsigned>(std::gcd(m, s));
                    const unsigned closed =
                        F.is_rth_power(a, d0)
                            ? static_cast<unsigned>(std::gcd(std::uint64_t(d0), q - 1))
                            : 0;
                    const unsigned norm = normalization_count_at(model, 0);

                    json row{{"p", p}, {"k", k}, {"q", q},         {"m", m},
                             {"s", s}, {"a", a}, {"closed", closed}, {"normalization", norm},
                             {"f", to_text(model.f)}};
                    bool pass = false;
                    try {
                        const unsigned orbit =
                            branch_orbit_count(model, 0, cfg.splitting_order_bound);
                        row["orbit"] = orbit;
                        pass = (norm == orbit) && (orbit == closed);
                    } catch (const std::length_error& e) {
                        row["orbit"] = nullptr;
                        row["skipped"] = e.what();
                        ++skipped;
                        pass = (norm == closed);
                    }
                    row["pass"] = pass;
                    if (!pass) ++failures;
                    rows.push_back(std::move(row));
                }
            }
        }
    }

    json fields_json = json::array();
    for (const auto& [p, k] : cfg.fields) fields_json.push_back(json{{"p", p}, {"k", k}});
    json doc;
    doc["suite"] = "local";
    doc["config"] = json{{"fields", fields_json},
                         {"m_max", cfg.m_max},
                         {"s_max", cfg.s_max},
                         {"splitting_order_bound", cfg.splitting_order_bound}};
    doc["rows"] = std::move(rows);
    doc["failures"] = failures;
    doc["skipped"] = skipped;
    doc["runtime_ms"] = watch.ms();
    doc["version"] = library_version();

    ExperimentReport rep;
    rep.doc = std::move(doc);
    rep.ok = failures == 0;
    return rep;
}

ExperimentReport convergence_scan(const ConvergenceConfig& cfg) {
    const Stopwatch watch;
    if (cfg.d_lo > cfg.d_hi) throw std::invalid_argument("convergence_scan: bad d range");
    json rows = json::array();
    std::vector<double> tvs;
    for (unsigned d = cfg.d_lo; d <= cfg.d_hi; ++d) {
        ExperimentConfig sub = cfg.base;
        sub.d = d;
        const ExperimentReport rep = run_exhaustive(sub);
        json row{{"d", d}, {"trials", rep.doc.at("trials")}, {"tv", rep.doc.at("tv")}};
        if (!rep.doc.at("tv").is_null()) tvs.push_back(rep.doc.at("tv").at("float").get<double>());
        rows.push_back(std::move(row));
    }
    bool weakly_decreasing = true;
    for (std::size_t i = 1; i < tvs.size(); ++i)
        if (tvs[i] > tvs[i - 1] * (1.0 + cfg.noise_band)) weakly_decreasing = false;
    const bool gate_pass =
        cfg.tv_gate <= 0.0 || (!tvs.empty() && tvs.back() <= cfg.tv_gate);

    json doc;
    doc["suite"] = "convergence";
    doc["config"] = config_echo(cfg.base, Mode::Exhaustive);
    doc["config"]["d_lo"] = cfg.d_lo;
    doc["config"]["d_hi"] = cfg.d_hi;
    doc["gate"] = cfg.tv_gate;
    doc["noise_band"] = cfg.noise_band;
    doc["rows"] = std::move(rows);
    doc["weakly_decreasing"] = weakly_decreasing;
    doc["gate_pass"] = gate_pass;
    doc["runtime_ms"] = watch.ms();
    doc["version"] = library_version();

    ExperimentReport rep;
    rep.doc = std::move(doc);
    rep.ok = gate_pass;
    return rep;
}

nlohmann::json dist_to_json(const ExactDist& dist) {
    json out = json::object();
    for (const auto& [k, mass] : dist.masses()) out[std::to_string(k)] = rational_json(mass);
    return out;
}

nlohmann::json profile_to_json(const CurveProfile& profile) {
    json sites = json::array();
    for (const auto& site : profile.locals) {
        json row{{"x0", site.x0}, {"s", site.s}, {"a", site.a}, {"affine", site.affine_count}};
        if (site.normalization_count)
            row["normalized"] = *site.normalization_count;
        else
            row["normalized"] = "undefined (geometrically reducible)";
        sites.push_back(std::move(row));
    }
    json out;
    out["sites"] = std::move(sites);
    out["total_affine"] = profile.total_affine;
    if (profile.total_normalized)
        out["total_normalized"] = *profile.total_normalized;
    else
        out["total_normalized"] = nullptr;
    out["smooth"] = profile.smooth;
    out["geometrically_irreducible"] = profile.geometrically_irreducible;
    out["irreducible"] = profile.irreducible_over_field;
    out["n"] = profile.n;
    out["nth_power_free"] = profile.nth_power_free;
    return out;
}

ExperimentReport run_from_json(const std::string& config_json) {
    const json cfg = json::parse(config_json);
    const std::string command = cfg.at("command").get<std::string>();

    auto scan_config = [&]() {
        ExperimentConfig c;
        c.p = cfg.value("p", 3u);
        c.k = cfg.value("k", 1u);
        c.m = cfg.value("m", 2u);
        c.n = cfg.value("n", 2u);
        if (cfg.contains("variant")) c.variant = variant_from(cfg.at("variant").get<std::string>());
        if (cfg.contains("statistic"))
            c.statistic = statistic_from(cfg.at("statistic").get<std::string>());
        c.marginal_x = cfg.value("marginal_x", 0u);
        c.d = cfg.value("d", 0u);
        c.samples = cfg.value("samples", std::uint64_t(0));
        c.seed = cfg.value("seed", std::uint64_t(0));
        if (cfg.contains("filter")) c.filter = filter_from(cfg.at("filter").get<std::string>());
        c.budget = cfg.value("budget", kDefaultEnumerationBudget);
        c.threads = cfg.value("threads", 1u);
        c.rejection_cap = cfg.value("rejection_cap", std::uint64_t(100000));
        return c;
    };

    if (command == "scan") return run_exhaustive(scan_config());
    if (command == "sample") return run_montecarlo(scan_config());
    if (command == "convergence") {
        ConvergenceConfig c;
        c.base = scan_config();
        c.d_lo = cfg.at("d_lo").get<unsigned>();
        c.d_hi = cfg.at("d_hi").get<unsigned>();
        c.tv_gate = cfg.value("tv_gate", 0.0);
        c.noise_band = cfg.value("noise_band", 0.10);
        return convergence_scan(c);
    }
    if (command == "verify-counting") {
        CountingVerifyConfig c;
        c.p = cfg.value("p", 3u);
        c.k = cfg.value("k", 1u);
        c.n_lo = cfg.value("n_lo", 2u);
        c.n_hi = cfg.value("n_hi", c.n_lo);
        c.d_lo = cfg.value("d_lo", 0u);
        c.d_hi = cfg.value("d_hi", c.d_lo);
        if (cfg.contains("ls")) c.interpolation_ls = cfg.at("ls").get<std::vector<unsigned>>();
        c.tuples_per_case = cfg.value("tuples", 20u);
        c.seed = cfg.value("seed", std::uint64_t(0));
        c.error_constant = cfg.value("error_constant", 4u);
        c.budget = cfg.value("budget", kDefaultEnumerationBudget);
        c.threads = cfg.value("threads", 1u);
        return verify_counting_identities(c);
    }
    if (command == "verify-local") {
        LocalVerifyConfig c;
        if (cfg.contains("fields")) {
            for (const auto& f : cfg.at("fields"))
                c.fields.emplace_back(f.at("p").get<std::uint32_t>(), f.value("k", 1u));
        } else {
            c.fields.emplace_back(cfg.value("p", 5u), cfg.value("k", 1u));
        }
        c.m_max = cfg.value("m_max", 8u);
        c.s_max = cfg.value("s_max", 8u);
        c.splitting_order_bound = cfg.value("splitting_order_bound", kDefaultSplittingBound);
        return verify_local_rule(c);
    }
    if (command == "theory") {
        const std::uint32_t p = cfg.value("p", 3u);
        const std::uint32_t k = cfg.value("k", 1u);
        const auto field = make_field(p, k);  // validates p, k and pins q
        LimitParams params{field->q(), cfg.value("m", 2u), cfg.value("n", 2u),
                             Variant::Singular};
        if (cfg.contains("variant"))
            params.variant = variant_from(cfg.at("variant").get<std::string>());
        const ExactDist xj = params.variant == Variant::Singular ? xj_singular(params)
                                                                 : xj_normalization(params);
        json doc;
        doc["command"] = "theory";
        doc["params"] = json{{"p", p},
                             {"k", k},
                             {"q", field->q()},
                             {"m", params.m},
                             {"n", params.n},
                             {"variant", variant_name(params.variant)}};
        doc["field"] = json{{"p", p}, {"k", k}, {"modulus", field->modulus_text()}};
        doc["pmf"] = dist_to_json(xj);
        doc["mean"] = rational_json(xj.mean());
        if (cfg.value("total", false)) doc["total_pmf"] = dist_to_json(total_dist(xj, field->q()));
        if (params.variant == Variant::Normalization)
            doc["unweighted_zero_mass"] = rational_json(normalization_unweighted_zero_mass(params));
        doc["version"] = library_version();
        ExperimentReport rep;
        rep.doc = std::move(doc);
        return rep;
    }
    if (command == "profile") {
        const std::uint32_t p = cfg.value("p", 3u);
        const std::uint32_t k = cfg.value("k", 1u);
        const auto field = make_field(p, k);
        const unsigned m = cfg.value("m", 2u);
        const unsigned n = cfg.value("n", 2u);
        const Poly f = poly_from_text(*field, cfg.at("f").get<std::string>());
        const SuperellipticModel model(m, f);
        json doc;
        doc["command"] = "profile";
        doc["field"] = json{{"p", p}, {"k", k}, {"modulus", field->modulus_text()}};
        doc["m"] = m;
        doc["f"] = to_text(f);
        doc["profile"] = profile_to_json(profile(model, n));
        doc["version"] = library_version();
        ExperimentReport rep;
        rep.doc = std::move(doc);
        return rep;
    }
    if (command == "contrast") {
        const std::uint32_t p = cfg.value("p", 7u);
        const std::uint32_t k = cfg.value("k", 1u);
        const auto field = make_field(p, k);
        const auto [ours, prior] = trigonal_contrast(field->q());
        json doc;
        doc["command"] = "contrast";
        doc["q"] = field->q();
        doc["degree_limit"] = dist_to_json(ours);
        doc["signature_limit"] = dist_to_json(prior);
        doc["version"] = library_version();
        ExperimentReport rep;
        rep.doc = std::move(doc);
        return rep;
    }
    throw std::invalid_argument("run_from_json: unknown command '" + command + "'");
}

std::string ExperimentReport::csv_text() const {
    if (!doc.contains("histogram") || !doc.contains("theory"))
        throw std::invalid_argument("csv_text: not a histogram report");
    const std::uint64_t trials = doc.at("trials").get<std::uint64_t>();
    std::map<std::int64_t, std::uint64_t> counts;
    for (const auto& row : doc.at("histogram")) {
        if (!row.at("outcome").is_number())
            throw std::invalid_argument("csv_text: scalar outcomes required");
        counts[row.at("outcome").get<std::int64_t>()] = row.at("count").get<std::uint64_t>();
    }
    std::map<std::int64_t, Rational> theory;
    for (const auto& row : doc.at("theory")) {
        theory[row.at("outcome").get<std::int64_t>()] =
            Rational(Int(row.at("num").get<std::string>()), Int(row.at("den").get<std::string>()));
    }
    std::string out = "outcome,count,empirical,theory\n";
    std::map<std::int64_t, char> keys;
    for (const auto& [k, v] : counts) keys[k] = 0;
    for (const auto& [k, v] : theory) keys[k] = 0;
    for (const auto& [k, unused] : keys) {
        const std::uint64_t c = counts.count(k) ? counts.at(k) : 0;
        const Rational emp = trials ? Rational(Int(c), Int(trials)) : Rational(0);
        const Rational th = theory.count(k) ? theory.at(k) : Rational(0);
        out += std::to_string(k) + "," + std::to_string(c) + "," + decimal_string(emp, 12) + "," +
               decimal_string(th, 12) + "\n";
    }
    return out;
}

}  // namespace superell
