// SPDX-FileCopyrightText: 2026 superell developers
// SPDX-License-Identifier: Apache-2.0
//
// CLI-driven experiments: exhaustive and Monte-Carlo scans over exact-degree
// polynomial families, empirical-vs-theory comparison, and the exact
// identity-verification suites. All runs are deterministic for a given config + seed,
// independent of the thread count.
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "superell/curve.hpp"
#include "superell/dist.hpp"
#include "superell/field.hpp"
#include "superell/poly.hpp"
#include "superell/rational.hpp"

namespace superell {

inline constexpr std::uint64_t kDefaultEnumerationBudget = 10'000'000;
inline constexpr char kRngName[] = "splitmix64-counter";

const char* library_version();

enum class Statistic { Total, Marginal, Joint };
enum class SubsetFilter { All, GeometricallyIrreducible, Irreducible };
enum class Mode { Exhaustive, MonteCarlo };

struct ExperimentConfig {
    std::uint32_t p = 3;
    std::uint32_t k = 1;
    unsigned m = 2;
    unsigned n = 2;
    Variant variant = Variant::Singular;
    Statistic statistic = Statistic::Total;
    felem marginal_x = 0;
    unsigned d = 0;
    std::uint64_t samples = 0;  // Monte Carlo only
    std::uint64_t seed = 0;
    SubsetFilter filter = SubsetFilter::All;
    std::uint64_t budget = kDefaultEnumerationBudget;
    unsigned threads = 1;
    std::uint64_t rejection_cap = 100000;  // Monte Carlo resampling guard
};

/// Occurrence counts per outcome. Scalar statistics use one-element keys.
/// trials is the pmf denominator (admitted polynomials after the subset
/// filter); undefined counts trials whose statistic has no value
/// (normalization statistic on a geometrically reducible curve).
struct Histogram {
    std::map<std::vector<std::int32_t>, std::uint64_t> counts;
    std::uint64_t trials = 0;
    std::uint64_t undefined = 0;

    std::uint64_t occurrences() const;
    void merge(const Histogram& other);
};

/// Total-variation distance (1/2) sum |empirical - theory| over the union of
/// supports, exact plus a float rendering. Requires scalar outcomes and
/// trials > 0.
std::pair<Rational, double> tv_distance(const Histogram& empirical, const ExactDist& theory);

/// A finished run: canonical JSON document plus a pass flag (always true for
/// plain scans, verification outcome for the verify suites).
struct ExperimentReport {
    nlohmann::json doc;
    bool ok = true;

    std::string json_text() const { return doc.dump(2); }
    /// Histogram CSV, header "outcome,count,empirical,theory", 12-place
    /// decimals. Scalar statistics only.
    std::string csv_text() const;
};

ExperimentReport run_exhaustive(const ExperimentConfig& cfg);
ExperimentReport run_montecarlo(const ExperimentConfig& cfg);

struct CountingVerifyConfig {
    std::uint32_t p = 3;
    std::uint32_t k = 1;
    unsigned n_lo = 2, n_hi = 2;
    unsigned d_lo = 0, d_hi = 0;
    std::vector<unsigned> interpolation_ls;  // empty: exact counts only
    unsigned tuples_per_case = 20;
    std::uint64_t seed = 0;
    unsigned error_constant = 4;
    std::uint64_t budget = kDefaultEnumerationBudget;
    unsigned threads = 1;
};

/// Exact power-free counts against the closed form, and brute-force
/// interpolation counts against the main term within C * q^(d/n + 1).
ExperimentReport verify_counting_identities(const CountingVerifyConfig& cfg);

struct LocalVerifyConfig {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> fields;  // (p, k)
    unsigned m_max = 8;
    unsigned s_max = 8;
    std::uint64_t splitting_order_bound = kDefaultSplittingBound;
};

/// For every (q, m, s, a): normalization_count_at, branch_orbit_count and the
/// closed form gcd(m,s,q-1) * [unit is a gcd(m,s) power] must agree exactly
/// on f = x^s (x + a).
ExperimentReport verify_local_rule(const LocalVerifyConfig& cfg);

struct ConvergenceConfig {
    ExperimentConfig base;  // d is taken from the range below
    unsigned d_lo = 0, d_hi = 0;
    double tv_gate = 0.0;  // <= 0: informational only
    double noise_band = 0.10;
};

/// Table of (d, TV(empirical, theory)); flags non-convergence when the gate
/// is configured and the TV at d_hi exceeds it.
ExperimentReport convergence_scan(const ConvergenceConfig& cfg);

/// {outcome: {num, den}} with unbounded integers as decimal strings.
nlohmann::json dist_to_json(const ExactDist& dist);

/// Per-x records {x0, s, a, affine, normalized}, flags and totals.
nlohmann::json profile_to_json(const CurveProfile& profile);

/// JSON-config dispatcher shared by the C API and the CLI. config must carry
/// "command": scan | sample | verify-counting | verify-local | convergence |
/// theory | contrast.
ExperimentReport run_from_json(const std::string& config_json);

/// Counter-based deterministic generator: stream i derives its state from
/// (seed, i) only, so shard layout cannot influence results.
struct SplitMix64 {
    std::uint64_t state;
    explicit SplitMix64(std::uint64_t s) : state(s) {}
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t lim = UINT64_MAX - UINT64_MAX % bound;
        while (true) {
            const std::uint64_t r = next();
            if (r < lim) return r % bound;
        }
    }
};

inline std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t i) {
    SplitMix64 g(seed ^ (0x9E3779B97F4A7C15ull * (i + 1)));
    return g.next();
}

}  // namespace superell
