// SPDX-FileCopyrightText: 2026 superell developers
// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end. Everything goes through the C API in superell.h;
// this translation unit never touches the C++ core directly.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "superell.h"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailure = 1;
constexpr int kExitUsage = 2;

struct OutputOptions {
    std::string format = "json";  // json | csv
    std::string path;             // empty: stdout
};

void add_output_flags(CLI::App* cmd, OutputOptions& out) {
    cmd->add_option("--out", out.format, "output format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--output", out.path, "write the report to this path instead of stdout");
}

int emit(sel_report* report, const OutputOptions& out) {
    const char* text = nullptr;
    if (out.format == "csv") {
        text = sel_report_csv(report);
        if (text == nullptr) {
            std::cerr << "superell: " << sel_last_error() << "\n";
            return kExitUsage;
        }
    } else {
        text = sel_report_json(report);
    }
    if (out.path.empty()) {
        std::cout << text << "\n";
    } else {
        std::ofstream f(out.path);
        if (!f) {
            std::cerr << "superell: cannot write " << out.path << "\n";
            return kExitUsage;
        }
        f << text << "\n";
    }
    return kExitOk;
}

int run_and_emit(const json& config, const OutputOptions& out, bool verification) {
    sel_report* report = nullptr;
    const int rc = sel_run(config.dump().c_str(), &report);
    if (rc != SEL_OK) {
        std::cerr << "superell: " << sel_last_error() << "\n";
        return kExitUsage;
    }
    const int emit_rc = emit(report, out);
    const bool ok = sel_report_ok(report) != 0;
    sel_report_free(report);
    if (emit_rc != kExitOk) return emit_rc;
    if (verification && !ok) return kExitVerifyFailure;
    return kExitOk;
}

bool parse_range(const std::string& text, unsigned& lo, unsigned& hi) {
    const auto pos = text.find("..");
    try {
        if (pos == std::string::npos) {
            lo = hi = static_cast<unsigned>(std::stoul(text));
            return true;
        }
        lo = static_cast<unsigned>(std::stoul(text.substr(0, pos)));
        hi = static_cast<unsigned>(std::stoul(text.substr(pos + 2)));
        return lo <= hi;
    } catch (...) {
        return false;
    }
}

// prime powers have a unique (p, k); "9" -> (3, 2)
bool factor_prime_power(std::uint64_t q, std::uint32_t& p, std::uint32_t& k) {
    if (q < 2) return false;
    std::uint64_t base = q;
    for (std::uint64_t d = 2; d * d <= q; ++d) {
        if (q % d == 0) {
            base = d;
            break;
        }
    }
    std::uint64_t v = q;
    std::uint32_t e = 0;
    while (v % base == 0) {
        v /= base;
        ++e;
    }
    if (v != 1) return false;
    p = static_cast<std::uint32_t>(base);
    k = e;
    return true;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"point-count statistics for superelliptic curves y^m = f(x) over F_q"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(sel_version()));

    // shared numeric flags (each subcommand registers the ones it uses)
    std::uint32_t p = 3, k = 1, m = 2, n = 2;
    std::string variant = "singular";
    std::string statistic = "total";
    std::string filter = "all";
    std::uint32_t marginal_x = 0;
    std::string d_text;
    std::uint64_t samples = 100000, seed = 0, budget = 0;
    unsigned threads = 1;
    double tv_gate = 0.0, noise_band = 0.10;
    OutputOptions out;

    auto add_field_flags = [&](CLI::App* cmd) {
        cmd->add_option("--p", p, "field characteristic (prime)")->required();
        cmd->add_option("--k", k, "extension degree (q = p^k)");
    };
    auto add_model_flags = [&](CLI::App* cmd) {
        cmd->add_option("--m", m, "cover degree m in y^m = f(x)")->required();
        cmd->add_option("--n", n, "power-free exponent n");
        cmd->add_option("--variant", variant, "singular | normalization")
            ->check(CLI::IsMember({"singular", "normalization"}));
    };
    std::string d_range_text;
    auto add_scan_flags = [&](CLI::App* cmd) {
        auto* d_opt = cmd->add_option("--d", d_text, "degree d or range a..b");
        cmd->add_option("--d-range", d_range_text, "degree range a..b (same as --d a..b)")
            ->excludes(d_opt);
        cmd->add_option("--statistic", statistic, "total | marginal | joint")
            ->check(CLI::IsMember({"total", "marginal", "joint"}));
        cmd->add_option("--marginal-x", marginal_x, "site for the marginal statistic");
        cmd->add_option("--filter", filter, "all | geometrically-irreducible | irreducible")
            ->check(CLI::IsMember({"all", "geometrically-irreducible", "irreducible"}));
        cmd->add_option("--threads", threads, "worker threads (results are thread-count independent)");
        cmd->add_option("--budget", budget, "enumeration budget on (q-1)q^d");
        add_output_flags(cmd, out);
    };

    auto* theory = app.add_subcommand("theory", "print the exact limiting pmf");
    add_field_flags(theory);
    add_model_flags(theory);
    bool theory_total = false;
    theory->add_flag("--total", theory_total, "also print the q-site total pmf");
    add_output_flags(theory, out);

    auto* scan = app.add_subcommand("scan", "exhaustive scan over exact-degree-d polynomials");
    add_field_flags(scan);
    add_model_flags(scan);
    add_scan_flags(scan);
    scan->add_option("--tv-gate", tv_gate, "fail when TV at the top degree exceeds this (ranges only)");
    scan->add_option("--noise-band", noise_band, "allowed relative TV increase between degrees");

    auto* sample = app.add_subcommand("sample", "seeded Monte Carlo over exact-degree-d polynomials");
    add_field_flags(sample);
    add_model_flags(sample);
    add_scan_flags(sample);
    sample->add_option("--samples", samples, "number of admitted samples");
    sample->add_option("--seed", seed, "64-bit seed; identical seeds give identical reports");

    auto* verify = app.add_subcommand("verify", "run a verification suite");
    std::string suite = "counting";
    verify->add_option("--suite", suite, "counting | local")
        ->required()
        ->check(CLI::IsMember({"counting", "local"}));
    std::string n_range = "2", d_range = "0..0", l_list;
    std::uint32_t tuples = 20, error_constant = 4, m_max = 8, s_max = 8;
    std::string fields_list;
    verify->add_option("--p", p, "field characteristic (counting: required; local: single field)");
    verify->add_option("--k", k, "extension degree");
    verify->add_option("--n", n_range, "n or range a..b (counting suite)");
    verify->add_option("--d-range", d_range, "degree range a..b (counting suite)");
    verify->add_option("--l-list", l_list, "comma-separated interpolation arities, e.g. 1,2,3");
    verify->add_option("--tuples", tuples, "sampled (x,a) tuples per case");
    verify->add_option("--seed", seed, "seed for tuple sampling");
    verify->add_option("--error-const", error_constant, "C in the |error| <= C q^(d/n+1) envelope");
    verify->add_option("--threads", threads, "worker threads");
    verify->add_option("--budget", budget, "enumeration budget");
    verify->add_option("--m-max", m_max, "largest m (local suite)");
    verify->add_option("--s-max", s_max, "largest valuation s (local suite)");
    verify->add_option("--fields", fields_list, "comma-separated prime powers (local suite), e.g. 3,4,5,7");
    add_output_flags(verify, out);

    auto* contrast = app.add_subcommand("contrast", "trigonal limit pmfs: degree limit vs signature limit");
    add_field_flags(contrast);
    add_output_flags(contrast, out);

    auto* prof = app.add_subcommand("profile", "per-x point counts for one curve y^m = f(x)");
    add_field_flags(prof);
    add_model_flags(prof);
    std::string f_text;
    prof->add_option("--f", f_text, "coefficients of f, low to high, e.g. 1,0,2")->required();
    add_output_flags(prof, out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return kExitOk;  // --help/--version
        std::cerr << "superell: " << e.what() << "\n";
        return kExitUsage;
    }

    json cfg;
    bool verification = false;

    if (theory->parsed()) {
        cfg = {{"command", "theory"}, {"p", p}, {"k", k}, {"m", m}, {"n", n},
               {"variant", variant}, {"total", theory_total}};
    } else if (scan->parsed() || sample->parsed()) {
        if (d_text.empty()) d_text = d_range_text;
        unsigned d_lo = 0, d_hi = 0;
        if (d_text.empty() || !parse_range(d_text, d_lo, d_hi)) {
            std::cerr << "superell: bad or missing --d value '" << d_text << "'\n";
            return kExitUsage;
        }
        cfg = {{"p", p},
               {"k", k},
               {"m", m},
               {"n", n},
               {"variant", variant},
               {"statistic", statistic},
               {"marginal_x", marginal_x},
               {"seed", seed},
               {"filter", filter},
               {"threads", threads}};
        if (budget > 0) cfg["budget"] = budget;
        if (sample->parsed()) {
            if (d_lo != d_hi) {
                std::cerr << "superell: sample takes a single degree\n";
                return kExitUsage;
            }
            cfg["command"] = "sample";
            cfg["d"] = d_lo;
            cfg["samples"] = samples;
        } else if (d_lo == d_hi) {
            cfg["command"] = "scan";
            cfg["d"] = d_lo;
        } else {
            cfg["command"] = "convergence";
            cfg["d_lo"] = d_lo;
            cfg["d_hi"] = d_hi;
            cfg["tv_gate"] = tv_gate;
            cfg["noise_band"] = noise_band;
            verification = tv_gate > 0.0;
        }
    } else if (verify->parsed()) {
        verification = true;
        if (suite == "counting") {
            unsigned n_lo = 2, n_hi = 2, d_lo = 0, d_hi = 0;
            if (!parse_range(n_range, n_lo, n_hi) || !parse_range(d_range, d_lo, d_hi)) {
                std::cerr << "superell: bad --n or --d-range value\n";
                return kExitUsage;
            }
            cfg = {{"command", "verify-counting"},
                   {"p", p},
                   {"k", k},
                   {"n_lo", n_lo},
                   {"n_hi", n_hi},
                   {"d_lo", d_lo},
                   {"d_hi", d_hi},
                   {"tuples", tuples},
                   {"seed", seed},
                   {"error_constant", error_constant},
                   {"threads", threads}};
            if (budget > 0) cfg["budget"] = budget;
            if (!l_list.empty()) {
                std::vector<unsigned> ls;
                std::size_t pos = 0;
                while (pos < l_list.size()) {
                    std::size_t comma = l_list.find(',', pos);
                    if (comma == std::string::npos) comma = l_list.size();
                    try {
                        ls.push_back(static_cast<unsigned>(std::stoul(l_list.substr(pos, comma - pos))));
                    } catch (...) {
                        std::cerr << "superell: bad --l-list value\n";
                        return kExitUsage;
                    }
                    pos = comma + 1;
                }
                cfg["ls"] = ls;
            }
        } else {
            cfg = {{"command", "verify-local"}, {"m_max", m_max}, {"s_max", s_max}};
            json fields = json::array();
            if (!fields_list.empty()) {
                std::size_t pos = 0;
                while (pos < fields_list.size()) {
                    std::size_t comma = fields_list.find(',', pos);
                    if (comma == std::string::npos) comma = fields_list.size();
                    std::uint64_t q = 0;
                    try {
                        q = std::stoull(fields_list.substr(pos, comma - pos));
                    } catch (...) {
                        q = 0;
                    }
                    std::uint32_t fp = 0, fk = 0;
                    if (q == 0 || !factor_prime_power(q, fp, fk)) {
                        std::cerr << "superell: --fields entries must be prime powers\n";
                        return kExitUsage;
                    }
                    fields.push_back({{"p", fp}, {"k", fk}});
                    pos = comma + 1;
                }
            } else {
                fields.push_back({{"p", p}, {"k", k}});
            }
            cfg["fields"] = fields;
        }
    } else if (contrast->parsed()) {
        cfg = {{"command", "contrast"}, {"p", p}, {"k", k}};
    } else if (prof->parsed()) {
        cfg = {{"command", "profile"}, {"p", p}, {"k", k}, {"m", m}, {"n", n}, {"f", f_text}};
    }

    return run_and_emit(cfg, out, verification);
}
