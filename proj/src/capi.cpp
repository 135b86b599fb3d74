// SPDX-FileCopyrightText: 2026 superell developers
// SPDX-License-Identifier: Apache-2.0

#include "superell.h"

#include <cstring>
#include <new>
#include <string>

#include "superell/dist.hpp"
#include "superell/experiment.hpp"
#include "superell/field.hpp"

using namespace superell;

namespace {

thread_local std::string g_last_error;

int fail(int code, const char* what) {
    g_last_error = what ? what : "";
    return code;
}

template <typename Fn>
int guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return SEL_OK;
    } catch (const std::invalid_argument& e) {
        return fail(SEL_ERR_INVALID, e.what());
    } catch (const std::domain_error& e) {
        return fail(SEL_ERR_DOMAIN, e.what());
    } catch (const std::length_error& e) {
        return fail(SEL_ERR_BUDGET, e.what());
    } catch (const std::bad_alloc& e) {
        return fail(SEL_ERR_NOMEM, e.what());
    } catch (const nlohmann::json::exception& e) {
        return fail(SEL_ERR_INVALID, e.what());
    } catch (const std::exception& e) {
        return fail(SEL_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(SEL_ERR_INTERNAL, "unknown error");
    }
}

int copy_string(const std::string& s, char* buf, size_t cap) {
    if (buf == nullptr || cap == 0 || s.size() + 1 > cap)
        throw std::invalid_argument("buffer too small");
    std::memcpy(buf, s.c_str(), s.size() + 1);
    return SEL_OK;
}

}  // namespace

struct sel_field {
    std::shared_ptr<const Field> field;
};

struct sel_dist {
    ExactDist dist;
    std::string json_cache;
};

struct sel_report {
    ExperimentReport report;
    std::string json_cache;
    std::string csv_cache;
};

extern "C" {

const char* sel_version(void) { return library_version(); }

const char* sel_last_error(void) { return g_last_error.c_str(); }

int sel_field_create(uint32_t p, uint32_t k, sel_field** out) {
    return sel_field_create_bounded(p, k, Field::kDefaultOrderBound, out);
}

int sel_field_create_bounded(uint32_t p, uint32_t k, uint64_t order_bound, sel_field** out) {
    if (out == nullptr) return fail(SEL_ERR_INVALID, "null output pointer");
    *out = nullptr;
    return guarded([&] { *out = new sel_field{make_field(p, k, order_bound)}; });
}

void sel_field_free(sel_field* f) { delete f; }

uint64_t sel_field_order(const sel_field* f) { return f ? f->field->q() : 0; }

uint32_t sel_field_generator(const sel_field* f) { return f ? f->field->generator() : 0; }

const char* sel_field_modulus(const sel_field* f) {
    return f ? f->field->modulus_text().c_str() : "";
}

#define SEL_CHECK_ELEMS() \
    if (f == nullptr || out == nullptr) return fail(SEL_ERR_INVALID, "null argument")

static void check_element(const sel_field* f, uint32_t a) {
    if (!f->field->is_element(a)) throw std::invalid_argument("element out of range");
}

int sel_field_add(const sel_field* f, uint32_t a, uint32_t b, uint32_t* out) {
    SEL_CHECK_ELEMS();
    return guarded([&] {
        check_element(f, a);
        check_element(f, b);
        *out = f->field->add(a, b);
    });
}

int sel_field_sub(const sel_field* f, uint32_t a, uint32_t b, uint32_t* out) {
    SEL_CHECK_ELEMS();
    return guarded([&] {
        check_element(f, a);
        check_element(f, b);
        *out = f->field->sub(a, b);
    });
}

int sel_field_mul(const sel_field* f, uint32_t a, uint32_t b, uint32_t* out) {
    SEL_CHECK_ELEMS();
    return guarded([&] {
        check_element(f, a);
        check_element(f, b);
        *out = f->field->mul(a, b);
    });
}

int sel_field_neg(const sel_field* f, uint32_t a, uint32_t* out) {
    SEL_CHECK_ELEMS();
    return guarded([&] {
        check_element(f, a);
        *out = f->field->neg(a);
    });
}

int sel_field_inv(const sel_field* f, uint32_t a, uint32_t* out) {
    SEL_CHECK_ELEMS();
    return guarded([&] {
        check_element(f, a);
        *out = f->field->inv(a);
    });
}

int sel_field_pow(const sel_field* f, uint32_t a, uint64_t e, uint32_t* out) {
    SEL_CHECK_ELEMS();
    return guarded([&] {
        check_element(f, a);
        *out = f->field->pow(a, e);
    });
}

int sel_field_is_rth_power(const sel_field* f, uint32_t a, uint64_t r, int* out) {
    SEL_CHECK_ELEMS();
    return guarded([&] {
        check_element(f, a);
        *out = f->field->is_rth_power(a, r) ? 1 : 0;
    });
}

int sel_field_root_count(const sel_field* f, uint32_t a, uint64_t m, uint32_t* out) {
    SEL_CHECK_ELEMS();
    return guarded([&] {
        check_element(f, a);
        *out = f->field->root_count(a, m);
    });
}

int sel_theory_xj(uint32_t p, uint32_t k, uint32_t m, uint32_t n, int variant, sel_dist** out) {
    if (out == nullptr) return fail(SEL_ERR_INVALID, "null output pointer");
    *out = nullptr;
    return guarded([&] {
        if (variant != SEL_VARIANT_SINGULAR && variant != SEL_VARIANT_NORMALIZATION)
            throw std::invalid_argument("unknown variant");
        const auto field = make_field(p, k);
        const LimitParams params{field->q(), m, n,
                                   variant == SEL_VARIANT_SINGULAR ? Variant::Singular
                                                                   : Variant::Normalization};
        *out = new sel_dist{params.variant == Variant::Singular ? xj_singular(params)
                                                                : xj_normalization(params),
                            {}};
    });
}

int sel_theory_trigonal_contrast(uint32_t p, uint32_t k, sel_dist** degree_limit,
                                 sel_dist** signature_limit) {
    if (degree_limit == nullptr || signature_limit == nullptr)
        return fail(SEL_ERR_INVALID, "null output pointer");
    *degree_limit = nullptr;
    *signature_limit = nullptr;
    return guarded([&] {
        const auto field = make_field(p, k);
        auto [ours, prior] = trigonal_contrast(field->q());
        *degree_limit = new sel_dist{std::move(ours), {}};
        *signature_limit = new sel_dist{std::move(prior), {}};
    });
}

int sel_dist_convolve_power(const sel_dist* d, uint64_t copies, sel_dist** out) {
    if (d == nullptr || out == nullptr) return fail(SEL_ERR_INVALID, "null argument");
    *out = nullptr;
    return guarded([&] { *out = new sel_dist{d->dist.convolve_power(copies), {}}; });
}

size_t sel_dist_size(const sel_dist* d) { return d ? d->dist.masses().size() : 0; }

int sel_dist_outcome(const sel_dist* d, size_t i, int64_t* out) {
    if (d == nullptr || out == nullptr) return fail(SEL_ERR_INVALID, "null argument");
    return guarded([&] {
        if (i >= d->dist.masses().size()) throw std::invalid_argument("index out of range");
        auto it = d->dist.masses().begin();
        std::advance(it, static_cast<std::ptrdiff_t>(i));
        *out = it->first;
    });
}

int sel_dist_mass(const sel_dist* d, size_t i, char* num, size_t num_cap, char* den,
                  size_t den_cap) {
    if (d == nullptr) return fail(SEL_ERR_INVALID, "null argument");
    return guarded([&] {
        if (i >= d->dist.masses().size()) throw std::invalid_argument("index out of range");
        auto it = d->dist.masses().begin();
        std::advance(it, static_cast<std::ptrdiff_t>(i));
        copy_string(numerator(it->second).str(), num, num_cap);
        copy_string(denominator(it->second).str(), den, den_cap);
    });
}

const char* sel_dist_json(sel_dist* d) {
    if (d == nullptr) return "";
    if (d->json_cache.empty()) d->json_cache = dist_to_json(d->dist).dump(2);
    return d->json_cache.c_str();
}

void sel_dist_free(sel_dist* d) { delete d; }

int sel_run(const char* config_json, sel_report** out) {
    if (config_json == nullptr || out == nullptr) return fail(SEL_ERR_INVALID, "null argument");
    *out = nullptr;
    return guarded([&] { *out = new sel_report{run_from_json(config_json), {}, {}}; });
}

const char* sel_report_json(sel_report* r) {
    if (r == nullptr) return "";
    if (r->json_cache.empty()) r->json_cache = r->report.json_text();
    return r->json_cache.c_str();
}

const char* sel_report_csv(sel_report* r) {
    if (r == nullptr) return "";
    if (r->csv_cache.empty()) {
        if (guarded([&] { r->csv_cache = r->report.csv_text(); }) != SEL_OK) return nullptr;
    }
    return r->csv_cache.c_str();
}

int sel_report_ok(const sel_report* r) { return (r && r->report.ok) ? 1 : 0; }

void sel_report_free(sel_report* r) { delete r; }

}  // extern "C"
