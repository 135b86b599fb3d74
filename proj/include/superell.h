/* SPDX-FileCopyrightText: 2026 superell developers
 * SPDX-License-Identifier: Apache-2.0
 *
 * C API for the superell library: point-count statistics on superelliptic
 * curves y^m = f(x) over small finite fields.
 *
 * All functions return SEL_OK (0) or a negative error code; sel_last_error()
 * carries a thread-local message for the most recent failure. Handles are
 * opaque and must be released with the matching *_free function. Strings
 * returned as const char* are owned by the handle they came from and stay
 * valid until it is freed.
 */
#ifndef SUPERELL_H
#define SUPERELL_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define SEL_OK 0
#define SEL_ERR_INVALID (-1)  /* bad arguments */
#define SEL_ERR_DOMAIN (-2)   /* math-domain violation (zero inverse, pole, ...) */
#define SEL_ERR_BUDGET (-3)   /* enumeration budget or size bound exceeded */
#define SEL_ERR_NOMEM (-4)
#define SEL_ERR_INTERNAL (-5)

typedef struct sel_field sel_field;
typedef struct sel_dist sel_dist;
typedef struct sel_report sel_report;

const char* sel_version(void);
/* Message for the most recent failing call on this thread ("" if none). */
const char* sel_last_error(void);

/* ------------------------------------------------------------------ */
/* finite fields F_{p^k}; elements are canonical integer encodings < q  */
/* ------------------------------------------------------------------ */

int sel_field_create(uint32_t p, uint32_t k, sel_field** out);
int sel_field_create_bounded(uint32_t p, uint32_t k, uint64_t order_bound, sel_field** out);
void sel_field_free(sel_field* f);

uint64_t sel_field_order(const sel_field* f);
uint32_t sel_field_generator(const sel_field* f);
/* "x^2+x+1 over F_2" for extensions, "" for prime fields. */
const char* sel_field_modulus(const sel_field* f);

int sel_field_add(const sel_field* f, uint32_t a, uint32_t b, uint32_t* out);
int sel_field_sub(const sel_field* f, uint32_t a, uint32_t b, uint32_t* out);
int sel_field_mul(const sel_field* f, uint32_t a, uint32_t b, uint32_t* out);
int sel_field_neg(const sel_field* f, uint32_t a, uint32_t* out);
int sel_field_inv(const sel_field* f, uint32_t a, uint32_t* out);
int sel_field_pow(const sel_field* f, uint32_t a, uint64_t e, uint32_t* out);
/* *out = 1 iff nonzero a is an r-th power in F_q^*. */
int sel_field_is_rth_power(const sel_field* f, uint32_t a, uint64_t r, int* out);
/* Number of y with y^m = a (total: a = 0 gives 1). */
int sel_field_root_count(const sel_field* f, uint32_t a, uint64_t m, uint32_t* out);

/* ------------------------------------------------------------------ */
/* exact limit distributions                                            */
/* ------------------------------------------------------------------ */

#define SEL_VARIANT_SINGULAR 0
#define SEL_VARIANT_NORMALIZATION 1

/* Per-site limiting distribution for y^m = f(x) with n-th power-free f. */
int sel_theory_xj(uint32_t p, uint32_t k, uint32_t m, uint32_t n, int variant, sel_dist** out);
/* (degree-limit, signature-limit) trigonal pmfs; requires q = 1 mod 3. */
int sel_theory_trigonal_contrast(uint32_t p, uint32_t k, sel_dist** degree_limit,
                                 sel_dist** signature_limit);
/* Distribution of the sum of `copies` iid draws. */
int sel_dist_convolve_power(const sel_dist* d, uint64_t copies, sel_dist** out);

size_t sel_dist_size(const sel_dist* d);
int sel_dist_outcome(const sel_dist* d, size_t i, int64_t* out);
/* Mass of entry i as decimal strings; buffers of the given capacities. */
int sel_dist_mass(const sel_dist* d, size_t i, char* num, size_t num_cap, char* den,
                  size_t den_cap);
/* {outcome: {num, den}} JSON; owned by the handle. */
const char* sel_dist_json(sel_dist* d);
void sel_dist_free(sel_dist* d);

/* ------------------------------------------------------------------ */
/* experiment runs                                                      */
/* ------------------------------------------------------------------ */

/* config_json must carry "command": scan | sample | verify-counting |
 * verify-local | convergence | theory | contrast, plus the command's
 * parameters (see README). The environment variable SUPERELL_BUDGET
 * overrides the enumeration budget. */
int sel_run(const char* config_json, sel_report** out);

/* Canonical JSON document; owned by the report. */
const char* sel_report_json(sel_report* r);
/* Histogram CSV ("outcome,count,empirical,theory"); scalar statistics only. */
const char* sel_report_csv(sel_report* r);
/* 1 when the run verified everything it checked (always 1 for plain scans). */
int sel_report_ok(const sel_report* r);
void sel_report_free(sel_report* r);

#ifdef __cplusplus
}
#endif

#endif /* SUPERELL_H */
