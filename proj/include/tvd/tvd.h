/*
 * tvd: variational distance between n-fold product distributions.
 *
 * C interface of libtvd. Objects are opaque handles created by the library
 * and released with the matching *_free function. Every fallible call
 * returns a tvd_status; on failure tvd_last_error() describes the problem
 * (per thread, valid until the next failing call). Strings returned through
 * char** out-parameters are owned by the caller and released with
 * tvd_string_free().
 *
 * Numbers that may be exact (probabilities, family parameters) are passed as
 * strings: "3/10", "0.3" and "1e-3" are all accepted. With the rational
 * backend they are read exactly; with the float backend they are parsed as
 * doubles.
 */
#ifndef TVD_TVD_H
#define TVD_TVD_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(TVD_BUILDING_LIBRARY)
#    define TVD_API __declspec(dllexport)
#  else
#    define TVD_API __declspec(dllimport)
#  endif
#else
#  define TVD_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tvd_status {
  TVD_OK = 0,
  TVD_ERR_NEGATIVE_PROBABILITY = 1,
  TVD_ERR_SUM_NOT_ONE = 2,
  TVD_ERR_DUPLICATE_LABEL = 3,
  TVD_ERR_TOO_LARGE = 4,
  TVD_ERR_NOT_TWO_POINT = 5,
  TVD_ERR_PBAR_NOT_POSITIVE = 6,
  TVD_ERR_NONPOSITIVE_MASS = 7,
  TVD_ERR_OUT_OF_RANGE = 8,
  TVD_ERR_INVALID_ARGUMENT = 9,
  TVD_ERR_PARSE = 10,
  TVD_ERR_NULL_POINTER = 11,
  TVD_ERR_INTERNAL = 12
} tvd_status;

typedef enum tvd_backend { TVD_BACKEND_RATIONAL = 0, TVD_BACKEND_FLOAT = 1 } tvd_backend;

typedef enum tvd_engine {
  TVD_ENGINE_AUTO = 0,
  TVD_ENGINE_BRUTE_FORCE = 1,
  TVD_ENGINE_TYPE_CLASS = 2,
  TVD_ENGINE_TWO_POINT = 3
} tvd_engine;

typedef struct tvd_distribution tvd_distribution;
typedef struct tvd_family tvd_family;
typedef struct tvd_chain tvd_chain;
typedef struct tvd_table tvd_table;

/* Work guards of the exact engines. */
typedef struct tvd_limits {
  uint64_t max_outcomes;     /* brute force: |Z|^n, default 1e7 */
  uint64_t max_type_classes; /* type classes, default 1e7 */
} tvd_limits;

typedef struct tvd_mc_estimate {
  double mean;
  double half_width_95;
  uint64_t samples;
  uint64_t seed;
  unsigned shards;
} tvd_mc_estimate;

typedef struct tvd_jensen {
  double lhs;       /* sum_k q(k) s(k) */
  double rhs;       /* s(n (p + p')) */
  double lhs_tilde; /* sum_k q(k) s~(k) */
  double rhs_tilde; /* s~(n (p + p')) */
} tvd_jensen;

typedef struct tvd_path_integral_result {
  double distance;
  double integral;
  double lemma1_rhs;
  double pbar;
  unsigned cells;
} tvd_path_integral_result;

/* ---- misc ------------------------------------------------------------- */

TVD_API const char* tvd_version(void);
TVD_API const char* tvd_status_string(tvd_status status);
TVD_API const char* tvd_last_error(void);
TVD_API void tvd_string_free(char* s);
TVD_API void tvd_limits_default(tvd_limits* out);

/* ---- distributions ---------------------------------------------------- */

/* {"labels": [...], "probs": [...]} or {"probs": [...]}. */
TVD_API tvd_status tvd_distribution_from_json(const char* json, tvd_backend backend, tvd_distribution** out);
/* labels may be NULL (z1, z2, ... are generated). */
TVD_API tvd_status tvd_distribution_create(const char* const* labels, const char* const* probs, size_t size,
                                           tvd_backend backend, tvd_distribution** out);
TVD_API tvd_status tvd_distribution_create_f64(const char* const* labels, const double* probs, size_t size,
                                               tvd_distribution** out);
TVD_API void tvd_distribution_free(tvd_distribution* d);
TVD_API size_t tvd_distribution_size(const tvd_distribution* d);
TVD_API tvd_backend tvd_distribution_backend(const tvd_distribution* d);
TVD_API tvd_status tvd_distribution_to_json(const tvd_distribution* d, char** out);

/* ---- single-letter distance ------------------------------------------- */

/* exact may be NULL; otherwise receives "num/den" (rational) or a decimal. */
TVD_API tvd_status tvd_variational_distance(const tvd_distribution* p, const tvd_distribution* q, double* value,
                                            char** exact);
/* {"diff_set": [...], "pbar": "..." | null} */
TVD_API tvd_status tvd_diff_profile_json(const tvd_distribution* p, const tvd_distribution* q, char** out);
TVD_API tvd_status tvd_triangle_check(const tvd_distribution* p, const tvd_distribution* p_mid,
                                      const tvd_distribution* q, int* holds);

/* ---- product distance ------------------------------------------------- */

/* limits may be NULL (defaults). used may be NULL. */
TVD_API tvd_status tvd_product_distance(const tvd_distribution* p, const tvd_distribution* q, unsigned n,
                                        tvd_engine engine, const tvd_limits* limits, double* value, char** exact,
                                        tvd_engine* used);
TVD_API tvd_status tvd_mc_distance(const tvd_distribution* p, const tvd_distribution* q, unsigned n,
                                   uint64_t samples, uint64_t seed, unsigned shards, tvd_mc_estimate* out);

/* ---- bounds ----------------------------------------------------------- */

TVD_API tvd_status tvd_linear_bound(double delta, unsigned n, double* out, int* capped);
TVD_API tvd_status tvd_lemma1_first_bound(double delta, double pbar, unsigned n, double* out);
TVD_API tvd_status tvd_lemma1_second_bound(double delta, double pbar, unsigned n, double* out);
TVD_API tvd_status tvd_lemma2_first_bound(double p, double p_prime, unsigned n, double* out);
TVD_API tvd_status tvd_lemma2_second_bound(double p, double p_prime, unsigned n, double* out);
TVD_API tvd_status tvd_s_k(double p, double p_prime, double k, double* out);
TVD_API tvd_status tvd_s_tilde_k(double p, double p_prime, double k, double* out);
/* holds is decided exactly against the big-integer left-hand side. */
TVD_API tvd_status tvd_stirling_binom_check(unsigned n, unsigned k, double* lhs, double* rhs, int* holds);
TVD_API tvd_status tvd_maxpot_check(double n, double k, double x, int* holds);
TVD_API tvd_status tvd_derpot_sign_check(double n, double k, double x, int* holds);

/* BoundReport as JSON. lemma1_applicable (may be NULL) is 0 when pbar = 0. */
TVD_API tvd_status tvd_bound_report_json(const tvd_distribution* p, const tvd_distribution* q, unsigned n,
                                         const tvd_limits* limits, char** out, int* lemma1_applicable);

/* ---- two-point families ----------------------------------------------- */

/* t0 may be NULL, meaning t0 = P(z1). */
TVD_API tvd_status tvd_family_create(const tvd_distribution* base, const char* z1, const char* z2, const char* t0,
                                     tvd_family** out);
TVD_API void tvd_family_free(tvd_family* f);
/* delta(P_t^n, P_t0^n). */
TVD_API tvd_status tvd_family_distance(const tvd_family* f, const char* t, unsigned n, double* value, char** exact);
/* Right derivative of delta(P_t^n, P_t0^n) at t0. */
TVD_API tvd_status tvd_family_derivative(const tvd_family* f, unsigned n, double* value, char** exact);
TVD_API tvd_status tvd_family_jensen(const tvd_family* f, unsigned n, tvd_jensen* out);
/* Per-k terms q(k), rbar, inner sums, closed forms, alpha~, beta~, gamma. */
TVD_API tvd_status tvd_family_decomposition_json(const tvd_family* f, unsigned n, char** out);
TVD_API tvd_status tvd_path_integral(const tvd_family* f, const char* t_from, const char* t_to, unsigned n,
                                     unsigned grid, tvd_path_integral_result* out);

/* ---- chains ----------------------------------------------------------- */

TVD_API tvd_status tvd_chain_build(const tvd_distribution* p, const tvd_distribution* q, tvd_chain** out);
TVD_API void tvd_chain_free(tvd_chain* c);
TVD_API size_t tvd_chain_length(const tvd_chain* c);
TVD_API tvd_status tvd_chain_step(const tvd_chain* c, size_t index, tvd_distribution** out);
TVD_API tvd_status tvd_chain_to_json(const tvd_chain* c, char** out);
TVD_API tvd_status tvd_chain_assembly_json(const tvd_distribution* p, const tvd_distribution* q, unsigned n,
                                           const tvd_limits* limits, char** out);

/* ---- experiment tables ------------------------------------------------ */

TVD_API tvd_status tvd_growth_sweep(const tvd_distribution* p, const tvd_distribution* q, unsigned n_max,
                                    const tvd_limits* limits, tvd_table** out);
TVD_API tvd_status tvd_tightness_probe(double pbar, unsigned n_max, double delta, tvd_table** out);
TVD_API tvd_status tvd_constant_probe(unsigned n_max, tvd_table** out);
TVD_API void tvd_table_free(tvd_table* t);
TVD_API size_t tvd_table_rows(const tvd_table* t);
TVD_API size_t tvd_table_columns(const tvd_table* t);
TVD_API const char* tvd_table_column_name(const tvd_table* t, size_t column);
TVD_API double tvd_table_value(const tvd_table* t, size_t row, size_t column);
TVD_API tvd_status tvd_table_to_csv(const tvd_table* t, char** out);
TVD_API tvd_status tvd_table_to_json(const tvd_table* t, char** out);

#ifdef __cplusplus
}
#endif

#endif /* TVD_TVD_H */
