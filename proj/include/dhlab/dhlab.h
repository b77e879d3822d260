/*
 * dhlab C API.
 *
 * Every object is an opaque handle returned by a create, parse, run or
 * compute call and released with the matching free function. Calls return a
 * dhlab_status; on failure dhlab_last_error() holds a message for the calling
 * thread until its next failing call. Strings returned through char** are
 * heap-allocated and must be released with dhlab_string_free.
 */
#ifndef DHLAB_DHLAB_H
#define DHLAB_DHLAB_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(DHLAB_BUILDING)
#    define DHLAB_API __declspec(dllexport)
#  else
#    define DHLAB_API __declspec(dllimport)
#  endif
#else
#  define DHLAB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dhlab_status {
  DHLAB_OK = 0,
  DHLAB_ERR_INVALID_ARGUMENT = 1,
  DHLAB_ERR_DIMENSION = 2,
  DHLAB_ERR_CHART_MISMATCH = 3,
  DHLAB_ERR_UNSUPPORTED_INTEGRAND = 4,
  DHLAB_ERR_GAUGE_REJECTED = 5,
  DHLAB_ERR_DEGENERATE_WINDOW = 6,
  DHLAB_ERR_DOMAIN = 7,
  DHLAB_ERR_EMPTY_MEASURE = 8,
  DHLAB_ERR_EMPTY_POLYTOPE = 9,
  DHLAB_ERR_UNBOUNDED = 10,
  DHLAB_ERR_INSUFFICIENT_DATA = 11,
  DHLAB_ERR_PARSE = 12,
  DHLAB_ERR_NULL_POINTER = 13,
  DHLAB_ERR_INTERNAL = 14
} dhlab_status;

typedef struct dhlab_construction dhlab_construction;
typedef struct dhlab_density dhlab_density;
typedef struct dhlab_violation dhlab_violation;
typedef struct dhlab_polytope dhlab_polytope;
typedef struct dhlab_profile dhlab_profile;

DHLAB_API const char* dhlab_version(void);
DHLAB_API const char* dhlab_status_name(dhlab_status status);
DHLAB_API const char* dhlab_last_error(void);
DHLAB_API void dhlab_string_free(char* s);

/* ---- construction ------------------------------------------------------ */

/* c1, c2 are exact rational literals ("2", "5/2", "2.5"). The verification
 * battery runs immediately; a failed identity is recorded in the flags, not
 * returned as an error. */
DHLAB_API dhlab_status dhlab_construction_create(const char* c1, const char* c2, double lower, double upper,
                                                 dhlab_construction** out);
DHLAB_API void dhlab_construction_free(dhlab_construction* c);

typedef struct dhlab_verify_flags {
  int closed;
  int moment_identity;
  int nondegenerate_on_window;
  int chern_computed;
  int passed;
} dhlab_verify_flags;

DHLAB_API dhlab_status dhlab_construction_flags(const dhlab_construction* c, dhlab_verify_flags* out);
/* Report plus the serialized connection and symplectic forms. */
DHLAB_API dhlab_status dhlab_construction_report_json(const dhlab_construction* c, char** out);
DHLAB_API dhlab_status dhlab_construction_report_text(const dhlab_construction* c, char** out);
/* Analytic DH density normalized to unit mass on the window, at s (0 outside). */
DHLAB_API dhlab_status dhlab_construction_density_at(const dhlab_construction* c, double s, double* out);
/* Human-readable analytic density, e.g. "t^2 - 5*t + 7". */
DHLAB_API dhlab_status dhlab_construction_density_string(const dhlab_construction* c, char** out);

/* ---- Monte-Carlo DH density -------------------------------------------- */

typedef struct dhlab_sampler_config {
  uint64_t sample_count;
  size_t bins;
  uint64_t seed;
  unsigned threads; /* 0: hardware concurrency */
  int flat;         /* 1: constant Liouville density instead of omega^3 */
} dhlab_sampler_config;

DHLAB_API void dhlab_sampler_config_default(dhlab_sampler_config* cfg);
DHLAB_API dhlab_status dhlab_density_run(const dhlab_construction* c, const dhlab_sampler_config* cfg,
                                         dhlab_density** out);
DHLAB_API void dhlab_density_free(dhlab_density* d);

typedef struct dhlab_density_summary {
  double max_rel_error;
  size_t worst_bin;
  size_t bins;
  size_t bins_beyond_3sigma;
  size_t center_bin; /* bin containing the window midpoint */
  double center_s;
  double center_mc_density;
  double center_analytic_density;
} dhlab_density_summary;

DHLAB_API dhlab_status dhlab_density_summary_get(const dhlab_density* d, dhlab_density_summary* out);
DHLAB_API dhlab_status dhlab_density_bin(const dhlab_density* d, size_t k, double* center, double* analytic,
                                         double* mc, double* stderr_out, double* z);
/* bin_center,analytic_density,mc_density,stderr,z_score with provenance. */
DHLAB_API dhlab_status dhlab_density_csv(const dhlab_density* d, char** out);
DHLAB_API const char* dhlab_generator_name(void);

/* ---- log-concavity ------------------------------------------------------ */

DHLAB_API dhlab_status dhlab_logconcavity_analytic(const dhlab_construction* c, dhlab_violation** out);
DHLAB_API dhlab_status dhlab_logconcavity_discrete(const double* s, const double* f, size_t n, double tol,
                                                   dhlab_violation** out);
DHLAB_API void dhlab_violation_free(dhlab_violation* v);
/* 1 or 0; -1 for NULL. */
DHLAB_API int dhlab_violation_log_concave(const dhlab_violation* v);
DHLAB_API size_t dhlab_violation_interval_count(const dhlab_violation* v);
DHLAB_API dhlab_status dhlab_violation_interval(const dhlab_violation* v, size_t i, double* lo, double* hi);
/* {"log_concave": b, "intervals": [[lo,hi]...], "witnesses": [[s,g]...]} */
DHLAB_API dhlab_status dhlab_violation_json(const dhlab_violation* v, char** out);

/* ---- toric slice volumes ------------------------------------------------ */

/* {"dim": d, "halfspaces": [{"a": [...], "b": v}, ...]} */
DHLAB_API dhlab_status dhlab_polytope_parse(const char* json, dhlab_polytope** out);
DHLAB_API void dhlab_polytope_free(dhlab_polytope* p);
DHLAB_API size_t dhlab_polytope_dim(const dhlab_polytope* p);
DHLAB_API dhlab_status dhlab_polytope_range(const dhlab_polytope* p, size_t axis, double* lo, double* hi);

typedef enum dhlab_slice_method { DHLAB_SLICE_EXACT2D = 0, DHLAB_SLICE_MC = 1 } dhlab_slice_method;

DHLAB_API dhlab_status dhlab_profile_compute(const dhlab_polytope* p, size_t axis, size_t bins,
                                             dhlab_slice_method method, uint64_t mc_n, uint64_t seed,
                                             dhlab_profile** out);
DHLAB_API void dhlab_profile_free(dhlab_profile* f);
DHLAB_API size_t dhlab_profile_size(const dhlab_profile* f);
DHLAB_API dhlab_status dhlab_profile_point(const dhlab_profile* f, size_t k, double* s, double* volume,
                                           double* stderr_out);
/* s,volume,stderr; `comment` (may be NULL) becomes "# " header lines. */
DHLAB_API dhlab_status dhlab_profile_csv(const dhlab_profile* f, const char* comment, char** out);
/* Trimmed discrete log-concavity test with `sigmas` standard errors of slack. */
DHLAB_API dhlab_status dhlab_profile_prekopa(const dhlab_profile* f, double tol, double sigmas,
                                             dhlab_violation** out);

#ifdef __cplusplus
}
#endif

#endif /* DHLAB_DHLAB_H */
