/*
 * cfrelay C API.
 *
 * Objects are opaque handles released with the matching *_free function.
 * Every call that can fail returns a cfr_status; on failure a message is
 * available from cfr_last_error() until the next failing call on the same thread.
 * Strings returned through char** are heap allocated and released with
 * cfr_string_free(). Relay subsets are bitmasks: bit (i-1) is relay i.
 */
#ifndef CFRELAY_H
#define CFRELAY_H

#include <stdint.h>

#if defined(_WIN32)
#define CFR_API __declspec(dllexport)
#else
#define CFR_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cfr_status {
  CFR_OK = 0,
  CFR_ERR_IO = 1,
  CFR_ERR_PARSE = 2,
  CFR_ERR_INVALID_SPEC = 3,
  CFR_ERR_MODE = 4,
  CFR_ERR_ARGUMENT = 5,
  CFR_ERR_NUMERICAL = 6,
  CFR_ERR_INTERNAL = 7
} cfr_status;

typedef struct cfr_spec cfr_spec;
typedef struct cfr_context cfr_context;

/* Variable selector: X, Y and per-relay masks for X_i, Y_i, Yhat_i. */
typedef struct cfr_varset {
  int x;
  int y;
  uint32_t xs;
  uint32_t ys;
  uint32_t yhats;
} cfr_varset;

typedef enum cfr_family { CFR_FAMILY_I = 0, CFR_FAMILY_J = 1, CFR_FAMILY_K = 2, CFR_FAMILY_R = 3 } cfr_family;

typedef enum cfr_feasibility {
  CFR_I_NONSTRICT = 0,
  CFR_J_NONSTRICT = 1,
  CFR_K_STRICT = 2,
  CFR_K_NONSTRICT = 3
} cfr_feasibility;

CFR_API const char* cfr_version(void);
CFR_API const char* cfr_last_error(void);
CFR_API const char* cfr_status_name(cfr_status status);
CFR_API void cfr_string_free(char* s);

/* ---- channel specs ---- */
CFR_API cfr_status cfr_spec_load_file(const char* path, cfr_spec** out);
CFR_API cfr_status cfr_spec_parse(const char* json_text, cfr_spec** out);
CFR_API void cfr_spec_free(cfr_spec* spec);
/* CFR_OK when valid, CFR_ERR_INVALID_SPEC otherwise; issues_json (optional) lists every issue. */
CFR_API cfr_status cfr_spec_validate(const cfr_spec* spec, char** issues_json);
CFR_API cfr_status cfr_spec_to_json(const cfr_spec* spec, char** out);
CFR_API cfr_status cfr_spec_save_file(const cfr_spec* spec, const char* path);
CFR_API int cfr_spec_relays(const cfr_spec* spec);
CFR_API int cfr_spec_is_digital(const cfr_spec* spec);
CFR_API cfr_status cfr_apply_erasure(const cfr_spec* spec, uint32_t relays, double p, cfr_spec** out);

/* ---- evaluation contexts (joint law + rate vector) ---- */
/* rates may be NULL: Digital specs use their link capacities, Full specs use zeros. */
CFR_API cfr_status cfr_context_create(const cfr_spec* spec, const double* rates, int n_rates,
                                      cfr_context** out);
CFR_API void cfr_context_free(cfr_context* ctx);
CFR_API cfr_status cfr_cond_mutual_info(const cfr_context* ctx, cfr_varset a, cfr_varset b,
                                        cfr_varset c, double* out);
CFR_API cfr_status cfr_cond_entropy(const cfr_context* ctx, cfr_varset a, cfr_varset c,
                                    double* out);
/* family_{A,B}(S); the R family ignores a and evaluates R_B(S). */
CFR_API cfr_status cfr_set_function(const cfr_context* ctx, cfr_family family, uint32_t a,
                                    uint32_t b, uint32_t s, double* out);
CFR_API cfr_status cfr_largest_feasible_set(const cfr_context* ctx, cfr_feasibility kind,
                                            uint32_t* out);
/* *found is 0 when the peeling precondition fails. */
CFR_API cfr_status cfr_peel_supported_subset(const cfr_context* ctx, cfr_feasibility kind,
                                             uint32_t a, uint32_t b, uint32_t* out, int* found);

/* ---- reports (JSON) ---- */
/* scheme: "all", "cfs", "cfj", "ruj", "cbs" or "cbj". m (nullable) restricts RUJ's relay set. */
CFR_API cfr_status cfr_rates_report(const cfr_context* ctx, const char* scheme, const uint32_t* m,
                                    char** json);
CFR_API cfr_status cfr_sets_report(const cfr_context* ctx, char** json);

typedef struct cfr_search_config {
  const char* scheme; /* "cfs", "cfj", "ruj", "cbs", "cbj" */
  int free_all;       /* 0: compressions only, 1: also p_x and p_xi */
  int restarts;
  int iterations;
  double initial_step;
  double decay;
  uint64_t seed;
  double tolerance;
  int enumerate_deterministic;
  int threads;
} cfr_search_config;

CFR_API void cfr_search_config_default(cfr_search_config* cfg);
/* best (nullable) receives the optimized spec. */
CFR_API cfr_status cfr_optimize(const cfr_spec* spec_template, const cfr_search_config* cfg,
                                char** result_json, cfr_spec** best);

typedef struct cfr_verify_config {
  const char* suite; /* "lemmas", "theorems" or "optima" */
  const char* mode;  /* "digital", "full" or "both" */
  int n;
  int alphabet_x, alphabet_y, alphabet_xi, alphabet_yi, alphabet_yhat;
  uint64_t seed;
  uint64_t instances;
  double degenerate_ratio;
  double max_rate;
  int threads;
  int restarts;   /* optima suite */
  int iterations; /* optima suite */
} cfr_verify_config;

CFR_API void cfr_verify_config_default(cfr_verify_config* cfg);
/* *passed is 1 when every check passed. */
CFR_API cfr_status cfr_verify(const cfr_verify_config* cfg, char** report_json, int* passed);

#ifdef __cplusplus
}
#endif

#endif /* CFRELAY_H */
