/* Spectral ground-state toolkit: C interface to the shared library.
 *
 * Every function returns an sgs_status; on failure sgs_last_error() holds a
 * message for the calling thread until its next API call. Strings returned
 * through char** out-parameters are heap-allocated; release them with
 * sgs_string_free. Handles are opaque; release them with their _free call.
 * All entry points are deterministic given their inputs (seeds included).
 */
#ifndef SGS_H
#define SGS_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sgs_status {
  SGS_OK = 0,
  SGS_INVALID_INPUT = 2,   /* malformed file, schema, or argument */
  SGS_ASSUMPTION_FAILED = 3, /* violated mathematical precondition */
  SGS_NUMERIC_FAILURE = 4, /* divergence, degeneracy, resource limit */
} sgs_status;

const char* sgs_last_error(void);
void sgs_string_free(char* s);

/* Finite cosine expansion on [0,1]^d (also the potential format):
 * {"dim": d, "coeffs": [{"k": [k1..kd], "v": value}, ...]}. */
typedef struct sgs_series sgs_series;

sgs_status sgs_series_parse(const char* json_text, sgs_series** out);
sgs_status sgs_series_to_json(const sgs_series* s, char** out);
void sgs_series_free(sgs_series* s);
sgs_status sgs_series_dim(const sgs_series* s, int* out);
sgs_status sgs_series_evaluate(const sgs_series* s, const double* x, size_t dim,
                               double* out);
/* Spectral smoothness norm sum_k (1 + pi^s |k|_1^s) |c(k)|, order s >= 0. */
sgs_status sgs_series_barron_norm(const sgs_series* s, double order, double* out);

/* Reference ground state (lambda0, lambda1, gap, normalized eigenfunction). */
typedef struct sgs_truth sgs_truth;

sgs_status sgs_reference_solve(const sgs_series* potential, int cutoff,
                               sgs_truth** out);
sgs_status sgs_truth_parse(const char* json_text, sgs_truth** out);
sgs_status sgs_truth_to_json(const sgs_truth* t, char** out);
void sgs_truth_free(sgs_truth* t);
sgs_status sgs_truth_values(const sgs_truth* t, double* lambda0, double* lambda1,
                            double* gap);

/* Inverse power iteration for the ground eigenvalue; iterations reports the
 * count actually used. */
sgs_status sgs_power_iterate(const char* potential_json, int cutoff, double tol,
                             int max_iters, double* lambda, int* iterations);

/* Verb-level runners. Each takes a JSON config object (unknown keys are
 * rejected; omitted optional keys take documented defaults) and returns
 * reports as JSON and/or CSV text.
 *
 * solve config: {"n", ["m"], ["B"], ["steps"], ["lr0"], ["lr1"], ["adam"],
 *   ["seed"], ["cutoff"], ["gauss_order"], ["qmc_count"]}. When truth_json is
 *   NULL a reference solution is computed at "cutoff" (0 = automatic). */
sgs_status sgs_run_solve(const char* potential_json, const char* config_json,
                         const char* truth_json, char** result_json,
                         char** trace_csv);

/* sweep config: {"n_list", "seeds", "cutoff", ["B"], ["steps"], ["lr0"],
 *   ["lr1"], ["adam"], ["seed"], ["delta"], ["gauss_order"], ["qmc_count"]} */
sgs_status sgs_run_sweep(const char* potential_json, const char* config_json,
                         char** result_json, char** rows_csv);

/* bounds config: {"B", "m", "n", "delta", "v_max", ["v_min"], ["d"],
 *   ["approx_gap"], ["seed"], ["n_sigma"], ["n_restarts"], ["rad_steps"]}.
 * potential_json may be NULL; when present, empirical Rademacher estimates
 * are included. */
sgs_status sgs_run_bounds(const char* config_json, const char* potential_json,
                          char** report_json);

/* stability config: {"cutoff", "trials", ["seed"], ["v_min"], ["v_max"]};
 * bounds for V default to a scan over a fixed validation grid. */
sgs_status sgs_run_stability(const char* potential_json, const char* config_json,
                             char** report_json);

/* approx config: {"m_list", "seeds", ["steps"], ["lr0"], ["lr1"], ["seed"],
 *   ["gauss_order"], ["qmc_count"]}; returns the (m, h1_best, h1_median, eta)
 * table. */
sgs_status sgs_run_approx(const char* target_json, const char* config_json,
                          char** table_csv);

/* barron config: {"s", "cutoffs"}; returns the (cutoff, barron_norm) table. */
sgs_status sgs_run_barron(const char* potential_json, const char* config_json,
                          char** table_csv);

#ifdef __cplusplus
}
#endif

#endif /* SGS_H */
