/* C interface to the ripca library: robust K-dimensional subspace
 * fitting by minimizing the sum of unsquared point-to-subspace
 * distances.
 *
 * All objects are opaque handles created and destroyed by the library.
 * Every fallible call returns a ripca_status; on failure a
 * human-readable message is available from ripca_last_error() (stored
 * per thread). Matrices cross the boundary as row-major double arrays.
 */
#ifndef RIPCA_H
#define RIPCA_H

#include <stdint.h>

#ifdef _WIN32
#define RIPCA_API __declspec(dllexport)
#else
#define RIPCA_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct ripca_dataset ripca_dataset;
typedef struct ripca_fit_result ripca_fit_result;
typedef struct ripca_certify_report ripca_certify_report;

typedef enum ripca_status {
  RIPCA_OK = 0,
  RIPCA_ERR_INVALID_ARG = 1,
  RIPCA_ERR_PARSE = 2,
  RIPCA_ERR_EMPTY_FILE = 3,
  RIPCA_ERR_IO = 4,
  RIPCA_ERR_DIMENSION_MISMATCH = 5,
  RIPCA_ERR_RANK_DEFICIENT = 6,
  RIPCA_ERR_DEGENERATE_DATA = 7,
  RIPCA_ERR_AT_ANCHOR = 8,
  RIPCA_ERR_NOT_ANCHOR = 9,
  RIPCA_ERR_NOT_HORIZONTAL = 10,
  RIPCA_ERR_SINGULAR_PRECONDITION = 11,
  RIPCA_ERR_NEGATIVE_RADICAND = 12,
  RIPCA_ERR_INTERNAL = 13
} ripca_status;

typedef enum ripca_center_mode {
  RIPCA_CENTER_NONE = 0,
  RIPCA_CENTER_MEAN = 1,
  RIPCA_CENTER_GEOMETRIC_MEDIAN = 2
} ripca_center_mode;

typedef enum ripca_scheme {
  RIPCA_SCHEME_DING = 0,
  RIPCA_SCHEME_PRECONDITIONED = 1
} ripca_scheme;

typedef enum ripca_init {
  RIPCA_INIT_STANDARD_PCA = 0,
  RIPCA_INIT_RANDOM = 1,
  RIPCA_INIT_GIVEN = 2
} ripca_init;

typedef enum ripca_termination {
  RIPCA_TERM_GRAD_ZERO = 0,
  RIPCA_TERM_STEP_SMALL = 1,
  RIPCA_TERM_MAX_ITER = 2,
  RIPCA_TERM_HIT_ANCHOR = 3,
  RIPCA_TERM_ANCHOR_DESCENT_EXHAUSTED = 4
} ripca_termination;

typedef enum ripca_verdict {
  RIPCA_VERDICT_STRICT_LOCAL_MIN = 0,
  RIPCA_VERDICT_NOT_MINIMIZER = 1,
  RIPCA_VERDICT_INCONCLUSIVE = 2,
  /* no nonzero point anchored; the smooth critical-point test applies */
  RIPCA_VERDICT_SMOOTH_POINT = 3
} ripca_verdict;

typedef enum ripca_anchor_structure {
  RIPCA_STRUCTURE_SINGLE_DIRECTION = 0,
  RIPCA_STRUCTURE_INDEPENDENT_PLUS_MULTIPLES = 1,
  RIPCA_STRUCTURE_GENERAL = 2
} ripca_anchor_structure;

typedef struct ripca_config {
  int max_iter;
  double tol_step;
  double tol_grad;
  double anchor_tol;
  double cert_tol;
  int scheme;         /* ripca_scheme */
  int init;           /* ripca_init */
  const double* init_basis; /* row-major d*k, required for RIPCA_INIT_GIVEN */
  int restarts;       /* extra seeded random starts on top of the base run */
  uint64_t seed;
  double eps_smoothing; /* <= 0 disables the smoothed objective */
} ripca_config;

RIPCA_API const char* ripca_version(void);
RIPCA_API const char* ripca_status_name(ripca_status s);
/* Message of the last failing call on this thread; empty string if none. */
RIPCA_API const char* ripca_last_error(void);

RIPCA_API void ripca_config_init(ripca_config* cfg);

/* ---- datasets ------------------------------------------------------ */

RIPCA_API ripca_status ripca_dataset_from_csv(const char* path,
                                              int center_mode,
                                              ripca_dataset** out);
RIPCA_API ripca_status ripca_dataset_from_points(const double* points,
                                                 int n, int d,
                                                 int center_mode,
                                                 ripca_dataset** out);
RIPCA_API ripca_status ripca_dataset_gen_fig1(int n_inliers, int n_outliers,
                                              double noise, uint64_t seed,
                                              int center_mode,
                                              ripca_dataset** out);
RIPCA_API ripca_status ripca_dataset_gen_fig2(int center_mode,
                                              ripca_dataset** out);
RIPCA_API ripca_status ripca_dataset_gen_counterexample(int center_mode,
                                                        ripca_dataset** out);
RIPCA_API void ripca_dataset_free(ripca_dataset* ds);

RIPCA_API int ripca_dataset_dim(const ripca_dataset* ds);
RIPCA_API int ripca_dataset_size(const ripca_dataset* ds);
RIPCA_API int ripca_dataset_zero_points(const ripca_dataset* ds);
RIPCA_API int ripca_dataset_center_mode(const ripca_dataset* ds);
/* out must hold dim doubles */
RIPCA_API void ripca_dataset_offset(const ripca_dataset* ds, double* out);
/* the line direction used by the fig1 generator; out holds 2 doubles */
RIPCA_API void ripca_fig1_true_direction(double* out);

/* ---- basic geometry ------------------------------------------------ */

/* sum_i ||(I - A A^T) y_i|| for a row-major d x k basis */
RIPCA_API ripca_status ripca_objective_value(const ripca_dataset* ds,
                                             const double* basis, int k,
                                             double* out);
/* spectral-norm distance between the subspaces of two d x k bases */
RIPCA_API ripca_status ripca_grassmann_distance(int d, int k,
                                                const double* basis1,
                                                const double* basis2,
                                                double* out);
/* ||(I - A A^T) v|| for a d-vector v */
RIPCA_API ripca_status ripca_subspace_residual(int d, int k,
                                               const double* basis,
                                               const double* v, double* out);
/* nearest orthonormal-column matrix to a row-major d x k matrix */
RIPCA_API ripca_status ripca_polar_project(int d, int k, const double* m,
                                           double* out);

/* ---- fitting ------------------------------------------------------- */

RIPCA_API ripca_status ripca_standard_pca(const ripca_dataset* ds, int k,
                                          double* out_basis);

RIPCA_API ripca_status ripca_fit(const ripca_dataset* ds, int k,
                                 const ripca_config* cfg,
                                 ripca_fit_result** out);
RIPCA_API void ripca_fit_result_free(ripca_fit_result* res);

RIPCA_API int ripca_fit_num_runs(const ripca_fit_result* res);
RIPCA_API int ripca_fit_best_run(const ripca_fit_result* res);
RIPCA_API double ripca_fit_run_objective(const ripca_fit_result* res, int run);
RIPCA_API int ripca_fit_run_termination(const ripca_fit_result* res, int run);
RIPCA_API int ripca_fit_run_iterations(const ripca_fit_result* res, int run);
/* out must hold d*k doubles (row-major) */
RIPCA_API void ripca_fit_run_basis(const ripca_fit_result* res, int run,
                                   double* out);
RIPCA_API int ripca_fit_run_trace_length(const ripca_fit_result* res, int run);
/* out holds 6 doubles: r, objective, step_norm, grad_norm, min_residual,
 * decrease_ratio */
RIPCA_API void ripca_fit_run_trace_row(const ripca_fit_result* res, int run,
                                       int i, double* out);
RIPCA_API double ripca_fit_run_min_decrease_ratio(const ripca_fit_result* res,
                                                  int run);
/* NaN when the agreement diagnostic was not computable at the start */
RIPCA_API double ripca_fit_run_scheme_agreement(const ripca_fit_result* res,
                                                int run);
RIPCA_API double ripca_fit_run_final_grad_rel(const ripca_fit_result* res,
                                              int run);
/* 1 when the run ended with an anchor analysis attached */
RIPCA_API int ripca_fit_run_has_anchor_report(const ripca_fit_result* res,
                                              int run);
/* copies the run's anchor analysis; caller frees */
RIPCA_API ripca_status ripca_fit_run_anchor_report(const ripca_fit_result* res,
                                                   int run,
                                                   ripca_certify_report** out);

/* ---- anchor certification ------------------------------------------ */

/* Certifies the basis (polar-projected first). When no nonzero point is
 * anchored the report carries the smooth critical-point test instead.
 */
RIPCA_API ripca_status ripca_certify(const ripca_dataset* ds,
                                     const double* basis, int k,
                                     double anchor_tol, double cert_tol,
                                     ripca_certify_report** out);
RIPCA_API void ripca_certify_report_free(ripca_certify_report* rep);

RIPCA_API int ripca_certify_verdict(const ripca_certify_report* rep);
RIPCA_API int ripca_certify_anchor_count(const ripca_certify_report* rep);
RIPCA_API void ripca_certify_anchor_indices(const ripca_certify_report* rep,
                                            int* out);
RIPCA_API int ripca_certify_structure(const ripca_certify_report* rep);
RIPCA_API int ripca_certify_rank(const ripca_certify_report* rep);
RIPCA_API double ripca_certify_min_residual(const ripca_certify_report* rep);
RIPCA_API double ripca_certify_objective(const ripca_certify_report* rep);
/* basis actually certified (after polar projection); out holds d*k */
RIPCA_API void ripca_certify_basis(const ripca_certify_report* rep,
                                   double* out);
RIPCA_API int ripca_certify_num_conditions(const ripca_certify_report* rep);
RIPCA_API const char* ripca_certify_condition_name(
    const ripca_certify_report* rep, int i);
RIPCA_API double ripca_certify_condition_value(
    const ripca_certify_report* rep, int i);
RIPCA_API int ripca_certify_has_descent(const ripca_certify_report* rep);
/* out holds d*k doubles */
RIPCA_API void ripca_certify_descent_direction(
    const ripca_certify_report* rep, double* out);
RIPCA_API double ripca_certify_descent_derivative(
    const ripca_certify_report* rep);
/* smooth-case fields (verdict == RIPCA_VERDICT_SMOOTH_POINT) */
RIPCA_API int ripca_certify_critical(const ripca_certify_report* rep);
RIPCA_API double ripca_certify_grad_rel(const ripca_certify_report* rep);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* RIPCA_H */
