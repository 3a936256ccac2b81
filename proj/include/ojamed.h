/*
 * ojamed - multivariate medians from simplex volumes, with the related sign,
 * rank and signed-rank scores, scatter estimates and location tests.
 *
 * C interface of the shared library. All objects are opaque handles created
 * and destroyed here; every fallible call returns an ojamed_status and leaves
 * a human-readable message in ojamed_last_error() (thread local) on failure.
 * Buffers are caller-allocated, row-major, and sized from the dataset.
 */

#ifndef OJAMED_H
#define OJAMED_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define OJAMED_API __declspec(dllexport)
#else
#define OJAMED_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ojamed_status {
  OJAMED_OK = 0,
  OJAMED_ERR_ARGUMENT = 1, /* invalid argument or precondition */
  OJAMED_ERR_PARSE = 2,    /* malformed textual input */
  OJAMED_ERR_CAP = 3,      /* enumeration / grid resource guard tripped */
  OJAMED_ERR_NUMERIC = 4,  /* singular scatter or other numeric failure */
  OJAMED_ERR_NOMEM = 5
} ojamed_status;

typedef struct ojamed_dataset ojamed_dataset;
typedef struct ojamed_median_result ojamed_median_result;
typedef struct ojamed_scores ojamed_scores;
typedef struct ojamed_test_result ojamed_test_result;

OJAMED_API const char* ojamed_version(void);

/* Message for the most recent failing call on this thread ("" if none). */
OJAMED_API const char* ojamed_last_error(void);

/* ---- datasets ---- */

/* values: n*k doubles, row major, one observation per row; all finite. */
OJAMED_API ojamed_status ojamed_dataset_create(const double* values, size_t n, size_t k,
                                               ojamed_dataset** out);
OJAMED_API void ojamed_dataset_free(ojamed_dataset* ds);
OJAMED_API size_t ojamed_dataset_rows(const ojamed_dataset* ds);
OJAMED_API size_t ojamed_dataset_cols(const ojamed_dataset* ds);

/* ---- median computation ---- */

typedef enum ojamed_algorithm {
  OJAMED_ALG_EXACT = 0,
  OJAMED_ALG_BOUNDED_EXACT = 1,
  OJAMED_ALG_GRID = 2,
  OJAMED_ALG_EVOLUTIONARY = 3,
  OJAMED_ALG_ORACLE = 4 /* brute-force ground truth; small inputs only */
} ojamed_algorithm;

typedef struct ojamed_median_opts {
  ojamed_algorithm algorithm;
  uint64_t seed;
  int sp;        /* independent runs averaged into the result, >= 1 */
  int raw;       /* evolutionary: skip the whitening transform */
  uint64_t max_enum; /* subset enumeration cap; 0 = library default (5e7) */

  /* exact / bounded exact */
  int max_rounds;      /* 0 = number of observations */
  int line_sweep;      /* nonzero: piecewise-linear sweep line search */
  double volume_ratio; /* bounded region target, default 1e-8 */

  /* grid */
  int grid_spacing_divisor;      /* default 10 */
  double grid_spacing_threshold; /* 0 = 1e-3 * data range */
  double grid_alpha;             /* default 0.05 */
  int grid_hyperplanes_per_round; /* default 50 */

  /* evolutionary */
  double evo_sigma_init;      /* initial mutation variance, default 1.0 */
  int evo_mutations;          /* mutations per step, default 10 */
  int evo_sigma_ada;          /* adaptation period in steps, default 10 */
  double evo_ada_factor;      /* variance factor, default 1.5 */
  double evo_sigma_log10_dec; /* stop criterion, default 4 */
  uint64_t evo_subsets;       /* tuple sample size; 0 = min(1000, total) */
  int evo_use_all_subsets;
  int evo_max_steps; /* default 10000 */
} ojamed_median_opts;

/* Fill every field with its default. */
OJAMED_API void ojamed_median_opts_init(ojamed_median_opts* opts);

OJAMED_API ojamed_status ojamed_median(const ojamed_dataset* ds, const ojamed_median_opts* opts,
                                       ojamed_median_result** out);

OJAMED_API size_t ojamed_median_result_dim(const ojamed_median_result* r);
OJAMED_API void ojamed_median_result_point(const ojamed_median_result* r, double* out);
OJAMED_API double ojamed_median_result_objective(const ojamed_median_result* r);
OJAMED_API const char* ojamed_median_result_algorithm(const ojamed_median_result* r);
OJAMED_API uint64_t ojamed_median_result_seed(const ojamed_median_result* r);
/* Named numeric diagnostics (iterations, hyperplanes, ...) in stable order. */
OJAMED_API size_t ojamed_median_result_diag_count(const ojamed_median_result* r);
OJAMED_API const char* ojamed_median_result_diag_name(const ojamed_median_result* r, size_t i);
OJAMED_API double ojamed_median_result_diag_value(const ojamed_median_result* r, size_t i);
/* Semicolon-joined condition flags (e.g. singular_scatter_fallback); "". */
OJAMED_API const char* ojamed_median_result_notes(const ojamed_median_result* r);
OJAMED_API void ojamed_median_result_free(ojamed_median_result* r);

/* Criterion value (sum of simplex volumes over all k-tuples closed with
 * `point`). max_enum = 0 uses the library default cap. */
OJAMED_API ojamed_status ojamed_objective(const ojamed_dataset* ds, const double* point,
                                          uint64_t max_enum, double* out);

/* ---- scores and scatter ---- */

typedef enum ojamed_score_family {
  OJAMED_FAMILY_OJA = 0,
  OJAMED_FAMILY_MARGINAL = 1,
  OJAMED_FAMILY_SPATIAL = 2
} ojamed_score_family;

typedef enum ojamed_score_kind {
  OJAMED_SCORE_SIGN = 0,
  OJAMED_SCORE_RANK = 1,
  OJAMED_SCORE_SIGNED_RANK = 2
} ojamed_score_kind;

typedef enum ojamed_center_kind {
  OJAMED_CENTER_DEFAULT = 0, /* the family's own median */
  OJAMED_CENTER_OJA_MEDIAN = 1,
  OJAMED_CENTER_COMP_MEDIAN = 2, /* vector of marginal medians */
  OJAMED_CENTER_SPATIAL_MEDIAN = 3,
  OJAMED_CENTER_MEAN = 4,
  OJAMED_CENTER_EXPLICIT = 5
} ojamed_center_kind;

typedef struct ojamed_center_spec {
  ojamed_center_kind kind;
  const double* point; /* OJAMED_CENTER_EXPLICIT: k doubles */
  uint64_t median_seed; /* seed of the median run resolving the center */
} ojamed_center_spec;

/* center == NULL means the per-definition default for the family. */
OJAMED_API ojamed_status ojamed_scores_compute(const ojamed_dataset* ds,
                                               ojamed_score_family family, ojamed_score_kind kind,
                                               const ojamed_center_spec* center, uint64_t max_enum,
                                               ojamed_scores** out);

OJAMED_API size_t ojamed_scores_rows(const ojamed_scores* s);
OJAMED_API size_t ojamed_scores_cols(const ojamed_scores* s);
OJAMED_API void ojamed_scores_values(const ojamed_scores* s, double* out /* rows*cols */);
/* 1 and the resolved center written to out (k doubles) for sign-type scores;
 * 0 for center-free (rank-type) scores. */
OJAMED_API int ojamed_scores_center(const ojamed_scores* s, double* out);
OJAMED_API void ojamed_scores_free(ojamed_scores* s);

/* Gram matrix (1/n) sum s_i s_i^T of sign or rank scores; out = k*k doubles,
 * row major. */
OJAMED_API ojamed_status ojamed_score_cov(const ojamed_dataset* ds, ojamed_score_family family,
                                          ojamed_score_kind kind,
                                          const ojamed_center_spec* center, uint64_t max_enum,
                                          double* out);

/* ---- location tests ---- */

typedef enum ojamed_test_method {
  OJAMED_TEST_ASYMPTOTIC = 0,
  OJAMED_TEST_PERMUTATION = 1
} ojamed_test_method;

/* One-sample test of location mu0 (k doubles); kind: sign or signed rank. */
OJAMED_API ojamed_status ojamed_one_sample_test(const ojamed_dataset* ds, const double* mu0,
                                                ojamed_score_kind kind, ojamed_test_method method,
                                                int replications, uint64_t seed, uint64_t max_enum,
                                                ojamed_test_result** out);

/* C-sample equal-locations test; labels: n group ids; kind: sign or rank. */
OJAMED_API ojamed_status ojamed_c_sample_test(const ojamed_dataset* ds, const int32_t* labels,
                                              ojamed_score_kind kind, ojamed_test_method method,
                                              int replications, uint64_t seed, uint64_t max_enum,
                                              ojamed_test_result** out);

OJAMED_API double ojamed_test_result_statistic(const ojamed_test_result* t);
OJAMED_API int ojamed_test_result_df(const ojamed_test_result* t);
OJAMED_API double ojamed_test_result_p_value(const ojamed_test_result* t);
OJAMED_API int ojamed_test_result_replications(const ojamed_test_result* t);
OJAMED_API uint64_t ojamed_test_result_seed(const ojamed_test_result* t);
OJAMED_API int ojamed_test_result_groups(const ojamed_test_result* t);
/* Nonzero when the score covariance was rank deficient (df reduced). */
OJAMED_API int ojamed_test_result_singular_cov(const ojamed_test_result* t);
OJAMED_API void ojamed_test_result_free(ojamed_test_result* t);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* OJAMED_H */
