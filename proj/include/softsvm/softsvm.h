/*
 * softsvm.h - C interface to the Soft-SVM regression library.
 *
 * Objects are opaque handles created by the library and released with the
 * matching *_free function. Every fallible call returns a softsvm_status;
 * on failure softsvm_last_error() describes the problem for the calling
 * thread until its next library call.
 */
#ifndef SOFTSVM_H
#define SOFTSVM_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(SOFTSVM_BUILDING)
#    define SOFTSVM_API __declspec(dllexport)
#  else
#    define SOFTSVM_API __declspec(dllimport)
#  endif
#else
#  define SOFTSVM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum softsvm_status {
  SOFTSVM_OK = 0,
  SOFTSVM_ERR_INVALID_ARGUMENT = 1, /* bad parameter, spec string or shape */
  SOFTSVM_ERR_DATA = 2,             /* malformed or unusable data */
  SOFTSVM_ERR_IO = 3,               /* file could not be read or written */
  SOFTSVM_ERR_DOMAIN = 4,           /* argument outside a function's domain */
  SOFTSVM_ERR_NUMERIC = 5,          /* singular linear system */
  SOFTSVM_ERR_INTERNAL = 6
} softsvm_status;

typedef struct softsvm_dataset softsvm_dataset;
typedef struct softsvm_model softsvm_model;
typedef struct softsvm_cv_report softsvm_cv_report;

SOFTSVM_API const char* softsvm_last_error(void);
SOFTSVM_API const char* softsvm_status_name(softsvm_status status);
SOFTSVM_API const char* softsvm_version(void);
/* Releases strings returned through char** out-parameters. */
SOFTSVM_API void softsvm_string_free(char* s);

/* ---- family functions ------------------------------------------------- */

typedef enum softsvm_family_fn {
  SOFTSVM_FN_CUMULANT = 0,
  SOFTSVM_FN_MEAN,
  SOFTSVM_FN_VARIANCE,
  SOFTSVM_FN_THETA_FROM_ETA,
  SOFTSVM_FN_ETA_FROM_THETA,
  SOFTSVM_FN_INVERSE_MEAN,
  SOFTSVM_FN_LINK,
  SOFTSVM_FN_COMPOSITE_MEAN,
  SOFTSVM_FN_VARIANCE_OF_MEAN
} softsvm_family_fn;

SOFTSVM_API softsvm_status softsvm_family_eval(double kappa, double alpha, softsvm_family_fn fn, double x,
                                               double* out);

/* Writes theta,cumulant,mean,variance,mu,variance_of_mean for theta over
 * range_spec "lo:hi:step". */
SOFTSVM_API softsvm_status softsvm_curves_write_csv(double kappa, double alpha, const char* range_spec,
                                                    const char* path);

/* ---- datasets ---------------------------------------------------------- */

/* Label rule: when use_threshold is nonzero, label = (value >= threshold);
 * otherwise label = (value == positive_value), positive_value defaulting to "1". */
typedef struct softsvm_label_rule {
  const char* positive_value;
  double threshold;
  int use_threshold;
} softsvm_label_rule;

/* A NULL or empty label column loads every column as a feature with all labels 0. */
SOFTSVM_API softsvm_status softsvm_dataset_load_csv(const char* path, const char* label_column,
                                                    const softsvm_label_rule* rule, softsvm_dataset** out);
SOFTSVM_API softsvm_status softsvm_dataset_simulate(size_t n, double rho, double sigma, uint64_t seed,
                                                    softsvm_dataset** out);
/* Features followed by a "y" column. */
SOFTSVM_API softsvm_status softsvm_dataset_write_csv(const softsvm_dataset* ds, const char* path);
SOFTSVM_API size_t softsvm_dataset_rows(const softsvm_dataset* ds);
SOFTSVM_API size_t softsvm_dataset_features(const softsvm_dataset* ds);
SOFTSVM_API size_t softsvm_dataset_count_label(const softsvm_dataset* ds, int label);
SOFTSVM_API void softsvm_dataset_free(softsvm_dataset* ds);

/* ---- fitting ----------------------------------------------------------- */

typedef struct softsvm_fit_config {
  double lambda;
  double epsilon;
  double nu;
  int max_outer_iters;
  int max_newton_iters;
  double kappa_min, kappa_max;
  double alpha_min, alpha_max;
  int fix_kappa;        /* nonzero: hold kappa at kappa_value */
  double kappa_value;
  int fix_alpha;        /* nonzero: hold alpha at alpha_value */
  double alpha_value;
  int expected_weights; /* nonzero: Fisher scoring weights in the beta step */
  double fd_step;
  int standardize;      /* nonzero: standardize features before fitting */
} softsvm_fit_config;

/* Fills the documented defaults. */
SOFTSVM_API void softsvm_fit_config_init(softsvm_fit_config* cfg);

SOFTSVM_API softsvm_status softsvm_fit(const softsvm_dataset* ds, const softsvm_fit_config* cfg,
                                       softsvm_model** out);

typedef struct softsvm_model_summary {
  double kappa;
  double alpha;
  double lambda;
  double intercept;
  double penalized_loglik;
  int iterations;
  int converged;
  size_t n_features;
} softsvm_model_summary;

SOFTSVM_API softsvm_status softsvm_model_summary_get(const softsvm_model* m, softsvm_model_summary* out);
/* Copies the non-intercept coefficients; len must equal n_features. */
SOFTSVM_API softsvm_status softsvm_model_coefficients(const softsvm_model* m, double* out, size_t len);
SOFTSVM_API softsvm_status softsvm_model_soft_margin(const softsvm_model* m, double* out);
SOFTSVM_API softsvm_status softsvm_model_to_json(const softsvm_model* m, char** out);
SOFTSVM_API softsvm_status softsvm_model_from_json(const char* json, softsvm_model** out);
SOFTSVM_API softsvm_status softsvm_model_save(const softsvm_model* m, const char* path);
SOFTSVM_API softsvm_status softsvm_model_load(const char* path, softsvm_model** out);
SOFTSVM_API void softsvm_model_free(softsvm_model* m);

/* ---- prediction -------------------------------------------------------- */

typedef enum softsvm_point_type {
  SOFTSVM_POINT_SOFT_SUPPORT_VECTOR = 0,
  SOFTSVM_POINT_DEAD_ZONE = 1,
  SOFTSVM_POINT_INLIER = 2
} softsvm_point_type;

typedef struct softsvm_diagnose_options {
  double v_threshold;
  double mu_band;
} softsvm_diagnose_options;

SOFTSVM_API void softsvm_diagnose_options_init(softsvm_diagnose_options* opts);

/* Any of the output arrays may be NULL; non-NULL arrays need len == rows. */
SOFTSVM_API softsvm_status softsvm_predict(const softsvm_model* m, const softsvm_dataset* ds,
                                           const softsvm_diagnose_options* opts, double* mu, int* yhat,
                                           double* variance_weight, int* point_type, size_t len);
/* mu,yhat,variance_weight,point_type with point_type in sv|dead|inlier. */
SOFTSVM_API softsvm_status softsvm_predict_write_csv(const softsvm_model* m, const softsvm_dataset* ds,
                                                     const softsvm_diagnose_options* opts, const char* path);

typedef struct softsvm_evaluation {
  size_t tp, fp, tn, fn;
  double mcc;
  double accuracy;
} softsvm_evaluation;

SOFTSVM_API softsvm_status softsvm_evaluate(const softsvm_model* m, const softsvm_dataset* ds,
                                            softsvm_evaluation* out);

/* ---- cross-validation -------------------------------------------------- */

typedef struct softsvm_cv_options {
  size_t folds;
  size_t reps;
  uint64_t seed;
  unsigned threads; /* 0: hardware concurrency; results are identical for any value */
} softsvm_cv_options;

SOFTSVM_API void softsvm_cv_options_init(softsvm_cv_options* opts);

/* Parses "lo:hi:count" into at most cap values; *len receives the count.
 * With out == NULL and cap == 0 only the count is reported. */
SOFTSVM_API softsvm_status softsvm_parse_lambda_grid(const char* spec, double* out, size_t cap, size_t* len);

SOFTSVM_API softsvm_status softsvm_cross_validate(const softsvm_dataset* ds, const softsvm_fit_config* cfg,
                                                  const double* lambda_grid, size_t grid_len,
                                                  const softsvm_cv_options* opts, softsvm_cv_report** out);
SOFTSVM_API double softsvm_cv_report_selected_lambda(const softsvm_cv_report* r);
SOFTSVM_API size_t softsvm_cv_report_grid_size(const softsvm_cv_report* r);
/* Mean MCC for grid index i (NaN if every cell was missing). */
SOFTSVM_API double softsvm_cv_report_mean(const softsvm_cv_report* r, size_t i);
SOFTSVM_API softsvm_status softsvm_cv_report_write_json(const softsvm_cv_report* r, const char* path);
SOFTSVM_API softsvm_status softsvm_cv_report_write_csv(const softsvm_cv_report* r, const char* path);
SOFTSVM_API void softsvm_cv_report_free(softsvm_cv_report* r);

/* ---- simulation study -------------------------------------------------- */

typedef struct softsvm_bench_config {
  const double* rhos;
  size_t n_rhos;
  const double* sigmas;
  size_t n_sigmas;
  size_t n;
  size_t reps;
  uint64_t seed;
  const double* lambda_grid;
  size_t grid_len;
  size_t cv_folds;
  unsigned threads;
} softsvm_bench_config;

/* Defaults: rho {0.125, 0.25, 0.5}, sigma {0.5, 1, 1.5}, n 100, 50 reps,
 * lambda grid 1e-4..1e2 (7 points), 10 folds. Arrays point at static storage. */
SOFTSVM_API void softsvm_bench_config_init(softsvm_bench_config* cfg);

/* Writes rho,sigma,rep,method,mcc,converged,coef_norm. rows, failed and
 * not_converged may be NULL. */
SOFTSVM_API softsvm_status softsvm_bench_run(const softsvm_bench_config* cfg, const char* path, size_t* rows,
                                             size_t* failed, size_t* not_converged);

#ifdef __cplusplus
}
#endif

#endif /* SOFTSVM_H */
