/*
 * medtest — mediation-effect testing, confidence intervals, and Monte Carlo
 * study drivers behind a plain C interface.
 *
 * Conventions:
 *   - every fallible call returns a medtest_status; 0 is success
 *   - objects are opaque handles created by *_create and released by *_free
 *   - medtest_last_error() returns a thread-local message for the most
 *     recent failing call on this thread
 */
#ifndef MEDTEST_MEDTEST_H
#define MEDTEST_MEDTEST_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define MEDTEST_API __declspec(dllexport)
#else
#define MEDTEST_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum medtest_status {
  MEDTEST_OK = 0,
  MEDTEST_ERR_ARGUMENT = 1, /* bad parameter, handle, or domain */
  MEDTEST_ERR_DATA = 2,     /* dataset violates its invariants */
  MEDTEST_ERR_NUMERIC = 3   /* singular design, separation, divergence, ... */
} medtest_status;

typedef enum medtest_family {
  MEDTEST_FAMILY_LINEAR = 0,
  MEDTEST_FAMILY_LOGISTIC = 1,
  MEDTEST_FAMILY_COX = 2
} medtest_family;

/* method indices used by the summary getters */
typedef enum medtest_method {
  MEDTEST_METHOD_SOBEL = 0,
  MEDTEST_METHOD_JS = 1,
  MEDTEST_METHOD_ASOBEL = 2,
  MEDTEST_METHOD_AJS = 3
} medtest_method;

typedef struct medtest_dataset medtest_dataset;
typedef struct medtest_analysis medtest_analysis;
typedef struct medtest_scenario medtest_scenario;
typedef struct medtest_summary medtest_summary;

/* Everything reported for one mediator: the fitted quadruple, the four
 * p-values, both confidence intervals, and the Bonferroni verdicts at
 * delta/d. adaptive_branch is 1 exactly when t_max < lambda_n. */
typedef struct medtest_mediator_report {
  double alpha_hat, se_alpha, beta_hat, se_beta;
  double t_alpha, t_beta, t_sobel, t_max, lambda_n;
  double p_sobel, p_js, p_asobel, p_ajs;
  double point; /* alpha_hat * beta_hat */
  double se_product;
  double sobel_lo, sobel_hi, asobel_lo, asobel_hi;
  int adaptive_branch;
  int degenerate;
  int reject_sobel, reject_js, reject_asobel, reject_ajs;
} medtest_mediator_report;

MEDTEST_API const char* medtest_version(void);
MEDTEST_API const char* medtest_strerror(medtest_status status);
MEDTEST_API const char* medtest_last_error(void);

/* ---- scalar kernels ---- */

MEDTEST_API medtest_status medtest_norm_cdf(double x, double* out);
MEDTEST_API medtest_status medtest_norm_quantile(double p, double* out);
MEDTEST_API medtest_status medtest_lambda_threshold(double n, double* out);

/* Tests, intervals, and Bonferroni verdicts from one fitted quadruple.
 * n_mediators scales the rejection threshold to delta/n_mediators and must
 * be >= 1. */
MEDTEST_API medtest_status medtest_report_from_fit(
    double alpha_hat, double se_alpha, double beta_hat, double se_beta,
    uint64_t n, double delta, size_t n_mediators,
    medtest_mediator_report* out);

/* closed-form calculators */
MEDTEST_API medtest_status medtest_sobel_size_h00(double delta, double* out);
MEDTEST_API medtest_status medtest_sobel_coverage_h00(double delta,
                                                      double* out);
MEDTEST_API medtest_status medtest_power_js(double mu_alpha, double mu_beta,
                                            double delta, double* out);
MEDTEST_API medtest_status medtest_power_ajs(double mu_alpha, double mu_beta,
                                             double delta,
                                             double prob_tmax_ge, double* out);
MEDTEST_API medtest_status medtest_power_asobel(double mu_alpha,
                                                double mu_beta, double delta,
                                                double prob_tmax_ge,
                                                uint64_t draws, uint64_t seed,
                                                double* out, double* out_se);

/* ---- datasets and analysis ---- */

/* Arrays are column-major: mediators holds d columns of length n back to
 * back, covariates q columns (pass NULL when q is 0). For the cox family
 * `outcome` carries the observed times and `event` the 0/1 status; for the
 * other families pass event = NULL. */
MEDTEST_API medtest_status medtest_dataset_create(
    medtest_family family, size_t n, size_t d, size_t q,
    const double* exposure, const double* mediators, const double* covariates,
    const double* outcome, const int* event, medtest_dataset** out);
MEDTEST_API void medtest_dataset_free(medtest_dataset* data);

MEDTEST_API medtest_status medtest_analyze(const medtest_dataset* data,
                                           double delta,
                                           medtest_analysis** out);
MEDTEST_API void medtest_analysis_free(medtest_analysis* analysis);
MEDTEST_API size_t medtest_analysis_count(const medtest_analysis* analysis);
MEDTEST_API medtest_status medtest_analysis_report(
    const medtest_analysis* analysis, size_t k, medtest_mediator_report* out);

/* ---- simulation scenarios ---- */

MEDTEST_API medtest_status medtest_scenario_create(
    medtest_family family, size_t n, size_t d, uint64_t reps,
    uint64_t base_seed, double delta, medtest_scenario** out);
MEDTEST_API void medtest_scenario_free(medtest_scenario* scenario);
MEDTEST_API medtest_status medtest_scenario_set_effects(
    medtest_scenario* scenario, const double* alpha, const double* beta);
MEDTEST_API medtest_status medtest_scenario_set_gamma(
    medtest_scenario* scenario, double gamma);
MEDTEST_API medtest_status medtest_scenario_set_outcome_intercept(
    medtest_scenario* scenario, double c);
MEDTEST_API medtest_status medtest_scenario_set_mediator_intercept(
    medtest_scenario* scenario, double c_m);
MEDTEST_API medtest_status medtest_scenario_set_rho(
    medtest_scenario* scenario, double rho);
MEDTEST_API medtest_status medtest_scenario_set_censor_target(
    medtest_scenario* scenario, double target);
MEDTEST_API medtest_status medtest_scenario_set_threads(
    medtest_scenario* scenario, unsigned threads);

/* Calibrates and stores the cox censoring bound; returns it through c0. */
MEDTEST_API medtest_status medtest_scenario_calibrate(
    medtest_scenario* scenario, uint64_t pilot_n, double* c0);

MEDTEST_API medtest_status medtest_run_size_power(
    const medtest_scenario* scenario, medtest_summary** out);
MEDTEST_API medtest_status medtest_run_fwer(const medtest_scenario* scenario,
                                            medtest_summary** out);
MEDTEST_API medtest_status medtest_run_coverage(
    const medtest_scenario* scenario, medtest_summary** out);
MEDTEST_API void medtest_summary_free(medtest_summary* summary);

/* ---- summary getters ---- */

/* 0 size/power, 1 fwer, 2 coverage */
MEDTEST_API int medtest_summary_mode(const medtest_summary* summary);
MEDTEST_API uint64_t medtest_summary_reps_used(const medtest_summary* summary);
MEDTEST_API uint64_t medtest_summary_failures(const medtest_summary* summary);
MEDTEST_API int medtest_summary_flagged(const medtest_summary* summary);
MEDTEST_API double medtest_summary_elapsed(const medtest_summary* summary);
MEDTEST_API medtest_status medtest_summary_c0(const medtest_summary* summary,
                                              double* out);

MEDTEST_API medtest_status medtest_summary_rejection_rate(
    const medtest_summary* summary, medtest_method method, double* estimate,
    double* mc_se);
MEDTEST_API medtest_status medtest_summary_tstats(
    const medtest_summary* summary, double* mu_alpha_hat, double* mu_beta_hat,
    double* prob_tmax_ge);
/* Copies the per-replication p-values of `method` (size/power mode) into
 * `out` (capacity `cap`); `written` receives the count. */
MEDTEST_API medtest_status medtest_summary_pvalues(
    const medtest_summary* summary, medtest_method method, double* out,
    size_t cap, size_t* written);

MEDTEST_API medtest_status medtest_summary_fwer(const medtest_summary* summary,
                                                medtest_method method,
                                                double* estimate,
                                                double* mc_se);
MEDTEST_API medtest_status medtest_summary_power(
    const medtest_summary* summary, medtest_method method, double* estimate,
    double* mc_se);

/* ci_method: 0 sobel, 1 asobel */
MEDTEST_API medtest_status medtest_summary_coverage(
    const medtest_summary* summary, size_t mediator, int ci_method,
    double* cp, double* cp_se, double* mean_length);

/* ---- q-q helper ---- */

/* Fills quantiles[i] = (i + 0.5)/m and sorted[i] with the ordered input. */
MEDTEST_API medtest_status medtest_qq_data(const double* pvalues, size_t m,
                                           double* quantiles, double* sorted);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* MEDTEST_MEDTEST_H */
