#include "medtest/medtest.h"

#include <cstring>
#include <memory>
#include <string>
#include <vector>

#include "medtest/error.hpp"
#include "medtest/intervals.hpp"
#include "medtest/models.hpp"
#include "medtest/multitest.hpp"
#include "medtest/normal.hpp"
#include "medtest/simulate.hpp"
#include "medtest/tests.hpp"

using medtest::Error;
using medtest::ErrorKind;

struct medtest_dataset {
  medtest::models::Dataset data;
};

struct medtest_analysis {
  std::vector<medtest::models::MediationFit> fits;
  medtest::multitest::MultiTestResult tests;
  std::vector<medtest::intervals::IntervalPair> intervals;
  double delta = 0.05;
};

struct medtest_scenario {
  medtest::sim::ScenarioConfig config;
  unsigned threads = 0;
};

struct medtest_summary {
  medtest::sim::SimulationSummary s;
};

namespace {

thread_local std::string g_last_error;

medtest_status status_from(const Error& e) {
  g_last_error = e.what();
  switch (e.kind()) {
    case ErrorKind::argument:
      return MEDTEST_ERR_ARGUMENT;
    case ErrorKind::data:
      return MEDTEST_ERR_DATA;
    case ErrorKind::numeric:
      return MEDTEST_ERR_NUMERIC;
  }
  return MEDTEST_ERR_ARGUMENT;
}

medtest_status fail_argument(const char* msg) {
  g_last_error = msg;
  return MEDTEST_ERR_ARGUMENT;
}

// Runs `fn`, translating exceptions into status codes.
template <typename Fn>
medtest_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return MEDTEST_OK;
  } catch (const Error& e) {
    return status_from(e);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return MEDTEST_ERR_NUMERIC;
  }
}

void fill_report(const medtest::models::MediationFit& fit,
                 const medtest::tests::TestReport& t,
                 const medtest::intervals::IntervalPair& ci, double delta,
                 size_t n_mediators, medtest_mediator_report* out) {
  out->alpha_hat = fit.alpha_hat;
  out->se_alpha = fit.se_alpha;
  out->beta_hat = fit.beta_hat;
  out->se_beta = fit.se_beta;
  out->t_alpha = t.t_alpha;
  out->t_beta = t.t_beta;
  out->t_sobel = t.t_sobel;
  out->t_max = t.t_max;
  out->lambda_n = t.lambda_n;
  out->p_sobel = t.p_sobel;
  out->p_js = t.p_js;
  out->p_asobel = t.p_asobel;
  out->p_ajs = t.p_ajs;
  out->point = ci.point;
  out->se_product = ci.se_product;
  out->sobel_lo = ci.sobel.lo;
  out->sobel_hi = ci.sobel.hi;
  out->asobel_lo = ci.asobel.lo;
  out->asobel_hi = ci.asobel.hi;
  out->adaptive_branch = t.adaptive_branch ? 1 : 0;
  out->degenerate = ci.degenerate ? 1 : 0;
  const double threshold = delta / static_cast<double>(n_mediators);
  out->reject_sobel = t.p_sobel < threshold;
  out->reject_js = t.p_js < threshold;
  out->reject_asobel = t.p_asobel < threshold;
  out->reject_ajs = t.p_ajs < threshold;
}

medtest::models::OutcomeFamily to_family(medtest_family f) {
  switch (f) {
    case MEDTEST_FAMILY_LINEAR:
      return medtest::models::OutcomeFamily::linear;
    case MEDTEST_FAMILY_LOGISTIC:
      return medtest::models::OutcomeFamily::logistic;
    case MEDTEST_FAMILY_COX:
      return medtest::models::OutcomeFamily::cox;
  }
  medtest::throw_argument("unknown outcome family");
}

bool valid_method(medtest_method m) {
  return m >= MEDTEST_METHOD_SOBEL && m <= MEDTEST_METHOD_AJS;
}

template <typename Runner>
medtest_status run_summary(const medtest_scenario* scenario,
                           medtest_summary** out, Runner&& runner) {
  if (!out) return fail_argument("run: out is NULL");
  *out = nullptr;
  if (!scenario) return fail_argument("run: scenario is NULL");
  return guarded([&] {
    auto handle = std::make_unique<medtest_summary>();
    handle->s = runner(scenario->config, scenario->threads);
    *out = handle.release();
  });
}

}  // namespace

extern "C" {

const char* medtest_version(void) { return "0.1.0"; }

const char* medtest_strerror(medtest_status status) {
  switch (status) {
    case MEDTEST_OK:
      return "ok";
    case MEDTEST_ERR_ARGUMENT:
      return "invalid argument";
    case MEDTEST_ERR_DATA:
      return "invalid data";
    case MEDTEST_ERR_NUMERIC:
      return "numerical failure";
  }
  return "unknown status";
}

const char* medtest_last_error(void) { return g_last_error.c_str(); }

medtest_status medtest_norm_cdf(double x, double* out) {
  if (!out) return fail_argument("norm_cdf: out is NULL");
  return guarded([&] { *out = medtest::dist::std_normal_cdf(x); });
}

medtest_status medtest_norm_quantile(double p, double* out) {
  if (!out) return fail_argument("norm_quantile: out is NULL");
  return guarded([&] { *out = medtest::dist::std_normal_quantile(p); });
}

medtest_status medtest_lambda_threshold(double n, double* out) {
  if (!out) return fail_argument("lambda_threshold: out is NULL");
  return guarded([&] { *out = medtest::tests::lambda_threshold(n); });
}

medtest_status medtest_report_from_fit(double alpha_hat, double se_alpha,
                                       double beta_hat, double se_beta,
                                       uint64_t n, double delta,
                                       size_t n_mediators,
                                       medtest_mediator_report* out) {
  if (!out) return fail_argument("report_from_fit: out is NULL");
  if (n_mediators == 0)
    return fail_argument("report_from_fit: n_mediators must be >= 1");
  return guarded([&] {
    medtest::models::MediationFit fit;
    fit.alpha_hat = alpha_hat;
    fit.se_alpha = se_alpha;
    fit.beta_hat = beta_hat;
    fit.se_beta = se_beta;
    fit.n = n;
    const auto t = medtest::tests::compute_report(fit);
    const auto ci = medtest::intervals::make_intervals(fit, delta);
    fill_report(fit, t, ci, delta, n_mediators, out);
  });
}

medtest_status medtest_sobel_size_h00(double delta, double* out) {
  if (!out) return fail_argument("sobel_size_h00: out is NULL");
  return guarded(
      [&] { *out = medtest::tests::theoretical_size_sobel_h00(delta); });
}

medtest_status medtest_sobel_coverage_h00(double delta, double* out) {
  if (!out) return fail_argument("sobel_coverage_h00: out is NULL");
  return guarded(
      [&] { *out = medtest::intervals::sobel_coverage_h00(delta); });
}

medtest_status medtest_power_js(double mu_alpha, double mu_beta, double delta,
                                double* out) {
  if (!out) return fail_argument("power_js: out is NULL");
  return guarded([&] {
    *out = medtest::tests::theoretical_power_js(mu_alpha, mu_beta, delta);
  });
}

medtest_status medtest_power_ajs(double mu_alpha, double mu_beta, double delta,
                                 double prob_tmax_ge, double* out) {
  if (!out) return fail_argument("power_ajs: out is NULL");
  return guarded([&] {
    *out = medtest::tests::theoretical_power_ajs(mu_alpha, mu_beta, delta,
                                                 prob_tmax_ge);
  });
}

medtest_status medtest_power_asobel(double mu_alpha, double mu_beta,
                                    double delta, double prob_tmax_ge,
                                    uint64_t draws, uint64_t seed, double* out,
                                    double* out_se) {
  if (!out || !out_se) return fail_argument("power_asobel: out is NULL");
  return guarded([&] {
    const auto est = medtest::tests::theoretical_power_asobel(
        mu_alpha, mu_beta, delta, prob_tmax_ge, draws, seed);
    *out = est.value;
    *out_se = est.mc_se;
  });
}

medtest_status medtest_dataset_create(medtest_family family, size_t n,
                                      size_t d, size_t q,
                                      const double* exposure,
                                      const double* mediators,
                                      const double* covariates,
                                      const double* outcome, const int* event,
                                      medtest_dataset** out) {
  if (!out) return fail_argument("dataset_create: out is NULL");
  *out = nullptr;
  if (!exposure || !mediators || !outcome)
    return fail_argument("dataset_create: required array is NULL");
  if (q > 0 && !covariates)
    return fail_argument("dataset_create: covariates is NULL with q > 0");
  if (family == MEDTEST_FAMILY_COX && !event)
    return fail_argument("dataset_create: cox family needs an event array");
  return guarded([&] {
    auto handle = std::make_unique<medtest_dataset>();
    auto& data = handle->data;
    data.family = to_family(family);
    data.exposure.assign(exposure, exposure + n);
    data.mediators = medtest::dist::Matrix(n, d);
    for (size_t j = 0; j < d; ++j)
      for (size_t i = 0; i < n; ++i) data.mediators(i, j) = mediators[j * n + i];
    data.covariates = medtest::dist::Matrix(n, q);
    for (size_t j = 0; j < q; ++j)
      for (size_t i = 0; i < n; ++i)
        data.covariates(i, j) = covariates[j * n + i];
    data.outcome.assign(outcome, outcome + n);
    if (family == MEDTEST_FAMILY_COX) data.event.assign(event, event + n);
    data.validate();
    *out = handle.release();
  });
}

void medtest_dataset_free(medtest_dataset* data) { delete data; }

medtest_status medtest_analyze(const medtest_dataset* data, double delta,
                               medtest_analysis** out) {
  if (!out) return fail_argument("analyze: out is NULL");
  *out = nullptr;
  if (!data) return fail_argument("analyze: dataset is NULL");
  return guarded([&] {
    auto handle = std::make_unique<medtest_analysis>();
    handle->delta = delta;
    handle->fits = medtest::models::fit_mediation(data->data);
    handle->tests = medtest::multitest::test_all(handle->fits, delta);
    handle->intervals.reserve(handle->fits.size());
    for (const auto& fit : handle->fits)
      handle->intervals.push_back(
          medtest::intervals::make_intervals(fit, delta));
    *out = handle.release();
  });
}

void medtest_analysis_free(medtest_analysis* analysis) { delete analysis; }

size_t medtest_analysis_count(const medtest_analysis* analysis) {
  return analysis ? analysis->fits.size() : 0;
}

medtest_status medtest_analysis_report(const medtest_analysis* analysis,
                                       size_t k,
                                       medtest_mediator_report* out) {
  if (!analysis || !out) return fail_argument("analysis_report: NULL argument");
  if (k >= analysis->fits.size())
    return fail_argument("analysis_report: mediator index out of range");
  fill_report(analysis->fits[k], analysis->tests.per_mediator[k],
              analysis->intervals[k], analysis->delta, analysis->fits.size(),
              out);
  g_last_error.clear();
  return MEDTEST_OK;
}

medtest_status medtest_scenario_create(medtest_family family, size_t n,
                                       size_t d, uint64_t reps,
                                       uint64_t base_seed, double delta,
                                       medtest_scenario** out) {
  if (!out) return fail_argument("scenario_create: out is NULL");
  *out = nullptr;
  return guarded([&] {
    auto handle = std::make_unique<medtest_scenario>();
    handle->config.family = to_family(family);
    handle->config.n = n;
    handle->config.d = d;
    handle->config.alpha.assign(d, 0.0);
    handle->config.beta.assign(d, 0.0);
    handle->config.reps = reps;
    handle->config.base_seed = base_seed;
    handle->config.delta = delta;
    handle->config.validate();
    *out = handle.release();
  });
}

void medtest_scenario_free(medtest_scenario* scenario) { delete scenario; }

medtest_status medtest_scenario_set_effects(medtest_scenario* scenario,
                                            const double* alpha,
                                            const double* beta) {
  if (!scenario || !alpha || !beta)
    return fail_argument("scenario_set_effects: NULL argument");
  scenario->config.alpha.assign(alpha, alpha + scenario->config.d);
  scenario->config.beta.assign(beta, beta + scenario->config.d);
  g_last_error.clear();
  return MEDTEST_OK;
}

medtest_status medtest_scenario_set_gamma(medtest_scenario* scenario,
                                          double gamma) {
  if (!scenario) return fail_argument("scenario_set_gamma: NULL handle");
  scenario->config.gamma = gamma;
  return MEDTEST_OK;
}

medtest_status medtest_scenario_set_outcome_intercept(
    medtest_scenario* scenario, double c) {
  if (!scenario) return fail_argument("scenario_set_outcome_intercept: NULL");
  scenario->config.outcome_intercept = c;
  return MEDTEST_OK;
}

medtest_status medtest_scenario_set_mediator_intercept(
    medtest_scenario* scenario, double c_m) {
  if (!scenario) return fail_argument("scenario_set_mediator_intercept: NULL");
  scenario->config.mediator_intercept = c_m;
  return MEDTEST_OK;
}

medtest_status medtest_scenario_set_rho(medtest_scenario* scenario,
                                        double rho) {
  if (!scenario) return fail_argument("scenario_set_rho: NULL handle");
  if (!(rho > -1.0 && rho < 1.0))
    return fail_argument("scenario_set_rho: rho must lie in (-1, 1)");
  scenario->config.rho = rho;
  return MEDTEST_OK;
}

medtest_status medtest_scenario_set_censor_target(medtest_scenario* scenario,
                                                  double target) {
  if (!scenario) return fail_argument("scenario_set_censor_target: NULL");
  if (!(target > 0.0 && target < 1.0))
    return fail_argument("scenario_set_censor_target: target not in (0, 1)");
  scenario->config.censor_target = target;
  scenario->config.c0.reset();
  return MEDTEST_OK;
}

medtest_status medtest_scenario_set_threads(medtest_scenario* scenario,
                                            unsigned threads) {
  if (!scenario) return fail_argument("scenario_set_threads: NULL handle");
  scenario->threads = threads;
  return MEDTEST_OK;
}

medtest_status medtest_scenario_calibrate(medtest_scenario* scenario,
                                          uint64_t pilot_n, double* c0) {
  if (!scenario) return fail_argument("scenario_calibrate: NULL handle");
  return guarded([&] {
    const double v =
        medtest::sim::calibrate_censoring(scenario->config, pilot_n);
    scenario->config.c0 = v;
    if (c0) *c0 = v;
  });
}

medtest_status medtest_run_size_power(const medtest_scenario* scenario,
                                      medtest_summary** out) {
  return run_summary(scenario, out, [](const auto& cfg, unsigned threads) {
    return medtest::sim::run_size_power(cfg, threads);
  });
}

medtest_status medtest_run_fwer(const medtest_scenario* scenario,
                                medtest_summary** out) {
  return run_summary(scenario, out, [](const auto& cfg, unsigned threads) {
    return medtest::sim::run_fwer(cfg, threads);
  });
}

medtest_status medtest_run_coverage(const medtest_scenario* scenario,
                                    medtest_summary** out) {
  return run_summary(scenario, out, [](const auto& cfg, unsigned threads) {
    return medtest::sim::run_coverage(cfg, threads);
  });
}

void medtest_summary_free(medtest_summary* summary) { delete summary; }

int medtest_summary_mode(const medtest_summary* summary) {
  return summary ? static_cast<int>(summary->s.mode) : -1;
}

uint64_t medtest_summary_reps_used(const medtest_summary* summary) {
  return summary ? summary->s.reps_used : 0;
}

uint64_t medtest_summary_failures(const medtest_summary* summary) {
  return summary ? summary->s.failures : 0;
}

int medtest_summary_flagged(const medtest_summary* summary) {
  return summary && summary->s.flagged ? 1 : 0;
}

double medtest_summary_elapsed(const medtest_summary* summary) {
  return summary ? summary->s.elapsed_seconds : 0.0;
}

medtest_status medtest_summary_c0(const medtest_summary* summary,
                                  double* out) {
  if (!summary || !out) return fail_argument("summary_c0: NULL argument");
  if (!summary->s.scenario.c0)
    return fail_argument("summary_c0: scenario has no censoring bound");
  *out = *summary->s.scenario.c0;
  return MEDTEST_OK;
}

medtest_status medtest_summary_rejection_rate(const medtest_summary* summary,
                                              medtest_method method,
                                              double* estimate,
                                              double* mc_se) {
  if (!summary || !estimate)
    return fail_argument("summary_rejection_rate: NULL argument");
  if (!valid_method(method))
    return fail_argument("summary_rejection_rate: bad method");
  if (summary->s.mode != medtest::sim::SummaryMode::size_power)
    return fail_argument("summary_rejection_rate: not a size/power summary");
  *estimate = summary->s.rejection_rate[method];
  if (mc_se) *mc_se = summary->s.rejection_se[method];
  return MEDTEST_OK;
}

medtest_status medtest_summary_tstats(const medtest_summary* summary,
                                      double* mu_alpha_hat,
                                      double* mu_beta_hat,
                                      double* prob_tmax_ge) {
  if (!summary) return fail_argument("summary_tstats: NULL handle");
  if (summary->s.mode != medtest::sim::SummaryMode::size_power)
    return fail_argument("summary_tstats: not a size/power summary");
  if (mu_alpha_hat) *mu_alpha_hat = summary->s.mu_alpha_hat;
  if (mu_beta_hat) *mu_beta_hat = summary->s.mu_beta_hat;
  if (prob_tmax_ge) *prob_tmax_ge = summary->s.prob_tmax_ge;
  return MEDTEST_OK;
}

medtest_status medtest_summary_pvalues(const medtest_summary* summary,
                                       medtest_method method, double* out,
                                       size_t cap, size_t* written) {
  if (!summary || !out || !written)
    return fail_argument("summary_pvalues: NULL argument");
  if (!valid_method(method))
    return fail_argument("summary_pvalues: bad method");
  if (summary->s.mode != medtest::sim::SummaryMode::size_power)
    return fail_argument("summary_pvalues: not a size/power summary");
  const auto& pv = summary->s.pvalues[method];
  if (cap < pv.size())
    return fail_argument("summary_pvalues: buffer too small");
  std::memcpy(out, pv.data(), pv.size() * sizeof(double));
  *written = pv.size();
  return MEDTEST_OK;
}

medtest_status medtest_summary_fwer(const medtest_summary* summary,
                                    medtest_method method, double* estimate,
                                    double* mc_se) {
  if (!summary || !estimate)
    return fail_argument("summary_fwer: NULL argument");
  if (!valid_method(method)) return fail_argument("summary_fwer: bad method");
  if (summary->s.mode != medtest::sim::SummaryMode::fwer)
    return fail_argument("summary_fwer: not a multiple-testing summary");
  *estimate = summary->s.fwer[method];
  if (mc_se) *mc_se = summary->s.fwer_se[method];
  return MEDTEST_OK;
}

medtest_status medtest_summary_power(const medtest_summary* summary,
                                     medtest_method method, double* estimate,
                                     double* mc_se) {
  if (!summary || !estimate)
    return fail_argument("summary_power: NULL argument");
  if (!valid_method(method)) return fail_argument("summary_power: bad method");
  if (summary->s.mode != medtest::sim::SummaryMode::fwer)
    return fail_argument("summary_power: not a multiple-testing summary");
  *estimate = summary->s.power[method];
  if (mc_se) *mc_se = summary->s.power_se[method];
  return MEDTEST_OK;
}

medtest_status medtest_summary_coverage(const medtest_summary* summary,
                                        size_t mediator, int ci_method,
                                        double* cp, double* cp_se,
                                        double* mean_length) {
  if (!summary) return fail_argument("summary_coverage: NULL handle");
  if (summary->s.mode != medtest::sim::SummaryMode::coverage)
    return fail_argument("summary_coverage: not a coverage summary");
  if (mediator >= summary->s.coverage.size())
    return fail_argument("summary_coverage: mediator index out of range");
  if (ci_method != 0 && ci_method != 1)
    return fail_argument("summary_coverage: ci_method must be 0 or 1");
  const auto& row = summary->s.coverage[mediator];
  if (cp) *cp = row.cp[ci_method];
  if (cp_se) *cp_se = row.cp_se[ci_method];
  if (mean_length) *mean_length = row.lci[ci_method];
  return MEDTEST_OK;
}

medtest_status medtest_qq_data(const double* pvalues, size_t m,
                               double* quantiles, double* sorted) {
  if (!pvalues || !quantiles || !sorted)
    return fail_argument("qq_data: NULL argument");
  return guarded([&] {
    const auto pairs =
        medtest::sim::qq_data(std::span<const double>(pvalues, m));
    for (size_t i = 0; i < pairs.size(); ++i) {
      quantiles[i] = pairs[i].first;
      sorted[i] = pairs[i].second;
    }
  });
}

}  // extern "C"
