#include "medtest/simulate.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "medtest/error.hpp"
#include "medtest/intervals.hpp"
#include "medtest/rng.hpp"
#include "medtest/sampling.hpp"

namespace medtest::sim {

namespace {

// Stream reserved for the censoring-calibration pilot; replications use
// their own index as stream id.
constexpr std::uint64_t kPilotStream = 0xFFFFFFFFFFFFFFFFULL;

constexpr double kFailureFlagFraction = 0.01;

double binom_se(double p, std::uint64_t reps) {
  if (reps == 0) return 0.0;
  return std::sqrt(std::max(0.0, p * (1.0 - p)) / static_cast<double>(reps));
}

// Static partition of [0, count) across workers; `body(i)` may only touch
// slot i, so scheduling cannot change any result.
template <typename Body>
void parallel_reps(std::uint64_t count, unsigned threads, Body&& body) {
  unsigned t = threads == 0 ? std::thread::hardware_concurrency() : threads;
  if (t <= 1 || count < 2) {
    for (std::uint64_t i = 0; i < count; ++i) body(i);
    return;
  }
  t = static_cast<unsigned>(
      std::min<std::uint64_t>(t, count));
  std::vector<std::thread> pool;
  pool.reserve(t);
  std::exception_ptr first_error;
  std::mutex error_mutex;
  for (unsigned w = 0; w < t; ++w) {
    const std::uint64_t lo = count * w / t;
    const std::uint64_t hi = count * (w + 1) / t;
    pool.emplace_back([&, lo, hi] {
      try {
        for (std::uint64_t i = lo; i < hi; ++i) body(i);
      } catch (...) {
        std::lock_guard<std::mutex> g(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

double expit(double eta) { return 1.0 / (1.0 + std::exp(-eta)); }

}  // namespace

std::vector<std::size_t> ScenarioConfig::truth() const {
  std::vector<std::size_t> idx;
  for (std::size_t k = 0; k < d; ++k)
    if (alpha[k] * beta[k] != 0.0) idx.push_back(k);
  return idx;
}

void ScenarioConfig::validate() const {
  if (d == 0) throw_argument("scenario: d must be at least 1");
  if (alpha.size() != d || beta.size() != d)
    throw_argument("scenario: alpha and beta must have length d");
  if (n < 3) throw_argument("scenario: n must be at least 3");
  if (reps < 1) throw_argument("scenario: reps must be at least 1");
  if (!(delta > 0.0 && delta < 1.0))
    throw_argument("scenario: delta must lie in (0, 1)");
  if (!(rho > -1.0 && rho < 1.0))
    throw_argument("scenario: rho must lie in (-1, 1)");
  if (family == models::OutcomeFamily::cox &&
      !(censor_target > 0.0 && censor_target < 1.0))
    throw_argument("scenario: censor_target must lie in (0, 1)");
  for (double v : alpha)
    if (!std::isfinite(v)) throw_argument("scenario: non-finite alpha");
  for (double v : beta)
    if (!std::isfinite(v)) throw_argument("scenario: non-finite beta");
  if (!std::isfinite(gamma) || !std::isfinite(outcome_intercept))
    throw_argument("scenario: non-finite coefficient");
}

models::Dataset generate(const ScenarioConfig& scenario, std::uint64_t rep) {
  scenario.validate();
  if (scenario.family == models::OutcomeFamily::cox && !scenario.c0)
    throw_argument("generate: cox scenario lacks a calibrated c0");

  const std::size_t n = scenario.n, d = scenario.d;
  dist::RngStream rng(scenario.base_seed, rep);
  const dist::Matrix chol =
      dist::CovMatrix::ar1(d, scenario.rho).cholesky_factor();
  const std::vector<double> zero_mean(d, 0.0);
  const double c_m = scenario.mediator_intercept_value();

  models::Dataset data;
  data.family = scenario.family;
  data.exposure.resize(n);
  data.mediators = dist::Matrix(n, d);
  data.covariates = dist::Matrix(n, 0);
  data.outcome.resize(n);

  for (std::size_t i = 0; i < n; ++i) data.exposure[i] = rng.next_normal();
  for (std::size_t i = 0; i < n; ++i) {
    const std::vector<double> e = dist::sample_mvn(zero_mean, chol, rng);
    for (std::size_t k = 0; k < d; ++k)
      data.mediators(i, k) =
          c_m + scenario.alpha[k] * data.exposure[i] + e[k];
  }

  auto linear_predictor = [&](std::size_t i) {
    double eta = scenario.gamma * data.exposure[i];
    for (std::size_t k = 0; k < d; ++k)
      eta += scenario.beta[k] * data.mediators(i, k);
    return eta;
  };

  switch (scenario.family) {
    case models::OutcomeFamily::linear:
      for (std::size_t i = 0; i < n; ++i)
        data.outcome[i] = scenario.outcome_intercept + linear_predictor(i) +
                          rng.next_normal();
      break;
    case models::OutcomeFamily::logistic:
      for (std::size_t i = 0; i < n; ++i)
        data.outcome[i] =
            rng.next_unit() < expit(linear_predictor(i)) ? 1.0 : 0.0;
      break;
    case models::OutcomeFamily::cox: {
      data.event.resize(n);
      const double c0 = *scenario.c0;
      for (std::size_t i = 0; i < n; ++i) {
        const double rate = std::exp(linear_predictor(i));
        const double t = dist::exponential_transform(rng.next_unit(), rate);
        const double c = c0 * rng.next_unit();
        data.outcome[i] = std::min(t, c);
        data.event[i] = t <= c ? 1 : 0;
      }
      break;
    }
  }
  return data;
}

double calibrate_censoring(const ScenarioConfig& scenario,
                           std::uint64_t pilot_n) {
  scenario.validate();
  if (scenario.family != models::OutcomeFamily::cox)
    throw_argument("calibrate_censoring: scenario family must be cox");
  if (pilot_n < 100000)
    throw_argument("calibrate_censoring: pilot_n must be at least 10^5");

  // Pilot draws are fixed once; the censoring rate at a candidate c0 is
  // mean(T_i > c0 U_i), monotone decreasing in c0.
  const std::size_t d = scenario.d;
  dist::RngStream rng(scenario.base_seed, kPilotStream);
  const dist::Matrix chol =
      dist::CovMatrix::ar1(d, scenario.rho).cholesky_factor();
  const std::vector<double> zero_mean(d, 0.0);
  const double c_m = scenario.mediator_intercept_value();

  std::vector<double> event_time(pilot_n), unit(pilot_n);
  for (std::uint64_t i = 0; i < pilot_n; ++i) {
    const double x = rng.next_normal();
    const std::vector<double> e = dist::sample_mvn(zero_mean, chol, rng);
    double eta = scenario.gamma * x;
    for (std::size_t k = 0; k < d; ++k)
      eta += scenario.beta[k] * (c_m + scenario.alpha[k] * x + e[k]);
    event_time[i] = dist::exponential_transform(rng.next_unit(), std::exp(eta));
    unit[i] = rng.next_unit();
  }

  auto censor_rate = [&](double c0) {
    std::uint64_t censored = 0;
    for (std::uint64_t i = 0; i < pilot_n; ++i)
      censored += event_time[i] > c0 * unit[i];
    return static_cast<double>(censored) / static_cast<double>(pilot_n);
  };

  double lo = 1e-3, hi = 1e3;
  const double target = scenario.censor_target;
  if (censor_rate(lo) < target || censor_rate(hi) > target)
    throw_numeric("calibrate_censoring: target unreachable in (1e-3, 1e3)");
  while (hi - lo > 1e-9 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (censor_rate(mid) > target)
      lo = mid;
    else
      hi = mid;
  }
  const double c0 = 0.5 * (lo + hi);
  if (std::fabs(censor_rate(c0) - target) > 0.005)
    throw_numeric("calibrate_censoring: could not match the target rate");
  return c0;
}

namespace {

void resolve_c0(ScenarioConfig& scenario) {
  if (scenario.family == models::OutcomeFamily::cox && !scenario.c0)
    scenario.c0 = calibrate_censoring(scenario);
}

void finish_counts(SimulationSummary& s, std::uint64_t reps,
                   std::uint64_t failures) {
  s.failures = failures;
  s.reps_used = reps - failures;
  s.flagged = static_cast<double>(failures) >
              kFailureFlagFraction * static_cast<double>(reps);
}

}  // namespace

SimulationSummary run_size_power(ScenarioConfig scenario, unsigned threads) {
  scenario.validate();
  if (scenario.d != 1)
    throw_argument("run_size_power: requires a single mediator (d == 1)");
  resolve_c0(scenario);
  const auto start = std::chrono::steady_clock::now();

  struct RepResult {
    bool failed = false;
    std::array<double, 4> p{};
    double t_alpha = 0.0, t_beta = 0.0;
    bool tmax_ge = false;
  };
  std::vector<RepResult> slots(scenario.reps);

  parallel_reps(scenario.reps, threads, [&](std::uint64_t r) {
    RepResult& out = slots[r];
    try {
      const models::Dataset data = generate(scenario, r);
      const auto fits = models::fit_mediation(data);
      const tests::TestReport rep = tests::compute_report(fits[0]);
      out.p = {rep.p_sobel, rep.p_js, rep.p_asobel, rep.p_ajs};
      out.t_alpha = rep.t_alpha;
      out.t_beta = rep.t_beta;
      out.tmax_ge = !rep.adaptive_branch;
    } catch (const Error&) {
      out.failed = true;
    }
  });

  SimulationSummary s;
  s.mode = SummaryMode::size_power;
  s.is_power = !scenario.truth().empty();

  std::uint64_t failures = 0;
  std::array<std::uint64_t, 4> hits{};
  std::uint64_t tmax_count = 0;
  double sum_ta = 0.0, sum_tb = 0.0;
  for (const RepResult& rr : slots) {
    if (rr.failed) {
      ++failures;
      continue;
    }
    for (int m = 0; m < 4; ++m) {
      hits[m] += rr.p[m] < scenario.delta;
      s.pvalues[m].push_back(rr.p[m]);
    }
    tmax_count += rr.tmax_ge;
    sum_ta += rr.t_alpha;
    sum_tb += rr.t_beta;
  }
  finish_counts(s, scenario.reps, failures);
  const double used = static_cast<double>(std::max<std::uint64_t>(1, s.reps_used));
  for (int m = 0; m < 4; ++m) {
    s.rejection_rate[m] = static_cast<double>(hits[m]) / used;
    s.rejection_se[m] = binom_se(s.rejection_rate[m], s.reps_used);
  }
  s.mu_alpha_hat = sum_ta / used;
  s.mu_beta_hat = sum_tb / used;
  s.prob_tmax_ge = static_cast<double>(tmax_count) / used;
  s.scenario = std::move(scenario);
  s.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return s;
}

SimulationSummary run_fwer(ScenarioConfig scenario, unsigned threads) {
  scenario.validate();
  if (scenario.d < 2)
    throw_argument("run_fwer: requires at least two mediators");
  resolve_c0(scenario);
  const auto start = std::chrono::steady_clock::now();

  struct RepResult {
    bool failed = false;
    multitest::MultiTestResult tests;
  };
  std::vector<RepResult> slots(scenario.reps);

  parallel_reps(scenario.reps, threads, [&](std::uint64_t r) {
    RepResult& out = slots[r];
    try {
      const models::Dataset data = generate(scenario, r);
      const auto fits = models::fit_mediation(data);
      out.tests = multitest::test_all(fits, scenario.delta);
    } catch (const Error&) {
      out.failed = true;
    }
  });

  std::vector<multitest::MultiTestResult> kept;
  kept.reserve(scenario.reps);
  std::uint64_t failures = 0;
  for (RepResult& rr : slots) {
    if (rr.failed)
      ++failures;
    else
      kept.push_back(std::move(rr.tests));
  }

  SimulationSummary s;
  s.mode = SummaryMode::fwer;
  finish_counts(s, scenario.reps, failures);
  if (!kept.empty()) {
    const auto truth = scenario.truth();
    const multitest::FwerPower fp = multitest::fwer_and_power(truth, kept);
    for (int m = 0; m < 4; ++m) {
      s.fwer[m] = fp.fwer[m];
      s.fwer_se[m] = binom_se(fp.fwer[m], s.reps_used);
      s.power[m] = fp.power[m];
      s.power_se[m] = binom_se(fp.power[m], s.reps_used);
    }
  }
  s.scenario = std::move(scenario);
  s.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return s;
}

SimulationSummary run_coverage(ScenarioConfig scenario, unsigned threads) {
  scenario.validate();
  resolve_c0(scenario);
  const auto start = std::chrono::steady_clock::now();
  const std::size_t d = scenario.d;

  struct RepResult {
    bool failed = false;
    // per mediator: cover flags and widths for (sobel, asobel)
    std::vector<std::array<double, 2>> width;
    std::vector<std::array<bool, 2>> covered;
    std::vector<bool> degenerate;
  };
  std::vector<RepResult> slots(scenario.reps);

  parallel_reps(scenario.reps, threads, [&](std::uint64_t r) {
    RepResult& out = slots[r];
    try {
      const models::Dataset data = generate(scenario, r);
      const auto fits = models::fit_mediation(data);
      out.width.resize(d);
      out.covered.resize(d);
      out.degenerate.resize(d);
      for (std::size_t k = 0; k < d; ++k) {
        const intervals::IntervalPair ip =
            intervals::make_intervals(fits[k], scenario.delta);
        const double target = scenario.alpha[k] * scenario.beta[k];
        out.width[k] = {ip.sobel.width(), ip.asobel.width()};
        out.covered[k] = {ip.sobel.contains(target),
                          ip.asobel.contains(target)};
        out.degenerate[k] = ip.degenerate;
      }
    } catch (const Error&) {
      out.failed = true;
    }
  });

  SimulationSummary s;
  s.mode = SummaryMode::coverage;
  s.coverage.resize(d);
  std::uint64_t failures = 0;
  std::vector<std::array<std::uint64_t, 2>> cover_count(d);
  std::vector<std::array<double, 2>> width_sum(d);
  for (const RepResult& rr : slots) {
    if (rr.failed) {
      ++failures;
      continue;
    }
    for (std::size_t k = 0; k < d; ++k) {
      if (rr.degenerate[k]) {
        ++s.coverage[k].degenerate;
        continue;
      }
      ++s.coverage[k].used;
      for (int m = 0; m < 2; ++m) {
        cover_count[k][m] += rr.covered[k][m];
        width_sum[k][m] += rr.width[k][m];
      }
    }
  }
  finish_counts(s, scenario.reps, failures);
  for (std::size_t k = 0; k < d; ++k) {
    const std::uint64_t used = s.coverage[k].used;
    const double du = static_cast<double>(std::max<std::uint64_t>(1, used));
    for (int m = 0; m < 2; ++m) {
      s.coverage[k].cp[m] = static_cast<double>(cover_count[k][m]) / du;
      s.coverage[k].cp_se[m] = binom_se(s.coverage[k].cp[m], used);
      s.coverage[k].lci[m] = width_sum[k][m] / du;
    }
  }
  s.scenario = std::move(scenario);
  s.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return s;
}

std::vector<std::pair<double, double>> qq_data(
    std::span<const double> pvalues) {
  if (pvalues.empty()) throw_argument("qq_data: empty input");
  std::vector<double> sorted(pvalues.begin(), pvalues.end());
  for (double p : sorted)
    if (!(p >= 0.0 && p <= 1.0))
      throw_argument("qq_data: p-values must lie in [0, 1]");
  std::sort(sorted.begin(), sorted.end());
  const double m = static_cast<double>(sorted.size());
  std::vector<std::pair<double, double>> out;
  out.reserve(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i)
    out.emplace_back((static_cast<double>(i) + 0.5) / m, sorted[i]);
  return out;
}

double ks_uniform_distance(std::span<const double> pvalues) {
  if (pvalues.empty()) throw_argument("ks_uniform_distance: empty input");
  std::vector<double> sorted(pvalues.begin(), pvalues.end());
  std::sort(sorted.begin(), sorted.end());
  const double m = static_cast<double>(sorted.size());
  double dist = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double hi = (static_cast<double>(i) + 1.0) / m - sorted[i];
    const double lo = sorted[i] - static_cast<double>(i) / m;
    dist = std::max({dist, hi, lo});
  }
  return dist;
}

}  // namespace medtest::sim
