#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "medtest/error.hpp"
#include "medtest/models.hpp"
#include "medtest/rng.hpp"
#include "medtest/simulate.hpp"
#include "oracle.hpp"

using namespace medtest;

namespace {

dist::Matrix design_with_intercept(const std::vector<double>& x) {
  dist::Matrix m(x.size(), 2);
  for (std::size_t i = 0; i < x.size(); ++i) {
    m(i, 0) = 1.0;
    m(i, 1) = x[i];
  }
  return m;
}

}  // namespace

TEST_SUITE("models") {

TEST_CASE("ols hand example: slope, intercept, standard error") {
  const std::vector<double> y = {1, 2, 2, 3};
  const std::vector<double> x = {1, 2, 3, 4};
  const auto fit = models::fit_ols(y, design_with_intercept(x));
  // Sxx = 5, Sxy = 3, SSE = 0.2, s^2 = 0.1
  CHECK(fit.coefficients[0] == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(fit.coefficients[1] == doctest::Approx(0.6).epsilon(1e-10));
  CHECK(fit.standard_errors[1] ==
        doctest::Approx(std::sqrt(0.02)).epsilon(1e-10));
  CHECK(fit.converged);
  CHECK(fit.loglik == 0.0);
}

TEST_CASE("ols perfect fit has zero residual and zero SE") {
  const std::vector<double> x = {1, 2, 3, 4, 5};
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = 3.0 * x[i];
  const auto fit = models::fit_ols(y, design_with_intercept(x));
  CHECK(fit.coefficients[1] == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(fit.standard_errors[1] == doctest::Approx(0.0));
}

TEST_CASE("ols error paths") {
  const std::vector<double> y = {1, 2, 3, 4};
  dist::Matrix dup(4, 2);
  for (std::size_t i = 0; i < 4; ++i) {
    dup(i, 0) = static_cast<double>(i);
    dup(i, 1) = static_cast<double>(i);  // duplicated column
  }
  CHECK_THROWS_AS((void)models::fit_ols(y, dup), Error);

  dist::Matrix wide(2, 3);
  const std::vector<double> y2 = {1, 2};
  CHECK_THROWS_AS((void)models::fit_ols(y2, wide), Error);
}

TEST_CASE("ols matches the two-variable closed form on random instances") {
  dist::RngStream rng(99, 0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 4 + rng.next_u64() % 17;
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = rng.next_normal();
      y[i] = 0.3 + 1.7 * x[i] + rng.next_normal();
    }
    const auto fit = models::fit_ols(y, design_with_intercept(x));
    double xbar = 0, ybar = 0;
    for (std::size_t i = 0; i < n; ++i) {
      xbar += x[i];
      ybar += y[i];
    }
    xbar /= n;
    ybar /= n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
      sxx += (x[i] - xbar) * (x[i] - xbar);
      sxy += (x[i] - xbar) * (y[i] - ybar);
    }
    const double slope = sxy / sxx;
    const double intercept = ybar - slope * xbar;
    double sse = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = y[i] - intercept - slope * x[i];
      sse += r * r;
    }
    const double se_slope = std::sqrt(sse / (n - 2) / sxx);
    CHECK(std::fabs(fit.coefficients[0] - intercept) < 1e-10);
    CHECK(std::fabs(fit.coefficients[1] - slope) < 1e-10);
    CHECK(std::fabs(fit.standard_errors[1] - se_slope) < 1e-10);
  }
}

TEST_CASE("logistic intercept-only equals logit of the mean") {
  const std::vector<double> y = {0, 1, 1, 1};
  dist::Matrix ones(4, 1);
  for (std::size_t i = 0; i < 4; ++i) ones(i, 0) = 1.0;
  const auto fit = models::fit_logistic(y, ones);
  CHECK(fit.coefficients[0] == doctest::Approx(std::log(3.0)).epsilon(1e-8));
  CHECK(fit.converged);
  CHECK(fit.standard_errors[0] > 0.0);
}

TEST_CASE("logistic detects separation") {
  dist::Matrix ones(6, 1);
  for (std::size_t i = 0; i < 6; ++i) ones(i, 0) = 1.0;
  const std::vector<double> all_one(6, 1.0);
  CHECK_THROWS_AS((void)models::fit_logistic(all_one, ones), Error);

  // perfectly separated covariate
  std::vector<double> y = {0, 0, 0, 1, 1, 1};
  dist::Matrix sep(6, 2);
  for (std::size_t i = 0; i < 6; ++i) {
    sep(i, 0) = 1.0;
    sep(i, 1) = i < 3 ? -1.0 : 1.0;
  }
  CHECK_THROWS_AS((void)models::fit_logistic(y, sep), Error);
}

TEST_CASE("logistic recovers the coefficient at n = 1e5") {
  dist::RngStream rng(123, 1);
  const std::size_t n = 100000;
  std::vector<double> y(n);
  dist::Matrix design(n, 2);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = rng.next_normal();
    design(i, 0) = 1.0;
    design(i, 1) = x;
    const double p = 1.0 / (1.0 + std::exp(-0.5 * x));
    y[i] = rng.next_unit() < p ? 1.0 : 0.0;
  }
  const auto fit = models::fit_logistic(y, design);
  CHECK(std::fabs(fit.coefficients[1] - 0.5) < 0.02);
  CHECK(fit.iterations <= 100);
}

TEST_CASE("cox single binary covariate matches the brute-force oracle") {
  const std::vector<double> time = {1, 2, 3, 4};
  const std::vector<int> event = {1, 1, 1, 1};
  const std::vector<double> x = {1, 0, 1, 0};
  dist::Matrix design(4, 1);
  for (std::size_t i = 0; i < 4; ++i) design(i, 0) = x[i];
  const auto fit = models::fit_cox(time, event, design);
  const double oracle_beta = oracle::cox_brute_force(time, event, x);
  CHECK(std::fabs(fit.coefficients[0] - oracle_beta) < 1e-4);
  CHECK(std::fabs(fit.loglik -
                  oracle::cox_partial_loglik(time, event, x,
                                             fit.coefficients[0])) < 1e-10);
}

TEST_CASE("cox with a zero covariate: coefficient 0, log risk-set sizes") {
  const std::vector<double> time = {1, 2, 3, 4};
  const std::vector<int> event = {1, 1, 1, 1};
  dist::Matrix design(4, 1);  // identically zero column
  const auto fit = models::fit_cox(time, event, design);
  CHECK(fit.coefficients[0] == 0.0);
  const double expect = -(std::log(4.0) + std::log(3.0) + std::log(2.0));
  CHECK(fit.loglik == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("cox rejects event-free data") {
  const std::vector<double> time = {1, 2};
  const std::vector<int> event = {0, 0};
  dist::Matrix design(2, 1);
  design(0, 0) = 1.0;
  CHECK_THROWS_AS((void)models::fit_cox(time, event, design), Error);
}

TEST_CASE("cox matches brute force on random small instances") {
  dist::RngStream rng(77, 0);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 3 + rng.next_u64() % 4;  // 3..6
    std::vector<double> time(n), x(n);
    std::vector<int> event(n, 1);
    for (std::size_t i = 0; i < n; ++i) {
      time[i] = dist::sample_exponential(1.0, rng);
      x[i] = rng.next_normal() * 0.5;
    }
    dist::Matrix design(n, 1);
    for (std::size_t i = 0; i < n; ++i) design(i, 0) = x[i];
    models::FitResult fit;
    try {
      fit = models::fit_cox(time, event, design);
    } catch (const Error&) {
      continue;  // monotone likelihood draw; oracle would diverge too
    }
    const double oracle_beta = oracle::cox_brute_force(time, event, x);
    if (std::fabs(oracle_beta) > 9.0) continue;  // maximizer outside the grid
    CHECK(std::fabs(fit.coefficients[0] - oracle_beta) < 1e-4);
  }
}

TEST_CASE("cox recovers the coefficient at n = 1e5 without censoring") {
  dist::RngStream rng(321, 2);
  const std::size_t n = 100000;
  std::vector<double> time(n);
  std::vector<int> event(n, 1);
  dist::Matrix design(n, 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = rng.next_normal();
    design(i, 0) = x;
    time[i] = dist::sample_exponential(std::exp(0.5 * x), rng);
  }
  const auto fit = models::fit_cox(time, event, design);
  CHECK(std::fabs(fit.coefficients[0] - 0.5) < 0.02);
}

TEST_CASE("fit_mediation on noiseless single-mediator data") {
  const std::size_t n = 8;
  models::Dataset data;
  data.family = models::OutcomeFamily::linear;
  data.exposure.resize(n);
  data.mediators = dist::Matrix(n, 1);
  data.covariates = dist::Matrix(n, 0);
  data.outcome.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = static_cast<double>(i) - 3.5;
    data.exposure[i] = x;
    data.mediators(i, 0) = x;      // M = X
    data.outcome[i] = x;           // Y = M
  }
  const auto fits = models::fit_mediation(data);
  REQUIRE(fits.size() == 1);
  CHECK(fits[0].alpha_hat == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(fits[0].beta_hat == doctest::Approx(1.0).epsilon(1e-10));
  // perfect fit: degenerate SEs are reported as zero at this layer
  CHECK(fits[0].se_alpha == doctest::Approx(0.0));
}

TEST_CASE("fit_mediation null mediator is calibrated") {
  // M2 unrelated to X and Y: its t statistics stay moderate
  sim::ScenarioConfig cfg;
  cfg.family = models::OutcomeFamily::linear;
  cfg.n = 1000;
  cfg.d = 2;
  cfg.alpha = {0.5, 0.0};
  cfg.beta = {0.5, 0.0};
  cfg.reps = 20;
  cfg.base_seed = 424243;
  for (std::uint64_t rep = 0; rep < cfg.reps; ++rep) {
    const auto data = sim::generate(cfg, rep);
    const auto fits = models::fit_mediation(data);
    CHECK(std::fabs(fits[1].alpha_hat / fits[1].se_alpha) < 4.0);
    CHECK(std::fabs(fits[1].beta_hat / fits[1].se_beta) < 4.0);
  }
}

TEST_CASE("fit_mediation recovers the multi-mediator scenario coefficients") {
  sim::ScenarioConfig cfg;
  cfg.family = models::OutcomeFamily::linear;
  cfg.n = 1500;
  cfg.d = 10;
  cfg.alpha = {0.15, 0.05, 0.15, 0.15, 0.05, 0.5, 0.5, 0, 0, 0};
  cfg.beta = {0.15, 0.05, 0.15, 0.05, 0.1, 0, 0, 0.5, 0.5, 0};
  cfg.base_seed = 20240809;
  const auto data = sim::generate(cfg, 0);
  const auto fits = models::fit_mediation(data);
  REQUIRE(fits.size() == 10);
  // mediator 6 (index 5): alpha = 0.5, beta = 0
  CHECK(std::fabs(fits[5].alpha_hat - 0.5) < 0.05);
  CHECK(std::fabs(fits[5].beta_hat) < 0.05);
}

TEST_CASE("t-ratios are invariant to rescaling a mediator column") {
  sim::ScenarioConfig cfg;
  cfg.family = models::OutcomeFamily::linear;
  cfg.n = 200;
  cfg.d = 3;
  cfg.alpha = {0.3, 0.0, 0.1};
  cfg.beta = {0.2, 0.1, 0.0};
  cfg.base_seed = 5150;
  auto data = sim::generate(cfg, 1);
  const auto base = models::fit_mediation(data);
  for (std::size_t i = 0; i < cfg.n; ++i) data.mediators(i, 1) *= 37.5;
  const auto scaled = models::fit_mediation(data);
  for (std::size_t k = 0; k < 3; ++k) {
    const double t_a0 = base[k].alpha_hat / base[k].se_alpha;
    const double t_a1 = scaled[k].alpha_hat / scaled[k].se_alpha;
    const double t_b0 = base[k].beta_hat / base[k].se_beta;
    const double t_b1 = scaled[k].beta_hat / scaled[k].se_beta;
    CHECK(std::fabs(t_a0 - t_a1) < 1e-8);
    CHECK(std::fabs(t_b0 - t_b1) < 1e-8);
  }
}

TEST_CASE("dataset validation rejects bad encodings") {
  models::Dataset data;
  data.family = models::OutcomeFamily::logistic;
  data.exposure = {0.0, 1.0, 2.0};
  data.mediators = dist::Matrix(3, 1);
  data.covariates = dist::Matrix(3, 0);
  data.outcome = {0.0, 0.5, 1.0};  // not 0/1
  CHECK_THROWS_AS(data.validate(), Error);

  data.family = models::OutcomeFamily::cox;
  data.outcome = {1.0, -2.0, 3.0};  // negative time
  data.event = {1, 0, 1};
  CHECK_THROWS_AS(data.validate(), Error);

  data.outcome = {1.0, 2.0, 3.0};
  data.event = {0, 0, 0};  // no events
  CHECK_THROWS_AS(data.validate(), Error);
}

}  // TEST_SUITE
