#ifndef MEDTEST_TESTS_HPP
#define MEDTEST_TESTS_HPP

#include <cstdint>

#include "medtest/models.hpp"

namespace medtest::tests {

// All four p-values for one mediator plus the pieces they are built from.
// adaptive_branch is true exactly when t_max < lambda_n, i.e. when the
// adaptive tests switch to their small-signal reference.
struct TestReport {
  double p_sobel = 1.0;
  double p_js = 1.0;
  double p_asobel = 1.0;
  double p_ajs = 1.0;
  double t_alpha = 0.0;
  double t_beta = 0.0;
  double t_sobel = 0.0;
  double t_max = 0.0;
  double lambda_n = 0.0;
  bool adaptive_branch = false;
};

// sqrt(n) / ln(n); requires n >= 2.
double lambda_threshold(double n);

// max of the two two-sided normal p-values of t_alpha and t_beta.
double p_js(const models::MediationFit& fit);

// alpha*beta / sqrt(alpha^2 se_beta^2 + beta^2 se_alpha^2); equals
// t_a t_b / sqrt(t_a^2 + t_b^2) and is 0 whenever alpha*beta is 0.
double sobel_stat(const models::MediationFit& fit);

double p_sobel(const models::MediationFit& fit);

// p_js when t_max >= lambda_n, p_js squared otherwise.
double p_ajs(const models::MediationFit& fit);

// two-sided p of t_sobel against N(0,1) when t_max >= lambda_n and against
// N(0,1/4) otherwise.
double p_asobel(const models::MediationFit& fit);

TestReport compute_report(const models::MediationFit& fit);

// ---- closed-form size/power calculators ----

// Size of the plain Sobel test when both coefficients are zero:
// 2{1 - Phi(2 z_{1-delta/2})}.
double theoretical_size_sobel_h00(double delta);

// Power of the plain joint-significance test at standardized means
// (mu_alpha, mu_beta).
double theoretical_power_js(double mu_alpha, double mu_beta, double delta);

// Power of the adaptive joint-significance test: a mixture of the plain JS
// power and the same product evaluated at the sqrt(delta) threshold,
// weighted by prob_tmax_ge = P(t_max >= lambda_n) under the alternative.
double theoretical_power_ajs(double mu_alpha, double mu_beta, double delta,
                             double prob_tmax_ge);

struct PowerEstimate {
  double value = 0.0;
  double mc_se = 0.0;
};

// Power of the adaptive Sobel test by Monte Carlo integration of the
// bivariate normal over {|xy|/sqrt(x^2+y^2) > q}, mixing the two branch
// thresholds q = z_{1-delta/2} and q = z_{1-delta/2}/2. Requires
// draws >= 10^4; deterministic given the seed.
PowerEstimate theoretical_power_asobel(double mu_alpha, double mu_beta,
                                       double delta, double prob_tmax_ge,
                                       std::uint64_t draws,
                                       std::uint64_t seed = 0x5edba5e);

}  // namespace medtest::tests

#endif  // MEDTEST_TESTS_HPP
