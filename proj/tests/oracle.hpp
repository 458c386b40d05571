#ifndef MEDTEST_TESTS_ORACLE_HPP
#define MEDTEST_TESTS_ORACLE_HPP

// Independent reference implementations used only to freeze expected test
// values. Nothing here may call into the library's own numerics.

#include <cstddef>
#include <span>
#include <vector>

namespace oracle {

// Standard normal CDF from the Maclaurin series of the error function in
// the bulk and the Laplace continued fraction in the tails, evaluated in
// long double.
double normal_cdf(double x);

// Inverse of oracle::normal_cdf by bisection.
double normal_quantile(double p);

// Cox partial log-likelihood for one covariate, written directly from the
// risk-set definition (Breslow handling of ties).
double cox_partial_loglik(std::span<const double> time,
                          std::span<const int> event,
                          std::span<const double> x, double beta);

// Brute-force maximizer of the one-covariate partial likelihood:
// coarse grid over [-10, 10] followed by ternary refinement.
double cox_brute_force(std::span<const double> time,
                       std::span<const int> event, std::span<const double> x);

// P(censored) when the event time is Exp(1) and censoring is U(0, c0):
// (1 - e^{-c0}) / c0.
double censor_rate_exp1(double c0);

// Solves censor_rate_exp1(c0) = target by bisection.
double solve_censor_c0(double target);

}  // namespace oracle

#endif  // MEDTEST_TESTS_ORACLE_HPP
