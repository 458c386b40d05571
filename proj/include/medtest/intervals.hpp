#ifndef MEDTEST_INTERVALS_HPP
#define MEDTEST_INTERVALS_HPP

#include "medtest/models.hpp"

namespace medtest::intervals {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double width() const { return hi - lo; }
  bool contains(double v) const { return lo <= v && v <= hi; }
};

// Both confidence intervals for alpha*beta at miscoverage delta.
// The adaptive interval equals the plain one when t_max >= lambda_n and has
// exactly half its width otherwise. degenerate flags the measure-zero case
// alpha_hat = beta_hat = 0, where both intervals collapse to {0}.
struct IntervalPair {
  double point = 0.0;       // alpha_hat * beta_hat
  double se_product = 0.0;  // sqrt(a^2 se_b^2 + b^2 se_a^2)
  double delta = 0.05;
  Interval sobel;
  Interval asobel;
  bool adaptive_branch = false;
  bool degenerate = false;
};

Interval ci_sobel(const models::MediationFit& fit, double delta);

IntervalPair make_intervals(const models::MediationFit& fit, double delta);

// Asymptotic coverage of the plain Sobel interval when both coefficients
// are zero: 2 Phi(2 z_{1-delta/2}) - 1 (over-coverage for every delta).
double sobel_coverage_h00(double delta);

}  // namespace medtest::intervals

#endif  // MEDTEST_INTERVALS_HPP
