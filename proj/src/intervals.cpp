#include "medtest/intervals.hpp"

#include <cmath>

#include "medtest/error.hpp"
#include "medtest/normal.hpp"
#include "medtest/tests.hpp"

namespace medtest::intervals {

namespace {

void check_level(double delta) {
  if (!(delta > 0.0 && delta < 1.0))
    throw_argument("confidence level: delta must lie in (0, 1)");
}

}  // namespace

Interval ci_sobel(const models::MediationFit& fit, double delta) {
  return make_intervals(fit, delta).sobel;
}

IntervalPair make_intervals(const models::MediationFit& fit, double delta) {
  check_level(delta);
  if (!(fit.se_alpha > 0.0) || !(fit.se_beta > 0.0))
    throw_numeric("mediation fit: degenerate standard error (se <= 0)");

  IntervalPair p;
  p.delta = delta;
  p.point = fit.alpha_hat * fit.beta_hat;
  p.se_product =
      std::sqrt(fit.alpha_hat * fit.alpha_hat * fit.se_beta * fit.se_beta +
                fit.beta_hat * fit.beta_hat * fit.se_alpha * fit.se_alpha);

  const double t_alpha = fit.alpha_hat / fit.se_alpha;
  const double t_beta = fit.beta_hat / fit.se_beta;
  const double t_max = std::max(std::fabs(t_alpha), std::fabs(t_beta));
  p.adaptive_branch =
      t_max < tests::lambda_threshold(static_cast<double>(fit.n));
  p.degenerate = fit.alpha_hat == 0.0 && fit.beta_hat == 0.0;

  const double z = dist::std_normal_quantile(1.0 - delta / 2.0);
  const double half = z * p.se_product;
  p.sobel = {p.point - half, p.point + half};
  // N_{1-delta/2}(0, 1/4) = z/2: the adaptive branch halves the half-width.
  const double half_adaptive = p.adaptive_branch ? 0.5 * half : half;
  p.asobel = {p.point - half_adaptive, p.point + half_adaptive};
  return p;
}

double sobel_coverage_h00(double delta) {
  check_level(delta);
  return 2.0 * dist::std_normal_cdf(
                   2.0 * dist::std_normal_quantile(1.0 - delta / 2.0)) -
         1.0;
}

}  // namespace medtest::intervals
