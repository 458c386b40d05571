#include "oracle.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace oracle {

namespace {

const long double kSqrtPi = 1.77245385090551602729816748334114518L;

// erf(x) by its Maclaurin series, |x| modest.
long double erf_series(long double x) {
  long double term = x;
  long double sum = x;
  const long double x2 = x * x;
  for (int n = 1; n < 400; ++n) {
    term *= -x2 / n;
    const long double add = term / (2 * n + 1);
    sum += add;
    if (std::fabs(add) < 1e-25L * std::fabs(sum)) break;
  }
  return sum * 2.0L / kSqrtPi;
}

// Upper-tail 1 - Phi(z) for z > 0 via the Laplace continued fraction
// evaluated backwards.
long double upper_tail_cf(long double z) {
  const long double kTwoPi = 6.28318530717958647692528676655900577L;
  long double cf = 0.0L;
  for (int k = 120; k >= 1; --k) cf = k / (z + cf);
  cf = 1.0L / (z + cf);
  const long double phi = std::exp(-0.5L * z * z) / std::sqrt(kTwoPi);
  return phi * cf;
}

}  // namespace

double normal_cdf(double x) {
  const long double z = x;
  if (std::fabs(x) <= 4.0) {
    return static_cast<double>(0.5L +
                               0.5L * erf_series(z / std::sqrt(2.0L)));
  }
  const long double tail = upper_tail_cf(std::fabs(z));
  return static_cast<double>(x > 0 ? 1.0L - tail : tail);
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("oracle quantile: p outside (0,1)");
  double lo = -40.0, hi = 40.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (normal_cdf(mid) < p)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double cox_partial_loglik(std::span<const double> time,
                          std::span<const int> event,
                          std::span<const double> x, double beta) {
  const std::size_t n = time.size();
  long double ll = 0.0L;
  for (std::size_t i = 0; i < n; ++i) {
    if (!event[i]) continue;
    long double risk = 0.0L;
    for (std::size_t j = 0; j < n; ++j)
      if (time[j] >= time[i]) risk += std::exp((long double)(beta * x[j]));
    ll += beta * x[i] - std::log(risk);
  }
  return static_cast<double>(ll);
}

double cox_brute_force(std::span<const double> time,
                       std::span<const int> event, std::span<const double> x) {
  double best_b = 0.0;
  double best_ll = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 20000; ++i) {
    const double b = -10.0 + i * 1e-3;
    const double ll = cox_partial_loglik(time, event, x, b);
    if (ll > best_ll) {
      best_ll = ll;
      best_b = b;
    }
  }
  double lo = best_b - 1e-3, hi = best_b + 1e-3;
  for (int it = 0; it < 200; ++it) {
    const double m1 = lo + (hi - lo) / 3.0;
    const double m2 = hi - (hi - lo) / 3.0;
    if (cox_partial_loglik(time, event, x, m1) <
        cox_partial_loglik(time, event, x, m2))
      lo = m1;
    else
      hi = m2;
  }
  return 0.5 * (lo + hi);
}

double censor_rate_exp1(double c0) {
  return (1.0 - std::exp(-c0)) / c0;
}

double solve_censor_c0(double target) {
  double lo = 1e-6, hi = 1e6;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (censor_rate_exp1(mid) > target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace oracle
