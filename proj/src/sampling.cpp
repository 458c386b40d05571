#include "medtest/sampling.hpp"

#include <cmath>

#include "medtest/error.hpp"

namespace medtest::dist {

double uniform_transform(double unit, double lo, double hi) {
  if (!(lo < hi)) throw_argument("sample_uniform: requires lo < hi");
  return lo + unit * (hi - lo);
}

double exponential_transform(double unit, double rate) {
  if (!(rate > 0.0)) throw_argument("sample_exponential: rate must be > 0");
  return -std::log(unit) / rate;
}

double sample_uniform(double lo, double hi, RngStream& rng) {
  if (!(lo < hi)) throw_argument("sample_uniform: requires lo < hi");
  return uniform_transform(rng.next_unit(), lo, hi);
}

double sample_exponential(double rate, RngStream& rng) {
  if (!(rate > 0.0)) throw_argument("sample_exponential: rate must be > 0");
  return exponential_transform(rng.next_unit(), rate);
}

std::vector<double> sample_mvn(std::span<const double> mean,
                               const Matrix& chol_lower, RngStream& rng) {
  const std::size_t d = mean.size();
  if (chol_lower.rows() != d || chol_lower.cols() != d)
    throw_argument("sample_mvn: dimension mismatch between mean and factor");
  std::vector<double> z(d);
  for (std::size_t i = 0; i < d; ++i) z[i] = rng.next_normal();
  std::vector<double> x(mean.begin(), mean.end());
  for (std::size_t i = 0; i < d; ++i) {
    double s = 0.0;
    for (std::size_t k = 0; k <= i; ++k) s += chol_lower(i, k) * z[k];
    x[i] += s;
  }
  return x;
}

}  // namespace medtest::dist
