#ifndef MEDTEST_SAMPLING_HPP
#define MEDTEST_SAMPLING_HPP

#include <span>
#include <vector>

#include "medtest/linalg.hpp"
#include "medtest/rng.hpp"

namespace medtest::dist {

// Pure transforms of a unit-uniform draw; the sample_* functions below
// consume exactly one unit draw each and apply these.
double uniform_transform(double unit, double lo, double hi);
double exponential_transform(double unit, double rate);

double sample_uniform(double lo, double hi, RngStream& rng);
double sample_exponential(double rate, RngStream& rng);

// Multivariate normal draw mean + L z with z iid standard normal; chol_lower
// is the lower Cholesky factor of the target covariance.
std::vector<double> sample_mvn(std::span<const double> mean,
                               const Matrix& chol_lower, RngStream& rng);

}  // namespace medtest::dist

#endif  // MEDTEST_SAMPLING_HPP
