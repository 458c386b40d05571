#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "doctest.h"
#include "medtest/error.hpp"
#include "medtest/linalg.hpp"
#include "medtest/normal.hpp"
#include "medtest/rng.hpp"
#include "medtest/sampling.hpp"
#include "oracle.hpp"

using namespace medtest;

TEST_SUITE("dist") {

TEST_CASE("normal cdf matches the series/continued-fraction oracle") {
  for (double x = -8.0; x <= 8.0; x += 0.0625) {
    CHECK(std::fabs(dist::std_normal_cdf(x) - oracle::normal_cdf(x)) < 1e-13);
  }
}

TEST_CASE("normal cdf anchor values") {
  CHECK(dist::std_normal_cdf(0.0) == 0.5);
  // 1.959964... is the 0.975 quantile; frozen from the oracle
  CHECK(dist::std_normal_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-12));
  CHECK(dist::std_normal_cdf(-10.0) < 1e-20);
  // tail bound phi(10)/10
  CHECK(dist::std_normal_cdf(-10.0) < dist::std_normal_pdf(10.0) / 10.0);
  CHECK_THROWS_AS((void)dist::std_normal_cdf(
                      std::numeric_limits<double>::quiet_NaN()),
                  Error);
  CHECK_THROWS_AS((void)dist::std_normal_cdf(
                      std::numeric_limits<double>::infinity()),
                  Error);
}

TEST_CASE("normal cdf antisymmetry") {
  for (double x = 0.0; x <= 8.0; x += 0.125) {
    const double v = dist::std_normal_cdf(-x) - (1.0 - dist::std_normal_cdf(x));
    CHECK(std::fabs(v) < 1e-14);
  }
}

TEST_CASE("normal quantile anchors and inverse identity") {
  CHECK(std::fabs(dist::std_normal_quantile(0.5)) < 1e-15);
  CHECK(dist::std_normal_quantile(0.975) ==
        doctest::Approx(1.959963984540054).epsilon(1e-12));
  // N(0, 1/4) quantile is half the standard one
  CHECK(0.5 * dist::std_normal_quantile(0.975) ==
        doctest::Approx(0.979981992270027).epsilon(1e-10));

  // quantile(cdf(x)) recovers x wherever the double representation of
  // cdf(x) still carries the information; at x = +8 the CDF rounds into
  // the last few ulps below 1, so the identity is checked in p-space there
  // (scipy's ppf(cdf(8)) lands on the same 7.99157...).
  for (double x = -8.0; x <= 4.0; x += 4.0) {
    const double p = dist::std_normal_cdf(x);
    CHECK(dist::std_normal_quantile(p) == doctest::Approx(x).epsilon(1e-8));
  }
  {
    const double p = dist::std_normal_cdf(8.0);
    const double x_hat = dist::std_normal_quantile(p);
    CHECK(std::fabs(dist::std_normal_cdf(x_hat) - p) < 1e-9);
    CHECK(x_hat > 7.9);
  }
  // cdf(quantile(p)) = p to 1e-9
  for (double p : {1e-10, 1e-6, 0.01, 0.3, 0.5, 0.8882, 0.975, 1.0 - 1e-9}) {
    CHECK(std::fabs(dist::std_normal_cdf(dist::std_normal_quantile(p)) - p) <
          1e-9);
  }

  CHECK_THROWS_AS((void)dist::std_normal_quantile(0.0), Error);
  CHECK_THROWS_AS((void)dist::std_normal_quantile(1.0), Error);
  CHECK_THROWS_AS((void)dist::std_normal_quantile(-0.2), Error);
}

TEST_CASE("quantile agrees with bisection on the oracle cdf") {
  for (double p : {0.001, 0.025, 0.1, 0.5, 0.9, 0.975, 0.999}) {
    CHECK(dist::std_normal_quantile(p) ==
          doctest::Approx(oracle::normal_quantile(p)).epsilon(1e-9));
  }
}

TEST_CASE("cholesky identity and hand example") {
  const auto eye = dist::Matrix::identity(3);
  const auto l = dist::cholesky(eye);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      CHECK(l(i, j) == (i == j ? 1.0 : 0.0));

  dist::Matrix m(2, 2);
  m(0, 0) = 1.0; m(0, 1) = 0.25; m(1, 0) = 0.25; m(1, 1) = 1.0;
  const auto lm = dist::cholesky(m);
  CHECK(lm(0, 0) == doctest::Approx(1.0));
  CHECK(lm(0, 1) == 0.0);
  CHECK(lm(1, 0) == doctest::Approx(0.25));
  // sqrt(1 - 0.0625)
  CHECK(lm(1, 1) == doctest::Approx(0.96824583655185426).epsilon(1e-12));
}

TEST_CASE("cholesky rejects indefinite input naming the pivot") {
  dist::Matrix m(2, 2);
  m(0, 0) = 1.0; m(0, 1) = 2.0; m(1, 0) = 2.0; m(1, 1) = 1.0;
  try {
    (void)dist::cholesky(m);
    FAIL("expected a numeric error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::numeric);
    CHECK(std::string(e.what()).find("pivot 2") != std::string::npos);
  }
}

TEST_CASE("cholesky round trip on random SPD matrices") {
  dist::RngStream rng(2024, 7);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + (rng.next_u64() % 20);
    dist::Matrix b(n, n);
    for (auto& v : b.data()) v = rng.next_normal();
    dist::Matrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < n; ++k) s += b(i, k) * b(j, k);
        a(i, j) = s + (i == j ? 0.5 : 0.0);
      }
    const auto l = dist::cholesky(a);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < n; ++k) s += l(i, k) * l(j, k);
        worst = std::max(worst, std::fabs(s - a(i, j)));
      }
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("ar1 covariance entries") {
  const auto cov = dist::CovMatrix::ar1(4, 0.25);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      CHECK(cov.entries()(i, j) ==
            doctest::Approx(std::pow(0.25, std::fabs(double(i) - double(j)))));
  CHECK_THROWS_AS(dist::CovMatrix::ar1(3, 1.0), Error);
  CHECK_THROWS_AS(dist::CovMatrix::ar1(0, 0.25), Error);
}

TEST_CASE("rng streams reproduce and separate") {
  dist::RngStream a(42, 3), b(42, 3), c(42, 4);
  for (int i = 0; i < 10000; ++i) CHECK(a.next_u64() == b.next_u64());

  dist::RngStream u(7, 0), v(7, 1);
  double sxy = 0.0, sx = 0.0, sy = 0.0, sxx = 0.0, syy = 0.0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    const double x = u.next_unit(), y = v.next_unit();
    sx += x; sy += y; sxx += x * x; syy += y * y; sxy += x * y;
  }
  const double corr = (sxy - sx * sy / n) /
                      std::sqrt((sxx - sx * sx / n) * (syy - sy * sy / n));
  CHECK(std::fabs(corr) < 0.03);
  (void)c;
}

TEST_CASE("unit draws stay inside the open interval") {
  dist::RngStream rng(1, 1);
  for (int i = 0; i < 100000; ++i) {
    const double x = rng.next_unit();
    CHECK(x > 0.0);
    CHECK(x < 1.0);
  }
}

TEST_CASE("uniform and exponential transforms") {
  CHECK(dist::uniform_transform(0.5, 0.0, 1.0) == 0.5);
  CHECK(dist::exponential_transform(std::exp(-2.0), 2.0) ==
        doctest::Approx(1.0).epsilon(1e-14));
  dist::RngStream rng(11, 0);
  CHECK_THROWS_AS((void)dist::sample_uniform(1.0, 1.0, rng), Error);
  CHECK_THROWS_AS((void)dist::sample_uniform(2.0, 1.0, rng), Error);
  CHECK_THROWS_AS((void)dist::sample_exponential(0.0, rng), Error);
  CHECK_THROWS_AS((void)dist::sample_exponential(-1.0, rng), Error);
}

TEST_CASE("exponential sample mean") {
  dist::RngStream rng(5, 9);
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) sum += dist::sample_exponential(1.0, rng);
  CHECK(std::fabs(sum / n - 1.0) < 0.02);
}

TEST_CASE("mvn sampling: degenerate, mean, and correlation") {
  dist::RngStream rng(3, 0);
  const std::vector<double> zero2(2, 0.0);
  dist::Matrix zero_factor(2, 2);
  const auto z = dist::sample_mvn(zero2, zero_factor, rng);
  CHECK(z[0] == 0.0);
  CHECK(z[1] == 0.0);

  const std::vector<double> zero1(1, 0.0);
  const auto l1 = dist::Matrix::identity(1);
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) sum += dist::sample_mvn(zero1, l1, rng)[0];
  CHECK(std::fabs(sum / n) < 0.02);

  const auto l2 = dist::CovMatrix::ar1(2, 0.25).cholesky_factor();
  double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    const auto v = dist::sample_mvn(zero2, l2, rng);
    sx += v[0]; sy += v[1];
    sxx += v[0] * v[0]; syy += v[1] * v[1]; sxy += v[0] * v[1];
  }
  const double corr = (sxy - sx * sy / n) /
                      std::sqrt((sxx - sx * sx / n) * (syy - sy * sy / n));
  CHECK(std::fabs(corr - 0.25) < 0.02);

  const std::vector<double> m3(3, 0.0);
  CHECK_THROWS_AS((void)dist::sample_mvn(m3, l2, rng), Error);
}

}  // TEST_SUITE
