#include "medtest/multitest.hpp"

#include <algorithm>

#include "medtest/error.hpp"

namespace medtest::multitest {

double p_value(const tests::TestReport& r, Method m) {
  switch (m) {
    case Method::sobel:
      return r.p_sobel;
    case Method::js:
      return r.p_js;
    case Method::asobel:
      return r.p_asobel;
    case Method::ajs:
      return r.p_ajs;
  }
  throw_argument("p_value: unknown method");
}

bool MultiTestResult::rejects(Method m, std::size_t k) const {
  const auto& set = rejected[static_cast<int>(m)];
  return std::find(set.begin(), set.end(), k) != set.end();
}

MultiTestResult test_all(std::span<const models::MediationFit> fits,
                         double delta) {
  if (fits.empty()) throw_argument("test_all: no mediators");
  if (!(delta > 0.0 && delta < 1.0))
    throw_argument("test_all: delta must lie in (0, 1)");
  const std::size_t n = fits.front().n;
  for (const auto& f : fits)
    if (f.n != n) throw_argument("test_all: fits disagree on sample size");

  MultiTestResult res;
  res.d = fits.size();
  res.delta = delta;
  res.lambda_n = tests::lambda_threshold(static_cast<double>(n));
  res.per_mediator.reserve(res.d);
  const double threshold = delta / static_cast<double>(res.d);
  for (std::size_t k = 0; k < res.d; ++k) {
    const tests::TestReport r = tests::compute_report(fits[k]);
    for (Method m : kMethods)
      if (p_value(r, m) < threshold)
        res.rejected[static_cast<int>(m)].push_back(k);
    res.per_mediator.push_back(r);
  }
  return res;
}

FwerPower fwer_and_power(std::span<const std::size_t> truth,
                         std::span<const MultiTestResult> results) {
  if (results.empty()) throw_argument("fwer_and_power: no replications");
  const std::size_t d = results.front().d;
  for (std::size_t k : truth)
    if (k >= d) throw_argument("fwer_and_power: truth index out of range");

  std::array<std::size_t, 4> family_errors{};
  std::array<std::size_t, 4> detections{};
  for (const auto& rep : results) {
    if (rep.d != d)
      throw_argument("fwer_and_power: replications disagree on dimension");
    for (Method m : kMethods) {
      const auto mi = static_cast<int>(m);
      bool false_rejection = false;
      for (std::size_t k : rep.rejected[mi]) {
        if (std::find(truth.begin(), truth.end(), k) == truth.end()) {
          false_rejection = true;
          break;
        }
      }
      family_errors[mi] += false_rejection;
      for (std::size_t k : truth) detections[mi] += rep.rejects(m, k);
    }
  }

  FwerPower out;
  const double reps = static_cast<double>(results.size());
  for (Method m : kMethods) {
    const auto mi = static_cast<int>(m);
    out.fwer[mi] = static_cast<double>(family_errors[mi]) / reps;
    out.power[mi] =
        truth.empty()
            ? 0.0
            : static_cast<double>(detections[mi]) /
                  (reps * static_cast<double>(truth.size()));
  }
  return out;
}

}  // namespace medtest::multitest
