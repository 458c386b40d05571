#ifndef MEDTEST_MULTITEST_HPP
#define MEDTEST_MULTITEST_HPP

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "medtest/tests.hpp"

namespace medtest::multitest {

enum class Method : int { sobel = 0, js = 1, asobel = 2, ajs = 3 };
inline constexpr std::array<Method, 4> kMethods = {
    Method::sobel, Method::js, Method::asobel, Method::ajs};
inline constexpr std::array<const char*, 4> kMethodNames = {"sobel", "js",
                                                            "asobel", "ajs"};

double p_value(const tests::TestReport& r, Method m);

// One family of d mediator hypotheses tested at the Bonferroni threshold
// delta/d, for each of the four methods.
struct MultiTestResult {
  std::size_t d = 0;
  double delta = 0.05;
  double lambda_n = 0.0;
  std::vector<tests::TestReport> per_mediator;
  std::array<std::vector<std::size_t>, 4> rejected;  // 0-based indices

  bool rejects(Method m, std::size_t k) const;
};

// Applies all four tests per mediator; every fit must share the same n.
MultiTestResult test_all(std::span<const models::MediationFit> fits,
                         double delta);

struct FwerPower {
  std::array<double, 4> fwer{};   // per method
  std::array<double, 4> power{};  // mean per-true-signal detection rate
};

// Aggregates replications: FWER is the fraction of replications with at
// least one rejection outside `truth`; power averages the rejection
// indicator over replications and over the indices in `truth`.
FwerPower fwer_and_power(std::span<const std::size_t> truth,
                         std::span<const MultiTestResult> results);

}  // namespace medtest::multitest

#endif  // MEDTEST_MULTITEST_HPP
