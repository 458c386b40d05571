#ifndef MEDTEST_SIMULATE_HPP
#define MEDTEST_SIMULATE_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "medtest/models.hpp"
#include "medtest/multitest.hpp"

namespace medtest::sim {

// Declarative description of one Monte Carlo scenario.
//
// Data model, with X ~ N(0,1) and e ~ MVN(0, AR1(rho)):
//   M_k = c_m + alpha_k X + e_k
//   linear:   Y = c + gamma X + beta'M + eps,  eps ~ N(0,1)
//   logistic: Y ~ Bernoulli(expit(gamma X + beta'M))
//   cox:      T ~ Exp(rate = exp(gamma X + beta'M)), C ~ U(0, c0),
//             Y = min(T, C), event = {T <= C}
//
// The mediator intercept c_m defaults to 0 for a single mediator and 0.5
// for multiple mediators (the two generating displays differ); set
// mediator_intercept to override. Analysis models always estimate
// intercepts where the family supports them, so the choice does not move
// any test statistic's distribution.
struct ScenarioConfig {
  models::OutcomeFamily family = models::OutcomeFamily::linear;
  std::size_t n = 0;
  std::size_t d = 1;
  std::vector<double> alpha;
  std::vector<double> beta;
  double gamma = 0.5;
  double outcome_intercept = 0.5;  // linear family only
  std::optional<double> mediator_intercept;
  double rho = 0.25;
  double censor_target = 0.30;      // cox only
  std::optional<double> c0;         // censoring upper bound, once calibrated
  std::uint64_t reps = 1;
  std::uint64_t base_seed = 0;
  double delta = 0.05;

  double mediator_intercept_value() const {
    return mediator_intercept.value_or(d == 1 ? 0.0 : 0.5);
  }
  // Indices of active mediators {k : alpha_k * beta_k != 0}, 0-based.
  std::vector<std::size_t> truth() const;
  void validate() const;
};

// Replication `rep` of the scenario, fully determined by
// (base_seed, rep). Requires a calibrated c0 for the cox family.
models::Dataset generate(const ScenarioConfig& scenario, std::uint64_t rep);

// Bisection for the censoring bound c0 in (1e-3, 1e3) so that the
// pilot-estimated censoring rate lands within 0.005 of censor_target.
// The pilot uses a reserved stream, so replication streams are untouched.
double calibrate_censoring(const ScenarioConfig& scenario,
                           std::uint64_t pilot_n = 100000);

enum class SummaryMode { size_power, fwer, coverage };

struct CoverageRow {
  std::array<double, 2> cp{};     // 0 sobel, 1 asobel
  std::array<double, 2> cp_se{};
  std::array<double, 2> lci{};    // mean interval width
  std::uint64_t used = 0;
  std::uint64_t degenerate = 0;   // excluded from the averages
};

struct SimulationSummary {
  SummaryMode mode = SummaryMode::size_power;
  ScenarioConfig scenario;  // echo, with c0 resolved
  std::uint64_t reps_used = 0;
  std::uint64_t failures = 0;
  bool flagged = false;  // more than 1% of replications failed to fit
  double elapsed_seconds = 0.0;

  // size_power mode (method order: sobel, js, asobel, ajs)
  std::array<double, 4> rejection_rate{};
  std::array<double, 4> rejection_se{};
  bool is_power = false;
  double mu_alpha_hat = 0.0;   // Monte Carlo mean of t_alpha
  double mu_beta_hat = 0.0;    // Monte Carlo mean of t_beta
  double prob_tmax_ge = 0.0;   // fraction of reps with t_max >= lambda_n
  std::array<std::vector<double>, 4> pvalues;  // per-rep, rep order

  // fwer mode
  std::array<double, 4> fwer{};
  std::array<double, 4> fwer_se{};
  std::array<double, 4> power{};
  std::array<double, 4> power_se{};

  // coverage mode, one row per mediator
  std::vector<CoverageRow> coverage;
};

// Single-mediator size/power study (requires d == 1). Estimates are
// independent of `threads`, bit for bit.
SimulationSummary run_size_power(ScenarioConfig scenario, unsigned threads = 0);

// Multiple-testing study at the Bonferroni threshold delta/d (d >= 2).
SimulationSummary run_fwer(ScenarioConfig scenario, unsigned threads = 0);

// Confidence-interval study: per-mediator coverage of alpha_k*beta_k and
// mean interval length for both interval types.
SimulationSummary run_coverage(ScenarioConfig scenario, unsigned threads = 0);

// Sorted p-values against uniform plotting positions (i - 0.5)/m.
std::vector<std::pair<double, double>> qq_data(std::span<const double> pvalues);

// One-sample Kolmogorov-Smirnov distance from U(0,1).
double ks_uniform_distance(std::span<const double> pvalues);

}  // namespace medtest::sim

#endif  // MEDTEST_SIMULATE_HPP
