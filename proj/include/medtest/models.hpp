#ifndef MEDTEST_MODELS_HPP
#define MEDTEST_MODELS_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "medtest/linalg.hpp"

namespace medtest::models {

enum class OutcomeFamily { linear, logistic, cox };

// One analysis dataset: exposure X, n×d mediator block M, optional n×q
// covariate block Z, and the outcome. For the cox family `outcome` holds the
// observed time and `event` the 0/1 status; otherwise `event` is empty.
struct Dataset {
  OutcomeFamily family = OutcomeFamily::linear;
  std::vector<double> exposure;
  dist::Matrix mediators;
  dist::Matrix covariates;  // 0 columns when there are none
  std::vector<double> outcome;
  std::vector<int> event;

  std::size_t n() const noexcept { return exposure.size(); }
  std::size_t d() const noexcept { return mediators.cols(); }
  std::size_t q() const noexcept { return covariates.cols(); }

  // Throws a data error on any invariant violation: non-finite entries,
  // inconsistent lengths, non-0/1 binary outcome, nonpositive survival
  // times, or survival data without a single event.
  void validate() const;
};

struct FitResult {
  std::vector<double> coefficients;
  std::vector<double> standard_errors;
  bool converged = false;
  int iterations = 0;
  double loglik = 0.0;  // 0 for OLS, partial loglik for cox
};

// Per-mediator quadruple consumed by every test and interval.
struct MediationFit {
  double alpha_hat = 0.0;
  double se_alpha = 0.0;
  double beta_hat = 0.0;
  double se_beta = 0.0;
  std::size_t n = 0;
  std::size_t mediator_index = 0;  // 0-based
};

// Ordinary least squares. SEs are sqrt(s^2 diag((XᵗX)^-1)) with
// s^2 = SSE/(n-p); a perfect fit yields SE 0 at this layer.
FitResult fit_ols(std::span<const double> response, const dist::Matrix& design);

// Logistic regression by Newton-Raphson with step halving.
// Stops when the score sup-norm drops below 1e-8 (max 100 iterations);
// coefficients beyond ±50 or a non-invertible information matrix are
// reported as separation.
FitResult fit_logistic(std::span<const double> response,
                       const dist::Matrix& design);

// Cox proportional hazards via the Breslow-tie partial likelihood,
// Newton-Raphson with step halving, tolerance 1e-8 on the score sup-norm
// (max 50 iterations). Diverging coefficients (monotone likelihood) and
// event-free data are errors.
FitResult fit_cox(std::span<const double> time, std::span<const int> event,
                  const dist::Matrix& design);

// Full mediation fit: for each mediator k, alpha_k from the OLS of M_k on
// (1, X, Z) and beta_k from the joint outcome model of Y on all mediators
// at once — (1, X, M, Z) for linear/logistic, (X, M, Z) for cox.
// Degenerate standard errors propagate as numeric errors tagged with the
// mediator index.
std::vector<MediationFit> fit_mediation(const Dataset& data);

}  // namespace medtest::models

#endif  // MEDTEST_MODELS_HPP
