#include "medtest/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "medtest/error.hpp"

namespace medtest::models {

using dist::Matrix;

namespace {

constexpr double kScoreTol = 1e-8;
constexpr double kCoefLimit = 50.0;
constexpr int kLogisticMaxIter = 100;
constexpr int kCoxMaxIter = 50;

void check_finite(std::span<const double> v, const char* what) {
  for (double x : v)
    if (!std::isfinite(x)) throw_data(std::string(what) + ": non-finite entry");
}

void check_finite(const Matrix& m, const char* what) {
  for (double x : m.data())
    if (!std::isfinite(x)) throw_data(std::string(what) + ": non-finite entry");
}

std::vector<double> matvec(const Matrix& x, std::span<const double> b) {
  std::vector<double> eta(x.rows(), 0.0);
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const auto ri = x.row(i);
    double s = 0.0;
    for (std::size_t j = 0; j < x.cols(); ++j) s += ri[j] * b[j];
    eta[i] = s;
  }
  return eta;
}

double sup_norm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

std::vector<double> se_from_information(const Matrix& info, const char* ctx) {
  Matrix chol;
  try {
    chol = dist::cholesky(info);
  } catch (const Error&) {
    throw_numeric(std::string(ctx) +
                  ": observed information is not positive definite");
  }
  Matrix inv = dist::cholesky_inverse(chol);
  std::vector<double> se(info.rows());
  for (std::size_t j = 0; j < se.size(); ++j) se[j] = std::sqrt(inv(j, j));
  return se;
}

}  // namespace

void Dataset::validate() const {
  const std::size_t n_obs = n();
  if (n_obs == 0) throw_data("Dataset: empty");
  if (mediators.rows() != n_obs || outcome.size() != n_obs ||
      (covariates.cols() > 0 && covariates.rows() != n_obs))
    throw_data("Dataset: inconsistent row counts");
  if (d() == 0) throw_data("Dataset: at least one mediator required");
  check_finite(exposure, "Dataset exposure");
  check_finite(mediators, "Dataset mediators");
  if (covariates.cols() > 0) check_finite(covariates, "Dataset covariates");
  check_finite(outcome, "Dataset outcome");
  switch (family) {
    case OutcomeFamily::linear:
      break;
    case OutcomeFamily::logistic:
      for (double y : outcome)
        if (y != 0.0 && y != 1.0)
          throw_data("Dataset: logistic outcome must be coded 0/1");
      break;
    case OutcomeFamily::cox: {
      if (event.size() != n_obs)
        throw_data("Dataset: cox outcome needs an event column");
      for (double t : outcome)
        if (!(t > 0.0)) throw_data("Dataset: survival times must be positive");
      int n_events = 0;
      for (int e : event) {
        if (e != 0 && e != 1)
          throw_data("Dataset: event indicators must be coded 0/1");
        n_events += e;
      }
      if (n_events == 0) throw_data("Dataset: no events in survival data");
      break;
    }
  }
}

FitResult fit_ols(std::span<const double> response, const Matrix& design) {
  const std::size_t n = design.rows(), p = design.cols();
  if (response.size() != n) throw_argument("fit_ols: dimension mismatch");
  if (n <= p) throw_numeric("fit_ols: insufficient data (n <= p)");

  Matrix xtx = dist::crossprod(design);
  Matrix chol;
  try {
    chol = dist::cholesky(xtx);
  } catch (const Error&) {
    throw_numeric("fit_ols: singular design matrix");
  }
  std::vector<double> xty = dist::crossprod_vec(design, response);
  FitResult fit;
  fit.coefficients = dist::cholesky_solve(chol, xty);

  std::vector<double> fitted = matvec(design, fit.coefficients);
  double sse = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = response[i] - fitted[i];
    sse += r * r;
  }
  const double s2 = sse / static_cast<double>(n - p);
  Matrix inv = dist::cholesky_inverse(chol);
  fit.standard_errors.resize(p);
  for (std::size_t j = 0; j < p; ++j)
    fit.standard_errors[j] = std::sqrt(std::max(0.0, s2 * inv(j, j)));
  fit.converged = true;
  fit.iterations = 1;
  fit.loglik = 0.0;
  return fit;
}

FitResult fit_logistic(std::span<const double> response, const Matrix& design) {
  const std::size_t n = design.rows(), p = design.cols();
  if (response.size() != n) throw_argument("fit_logistic: dimension mismatch");
  for (double y : response)
    if (y != 0.0 && y != 1.0)
      throw_data("fit_logistic: response must be coded 0/1");

  std::vector<double> beta(p, 0.0);
  std::vector<double> score(p);
  Matrix info(p, p);
  double loglik = -std::numeric_limits<double>::infinity();

  auto eval_loglik = [&](std::span<const double> b) {
    const std::vector<double> eta = matvec(design, b);
    double ll = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      // y*eta - log(1 + e^eta), stable for large |eta|
      const double e = eta[i];
      ll += response[i] * e - (e > 0.0 ? e + std::log1p(std::exp(-e))
                                       : std::log1p(std::exp(e)));
    }
    return ll;
  };

  int iter = 0;
  for (; iter < kLogisticMaxIter; ++iter) {
    const std::vector<double> eta = matvec(design, beta);
    std::fill(score.begin(), score.end(), 0.0);
    for (auto& v : info.data()) v = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double mu = 1.0 / (1.0 + std::exp(-eta[i]));
      const double w = mu * (1.0 - mu);
      const double r = response[i] - mu;
      const auto ri = design.row(i);
      for (std::size_t a = 0; a < p; ++a) {
        score[a] += ri[a] * r;
        for (std::size_t b = a; b < p; ++b) info(a, b) += w * ri[a] * ri[b];
      }
    }
    for (std::size_t a = 0; a < p; ++a)
      for (std::size_t b = 0; b < a; ++b) info(a, b) = info(b, a);

    if (sup_norm(score) < kScoreTol) {
      loglik = eval_loglik(beta);
      FitResult fit;
      fit.coefficients = beta;
      fit.standard_errors = se_from_information(info, "fit_logistic");
      fit.converged = true;
      fit.iterations = iter;
      fit.loglik = loglik;
      return fit;
    }

    Matrix chol;
    try {
      chol = dist::cholesky(info);
    } catch (const Error&) {
      throw_numeric("fit_logistic: separation (information near-singular)");
    }
    std::vector<double> step = dist::cholesky_solve(chol, score);

    double cur = eval_loglik(beta);
    double scale = 1.0;
    std::vector<double> cand(p);
    for (int half = 0; half < 30; ++half) {
      for (std::size_t j = 0; j < p; ++j) cand[j] = beta[j] + scale * step[j];
      if (eval_loglik(cand) >= cur) break;
      scale *= 0.5;
    }
    beta = cand;
    if (sup_norm(beta) > kCoefLimit)
      throw_numeric("fit_logistic: separation (coefficient diverged)");
  }
  throw_numeric("fit_logistic: no convergence in " +
                std::to_string(kLogisticMaxIter) + " iterations");
}

FitResult fit_cox(std::span<const double> time, std::span<const int> event,
                  const Matrix& design) {
  const std::size_t n = design.rows(), p = design.cols();
  if (time.size() != n || event.size() != n)
    throw_argument("fit_cox: dimension mismatch");
  int n_events = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(time[i] > 0.0)) throw_data("fit_cox: times must be positive");
    n_events += event[i];
  }
  if (n_events == 0) throw_numeric("fit_cox: no events (degenerate data)");

  // Process observations in decreasing time order so the risk-set
  // accumulators S0 = sum e^eta, S1 = sum e^eta x, S2 = sum e^eta x xᵗ can be
  // extended one observation at a time. Ties are grouped (Breslow).
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return time[a] > time[b]; });

  std::vector<double> beta(p, 0.0);
  std::vector<double> score(p), s1(p);
  Matrix info(p, p), s2(p, p);

  // Returns the partial log-likelihood at b and fills score/info.
  auto eval = [&](std::span<const double> b, bool with_derivs) {
    const std::vector<double> eta = matvec(design, b);
    double ll = 0.0;
    double s0 = 0.0;
    std::fill(s1.begin(), s1.end(), 0.0);
    for (auto& v : s2.data()) v = 0.0;
    if (with_derivs) {
      std::fill(score.begin(), score.end(), 0.0);
      for (auto& v : info.data()) v = 0.0;
    }
    std::size_t pos = 0;
    while (pos < n) {
      const double t = time[order[pos]];
      std::size_t end = pos;
      while (end < n && time[order[end]] == t) ++end;
      // everyone with time >= t is now at risk
      for (std::size_t idx = pos; idx < end; ++idx) {
        const std::size_t i = order[idx];
        const double w = std::exp(eta[i]);
        s0 += w;
        const auto ri = design.row(i);
        for (std::size_t a = 0; a < p; ++a) {
          s1[a] += w * ri[a];
          if (with_derivs)
            for (std::size_t c = a; c < p; ++c) s2(a, c) += w * ri[a] * ri[c];
        }
      }
      // contributions of the deaths at time t
      std::size_t deaths = 0;
      for (std::size_t idx = pos; idx < end; ++idx) {
        const std::size_t i = order[idx];
        if (!event[i]) continue;
        ++deaths;
        ll += eta[i];
        if (with_derivs) {
          const auto ri = design.row(i);
          for (std::size_t a = 0; a < p; ++a) score[a] += ri[a];
        }
      }
      if (deaths > 0) {
        const double dd = static_cast<double>(deaths);
        ll -= dd * std::log(s0);
        if (with_derivs) {
          for (std::size_t a = 0; a < p; ++a) {
            const double mean_a = s1[a] / s0;
            score[a] -= dd * mean_a;
            for (std::size_t c = a; c < p; ++c)
              info(a, c) += dd * (s2(a, c) / s0 - mean_a * (s1[c] / s0));
          }
        }
      }
      pos = end;
    }
    if (with_derivs)
      for (std::size_t a = 0; a < p; ++a)
        for (std::size_t c = 0; c < a; ++c) info(a, c) = info(c, a);
    return ll;
  };

  int iter = 0;
  for (; iter < kCoxMaxIter; ++iter) {
    const double cur = eval(beta, true);
    if (sup_norm(score) < kScoreTol) {
      FitResult fit;
      fit.coefficients = beta;
      fit.loglik = cur;
      fit.converged = true;
      fit.iterations = iter;
      // A zero covariate column leaves the information singular but the
      // score already vanished; report infinite SEs instead of failing.
      try {
        fit.standard_errors = se_from_information(info, "fit_cox");
      } catch (const Error&) {
        fit.standard_errors.assign(p, std::numeric_limits<double>::infinity());
      }
      return fit;
    }

    Matrix chol;
    try {
      chol = dist::cholesky(info);
    } catch (const Error&) {
      throw_numeric("fit_cox: information not positive definite");
    }
    std::vector<double> step = dist::cholesky_solve(chol, score);

    double scale = 1.0;
    std::vector<double> cand(p);
    for (int half = 0; half < 30; ++half) {
      for (std::size_t j = 0; j < p; ++j) cand[j] = beta[j] + scale * step[j];
      if (eval(cand, false) >= cur) break;
      scale *= 0.5;
    }
    beta = cand;
    if (sup_norm(beta) > kCoefLimit)
      throw_numeric("fit_cox: divergence (monotone partial likelihood)");
  }
  throw_numeric("fit_cox: no convergence in " + std::to_string(kCoxMaxIter) +
                " iterations");
}

std::vector<MediationFit> fit_mediation(const Dataset& data) {
  data.validate();
  const std::size_t n = data.n(), d = data.d(), q = data.q();
  if (n < 3) throw_data("fit_mediation: need at least 3 observations");

  // mediator design: (1, X, Z)
  Matrix med_design(n, 2 + q);
  for (std::size_t i = 0; i < n; ++i) {
    med_design(i, 0) = 1.0;
    med_design(i, 1) = data.exposure[i];
    for (std::size_t j = 0; j < q; ++j)
      med_design(i, 2 + j) = data.covariates(i, j);
  }

  // outcome design: (1, X, M, Z) with the intercept dropped for cox
  const bool intercept = data.family != OutcomeFamily::cox;
  const std::size_t off = intercept ? 1 : 0;
  Matrix out_design(n, off + 1 + d + q);
  for (std::size_t i = 0; i < n; ++i) {
    if (intercept) out_design(i, 0) = 1.0;
    out_design(i, off) = data.exposure[i];
    for (std::size_t j = 0; j < d; ++j)
      out_design(i, off + 1 + j) = data.mediators(i, j);
    for (std::size_t j = 0; j < q; ++j)
      out_design(i, off + 1 + d + j) = data.covariates(i, j);
  }

  FitResult outcome_fit;
  try {
    switch (data.family) {
      case OutcomeFamily::linear:
        outcome_fit = fit_ols(data.outcome, out_design);
        break;
      case OutcomeFamily::logistic:
        outcome_fit = fit_logistic(data.outcome, out_design);
        break;
      case OutcomeFamily::cox:
        outcome_fit = fit_cox(data.outcome, data.event, out_design);
        break;
    }
  } catch (const Error& e) {
    throw Error(e.kind(), std::string("outcome model: ") + e.what());
  }

  std::vector<MediationFit> fits;
  fits.reserve(d);
  std::vector<double> mk(n);
  for (std::size_t k = 0; k < d; ++k) {
    for (std::size_t i = 0; i < n; ++i) mk[i] = data.mediators(i, k);
    FitResult med_fit;
    try {
      med_fit = fit_ols(mk, med_design);
    } catch (const Error& e) {
      throw Error(e.kind(), "mediator " + std::to_string(k + 1) + ": " +
                                e.what());
    }
    MediationFit f;
    f.alpha_hat = med_fit.coefficients[1];
    f.se_alpha = med_fit.standard_errors[1];
    f.beta_hat = outcome_fit.coefficients[off + 1 + k];
    f.se_beta = outcome_fit.standard_errors[off + 1 + k];
    f.n = n;
    f.mediator_index = k;
    // A perfect fit (SE exactly 0) is returned as-is; the test/interval
    // layer rejects it rather than manufacturing infinite t-ratios.
    if (!std::isfinite(f.se_alpha) || !std::isfinite(f.se_beta))
      throw_numeric("mediator " + std::to_string(k + 1) +
                    ": non-finite standard error");
    fits.push_back(f);
  }
  return fits;
}

}  // namespace medtest::models
