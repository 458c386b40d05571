#include "medtest/tests.hpp"

#include <algorithm>
#include <cmath>

#include "medtest/error.hpp"
#include "medtest/normal.hpp"
#include "medtest/rng.hpp"

namespace medtest::tests {

using dist::std_normal_cdf;
using dist::std_normal_quantile;
using dist::two_sided_p;

namespace {

void check_fit(const models::MediationFit& fit) {
  if (!(fit.se_alpha > 0.0) || !(fit.se_beta > 0.0))
    throw_numeric("mediation fit: degenerate standard error (se <= 0)");
  if (fit.n < 2) throw_argument("mediation fit: n must be at least 2");
}

void check_level(double delta) {
  if (!(delta > 0.0 && delta < 1.0))
    throw_argument("significance level must lie in (0, 1)");
}

}  // namespace

double lambda_threshold(double n) {
  if (!(n >= 2.0)) throw_argument("lambda_threshold: requires n >= 2");
  return std::sqrt(n) / std::log(n);
}

double p_js(const models::MediationFit& fit) {
  check_fit(fit);
  return std::max(two_sided_p(fit.alpha_hat / fit.se_alpha),
                  two_sided_p(fit.beta_hat / fit.se_beta));
}

double sobel_stat(const models::MediationFit& fit) {
  if (fit.se_alpha == 0.0 && fit.se_beta == 0.0)
    throw_numeric("sobel_stat: both standard errors are zero");
  const double denom =
      std::sqrt(fit.alpha_hat * fit.alpha_hat * fit.se_beta * fit.se_beta +
                fit.beta_hat * fit.beta_hat * fit.se_alpha * fit.se_alpha);
  const double num = fit.alpha_hat * fit.beta_hat;
  if (denom == 0.0) return 0.0;  // only when alpha*beta == 0
  return num / denom;
}

double p_sobel(const models::MediationFit& fit) {
  return two_sided_p(sobel_stat(fit));
}

double p_ajs(const models::MediationFit& fit) {
  return compute_report(fit).p_ajs;
}

double p_asobel(const models::MediationFit& fit) {
  return compute_report(fit).p_asobel;
}

TestReport compute_report(const models::MediationFit& fit) {
  check_fit(fit);
  TestReport r;
  r.t_alpha = fit.alpha_hat / fit.se_alpha;
  r.t_beta = fit.beta_hat / fit.se_beta;
  r.t_max = std::max(std::fabs(r.t_alpha), std::fabs(r.t_beta));
  r.lambda_n = lambda_threshold(static_cast<double>(fit.n));
  r.adaptive_branch = r.t_max < r.lambda_n;  // a tie counts as >=
  r.t_sobel = sobel_stat(fit);
  r.p_sobel = two_sided_p(r.t_sobel);
  r.p_js = std::max(two_sided_p(r.t_alpha), two_sided_p(r.t_beta));
  r.p_ajs = r.adaptive_branch ? r.p_js * r.p_js : r.p_js;
  // Phi_{N(0,1/4)}(t) = Phi(2t), so the branch just doubles the statistic.
  r.p_asobel =
      r.adaptive_branch ? two_sided_p(2.0 * r.t_sobel) : r.p_sobel;
  return r;
}

double theoretical_size_sobel_h00(double delta) {
  check_level(delta);
  return two_sided_p(2.0 * std_normal_quantile(1.0 - delta / 2.0));
}

namespace {

// [Phi(mu - z) + Phi(-mu - z)] — rejection probability of a two-sided
// level test with critical value z when the statistic is N(mu, 1).
double reject_prob(double mu, double z) {
  return std_normal_cdf(mu - z) + std_normal_cdf(-mu - z);
}

}  // namespace

double theoretical_power_js(double mu_alpha, double mu_beta, double delta) {
  check_level(delta);
  const double z = std_normal_quantile(1.0 - delta / 2.0);
  return reject_prob(mu_alpha, z) * reject_prob(mu_beta, z);
}

double theoretical_power_ajs(double mu_alpha, double mu_beta, double delta,
                             double prob_tmax_ge) {
  check_level(delta);
  if (!(prob_tmax_ge >= 0.0 && prob_tmax_ge <= 1.0))
    throw_argument("theoretical_power_ajs: prob_tmax_ge must lie in [0, 1]");
  const double z = std_normal_quantile(1.0 - delta / 2.0);
  const double z_sqrt = std_normal_quantile(1.0 - std::sqrt(delta) / 2.0);
  const double branch_ge = reject_prob(mu_alpha, z) * reject_prob(mu_beta, z);
  const double branch_lt =
      reject_prob(mu_alpha, z_sqrt) * reject_prob(mu_beta, z_sqrt);
  return prob_tmax_ge * branch_ge + (1.0 - prob_tmax_ge) * branch_lt;
}

PowerEstimate theoretical_power_asobel(double mu_alpha, double mu_beta,
                                       double delta, double prob_tmax_ge,
                                       std::uint64_t draws,
                                       std::uint64_t seed) {
  check_level(delta);
  if (!(prob_tmax_ge >= 0.0 && prob_tmax_ge <= 1.0))
    throw_argument("theoretical_power_asobel: prob_tmax_ge must lie in [0, 1]");
  if (draws < 10000)
    throw_argument("theoretical_power_asobel: needs at least 10^4 draws");

  const double q1 = std_normal_quantile(1.0 - delta / 2.0);
  const double q2 = 0.5 * q1;  // N(0,1/4) quantile
  dist::RngStream rng(seed, 0);
  std::uint64_t hits1 = 0, hits2 = 0;
  for (std::uint64_t i = 0; i < draws; ++i) {
    const double x = mu_alpha + rng.next_normal();
    const double y = mu_beta + rng.next_normal();
    const double denom = std::sqrt(x * x + y * y);
    const double stat = denom > 0.0 ? std::fabs(x * y) / denom : 0.0;
    hits1 += stat > q1;
    hits2 += stat > q2;
  }
  const double nd = static_cast<double>(draws);
  PowerEstimate est;
  est.value = prob_tmax_ge * (static_cast<double>(hits1) / nd) +
              (1.0 - prob_tmax_ge) * (static_cast<double>(hits2) / nd);
  est.mc_se = std::sqrt(std::max(0.0, est.value * (1.0 - est.value)) / nd);
  return est;
}

}  // namespace medtest::tests
