#include "medtest/linalg.hpp"

#include <cmath>
#include <string>

#include "medtest/error.hpp"

namespace medtest::dist {

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix cholesky(const Matrix& m) {
  const std::size_t n = m.rows();
  if (n != m.cols()) throw_argument("cholesky: matrix is not square");
  Matrix lower(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double diag = m(j, j);
    for (std::size_t k = 0; k < j; ++k) diag -= lower(j, k) * lower(j, k);
    if (!(diag > 0.0)) {
      throw_numeric("cholesky: pivot " + std::to_string(j + 1) +
                    " nonpositive; matrix is not positive definite");
    }
    const double ljj = std::sqrt(diag);
    lower(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = m(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= lower(i, k) * lower(j, k);
      lower(i, j) = s / ljj;
    }
  }
  return lower;
}

std::vector<double> cholesky_solve(const Matrix& chol_lower,
                                   std::span<const double> b) {
  const std::size_t n = chol_lower.rows();
  if (b.size() != n) throw_argument("cholesky_solve: dimension mismatch");
  std::vector<double> x(b.begin(), b.end());
  // forward: L z = b
  for (std::size_t i = 0; i < n; ++i) {
    double s = x[i];
    for (std::size_t k = 0; k < i; ++k) s -= chol_lower(i, k) * x[k];
    x[i] = s / chol_lower(i, i);
  }
  // backward: Lᵗ x = z
  for (std::size_t ii = n; ii-- > 0;) {
    double s = x[ii];
    for (std::size_t k = ii + 1; k < n; ++k) s -= chol_lower(k, ii) * x[k];
    x[ii] = s / chol_lower(ii, ii);
  }
  return x;
}

Matrix cholesky_inverse(const Matrix& chol_lower) {
  const std::size_t n = chol_lower.rows();
  Matrix inv(n, n);
  std::vector<double> e(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    e[j] = 1.0;
    std::vector<double> col = cholesky_solve(chol_lower, e);
    for (std::size_t i = 0; i < n; ++i) inv(i, j) = col[i];
    e[j] = 0.0;
  }
  return inv;
}

Matrix crossprod(const Matrix& x) {
  const std::size_t n = x.rows(), p = x.cols();
  Matrix xtx(p, p);
  for (std::size_t i = 0; i < n; ++i) {
    const auto ri = x.row(i);
    for (std::size_t a = 0; a < p; ++a) {
      const double v = ri[a];
      if (v == 0.0) continue;
      for (std::size_t b = a; b < p; ++b) xtx(a, b) += v * ri[b];
    }
  }
  for (std::size_t a = 0; a < p; ++a)
    for (std::size_t b = 0; b < a; ++b) xtx(a, b) = xtx(b, a);
  return xtx;
}

std::vector<double> crossprod_vec(const Matrix& x, std::span<const double> y) {
  const std::size_t n = x.rows(), p = x.cols();
  if (y.size() != n) throw_argument("crossprod_vec: dimension mismatch");
  std::vector<double> xty(p, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto ri = x.row(i);
    for (std::size_t a = 0; a < p; ++a) xty[a] += ri[a] * y[i];
  }
  return xty;
}

CovMatrix::CovMatrix(Matrix entries) : entries_(std::move(entries)) {
  const std::size_t n = entries_.rows();
  if (n == 0 || n != entries_.cols())
    throw_argument("CovMatrix: entries must be square and nonempty");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (entries_(i, j) != entries_(j, i))
        throw_argument("CovMatrix: entries are not symmetric");
}

CovMatrix CovMatrix::ar1(std::size_t dim, double rho) {
  if (dim == 0) throw_argument("CovMatrix::ar1: dim must be positive");
  if (!(rho > -1.0 && rho < 1.0))
    throw_argument("CovMatrix::ar1: rho must lie in (-1, 1)");
  Matrix m(dim, dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j)
      m(i, j) = std::pow(rho, static_cast<double>(i > j ? i - j : j - i));
  return CovMatrix(std::move(m));
}

}  // namespace medtest::dist
