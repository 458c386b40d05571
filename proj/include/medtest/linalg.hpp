#ifndef MEDTEST_LINALG_HPP
#define MEDTEST_LINALG_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace medtest::dist {

// Minimal dense matrix (row-major). The designs handled here are small
// (p into the low tens), so there is no blocking or external BLAS.
class Matrix {
 public:
  Matrix() : rows_(0), cols_(0) {}
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), a_(rows * cols, 0.0) {}

  static Matrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const {
    return a_[i * cols_ + j];
  }

  std::span<const double> row(std::size_t i) const {
    return {a_.data() + i * cols_, cols_};
  }
  std::span<double> row(std::size_t i) { return {a_.data() + i * cols_, cols_}; }

  const std::vector<double>& data() const noexcept { return a_; }
  std::vector<double>& data() noexcept { return a_; }

 private:
  std::size_t rows_, cols_;
  std::vector<double> a_;
};

// Lower-triangular Cholesky factor L with L Lᵗ = m. Throws a numeric error
// naming the failing pivot when m is not positive definite.
Matrix cholesky(const Matrix& m);

// Solve (L Lᵗ) x = b given the lower factor L.
std::vector<double> cholesky_solve(const Matrix& chol_lower,
                                   std::span<const double> b);

// Inverse of L Lᵗ given the lower factor L.
Matrix cholesky_inverse(const Matrix& chol_lower);

// Xᵗ X and Xᵗ y for a design matrix X.
Matrix crossprod(const Matrix& x);
std::vector<double> crossprod_vec(const Matrix& x, std::span<const double> y);

// Covariance matrix wrapper: square, symmetric, positive definite
// (definiteness is established when a Cholesky factor is requested).
class CovMatrix {
 public:
  explicit CovMatrix(Matrix entries);

  // AR(1) structure: entry (i, j) = rho^|i-j|, |rho| < 1.
  static CovMatrix ar1(std::size_t dim, double rho);

  std::size_t dim() const noexcept { return entries_.rows(); }
  const Matrix& entries() const noexcept { return entries_; }
  Matrix cholesky_factor() const { return cholesky(entries_); }

 private:
  Matrix entries_;
};

}  // namespace medtest::dist

#endif  // MEDTEST_LINALG_HPP
