#pragma once

#include <cstddef>
#include <vector>

namespace chebcov {

using Vec = std::vector<double>;

/// Dense row-major matrix. Just enough algebra for whitening and the
/// eigensolver; not a general-purpose linear algebra type.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), values_(rows * cols, 0.0) {}

  static Matrix identity(std::size_t n);

  double& operator()(std::size_t i, std::size_t j) { return values_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return values_[i * cols_ + j]; }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  const std::vector<double>& values() const { return values_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

/// Symmetric matrix with exactly mirrored storage: entry (i,j) and (j,i) are
/// always the same double. Constructors reject non-finite input and anything
/// more asymmetric than roundoff noise.
class SymMatrix {
 public:
  SymMatrix() = default;  // empty placeholder; factories always produce order >= 1
  explicit SymMatrix(std::size_t order);

  /// Symmetrizes via (A + A')/2 when the worst asymmetry is at most
  /// 1e-9 * max|a_ij|; otherwise throws InvalidInput.
  static SymMatrix from_full(const Matrix& a);
  static SymMatrix from_rows(const std::vector<Vec>& rows);
  static SymMatrix diagonal(const Vec& d);
  static SymMatrix identity(std::size_t n);

  /// Writes both (i,j) and (j,i).
  void set(std::size_t i, std::size_t j, double v);

  double operator()(std::size_t i, std::size_t j) const { return values_[i * order_ + j]; }

  std::size_t order() const { return order_; }
  Matrix full() const;

  double max_abs() const;
  double frobenius_norm() const;
  double trace() const;

 private:
  std::size_t order_ = 0;
  std::vector<double> values_;
};

/// Eigenvalues sorted non-increasing; column i of `eigenvectors` pairs with
/// eigenvalues[i]. The eigenvector matrix is orthogonal.
struct SpectralDecomp {
  Vec eigenvalues;
  Matrix eigenvectors;
};

/// Full eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
/// Converged when the off-diagonal Frobenius norm drops below
/// 1e-12 * (1 + ||S||_F); throws NoConvergence after 100 sweeps.
SpectralDecomp jacobi_eigendecompose(const SymMatrix& s);

/// T * diag(lambda) * T', mirrored exactly. Test oracle for round trips.
SymMatrix reconstruct(const SpectralDecomp& d);

// Small vector/matrix helpers shared across modules.
Vec matvec(const Matrix& a, const Vec& x);
Vec sym_matvec(const SymMatrix& a, const Vec& x);
double dot(const Vec& a, const Vec& b);
Vec sub(const Vec& a, const Vec& b);
Vec add(const Vec& a, const Vec& b);
bool all_finite(const Vec& v);

}  // namespace chebcov
