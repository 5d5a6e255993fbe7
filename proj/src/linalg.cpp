#include "chebcov/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "chebcov/errors.hpp"

namespace chebcov {

namespace {

constexpr double kAsymmetryTol = 1e-9;
constexpr double kOffDiagonalTol = 1e-12;
constexpr int kMaxSweeps = 100;

double off_diagonal_norm(const Matrix& a) {
  const std::size_t n = a.rows();
  double sum = 0.0;
  for (std::size_t p = 0; p + 1 < n; ++p) {
    for (std::size_t q = p + 1; q < n; ++q) {
      sum += a(p, q) * a(p, q);
    }
  }
  return std::sqrt(2.0 * sum);
}

}  // namespace

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

SymMatrix::SymMatrix(std::size_t order) : order_(order), values_(order * order, 0.0) {
  if (order == 0) throw InvalidInput("SymMatrix: order must be at least 1");
}

SymMatrix SymMatrix::from_full(const Matrix& a) {
  if (a.rows() != a.cols()) throw InvalidInput("SymMatrix: matrix is not square");
  const std::size_t n = a.rows();
  SymMatrix s(n);
  double scale = 0.0;
  for (double v : a.values()) {
    if (!std::isfinite(v)) throw InvalidInput("SymMatrix: non-finite entry");
    scale = std::max(scale, std::abs(v));
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const double gap = std::abs(a(i, j) - a(j, i));
      if (gap > kAsymmetryTol * scale) {
        throw InvalidInput("SymMatrix: asymmetry " + std::to_string(gap) +
                           " at (" + std::to_string(i) + "," + std::to_string(j) +
                           ") exceeds tolerance");
      }
      s.set(i, j, 0.5 * (a(i, j) + a(j, i)));
    }
  }
  return s;
}

SymMatrix SymMatrix::from_rows(const std::vector<Vec>& rows) {
  const std::size_t n = rows.size();
  Matrix a(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n) throw InvalidInput("SymMatrix: ragged rows");
    for (std::size_t j = 0; j < n; ++j) a(i, j) = rows[i][j];
  }
  return from_full(a);
}

SymMatrix SymMatrix::diagonal(const Vec& d) {
  SymMatrix s(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) s.set(i, i, d[i]);
  return s;
}

SymMatrix SymMatrix::identity(std::size_t n) {
  SymMatrix s(n);
  for (std::size_t i = 0; i < n; ++i) s.set(i, i, 1.0);
  return s;
}

void SymMatrix::set(std::size_t i, std::size_t j, double v) {
  if (!std::isfinite(v)) throw InvalidInput("SymMatrix: non-finite entry");
  values_[i * order_ + j] = v;
  values_[j * order_ + i] = v;
}

Matrix SymMatrix::full() const {
  Matrix m(order_, order_);
  for (std::size_t i = 0; i < order_; ++i) {
    for (std::size_t j = 0; j < order_; ++j) m(i, j) = (*this)(i, j);
  }
  return m;
}

double SymMatrix::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double SymMatrix::frobenius_norm() const {
  double sum = 0.0;
  for (double v : values_) sum += v * v;
  return std::sqrt(sum);
}

double SymMatrix::trace() const {
  double t = 0.0;
  for (std::size_t i = 0; i < order_; ++i) t += (*this)(i, i);
  return t;
}

SpectralDecomp jacobi_eigendecompose(const SymMatrix& s) {
  const std::size_t n = s.order();
  Matrix a = s.full();
  Matrix t = Matrix::identity(n);

  const double target = kOffDiagonalTol * (1.0 + s.frobenius_norm());
  bool converged = off_diagonal_norm(a) <= target;
  for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
        double tan_theta;
        if (std::isfinite(tau)) {
          // smaller-magnitude root of t^2 + 2*tau*t - 1 = 0
          tan_theta = (tau >= 0.0) ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                   : 1.0 / (tau - std::sqrt(1.0 + tau * tau));
        } else {
          // |apq| is negligible against the diagonal gap; zeroing it directly
          tan_theta = 0.0;
        }
        const double c = 1.0 / std::sqrt(1.0 + tan_theta * tan_theta);
        const double sn = tan_theta * c;

        for (std::size_t k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          const double akp = a(k, p);
          const double akq = a(k, q);
          const double vp = c * akp - sn * akq;
          const double vq = sn * akp + c * akq;
          a(k, p) = vp;
          a(p, k) = vp;
          a(k, q) = vq;
          a(q, k) = vq;
        }
        a(p, p) -= tan_theta * apq;
        a(q, q) += tan_theta * apq;
        a(p, q) = 0.0;
        a(q, p) = 0.0;

        for (std::size_t k = 0; k < n; ++k) {
          const double tkp = t(k, p);
          const double tkq = t(k, q);
          t(k, p) = c * tkp - sn * tkq;
          t(k, q) = sn * tkp + c * tkq;
        }
      }
    }
    converged = off_diagonal_norm(a) <= target;
  }
  if (!converged) {
    throw NoConvergence("jacobi_eigendecompose: off-diagonal norm above target after " +
                        std::to_string(kMaxSweeps) + " sweeps");
  }

  // Sort eigenpairs non-increasing; stable in the original column index.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&a](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });

  SpectralDecomp d;
  d.eigenvalues.resize(n);
  d.eigenvectors = Matrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    d.eigenvalues[j] = a(order[j], order[j]);
    for (std::size_t i = 0; i < n; ++i) d.eigenvectors(i, j) = t(i, order[j]);
  }
  return d;
}

SymMatrix reconstruct(const SpectralDecomp& d) {
  const std::size_t n = d.eigenvalues.size();
  if (n == 0 || d.eigenvectors.rows() != n || d.eigenvectors.cols() != n) {
    throw InvalidInput("reconstruct: eigenvalue/eigenvector shapes disagree");
  }
  if (!all_finite(d.eigenvalues)) throw InvalidInput("reconstruct: non-finite eigenvalue");
  SymMatrix r(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      double sum = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        sum += d.eigenvalues[k] * d.eigenvectors(i, k) * d.eigenvectors(j, k);
      }
      r.set(i, j, sum);
    }
  }
  return r;
}

Vec matvec(const Matrix& a, const Vec& x) {
  if (a.cols() != x.size()) throw InvalidInput("matvec: dimension mismatch");
  Vec y(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) sum += a(i, j) * x[j];
    y[i] = sum;
  }
  return y;
}

Vec sym_matvec(const SymMatrix& a, const Vec& x) {
  if (a.order() != x.size()) throw InvalidInput("sym_matvec: dimension mismatch");
  Vec y(a.order(), 0.0);
  for (std::size_t i = 0; i < a.order(); ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < a.order(); ++j) sum += a(i, j) * x[j];
    y[i] = sum;
  }
  return y;
}

double dot(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw InvalidInput("dot: dimension mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

Vec sub(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw InvalidInput("sub: dimension mismatch");
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

Vec add(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw InvalidInput("add: dimension mismatch");
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

bool all_finite(const Vec& v) {
  for (double x : v) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

}  // namespace chebcov
