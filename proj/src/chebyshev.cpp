#include "chebcov/chebyshev.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "chebcov/errors.hpp"

namespace chebcov {

namespace {

constexpr int kGammaMaxIter = 500;
constexpr double kGammaRelTol = 1e-15;

// Regularized lower incomplete gamma P(s, x): series for x < s + 1,
// continued fraction (modified Lentz) for the upper tail otherwise.
double regularized_lower_gamma(double s, double x) {
  if (x <= 0.0) return 0.0;
  const double log_prefactor = -x + s * std::log(x) - std::lgamma(s);
  if (x < s + 1.0) {
    double ap = s;
    double term = 1.0 / s;
    double sum = term;
    for (int i = 0; i < kGammaMaxIter; ++i) {
      ap += 1.0;
      term *= x / ap;
      sum += term;
      if (std::abs(term) < std::abs(sum) * kGammaRelTol) break;
    }
    return sum * std::exp(log_prefactor);
  }
  constexpr double kTiny = 1e-300;
  double b = x + 1.0 - s;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kGammaMaxIter; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - s);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kGammaRelTol) break;
  }
  return 1.0 - std::exp(log_prefactor) * h;
}

}  // namespace

Whitener make_whitener(const MomentModel& model, double rank_tol) {
  if (!(rank_tol >= 0.0) || !std::isfinite(rank_tol)) {
    throw InvalidInput("make_whitener: rank tolerance must be finite and non-negative");
  }
  const std::size_t n = model.dim();
  const Vec& lambda = model.spectral.eigenvalues;
  const double lead = lambda.empty() ? 0.0 : std::max(lambda.front(), 0.0);
  std::size_t rank = 0;
  while (rank < n && lambda[rank] > rank_tol * lead && lambda[rank] > 0.0) ++rank;
  if (rank == 0) {
    throw DegenerateModel("make_whitener: no eigenvalue above the rank tolerance");
  }

  Whitener w;
  w.center = model.mean;
  w.rank = rank;
  w.source_dim = n;
  w.map = Matrix(rank, n);
  for (std::size_t i = 0; i < rank; ++i) {
    const double inv_sqrt = 1.0 / std::sqrt(lambda[i]);
    for (std::size_t j = 0; j < n; ++j) {
      w.map(i, j) = inv_sqrt * model.spectral.eigenvectors(j, i);
    }
  }
  return w;
}

double mahalanobis_sq(const Whitener& w, std::span<const double> x) {
  if (x.size() != w.source_dim) {
    throw InvalidInput("mahalanobis_sq: point has dimension " + std::to_string(x.size()) +
                       ", whitener expects " + std::to_string(w.source_dim));
  }
  double z = 0.0;
  for (std::size_t i = 0; i < w.rank; ++i) {
    double y = 0.0;
    for (std::size_t j = 0; j < w.source_dim; ++j) {
      y += w.map(i, j) * (x[j] - w.center[j]);
    }
    z += y * y;
  }
  return z;
}

double mahalanobis_sq(const Whitener& w, const Vec& x) {
  return mahalanobis_sq(w, std::span<const double>(x.data(), x.size()));
}

Ellipsoid::Ellipsoid(Vec center, SymMatrix shape, double eps)
    : center_(std::move(center)), shape_(std::move(shape)), eps_(eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw InvalidInput("Ellipsoid: eps must be positive and finite");
  }
  whitener_ = make_whitener(model_from_moments(center_, shape_));
}

bool ellipsoid_contains(const Ellipsoid& e, const Vec& x) {
  return mahalanobis_sq(e.whitener(), x) < e.eps();
}

double markov_tail_bound(double mean_z, double eps) {
  if (!(mean_z >= 0.0) || !std::isfinite(mean_z)) {
    throw InvalidInput("markov_tail_bound: mean must be finite and non-negative");
  }
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw InvalidInput("markov_tail_bound: eps must be positive and finite");
  }
  return std::min(1.0, mean_z / eps);
}

double chebyshev_coverage_bound(std::size_t effective_dim, double eps) {
  if (effective_dim < 1) {
    throw InvalidInput("chebyshev_coverage_bound: effective dimension must be at least 1");
  }
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw InvalidInput("chebyshev_coverage_bound: eps must be positive and finite");
  }
  return std::max(0.0, 1.0 - static_cast<double>(effective_dim) / eps);
}

double gaussian_exact_coverage(std::size_t n, double eps) {
  if (n < 1) throw InvalidInput("gaussian_exact_coverage: dimension must be at least 1");
  if (!(eps >= 0.0) || !std::isfinite(eps)) {
    throw InvalidInput("gaussian_exact_coverage: eps must be finite and non-negative");
  }
  const double p = regularized_lower_gamma(0.5 * static_cast<double>(n), 0.5 * eps);
  return std::min(1.0, std::max(0.0, p));
}

double conditional_coverage_bound(std::size_t n, std::size_t k, double eps) {
  if (k < 1 || k >= n) {
    throw InvalidInput("conditional_coverage_bound: k must satisfy 1 <= k < n");
  }
  return chebyshev_coverage_bound(n - k, eps);
}

}  // namespace chebcov
