#include "chebcov/moments.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "chebcov/errors.hpp"

namespace chebcov {

namespace {

// How negative a covariance eigenvalue may be before the matrix is rejected
// as indefinite rather than clamped to zero.
constexpr double kNegativeEigenTol = 1e-9;

std::size_t count_above(const Vec& eigenvalues, double rank_tol) {
  if (eigenvalues.empty() || eigenvalues[0] <= 0.0) return 0;
  const double threshold = rank_tol * eigenvalues[0];
  std::size_t r = 0;
  while (r < eigenvalues.size() && eigenvalues[r] > threshold) ++r;
  return r;
}

MomentModel finish_model(Vec mean, SymMatrix cov, double rank_tol, DivisorMode mode) {
  if (mean.size() != cov.order()) {
    throw InvalidInput("moment model: mean length does not match covariance order");
  }
  if (!all_finite(mean)) throw InvalidInput("moment model: non-finite mean entry");
  if (!(rank_tol >= 0.0) || !std::isfinite(rank_tol)) {
    throw InvalidInput("moment model: rank tolerance must be finite and non-negative");
  }

  SpectralDecomp spectral = jacobi_eigendecompose(cov);
  const double lead = std::max(spectral.eigenvalues.front(), 0.0);
  for (double& lambda : spectral.eigenvalues) {
    if (lambda < -kNegativeEigenTol * lead) {
      throw InvalidInput("moment model: covariance is not positive semidefinite (eigenvalue " +
                         std::to_string(lambda) + ")");
    }
    if (lambda < 0.0) lambda = 0.0;
  }

  MomentModel model;
  model.mean = std::move(mean);
  model.cov = std::move(cov);
  model.rank = count_above(spectral.eigenvalues, rank_tol);
  model.spectral = std::move(spectral);
  model.rank_tol = rank_tol;
  model.divisor_mode = mode;
  return model;
}

}  // namespace

SampleSet::SampleSet(std::size_t dim, std::vector<double> values)
    : dim_(dim), count_(dim == 0 ? 0 : values.size() / dim), values_(std::move(values)) {
  if (dim_ == 0) throw InvalidInput("SampleSet: dimension must be at least 1");
  if (values_.empty() || values_.size() % dim_ != 0) {
    throw InvalidInput("SampleSet: value count is not a positive multiple of the dimension");
  }
  if (!all_finite(values_)) throw InvalidInput("SampleSet: non-finite entry");
}

SampleSet SampleSet::from_rows(const std::vector<Vec>& rows) {
  if (rows.empty()) throw InvalidInput("SampleSet: no rows");
  const std::size_t dim = rows.front().size();
  std::vector<double> flat;
  flat.reserve(rows.size() * dim);
  for (const Vec& r : rows) {
    if (r.size() != dim) throw InvalidInput("SampleSet: ragged rows");
    flat.insert(flat.end(), r.begin(), r.end());
  }
  return SampleSet(dim, std::move(flat));
}

MomentModel fit_moments(const SampleSet& data, DivisorMode mode, double rank_tol) {
  const std::size_t n = data.dim();
  const std::size_t count = data.count();
  if (mode == DivisorMode::sample && count < 2) {
    throw InvalidInput("fit_moments: the sample divisor needs at least 2 observations");
  }

  Vec mean(n, 0.0);
  for (std::size_t i = 0; i < count; ++i) {
    auto row = data.row(i);
    for (std::size_t j = 0; j < n; ++j) mean[j] += row[j];
  }
  for (double& m : mean) m /= static_cast<double>(count);

  std::vector<double> acc(n * n, 0.0);
  Vec dev(n, 0.0);
  for (std::size_t i = 0; i < count; ++i) {
    auto row = data.row(i);
    for (std::size_t j = 0; j < n; ++j) dev[j] = row[j] - mean[j];
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = j; k < n; ++k) acc[j * n + k] += dev[j] * dev[k];
    }
  }
  const double divisor =
      (mode == DivisorMode::population) ? static_cast<double>(count) : static_cast<double>(count - 1);
  SymMatrix cov(n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = j; k < n; ++k) cov.set(j, k, acc[j * n + k] / divisor);
  }
  return finish_model(std::move(mean), std::move(cov), rank_tol, mode);
}

MomentModel model_from_moments(Vec mean, SymMatrix cov, double rank_tol, DivisorMode mode) {
  return finish_model(std::move(mean), std::move(cov), rank_tol, mode);
}

ConditionalMoments schur_conditional(const MomentModel& model, std::size_t k, const Vec& x_obs) {
  const std::size_t n = model.dim();
  if (k < 1 || k >= n) {
    throw InvalidInput("schur_conditional: k must satisfy 1 <= k < dim");
  }
  if (x_obs.size() != k) {
    throw InvalidInput("schur_conditional: observed vector length does not equal k");
  }
  if (!all_finite(x_obs)) throw InvalidInput("schur_conditional: non-finite observation");
  const std::size_t m = n - k;

  SymMatrix v_xx(k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i; j < k; ++j) v_xx.set(i, j, model.cov(i, j));
  }
  const SpectralDecomp dx = jacobi_eigendecompose(v_xx);
  const double lead = std::max(dx.eigenvalues.front(), 0.0);
  if (dx.eigenvalues.back() <= model.rank_tol * lead) {
    throw SingularBlock("schur_conditional: leading block is not positive definite");
  }

  // inv = T D^-1 T' of the leading block
  Matrix inv(k, k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      double sum = 0.0;
      for (std::size_t a = 0; a < k; ++a) {
        sum += dx.eigenvectors(i, a) * dx.eigenvectors(j, a) / dx.eigenvalues[a];
      }
      inv(i, j) = sum;
    }
  }

  // gain = V_YX * V_XX^-1, shape m x k
  Matrix gain(m, k);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      double sum = 0.0;
      for (std::size_t a = 0; a < k; ++a) sum += model.cov(k + i, a) * inv(a, j);
      gain(i, j) = sum;
    }
  }

  ConditionalMoments cond;
  cond.observed_dim = k;
  cond.mean.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    double sum = model.mean[k + i];
    for (std::size_t j = 0; j < k; ++j) sum += gain(i, j) * (x_obs[j] - model.mean[j]);
    cond.mean[i] = sum;
  }

  SymMatrix cov_cond(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i; j < m; ++j) {
      double sum = model.cov(k + i, k + j);
      for (std::size_t a = 0; a < k; ++a) sum -= gain(i, a) * model.cov(a, k + j);
      cov_cond.set(i, j, sum);
    }
  }
  cond.cov = std::move(cov_cond);
  return cond;
}

}  // namespace chebcov
