#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "chebcov/linalg.hpp"

namespace chebcov {

/// Eigenvalues are kept when lambda_i > rank_tol * lambda_1.
constexpr double kDefaultRankTol = 1e-12;

enum class DivisorMode { population, sample };

/// N observations of dimension n, row-major flat storage. All entries finite.
class SampleSet {
 public:
  SampleSet(std::size_t dim, std::vector<double> values);
  static SampleSet from_rows(const std::vector<Vec>& rows);

  std::size_t dim() const { return dim_; }
  std::size_t count() const { return count_; }
  std::span<const double> row(std::size_t i) const {
    return {values_.data() + i * dim_, dim_};
  }
  const std::vector<double>& values() const { return values_; }

 private:
  std::size_t dim_;
  std::size_t count_;
  std::vector<double> values_;
};

/// Mean, covariance and the cached spectral decomposition of the covariance.
/// Eigenvalues carry at worst roundoff-sized negatives from the estimation;
/// those are clamped to zero. rank counts eigenvalues above
/// rank_tol * lambda_1.
struct MomentModel {
  Vec mean;
  SymMatrix cov;
  SpectralDecomp spectral;
  std::size_t rank = 0;
  double rank_tol = kDefaultRankTol;
  DivisorMode divisor_mode = DivisorMode::population;

  std::size_t dim() const { return mean.size(); }
};

/// Conditional mean and covariance of the trailing n-k coordinates given the
/// leading k.
struct ConditionalMoments {
  std::size_t observed_dim = 0;  // k
  Vec mean;                      // length n-k
  SymMatrix cov;                 // (n-k) x (n-k)
};

/// Two-pass fit: arithmetic mean, then centered outer-product accumulation
/// divided by N (population) or N-1 (sample).
MomentModel fit_moments(const SampleSet& data, DivisorMode mode = DivisorMode::population,
                        double rank_tol = kDefaultRankTol);

/// Wraps analytically known moments in a MomentModel (decomposes the
/// covariance, clamps roundoff negatives, computes the rank).
MomentModel model_from_moments(Vec mean, SymMatrix cov, double rank_tol = kDefaultRankTol,
                               DivisorMode mode = DivisorMode::population);

/// Gaussian/linear conditioning on the first k coordinates:
///   mean_cond = mu_Y + V_YX V_XX^-1 (x - mu_X)
///   cov_cond  = V_YY - V_YX V_XX^-1 V_XY
/// Throws SingularBlock when V_XX is not positive definite.
ConditionalMoments schur_conditional(const MomentModel& model, std::size_t k, const Vec& x_obs);

}  // namespace chebcov
