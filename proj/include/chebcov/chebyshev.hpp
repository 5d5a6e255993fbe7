#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "chebcov/linalg.hpp"
#include "chebcov/moments.hpp"

namespace chebcov {

/// Rank-r whitening map. Row i of `map` is (1/sqrt(lambda_i)) * t_i' for the
/// i-th retained eigenpair, so y = map * (x - center) has identity covariance
/// under the source model. Eigenpairs at or below the rank tolerance are
/// dropped rather than stored as zero rows.
struct Whitener {
  Vec center;
  Matrix map;  // rank x source_dim
  std::size_t rank = 0;
  std::size_t source_dim = 0;
};

/// Retains exactly the eigenvalues lambda_i > rank_tol * lambda_1.
/// Throws DegenerateModel when nothing survives (point mass).
Whitener make_whitener(const MomentModel& model, double rank_tol = kDefaultRankTol);

/// Squared Mahalanobis distance ||W (x - center)||^2. Equals
/// (x-mu)' V^-1 (x-mu) when the whitener has full rank.
double mahalanobis_sq(const Whitener& w, std::span<const double> x);
double mahalanobis_sq(const Whitener& w, const Vec& x);

/// Region {x : (x-center)' shape^-1 (x-center) < eps}. Membership is the
/// strict inequality.
class Ellipsoid {
 public:
  Ellipsoid(Vec center, SymMatrix shape, double eps);

  const Vec& center() const { return center_; }
  const SymMatrix& shape() const { return shape_; }
  double eps() const { return eps_; }
  const Whitener& whitener() const { return whitener_; }

 private:
  Vec center_;
  SymMatrix shape_;
  double eps_;
  Whitener whitener_;
};

bool ellipsoid_contains(const Ellipsoid& e, const Vec& x);

/// Pr(Z >= eps) <= mean_z / eps for non-negative Z, clipped into [0, 1].
double markov_tail_bound(double mean_z, double eps);

/// Distribution-free lower bound on Pr(Z < eps) for a whitened squared
/// distance with effective dimension r: max(0, 1 - r/eps).
double chebyshev_coverage_bound(std::size_t effective_dim, double eps);

/// Exact Pr(chi^2_n < eps), i.e. the Gaussian-case coverage of the eps
/// ellipsoid. Absolute error <= 1e-9.
double gaussian_exact_coverage(std::size_t n, double eps);

/// Coverage bound for the trailing n-k coordinates given the leading k:
/// the effective dimension drops to n-k.
double conditional_coverage_bound(std::size_t n, std::size_t k, double eps);

}  // namespace chebcov
