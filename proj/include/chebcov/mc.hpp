#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "chebcov/chebyshev.hpp"
#include "chebcov/moments.hpp"

namespace chebcov {

enum class SamplerFamily { gaussian, uniform_box, student_t, gaussian_mixture };
enum class MomentsMode { true_moments, fitted };

std::string_view family_name(SamplerFamily f);
SamplerFamily family_from_name(std::string_view name);

struct GaussianParams {
  Vec mean;
  SymMatrix cov;
};
struct UniformBoxParams {
  Vec half_widths;  // axis-aligned box centered at the origin
};
struct StudentTParams {
  double dof = 0.0;  // must exceed 2 for the covariance to exist
  SymMatrix scale;
};
struct GaussianMixtureParams {
  std::vector<Vec> means;
  Vec weights;  // normalized to sum 1
  SymMatrix cov;  // shared across components
};

/// A sampling distribution with analytically known first and second moments.
/// Construction validates the parameters and derives true_mean / true_cov.
class SamplerSpec {
 public:
  using Params =
      std::variant<GaussianParams, UniformBoxParams, StudentTParams, GaussianMixtureParams>;

  static SamplerSpec gaussian(Vec mean, SymMatrix cov);
  static SamplerSpec uniform_box(Vec half_widths);
  static SamplerSpec student_t(double dof, SymMatrix scale);
  static SamplerSpec gaussian_mixture(std::vector<Vec> means, Vec weights, SymMatrix cov);

  SamplerFamily family() const { return family_; }
  std::size_t dim() const { return true_mean_.size(); }
  const Vec& true_mean() const { return true_mean_; }
  const SymMatrix& true_cov() const { return true_cov_; }
  const Params& params() const { return params_; }

 private:
  SamplerSpec(SamplerFamily family, Params params, Vec true_mean, SymMatrix true_cov);

  SamplerFamily family_;
  Params params_;
  Vec true_mean_;
  SymMatrix true_cov_;
};

/// Deterministic non-trivial parameters for a family at a given dimension:
/// AR(1)-correlated covariance with unequal variances, offset means.
/// This is what the CLI uses when only a family name and dimension are given.
SamplerSpec reference_spec(SamplerFamily family, std::size_t dim, double dof = 5.0);

/// Deterministic given (spec, count, seed); identical calls are bitwise equal.
SampleSet sample(const SamplerSpec& spec, std::size_t count, std::uint64_t seed);

/// Fraction of rows with mahalanobis_sq strictly below eps.
double empirical_coverage(const Whitener& w, const SampleSet& data, double eps);
double empirical_coverage(const MomentModel& model, const SampleSet& data, double eps);

/// Monte Carlo acceptance rule: empirical below the bound by more than three
/// worst-case binomial sigmas is a violation (and, the bound being a theorem,
/// an implementation bug).
bool bound_violated(double empirical, double lower_bound, std::size_t count);

struct BoundRow {
  std::size_t dim = 0;
  std::size_t rank = 0;  // effective dimension used in the bound
  double eps = 0.0;
  double chebyshev_lower = 0.0;
  double empirical = 0.0;
  std::optional<double> gaussian_exact;
  std::size_t sample_count = 0;
  std::uint64_t seed = 0;  // sub-stream seed that reproduces this row's data
  double slack = 0.0;      // empirical - chebyshev_lower
  bool violated = false;
};

struct BoundReport {
  SamplerFamily family = SamplerFamily::gaussian;
  MomentsMode mode = MomentsMode::true_moments;
  std::uint64_t seed = 0;
  std::size_t sample_count = 0;
  std::vector<BoundRow> rows;
};

/// One row of the harness: coverage of `data` under `model` at `eps`,
/// bound taken at the model's effective rank.
BoundRow coverage_row(const MomentModel& model, const SampleSet& data, double eps,
                      std::optional<double> gaussian_exact = std::nullopt,
                      std::uint64_t seed = 0);

/// Draws a fresh sample per eps value from the sub-stream derive_seed(seed, i),
/// measures coverage against the bound, and flags violations beyond MC slack.
BoundReport verify_bound(const SamplerSpec& spec, const std::vector<double>& eps_list,
                         std::size_t count, std::uint64_t seed,
                         MomentsMode mode = MomentsMode::true_moments);

}  // namespace chebcov
