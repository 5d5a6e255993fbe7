#include "chebcov/mc.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "chebcov/errors.hpp"
#include "chebcov/rng.hpp"

namespace chebcov {

namespace {

void check_psd(const SymMatrix& m, const char* what) {
  const SpectralDecomp d = jacobi_eigendecompose(m);
  const double lead = std::max(d.eigenvalues.front(), 0.0);
  if (d.eigenvalues.back() < -1e-9 * lead) {
    throw InvalidSpec(std::string(what) + " is not positive semidefinite");
  }
}

// T * D^(1/2) with negative roundoff eigenvalues treated as zero, so that
// factor * z has covariance m for standard normal z.
Matrix spectral_factor(const SymMatrix& m) {
  const SpectralDecomp d = jacobi_eigendecompose(m);
  const std::size_t n = m.order();
  Matrix f(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    const double root = d.eigenvalues[j] > 0.0 ? std::sqrt(d.eigenvalues[j]) : 0.0;
    for (std::size_t i = 0; i < n; ++i) f(i, j) = d.eigenvectors(i, j) * root;
  }
  return f;
}

void add_transformed(std::vector<double>& out, const Matrix& factor, const Vec& z,
                     const Vec& shift, double post_scale = 1.0) {
  const std::size_t n = factor.rows();
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) sum += factor(i, j) * z[j];
    out.push_back(shift[i] + post_scale * sum);
  }
}

}  // namespace

std::string_view family_name(SamplerFamily f) {
  switch (f) {
    case SamplerFamily::gaussian: return "gaussian";
    case SamplerFamily::uniform_box: return "uniform_box";
    case SamplerFamily::student_t: return "student_t";
    case SamplerFamily::gaussian_mixture: return "gaussian_mixture";
  }
  throw InvalidSpec("unknown sampler family");
}

SamplerFamily family_from_name(std::string_view name) {
  if (name == "gaussian") return SamplerFamily::gaussian;
  if (name == "uniform_box") return SamplerFamily::uniform_box;
  if (name == "student_t") return SamplerFamily::student_t;
  if (name == "gaussian_mixture") return SamplerFamily::gaussian_mixture;
  throw InvalidSpec("unknown sampler family '" + std::string(name) + "'");
}

SamplerSpec::SamplerSpec(SamplerFamily family, Params params, Vec true_mean, SymMatrix true_cov)
    : family_(family),
      params_(std::move(params)),
      true_mean_(std::move(true_mean)),
      true_cov_(std::move(true_cov)) {}

SamplerSpec SamplerSpec::gaussian(Vec mean, SymMatrix cov) {
  if (mean.size() != cov.order()) throw InvalidSpec("gaussian: mean/covariance size mismatch");
  if (!all_finite(mean)) throw InvalidSpec("gaussian: non-finite mean");
  check_psd(cov, "gaussian covariance");
  Vec true_mean = mean;
  SymMatrix true_cov = cov;
  return SamplerSpec(SamplerFamily::gaussian, GaussianParams{std::move(mean), std::move(cov)},
                     std::move(true_mean), std::move(true_cov));
}

SamplerSpec SamplerSpec::uniform_box(Vec half_widths) {
  if (half_widths.empty()) throw InvalidSpec("uniform_box: no axes");
  for (double w : half_widths) {
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw InvalidSpec("uniform_box: half-widths must be positive and finite");
    }
  }
  const std::size_t n = half_widths.size();
  Vec mean(n, 0.0);
  SymMatrix cov(n);
  for (std::size_t i = 0; i < n; ++i) cov.set(i, i, half_widths[i] * half_widths[i] / 3.0);
  return SamplerSpec(SamplerFamily::uniform_box, UniformBoxParams{std::move(half_widths)},
                     std::move(mean), std::move(cov));
}

SamplerSpec SamplerSpec::student_t(double dof, SymMatrix scale) {
  if (!(dof > 2.0) || !std::isfinite(dof)) {
    throw InvalidSpec("student_t: degrees of freedom must exceed 2 for the covariance to exist");
  }
  check_psd(scale, "student_t scale");
  const std::size_t n = scale.order();
  Vec mean(n, 0.0);
  const double factor = dof / (dof - 2.0);
  SymMatrix cov(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) cov.set(i, j, factor * scale(i, j));
  }
  return SamplerSpec(SamplerFamily::student_t, StudentTParams{dof, std::move(scale)},
                     std::move(mean), std::move(cov));
}

SamplerSpec SamplerSpec::gaussian_mixture(std::vector<Vec> means, Vec weights, SymMatrix cov) {
  if (means.empty() || means.size() != weights.size()) {
    throw InvalidSpec("gaussian_mixture: need one weight per component mean");
  }
  const std::size_t n = cov.order();
  double total = 0.0;
  for (double w : weights) {
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw InvalidSpec("gaussian_mixture: weights must be positive and finite");
    }
    total += w;
  }
  for (double& w : weights) w /= total;
  for (const Vec& m : means) {
    if (m.size() != n) throw InvalidSpec("gaussian_mixture: mean/covariance size mismatch");
    if (!all_finite(m)) throw InvalidSpec("gaussian_mixture: non-finite component mean");
  }
  check_psd(cov, "gaussian_mixture covariance");

  Vec mean(n, 0.0);
  for (std::size_t c = 0; c < means.size(); ++c) {
    for (std::size_t i = 0; i < n; ++i) mean[i] += weights[c] * means[c][i];
  }
  // total covariance = shared covariance + between-component spread
  SymMatrix true_cov(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      double spread = 0.0;
      for (std::size_t c = 0; c < means.size(); ++c) {
        spread += weights[c] * (means[c][i] - mean[i]) * (means[c][j] - mean[j]);
      }
      true_cov.set(i, j, cov(i, j) + spread);
    }
  }
  return SamplerSpec(SamplerFamily::gaussian_mixture,
                     GaussianMixtureParams{std::move(means), std::move(weights), std::move(cov)},
                     std::move(mean), std::move(true_cov));
}

SamplerSpec reference_spec(SamplerFamily family, std::size_t dim, double dof) {
  if (dim < 1) throw InvalidSpec("reference_spec: dimension must be at least 1");
  Vec variances(dim);
  Vec mean(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    variances[i] = 1.0 + 0.5 * static_cast<double>(i);
    mean[i] = 0.5 * static_cast<double>(i + 1);
  }
  SymMatrix cov(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = i; j < dim; ++j) {
      const double corr = std::pow(0.3, static_cast<double>(j - i));
      cov.set(i, j, corr * std::sqrt(variances[i] * variances[j]));
    }
  }

  switch (family) {
    case SamplerFamily::gaussian:
      return SamplerSpec::gaussian(mean, cov);
    case SamplerFamily::uniform_box: {
      Vec half_widths(dim);
      for (std::size_t i = 0; i < dim; ++i) half_widths[i] = std::sqrt(3.0 * variances[i]);
      return SamplerSpec::uniform_box(std::move(half_widths));
    }
    case SamplerFamily::student_t: {
      if (!(dof > 2.0) || !std::isfinite(dof)) {
        throw InvalidSpec("student_t: degrees of freedom must exceed 2 for the covariance to exist");
      }
      // scale chosen so the resulting covariance equals `cov`
      SymMatrix scale(dim);
      const double shrink = (dof - 2.0) / dof;
      for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = i; j < dim; ++j) scale.set(i, j, shrink * cov(i, j));
      }
      return SamplerSpec::student_t(dof, std::move(scale));
    }
    case SamplerFamily::gaussian_mixture: {
      Vec low(dim), high(dim);
      for (std::size_t i = 0; i < dim; ++i) {
        low[i] = mean[i] - 1.5;
        high[i] = mean[i] + 1.5;
      }
      return SamplerSpec::gaussian_mixture({std::move(low), std::move(high)}, {0.5, 0.5},
                                           std::move(cov));
    }
  }
  throw InvalidSpec("unknown sampler family");
}

SampleSet sample(const SamplerSpec& spec, std::size_t count, std::uint64_t seed) {
  if (count < 1) throw InvalidInput("sample: count must be at least 1");
  const std::size_t n = spec.dim();
  std::vector<double> values;
  values.reserve(count * n);
  RandomStream stream(seed);
  Vec z(n);

  if (const auto* g = std::get_if<GaussianParams>(&spec.params())) {
    const Matrix factor = spectral_factor(g->cov);
    for (std::size_t i = 0; i < count; ++i) {
      for (std::size_t j = 0; j < n; ++j) z[j] = stream.normal();
      add_transformed(values, factor, z, g->mean);
    }
  } else if (const auto* u = std::get_if<UniformBoxParams>(&spec.params())) {
    for (std::size_t i = 0; i < count; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        values.push_back(u->half_widths[j] * (2.0 * stream.uniform() - 1.0));
      }
    }
  } else if (const auto* t = std::get_if<StudentTParams>(&spec.params())) {
    const Matrix factor = spectral_factor(t->scale);
    const Vec zero(n, 0.0);
    for (std::size_t i = 0; i < count; ++i) {
      for (std::size_t j = 0; j < n; ++j) z[j] = stream.normal();
      const double chi_sq = 2.0 * stream.gamma(0.5 * t->dof);
      add_transformed(values, factor, z, zero, std::sqrt(t->dof / chi_sq));
    }
  } else {
    const auto& mix = std::get<GaussianMixtureParams>(spec.params());
    const Matrix factor = spectral_factor(mix.cov);
    for (std::size_t i = 0; i < count; ++i) {
      const double u01 = stream.uniform();
      std::size_t comp = 0;
      double cum = mix.weights[0];
      while (comp + 1 < mix.weights.size() && u01 >= cum) cum += mix.weights[++comp];
      for (std::size_t j = 0; j < n; ++j) z[j] = stream.normal();
      add_transformed(values, factor, z, mix.means[comp]);
    }
  }
  return SampleSet(n, std::move(values));
}

double empirical_coverage(const Whitener& w, const SampleSet& data, double eps) {
  if (w.source_dim != data.dim()) {
    throw InvalidInput("empirical_coverage: data dimension does not match the whitener");
  }
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw InvalidInput("empirical_coverage: eps must be positive and finite");
  }
  std::size_t inside = 0;
  for (std::size_t i = 0; i < data.count(); ++i) {
    if (mahalanobis_sq(w, data.row(i)) < eps) ++inside;
  }
  return static_cast<double>(inside) / static_cast<double>(data.count());
}

double empirical_coverage(const MomentModel& model, const SampleSet& data, double eps) {
  return empirical_coverage(make_whitener(model, model.rank_tol), data, eps);
}

bool bound_violated(double empirical, double lower_bound, std::size_t count) {
  const double mc_slack = 3.0 * std::sqrt(0.25 / static_cast<double>(count));
  return empirical < lower_bound - mc_slack;
}

BoundRow coverage_row(const MomentModel& model, const SampleSet& data, double eps,
                      std::optional<double> gaussian_exact, std::uint64_t seed) {
  const Whitener w = make_whitener(model, model.rank_tol);
  BoundRow row;
  row.dim = data.dim();
  row.rank = w.rank;
  row.eps = eps;
  row.chebyshev_lower = chebyshev_coverage_bound(w.rank, eps);
  row.empirical = empirical_coverage(w, data, eps);
  row.gaussian_exact = gaussian_exact;
  row.sample_count = data.count();
  row.seed = seed;
  row.slack = row.empirical - row.chebyshev_lower;
  row.violated = bound_violated(row.empirical, row.chebyshev_lower, data.count());
  return row;
}

BoundReport verify_bound(const SamplerSpec& spec, const std::vector<double>& eps_list,
                         std::size_t count, std::uint64_t seed, MomentsMode mode) {
  if (eps_list.empty()) throw InvalidInput("verify_bound: need at least one eps value");
  for (double eps : eps_list) {
    if (!(eps > 0.0) || !std::isfinite(eps)) {
      throw InvalidInput("verify_bound: eps values must be positive and finite");
    }
  }

  BoundReport report;
  report.family = spec.family();
  report.mode = mode;
  report.seed = seed;
  report.sample_count = count;
  report.rows.reserve(eps_list.size());
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    const std::uint64_t row_seed = derive_seed(seed, i);
    const SampleSet data = sample(spec, count, row_seed);
    const MomentModel model = (mode == MomentsMode::true_moments)
                                  ? model_from_moments(spec.true_mean(), spec.true_cov())
                                  : fit_moments(data, DivisorMode::population);
    std::optional<double> exact;
    if (spec.family() == SamplerFamily::gaussian) {
      exact = gaussian_exact_coverage(spec.dim(), eps_list[i]);
    }
    report.rows.push_back(coverage_row(model, data, eps_list[i], exact, row_seed));
  }
  return report;
}

}  // namespace chebcov
