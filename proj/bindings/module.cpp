#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "chebcov/chebyshev.hpp"
#include "chebcov/mc.hpp"
#include "chebcov/model_io.hpp"
#include "chebcov/moments.hpp"

namespace py = pybind11;
using namespace chebcov;

namespace {

std::vector<Vec> matrix_rows(const Matrix& m) {
  std::vector<Vec> rows(m.rows(), Vec(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) rows[i][j] = m(i, j);
  }
  return rows;
}

std::vector<Vec> sym_rows(const SymMatrix& s) {
  std::vector<Vec> rows(s.order(), Vec(s.order()));
  for (std::size_t i = 0; i < s.order(); ++i) {
    for (std::size_t j = 0; j < s.order(); ++j) rows[i][j] = s(i, j);
  }
  return rows;
}

std::vector<Vec> sample_rows(const SampleSet& data) {
  std::vector<Vec> rows(data.count(), Vec(data.dim()));
  for (std::size_t i = 0; i < data.count(); ++i) {
    auto r = data.row(i);
    rows[i].assign(r.begin(), r.end());
  }
  return rows;
}

DivisorMode divisor_from(const std::string& name) {
  if (name == "population") return DivisorMode::population;
  if (name == "sample") return DivisorMode::sample;
  throw InvalidInput("divisor must be 'population' or 'sample'");
}

MomentsMode moments_from(const std::string& name) {
  if (name == "true") return MomentsMode::true_moments;
  if (name == "fitted") return MomentsMode::fitted;
  throw InvalidInput("moments must be 'true' or 'fitted'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Distribution-free coverage bounds for Mahalanobis ellipsoids";

  py::class_<MomentModel>(m, "MomentModel")
      .def_readonly("mean", &MomentModel::mean)
      .def_property_readonly("covariance", [](const MomentModel& mm) { return sym_rows(mm.cov); })
      .def_property_readonly("eigenvalues",
                             [](const MomentModel& mm) { return mm.spectral.eigenvalues; })
      .def_readonly("rank", &MomentModel::rank)
      .def_readonly("rank_tol", &MomentModel::rank_tol)
      .def_property_readonly("dim", &MomentModel::dim)
      .def_property_readonly("divisor", [](const MomentModel& mm) {
        return mm.divisor_mode == DivisorMode::population ? "population" : "sample";
      });

  py::class_<Whitener>(m, "Whitener")
      .def_readonly("center", &Whitener::center)
      .def_readonly("rank", &Whitener::rank)
      .def_readonly("source_dim", &Whitener::source_dim)
      .def_property_readonly("map", [](const Whitener& w) { return matrix_rows(w.map); })
      .def("mahalanobis_sq",
           [](const Whitener& w, const Vec& x) { return mahalanobis_sq(w, x); });

  py::class_<SamplerSpec>(m, "SamplerSpec")
      .def_property_readonly("family",
                             [](const SamplerSpec& s) { return std::string(family_name(s.family())); })
      .def_property_readonly("dim", &SamplerSpec::dim)
      .def_property_readonly("true_mean", [](const SamplerSpec& s) { return s.true_mean(); })
      .def_property_readonly("true_cov", [](const SamplerSpec& s) { return sym_rows(s.true_cov()); });

  py::class_<BoundRow>(m, "BoundRow")
      .def_readonly("dim", &BoundRow::dim)
      .def_readonly("rank", &BoundRow::rank)
      .def_readonly("eps", &BoundRow::eps)
      .def_readonly("chebyshev_lower", &BoundRow::chebyshev_lower)
      .def_readonly("empirical", &BoundRow::empirical)
      .def_readonly("gaussian_exact", &BoundRow::gaussian_exact)
      .def_readonly("sample_count", &BoundRow::sample_count)
      .def_readonly("seed", &BoundRow::seed)
      .def_readonly("slack", &BoundRow::slack)
      .def_readonly("violated", &BoundRow::violated);

  m.def(
      "jacobi_eigendecompose",
      [](const std::vector<Vec>& rows) {
        const SpectralDecomp d = jacobi_eigendecompose(SymMatrix::from_rows(rows));
        return py::make_tuple(d.eigenvalues, matrix_rows(d.eigenvectors));
      },
      py::arg("matrix"),
      "Eigenvalues (non-increasing) and eigenvector matrix rows of a symmetric matrix");

  m.def(
      "fit_moments",
      [](const std::vector<Vec>& rows, const std::string& divisor, double rank_tol) {
        return fit_moments(SampleSet::from_rows(rows), divisor_from(divisor), rank_tol);
      },
      py::arg("rows"), py::arg("divisor") = "population", py::arg("rank_tol") = kDefaultRankTol);

  m.def(
      "model_from_moments",
      [](const Vec& mean, const std::vector<Vec>& cov, double rank_tol) {
        return model_from_moments(mean, SymMatrix::from_rows(cov), rank_tol);
      },
      py::arg("mean"), py::arg("cov"), py::arg("rank_tol") = kDefaultRankTol);

  m.def(
      "schur_conditional",
      [](const MomentModel& model, std::size_t k, const Vec& x_obs) {
        const ConditionalMoments c = schur_conditional(model, k, x_obs);
        return py::make_tuple(c.mean, sym_rows(c.cov));
      },
      py::arg("model"), py::arg("k"), py::arg("x_obs"),
      "Conditional (mean, covariance) of the trailing coordinates given the leading k");

  m.def("make_whitener", &make_whitener, py::arg("model"), py::arg("rank_tol") = kDefaultRankTol);

  m.def(
      "mahalanobis_sq",
      [](const Whitener& w, const Vec& x) { return mahalanobis_sq(w, x); },
      py::arg("whitener"), py::arg("x"));

  m.def("markov_tail_bound", &markov_tail_bound, py::arg("mean_z"), py::arg("eps"));
  m.def("chebyshev_coverage_bound", &chebyshev_coverage_bound, py::arg("effective_dim"),
        py::arg("eps"));
  m.def("gaussian_exact_coverage", &gaussian_exact_coverage, py::arg("n"), py::arg("eps"));
  m.def("conditional_coverage_bound", &conditional_coverage_bound, py::arg("n"), py::arg("k"),
        py::arg("eps"));

  m.def(
      "gaussian_spec",
      [](const Vec& mean, const std::vector<Vec>& cov) {
        return SamplerSpec::gaussian(mean, SymMatrix::from_rows(cov));
      },
      py::arg("mean"), py::arg("cov"));
  m.def(
      "uniform_box_spec", [](const Vec& half_widths) { return SamplerSpec::uniform_box(half_widths); },
      py::arg("half_widths"));
  m.def(
      "student_t_spec",
      [](double dof, const std::vector<Vec>& scale) {
        return SamplerSpec::student_t(dof, SymMatrix::from_rows(scale));
      },
      py::arg("dof"), py::arg("scale"));
  m.def(
      "gaussian_mixture_spec",
      [](const std::vector<Vec>& means, const Vec& weights, const std::vector<Vec>& cov) {
        return SamplerSpec::gaussian_mixture(means, weights, SymMatrix::from_rows(cov));
      },
      py::arg("means"), py::arg("weights"), py::arg("cov"));
  m.def(
      "reference_spec",
      [](const std::string& family, std::size_t dim, double nu) {
        return reference_spec(family_from_name(family), dim, nu);
      },
      py::arg("family"), py::arg("dim"), py::arg("nu") = 5.0);

  m.def(
      "sample",
      [](const SamplerSpec& spec, std::size_t count, std::uint64_t seed) {
        return sample_rows(sample(spec, count, seed));
      },
      py::arg("spec"), py::arg("count"), py::arg("seed"));

  m.def(
      "empirical_coverage",
      [](const Whitener& w, const std::vector<Vec>& rows, double eps) {
        return empirical_coverage(w, SampleSet::from_rows(rows), eps);
      },
      py::arg("whitener"), py::arg("rows"), py::arg("eps"));

  m.def(
      "verify_bound",
      [](const SamplerSpec& spec, const std::vector<double>& eps_list, std::size_t count,
         std::uint64_t seed, const std::string& moments) {
        return verify_bound(spec, eps_list, count, seed, moments_from(moments)).rows;
      },
      py::arg("spec"), py::arg("eps_list"), py::arg("count"), py::arg("seed"),
      py::arg("moments") = "true");

  m.def("save_model_json", &save_model_json, py::arg("model"));
  m.def("load_model_json", &load_model_json, py::arg("text"));
}
