#include "chebcov/model_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "chebcov/errors.hpp"

namespace chebcov {

namespace {

constexpr int kFormatVersion = 1;
constexpr const char* kFormatName = "chebcov-model";

const char* divisor_name(DivisorMode mode) {
  return mode == DivisorMode::population ? "population" : "sample";
}

DivisorMode divisor_from_name(const std::string& name) {
  if (name == "population") return DivisorMode::population;
  if (name == "sample") return DivisorMode::sample;
  throw InvalidInput("model file: unknown divisor mode '" + name + "'");
}

}  // namespace

std::string save_model_json(const MomentModel& model) {
  const std::size_t n = model.dim();
  nlohmann::ordered_json j;
  j["format"] = kFormatName;
  j["version"] = kFormatVersion;
  j["dim"] = n;
  j["divisor"] = divisor_name(model.divisor_mode);
  j["rank_tol"] = model.rank_tol;
  j["mean"] = model.mean;
  std::vector<double> cov_flat;
  cov_flat.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) cov_flat.push_back(model.cov(i, k));
  }
  j["covariance"] = cov_flat;  // row-major
  j["eigenvalues"] = model.spectral.eigenvalues;
  j["rank"] = model.rank;
  return j.dump(2) + "\n";
}

MomentModel load_model_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidInput(std::string("model file: not valid JSON: ") + e.what());
  }
  try {
    if (j.at("format").get<std::string>() != kFormatName) {
      throw InvalidInput("model file: unrecognized format field");
    }
    if (j.at("version").get<int>() != kFormatVersion) {
      throw InvalidInput("model file: unsupported version");
    }
    const auto n = j.at("dim").get<std::size_t>();
    const auto mean = j.at("mean").get<std::vector<double>>();
    const auto cov_flat = j.at("covariance").get<std::vector<double>>();
    if (mean.size() != n || cov_flat.size() != n * n) {
      throw InvalidInput("model file: mean/covariance sizes disagree with dim");
    }
    Matrix cov_full(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < n; ++k) cov_full(i, k) = cov_flat[i * n + k];
    }
    MomentModel model = model_from_moments(mean, SymMatrix::from_full(cov_full),
                                           j.at("rank_tol").get<double>(),
                                           divisor_from_name(j.at("divisor").get<std::string>()));

    // Cross-check the stored spectral summary against the recomputation.
    if (j.at("rank").get<std::size_t>() != model.rank) {
      throw InvalidInput("model file: stored rank disagrees with the covariance");
    }
    const auto stored = j.at("eigenvalues").get<std::vector<double>>();
    if (stored.size() != n) throw InvalidInput("model file: eigenvalue count disagrees with dim");
    const double scale = 1.0 + std::abs(model.spectral.eigenvalues.front());
    for (std::size_t i = 0; i < n; ++i) {
      if (std::abs(stored[i] - model.spectral.eigenvalues[i]) > 1e-8 * scale) {
        throw InvalidInput("model file: stored eigenvalues disagree with the covariance");
      }
    }
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("model file: ") + e.what());
  }
}

MomentModel load_model_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open model file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_model_json(buf.str());
}

}  // namespace chebcov
