#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "chebcov/chebyshev.hpp"
#include "chebcov/csv.hpp"
#include "chebcov/errors.hpp"
#include "chebcov/mc.hpp"
#include "chebcov/model_io.hpp"
#include "chebcov/moments.hpp"

namespace {

using namespace chebcov;

constexpr int kExitUsage = 2;
constexpr int kExitViolation = 3;

std::string fmt_g(double v, int significant) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", significant, v);
  return buf;
}

std::string fmt_machine(double v) { return fmt_g(v, 17); }
std::string fmt_human(double v) { return fmt_g(v, 6); }

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

std::vector<double> parse_eps_list(const std::string& text) {
  std::vector<double> eps;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == ',') {
      const std::string field = text.substr(start, i - start);
      start = i + 1;
      double v = 0.0;
      const char* first = field.data();
      const char* last = field.data() + field.size();
      auto [ptr, ec] = std::from_chars(first, last, v);
      if (field.empty() || ec != std::errc{} || ptr != last || !(v > 0.0) || !std::isfinite(v)) {
        throw InvalidInput("--eps: '" + field + "' is not a positive number");
      }
      eps.push_back(v);
    }
  }
  return eps;
}

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw InvalidInput("cannot open output file '" + out_path + "'");
  out << text;
}

struct FitArgs {
  std::string csv_path;
  std::string divisor = "population";
  double rank_tol = kDefaultRankTol;
  std::string out_path;
};

int cmd_fit(const FitArgs& args) {
  const CsvTable table = read_csv_file(args.csv_path);
  const SampleSet data(table.cols, table.values);
  const DivisorMode mode =
      args.divisor == "sample" ? DivisorMode::sample : DivisorMode::population;
  const MomentModel model = fit_moments(data, mode, args.rank_tol);
  write_output(save_model_json(model), args.out_path);
  return 0;
}

struct ScoreArgs {
  std::string model_path;
  std::string csv_path;
  std::optional<double> eps;
};

int cmd_score(const ScoreArgs& args) {
  const MomentModel model = load_model_file(args.model_path);
  const CsvTable table = read_csv_file(args.csv_path);
  if (table.cols != model.dim()) {
    throw InvalidInput("data has " + std::to_string(table.cols) + " columns, model expects " +
                       std::to_string(model.dim()));
  }
  if (args.eps && (!(*args.eps > 0.0) || !std::isfinite(*args.eps))) {
    throw InvalidInput("--eps must be positive and finite");
  }
  const SampleSet data(table.cols, table.values);
  const Whitener w = make_whitener(model, model.rank_tol);

  std::string out;
  out += args.eps ? "index,z,inside\n" : "index,z\n";
  std::size_t inside_count = 0;
  for (std::size_t i = 0; i < data.count(); ++i) {
    const double z = mahalanobis_sq(w, data.row(i));
    out += std::to_string(i);
    out += ',';
    out += fmt_machine(z);
    if (args.eps) {
      const bool inside = z < *args.eps;
      inside_count += inside ? 1 : 0;
      out += inside ? ",1" : ",0";
    }
    out += '\n';
  }
  if (args.eps) {
    const double coverage = static_cast<double>(inside_count) / static_cast<double>(data.count());
    const double bound = chebyshev_coverage_bound(w.rank, *args.eps);
    out += "# coverage=" + fmt_machine(coverage) + " bound=" + fmt_machine(bound) + "\n";
  }
  std::cout << out;
  return 0;
}

struct BoundArgs {
  std::size_t dim = 0;
  double eps = 0.0;
  std::optional<std::size_t> rank;
  std::optional<std::size_t> cond;
  bool gaussian = false;
};

int cmd_bound(const BoundArgs& args) {
  if (args.dim < 1) throw InvalidInput("--dim must be at least 1");
  if (args.rank && (*args.rank < 1 || *args.rank > args.dim)) {
    throw InvalidInput("--rank must satisfy 1 <= rank <= dim");
  }
  if (args.cond && (*args.cond < 1 || *args.cond >= args.dim)) {
    throw InvalidInput("--cond must satisfy 1 <= cond < dim");
  }
  std::size_t effective = args.dim;
  if (args.rank) effective = *args.rank;
  if (args.cond) effective = args.dim - *args.cond;

  const double tail = markov_tail_bound(static_cast<double>(effective), args.eps);
  const double coverage = args.cond ? conditional_coverage_bound(args.dim, *args.cond, args.eps)
                                    : chebyshev_coverage_bound(effective, args.eps);
  std::string out;
  out += "dim             " + std::to_string(args.dim) + "\n";
  out += "effective_rank  " + std::to_string(effective) + "\n";
  out += "eps             " + fmt_human(args.eps) + "\n";
  out += "tail_bound      " + fmt_human(tail) + "\n";
  out += "coverage_bound  " + fmt_human(coverage) + "\n";
  if (args.gaussian) {
    out += "gaussian_exact  " + fmt_human(gaussian_exact_coverage(effective, args.eps)) + "\n";
  }
  std::cout << out;
  return 0;
}

struct VerifyArgs {
  std::string family;
  std::size_t dim = 0;
  std::size_t samples = 200000;
  std::uint64_t seed = 0;
  std::string eps_text;
  std::string moments = "true";
  double nu = 5.0;
  bool json = false;
};

nlohmann::ordered_json row_to_json(const BoundRow& row) {
  nlohmann::ordered_json j;
  j["dim"] = row.dim;
  j["rank"] = row.rank;
  j["eps"] = row.eps;
  j["chebyshev_lower"] = row.chebyshev_lower;
  j["empirical"] = row.empirical;
  if (row.gaussian_exact) j["gaussian_exact"] = *row.gaussian_exact;
  j["sample_count"] = row.sample_count;
  j["seed"] = row.seed;
  j["slack"] = row.slack;
  j["violated"] = row.violated;
  return j;
}

int cmd_verify(const VerifyArgs& args) {
  if (args.dim < 1) throw InvalidInput("--dim must be at least 1");
  if (args.samples < 1) throw InvalidInput("--samples must be at least 1");
  const std::vector<double> eps_list = parse_eps_list(args.eps_text);
  const SamplerSpec spec = reference_spec(family_from_name(args.family), args.dim, args.nu);
  const MomentsMode mode =
      args.moments == "fitted" ? MomentsMode::fitted : MomentsMode::true_moments;
  const BoundReport report = verify_bound(spec, eps_list, args.samples, args.seed, mode);

  bool any_violation = false;
  for (const BoundRow& row : report.rows) any_violation = any_violation || row.violated;

  if (args.json) {
    nlohmann::ordered_json j;
    j["family"] = std::string(family_name(report.family));
    j["moments"] = report.mode == MomentsMode::true_moments ? "true" : "fitted";
    j["samples"] = report.sample_count;
    j["seed"] = report.seed;
    j["rows"] = nlohmann::ordered_json::array();
    for (const BoundRow& row : report.rows) j["rows"].push_back(row_to_json(row));
    std::cout << j.dump(2) << "\n";
  } else {
    std::string out;
    out += "family   " + std::string(family_name(report.family)) + "\n";
    out += "moments  " + std::string(report.mode == MomentsMode::true_moments ? "true" : "fitted") +
           "\n";
    out += "samples  " + std::to_string(report.sample_count) + "\n";
    out += "seed     " + std::to_string(report.seed) + "\n\n";
    out += pad("eps", 12) + pad("rank", 6) + pad("chebyshev_lower", 17) + pad("empirical", 11) +
           pad("gaussian_exact", 16) + pad("slack", 12) + "violated\n";
    for (const BoundRow& row : report.rows) {
      out += pad(fmt_human(row.eps), 12) + pad(std::to_string(row.rank), 6) +
             pad(fmt_human(row.chebyshev_lower), 17) + pad(fmt_human(row.empirical), 11) +
             pad(row.gaussian_exact ? fmt_human(*row.gaussian_exact) : "-", 16) +
             pad(fmt_human(row.slack), 12) + (row.violated ? "yes" : "no") + "\n";
    }
    std::cout << out;
  }
  return any_violation ? kExitViolation : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"distribution-free coverage bounds for Mahalanobis ellipsoids"};
  app.require_subcommand(1);

  FitArgs fit_args;
  auto* fit = app.add_subcommand("fit", "fit mean/covariance from a CSV of observations");
  fit->add_option("csv", fit_args.csv_path, "input CSV, one observation per row")->required();
  fit->add_option("--divisor", fit_args.divisor, "population (N) or sample (N-1) divisor")
      ->check(CLI::IsMember({"population", "sample"}));
  fit->add_option("--rank-tol", fit_args.rank_tol, "relative eigenvalue tolerance for the rank");
  fit->add_option("--out", fit_args.out_path, "write the model file here instead of stdout");

  ScoreArgs score_args;
  double score_eps = 0.0;
  auto* score = app.add_subcommand("score", "Mahalanobis-score points against a fitted model");
  score->add_option("model", score_args.model_path, "model file from 'fit'")->required();
  score->add_option("csv", score_args.csv_path, "points to score")->required();
  auto* eps_opt = score->add_option("--eps", score_eps, "ellipsoid squared radius for membership");

  BoundArgs bound_args;
  std::size_t bound_rank = 0;
  std::size_t bound_cond = 0;
  auto* bound = app.add_subcommand("bound", "print tail and coverage bounds");
  bound->add_option("--dim", bound_args.dim, "ambient dimension")->required();
  bound->add_option("--eps", bound_args.eps, "squared Mahalanobis radius")->required();
  auto* rank_opt = bound->add_option("--rank", bound_rank, "effective rank (rank-deficient case)");
  auto* cond_opt =
      bound->add_option("--cond", bound_cond, "number of conditioned leading coordinates");
  rank_opt->excludes(cond_opt);
  cond_opt->excludes(rank_opt);
  bound->add_flag("--gaussian", bound_args.gaussian, "also print the exact Gaussian coverage");

  VerifyArgs verify_args;
  auto* verify = app.add_subcommand("verify", "Monte Carlo certification of the coverage bound");
  verify->add_option("--family", verify_args.family, "sampling family")
      ->required()
      ->check(CLI::IsMember({"gaussian", "uniform_box", "student_t", "gaussian_mixture"}));
  verify->add_option("--dim", verify_args.dim, "dimension")->required();
  verify->add_option("--samples", verify_args.samples, "draws per eps value");
  verify->add_option("--seed", verify_args.seed, "master seed");
  verify->add_option("--eps", verify_args.eps_text, "comma-separated eps values")->required();
  verify->add_option("--moments", verify_args.moments, "use analytic (true) or fitted moments")
      ->check(CLI::IsMember({"true", "fitted"}));
  verify->add_option("--nu", verify_args.nu, "student_t degrees of freedom");
  verify->add_flag("--json", verify_args.json, "machine-readable report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*fit) return cmd_fit(fit_args);
    if (*score) {
      if (*eps_opt) score_args.eps = score_eps;
      return cmd_score(score_args);
    }
    if (*bound) {
      if (*rank_opt) bound_args.rank = bound_rank;
      if (*cond_opt) bound_args.cond = bound_cond;
      return cmd_bound(bound_args);
    }
    if (*verify) return cmd_verify(verify_args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
