#include "npdual/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace npdual {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

const json& field(const json& j, const char* name) {
  auto it = j.find(name);
  if (it == j.end())
    throw Error(ErrorCode::InvalidArgument, std::string("missing field '") + name + "'");
  return *it;
}

std::vector<double> number_array(const json& j, const std::string& name) {
  if (!j.is_array())
    throw Error(ErrorCode::InvalidArgument, name + " must be an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number())
      throw Error(ErrorCode::InvalidArgument,
                  name + "[" + std::to_string(i) + "] must be a number");
    out.push_back(j[i].get<double>());
  }
  return out;
}

std::vector<std::vector<double>> matrix(const json& j, const std::string& name) {
  if (!j.is_array())
    throw Error(ErrorCode::InvalidArgument, name + " must be an array of arrays");
  std::vector<std::vector<double>> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(number_array(j[i], name + "[" + std::to_string(i) + "]"));
  return out;
}

std::string format_number(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) return "nan";
  return std::string(buf, end);
}

json number_or_null(double v) {
  if (std::isnan(v)) return nullptr;
  return v;
}

}  // namespace

int log_level() {
  static const int level = [] {
    const char* env = std::getenv("NPDUAL_LOG");
    if (!env) return 1;
    const std::string v(env);
    if (v == "quiet") return 0;
    if (v == "warn") return 1;
    if (v == "info") return 2;
    if (v == "debug") return 3;
    return 1;
  }();
  return level;
}

void log_warn(const std::string& message) {
  if (log_level() >= 1) std::cerr << "[npdual] warning: " << message << "\n";
}

void log_info(const std::string& message) {
  if (log_level() >= 2) std::cerr << "[npdual] " << message << "\n";
}

bool log_debug_enabled() { return log_level() >= 3; }

ProblemData parse_problem_data(const json& j) {
  if (!j.is_object())
    throw Error(ErrorCode::InvalidArgument, "problem file must hold a JSON object");
  ProblemData data;
  const json& atoms = field(j, "atoms");
  if (!atoms.is_array())
    throw Error(ErrorCode::InvalidArgument, "atoms must be an array of labels");
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (atoms[i].is_string())
      data.atoms.push_back(atoms[i].get<std::string>());
    else if (atoms[i].is_number())
      data.atoms.push_back(format_number(atoms[i].get<double>()));
    else
      throw Error(ErrorCode::InvalidArgument,
                  "atoms[" + std::to_string(i) + "] must be a string or number");
  }
  data.reference_weights = number_array(field(j, "R"), "R");
  data.null_densities = matrix(field(j, "null"), "null");
  data.alt_densities = matrix(field(j, "alt"), "alt");
  const json& alpha = field(j, "alpha");
  if (alpha.is_number())
    data.alphas = {alpha.get<double>()};
  else
    data.alphas = number_array(alpha, "alpha");

  if (data.reference_weights.size() != data.atoms.size())
    throw Error(ErrorCode::DimensionMismatch,
                "R has " + std::to_string(data.reference_weights.size()) +
                    " entries for " + std::to_string(data.atoms.size()) + " atoms");

  // Zero-weight atoms carry no information; drop them up front.
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < data.reference_weights.size(); ++i)
    if (data.reference_weights[i] != 0.0) keep.push_back(i);
  if (keep.size() != data.reference_weights.size()) {
    log_warn("dropping " + std::to_string(data.reference_weights.size() - keep.size()) +
             " zero-weight atom(s)");
    const auto select = [&](std::vector<double>& v) {
      if (v.size() != data.reference_weights.size()) return;  // length error surfaces later
      std::vector<double> out;
      out.reserve(keep.size());
      for (std::size_t i : keep) out.push_back(v[i]);
      v = std::move(out);
    };
    std::vector<std::string> labels;
    labels.reserve(keep.size());
    for (std::size_t i : keep) labels.push_back(data.atoms[i]);
    for (std::vector<double>& row : data.null_densities) select(row);
    for (std::vector<double>& row : data.alt_densities) select(row);
    std::vector<double> weights;
    weights.reserve(keep.size());
    for (std::size_t i : keep) weights.push_back(data.reference_weights[i]);
    data.atoms = std::move(labels);
    data.reference_weights = std::move(weights);
  }
  return data;
}

TestingProblem load_problem_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidArgument,
                "malformed JSON in " + path + ": " + e.what());
  }
  return validate_problem(parse_problem_data(j));
}

GaussianXbarSpec parse_gaussian_spec(const json& j) {
  if (!j.is_object())
    throw Error(ErrorCode::InvalidArgument, "gaussian spec must be an object");
  GaussianXbarSpec spec;
  if (j.contains("side")) spec.side = field(j, "side").get<int>();
  spec.n = field(j, "n").get<int>();
  spec.xi1 = field(j, "xi1").get<double>();
  spec.sigma1_sq = field(j, "sigma1_sq").get<double>();
  spec.sigma0_sq = field(j, "sigma0_sq").get<double>();
  spec.xi_grid = number_array(field(j, "xi_grid"), "xi_grid");
  spec.sigma_sq_grid = number_array(field(j, "sigma_sq_grid"), "sigma_sq_grid");
  spec.x_grid = number_array(field(j, "x_grid"), "x_grid");
  return spec;
}

AnalysisBundle analyze(const TestingProblem& problem,
                       std::optional<std::uint64_t> saddle_seed, long saddle_trials,
                       double tol_gap, double tol_slack) {
  SolveReport solve = solve_maxmin(problem);
  SlacknessReport slackness =
      check_slackness(problem, solve.primal.test, solve.dual.alt_weights,
                      solve.dual.prior, tol_slack);
  WeakDualityReport weak = check_weak_duality(
      problem, solve.primal.test, solve.dual.alt_weights, solve.dual.prior);

  AnalysisBundle bundle{
      std::move(solve),
      std::move(slackness),
      std::move(weak),
      std::nullopt,
      std::nullopt,
      std::nullopt,
      false,
  };
  const RandomizedTest& test = bundle.solve.primal.test;
  const std::vector<double>& q = bundle.solve.dual.alt_weights;
  const Prior& prior = bundle.solve.dual.prior;
  bool certified = bundle.slackness.passed &&
                   bundle.weak.margin <= tol_slack &&
                   bundle.weak.size_violation <= tol_slack &&
                   std::abs(bundle.solve.gap) <= tol_gap;
  if (certified) {
    bundle.structure = decompose_structure(problem, test, q, prior, tol_slack);
    if (problem.scalar_alpha()) {
      bundle.ck = ck_certificate(problem, test, q, prior, tol_slack);
      certified = certified && bundle.ck->identity_residual <= tol_gap &&
                  bundle.ck->membership_residual <= tol_slack;
    }
  }
  if (saddle_seed) {
    bundle.saddle =
        check_saddle(problem, test, q, saddle_trials, saddle_seed, tol_slack);
    certified = certified && bundle.saddle->passed;
  }
  bundle.certified = certified;
  return bundle;
}

ordered_json bundle_to_json(const TestingProblem& problem,
                            const AnalysisBundle& bundle) {
  ordered_json j;
  j["tool"] = "npdual";
  ordered_json prob;
  prob["atoms"] = problem.atom_count();
  prob["null_members"] = problem.null_count();
  prob["alt_members"] = problem.alt_count();
  if (problem.scalar_alpha())
    prob["alpha"] = problem.alpha();
  else
    prob["alpha"] = problem.alphas();
  j["problem"] = std::move(prob);

  ordered_json values;
  values["lower"] = bundle.solve.lower_value;
  values["middle"] = bundle.solve.middle_value;
  values["dual"] = bundle.solve.dual_value;
  values["gap"] = bundle.solve.gap;
  j["values"] = std::move(values);

  j["test"] = bundle.solve.primal.test.values();
  j["sizes"] = bundle.solve.primal.sizes;
  j["powers"] = bundle.solve.powers;
  j["alt_weights"] = bundle.solve.dual.alt_weights;
  ordered_json prior;
  prior["weights"] = bundle.solve.dual.prior.weights();
  prior["total_mass"] = bundle.solve.dual.prior.total_mass();
  j["prior"] = std::move(prior);

  ordered_json certs;
  ordered_json slack;
  slack["upper_violation"] = bundle.slackness.upper_violation;
  slack["lower_violation"] = bundle.slackness.lower_violation;
  slack["binding_violation"] = bundle.slackness.binding_violation;
  slack["boundary_mass"] = bundle.slackness.boundary_mass;
  slack["tol"] = bundle.slackness.tol;
  slack["passed"] = bundle.slackness.passed;
  certs["slackness"] = std::move(slack);

  ordered_json weak;
  weak["margin"] = bundle.weak.margin;
  weak["term_upper"] = bundle.weak.term_upper;
  weak["term_lower"] = bundle.weak.term_lower;
  weak["term_level"] = bundle.weak.term_level;
  weak["size_violation"] = bundle.weak.size_violation;
  certs["weak_duality"] = std::move(weak);

  if (bundle.structure) {
    ordered_json st;
    const auto labels = [&](const std::vector<std::size_t>& idx) {
      std::vector<std::string> out;
      out.reserve(idx.size());
      for (std::size_t a : idx) out.push_back(problem.reference().labels()[a]);
      return out;
    };
    st["upper"] = labels(bundle.structure->upper);
    st["lower"] = labels(bundle.structure->lower);
    st["boundary"] = labels(bundle.structure->boundary);
    st["delta"] = bundle.structure->delta;
    certs["structure"] = std::move(st);
  } else {
    certs["structure"] = nullptr;
  }

  if (bundle.ck) {
    ordered_json ck;
    ck["z_hat"] = bundle.ck->z_hat;
    ck["identity_residual"] = bundle.ck->identity_residual;
    ck["membership_residual"] = bundle.ck->membership_residual;
    ck["membership_samples"] = bundle.ck->membership_samples;
    ck["w_hat_defined"] = bundle.ck->w_hat_defined;
    ck["w_hat"] = bundle.ck->w_hat;
    certs["ck"] = std::move(ck);
  } else {
    certs["ck"] = nullptr;
  }

  if (bundle.saddle) {
    ordered_json sd;
    sd["left_violation"] = bundle.saddle->left_violation;
    sd["right_violation"] = bundle.saddle->right_violation;
    sd["trials"] = bundle.saddle->trials;
    sd["tol"] = bundle.saddle->tol;
    sd["passed"] = bundle.saddle->passed;
    certs["saddle"] = std::move(sd);
  } else {
    certs["saddle"] = nullptr;
  }
  j["certificates"] = std::move(certs);
  j["certified"] = bundle.certified;
  return j;
}

ordered_json lfp_to_json(const GaussianProblem& gp, const LfpReport& report,
                         const AnalysisBundle& bundle) {
  ordered_json j;
  j["tool"] = "npdual";
  ordered_json spec;
  spec["side"] = gp.spec.side;
  spec["n"] = gp.spec.n;
  spec["xi1"] = gp.spec.xi1;
  spec["sigma1_sq"] = gp.spec.sigma1_sq;
  spec["sigma0_sq"] = gp.spec.sigma0_sq;
  spec["xi_points"] = gp.spec.xi_grid.size();
  spec["sigma_sq_grid"] = gp.spec.sigma_sq_grid;
  spec["x_bins"] = gp.spec.x_grid.size() - 1;
  spec["alpha"] = gp.alpha;
  spec["equal_variance_boundary"] =
      std::abs(gp.spec.sigma1_sq - gp.spec.sigma0_sq) <= 1e-12;
  j["gaussian"] = std::move(spec);

  ordered_json lfp;
  lfp["prior_mass_at_boundary_sigma"] = report.prior_mass_at_boundary_sigma;
  lfp["prior_mode_xi"] = number_or_null(report.prior_mode_xi);
  lfp["xbar_density_distance"] = report.xbar_density_distance;
  if (report.xi_marginal_distance)
    lfp["xi_marginal_distance"] = *report.xi_marginal_distance;
  else
    lfp["xi_marginal_distance"] = nullptr;
  j["lfp"] = std::move(lfp);

  ordered_json body = bundle_to_json(gp.problem, bundle);
  for (auto& [key, value] : body.items()) {
    if (key == "tool" || key == "test" || key == "sizes" || key == "powers") continue;
    j[key] = std::move(value);
  }
  return j;
}

std::string test_csv(const TestingProblem& problem, const RandomizedTest& test) {
  std::ostringstream out;
  out << "atom,R";
  for (std::size_t i = 0; i < problem.null_count(); ++i) out << ",ZP" << i + 1;
  for (std::size_t j = 0; j < problem.alt_count(); ++j) out << ",ZQ" << j + 1;
  out << ",phi\n";
  for (std::size_t a = 0; a < problem.atom_count(); ++a) {
    out << problem.reference().labels()[a] << ","
        << format_number(problem.reference().weight(a));
    for (std::size_t i = 0; i < problem.null_count(); ++i)
      out << "," << format_number(problem.null_family().member(i).value(a));
    for (std::size_t j = 0; j < problem.alt_count(); ++j)
      out << "," << format_number(problem.alt_family().member(j).value(a));
    out << "," << format_number(test.value(a)) << "\n";
  }
  return out.str();
}

std::string dual_ray_csv(const std::vector<double>& grid,
                         const std::vector<double>& values) {
  if (grid.size() != values.size())
    throw Error(ErrorCode::DimensionMismatch, "grid vs values in dual ray");
  std::ostringstream out;
  out << "scale,dual_objective\n";
  for (std::size_t i = 0; i < grid.size(); ++i)
    out << format_number(grid[i]) << "," << format_number(values[i]) << "\n";
  return out.str();
}

std::string prior_csv(const GaussianProblem& gp, const Prior& prior) {
  if (prior.size() != gp.member_params.size())
    throw Error(ErrorCode::DimensionMismatch, "prior vs gaussian members");
  std::ostringstream out;
  out << "xi,sigma_sq,weight\n";
  for (std::size_t i = 0; i < prior.size(); ++i)
    out << format_number(gp.member_params[i].first) << ","
        << format_number(gp.member_params[i].second) << ","
        << format_number(prior.weight(i)) << "\n";
  return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  out << content;
  if (!out) throw Error(ErrorCode::IoError, "short write to " + path);
}

}  // namespace npdual
