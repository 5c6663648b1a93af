#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "npdual/io.hpp"
#include "npdual/oracle.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

struct Options {
  std::string input;
  std::string output_dir = ".";
  std::optional<std::uint64_t> seed;
  double tol_gap = 1e-7;
  double tol_slack = 1e-7;
  long saddle_trials = 1000;
  bool emit_plot_data = false;
  int case_id = 0;
  double alpha = 0.1;
  unsigned steps = 0;
};

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec)
    throw npdual::Error(npdual::ErrorCode::IoError,
                        "cannot create " + dir + ": " + ec.message());
}

std::string joined(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

std::vector<double> ray_grid() {
  std::vector<double> grid(41);
  for (std::size_t i = 0; i < grid.size(); ++i)
    grid[i] = static_cast<double>(i) * (2.0 / 40.0);
  return grid;
}

void emit_dual_ray(const Options& opt, const npdual::TestingProblem& problem,
                   const npdual::SolveReport& solve) {
  const std::vector<double> grid = ray_grid();
  const std::vector<double> values =
      npdual::scan_dual_ray(problem, solve.dual.alt_weights, solve.dual.prior, grid);
  npdual::write_text_file(joined(opt.output_dir, "dual_ray.csv"),
                          npdual::dual_ray_csv(grid, values));
}

void print_summary(const npdual::AnalysisBundle& bundle) {
  std::cout << "min power  " << bundle.solve.lower_value << "\n"
            << "dual value " << bundle.solve.dual_value << "\n"
            << "gap        " << bundle.solve.gap << "\n"
            << "certified  " << (bundle.certified ? "yes" : "no") << "\n";
}

int run_solve(const Options& opt) {
  npdual::TestingProblem problem = npdual::load_problem_file(opt.input);
  npdual::AnalysisBundle bundle = npdual::analyze(
      problem, opt.seed, opt.saddle_trials, opt.tol_gap, opt.tol_slack);
  ensure_dir(opt.output_dir);
  npdual::write_text_file(joined(opt.output_dir, "report.json"),
                          npdual::bundle_to_json(problem, bundle).dump(2) + "\n");
  npdual::write_text_file(joined(opt.output_dir, "test.csv"),
                          npdual::test_csv(problem, bundle.solve.primal.test));
  if (opt.emit_plot_data) emit_dual_ray(opt, problem, bundle.solve);
  print_summary(bundle);
  return bundle.certified ? 0 : 3;
}

json load_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw npdual::Error(npdual::ErrorCode::IoError, "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw npdual::Error(npdual::ErrorCode::InvalidArgument,
                        "malformed JSON in " + path + ": " + e.what());
  }
}

int run_example_gaussian(const Options& opt) {
  npdual::GaussianXbarSpec spec;
  if (!opt.input.empty()) {
    spec = npdual::parse_gaussian_spec(load_json_file(opt.input));
  } else if (opt.case_id == 1) {
    spec = npdual::gaussian_case1_preset();
  } else if (opt.case_id == 2) {
    spec = npdual::gaussian_case2_preset();
  } else {
    throw npdual::Error(npdual::ErrorCode::InvalidArgument,
                        "pass --case 1, --case 2, or --input spec.json");
  }
  npdual::GaussianProblem gp = npdual::gaussian_xbar_problem(spec, opt.alpha);
  npdual::AnalysisBundle bundle = npdual::analyze(
      gp.problem, opt.seed, opt.saddle_trials, opt.tol_gap, opt.tol_slack);
  npdual::LfpReport report = npdual::lfp_report(gp, bundle.solve);
  ensure_dir(opt.output_dir);
  npdual::write_text_file(joined(opt.output_dir, "lfp_report.json"),
                          npdual::lfp_to_json(gp, report, bundle).dump(2) + "\n");
  npdual::write_text_file(joined(opt.output_dir, "prior.csv"),
                          npdual::prior_csv(gp, bundle.solve.dual.prior));
  if (opt.emit_plot_data) emit_dual_ray(opt, gp.problem, bundle.solve);
  print_summary(bundle);
  std::cout << "boundary-sigma prior mass " << report.prior_mass_at_boundary_sigma
            << "\n";
  if (!std::isnan(report.prior_mode_xi))
    std::cout << "prior mode xi " << report.prior_mode_xi << "\n";
  std::cout << "xbar density distance " << report.xbar_density_distance << "\n";

  if (std::abs(spec.sigma1_sq - spec.sigma0_sq) <= 1e-12) {
    std::cout << "note: alternative variance sits on the null boundary; the "
                 "least favorable prior concentrates there and min power "
                 "collapses toward the level\n";
    return 0;
  }
  // The structural gate: strong duality plus a size-feasible test. The
  // pointwise slackness classification stays in the report but does not
  // gate this command — at these degenerate optima nearly every atom sits
  // on the boundary, where the classification is meaningless.
  bool gate = std::abs(bundle.solve.gap) <= opt.tol_gap &&
              bundle.weak.size_violation <= opt.tol_slack;
  if (opt.case_id == 1) {
    double nearest = spec.xi_grid.front();
    for (double xi : spec.xi_grid)
      if (std::abs(xi - spec.xi1) < std::abs(nearest - spec.xi1)) nearest = xi;
    gate = gate && report.prior_mass_at_boundary_sigma >= 0.9 &&
           std::abs(report.prior_mode_xi - nearest) <= 1e-12;
  } else if (opt.case_id == 2) {
    gate = gate && report.xbar_density_distance <= 0.02;
  }
  if (!gate) std::cout << "shape gate failed; see lfp_report.json\n";
  return gate ? 0 : 3;
}

int run_oracle_check(const Options& opt) {
  npdual::TestingProblem problem = npdual::load_problem_file(opt.input);
  npdual::SolveReport solve = npdual::solve_maxmin(problem);
  ordered_json j;
  j["tool"] = "npdual";
  j["lower"] = solve.lower_value;
  j["dual"] = solve.dual_value;
  j["gap"] = solve.gap;
  bool any = false;
  bool ok = true;
  if (problem.null_count() == 1 && problem.alt_count() == 1) {
    any = true;
    npdual::ClassicNpResult classic = npdual::classic_np(problem);
    const double diff = std::abs(classic.power - solve.lower_value);
    ordered_json c;
    c["power"] = classic.power;
    c["size"] = classic.size;
    c["quantile"] = classic.quantile;
    c["delta"] = classic.delta;
    c["value_gap"] = diff;
    j["classic"] = std::move(c);
    ok = ok && diff <= 1e-8;
    std::cout << "classic value gap " << diff << "\n";
  } else {
    j["classic"] = nullptr;
  }
  if (opt.steps > 0) {
    any = true;
    npdual::BruteForceResult brute = npdual::grid_bruteforce(problem, opt.steps);
    const double lo = solve.lower_value - 1.0 / opt.steps - 1e-9;
    const double hi = solve.lower_value + 1e-8;
    const bool within = brute.value >= lo && brute.value <= hi;
    ordered_json b;
    b["value"] = brute.value;
    b["steps"] = opt.steps;
    b["evaluated"] = brute.evaluated;
    b["feasible"] = brute.feasible;
    b["within_bracket"] = within;
    j["bruteforce"] = std::move(b);
    ok = ok && within;
    std::cout << "bruteforce value " << brute.value << " vs lp "
              << solve.lower_value << "\n";
  } else {
    j["bruteforce"] = nullptr;
  }
  if (!any)
    throw npdual::Error(npdual::ErrorCode::InvalidArgument,
                        "oracle-check needs singleton families or --steps");
  j["agrees"] = ok;
  ensure_dir(opt.output_dir);
  npdual::write_text_file(joined(opt.output_dir, "oracle_check.json"),
                          j.dump(2) + "\n");
  std::cout << "agrees " << (ok ? "yes" : "no") << "\n";
  return ok ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Composite-vs-composite testing by linear programming with dual certificates"};
  app.require_subcommand(1);
  Options opt;

  const auto add_common = [&](CLI::App* sub, bool needs_input) {
    CLI::Option* input = sub->add_option("--input", opt.input, "Problem JSON file");
    if (needs_input) input->required();
    sub->add_option("--output-dir", opt.output_dir, "Directory for reports");
    sub->add_option("--tol-gap", opt.tol_gap, "Duality gap tolerance");
    sub->add_option("--tol-slack", opt.tol_slack, "Slackness tolerance");
    sub->add_flag("--emit-plot-data", opt.emit_plot_data,
                  "Also write dual_ray.csv");
    return input;
  };

  CLI::App* solve = app.add_subcommand("solve", "Solve and write report.json + test.csv");
  add_common(solve, true);
  solve->add_option("--seed", opt.seed, "Enable the saddle spot-check with this seed");
  solve->add_option("--saddle-trials", opt.saddle_trials, "Saddle spot-check trials");

  CLI::App* certify = app.add_subcommand(
      "certify", "Solve with the full certificate chain including the saddle spot-check");
  add_common(certify, true);
  certify->add_option("--seed", opt.seed, "Seed for the saddle spot-check")->required();
  certify->add_option("--saddle-trials", opt.saddle_trials, "Saddle spot-check trials");

  CLI::App* example = app.add_subcommand(
      "example-gaussian", "Binned Gaussian mean test; writes lfp_report.json + prior.csv");
  add_common(example, false);
  example->add_option("--case", opt.case_id, "Preset 1 or 2")->check(CLI::Range(1, 2));
  example->add_option("--alpha", opt.alpha, "Significance level")
      ->check(CLI::Range(0.0, 1.0));
  example->add_option("--seed", opt.seed, "Enable the saddle spot-check with this seed");

  CLI::App* oracle = app.add_subcommand(
      "oracle-check", "Compare the solver against independent oracles");
  add_common(oracle, true);
  oracle->add_option("--steps", opt.steps, "Grid steps for brute-force enumeration");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (solve->parsed()) return run_solve(opt);
    if (certify->parsed()) return run_solve(opt);
    if (example->parsed()) return run_example_gaussian(opt);
    return run_oracle_check(opt);
  } catch (const npdual::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == npdual::ErrorCode::IoError ? 1 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
