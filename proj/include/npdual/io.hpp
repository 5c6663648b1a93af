#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "npdual/certify.hpp"
#include "npdual/families.hpp"
#include "npdual/model.hpp"
#include "npdual/npsolver.hpp"

namespace npdual {

/// Parses the JSON problem layout: atoms, R, null, alt, alpha. Atoms
/// with zero reference weight are dropped with a warning before
/// validation. Throws InvalidArgument on malformed JSON structure;
/// IoError is reserved for filesystem failures.
ProblemData parse_problem_data(const nlohmann::json& j);
TestingProblem load_problem_file(const std::string& path);

GaussianXbarSpec parse_gaussian_spec(const nlohmann::json& j);

/// Full certification pipeline on a solved problem. The saddle check
/// runs only when a seed is supplied.
struct AnalysisBundle {
  SolveReport solve;
  SlacknessReport slackness;
  WeakDualityReport weak;
  std::optional<StructureDecomposition> structure;
  std::optional<CkCertificate> ck;
  std::optional<SaddleReport> saddle;
  bool certified;
};

AnalysisBundle analyze(const TestingProblem& problem,
                       std::optional<std::uint64_t> saddle_seed = std::nullopt,
                       long saddle_trials = 1000, double tol_gap = 1e-7,
                       double tol_slack = 1e-7);

/// Deterministic report serialization: fixed key order, no timestamps,
/// so identical inputs produce byte-identical files.
nlohmann::ordered_json bundle_to_json(const TestingProblem& problem,
                                      const AnalysisBundle& bundle);
nlohmann::ordered_json lfp_to_json(const GaussianProblem& gp, const LfpReport& report,
                                   const AnalysisBundle& bundle);

std::string test_csv(const TestingProblem& problem, const RandomizedTest& test);
std::string dual_ray_csv(const std::vector<double>& grid, const std::vector<double>& values);
std::string prior_csv(const GaussianProblem& gp, const Prior& prior);

void write_text_file(const std::string& path, const std::string& content);

/// Log level from NPDUAL_LOG (quiet|warn|info|debug, default warn).
int log_level();
void log_warn(const std::string& message);
void log_info(const std::string& message);
bool log_debug_enabled();

}  // namespace npdual
