#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "npdual/model.hpp"
#include "npdual/npsolver.hpp"

namespace npdual {

/// Gaussian sample-mean family binned onto a finite grid. The null
/// consists of N(xi, sigma_sq / n) sample-mean laws for xi in xi_grid and
/// sigma_sq in sigma_sq_grid; the alternative is the single member with
/// mean xi1 and variance sigma1_sq. side 1 means every null variance lies
/// at or above the boundary variance sigma0_sq, side 2 at or below.
struct GaussianXbarSpec {
  int side = 1;
  int n = 1;             // sample size behind the mean
  double xi1 = 0.0;      // alternative mean
  double sigma1_sq = 1;  // alternative variance
  double sigma0_sq = 1;  // boundary variance of the null band
  std::vector<double> xi_grid;
  std::vector<double> sigma_sq_grid;
  std::vector<double> x_grid;  // bin edges for the sample-mean axis
};

struct GaussianProblem {
  GaussianXbarSpec spec;
  double alpha;
  TestingProblem problem;
  std::vector<std::pair<double, double>> member_params;  // (xi, sigma_sq) per null member
  std::vector<std::vector<double>> null_bin_probs;
  std::vector<double> alt_bin_probs;
  std::vector<double> bin_midpoints;
};

/// Bins each member by midpoint-rule probabilities (renormalized) and
/// builds the testing problem with the uniform member mixture as
/// reference. Throws GridTooCoarse when any member puts more than half
/// its mass in one bin.
GaussianProblem gaussian_xbar_problem(const GaussianXbarSpec& spec, double alpha);

/// Shape summary of the recovered least favorable prior.
struct LfpReport {
  double prior_mass_at_boundary_sigma;  // fraction of prior mass with sigma_sq = sigma0_sq
  double prior_mode_xi;                 // xi with the largest aggregated prior mass
  double xbar_density_distance;  // sup bin gap between prior mixture and alternative
  std::optional<double> xi_marginal_distance;  // vs discretized N(xi1, (sigma1_sq-sigma0_sq)/n)
};

/// Throws NotSolved when the report does not match the problem.
LfpReport lfp_report(const GaussianProblem& gp, const SolveReport& report);

GaussianXbarSpec gaussian_case1_preset();
GaussianXbarSpec gaussian_case2_preset();

/// Halves the xi step and/or splits every x bin, keeping the endpoints.
GaussianXbarSpec refine_spec(const GaussianXbarSpec& spec, bool refine_xi,
                             bool refine_x);

}  // namespace npdual
