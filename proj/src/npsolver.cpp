#include "npdual/npsolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "npdual/simplex.hpp"

namespace npdual {
namespace {

std::vector<double> clamped_unit(std::vector<double> v) {
  for (double& x : v) x = std::min(1.0, std::max(0.0, x));
  return v;
}

std::vector<double> clamped_nonnegative(std::vector<double> v) {
  for (double& x : v) x = std::max(0.0, x);
  return v;
}

std::vector<double> mixture_values(const HypothesisFamily& family,
                                   const std::vector<double>& weights) {
  std::vector<double> mix(family.member(0).size(), 0.0);
  for (std::size_t i = 0; i < family.size(); ++i) {
    const double w = weights[i];
    if (w == 0.0) continue;
    const std::vector<double>& z = family.member(i).values();
    for (std::size_t a = 0; a < mix.size(); ++a) mix[a] += w * z[a];
  }
  return mix;
}

void check_alt_weights(const TestingProblem& problem,
                       const std::vector<double>& alt_weights) {
  if (alt_weights.size() != problem.alt_count())
    throw Error(ErrorCode::DimensionMismatch,
                "alt_weights has " + std::to_string(alt_weights.size()) +
                    " entries for " + std::to_string(problem.alt_count()) +
                    " alternative members");
  double sum = 0.0;
  for (std::size_t j = 0; j < alt_weights.size(); ++j) {
    if (alt_weights[j] < -1e-9)
      throw Error(ErrorCode::InvalidArgument,
                  "alt_weights[" + std::to_string(j) + "] is negative");
    sum += alt_weights[j];
  }
  if (std::abs(sum - 1.0) > 1e-6)
    throw Error(ErrorCode::InvalidArgument,
                "alt_weights sums to " + std::to_string(sum));
}

}  // namespace

double dual_objective(const TestingProblem& problem,
                      const std::vector<double>& alt_weights, const Prior& prior) {
  check_alt_weights(problem, alt_weights);
  if (prior.size() != problem.null_count())
    throw Error(ErrorCode::DimensionMismatch,
                "prior has " + std::to_string(prior.size()) + " weights for " +
                    std::to_string(problem.null_count()) + " null members");
  const std::vector<double> zq = mixture_values(problem.alt_family(), alt_weights);
  const std::vector<double> mix = mixture_values(problem.null_family(), prior.weights());
  double value = 0.0;
  for (std::size_t a = 0; a < problem.atom_count(); ++a)
    value += problem.reference().weight(a) * std::max(0.0, zq[a] - mix[a]);
  for (std::size_t i = 0; i < problem.null_count(); ++i)
    value += problem.alphas()[i] * prior.weight(i);
  return value;
}

std::vector<double> scan_dual_ray(const TestingProblem& problem,
                                  const std::vector<double>& alt_weights,
                                  const Prior& direction,
                                  const std::vector<double>& grid) {
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (!(grid[i] >= 0.0))
      throw Error(ErrorCode::InvalidArgument,
                  "grid[" + std::to_string(i) + "] must be nonnegative");
  std::vector<double> values;
  values.reserve(grid.size());
  for (double scale : grid) {
    std::vector<double> scaled = direction.weights();
    for (double& w : scaled) w *= scale;
    values.push_back(dual_objective(problem, alt_weights, Prior(std::move(scaled))));
  }
  // Convexity of the sampled curve, on the sorted grid.
  std::vector<std::size_t> order(grid.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return grid[a] < grid[b]; });
  double prev_slope = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < order.size(); ++k) {
    const double dg = grid[order[k + 1]] - grid[order[k]];
    if (dg <= 0.0) continue;
    const double slope = (values[order[k + 1]] - values[order[k]]) / dg;
    if (slope < prev_slope - 1e-9)
      throw Error(ErrorCode::CertificateInconsistency,
                  "dual ray scan is not convex at scale " +
                      std::to_string(grid[order[k]]));
    prev_slope = slope;
  }
  return values;
}

SolveReport solve_maxmin(const TestingProblem& problem) {
  const std::size_t n = problem.atom_count();
  const std::size_t k = problem.null_count();
  const std::size_t l = problem.alt_count();
  const ReferenceMeasure& ref = problem.reference();

  // Variables: phi_0..phi_{n-1} in [0, inf), then free t. The phi <= 1
  // constraints enter as explicit rows so their multipliers come back.
  LinearProgram lp;
  lp.sense = ObjectiveSense::Maximize;
  lp.objective.assign(n + 1, 0.0);
  lp.objective[n] = 1.0;
  lp.lower.assign(n + 1, 0.0);
  lp.upper.assign(n + 1, std::numeric_limits<double>::infinity());
  lp.lower[n] = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < l; ++j) {
    std::vector<double> row(n + 1, 0.0);
    const std::vector<double>& z = problem.alt_family().member(j).values();
    for (std::size_t a = 0; a < n; ++a) row[a] = -ref.weight(a) * z[a];
    row[n] = 1.0;
    lp.add_row(std::move(row), RowSense::LessEqual, 0.0);
  }
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<double> row(n + 1, 0.0);
    const std::vector<double>& z = problem.null_family().member(i).values();
    for (std::size_t a = 0; a < n; ++a) row[a] = ref.weight(a) * z[a];
    lp.add_row(std::move(row), RowSense::LessEqual, problem.alphas()[i]);
  }
  for (std::size_t a = 0; a < n; ++a) {
    std::vector<double> row(n + 1, 0.0);
    row[a] = 1.0;
    lp.add_row(std::move(row), RowSense::LessEqual, 1.0);
  }

  LpSolution sol = solve_lp(lp);
  if (sol.status != LpStatus::Optimal)
    throw Error(ErrorCode::InternalError,
                "max-min program is bounded and feasible by construction");

  RandomizedTest test(clamped_unit(
      std::vector<double>(sol.primal.begin(), sol.primal.begin() + n)));
  SizeResult sizes = evaluate_size(problem, test);
  PowerResult powers = evaluate_power(problem, test);

  std::vector<double> alt_weights = clamped_nonnegative(
      std::vector<double>(sol.row_duals.begin(), sol.row_duals.begin() + l));
  double qsum = 0.0;
  for (double q : alt_weights) qsum += q;
  if (qsum <= 0.0)
    throw Error(ErrorCode::InternalError, "alternative multipliers sum to zero");
  for (double& q : alt_weights) q /= qsum;
  Prior prior(clamped_nonnegative(std::vector<double>(
      sol.row_duals.begin() + l, sol.row_duals.begin() + l + k)));
  std::vector<double> box(sol.row_duals.begin() + l + k, sol.row_duals.end());

  SolveReport report{
      PrimalSolution{test, powers.worst, sizes.per_member},
      DualSolution{alt_weights, prior, 0.0},
      powers.worst,
      0.0,
      0.0,
      0.0,
      powers.per_member,
      std::move(box),
      sol.iterations,
  };
  report.dual_value = dual_objective(problem, alt_weights, prior);
  report.dual.value = report.dual_value;
  report.gap = report.dual_value - report.lower_value;

  // Middle value: best attainable power against the least favorable
  // mixture, from a second program with the box as plain bounds.
  const std::vector<double> zq = mixture_values(problem.alt_family(), alt_weights);
  LinearProgram mid;
  mid.sense = ObjectiveSense::Maximize;
  mid.objective.assign(n, 0.0);
  for (std::size_t a = 0; a < n; ++a) mid.objective[a] = ref.weight(a) * zq[a];
  mid.lower.assign(n, 0.0);
  mid.upper.assign(n, 1.0);
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<double> row(n, 0.0);
    const std::vector<double>& z = problem.null_family().member(i).values();
    for (std::size_t a = 0; a < n; ++a) row[a] = ref.weight(a) * z[a];
    mid.add_row(std::move(row), RowSense::LessEqual, problem.alphas()[i]);
  }
  LpSolution midsol = solve_lp(mid);
  if (midsol.status != LpStatus::Optimal)
    throw Error(ErrorCode::InternalError, "middle program must be solvable");
  double middle = 0.0;
  for (std::size_t a = 0; a < n; ++a)
    middle += mid.objective[a] * std::min(1.0, std::max(0.0, midsol.primal[a]));
  report.middle_value = middle;
  report.lp_iterations += midsol.iterations;
  return report;
}

}  // namespace npdual
