#pragma once

#include <iosfwd>
#include <vector>

#include "npdual/errors.hpp"

namespace npdual {

enum class RowSense { LessEqual, GreaterEqual, Equal };
enum class ObjectiveSense { Maximize, Minimize };
enum class LpStatus { Optimal, Infeasible, Unbounded };

/// Dense linear program over variables with per-variable bounds.
/// Empty `lower` defaults to all zeros, empty `upper` to all +infinity.
struct LinearProgram {
  ObjectiveSense sense = ObjectiveSense::Maximize;
  std::vector<double> objective;
  std::vector<std::vector<double>> rows;
  std::vector<RowSense> senses;
  std::vector<double> rhs;
  std::vector<double> lower;
  std::vector<double> upper;

  std::size_t var_count() const { return objective.size(); }
  std::size_t row_count() const { return rows.size(); }
  void add_row(std::vector<double> coeffs, RowSense sense_in, double rhs_in);
};

struct LpResiduals {
  double primal = 0.0;         // worst row/bound violation
  double dual = 0.0;           // worst dual sign/feasibility violation
  double complementary = 0.0;  // worst complementary slackness product
  double duality_gap = 0.0;    // |objective - dual objective|
};

/// Sign conventions for a Maximize problem: duals of LessEqual rows are
/// >= 0, GreaterEqual rows <= 0, Equal rows free; reduced costs satisfy
/// rc <= 0 at a lower bound, rc >= 0 at an upper bound, rc = 0 between.
/// All conventions flip for Minimize. `witness` carries Farkas row
/// multipliers when Infeasible and an improving ray when Unbounded.
struct LpSolution {
  LpStatus status = LpStatus::Optimal;
  std::vector<double> primal;
  std::vector<double> row_duals;
  std::vector<double> reduced_costs;
  double objective = 0.0;
  double dual_objective = 0.0;
  LpResiduals residuals;
  long iterations = 0;
  std::vector<double> witness;
};

struct SimplexOptions {
  double pivot_tol = 1e-9;
  double feas_tol = 1e-8;
  long max_iterations = 0;  // 0 picks a size-based cap
  std::ostream* debug = nullptr;
};

/// Two-phase dense primal simplex. Deterministic: identical inputs take
/// identical pivot sequences, so repeated solves are bit-identical.
/// Throws NumericalBreakdown when no acceptable pivot exists or the
/// iteration cap is hit despite Bland's rule.
LpSolution solve_lp(const LinearProgram& lp, const SimplexOptions& options = {});

/// Residuals of a candidate optimal solution against the original data;
/// used internally after each solve and exposed for tests.
LpResiduals compute_residuals(const LinearProgram& lp, const LpSolution& solution);

}  // namespace npdual
