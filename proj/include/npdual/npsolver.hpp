#pragma once

#include <vector>

#include "npdual/model.hpp"

namespace npdual {

/// Optimal max-min test together with its realized sizes.
struct PrimalSolution {
  RandomizedTest test;
  double value;  // min power over alternative members, recomputed exactly
  std::vector<double> sizes;
};

/// Least favorable pair: weights over alternative members (a probability
/// vector) and a nonnegative prior over null members.
struct DualSolution {
  std::vector<double> alt_weights;
  Prior prior;
  double value;  // dual objective at (alt_weights, prior)
};

struct SolveReport {
  PrimalSolution primal;
  DualSolution dual;
  double lower_value;   // sup-inf value attained by the test
  double middle_value;  // best power against the least favorable mixture
  double dual_value;    // dual objective at the returned pair
  double gap;           // dual_value - lower_value
  std::vector<double> powers;     // per alternative member
  std::vector<double> box_duals;  // multipliers of the phi <= 1 rows
  long lp_iterations;
};

/// Solves the max-min testing problem by linear programming and recovers
/// the dual pair from the optimal basis. The chain
/// lower_value <= middle_value <= dual_value holds up to roundoff.
SolveReport solve_maxmin(const TestingProblem& problem);

/// D(Q, prior) = E[(Z_Q - mix)^+] + sum_i alpha_i prior_i with Q the
/// alt_weights mixture; an upper bound for every attainable power.
double dual_objective(const TestingProblem& problem,
                      const std::vector<double>& alt_weights, const Prior& prior);

/// Dual objective along {scale * direction : scale in grid}; the sampled
/// curve must be convex (second differences >= -1e-9) or
/// CertificateInconsistency is thrown.
std::vector<double> scan_dual_ray(const TestingProblem& problem,
                                  const std::vector<double>& alt_weights,
                                  const Prior& direction,
                                  const std::vector<double>& grid);

}  // namespace npdual
