#pragma once

#include <cstdint>

#include "npdual/model.hpp"

namespace npdual {

/// Simple-vs-simple most powerful test of size alpha. The likelihood
/// ratio L = Z_Q / Z_P is +infinity where Z_P = 0 < Z_Q (rejected first)
/// and 0 where both vanish (never rejected). `quantile` is the rejection
/// threshold and `delta` the randomization on {L = quantile}; delta = 0
/// when quantile = 0, where the test rejects exactly {L > 0} and slack
/// size is allowed.
struct ClassicNpResult {
  double quantile;
  double delta;
  RandomizedTest test;
  double size;
  double power;
};

ClassicNpResult classic_np(const ReferenceMeasure& reference, const Density& null_density,
                           const Density& alt_density, double alpha);

/// Convenience overload for problems with singleton families.
ClassicNpResult classic_np(const TestingProblem& problem);

struct BruteForceResult {
  double value;  // best feasible min power found on the grid
  RandomizedTest test;
  std::uint64_t evaluated;
  std::uint64_t feasible;
};

/// Exhaustive search over tests with per-atom values in {0, 1/steps, ...,
/// 1}. Throws TooLarge when the enumeration count (steps+1)^atoms would
/// exceed 1e7.
BruteForceResult grid_bruteforce(const TestingProblem& problem, unsigned steps);

}  // namespace npdual
