#include "npdual/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace npdual {

ClassicNpResult classic_np(const ReferenceMeasure& reference, const Density& null_density,
                           const Density& alt_density, double alpha) {
  if (null_density.size() != reference.atom_count() ||
      alt_density.size() != reference.atom_count())
    throw Error(ErrorCode::DimensionMismatch, "densities vs atom count");
  if (alpha <= 0.0 || alpha >= 1.0)
    throw Error(ErrorCode::AlphaOutOfRange, "alpha = " + std::to_string(alpha));
  const std::size_t n = reference.atom_count();
  constexpr double kInf = std::numeric_limits<double>::infinity();

  // Likelihood ratio, with Z_P = 0 < Z_Q rejected first and atoms
  // carrying neither density never rejected.
  std::vector<double> ratio(n);
  for (std::size_t a = 0; a < n; ++a) {
    const double zp = null_density.value(a);
    const double zq = alt_density.value(a);
    ratio[a] = zp > 0.0 ? zq / zp : (zq > 0.0 ? kInf : 0.0);
  }

  std::vector<double> finite_values;
  for (std::size_t a = 0; a < n; ++a)
    if (std::isfinite(ratio[a]) && null_density.value(a) > 0.0)
      finite_values.push_back(ratio[a]);
  std::sort(finite_values.begin(), finite_values.end());
  finite_values.erase(std::unique(finite_values.begin(), finite_values.end()),
                      finite_values.end());

  const auto null_mass_above = [&](double z) {
    double mass = 0.0;
    for (std::size_t a = 0; a < n; ++a)
      if (ratio[a] > z) mass += reference.weight(a) * null_density.value(a);
    return mass;
  };

  // Smallest threshold whose strict upper tail fits under alpha; the
  // infimum over z >= 0 is attained at a realized ratio value or at 0.
  double quantile = 0.0;
  if (null_mass_above(0.0) > alpha) {
    quantile = kInf;
    for (double v : finite_values) {
      if (v <= 0.0) continue;
      if (null_mass_above(v) <= alpha) {
        quantile = v;
        break;
      }
    }
    if (!std::isfinite(quantile))
      throw Error(ErrorCode::InternalError, "no threshold fits under alpha");
  }

  double delta = 0.0;
  if (quantile > 0.0) {
    double mass_at = 0.0;
    for (std::size_t a = 0; a < n; ++a)
      if (ratio[a] == quantile) mass_at += reference.weight(a) * null_density.value(a);
    if (mass_at <= 0.0)
      throw Error(ErrorCode::InternalError, "empty boundary at a positive threshold");
    delta = (alpha - null_mass_above(quantile)) / mass_at;
    delta = std::min(1.0, std::max(0.0, delta));
  }

  std::vector<double> phi(n, 0.0);
  for (std::size_t a = 0; a < n; ++a) {
    if (ratio[a] > quantile)
      phi[a] = 1.0;
    else if (quantile > 0.0 && ratio[a] == quantile)
      phi[a] = delta;
  }

  ClassicNpResult result{quantile, delta, RandomizedTest(std::move(phi)), 0.0, 0.0};
  result.size = expected_value(reference, null_density, result.test);
  result.power = expected_value(reference, alt_density, result.test);
  return result;
}

ClassicNpResult classic_np(const TestingProblem& problem) {
  if (problem.null_count() != 1 || problem.alt_count() != 1)
    throw Error(ErrorCode::InvalidArgument,
                "classical oracle needs singleton families (got " +
                    std::to_string(problem.null_count()) + " null, " +
                    std::to_string(problem.alt_count()) + " alternative)");
  return classic_np(problem.reference(), problem.null_family().member(0),
                    problem.alt_family().member(0), problem.alphas()[0]);
}

BruteForceResult grid_bruteforce(const TestingProblem& problem, unsigned steps) {
  if (steps == 0) throw Error(ErrorCode::InvalidArgument, "steps must be positive");
  const std::size_t n = problem.atom_count();
  const double levels = static_cast<double>(steps) + 1.0;
  if (std::pow(levels, static_cast<double>(n)) > 1e7)
    throw Error(ErrorCode::TooLarge,
                "grid enumerates (steps+1)^atoms = " + std::to_string(levels) + "^" +
                    std::to_string(n) + " tests, above the 1e7 guard");

  const ReferenceMeasure& ref = problem.reference();
  const std::size_t k = problem.null_count();
  const std::size_t l = problem.alt_count();
  // Per-atom contribution of a unit test value to each expectation.
  std::vector<std::vector<double>> null_contrib(k, std::vector<double>(n));
  std::vector<std::vector<double>> alt_contrib(l, std::vector<double>(n));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t a = 0; a < n; ++a)
      null_contrib[i][a] = ref.weight(a) * problem.null_family().member(i).value(a);
  for (std::size_t j = 0; j < l; ++j)
    for (std::size_t a = 0; a < n; ++a)
      alt_contrib[j][a] = ref.weight(a) * problem.alt_family().member(j).value(a);

  BruteForceResult best{-1.0, RandomizedTest::constant(n, 0.0), 0, 0};
  std::vector<unsigned> digits(n, 0);
  std::vector<double> phi(n, 0.0);
  while (true) {
    ++best.evaluated;
    bool feasible = true;
    for (std::size_t i = 0; i < k && feasible; ++i) {
      double size = 0.0;
      for (std::size_t a = 0; a < n; ++a) size += null_contrib[i][a] * phi[a];
      if (size > problem.alphas()[i] + 1e-12) feasible = false;
    }
    if (feasible) {
      ++best.feasible;
      double value = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < l; ++j) {
        double power = 0.0;
        for (std::size_t a = 0; a < n; ++a) power += alt_contrib[j][a] * phi[a];
        value = std::min(value, power);
      }
      if (value > best.value) {
        best.value = value;
        best.test = RandomizedTest(phi);
      }
    }
    std::size_t pos = 0;
    while (pos < n) {
      if (++digits[pos] <= steps) {
        phi[pos] = static_cast<double>(digits[pos]) / static_cast<double>(steps);
        break;
      }
      digits[pos] = 0;
      phi[pos] = 0.0;
      ++pos;
    }
    if (pos == n) break;
  }
  return best;
}

}  // namespace npdual
