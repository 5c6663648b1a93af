#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "npdual/model.hpp"

namespace npdual {

/// Decomposition of the gap D(Q, prior) - E^Q[test] into three
/// nonnegative slack terms (nonnegative once the test is size-feasible).
struct WeakDualityReport {
  double margin;      // D - E^Q[test]
  double term_upper;  // mass kept where the mixture gap is positive
  double term_lower;  // mass rejected where the mixture gap is negative
  double term_level;  // sum_i prior_i (alpha_i - size_i)
  double size_violation;  // max_i (size_i - alpha_i)^+
};

WeakDualityReport check_weak_duality(const TestingProblem& problem,
                                     const RandomizedTest& test,
                                     const std::vector<double>& alt_weights,
                                     const Prior& prior);

struct SlacknessReport {
  double upper_violation;    // R-mass where gap > tol but test < 1 - tol
  double lower_violation;    // R-mass where gap < -tol but test > tol
  double binding_violation;  // max |size_i - alpha_i| over supported members
  double boundary_mass;      // R-mass where |gap| <= tol
  double tol;
  bool passed;
};

SlacknessReport check_slackness(const TestingProblem& problem,
                                const RandomizedTest& test,
                                const std::vector<double>& alt_weights,
                                const Prior& prior, double tol = 1e-7);

/// True iff slackness passes, the weak-duality margin is within tol, and
/// the test is size-feasible within tol.
bool certified_optimal(const TestingProblem& problem, const RandomizedTest& test,
                       const std::vector<double>& alt_weights, const Prior& prior,
                       double tol = 1e-7);

struct SaddleReport {
  double left_violation;   // best sampled improvement against the mixture
  double right_violation;  // mixture power minus worst member power
  long trials;
  double tol;
  bool passed;
};

/// Samples `trials` feasible tests (deterministic given seed) and checks
/// the saddle inequalities. Throws SeedRequired when trials > 0 and no
/// seed is given.
SaddleReport check_saddle(const TestingProblem& problem, const RandomizedTest& test,
                          const std::vector<double>& alt_weights, long trials,
                          std::optional<std::uint64_t> seed, double tol = 1e-7);

/// Atom indices split by the sign of Z_Q - mix; delta holds the test
/// values on the boundary atoms.
struct StructureDecomposition {
  std::vector<std::size_t> upper;
  std::vector<std::size_t> lower;
  std::vector<std::size_t> boundary;
  std::vector<double> delta;
};

/// Requires a certified triple (throws NotCertified otherwise).
StructureDecomposition decompose_structure(const TestingProblem& problem,
                                           const RandomizedTest& test,
                                           const std::vector<double>& alt_weights,
                                           const Prior& prior, double tol = 1e-7);

/// Composite-alternative certificate: z_hat = total prior mass, w_hat the
/// normalized mixture (defined when z_hat > 0), and the identity
/// z_hat * w_hat = mix checked through the dual objective.
struct CkCertificate {
  double z_hat;
  std::vector<double> w_hat;  // empty when z_hat = 0
  bool w_hat_defined;
  double identity_residual;    // |E^Q[test] - D(Q, prior)|
  double membership_residual;  // max over sampled feasible tests of E[test w_hat] - alpha
  long membership_samples;
};

/// Requires scalar alpha (ScalarAlphaRequired) and a certified triple
/// (NotCertified).
CkCertificate ck_certificate(const TestingProblem& problem, const RandomizedTest& test,
                             const std::vector<double>& alt_weights, const Prior& prior,
                             double tol = 1e-7);

}  // namespace npdual
