#include "npdual/certify.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "npdual/npsolver.hpp"

namespace npdual {
namespace {

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

std::vector<double> checked_alt_mixture(const TestingProblem& problem,
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
  return mixture_values(problem.alt_family(), alt_weights);
}

void check_prior(const TestingProblem& problem, const Prior& prior) {
  if (prior.size() != problem.null_count())
    throw Error(ErrorCode::DimensionMismatch,
                "prior has " + std::to_string(prior.size()) + " weights for " +
                    std::to_string(problem.null_count()) + " null members");
}

void check_test(const TestingProblem& problem, const RandomizedTest& test) {
  if (test.size() != problem.atom_count())
    throw Error(ErrorCode::DimensionMismatch,
                "test has " + std::to_string(test.size()) + " entries for " +
                    std::to_string(problem.atom_count()) + " atoms");
}

// Uniform double in [0, 1) from the top 53 bits; portable across
// standard libraries, unlike uniform_real_distribution.
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Scales a candidate into the size-feasible set by the worst level ratio.
std::vector<double> project_feasible(const TestingProblem& problem,
                                     std::vector<double> candidate) {
  double scale = 1.0;
  for (std::size_t i = 0; i < problem.null_count(); ++i) {
    const double size =
        expected_value(problem.reference(), problem.null_family().member(i).values(),
                       candidate);
    if (size > problem.alphas()[i])
      scale = std::min(scale, problem.alphas()[i] / size);
  }
  if (scale < 1.0)
    for (double& v : candidate) v *= scale;
  return candidate;
}

}  // namespace

WeakDualityReport check_weak_duality(const TestingProblem& problem,
                                     const RandomizedTest& test,
                                     const std::vector<double>& alt_weights,
                                     const Prior& prior) {
  check_test(problem, test);
  check_prior(problem, prior);
  const std::vector<double> zq = checked_alt_mixture(problem, alt_weights);
  const std::vector<double> mix = mixture_values(problem.null_family(), prior.weights());
  const ReferenceMeasure& ref = problem.reference();

  WeakDualityReport report{};
  double dual_value = 0.0;
  double attained = 0.0;
  for (std::size_t a = 0; a < problem.atom_count(); ++a) {
    const double w = ref.weight(a);
    const double gap = zq[a] - mix[a];
    const double phi = test.value(a);
    dual_value += w * std::max(0.0, gap);
    attained += w * zq[a] * phi;
    report.term_upper += w * (1.0 - phi) * std::max(0.0, gap);
    report.term_lower += w * phi * std::max(0.0, -gap);
  }
  report.size_violation = 0.0;
  for (std::size_t i = 0; i < problem.null_count(); ++i) {
    const double size = expected_value(ref, problem.null_family().member(i).values(),
                                       test.values());
    const double alpha = problem.alphas()[i];
    dual_value += alpha * prior.weight(i);
    report.term_level += prior.weight(i) * (alpha - size);
    report.size_violation = std::max(report.size_violation, size - alpha);
  }
  report.margin = dual_value - attained;
  const double recomposed = report.term_upper + report.term_lower + report.term_level;
  if (std::abs(report.margin - recomposed) > 1e-9)
    throw Error(ErrorCode::CertificateInconsistency,
                "margin decomposition drifts by " +
                    std::to_string(std::abs(report.margin - recomposed)));
  if (report.size_violation <= 1e-9 && report.margin < -1e-8)
    throw Error(ErrorCode::CertificateInconsistency,
                "negative margin " + std::to_string(report.margin) +
                    " for a size-feasible test");
  return report;
}

SlacknessReport check_slackness(const TestingProblem& problem,
                                const RandomizedTest& test,
                                const std::vector<double>& alt_weights,
                                const Prior& prior, double tol) {
  check_test(problem, test);
  check_prior(problem, prior);
  const std::vector<double> zq = checked_alt_mixture(problem, alt_weights);
  const std::vector<double> mix = mixture_values(problem.null_family(), prior.weights());
  const ReferenceMeasure& ref = problem.reference();

  SlacknessReport report{};
  report.tol = tol;
  for (std::size_t a = 0; a < problem.atom_count(); ++a) {
    const double gap = zq[a] - mix[a];
    const double band = tol * (1.0 + mix[a]);  // relative band for the boundary
    const double phi = test.value(a);
    if (gap > band) {
      if (phi < 1.0 - tol) report.upper_violation += ref.weight(a);
    } else if (gap < -band) {
      if (phi > tol) report.lower_violation += ref.weight(a);
    } else {
      report.boundary_mass += ref.weight(a);
    }
  }
  report.binding_violation = 0.0;
  const double support_floor = 1e-9 * std::max(1.0, prior.total_mass());
  for (std::size_t i = 0; i < problem.null_count(); ++i) {
    if (prior.weight(i) <= support_floor) continue;
    const double size = expected_value(ref, problem.null_family().member(i).values(),
                                       test.values());
    report.binding_violation =
        std::max(report.binding_violation, std::abs(size - problem.alphas()[i]));
  }
  report.passed = report.upper_violation <= tol && report.lower_violation <= tol &&
                  report.binding_violation <= tol;
  return report;
}

bool certified_optimal(const TestingProblem& problem, const RandomizedTest& test,
                       const std::vector<double>& alt_weights, const Prior& prior,
                       double tol) {
  const SlacknessReport slack = check_slackness(problem, test, alt_weights, prior, tol);
  if (!slack.passed) return false;
  const WeakDualityReport weak = check_weak_duality(problem, test, alt_weights, prior);
  return weak.margin <= tol && weak.size_violation <= tol;
}

SaddleReport check_saddle(const TestingProblem& problem, const RandomizedTest& test,
                          const std::vector<double>& alt_weights, long trials,
                          std::optional<std::uint64_t> seed, double tol) {
  check_test(problem, test);
  if (trials > 0 && !seed)
    throw Error(ErrorCode::SeedRequired, "saddle sampling needs a seed");
  const std::vector<double> zq = checked_alt_mixture(problem, alt_weights);
  const ReferenceMeasure& ref = problem.reference();
  const std::size_t n = problem.atom_count();

  SizeResult sizes = evaluate_size(problem, test);
  double size_violation = 0.0;
  for (std::size_t i = 0; i < problem.null_count(); ++i)
    size_violation =
        std::max(size_violation, sizes.per_member[i] - problem.alphas()[i]);
  if (size_violation > tol)
    throw Error(ErrorCode::InvalidArgument,
                "candidate test exceeds its level by " + std::to_string(size_violation));

  const double base = expected_value(ref, zq, test.values());
  SaddleReport report{};
  report.trials = trials;
  report.tol = tol;
  report.left_violation = 0.0;

  std::mt19937_64 rng(seed.value_or(0));
  for (long trial = 0; trial < trials; ++trial) {
    std::vector<double> candidate(n, 0.0);
    if (trial % 2 == 0) {
      // 0/1 vertices, rejection sampled with a projection fallback.
      bool feasible = false;
      for (int attempt = 0; attempt < 64 && !feasible; ++attempt) {
        for (std::size_t a = 0; a < n; ++a)
          candidate[a] = uniform01(rng) < 0.5 ? 0.0 : 1.0;
        feasible = true;
        for (std::size_t i = 0; i < problem.null_count() && feasible; ++i)
          if (expected_value(ref, problem.null_family().member(i).values(),
                             candidate) > problem.alphas()[i])
            feasible = false;
      }
      if (!feasible) candidate = project_feasible(problem, std::move(candidate));
    } else {
      for (std::size_t a = 0; a < n; ++a) candidate[a] = uniform01(rng);
      candidate = project_feasible(problem, std::move(candidate));
    }
    const double gain = expected_value(ref, zq, candidate) - base;
    report.left_violation = std::max(report.left_violation, gain);
  }

  PowerResult powers = evaluate_power(problem, test);
  report.right_violation = base - powers.worst;
  report.passed = report.left_violation <= tol && report.right_violation <= tol;
  return report;
}

StructureDecomposition decompose_structure(const TestingProblem& problem,
                                           const RandomizedTest& test,
                                           const std::vector<double>& alt_weights,
                                           const Prior& prior, double tol) {
  if (!certified_optimal(problem, test, alt_weights, prior, tol))
    throw Error(ErrorCode::NotCertified,
                "structure decomposition needs a certified triple");
  const std::vector<double> zq = checked_alt_mixture(problem, alt_weights);
  const std::vector<double> mix = mixture_values(problem.null_family(), prior.weights());

  StructureDecomposition out;
  for (std::size_t a = 0; a < problem.atom_count(); ++a) {
    const double gap = zq[a] - mix[a];
    const double band = tol * (1.0 + mix[a]);
    if (gap > band) {
      out.upper.push_back(a);
    } else if (gap < -band) {
      out.lower.push_back(a);
    } else {
      out.boundary.push_back(a);
      out.delta.push_back(std::min(1.0, std::max(0.0, test.value(a))));
    }
  }
  return out;
}

CkCertificate ck_certificate(const TestingProblem& problem, const RandomizedTest& test,
                             const std::vector<double>& alt_weights, const Prior& prior,
                             double tol) {
  const double alpha = problem.alpha();  // throws ScalarAlphaRequired
  if (!certified_optimal(problem, test, alt_weights, prior, tol))
    throw Error(ErrorCode::NotCertified, "certificate needs a certified triple");
  const std::vector<double> zq = checked_alt_mixture(problem, alt_weights);
  const std::vector<double> mix = mixture_values(problem.null_family(), prior.weights());
  const ReferenceMeasure& ref = problem.reference();
  const std::size_t n = problem.atom_count();

  CkCertificate cert{};
  cert.z_hat = prior.total_mass();
  cert.w_hat_defined = cert.z_hat > 0.0;

  double dual_value = alpha * cert.z_hat;
  double attained = 0.0;
  for (std::size_t a = 0; a < n; ++a) {
    const double w = ref.weight(a);
    dual_value += w * std::max(0.0, zq[a] - mix[a]);
    attained += w * zq[a] * test.value(a);
  }
  cert.identity_residual = std::abs(attained - dual_value);

  cert.membership_residual = 0.0;
  cert.membership_samples = 0;
  if (cert.w_hat_defined) {
    cert.w_hat.resize(n);
    for (std::size_t a = 0; a < n; ++a) cert.w_hat[a] = mix[a] / cert.z_hat;
    // E[phi w_hat] <= alpha must hold for every feasible test; sampled
    // over singletons, the upper set, the candidate, and the constant.
    std::vector<std::vector<double>> samples;
    for (std::size_t a = 0; a < n; ++a) {
      std::vector<double> indicator(n, 0.0);
      indicator[a] = 1.0;
      samples.push_back(std::move(indicator));
    }
    std::vector<double> upper(n, 0.0);
    for (std::size_t a = 0; a < n; ++a)
      if (zq[a] - mix[a] > tol * (1.0 + mix[a])) upper[a] = 1.0;
    samples.push_back(std::move(upper));
    samples.push_back(test.values());
    samples.push_back(std::vector<double>(n, alpha));
    for (std::vector<double>& candidate : samples) {
      bool feasible = true;
      for (std::size_t i = 0; i < problem.null_count() && feasible; ++i)
        if (expected_value(ref, problem.null_family().member(i).values(), candidate) >
            problem.alphas()[i] + 1e-12)
          feasible = false;
      if (!feasible) continue;
      ++cert.membership_samples;
      const double level = expected_value(ref, cert.w_hat, candidate);
      cert.membership_residual = std::max(cert.membership_residual, level - alpha);
    }
  }
  return cert;
}

}  // namespace npdual
