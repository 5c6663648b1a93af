#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "npdual/errors.hpp"

namespace npdual {

/// Finite sample space with a strictly positive reference probability
/// weight on every atom. Weights are renormalized to sum to 1 exactly.
class ReferenceMeasure {
 public:
  ReferenceMeasure(std::vector<std::string> labels, std::vector<double> weights);

  std::size_t atom_count() const { return weights_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<double>& weights() const { return weights_; }
  double weight(std::size_t atom) const { return weights_[atom]; }

 private:
  std::vector<std::string> labels_;
  std::vector<double> weights_;
};

/// Nonnegative density with unit expectation under the reference measure.
/// Values are renormalized exactly after validation, so downstream sums
/// can rely on E[Z] = 1 up to roundoff of a single division.
class Density {
 public:
  Density(const ReferenceMeasure& reference, std::vector<double> values,
          const std::string& where = "density");

  std::size_t size() const { return values_.size(); }
  const std::vector<double>& values() const { return values_; }
  double value(std::size_t atom) const { return values_[atom]; }

 private:
  std::vector<double> values_;
};

enum class FamilyRole { Null, Alternative };

/// Nonempty finite family of densities with a role tag. Members must be
/// pairwise distinct (max-norm gap > 1e-12).
class HypothesisFamily {
 public:
  HypothesisFamily(FamilyRole role, std::vector<Density> members,
                   const std::string& where = "family");

  FamilyRole role() const { return role_; }
  std::size_t size() const { return members_.size(); }
  const Density& member(std::size_t i) const { return members_[i]; }
  const std::vector<Density>& members() const { return members_; }

 private:
  FamilyRole role_;
  std::vector<Density> members_;
};

/// Randomized test: per-atom rejection probability in [0, 1].
class RandomizedTest {
 public:
  explicit RandomizedTest(std::vector<double> values);
  static RandomizedTest constant(std::size_t atoms, double level);

  std::size_t size() const { return values_.size(); }
  const std::vector<double>& values() const { return values_; }
  double value(std::size_t atom) const { return values_[atom]; }

 private:
  std::vector<double> values_;
};

/// Nonnegative weights over null-family members; not necessarily a
/// probability vector (the total mass is an output of the dual problem).
class Prior {
 public:
  explicit Prior(std::vector<double> weights);

  std::size_t size() const { return weights_.size(); }
  const std::vector<double>& weights() const { return weights_; }
  double weight(std::size_t i) const { return weights_[i]; }
  double total_mass() const { return total_mass_; }

 private:
  std::vector<double> weights_;
  double total_mass_;
};

/// Composite-vs-composite testing problem at per-member significance
/// levels alpha_i in (0, 1).
class TestingProblem {
 public:
  TestingProblem(ReferenceMeasure reference, HypothesisFamily null_family,
                 HypothesisFamily alt_family, double alpha);
  TestingProblem(ReferenceMeasure reference, HypothesisFamily null_family,
                 HypothesisFamily alt_family, std::vector<double> alphas);

  std::size_t atom_count() const { return reference_.atom_count(); }
  std::size_t null_count() const { return null_family_.size(); }
  std::size_t alt_count() const { return alt_family_.size(); }

  const ReferenceMeasure& reference() const { return reference_; }
  const HypothesisFamily& null_family() const { return null_family_; }
  const HypothesisFamily& alt_family() const { return alt_family_; }

  /// One entry per null member.
  const std::vector<double>& alphas() const { return alphas_; }
  bool scalar_alpha() const { return scalar_alpha_; }
  /// Common level; throws ScalarAlphaRequired when levels differ.
  double alpha() const;

 private:
  ReferenceMeasure reference_;
  HypothesisFamily null_family_;
  HypothesisFamily alt_family_;
  std::vector<double> alphas_;
  bool scalar_alpha_;
};

/// Raw ingestion form prior to validation (mirrors the JSON problem file).
struct ProblemData {
  std::vector<std::string> atoms;
  std::vector<double> reference_weights;
  std::vector<std::vector<double>> null_densities;
  std::vector<std::vector<double>> alt_densities;
  std::vector<double> alphas;  // size 1 (scalar) or one per null member
};

/// Validates every invariant and returns the constructed problem.
/// Error messages name the offending field and index.
TestingProblem validate_problem(const ProblemData& data);

struct SizeResult {
  std::vector<double> per_member;
  double worst;  // max over null members
};

struct PowerResult {
  std::vector<double> per_member;
  double worst;  // min over alternative members
};

SizeResult evaluate_size(const TestingProblem& problem, const RandomizedTest& test);
PowerResult evaluate_power(const TestingProblem& problem, const RandomizedTest& test);

struct MixtureResult {
  std::vector<double> values;  // sum_i prior_i * Z_i per atom
  double total_mass;
  std::optional<Density> normalized;  // present iff total_mass > 0
};

MixtureResult mixture_density(const ReferenceMeasure& reference,
                              const HypothesisFamily& family, const Prior& prior);

double expected_value(const ReferenceMeasure& reference,
                      std::span<const double> density,
                      std::span<const double> test);
double expected_value(const ReferenceMeasure& reference, const Density& density,
                      const RandomizedTest& test);

}  // namespace npdual
