#include "npdual/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace npdual {
namespace {

constexpr double kMeasureSumTol = 1e-12;
constexpr double kDensityMeanTol = 1e-9;
constexpr double kDuplicateGap = 1e-12;

std::string indexed(const std::string& field, std::size_t i) {
  std::ostringstream out;
  out << field << "[" << i << "]";
  return out.str();
}

void require_finite(double v, const std::string& where) {
  if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, where + " is not finite");
}

}  // namespace

ReferenceMeasure::ReferenceMeasure(std::vector<std::string> labels,
                                   std::vector<double> weights)
    : labels_(std::move(labels)), weights_(std::move(weights)) {
  if (weights_.empty())
    throw Error(ErrorCode::InvalidArgument, "reference measure has no atoms");
  if (labels_.size() != weights_.size())
    throw Error(ErrorCode::DimensionMismatch,
                "atom labels (" + std::to_string(labels_.size()) +
                    ") vs weights (" + std::to_string(weights_.size()) + ")");
  double sum = 0.0;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    require_finite(weights_[i], indexed("R", i));
    if (weights_[i] <= 0.0)
      throw Error(ErrorCode::NonpositiveWeight,
                  indexed("R", i) + " = " + std::to_string(weights_[i]));
    sum += weights_[i];
  }
  if (std::abs(sum - 1.0) > kMeasureSumTol)
    throw Error(ErrorCode::UnnormalizedMeasure,
                "R sums to " + std::to_string(sum));
  for (double& w : weights_) w /= sum;
}

Density::Density(const ReferenceMeasure& reference, std::vector<double> values,
                 const std::string& where)
    : values_(std::move(values)) {
  if (values_.size() != reference.atom_count())
    throw Error(ErrorCode::DimensionMismatch,
                where + " has " + std::to_string(values_.size()) +
                    " entries for " + std::to_string(reference.atom_count()) +
                    " atoms");
  double mean = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    require_finite(values_[i], indexed(where, i));
    if (values_[i] < 0.0)
      throw Error(ErrorCode::NegativeDensity,
                  indexed(where, i) + " = " + std::to_string(values_[i]));
    mean += reference.weight(i) * values_[i];
  }
  if (std::abs(mean - 1.0) > kDensityMeanTol) {
    std::ostringstream out;
    out << where << ": expectation under R is " << mean;
    throw Error(ErrorCode::UnnormalizedDensity, out.str());
  }
  for (double& v : values_) v /= mean;
}

HypothesisFamily::HypothesisFamily(FamilyRole role, std::vector<Density> members,
                                   const std::string& where)
    : role_(role), members_(std::move(members)) {
  if (members_.empty()) throw Error(ErrorCode::EmptyFamily, where);
  for (std::size_t i = 1; i < members_.size(); ++i) {
    if (members_[i].size() != members_[0].size())
      throw Error(ErrorCode::DimensionMismatch,
                  indexed(where, i) + " length differs from " + indexed(where, 0));
    for (std::size_t j = 0; j < i; ++j) {
      double gap = 0.0;
      for (std::size_t a = 0; a < members_[i].size(); ++a)
        gap = std::max(gap, std::abs(members_[i].value(a) - members_[j].value(a)));
      if (gap <= kDuplicateGap)
        throw Error(ErrorCode::DuplicateMember,
                    indexed(where, i) + " duplicates " + indexed(where, j));
    }
  }
}

RandomizedTest::RandomizedTest(std::vector<double> values)
    : values_(std::move(values)) {
  if (values_.empty())
    throw Error(ErrorCode::InvalidArgument, "test has no atoms");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    require_finite(values_[i], indexed("test", i));
    if (values_[i] < 0.0 || values_[i] > 1.0)
      throw Error(ErrorCode::InvalidTestValue,
                  indexed("test", i) + " = " + std::to_string(values_[i]));
  }
}

RandomizedTest RandomizedTest::constant(std::size_t atoms, double level) {
  return RandomizedTest(std::vector<double>(atoms, level));
}

Prior::Prior(std::vector<double> weights) : weights_(std::move(weights)) {
  if (weights_.empty())
    throw Error(ErrorCode::InvalidArgument, "prior has no members");
  total_mass_ = 0.0;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    require_finite(weights_[i], indexed("prior", i));
    if (weights_[i] < 0.0)
      throw Error(ErrorCode::NonpositiveWeight,
                  indexed("prior", i) + " = " + std::to_string(weights_[i]));
    total_mass_ += weights_[i];
  }
}

namespace {

std::vector<double> checked_alphas(std::vector<double> alphas, std::size_t nulls) {
  if (alphas.size() == 1 && nulls > 1) alphas.assign(nulls, alphas[0]);
  if (alphas.size() != nulls)
    throw Error(ErrorCode::DimensionMismatch,
                "alpha has " + std::to_string(alphas.size()) + " entries for " +
                    std::to_string(nulls) + " null members");
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    require_finite(alphas[i], indexed("alpha", i));
    if (alphas[i] <= 0.0 || alphas[i] >= 1.0)
      throw Error(ErrorCode::AlphaOutOfRange,
                  indexed("alpha", i) + " = " + std::to_string(alphas[i]) +
                      " (must lie strictly inside (0, 1))");
  }
  return alphas;
}

bool all_equal(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [&](double x) { return x == v[0]; });
}

void check_roles(const HypothesisFamily& null_family,
                 const HypothesisFamily& alt_family,
                 const ReferenceMeasure& reference) {
  if (null_family.role() != FamilyRole::Null)
    throw Error(ErrorCode::InvalidArgument, "null slot holds a non-null family");
  if (alt_family.role() != FamilyRole::Alternative)
    throw Error(ErrorCode::InvalidArgument,
                "alternative slot holds a non-alternative family");
  if (null_family.member(0).size() != reference.atom_count())
    throw Error(ErrorCode::DimensionMismatch, "null family vs atom count");
  if (alt_family.member(0).size() != reference.atom_count())
    throw Error(ErrorCode::DimensionMismatch, "alternative family vs atom count");
}

}  // namespace

TestingProblem::TestingProblem(ReferenceMeasure reference,
                               HypothesisFamily null_family,
                               HypothesisFamily alt_family, double alpha)
    : reference_(std::move(reference)),
      null_family_(std::move(null_family)),
      alt_family_(std::move(alt_family)),
      alphas_(checked_alphas({alpha}, null_family_.size())),
      scalar_alpha_(true) {
  check_roles(null_family_, alt_family_, reference_);
}

TestingProblem::TestingProblem(ReferenceMeasure reference,
                               HypothesisFamily null_family,
                               HypothesisFamily alt_family,
                               std::vector<double> alphas)
    : reference_(std::move(reference)),
      null_family_(std::move(null_family)),
      alt_family_(std::move(alt_family)),
      alphas_(checked_alphas(std::move(alphas), null_family_.size())),
      scalar_alpha_(all_equal(alphas_)) {
  check_roles(null_family_, alt_family_, reference_);
}

double TestingProblem::alpha() const {
  if (!scalar_alpha_)
    throw Error(ErrorCode::ScalarAlphaRequired,
                "per-member levels differ; no common alpha");
  return alphas_[0];
}

TestingProblem validate_problem(const ProblemData& data) {
  ReferenceMeasure reference(data.atoms, data.reference_weights);
  std::vector<Density> nulls;
  nulls.reserve(data.null_densities.size());
  if (data.null_densities.empty()) throw Error(ErrorCode::EmptyFamily, "null");
  if (data.alt_densities.empty()) throw Error(ErrorCode::EmptyFamily, "alt");
  for (std::size_t i = 0; i < data.null_densities.size(); ++i)
    nulls.emplace_back(reference, data.null_densities[i], indexed("null", i));
  std::vector<Density> alts;
  alts.reserve(data.alt_densities.size());
  for (std::size_t i = 0; i < data.alt_densities.size(); ++i)
    alts.emplace_back(reference, data.alt_densities[i], indexed("alt", i));
  HypothesisFamily null_family(FamilyRole::Null, std::move(nulls), "null");
  HypothesisFamily alt_family(FamilyRole::Alternative, std::move(alts), "alt");
  if (data.alphas.empty())
    throw Error(ErrorCode::DimensionMismatch, "alpha is empty");
  return TestingProblem(std::move(reference), std::move(null_family),
                        std::move(alt_family), data.alphas);
}

double expected_value(const ReferenceMeasure& reference,
                      std::span<const double> density,
                      std::span<const double> test) {
  double sum = 0.0;
  for (std::size_t i = 0; i < reference.atom_count(); ++i)
    sum += reference.weight(i) * density[i] * test[i];
  return sum;
}

double expected_value(const ReferenceMeasure& reference, const Density& density,
                      const RandomizedTest& test) {
  return expected_value(reference, density.values(), test.values());
}

SizeResult evaluate_size(const TestingProblem& problem, const RandomizedTest& test) {
  if (test.size() != problem.atom_count())
    throw Error(ErrorCode::DimensionMismatch,
                "test has " + std::to_string(test.size()) + " entries for " +
                    std::to_string(problem.atom_count()) + " atoms");
  SizeResult result;
  result.per_member.reserve(problem.null_count());
  for (const Density& z : problem.null_family().members())
    result.per_member.push_back(expected_value(problem.reference(), z, test));
  result.worst = *std::max_element(result.per_member.begin(), result.per_member.end());
  return result;
}

PowerResult evaluate_power(const TestingProblem& problem, const RandomizedTest& test) {
  if (test.size() != problem.atom_count())
    throw Error(ErrorCode::DimensionMismatch,
                "test has " + std::to_string(test.size()) + " entries for " +
                    std::to_string(problem.atom_count()) + " atoms");
  PowerResult result;
  result.per_member.reserve(problem.alt_count());
  for (const Density& z : problem.alt_family().members())
    result.per_member.push_back(expected_value(problem.reference(), z, test));
  result.worst = *std::min_element(result.per_member.begin(), result.per_member.end());
  return result;
}

MixtureResult mixture_density(const ReferenceMeasure& reference,
                              const HypothesisFamily& family, const Prior& prior) {
  if (prior.size() != family.size())
    throw Error(ErrorCode::DimensionMismatch,
                "prior has " + std::to_string(prior.size()) + " weights for " +
                    std::to_string(family.size()) + " members");
  MixtureResult result;
  result.values.assign(family.member(0).size(), 0.0);
  for (std::size_t i = 0; i < family.size(); ++i) {
    double w = prior.weight(i);
    if (w == 0.0) continue;
    const std::vector<double>& z = family.member(i).values();
    for (std::size_t a = 0; a < z.size(); ++a) result.values[a] += w * z[a];
  }
  result.total_mass = prior.total_mass();
  if (result.total_mass > 0.0) {
    std::vector<double> normalized(result.values);
    for (double& v : normalized) v /= result.total_mass;
    result.normalized.emplace(reference, std::move(normalized), "mixture");
  }
  return result;
}

}  // namespace npdual
