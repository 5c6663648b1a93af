#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "npdual/model.hpp"

namespace testsupport {

inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline std::vector<std::string> atom_labels(std::size_t n) {
  std::vector<std::string> labels;
  labels.reserve(n);
  for (std::size_t i = 0; i < n; ++i) labels.push_back("w" + std::to_string(i));
  return labels;
}

inline std::vector<double> random_weights(std::mt19937_64& rng, std::size_t n) {
  std::vector<double> w(n);
  double sum = 0.0;
  for (double& v : w) {
    v = 0.1 + uniform01(rng);
    sum += v;
  }
  for (double& v : w) v /= sum;
  return w;
}

inline std::vector<double> random_density(std::mt19937_64& rng,
                                          const std::vector<double>& reference) {
  std::vector<double> z(reference.size());
  double mean = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    z[i] = 0.05 + uniform01(rng);
    mean += reference[i] * z[i];
  }
  for (double& v : z) v /= mean;
  return z;
}

/// Random valid instance; sizes are uniform on [1, max]. Duplicate members
/// are vanishingly unlikely with continuous draws, but regeneration keeps
/// the generator total anyway.
inline npdual::TestingProblem random_problem(std::mt19937_64& rng,
                                             std::size_t max_atoms = 12,
                                             std::size_t max_family = 6) {
  static constexpr std::array<double, 4> kAlphaPool{0.05, 0.1, 0.25, 0.5};
  for (;;) {
    const std::size_t n = 1 + rng() % max_atoms;
    const std::size_t k = 1 + rng() % max_family;
    const std::size_t l = 1 + rng() % max_family;
    npdual::ProblemData data;
    data.atoms = atom_labels(n);
    data.reference_weights = random_weights(rng, n);
    for (std::size_t i = 0; i < k; ++i)
      data.null_densities.push_back(random_density(rng, data.reference_weights));
    for (std::size_t j = 0; j < l; ++j)
      data.alt_densities.push_back(random_density(rng, data.reference_weights));
    data.alphas = {kAlphaPool[rng() % kAlphaPool.size()]};
    try {
      return npdual::validate_problem(data);
    } catch (const npdual::Error&) {
      continue;
    }
  }
}

/// Random test in the box [0,1]^n (not necessarily size-feasible).
inline npdual::RandomizedTest random_test(std::mt19937_64& rng, std::size_t n) {
  std::vector<double> phi(n);
  for (double& v : phi) v = uniform01(rng);
  return npdual::RandomizedTest(std::move(phi));
}

inline npdual::TestingProblem instance_t1() {
  npdual::ProblemData data;
  data.atoms = {"w"};
  data.reference_weights = {1.0};
  data.null_densities = {{1.0}};
  data.alt_densities = {{1.0}};
  data.alphas = {0.3};
  return npdual::validate_problem(data);
}

inline npdual::TestingProblem instance_t2() {
  npdual::ProblemData data;
  data.atoms = {"w1", "w2"};
  data.reference_weights = {0.5, 0.5};
  data.null_densities = {{2.0, 0.0}};
  data.alt_densities = {{0.0, 2.0}};
  data.alphas = {0.1};
  return npdual::validate_problem(data);
}

inline npdual::TestingProblem instance_d1() {
  npdual::ProblemData data;
  data.atoms = {"a", "b", "c"};
  data.reference_weights = {1.0 / 3, 1.0 / 3, 1.0 / 3};
  data.null_densities = {{1.5, 0.9, 0.6}};
  data.alt_densities = {{0.6, 0.9, 1.5}};
  data.alphas = {0.3};
  return npdual::validate_problem(data);
}

/// Symmetric two-alternative instance: optimum splits the level evenly.
inline npdual::TestingProblem instance_two_alt() {
  npdual::ProblemData data;
  data.atoms = {"a", "b"};
  data.reference_weights = {0.5, 0.5};
  data.null_densities = {{1.0, 1.0}};
  data.alt_densities = {{2.0, 0.0}, {0.0, 2.0}};
  data.alphas = {0.25};
  return npdual::validate_problem(data);
}

}  // namespace testsupport
