#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "npdual/simplex.hpp"
#include "support.hpp"

using namespace npdual;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_optimal(const LinearProgram& lp, const LpSolution& sol) {
  REQUIRE(sol.status == LpStatus::Optimal);
  LpResiduals res = compute_residuals(lp, sol);
  CHECK(res.primal <= 1e-8);
  CHECK(res.dual <= 1e-8);
  CHECK(res.complementary <= 1e-8);
  CHECK(res.duality_gap <= 1e-8);
  for (std::size_t i = 0; i < lp.row_count(); ++i) {
    double slack = lp.rhs[i];
    for (std::size_t j = 0; j < lp.var_count(); ++j)
      slack -= lp.rows[i][j] * sol.primal[j];
    CHECK(std::abs(sol.row_duals[i] * slack) <= 1e-8);
  }
}

}  // namespace

TEST_CASE("single bounded variable") {
  LinearProgram lp;
  lp.objective = {1.0};
  lp.add_row({1.0}, RowSense::LessEqual, 1.0);
  LpSolution sol = solve_lp(lp);
  check_optimal(lp, sol);
  CHECK(sol.primal[0] == doctest::Approx(1.0));
  CHECK(sol.objective == doctest::Approx(1.0));
  CHECK(sol.row_duals[0] == doctest::Approx(1.0));
}

TEST_CASE("degenerate optimal face reports a vertex on it") {
  LinearProgram lp;
  lp.objective = {1.0, 1.0};
  lp.add_row({1.0, 1.0}, RowSense::LessEqual, 1.0);
  LpSolution sol = solve_lp(lp);
  check_optimal(lp, sol);
  CHECK(sol.objective == doctest::Approx(1.0));
  CHECK(sol.primal[0] + sol.primal[1] == doctest::Approx(1.0));
}

TEST_CASE("free variable below with a single cap") {
  LinearProgram lp;
  lp.objective = {1.0};
  lp.lower = {-kInf};
  lp.add_row({1.0}, RowSense::LessEqual, 0.6);
  LpSolution sol = solve_lp(lp);
  check_optimal(lp, sol);
  CHECK(sol.objective == doctest::Approx(0.6));
  CHECK(sol.row_duals[0] == doctest::Approx(1.0));
}

TEST_CASE("equality row with minimization") {
  LinearProgram lp;
  lp.sense = ObjectiveSense::Minimize;
  lp.objective = {1.0, 2.0};
  lp.add_row({1.0, 1.0}, RowSense::Equal, 1.0);
  LpSolution sol = solve_lp(lp);
  check_optimal(lp, sol);
  CHECK(sol.objective == doctest::Approx(1.0));
  CHECK(sol.primal[0] == doctest::Approx(1.0));
  CHECK(sol.primal[1] == doctest::Approx(0.0));
}

TEST_CASE("two-sided variable bounds") {
  LinearProgram lp;
  lp.objective = {3.0, -1.0};
  lp.lower = {0.0, -2.0};
  lp.upper = {2.0, 1.0};
  lp.add_row({1.0, 1.0}, RowSense::LessEqual, 10.0);
  LpSolution sol = solve_lp(lp);
  check_optimal(lp, sol);
  CHECK(sol.primal[0] == doctest::Approx(2.0));
  CHECK(sol.primal[1] == doctest::Approx(-2.0));
  CHECK(sol.objective == doctest::Approx(8.0));
  CHECK(sol.reduced_costs[0] >= -1e-9);  // at upper bound, maximize
  CHECK(sol.reduced_costs[1] <= 1e-9);   // at lower bound
}

TEST_CASE("greater-equal rows carry nonpositive duals when maximizing") {
  LinearProgram lp;
  lp.sense = ObjectiveSense::Maximize;
  lp.objective = {-1.0};
  lp.add_row({1.0}, RowSense::GreaterEqual, 2.0);
  LpSolution sol = solve_lp(lp);
  check_optimal(lp, sol);
  CHECK(sol.primal[0] == doctest::Approx(2.0));
  CHECK(sol.row_duals[0] <= 1e-12);
  CHECK(sol.row_duals[0] == doctest::Approx(-1.0));
}

TEST_CASE("Beale cycling instance terminates at the known optimum") {
  LinearProgram lp;
  lp.sense = ObjectiveSense::Minimize;
  lp.objective = {-0.75, 150.0, -0.02, 6.0};
  lp.add_row({0.25, -60.0, -1.0 / 25, 9.0}, RowSense::LessEqual, 0.0);
  lp.add_row({0.5, -90.0, -1.0 / 50, 3.0}, RowSense::LessEqual, 0.0);
  lp.add_row({0.0, 0.0, 1.0, 0.0}, RowSense::LessEqual, 1.0);
  LpSolution sol = solve_lp(lp);
  check_optimal(lp, sol);
  CHECK(sol.objective == doctest::Approx(-0.05));
}

TEST_CASE("infeasible system produces a separating witness") {
  LinearProgram lp;
  lp.objective = {1.0};
  lp.add_row({1.0}, RowSense::GreaterEqual, 2.0);
  lp.add_row({1.0}, RowSense::LessEqual, 1.0);
  LpSolution sol = solve_lp(lp);
  REQUIRE(sol.status == LpStatus::Infeasible);
  REQUIRE(sol.witness.size() == 2);
  CHECK(sol.witness[0] <= 1e-9);  // >= row
  CHECK(sol.witness[1] >= -1e-9);
  double combo = sol.witness[0] * 1.0 + sol.witness[1] * 1.0;
  CHECK(combo >= -1e-9);  // aggregated coefficient vs x >= 0
  double value = sol.witness[0] * 2.0 + sol.witness[1] * 1.0;
  CHECK(value < -1e-9);  // aggregated rhs refutes feasibility
}

TEST_CASE("negative rhs against a nonnegative variable is infeasible") {
  LinearProgram lp;
  lp.objective = {1.0};
  lp.add_row({1.0}, RowSense::LessEqual, -1.0);
  LpSolution sol = solve_lp(lp);
  REQUIRE(sol.status == LpStatus::Infeasible);
  CHECK(sol.witness[0] > 1e-9);
  CHECK(sol.witness[0] * -1.0 < -1e-9);
}

TEST_CASE("unbounded objective yields an improving ray") {
  LinearProgram lp;
  lp.objective = {1.0, 2.0};
  lp.add_row({1.0, -1.0}, RowSense::LessEqual, 1.0);
  LpSolution sol = solve_lp(lp);
  REQUIRE(sol.status == LpStatus::Unbounded);
  REQUIRE(sol.witness.size() == 2);
  const std::vector<double>& d = sol.witness;
  CHECK(lp.objective[0] * d[0] + lp.objective[1] * d[1] > 1e-9);
  CHECK(lp.rows[0][0] * d[0] + lp.rows[0][1] * d[1] <= 1e-9);
  CHECK(d[0] >= -1e-9);
  CHECK(d[1] >= -1e-9);
}

TEST_CASE("objective invariant under row permutation and positive scaling") {
  std::mt19937_64 rng(11);
  for (int iter = 0; iter < 25; ++iter) {
    const std::size_t n = 2 + rng() % 4;
    const std::size_t m = 1 + rng() % 4;
    LinearProgram lp;
    lp.objective.resize(n);
    for (double& c : lp.objective) c = testsupport::uniform01(rng) * 2.0 - 0.5;
    for (std::size_t i = 0; i < m; ++i) {
      std::vector<double> row(n);
      for (double& v : row) v = testsupport::uniform01(rng) * 2.0 - 0.5;
      lp.add_row(std::move(row), RowSense::LessEqual,
                 0.5 + testsupport::uniform01(rng));
    }
    LpSolution base = solve_lp(lp);
    if (base.status != LpStatus::Optimal) continue;

    LinearProgram shuffled = lp;
    std::vector<std::size_t> perm(m);
    for (std::size_t i = 0; i < m; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    for (std::size_t i = 0; i < m; ++i) {
      const double scale = 0.5 + testsupport::uniform01(rng);
      shuffled.rows[i] = lp.rows[perm[i]];
      for (double& v : shuffled.rows[i]) v *= scale;
      shuffled.senses[i] = lp.senses[perm[i]];
      shuffled.rhs[i] = lp.rhs[perm[i]] * scale;
    }
    LpSolution moved = solve_lp(shuffled);
    REQUIRE(moved.status == LpStatus::Optimal);
    CHECK(moved.objective == doctest::Approx(base.objective).epsilon(1e-8));
  }
}

TEST_CASE("resolving is bit-identical") {
  std::mt19937_64 rng(23);
  LinearProgram lp;
  lp.objective = {0.3, 1.1, -0.2, 0.7};
  for (int i = 0; i < 5; ++i) {
    std::vector<double> row(4);
    for (double& v : row) v = testsupport::uniform01(rng) * 2.0 - 0.8;
    lp.add_row(std::move(row), i % 2 ? RowSense::LessEqual : RowSense::GreaterEqual,
               i % 2 ? 1.0 : -0.5);
  }
  LpSolution a = solve_lp(lp);
  LpSolution b = solve_lp(lp);
  REQUIRE(a.status == b.status);
  CHECK(a.objective == b.objective);
  CHECK(a.iterations == b.iterations);
  for (std::size_t j = 0; j < a.primal.size(); ++j) CHECK(a.primal[j] == b.primal[j]);
  for (std::size_t i = 0; i < a.row_duals.size(); ++i)
    CHECK(a.row_duals[i] == b.row_duals[i]);
}

TEST_CASE("dimension mismatches are rejected") {
  LinearProgram lp;
  lp.objective = {1.0, 1.0};
  lp.add_row({1.0}, RowSense::LessEqual, 1.0);
  CHECK_THROWS_AS(solve_lp(lp), Error);

  LinearProgram bad_bounds;
  bad_bounds.objective = {1.0};
  bad_bounds.lower = {2.0};
  bad_bounds.upper = {1.0};
  CHECK_THROWS_AS(solve_lp(bad_bounds), Error);
}
