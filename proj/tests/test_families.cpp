#include <doctest.h>

#include <cmath>

#include "npdual/certify.hpp"
#include "npdual/families.hpp"
#include "npdual/npsolver.hpp"

using namespace npdual;

namespace {

std::vector<double> linspace(double lo, double hi, std::size_t count) {
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i)
    out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  return out;
}

}  // namespace

TEST_CASE("spec validation rejects malformed grids") {
  GaussianXbarSpec spec;
  spec.side = 1;
  spec.n = 4;
  spec.xi1 = 0.0;
  spec.sigma1_sq = 1.0;
  spec.sigma0_sq = 2.0;
  spec.xi_grid = {0.0};
  spec.sigma_sq_grid = {2.0};
  spec.x_grid = linspace(-4.0, 4.0, 20);

  GaussianXbarSpec bad = spec;
  bad.side = 3;
  CHECK_THROWS_AS(gaussian_xbar_problem(bad, 0.1), Error);

  bad = spec;
  bad.sigma_sq_grid = {2.0, 2.0};
  CHECK_THROWS_AS(gaussian_xbar_problem(bad, 0.1), Error);

  bad = spec;
  bad.sigma_sq_grid = {1.0};  // below the boundary for side 1
  CHECK_THROWS_AS(gaussian_xbar_problem(bad, 0.1), Error);

  bad = spec;
  bad.sigma1_sq = -1.0;
  CHECK_THROWS_AS(gaussian_xbar_problem(bad, 0.1), Error);

  bad = spec;
  bad.x_grid = {0.0};
  CHECK_THROWS_AS(gaussian_xbar_problem(bad, 0.1), Error);
}

TEST_CASE("a grid that swallows the mass in one bin is refused") {
  GaussianXbarSpec spec;
  spec.side = 1;
  spec.n = 1;
  spec.xi1 = 0.0;
  spec.sigma1_sq = 1.0;
  spec.sigma0_sq = 1.0;
  spec.xi_grid = {0.0};
  spec.sigma_sq_grid = {1.0};
  spec.x_grid = {-10.0, 10.0, 11.0};
  CHECK_THROWS_WITH_AS(gaussian_xbar_problem(spec, 0.1),
                       doctest::Contains("GridTooCoarse"), Error);
}

TEST_CASE("null equal to alternative solves at the level") {
  GaussianXbarSpec spec;
  spec.side = 1;
  spec.n = 2;
  spec.xi1 = 0.0;
  spec.sigma1_sq = 1.5;
  spec.sigma0_sq = 1.5;
  spec.xi_grid = {0.0};
  spec.sigma_sq_grid = {1.5};
  spec.x_grid = linspace(-4.0, 4.0, 30);
  GaussianProblem gp = gaussian_xbar_problem(spec, 0.1);
  REQUIRE(gp.problem.null_count() == 1);
  SolveReport r = solve_maxmin(gp.problem);
  CHECK(r.lower_value == doctest::Approx(0.1));
  CHECK(r.gap <= 1e-7);

  LfpReport report = lfp_report(gp, r);
  CHECK(report.prior_mass_at_boundary_sigma == doctest::Approx(1.0));
  CHECK(report.prior_mode_xi == doctest::Approx(0.0));
}

TEST_CASE("member layout is sigma-major with matching labels") {
  GaussianXbarSpec spec;
  spec.side = 1;
  spec.n = 2;
  spec.xi1 = 0.0;
  spec.sigma1_sq = 1.0;
  spec.sigma0_sq = 2.0;
  spec.xi_grid = {-1.0, 1.0};
  spec.sigma_sq_grid = {2.0, 3.0};
  spec.x_grid = linspace(-5.0, 5.0, 40);
  GaussianProblem gp = gaussian_xbar_problem(spec, 0.1);
  REQUIRE(gp.member_params.size() == 4);
  CHECK(gp.member_params[0] == std::pair<double, double>{-1.0, 2.0});
  CHECK(gp.member_params[1] == std::pair<double, double>{1.0, 2.0});
  CHECK(gp.member_params[2] == std::pair<double, double>{-1.0, 3.0});
  CHECK(gp.member_params[3] == std::pair<double, double>{1.0, 3.0});
  CHECK(gp.problem.null_count() == 4);
  CHECK(gp.problem.alt_count() == 1);
  CHECK(gp.problem.atom_count() == 39);
}

TEST_CASE("a small variance-test family certifies end to end") {
  GaussianXbarSpec spec;
  spec.side = 1;
  spec.n = 4;
  spec.xi1 = 0.0;
  spec.sigma1_sq = 1.0;
  spec.sigma0_sq = 2.0;
  spec.xi_grid = {-1.0, 0.0, 1.0};
  spec.sigma_sq_grid = {2.0, 3.0};
  spec.x_grid = linspace(-4.0, 4.0, 40);
  GaussianProblem gp = gaussian_xbar_problem(spec, 0.1);
  SolveReport r = solve_maxmin(gp.problem);
  CHECK(r.gap <= 1e-7);
  CHECK(certified_optimal(gp.problem, r.primal.test, r.dual.alt_weights,
                          r.dual.prior));
  LfpReport report = lfp_report(gp, r);
  CHECK(report.prior_mass_at_boundary_sigma >= 0.0);
  CHECK(report.prior_mass_at_boundary_sigma <= 1.0 + 1e-12);
  CHECK_FALSE(report.xi_marginal_distance.has_value());  // sigma1 < sigma0
}

TEST_CASE("presets match their published shapes") {
  GaussianXbarSpec c1 = gaussian_case1_preset();
  CHECK(c1.side == 1);
  CHECK(c1.n == 4);
  CHECK(c1.xi1 == 0.0);
  CHECK(c1.sigma1_sq == doctest::Approx(1.0));
  CHECK(c1.sigma0_sq == doctest::Approx(2.0));
  CHECK(c1.xi_grid.size() == 21);
  CHECK(c1.sigma_sq_grid == std::vector<double>{2.0, 3.0, 4.0});
  CHECK(c1.x_grid.size() == 82);

  GaussianXbarSpec c2 = gaussian_case2_preset();
  CHECK(c2.side == 2);
  CHECK(c2.sigma1_sq == doctest::Approx(2.0));
  CHECK(c2.sigma0_sq == doctest::Approx(1.0));
  CHECK(c2.sigma_sq_grid.back() == doctest::Approx(1.0));
  CHECK(c2.xi_grid.size() == 21);
}

TEST_CASE("refinement interleaves midpoints and keeps endpoints") {
  GaussianXbarSpec spec = gaussian_case1_preset();
  GaussianXbarSpec fine = refine_spec(spec, true, true);
  CHECK(fine.xi_grid.size() == 2 * spec.xi_grid.size() - 1);
  CHECK(fine.x_grid.size() == 2 * spec.x_grid.size() - 1);
  CHECK(fine.xi_grid.front() == doctest::Approx(spec.xi_grid.front()));
  CHECK(fine.xi_grid.back() == doctest::Approx(spec.xi_grid.back()));
  CHECK(fine.sigma_sq_grid == spec.sigma_sq_grid);

  GaussianXbarSpec xonly = refine_spec(spec, false, true);
  CHECK(xonly.xi_grid.size() == spec.xi_grid.size());
  CHECK(xonly.x_grid.size() == 2 * spec.x_grid.size() - 1);
}

TEST_CASE("lfp report rejects a prior of the wrong arity") {
  GaussianXbarSpec spec;
  spec.side = 1;
  spec.n = 1;
  spec.xi1 = 0.0;
  spec.sigma1_sq = 1.0;
  spec.sigma0_sq = 1.0;
  spec.xi_grid = {-0.5, 0.5};
  spec.sigma_sq_grid = {1.0};
  spec.x_grid = linspace(-4.0, 4.0, 25);
  GaussianProblem gp = gaussian_xbar_problem(spec, 0.1);
  SolveReport r = solve_maxmin(gp.problem);
  r.dual.prior = Prior({1.0});  // wrong size on purpose
  CHECK_THROWS_WITH_AS(lfp_report(gp, r), doctest::Contains("NotSolved"), Error);
}
