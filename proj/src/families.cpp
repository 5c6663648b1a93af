#include "npdual/families.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

namespace npdual {
namespace {

double normal_pdf(double x, double mean, double variance) {
  const double d = x - mean;
  return std::exp(-0.5 * d * d / variance) / std::sqrt(2.0 * M_PI * variance);
}

void check_grid(const std::vector<double>& grid, const char* name,
                std::size_t min_size) {
  if (grid.size() < min_size)
    throw Error(ErrorCode::InvalidArgument,
                std::string(name) + " needs at least " + std::to_string(min_size) +
                    " points");
  for (std::size_t i = 0; i + 1 < grid.size(); ++i)
    if (!(grid[i] < grid[i + 1]))
      throw Error(ErrorCode::InvalidArgument,
                  std::string(name) + "[" + std::to_string(i + 1) +
                      "] does not increase");
  for (double v : grid)
    if (!std::isfinite(v))
      throw Error(ErrorCode::InvalidArgument,
                  std::string(name) + " has a non-finite entry");
}

void validate_spec(const GaussianXbarSpec& spec) {
  if (spec.side != 1 && spec.side != 2)
    throw Error(ErrorCode::InvalidArgument,
                "side = " + std::to_string(spec.side) + " (must be 1 or 2)");
  if (spec.n < 1)
    throw Error(ErrorCode::InvalidArgument, "n = " + std::to_string(spec.n));
  if (!(spec.sigma1_sq > 0.0) || !(spec.sigma0_sq > 0.0))
    throw Error(ErrorCode::InvalidArgument, "variances must be positive");
  if (!std::isfinite(spec.xi1))
    throw Error(ErrorCode::InvalidArgument, "xi1 is not finite");
  check_grid(spec.xi_grid, "xi_grid", 1);
  check_grid(spec.sigma_sq_grid, "sigma_sq_grid", 1);
  check_grid(spec.x_grid, "x_grid", 2);
  for (double s : spec.sigma_sq_grid) {
    if (!(s > 0.0))
      throw Error(ErrorCode::InvalidArgument, "sigma_sq_grid has a nonpositive entry");
    const double slack = 1e-12 * std::max(1.0, spec.sigma0_sq);
    if (spec.side == 1 && s < spec.sigma0_sq - slack)
      throw Error(ErrorCode::InvalidArgument,
                  "side 1 requires every null variance at or above sigma0_sq");
    if (spec.side == 2 && s > spec.sigma0_sq + slack)
      throw Error(ErrorCode::InvalidArgument,
                  "side 2 requires every null variance at or below sigma0_sq");
  }
}

/// Midpoint-rule bin probabilities of N(mean, variance/n), renormalized.
std::vector<double> binned(const GaussianXbarSpec& spec, double mean,
                           double variance, const char* who) {
  const double var = variance / static_cast<double>(spec.n);
  const std::size_t bins = spec.x_grid.size() - 1;
  std::vector<double> p(bins);
  double total = 0.0;
  for (std::size_t b = 0; b < bins; ++b) {
    const double width = spec.x_grid[b + 1] - spec.x_grid[b];
    const double mid = 0.5 * (spec.x_grid[b] + spec.x_grid[b + 1]);
    p[b] = normal_pdf(mid, mean, var) * width;
    total += p[b];
  }
  if (!(total > 0.0))
    throw Error(ErrorCode::GridTooCoarse,
                std::string(who) + ": no mass lands on the x grid");
  double biggest = 0.0;
  for (double& v : p) {
    v /= total;
    biggest = std::max(biggest, v);
  }
  if (biggest > 0.5)
    throw Error(ErrorCode::GridTooCoarse,
                std::string(who) + " puts " + std::to_string(biggest) +
                    " of its mass in one bin");
  return p;
}

std::string bin_label(double midpoint) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "x=%.10g", midpoint);
  return buf;
}

std::vector<double> refined_grid(const std::vector<double>& grid) {
  if (grid.size() < 2) return grid;
  std::vector<double> out;
  out.reserve(grid.size() * 2 - 1);
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    out.push_back(grid[i]);
    out.push_back(0.5 * (grid[i] + grid[i + 1]));
  }
  out.push_back(grid.back());
  return out;
}

std::vector<double> linspace(double lo, double hi, std::size_t count) {
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i)
    out[i] = lo + static_cast<double>(i) * (hi - lo) / static_cast<double>(count - 1);
  return out;
}

}  // namespace

GaussianProblem gaussian_xbar_problem(const GaussianXbarSpec& spec, double alpha) {
  validate_spec(spec);
  const std::size_t bins = spec.x_grid.size() - 1;

  std::vector<std::pair<double, double>> params;
  std::vector<std::vector<double>> null_probs;
  for (double s : spec.sigma_sq_grid)
    for (double xi : spec.xi_grid) {
      params.emplace_back(xi, s);
      null_probs.push_back(binned(spec, xi, s, "null member"));
    }
  std::vector<double> alt_probs = binned(spec, spec.xi1, spec.sigma1_sq, "alternative");

  const double members = static_cast<double>(null_probs.size() + 1);
  std::vector<double> reference(bins, 0.0);
  for (const std::vector<double>& p : null_probs)
    for (std::size_t b = 0; b < bins; ++b) reference[b] += p[b] / members;
  for (std::size_t b = 0; b < bins; ++b) reference[b] += alt_probs[b] / members;

  std::vector<std::string> labels(bins);
  std::vector<double> midpoints(bins);
  for (std::size_t b = 0; b < bins; ++b) {
    midpoints[b] = 0.5 * (spec.x_grid[b] + spec.x_grid[b + 1]);
    labels[b] = bin_label(midpoints[b]);
  }

  ReferenceMeasure ref(std::move(labels), std::move(reference));
  std::vector<Density> nulls;
  nulls.reserve(null_probs.size());
  for (std::size_t i = 0; i < null_probs.size(); ++i) {
    std::vector<double> z(bins);
    for (std::size_t b = 0; b < bins; ++b) z[b] = null_probs[i][b] / ref.weight(b);
    nulls.emplace_back(ref, std::move(z), "null[" + std::to_string(i) + "]");
  }
  std::vector<double> zalt(bins);
  for (std::size_t b = 0; b < bins; ++b) zalt[b] = alt_probs[b] / ref.weight(b);
  std::vector<Density> alts;
  alts.emplace_back(ref, std::move(zalt), "alt");

  TestingProblem problem(std::move(ref),
                         HypothesisFamily(FamilyRole::Null, std::move(nulls), "null"),
                         HypothesisFamily(FamilyRole::Alternative, std::move(alts), "alt"),
                         alpha);
  return GaussianProblem{spec,
                         alpha,
                         std::move(problem),
                         std::move(params),
                         std::move(null_probs),
                         std::move(alt_probs),
                         std::move(midpoints)};
}

LfpReport lfp_report(const GaussianProblem& gp, const SolveReport& report) {
  const std::size_t members = gp.member_params.size();
  if (report.dual.prior.size() != members)
    throw Error(ErrorCode::NotSolved,
                "prior covers " + std::to_string(report.dual.prior.size()) +
                    " members, problem has " + std::to_string(members));
  const Prior& prior = report.dual.prior;
  const double total = prior.total_mass();

  LfpReport out{};
  const double sigma_band = 1e-9 * std::max(1.0, gp.spec.sigma0_sq);
  double boundary_mass = 0.0;
  std::vector<double> xi_mass(gp.spec.xi_grid.size(), 0.0);
  for (std::size_t i = 0; i < members; ++i) {
    const double s = gp.member_params[i].second;
    if (std::abs(s - gp.spec.sigma0_sq) <= sigma_band) boundary_mass += prior.weight(i);
    xi_mass[i % gp.spec.xi_grid.size()] += prior.weight(i);  // sigma-major order
  }
  if (total > 0.0) {
    out.prior_mass_at_boundary_sigma = boundary_mass / total;
    std::size_t mode = 0;
    for (std::size_t i = 1; i < xi_mass.size(); ++i)
      if (xi_mass[i] > xi_mass[mode]) mode = i;
    out.prior_mode_xi = gp.spec.xi_grid[mode];
  } else {
    out.prior_mass_at_boundary_sigma = 0.0;
    out.prior_mode_xi = std::numeric_limits<double>::quiet_NaN();
  }

  const std::size_t bins = gp.alt_bin_probs.size();
  double dist = 0.0;
  for (std::size_t b = 0; b < bins; ++b) {
    double mixed = 0.0;
    if (total > 0.0)
      for (std::size_t i = 0; i < members; ++i)
        mixed += prior.weight(i) / total * gp.null_bin_probs[i][b];
    dist = std::max(dist, std::abs(mixed - gp.alt_bin_probs[b]));
  }
  out.xbar_density_distance = dist;

  if (total > 0.0 && gp.spec.sigma1_sq > gp.spec.sigma0_sq + 1e-12) {
    const double var =
        (gp.spec.sigma1_sq - gp.spec.sigma0_sq) / static_cast<double>(gp.spec.n);
    std::vector<double> expected(gp.spec.xi_grid.size());
    double norm = 0.0;
    for (std::size_t i = 0; i < expected.size(); ++i) {
      expected[i] = normal_pdf(gp.spec.xi_grid[i], gp.spec.xi1, var);
      norm += expected[i];
    }
    double gap = 0.0;
    for (std::size_t i = 0; i < expected.size(); ++i)
      gap = std::max(gap, std::abs(xi_mass[i] / total - expected[i] / norm));
    out.xi_marginal_distance = gap;
  }
  return out;
}

GaussianXbarSpec gaussian_case1_preset() {
  GaussianXbarSpec spec;
  spec.side = 1;
  spec.n = 4;
  spec.xi1 = 0.0;
  spec.sigma1_sq = 1.0;
  spec.sigma0_sq = 2.0;
  spec.xi_grid = linspace(-2.0, 2.0, 21);
  spec.sigma_sq_grid = {2.0, 3.0, 4.0};
  spec.x_grid = linspace(-4.0, 4.0, 82);
  return spec;
}

GaussianXbarSpec gaussian_case2_preset() {
  GaussianXbarSpec spec;
  spec.side = 2;
  spec.n = 4;
  spec.xi1 = 0.0;
  spec.sigma1_sq = 2.0;
  spec.sigma0_sq = 1.0;
  spec.xi_grid = linspace(-2.0, 2.0, 21);
  spec.sigma_sq_grid = {0.5, 0.75, 1.0};
  spec.x_grid = linspace(-4.0, 4.0, 82);
  return spec;
}

GaussianXbarSpec refine_spec(const GaussianXbarSpec& spec, bool refine_xi,
                             bool refine_x) {
  GaussianXbarSpec out = spec;
  if (refine_xi) out.xi_grid = refined_grid(spec.xi_grid);
  if (refine_x) out.x_grid = refined_grid(spec.x_grid);
  return out;
}

}  // namespace npdual
