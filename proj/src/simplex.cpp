#include "npdual/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <ostream>
#include <vector>

namespace npdual {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kNone = static_cast<std::size_t>(-1);
constexpr int kDegenerateRun = 64;  // consecutive degenerate pivots before Bland's rule
constexpr int kMaxRestarts = 2;     // refactorization restarts per phase

struct LuFactors {
  std::vector<std::vector<double>> lu;
  std::vector<std::size_t> perm;
  bool ok = false;
};

LuFactors lu_factor(std::vector<std::vector<double>> a) {
  const std::size_t n = a.size();
  LuFactors f;
  f.perm.resize(n);
  for (std::size_t i = 0; i < n; ++i) f.perm[i] = i;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    double best = std::abs(a[k][k]);
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a[i][k]) > best) {
        best = std::abs(a[i][k]);
        piv = i;
      }
    if (best < 1e-13) return f;
    if (piv != k) {
      std::swap(a[piv], a[k]);
      std::swap(f.perm[piv], f.perm[k]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      a[i][k] /= a[k][k];
      const double mult = a[i][k];
      if (mult == 0.0) continue;
      for (std::size_t j = k + 1; j < n; ++j) a[i][j] -= mult * a[k][j];
    }
  }
  f.lu = std::move(a);
  f.ok = true;
  return f;
}

std::vector<double> lu_solve(const LuFactors& f, const std::vector<double>& b) {
  const std::size_t n = f.perm.size();
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[f.perm[i]];
  for (std::size_t i = 1; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) x[i] -= f.lu[i][j] * x[j];
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t j = i + 1; j < n; ++j) x[i] -= f.lu[i][j] * x[j];
    x[i] /= f.lu[i][i];
  }
  return x;
}

// Solves A^T y = c given LU factors of A.
std::vector<double> lu_solve_transposed(const LuFactors& f, const std::vector<double>& c) {
  const std::size_t n = f.perm.size();
  std::vector<double> w(c);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) w[i] -= f.lu[j][i] * w[j];
    w[i] /= f.lu[i][i];
  }
  for (std::size_t i = n; i-- > 0;)
    for (std::size_t j = i + 1; j < n; ++j) w[i] -= f.lu[j][i] * w[j];
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[f.perm[i]] = w[i];
  return y;
}

struct DualEval {
  double dual_objective = 0.0;
  double dual_infeasibility = 0.0;
  double complementarity = 0.0;
};

double bound_or(const std::vector<double>& v, std::size_t j, double fallback) {
  return v.empty() ? fallback : v[j];
}

DualEval evaluate_dual(const LinearProgram& lp, const std::vector<double>& x,
                       const std::vector<double>& y, const std::vector<double>& rc) {
  const double sgn = lp.sense == ObjectiveSense::Maximize ? 1.0 : -1.0;
  DualEval out;
  for (std::size_t i = 0; i < lp.row_count(); ++i) {
    out.dual_objective += y[i] * lp.rhs[i];
    double slack = lp.rhs[i];
    for (std::size_t j = 0; j < lp.var_count(); ++j) slack -= lp.rows[i][j] * x[j];
    out.complementarity = std::max(out.complementarity, std::abs(y[i] * slack));
    const double ys = sgn * y[i];
    if (lp.senses[i] == RowSense::LessEqual)
      out.dual_infeasibility = std::max(out.dual_infeasibility, -ys);
    else if (lp.senses[i] == RowSense::GreaterEqual)
      out.dual_infeasibility = std::max(out.dual_infeasibility, ys);
  }
  for (std::size_t j = 0; j < lp.var_count(); ++j) {
    const double lo = bound_or(lp.lower, j, 0.0);
    const double hi = bound_or(lp.upper, j, kInf);
    const double src = sgn * rc[j];
    if (src > 0.0) {
      if (std::isfinite(hi)) {
        out.dual_objective += rc[j] * hi;
        out.complementarity = std::max(out.complementarity, std::abs(rc[j] * (hi - x[j])));
      } else {
        out.dual_infeasibility = std::max(out.dual_infeasibility, src);
      }
    } else if (src < 0.0) {
      if (std::isfinite(lo)) {
        out.dual_objective += rc[j] * lo;
        out.complementarity = std::max(out.complementarity, std::abs(rc[j] * (x[j] - lo)));
      } else {
        out.dual_infeasibility = std::max(out.dual_infeasibility, -src);
      }
    }
  }
  return out;
}

void validate_lp(const LinearProgram& lp) {
  const std::size_t n = lp.var_count();
  const std::size_t m = lp.row_count();
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "linear program has no variables");
  if (lp.senses.size() != m || lp.rhs.size() != m)
    throw Error(ErrorCode::DimensionMismatch, "rows/senses/rhs lengths differ");
  if (!lp.lower.empty() && lp.lower.size() != n)
    throw Error(ErrorCode::DimensionMismatch, "lower bounds length");
  if (!lp.upper.empty() && lp.upper.size() != n)
    throw Error(ErrorCode::DimensionMismatch, "upper bounds length");
  for (double c : lp.objective)
    if (!std::isfinite(c)) throw Error(ErrorCode::InvalidArgument, "objective has a non-finite entry");
  for (std::size_t i = 0; i < m; ++i) {
    if (lp.rows[i].size() != n)
      throw Error(ErrorCode::DimensionMismatch,
                  "row " + std::to_string(i) + " has " + std::to_string(lp.rows[i].size()) +
                      " coefficients for " + std::to_string(n) + " variables");
    for (double a : lp.rows[i])
      if (!std::isfinite(a))
        throw Error(ErrorCode::InvalidArgument, "row " + std::to_string(i) + " has a non-finite entry");
    if (!std::isfinite(lp.rhs[i]))
      throw Error(ErrorCode::InvalidArgument, "rhs " + std::to_string(i) + " is not finite");
  }
  for (std::size_t j = 0; j < n; ++j) {
    const double lo = bound_or(lp.lower, j, 0.0);
    const double hi = bound_or(lp.upper, j, kInf);
    if (std::isnan(lo) || std::isnan(hi))
      throw Error(ErrorCode::InvalidArgument, "bounds of variable " + std::to_string(j) + " are NaN");
    if (lo > hi)
      throw Error(ErrorCode::InvalidArgument,
                  "variable " + std::to_string(j) + " has lower bound above upper bound");
  }
}

class SimplexSolver {
 public:
  SimplexSolver(const LinearProgram& lp, const SimplexOptions& opt) : lp_(lp), opt_(opt) {
    if (opt_.max_iterations <= 0)
      opt_.max_iterations = std::max<long>(5000, 50L * static_cast<long>(lp.row_count() + lp.var_count()));
    build();
  }

  LpSolution run();

 private:
  struct Col {
    std::size_t user;
    double sign;
  };

  void build();
  void init_tableau();
  void pivot(std::size_t row, std::size_t col);
  std::size_t choose_entering() const;
  std::size_t choose_leaving(std::size_t col, double* ratio_out) const;
  void rebuild_from_basis();
  LuFactors factor_basis() const;
  std::vector<double> basic_values(const LuFactors& f) const { return lu_solve(f, b_); }
  double artificial_sum(const std::vector<double>& xb) const;
  void recompute_rc_phase1();
  void recompute_rc_phase2();
  LpSolution extract_optimal();
  LpSolution extract_infeasible();
  LpSolution extract_unbounded(std::size_t col);
  void debug_line(const char* what, std::size_t a, std::size_t b) const;

  const LinearProgram& lp_;
  SimplexOptions opt_;
  double sgn_ = 1.0;  // +1 maximize, -1 minimize (internally always maximize)
  std::size_t n_ = 0, m_ = 0;
  std::vector<double> offset_;
  std::vector<Col> cols_;  // structural internal columns
  std::size_t nstruct_ = 0, nslack_ = 0, nart_ = 0, M_ = 0, C_ = 0;
  std::vector<std::vector<double>> A_;  // M_ x C_ standard form, rhs >= 0
  std::vector<double> b_;
  std::vector<double> flip_;
  std::vector<double> cint_;
  std::vector<std::size_t> slack_col_of_row_;
  std::vector<bool> is_artificial_;
  std::vector<std::vector<double>> T_;  // M_ x (C_ + 1)
  std::vector<std::size_t> basis_;
  std::vector<char> in_basis_;
  std::vector<double> rc_;
  double val_ = 0.0;
  bool phase_one_ = false;
  long iterations_ = 0;
  bool bland_ = false;
  int degenerate_run_ = 0;
};

void SimplexSolver::build() {
  n_ = lp_.var_count();
  m_ = lp_.row_count();
  sgn_ = lp_.sense == ObjectiveSense::Maximize ? 1.0 : -1.0;
  offset_.assign(n_, 0.0);

  std::vector<std::pair<std::size_t, double>> caps;  // (structural col, cap)
  std::vector<std::vector<std::size_t>> cols_of_user(n_);
  for (std::size_t j = 0; j < n_; ++j) {
    const double lo = bound_or(lp_.lower, j, 0.0);
    const double hi = bound_or(lp_.upper, j, kInf);
    if (std::isfinite(lo)) {
      offset_[j] = lo;
      cols_of_user[j].push_back(cols_.size());
      cols_.push_back({j, 1.0});
      if (std::isfinite(hi)) caps.emplace_back(cols_.size() - 1, hi - lo);
    } else if (std::isfinite(hi)) {
      offset_[j] = hi;
      cols_of_user[j].push_back(cols_.size());
      cols_.push_back({j, -1.0});
    } else {
      cols_of_user[j].push_back(cols_.size());
      cols_.push_back({j, 1.0});
      cols_of_user[j].push_back(cols_.size());
      cols_.push_back({j, -1.0});
    }
  }
  nstruct_ = cols_.size();
  M_ = m_ + caps.size();

  // Assemble rows in structural coordinates with shifted rhs.
  std::vector<std::vector<double>> rows(M_, std::vector<double>(nstruct_, 0.0));
  std::vector<double> rhs(M_, 0.0);
  std::vector<RowSense> senses(M_, RowSense::LessEqual);
  for (std::size_t i = 0; i < m_; ++i) {
    double shift = 0.0;
    for (std::size_t j = 0; j < n_; ++j) {
      const double a = lp_.rows[i][j];
      if (a == 0.0) continue;
      shift += a * offset_[j];
      for (std::size_t c : cols_of_user[j]) rows[i][c] += a * cols_[c].sign;
    }
    rhs[i] = lp_.rhs[i] - shift;
    senses[i] = lp_.senses[i];
  }
  for (std::size_t k = 0; k < caps.size(); ++k) {
    rows[m_ + k][caps[k].first] = 1.0;
    rhs[m_ + k] = caps[k].second;
    senses[m_ + k] = RowSense::LessEqual;
  }

  nslack_ = 0;
  slack_col_of_row_.assign(M_, kNone);
  for (std::size_t r = 0; r < M_; ++r)
    if (senses[r] != RowSense::Equal) slack_col_of_row_[r] = nstruct_ + nslack_++;

  flip_.assign(M_, 1.0);
  std::vector<std::size_t> art_rows;
  for (std::size_t r = 0; r < M_; ++r) {
    double slack_coeff = 0.0;
    if (slack_col_of_row_[r] != kNone)
      slack_coeff = senses[r] == RowSense::LessEqual ? 1.0 : -1.0;
    if (rhs[r] < 0.0) {
      for (double& a : rows[r]) a = -a;
      rhs[r] = -rhs[r];
      slack_coeff = -slack_coeff;
      flip_[r] = -1.0;
    }
    if (slack_coeff != 1.0) art_rows.push_back(r);
    if (slack_col_of_row_[r] != kNone) {
      // defer writing slack coefficient until A_ is allocated
    }
    senses[r] = slack_coeff == 1.0 ? RowSense::LessEqual
                                   : (slack_coeff == -1.0 ? RowSense::GreaterEqual : RowSense::Equal);
  }
  nart_ = art_rows.size();
  C_ = nstruct_ + nslack_ + nart_;

  A_.assign(M_, std::vector<double>(C_, 0.0));
  b_ = rhs;
  for (std::size_t r = 0; r < M_; ++r)
    for (std::size_t c = 0; c < nstruct_; ++c) A_[r][c] = rows[r][c];
  for (std::size_t r = 0; r < M_; ++r)
    if (slack_col_of_row_[r] != kNone)
      A_[r][slack_col_of_row_[r]] = senses[r] == RowSense::LessEqual ? 1.0 : -1.0;
  is_artificial_.assign(C_, false);
  basis_.assign(M_, kNone);
  for (std::size_t k = 0; k < nart_; ++k) {
    const std::size_t col = nstruct_ + nslack_ + k;
    A_[art_rows[k]][col] = 1.0;
    is_artificial_[col] = true;
    basis_[art_rows[k]] = col;
  }
  for (std::size_t r = 0; r < M_; ++r)
    if (basis_[r] == kNone) basis_[r] = slack_col_of_row_[r];

  cint_.assign(C_, 0.0);
  for (std::size_t c = 0; c < nstruct_; ++c)
    cint_[c] = sgn_ * lp_.objective[cols_[c].user] * cols_[c].sign;
}

void SimplexSolver::init_tableau() {
  T_.assign(M_, std::vector<double>(C_ + 1, 0.0));
  for (std::size_t r = 0; r < M_; ++r) {
    for (std::size_t c = 0; c < C_; ++c) T_[r][c] = A_[r][c];
    T_[r][C_] = b_[r];
  }
  in_basis_.assign(C_, 0);
  for (std::size_t r = 0; r < M_; ++r) in_basis_[basis_[r]] = 1;
}

void SimplexSolver::pivot(std::size_t row, std::size_t col) {
  std::vector<double>& pr = T_[row];
  const double p = pr[col];
  for (double& v : pr) v /= p;
  pr[col] = 1.0;
  for (std::size_t r = 0; r < M_; ++r) {
    if (r == row) continue;
    const double f = T_[r][col];
    if (f == 0.0) continue;
    std::vector<double>& tr = T_[r];
    for (std::size_t c = 0; c <= C_; ++c) tr[c] -= f * pr[c];
    tr[col] = 0.0;
  }
  const double f = rc_[col];
  if (f != 0.0) {
    for (std::size_t c = 0; c < C_; ++c) rc_[c] -= f * pr[c];
    val_ += f * pr[C_];
  }
  rc_[col] = 0.0;
  in_basis_[basis_[row]] = 0;
  basis_[row] = col;
  in_basis_[col] = 1;
  ++iterations_;
}

std::size_t SimplexSolver::choose_entering() const {
  const double tol = opt_.pivot_tol;
  if (bland_) {
    for (std::size_t c = 0; c < C_; ++c) {
      if (in_basis_[c] || is_artificial_[c]) continue;
      if (rc_[c] > tol) return c;
    }
    return kNone;
  }
  std::size_t best = kNone;
  double best_rc = tol;
  for (std::size_t c = 0; c < C_; ++c) {
    if (in_basis_[c] || is_artificial_[c]) continue;
    if (rc_[c] > best_rc) {
      best_rc = rc_[c];
      best = c;
    }
  }
  return best;
}

std::size_t SimplexSolver::choose_leaving(std::size_t col, double* ratio_out) const {
  std::size_t best = kNone;
  double best_ratio = kInf;
  for (std::size_t r = 0; r < M_; ++r) {
    const double a = T_[r][col];
    if (a <= opt_.pivot_tol) continue;
    const double ratio = T_[r][C_] / a;
    if (best == kNone) {
      best = r;
      best_ratio = ratio;
      continue;
    }
    const double window = 1e-11 * (1.0 + std::abs(best_ratio));
    if (ratio < best_ratio - window) {
      best_ratio = ratio;
      best = r;
    } else if (ratio <= best_ratio + window && basis_[r] < basis_[best]) {
      best = r;  // lowest-index tie break resists cycling
      best_ratio = std::min(best_ratio, ratio);
    }
  }
  *ratio_out = best_ratio;
  return best;
}

LuFactors SimplexSolver::factor_basis() const {
  std::vector<std::vector<double>> B(M_, std::vector<double>(M_, 0.0));
  for (std::size_t r = 0; r < M_; ++r)
    for (std::size_t i = 0; i < M_; ++i) B[i][r] = A_[i][basis_[r]];
  return lu_factor(std::move(B));
}

void SimplexSolver::rebuild_from_basis() {
  LuFactors f = factor_basis();
  if (!f.ok) throw Error(ErrorCode::NumericalBreakdown, "singular basis during refactorization");
  std::vector<double> colbuf(M_);
  std::vector<std::vector<double>> fresh(M_, std::vector<double>(C_ + 1, 0.0));
  for (std::size_t c = 0; c < C_; ++c) {
    for (std::size_t r = 0; r < M_; ++r) colbuf[r] = A_[r][c];
    std::vector<double> solved = lu_solve(f, colbuf);
    for (std::size_t r = 0; r < M_; ++r) fresh[r][c] = solved[r];
  }
  std::vector<double> xb = lu_solve(f, b_);
  for (std::size_t r = 0; r < M_; ++r) fresh[r][C_] = std::max(xb[r], 0.0);
  for (std::size_t r = 0; r < M_; ++r) {
    for (std::size_t rr = 0; rr < M_; ++rr) fresh[rr][basis_[r]] = 0.0;
    fresh[r][basis_[r]] = 1.0;
  }
  T_ = std::move(fresh);
}

double SimplexSolver::artificial_sum(const std::vector<double>& xb) const {
  double s = 0.0;
  for (std::size_t r = 0; r < M_; ++r)
    if (is_artificial_[basis_[r]]) s += std::max(xb[r], 0.0);
  return s;
}

void SimplexSolver::recompute_rc_phase1() {
  rc_.assign(C_, 0.0);
  val_ = 0.0;
  for (std::size_t r = 0; r < M_; ++r) {
    if (!is_artificial_[basis_[r]]) continue;
    for (std::size_t c = 0; c < C_; ++c) rc_[c] += T_[r][c];
    val_ -= T_[r][C_];
  }
  for (std::size_t c = 0; c < C_; ++c)
    if (is_artificial_[c]) rc_[c] -= 1.0;
  for (std::size_t r = 0; r < M_; ++r) rc_[basis_[r]] = 0.0;
}

void SimplexSolver::recompute_rc_phase2() {
  rc_ = cint_;
  val_ = 0.0;
  for (std::size_t r = 0; r < M_; ++r) {
    const double cb = cint_[basis_[r]];
    if (cb == 0.0) continue;
    for (std::size_t c = 0; c < C_; ++c) rc_[c] -= cb * T_[r][c];
    val_ += cb * T_[r][C_];
  }
  for (std::size_t r = 0; r < M_; ++r) rc_[basis_[r]] = 0.0;
}

void SimplexSolver::debug_line(const char* what, std::size_t a, std::size_t b) const {
  if (!opt_.debug) return;
  *opt_.debug << "simplex " << what << " iter=" << iterations_ << " a=" << a
              << " b=" << b << " val=" << val_ << "\n";
}

LpSolution SimplexSolver::run() {
  init_tableau();

  if (nart_ > 0) {
    phase_one_ = true;
    recompute_rc_phase1();
    int restarts = 0;
    while (true) {
      if (iterations_ > opt_.max_iterations)
        throw Error(ErrorCode::NumericalBreakdown, "iteration cap hit in phase 1");
      const std::size_t col = choose_entering();
      if (col == kNone) {
        LuFactors f = factor_basis();
        if (!f.ok) throw Error(ErrorCode::NumericalBreakdown, "singular basis after phase 1");
        const double infeas = artificial_sum(basic_values(f));
        if (infeas <= opt_.feas_tol) break;
        if (restarts < kMaxRestarts) {
          ++restarts;
          rebuild_from_basis();
          recompute_rc_phase1();
          if (choose_entering() != kNone) continue;  // drift hid progress
        }
        return extract_infeasible();
      }
      double ratio = 0.0;
      const std::size_t row = choose_leaving(col, &ratio);
      if (row == kNone)
        throw Error(ErrorCode::NumericalBreakdown, "phase 1 objective unbounded");
      degenerate_run_ = ratio <= 1e-11 ? degenerate_run_ + 1 : 0;
      if (degenerate_run_ > kDegenerateRun) bland_ = true;
      debug_line("phase1-pivot", row, col);
      pivot(row, col);
    }
    // Try to drive leftover artificials out of the basis on zero pivot rows.
    for (std::size_t r = 0; r < M_; ++r) {
      if (!is_artificial_[basis_[r]]) continue;
      for (std::size_t c = 0; c < nstruct_ + nslack_; ++c) {
        if (in_basis_[c]) continue;
        if (std::abs(T_[r][c]) > opt_.pivot_tol) {
          rc_.assign(C_, 0.0);
          val_ = 0.0;
          pivot(r, c);
          break;
        }
      }
    }
    phase_one_ = false;
  }

  recompute_rc_phase2();
  int restarts = 0;
  while (true) {
    if (iterations_ > opt_.max_iterations)
      throw Error(ErrorCode::NumericalBreakdown, "iteration cap hit in phase 2");
    const std::size_t col = choose_entering();
    if (col == kNone) {
      rc_ = cint_;  // exact reduced costs from a fresh factorization
      LuFactors f = factor_basis();
      if (!f.ok) throw Error(ErrorCode::NumericalBreakdown, "singular basis at optimum");
      std::vector<double> cb(M_);
      for (std::size_t r = 0; r < M_; ++r) cb[r] = cint_[basis_[r]];
      std::vector<double> y = lu_solve_transposed(f, cb);
      for (std::size_t c = 0; c < C_; ++c)
        for (std::size_t r = 0; r < M_; ++r) rc_[c] -= y[r] * A_[r][c];
      for (std::size_t r = 0; r < M_; ++r) rc_[basis_[r]] = 0.0;
      bool improvable = false;
      for (std::size_t c = 0; c < C_ && !improvable; ++c)
        if (!in_basis_[c] && !is_artificial_[c] && rc_[c] > 10.0 * opt_.pivot_tol)
          improvable = true;
      if (improvable && restarts < kMaxRestarts) {
        ++restarts;
        rebuild_from_basis();
        recompute_rc_phase2();
        continue;
      }
      return extract_optimal();
    }
    double ratio = 0.0;
    const std::size_t row = choose_leaving(col, &ratio);
    if (row == kNone) return extract_unbounded(col);
    degenerate_run_ = ratio <= 1e-11 ? degenerate_run_ + 1 : 0;
    if (degenerate_run_ > kDegenerateRun) bland_ = true;
    debug_line("phase2-pivot", row, col);
    pivot(row, col);
  }
}

LpSolution SimplexSolver::extract_optimal() {
  LuFactors f = factor_basis();
  if (!f.ok) throw Error(ErrorCode::NumericalBreakdown, "singular basis at extraction");
  std::vector<double> xb = basic_values(f);
  std::vector<double> cb(M_);
  for (std::size_t r = 0; r < M_; ++r) cb[r] = cint_[basis_[r]];
  std::vector<double> y = lu_solve_transposed(f, cb);

  LpSolution out;
  out.status = LpStatus::Optimal;
  out.iterations = iterations_;
  out.primal.assign(n_, 0.0);
  for (std::size_t j = 0; j < n_; ++j) out.primal[j] = offset_[j];
  for (std::size_t r = 0; r < M_; ++r) {
    const std::size_t c = basis_[r];
    if (c < nstruct_) out.primal[cols_[c].user] += cols_[c].sign * xb[r];
  }
  out.row_duals.assign(m_, 0.0);
  for (std::size_t i = 0; i < m_; ++i) out.row_duals[i] = sgn_ * flip_[i] * y[i];
  out.reduced_costs.assign(n_, 0.0);
  for (std::size_t j = 0; j < n_; ++j) {
    double rc = lp_.objective[j];
    for (std::size_t i = 0; i < m_; ++i) rc -= out.row_duals[i] * lp_.rows[i][j];
    out.reduced_costs[j] = rc;
  }
  out.objective = 0.0;
  for (std::size_t j = 0; j < n_; ++j) out.objective += lp_.objective[j] * out.primal[j];
  out.residuals = compute_residuals(lp_, out);
  out.dual_objective = evaluate_dual(lp_, out.primal, out.row_duals, out.reduced_costs).dual_objective;
  const double worst = std::max({out.residuals.primal, out.residuals.dual,
                                 out.residuals.complementary, out.residuals.duality_gap});
  if (worst > 100.0 * opt_.feas_tol)
    throw Error(ErrorCode::NumericalBreakdown,
                "optimal basis fails residual check (worst " + std::to_string(worst) + ")");
  if (opt_.debug)
    *opt_.debug << "simplex optimal obj=" << out.objective << " iters=" << iterations_ << "\n";
  return out;
}

LpSolution SimplexSolver::extract_infeasible() {
  LuFactors f = factor_basis();
  LpSolution out;
  out.status = LpStatus::Infeasible;
  out.iterations = iterations_;
  out.witness.assign(m_, 0.0);
  if (f.ok) {
    std::vector<double> cb(M_, 0.0);
    for (std::size_t r = 0; r < M_; ++r)
      if (is_artificial_[basis_[r]]) cb[r] = -1.0;
    std::vector<double> y = lu_solve_transposed(f, cb);
    for (std::size_t i = 0; i < m_; ++i) out.witness[i] = flip_[i] * y[i];
  }
  if (opt_.debug) *opt_.debug << "simplex infeasible iters=" << iterations_ << "\n";
  return out;
}

LpSolution SimplexSolver::extract_unbounded(std::size_t col) {
  LpSolution out;
  out.status = LpStatus::Unbounded;
  out.iterations = iterations_;
  out.witness.assign(n_, 0.0);
  if (col < nstruct_) out.witness[cols_[col].user] += cols_[col].sign;
  for (std::size_t r = 0; r < M_; ++r) {
    const std::size_t c = basis_[r];
    if (c < nstruct_) out.witness[cols_[c].user] -= cols_[c].sign * T_[r][col];
  }
  if (opt_.debug) *opt_.debug << "simplex unbounded iters=" << iterations_ << "\n";
  return out;
}

}  // namespace

void LinearProgram::add_row(std::vector<double> coeffs, RowSense sense_in, double rhs_in) {
  rows.push_back(std::move(coeffs));
  senses.push_back(sense_in);
  rhs.push_back(rhs_in);
}

LpResiduals compute_residuals(const LinearProgram& lp, const LpSolution& solution) {
  LpResiduals res;
  if (solution.status != LpStatus::Optimal) return res;
  const std::vector<double>& x = solution.primal;
  for (std::size_t i = 0; i < lp.row_count(); ++i) {
    double ax = 0.0;
    for (std::size_t j = 0; j < lp.var_count(); ++j) ax += lp.rows[i][j] * x[j];
    double v = 0.0;
    switch (lp.senses[i]) {
      case RowSense::LessEqual: v = ax - lp.rhs[i]; break;
      case RowSense::GreaterEqual: v = lp.rhs[i] - ax; break;
      case RowSense::Equal: v = std::abs(ax - lp.rhs[i]); break;
    }
    res.primal = std::max(res.primal, v);
  }
  for (std::size_t j = 0; j < lp.var_count(); ++j) {
    const double lo = lp.lower.empty() ? 0.0 : lp.lower[j];
    const double hi = lp.upper.empty() ? kInf : lp.upper[j];
    if (std::isfinite(lo)) res.primal = std::max(res.primal, lo - x[j]);
    if (std::isfinite(hi)) res.primal = std::max(res.primal, x[j] - hi);
  }
  res.primal = std::max(res.primal, 0.0);
  DualEval de = evaluate_dual(lp, x, solution.row_duals, solution.reduced_costs);
  res.dual = de.dual_infeasibility;
  res.complementary = de.complementarity;
  res.duality_gap = std::abs(solution.objective - de.dual_objective);
  return res;
}

LpSolution solve_lp(const LinearProgram& lp, const SimplexOptions& options) {
  validate_lp(lp);
  SimplexSolver solver(lp, options);
  return solver.run();
}

}  // namespace npdual
