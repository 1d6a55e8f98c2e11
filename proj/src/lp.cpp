#include "aadp/lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace aadp::lp {

namespace {

constexpr double kPivotTol = 1e-10;
constexpr double kFeasTol = 1e-8;
constexpr double kDualTol = 1e-9;
constexpr int kStallLimit = 50;   // degenerate pivots before Bland's rule
constexpr int kRefactorPeriod = 64;

enum class VarState : unsigned char { Basic, AtLower, AtUpper, Free };

// Bounded-variable two-phase simplex over the augmented system
// [A | S | R] x = b where S holds one slack per row (bounds encode the row
// sense) and R holds one signed artificial per row (the phase-1 basis).
class Simplex {
 public:
  explicit Simplex(const DenseLp& lp)
      : lp_(lp),
        m_(lp.num_rows()),
        n_(lp.num_cols()),
        n_total_(n_ + 2 * m_),
        minimize_sign_(lp.sense == Sense::Min ? 1.0 : -1.0) {}

  LpSolution run();

 private:
  const DenseLp& lp_;
  std::size_t m_, n_, n_total_;
  double minimize_sign_;

  std::vector<double> cost_;      // current phase cost, internal min form
  std::vector<double> obj_cost_;  // phase-2 cost
  std::vector<double> lower_, upper_;
  std::vector<double> art_sign_;
  std::vector<double> x_;
  std::vector<VarState> state_;
  std::vector<int> basis_;
  Matrix binv_;
  std::vector<double> y_, dir_, col_;
  int iterations_ = 0;
  int pivots_since_refactor_ = 0;
  int stall_ = 0;
  bool bland_ = false;
  double b_scale_ = 1.0;

  enum class LoopResult { PhaseOptimal, Unbounded, IterLimit, Singular };

  bool is_slack(std::size_t j) const { return j >= n_ && j < n_ + m_; }
  bool is_artificial(std::size_t j) const { return j >= n_ + m_; }
  bool is_fixed(std::size_t j) const { return lower_[j] == upper_[j]; }

  void init();
  void compute_prices();
  double price_column(std::size_t j) const;
  void load_direction(std::size_t j);
  LoopResult phase_loop(int phase, int iter_limit);
  bool refactor();
  void recompute_basics();
  double infeasibility() const;
  void drive_out_artificials();
  LpSolution extract();
  LpSolution failure(SolveStatus st);
};

void Simplex::init() {
  cost_.assign(n_total_, 0.0);
  obj_cost_.assign(n_total_, 0.0);
  lower_.assign(n_total_, 0.0);
  upper_.assign(n_total_, 0.0);
  art_sign_.assign(m_, 1.0);
  x_.assign(n_total_, 0.0);
  state_.assign(n_total_, VarState::AtLower);
  basis_.assign(m_, 0);
  binv_ = Matrix(m_, m_);
  y_.assign(m_, 0.0);
  dir_.assign(m_, 0.0);
  col_.assign(m_, 0.0);

  b_scale_ = 1.0 + max_abs(lp_.rhs);

  for (std::size_t j = 0; j < n_; ++j) {
    obj_cost_[j] = minimize_sign_ * lp_.objective[j];
    lower_[j] = lp_.lower[j];
    upper_[j] = lp_.upper[j];
    if (std::isfinite(lower_[j])) {
      state_[j] = VarState::AtLower;
      x_[j] = lower_[j];
    } else if (std::isfinite(upper_[j])) {
      state_[j] = VarState::AtUpper;
      x_[j] = upper_[j];
    } else {
      state_[j] = VarState::Free;
      x_[j] = 0.0;
    }
  }
  for (std::size_t i = 0; i < m_; ++i) {
    const std::size_t j = n_ + i;
    switch (lp_.row_sense[i]) {
      case RowSense::LE: lower_[j] = 0.0; upper_[j] = kInf; break;
      case RowSense::GE: lower_[j] = -kInf; upper_[j] = 0.0; break;
      case RowSense::EQ: lower_[j] = 0.0; upper_[j] = 0.0; break;
    }
    state_[j] = VarState::AtLower;
    x_[j] = 0.0;
    if (lp_.row_sense[i] == RowSense::GE) state_[j] = VarState::AtUpper;
  }

  // Residual of the nonbasic point decides each artificial's sign so the
  // initial basis is feasible.
  for (std::size_t i = 0; i < m_; ++i) {
    double r = lp_.rhs[i];
    for (std::size_t j = 0; j < n_; ++j)
      if (x_[j] != 0.0) r -= lp_.a(i, j) * x_[j];
    const std::size_t aj = n_ + m_ + i;
    art_sign_[i] = (r >= 0.0) ? 1.0 : -1.0;
    lower_[aj] = 0.0;
    upper_[aj] = kInf;
    x_[aj] = std::abs(r);
    state_[aj] = VarState::Basic;
    basis_[i] = static_cast<int>(aj);
    binv_(i, i) = art_sign_[i];
    cost_[aj] = 1.0;
  }
}

double Simplex::price_column(std::size_t j) const {
  if (j < n_) {
    double s = 0.0;
    for (std::size_t i = 0; i < m_; ++i) s += y_[i] * lp_.a(i, j);
    return s;
  }
  if (is_slack(j)) return y_[j - n_];
  return y_[j - n_ - m_] * art_sign_[j - n_ - m_];
}

void Simplex::compute_prices() {
  // y = c_B' B^{-1}
  std::fill(y_.begin(), y_.end(), 0.0);
  for (std::size_t i = 0; i < m_; ++i) {
    const double cb = cost_[basis_[i]];
    if (cb == 0.0) continue;
    const auto row = binv_.row(i);
    for (std::size_t j = 0; j < m_; ++j) y_[j] += cb * row[j];
  }
}

void Simplex::load_direction(std::size_t j) {
  // dir = B^{-1} A_j
  if (j < n_) {
    for (std::size_t i = 0; i < m_; ++i) col_[i] = lp_.a(i, j);
    for (std::size_t i = 0; i < m_; ++i) dir_[i] = dot(binv_.row(i), col_);
  } else {
    const std::size_t r = is_slack(j) ? j - n_ : j - n_ - m_;
    const double s = is_slack(j) ? 1.0 : art_sign_[r];
    for (std::size_t i = 0; i < m_; ++i) dir_[i] = binv_(i, r) * s;
  }
}

bool Simplex::refactor() {
  Matrix b(m_, m_);
  for (std::size_t i = 0; i < m_; ++i) {
    const std::size_t j = static_cast<std::size_t>(basis_[i]);
    if (j < n_) {
      for (std::size_t r = 0; r < m_; ++r) b(r, i) = lp_.a(r, j);
    } else if (is_slack(j)) {
      b(j - n_, i) = 1.0;
    } else {
      b(j - n_ - m_, i) = art_sign_[j - n_ - m_];
    }
  }
  // Gauss-Jordan inversion with partial pivoting.
  Matrix inv = Matrix::identity(m_);
  for (std::size_t k = 0; k < m_; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < m_; ++i)
      if (std::abs(b(i, k)) > std::abs(b(p, k))) p = i;
    if (std::abs(b(p, k)) < 1e-12) return false;
    if (p != k) {
      for (std::size_t j = 0; j < m_; ++j) {
        std::swap(b(k, j), b(p, j));
        std::swap(inv(k, j), inv(p, j));
      }
    }
    const double piv = 1.0 / b(k, k);
    for (std::size_t j = 0; j < m_; ++j) {
      b(k, j) *= piv;
      inv(k, j) *= piv;
    }
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == k) continue;
      const double f = b(i, k);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < m_; ++j) {
        b(i, j) -= f * b(k, j);
        inv(i, j) -= f * inv(k, j);
      }
    }
  }
  binv_ = std::move(inv);
  pivots_since_refactor_ = 0;
  return true;
}

void Simplex::recompute_basics() {
  // x_B = B^{-1} (b - sum over nonbasic columns at nonzero values)
  std::vector<double> rhs = lp_.rhs;
  for (std::size_t j = 0; j < n_total_; ++j) {
    if (state_[j] == VarState::Basic || x_[j] == 0.0) continue;
    if (j < n_) {
      for (std::size_t i = 0; i < m_; ++i) rhs[i] -= lp_.a(i, j) * x_[j];
    } else if (is_slack(j)) {
      rhs[j - n_] -= x_[j];
    } else {
      rhs[j - n_ - m_] -= art_sign_[j - n_ - m_] * x_[j];
    }
  }
  for (std::size_t i = 0; i < m_; ++i) x_[basis_[i]] = dot(binv_.row(i), rhs);
}

double Simplex::infeasibility() const {
  double s = 0.0;
  for (std::size_t j = n_ + m_; j < n_total_; ++j) s += std::abs(x_[j]);
  return s;
}

Simplex::LoopResult Simplex::phase_loop(int phase, int iter_limit) {
  const double dual_tol = kDualTol * (1.0 + max_abs(cost_));
  while (true) {
    if (iterations_ >= iter_limit) return LoopResult::IterLimit;
    if (pivots_since_refactor_ >= kRefactorPeriod) {
      if (!refactor()) return LoopResult::Singular;
      recompute_basics();
    }
    compute_prices();

    // Entering variable: Dantzig by default, Bland when stalled.
    std::size_t enter = n_total_;
    double enter_dir = 0.0;
    double best = dual_tol;
    for (std::size_t j = 0; j < n_total_; ++j) {
      if (state_[j] == VarState::Basic || is_fixed(j)) continue;
      if (phase == 2 && is_artificial(j)) continue;
      const double z = cost_[j] - price_column(j);
      double viol = 0.0, d = 0.0;
      switch (state_[j]) {
        case VarState::AtLower:
          if (z < -dual_tol) { viol = -z; d = 1.0; }
          break;
        case VarState::AtUpper:
          if (z > dual_tol) { viol = z; d = -1.0; }
          break;
        case VarState::Free:
          if (std::abs(z) > dual_tol) { viol = std::abs(z); d = z < 0.0 ? 1.0 : -1.0; }
          break;
        case VarState::Basic: break;
      }
      if (viol <= 0.0) continue;
      if (bland_) { enter = j; enter_dir = d; break; }
      if (viol > best) { best = viol; enter = j; enter_dir = d; }
    }
    if (enter == n_total_) return LoopResult::PhaseOptimal;

    load_direction(enter);

    // Ratio test with bound flips.
    double t_limit = kInf;
    if (std::isfinite(lower_[enter]) && std::isfinite(upper_[enter]))
      t_limit = upper_[enter] - lower_[enter];
    int leave = -1;
    double leave_bound = 0.0;
    double leave_pivot = 0.0;
    for (std::size_t i = 0; i < m_; ++i) {
      const double di = enter_dir * dir_[i];
      const std::size_t bj = static_cast<std::size_t>(basis_[i]);
      double t = kInf, bound = 0.0;
      if (di > kPivotTol) {
        if (!std::isfinite(lower_[bj])) continue;
        t = (x_[bj] - lower_[bj]) / di;
        bound = lower_[bj];
      } else if (di < -kPivotTol) {
        if (!std::isfinite(upper_[bj])) continue;
        t = (upper_[bj] - x_[bj]) / (-di);
        bound = upper_[bj];
      } else {
        continue;
      }
      if (t < 0.0) t = 0.0;
      bool take = false;
      if (t < t_limit - 1e-9 * (1.0 + t_limit)) {
        take = true;
      } else if (t <= t_limit + 1e-9 * (1.0 + t_limit) && leave >= 0) {
        // tie: prefer a larger pivot (stability), or smallest index under Bland
        if (bland_) {
          take = static_cast<std::size_t>(basis_[leave]) > bj;
        } else {
          take = std::abs(dir_[i]) > std::abs(leave_pivot);
        }
      } else if (leave < 0 && t <= t_limit + 1e-9 * (1.0 + t_limit)) {
        take = true;
      }
      if (take) {
        t_limit = std::min(t, t_limit);
        leave = static_cast<int>(i);
        leave_bound = bound;
        leave_pivot = dir_[i];
      }
    }

    if (!std::isfinite(t_limit)) {
      return phase == 2 ? LoopResult::Unbounded : LoopResult::Singular;
    }

    ++iterations_;
    const double step = t_limit;
    if (leave < 0) {
      // bound flip: entering jumps to its other bound, basis unchanged
      for (std::size_t i = 0; i < m_; ++i) x_[basis_[i]] -= enter_dir * step * dir_[i];
      x_[enter] = enter_dir > 0.0 ? upper_[enter] : lower_[enter];
      state_[enter] = enter_dir > 0.0 ? VarState::AtUpper : VarState::AtLower;
    } else {
      for (std::size_t i = 0; i < m_; ++i) x_[basis_[i]] -= enter_dir * step * dir_[i];
      x_[enter] += enter_dir * step;
      const std::size_t out = static_cast<std::size_t>(basis_[leave]);
      x_[out] = leave_bound;
      state_[out] = (leave_bound == lower_[out]) ? VarState::AtLower : VarState::AtUpper;
      state_[enter] = VarState::Basic;
      basis_[leave] = static_cast<int>(enter);
      // product-form update of B^{-1}
      const double piv = 1.0 / dir_[leave];
      auto prow = binv_.row(static_cast<std::size_t>(leave));
      for (std::size_t j = 0; j < m_; ++j) prow[j] *= piv;
      for (std::size_t i = 0; i < m_; ++i) {
        if (static_cast<int>(i) == leave) continue;
        const double f = dir_[i];
        if (f == 0.0) continue;
        auto row = binv_.row(i);
        for (std::size_t j = 0; j < m_; ++j) row[j] -= f * prow[j];
      }
      ++pivots_since_refactor_;
    }

    if (step <= 1e-9) {
      if (++stall_ >= kStallLimit) bland_ = true;
    } else {
      stall_ = 0;
      bland_ = false;
    }
  }
}

void Simplex::drive_out_artificials() {
  for (std::size_t i = 0; i < m_; ++i) {
    const std::size_t bj = static_cast<std::size_t>(basis_[i]);
    if (!is_artificial(bj)) continue;
    // pick the structural/slack column with the largest pivot in this row
    std::size_t best_j = n_total_;
    double best_a = 1e-7;
    for (std::size_t j = 0; j < n_ + m_; ++j) {
      if (state_[j] == VarState::Basic) continue;
      double alpha;
      if (j < n_) {
        for (std::size_t r = 0; r < m_; ++r) col_[r] = lp_.a(r, j);
        alpha = dot(binv_.row(i), col_);
      } else {
        alpha = binv_(i, j - n_);
      }
      if (std::abs(alpha) > best_a) {
        best_a = std::abs(alpha);
        best_j = j;
      }
    }
    if (best_j == n_total_) continue;  // redundant row; artificial stays basic at 0
    load_direction(best_j);
    const double piv = 1.0 / dir_[i];
    auto prow = binv_.row(i);
    for (std::size_t j = 0; j < m_; ++j) prow[j] *= piv;
    for (std::size_t r = 0; r < m_; ++r) {
      if (r == i) continue;
      const double f = dir_[r];
      if (f == 0.0) continue;
      auto row = binv_.row(r);
      for (std::size_t j = 0; j < m_; ++j) row[j] -= f * prow[j];
    }
    state_[bj] = VarState::AtLower;
    x_[bj] = 0.0;
    state_[best_j] = VarState::Basic;
    basis_[i] = static_cast<int>(best_j);
    ++pivots_since_refactor_;
  }
  for (std::size_t i = 0; i < m_; ++i) {
    const std::size_t aj = n_ + m_ + i;
    upper_[aj] = 0.0;
    if (state_[aj] != VarState::Basic) x_[aj] = 0.0;
  }
}

LpSolution Simplex::failure(SolveStatus st) {
  LpSolution sol;
  sol.status = st;
  sol.iterations = iterations_;
  return sol;
}

LpSolution Simplex::extract() {
  LpSolution sol;
  sol.status = SolveStatus::Optimal;
  sol.iterations = iterations_;
  sol.x.assign(x_.begin(), x_.begin() + static_cast<long>(n_));
  sol.objective = dot(lp_.objective, sol.x);
  compute_prices();  // with phase-2 costs
  sol.duals.resize(m_);
  for (std::size_t i = 0; i < m_; ++i)
    sol.duals[i] = minimize_sign_ * y_[i];
  sol.reduced_costs.resize(n_);
  for (std::size_t j = 0; j < n_; ++j)
    sol.reduced_costs[j] = minimize_sign_ * (cost_[j] - price_column(j));
  return sol;
}

LpSolution Simplex::run() {
  const int iter_limit = 10000 + 20 * static_cast<int>(m_ + n_total_);
  init();
  if (m_ > 0) {
    switch (phase_loop(1, iter_limit)) {
      case LoopResult::PhaseOptimal: break;
      case LoopResult::Unbounded:
      case LoopResult::Singular:
      case LoopResult::IterLimit: return failure(SolveStatus::NumericalFailure);
    }
    if (infeasibility() > kFeasTol * b_scale_) return failure(SolveStatus::Infeasible);
    drive_out_artificials();
  }
  cost_ = obj_cost_;
  stall_ = 0;
  bland_ = false;
  switch (phase_loop(2, iter_limit)) {
    case LoopResult::PhaseOptimal: break;
    case LoopResult::Unbounded: return failure(SolveStatus::Unbounded);
    case LoopResult::Singular:
    case LoopResult::IterLimit: return failure(SolveStatus::NumericalFailure);
  }
  if (m_ > 0) {
    // clean solve from the final basis, then confirm optimality
    if (!refactor()) return failure(SolveStatus::NumericalFailure);
    recompute_basics();
    switch (phase_loop(2, iter_limit)) {
      case LoopResult::PhaseOptimal: break;
      case LoopResult::Unbounded: return failure(SolveStatus::Unbounded);
      case LoopResult::Singular:
      case LoopResult::IterLimit: return failure(SolveStatus::NumericalFailure);
    }
  }
  LpSolution sol = extract();
  const Residuals res = residuals(lp_, sol);
  if (res.primal > 1e-7 || res.dual > 1e-7 || res.complementarity > 1e-7)
    return failure(SolveStatus::NumericalFailure);
  return sol;
}

}  // namespace

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Unbounded: return "unbounded";
    case SolveStatus::NumericalFailure: return "numerical_failure";
  }
  return "unknown";
}

DenseLp DenseLp::make(Sense sense, std::size_t rows, std::size_t cols) {
  DenseLp lp;
  lp.sense = sense;
  lp.objective.assign(cols, 0.0);
  lp.a = Matrix(rows, cols);
  lp.row_sense.assign(rows, RowSense::LE);
  lp.rhs.assign(rows, 0.0);
  lp.lower.assign(cols, 0.0);
  lp.upper.assign(cols, kInf);
  return lp;
}

void DenseLp::validate() const {
  const std::size_t m = num_rows(), n = num_cols();
  if (n == 0) throw std::invalid_argument("DenseLp: no variables");
  if (a.rows() != m || a.cols() != n)
    throw std::invalid_argument("DenseLp: matrix shape mismatch");
  if (row_sense.size() != m) throw std::invalid_argument("DenseLp: row_sense size");
  if (lower.size() != n || upper.size() != n)
    throw std::invalid_argument("DenseLp: bounds size");
  for (double v : a.data())
    if (!std::isfinite(v)) throw std::invalid_argument("DenseLp: non-finite coefficient");
  for (double v : rhs)
    if (!std::isfinite(v)) throw std::invalid_argument("DenseLp: non-finite rhs");
  for (double v : objective)
    if (!std::isfinite(v)) throw std::invalid_argument("DenseLp: non-finite objective");
  for (std::size_t j = 0; j < n; ++j) {
    if (std::isnan(lower[j]) || std::isnan(upper[j]) || lower[j] > upper[j])
      throw std::invalid_argument("DenseLp: inconsistent bounds");
  }
}

LpSolution solve(const DenseLp& lp) {
  lp.validate();
  return Simplex(lp).run();
}

Residuals residuals(const DenseLp& lp, const LpSolution& sol) {
  Residuals r;
  if (sol.status != SolveStatus::Optimal) return r;
  const std::size_t m = lp.num_rows(), n = lp.num_cols();
  // primal feasibility
  for (std::size_t i = 0; i < m; ++i) {
    const double ax = dot(lp.a.row(i), sol.x);
    const double scale = 1.0 + std::abs(lp.rhs[i]);
    double v = 0.0;
    switch (lp.row_sense[i]) {
      case RowSense::LE: v = std::max(0.0, ax - lp.rhs[i]); break;
      case RowSense::GE: v = std::max(0.0, lp.rhs[i] - ax); break;
      case RowSense::EQ: v = std::abs(ax - lp.rhs[i]); break;
    }
    r.primal = std::max(r.primal, v / scale);
    // complementarity: dual * row slack
    const double slack = std::abs(ax - lp.rhs[i]);
    r.complementarity = std::max(r.complementarity, std::abs(sol.duals[i]) * slack / scale);
  }
  for (std::size_t j = 0; j < n; ++j) {
    const double scale = 1.0 + std::abs(sol.x[j]);
    if (std::isfinite(lp.lower[j]))
      r.primal = std::max(r.primal, (lp.lower[j] - sol.x[j]) / scale);
    if (std::isfinite(lp.upper[j]))
      r.primal = std::max(r.primal, (sol.x[j] - lp.upper[j]) / scale);
  }
  // dual feasibility: z = c - A'y must price every variable consistently with
  // the bound it sits on (stated-sense convention).
  const double sign = lp.sense == Sense::Min ? 1.0 : -1.0;
  const double cscale = 1.0 + max_abs(lp.objective);
  for (std::size_t j = 0; j < n; ++j) {
    double z = lp.objective[j];
    for (std::size_t i = 0; i < m; ++i) z -= sol.duals[i] * lp.a(i, j);
    const double zmin = sign * z;  // internal min convention
    const double at_lower = std::isfinite(lp.lower[j])
                                ? std::abs(sol.x[j] - lp.lower[j])
                                : kInf;
    const double at_upper = std::isfinite(lp.upper[j])
                                ? std::abs(sol.x[j] - lp.upper[j])
                                : kInf;
    double v = 0.0;
    if (at_lower < 1e-9 * (1.0 + std::abs(sol.x[j]))) {
      v = std::max(0.0, -zmin);
    } else if (at_upper < 1e-9 * (1.0 + std::abs(sol.x[j]))) {
      v = std::max(0.0, zmin);
    } else {
      v = std::abs(zmin);  // interior variable must have zero reduced cost
    }
    r.dual = std::max(r.dual, v / cscale);
  }
  // duality gap
  double dual_obj = dot(lp.rhs, sol.duals);
  for (std::size_t j = 0; j < n; ++j) {
    double z = lp.objective[j];
    for (std::size_t i = 0; i < m; ++i) z -= sol.duals[i] * lp.a(i, j);
    dual_obj += z * sol.x[j];
  }
  r.gap = std::abs(sol.objective - dual_obj) / (1.0 + std::abs(sol.objective));
  return r;
}

namespace {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_terms(std::ostream& os, const Matrix& a, std::size_t row,
                 const std::vector<double>* vec) {
  bool any = false;
  const std::size_t n = vec ? vec->size() : a.cols();
  for (std::size_t j = 0; j < n; ++j) {
    const double c = vec ? (*vec)[j] : a(row, j);
    if (c == 0.0) continue;
    os << (c < 0.0 ? " - " : " + ") << fmt_double(std::abs(c)) << " x" << j;
    any = true;
  }
  if (!any) os << " 0 x0";
}

}  // namespace

void write_lp_format(const DenseLp& lp, std::ostream& os) {
  os << (lp.sense == Sense::Min ? "Minimize" : "Maximize") << "\n obj:";
  write_terms(os, lp.a, 0, &lp.objective);
  os << "\nSubject To\n";
  for (std::size_t i = 0; i < lp.num_rows(); ++i) {
    os << " c" << i << ":";
    write_terms(os, lp.a, i, nullptr);
    const char* rel = lp.row_sense[i] == RowSense::LE   ? "<="
                      : lp.row_sense[i] == RowSense::GE ? ">="
                                                        : "=";
    os << " " << rel << " " << fmt_double(lp.rhs[i]) << "\n";
  }
  os << "Bounds\n";
  for (std::size_t j = 0; j < lp.num_cols(); ++j) {
    const double lo = lp.lower[j], hi = lp.upper[j];
    if (lo == 0.0 && hi == kInf) continue;  // default bound
    if (!std::isfinite(lo) && !std::isfinite(hi)) {
      os << " x" << j << " free\n";
    } else if (!std::isfinite(hi)) {
      os << " " << fmt_double(lo) << " <= x" << j << "\n";
    } else if (!std::isfinite(lo)) {
      os << " x" << j << " <= " << fmt_double(hi) << "\n";
    } else {
      os << " " << fmt_double(lo) << " <= x" << j << " <= " << fmt_double(hi) << "\n";
    }
  }
  os << "End\n";
}

std::string to_lp_format(const DenseLp& lp) {
  std::ostringstream os;
  write_lp_format(lp, os);
  return os.str();
}

}  // namespace aadp::lp
