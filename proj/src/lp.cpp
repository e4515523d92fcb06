// Copyright 2026 The r3 Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "r3/lp.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <fmt/format.h>

namespace r3 {

LinearProgram::LinearProgram(int num_vars)
    : objective(static_cast<std::size_t>(num_vars), 0.0),
      a_eq(num_vars),
      a_le(num_vars),
      lower(static_cast<std::size_t>(num_vars), 0.0),
      upper(static_cast<std::size_t>(num_vars), kInfinity) {}

void LinearProgram::validate() const {
  const int n = num_vars();
  if (a_eq.cols() != n || a_le.cols() != n) {
    throw std::invalid_argument("LinearProgram: constraint matrix column count differs from objective length");
  }
  if (static_cast<int>(b_eq.size()) != a_eq.rows() ||
      static_cast<int>(b_le.size()) != a_le.rows()) {
    throw std::invalid_argument("LinearProgram: right-hand side length differs from row count");
  }
  if (static_cast<int>(lower.size()) != n || static_cast<int>(upper.size()) != n) {
    throw std::invalid_argument("LinearProgram: bound vector length differs from objective length");
  }
  for (int j = 0; j < n; ++j) {
    if (!std::isfinite(lower[j])) {
      throw std::invalid_argument(fmt::format("LinearProgram: variable {} has a non-finite lower bound", j));
    }
    if (std::isnan(upper[j]) || lower[j] > upper[j]) {
      throw std::invalid_argument(fmt::format("LinearProgram: variable {} has lower > upper", j));
    }
    if (!std::isfinite(objective[j])) {
      throw std::invalid_argument(fmt::format("LinearProgram: objective coefficient {} is not finite", j));
    }
  }
  for (double v : b_eq) {
    if (!std::isfinite(v)) throw std::invalid_argument("LinearProgram: non-finite b_eq entry");
  }
  for (double v : b_le) {
    if (!std::isfinite(v)) throw std::invalid_argument("LinearProgram: non-finite b_le entry");
  }
}

const char* to_string(LPStatus status) {
  switch (status) {
    case LPStatus::kOptimal: return "optimal";
    case LPStatus::kInfeasible: return "infeasible";
    case LPStatus::kUnbounded: return "unbounded";
    case LPStatus::kIterationLimit: return "iteration_limit";
    case LPStatus::kNumericFailure: return "numeric_failure";
  }
  return "unknown";
}

namespace {

enum class Sense { kEq, kLe };

struct Row {
  Sense sense;
  std::vector<SparseEntry> entries;
  double rhs;
};

// Outcome of presolve: which variables were fixed, tightened bounds, and the
// rows that survive into the simplex.
struct Presolved {
  bool infeasible = false;
  bool unbounded_ray = false;
  std::string reason;
  std::vector<char> fixed;
  std::vector<double> value;
  std::vector<double> lo, hi;
  std::vector<char> row_active;
  std::vector<double> rhs;
};

Presolved presolve(const LinearProgram& lp, const std::vector<Row>& rows,
                   double btol, bool enabled) {
  const int n = lp.num_vars();
  Presolved ps;
  ps.fixed.assign(n, 0);
  ps.value.assign(n, 0.0);
  ps.lo = lp.lower;
  ps.hi = lp.upper;
  ps.row_active.assign(rows.size(), 1);
  ps.rhs.resize(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) ps.rhs[i] = rows[i].rhs;

  std::vector<std::vector<std::pair<int, double>>> col_rows(n);
  std::vector<int> live(rows.size(), 0);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (const auto& e : rows[i].entries) {
      col_rows[e.col].emplace_back(static_cast<int>(i), e.value);
    }
    live[i] = static_cast<int>(rows[i].entries.size());
  }

  auto fix = [&](int j, double v) {
    ps.fixed[j] = 1;
    ps.value[j] = v;
    for (auto [i, a] : col_rows[j]) {
      if (!ps.row_active[i]) continue;
      ps.rhs[i] -= a * v;
      --live[i];
    }
  };

  if (!enabled) return ps;

  for (int j = 0; j < n; ++j) {
    if (ps.lo[j] == ps.hi[j]) fix(j, ps.lo[j]);
  }

  bool changed = true;
  while (changed && !ps.infeasible) {
    changed = false;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (!ps.row_active[i]) continue;
      const Row& row = rows[i];
      if (live[i] == 0) {
        const double r = ps.rhs[i];
        const bool ok = row.sense == Sense::kEq ? std::abs(r) <= btol : r >= -btol;
        if (!ok) {
          ps.infeasible = true;
          ps.reason = fmt::format("row {} reduces to 0 {} {}", i,
                                  row.sense == Sense::kEq ? "=" : "<=", r);
          return ps;
        }
        ps.row_active[i] = 0;
        changed = true;
        continue;
      }
      if (live[i] != 1) continue;
      int j = -1;
      double a = 0.0;
      for (const auto& e : row.entries) {
        if (!ps.fixed[e.col]) {
          j = e.col;
          a = e.value;
          break;
        }
      }
      const double xtol = btol / std::abs(a);
      const double v = ps.rhs[i] / a;
      ps.row_active[i] = 0;
      --live[i];
      changed = true;
      if (row.sense == Sense::kEq) {
        if (v < ps.lo[j] - xtol || v > ps.hi[j] + xtol) {
          ps.infeasible = true;
          ps.reason = fmt::format("row {} forces variable {} to {} outside [{}, {}]",
                                  i, j, v, ps.lo[j], ps.hi[j]);
          return ps;
        }
        fix(j, std::clamp(v, ps.lo[j], ps.hi[j]));
        continue;
      }
      if (a > 0.0) {
        ps.hi[j] = std::min(ps.hi[j], v);
      } else {
        ps.lo[j] = std::max(ps.lo[j], v);
      }
      if (ps.lo[j] > ps.hi[j] + xtol) {
        ps.infeasible = true;
        ps.reason = fmt::format("row {} empties the bound interval of variable {}", i, j);
        return ps;
      }
      if (ps.hi[j] <= ps.lo[j]) fix(j, ps.lo[j]);
    }
  }

  // Columns left without any active row sit at their cheapest bound.
  std::vector<char> touched(n, 0);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!ps.row_active[i]) continue;
    for (const auto& e : rows[i].entries) touched[e.col] = 1;
  }
  for (int j = 0; j < n; ++j) {
    if (ps.fixed[j] || touched[j]) continue;
    const double c = lp.objective[j];
    if (c < 0.0) {
      if (std::isinf(ps.hi[j])) {
        ps.unbounded_ray = true;
        fix(j, ps.lo[j]);
      } else {
        fix(j, ps.hi[j]);
      }
    } else {
      fix(j, ps.lo[j]);
    }
  }
  return ps;
}

enum : signed char { kBasic = 0, kAtLower = 1, kAtUpper = 2 };

enum class RunStatus { kOptimal, kUnbounded, kIterationLimit, kNumericFailure };

// Bounded-variable revised simplex over columns [structural | slack | artificial]
// with an explicit dense basis inverse.
class Simplex {
 public:
  Simplex(int m, std::vector<int> col_ptr, std::vector<int> row_idx,
          std::vector<double> values, std::vector<double> lb,
          std::vector<double> ub, std::vector<double> b, const LPOptions& opt)
      : m_(m),
        n_(static_cast<int>(col_ptr.size()) - 1),
        col_ptr_(std::move(col_ptr)),
        row_idx_(std::move(row_idx)),
        values_(std::move(values)),
        lb_(std::move(lb)),
        ub_(std::move(ub)),
        b_(std::move(b)),
        opt_(opt),
        x_(static_cast<std::size_t>(n_), 0.0),
        state_(static_cast<std::size_t>(n_), kAtLower),
        head_(static_cast<std::size_t>(m_), -1),
        binv_(static_cast<std::size_t>(m_) * m_, 0.0),
        y_(static_cast<std::size_t>(m_), 0.0),
        cb_(static_cast<std::size_t>(m_), 0.0),
        alpha_(static_cast<std::size_t>(m_), 0.0),
        reduced_(static_cast<std::size_t>(n_), 0.0) {
    refactor_interval_ = opt_.refactor_interval > 0 ? opt_.refactor_interval
                                                     : std::max(100, m_);
    max_iterations_ = opt_.max_iterations > 0 ? opt_.max_iterations
                                              : 50L * (m_ + n_) + 1000;
    degenerate_limit_ = 10L * (m_ + n_);
  }

  int rows() const { return m_; }
  int cols() const { return n_; }
  long iterations() const { return iterations_; }
  std::vector<double>& x() { return x_; }
  std::vector<signed char>& state() { return state_; }
  std::vector<int>& head() { return head_; }
  std::vector<double>& lb() { return lb_; }
  std::vector<double>& ub() { return ub_; }
  std::vector<double>& binv() { return binv_; }

  CscView view() const {
    return CscView{m_, n_, col_ptr_, row_idx_, values_};
  }

  // Rebuilds the inverse from the basic columns and recomputes basic values.
  bool refactor() {
    Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(m_, m_);
    for (int i = 0; i < m_; ++i) {
      const int j = head_[i];
      for (int k = col_ptr_[j]; k < col_ptr_[j + 1]; ++k) {
        basis(row_idx_[k], i) = values_[k];
      }
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(basis);
    const auto diag = lu.matrixLU().diagonal().cwiseAbs();
    if (m_ > 0 && diag.minCoeff() <= 1e-12 * std::max(1.0, diag.maxCoeff())) {
      return false;
    }
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> inv =
        lu.inverse();
    std::copy(inv.data(), inv.data() + static_cast<std::ptrdiff_t>(m_) * m_,
              binv_.begin());
    recompute_basic_values();
    since_refactor_ = 0;
    return true;
  }

  void recompute_basic_values() {
    std::vector<double> rhs = b_;
    for (int j = 0; j < n_; ++j) {
      if (state_[j] == kBasic || x_[j] == 0.0) continue;
      for (int k = col_ptr_[j]; k < col_ptr_[j + 1]; ++k) {
        rhs[row_idx_[k]] -= values_[k] * x_[j];
      }
    }
    for (int i = 0; i < m_; ++i) {
      const double* row = binv_.data() + static_cast<std::size_t>(i) * m_;
      double s = 0.0;
      for (int k = 0; k < m_; ++k) s += row[k] * rhs[k];
      x_[head_[i]] = s;
    }
  }

  // Runs simplex iterations minimizing cost . x from the current basis.
  RunStatus run(const std::vector<double>& cost) {
    bool fresh = false;
    long degenerate = 0;
    for (;;) {
      if (iterations_ >= max_iterations_) return RunStatus::kIterationLimit;
      if (since_refactor_ >= refactor_interval_) {
        if (!refactor()) return RunStatus::kNumericFailure;
      }
      for (int i = 0; i < m_; ++i) cb_[i] = cost[head_[i]];
      kernels::weighted_row_sum(cb_, binv_, m_, y_, opt_.exec);
      kernels::price_columns(view(), y_, cost, reduced_, opt_.exec);

      const bool bland = degenerate > degenerate_limit_;
      int entering = -1;
      double best = 0.0;
      for (int j = 0; j < n_; ++j) {
        if (state_[j] == kBasic || ub_[j] <= lb_[j]) continue;
        double score = 0.0;
        if (state_[j] == kAtLower && reduced_[j] < -opt_.opt_tol) {
          score = -reduced_[j];
        } else if (state_[j] == kAtUpper && reduced_[j] > opt_.opt_tol) {
          score = reduced_[j];
        } else {
          continue;
        }
        if (bland) {
          entering = j;
          break;
        }
        if (score > best) {
          best = score;
          entering = j;
        }
      }

      if (entering < 0) {
        if (fresh) return RunStatus::kOptimal;
        if (!refactor()) return RunStatus::kNumericFailure;
        fresh = true;
        continue;
      }
      fresh = false;

      const int q = entering;
      kernels::solve_column(binv_, m_,
                            {row_idx_.data() + col_ptr_[q], row_idx_.data() + col_ptr_[q + 1]},
                            {values_.data() + col_ptr_[q], values_.data() + col_ptr_[q + 1]},
                            alpha_, opt_.exec);
      const double dir = state_[q] == kAtLower ? 1.0 : -1.0;

      double t_min = kInfinity;
      int leave = -1;
      for (int i = 0; i < m_; ++i) {
        const double a = alpha_[i] * dir;
        if (std::abs(alpha_[i]) <= opt_.pivot_tol) continue;
        const int j = head_[i];
        double bound;
        if (a > 0.0) {
          bound = (x_[j] - lb_[j]) / a;
        } else {
          if (std::isinf(ub_[j])) continue;
          bound = (ub_[j] - x_[j]) / (-a);
        }
        bound = std::max(bound, 0.0);
        const double tie = 1e-12 * (1.0 + t_min);
        if (leave < 0 || bound < t_min - tie) {
          t_min = bound;
          leave = i;
        } else if (bound <= t_min + tie) {
          const bool prefer = bland ? head_[i] < head_[leave]
                                    : std::abs(alpha_[i]) > std::abs(alpha_[leave]);
          if (prefer) {
            t_min = std::min(t_min, bound);
            leave = i;
          }
        }
      }

      const double span = ub_[q] - lb_[q];
      if (leave < 0 && std::isinf(span)) return RunStatus::kUnbounded;

      ++iterations_;
      ++since_refactor_;
      if (span <= t_min) {
        // Bound flip: the entering variable crosses its box before any basic
        // variable blocks.
        for (int i = 0; i < m_; ++i) x_[head_[i]] -= dir * span * alpha_[i];
        x_[q] = dir > 0 ? ub_[q] : lb_[q];
        state_[q] = dir > 0 ? kAtUpper : kAtLower;
        degenerate = 0;
        continue;
      }

      const double t = t_min;
      for (int i = 0; i < m_; ++i) x_[head_[i]] -= dir * t * alpha_[i];
      x_[q] += dir * t;
      const int out = head_[leave];
      if (alpha_[leave] * dir > 0.0) {
        x_[out] = lb_[out];
        state_[out] = kAtLower;
      } else {
        x_[out] = ub_[out];
        state_[out] = kAtUpper;
      }
      head_[leave] = q;
      state_[q] = kBasic;
      kernels::eta_update(binv_, m_, leave, alpha_, opt_.exec);
      degenerate = t <= 1e-12 ? degenerate + 1 : 0;
    }
  }

  // Basis change with zero step: column q replaces the basic variable in
  // position `pos`. Used to drive artificials out after phase 1.
  void pivot_in_place(int q, int pos) {
    kernels::solve_column(binv_, m_,
                          {row_idx_.data() + col_ptr_[q], row_idx_.data() + col_ptr_[q + 1]},
                          {values_.data() + col_ptr_[q], values_.data() + col_ptr_[q + 1]},
                          alpha_, opt_.exec);
    const int out = head_[pos];
    state_[out] = kAtLower;
    x_[out] = lb_[out];
    head_[pos] = q;
    state_[q] = kBasic;
    kernels::eta_update(binv_, m_, pos, alpha_, opt_.exec);
    ++since_refactor_;
  }

  double row_dot_column(int pos, int j) const {
    const double* row = binv_.data() + static_cast<std::size_t>(pos) * m_;
    double s = 0.0;
    for (int k = col_ptr_[j]; k < col_ptr_[j + 1]; ++k) s += row[row_idx_[k]] * values_[k];
    return s;
  }

 private:
  int m_;
  int n_;
  std::vector<int> col_ptr_;
  std::vector<int> row_idx_;
  std::vector<double> values_;
  std::vector<double> lb_;
  std::vector<double> ub_;
  std::vector<double> b_;
  LPOptions opt_;
  std::vector<double> x_;
  std::vector<signed char> state_;
  std::vector<int> head_;
  std::vector<double> binv_;
  std::vector<double> y_;
  std::vector<double> cb_;
  std::vector<double> alpha_;
  std::vector<double> reduced_;
  long iterations_ = 0;
  int since_refactor_ = 0;
  int refactor_interval_ = 100;
  long max_iterations_ = 0;
  long degenerate_limit_ = 0;
};

double inf_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// Checks the returned point against the original (unscaled) program.
std::string check_solution(const LinearProgram& lp, const std::vector<double>& x,
                           double feas_tol) {
  const double eq_tol = feas_tol * (1.0 + inf_norm(lp.b_eq));
  const auto ax = lp.a_eq.multiply(x);
  for (std::size_t i = 0; i < ax.size(); ++i) {
    if (std::abs(ax[i] - lp.b_eq[i]) > eq_tol) {
      return fmt::format("equality row {} residual {:.3e}", i, ax[i] - lp.b_eq[i]);
    }
  }
  const double le_tol = feas_tol * (1.0 + inf_norm(lp.b_le));
  const auto lx = lp.a_le.multiply(x);
  for (std::size_t i = 0; i < lx.size(); ++i) {
    if (lx[i] > lp.b_le[i] + le_tol) {
      return fmt::format("inequality row {} violated by {:.3e}", i, lx[i] - lp.b_le[i]);
    }
  }
  return {};
}

}  // namespace

LPSolution solve_lp(const LinearProgram& lp, const LPOptions& options) {
  lp.validate();
  const int n = lp.num_vars();

  std::vector<Row> rows;
  rows.reserve(static_cast<std::size_t>(lp.a_eq.rows() + lp.a_le.rows()));
  auto add_rows = [&](const SparseMatrix& a, const std::vector<double>& b, Sense sense) {
    for (int i = 0; i < a.rows(); ++i) {
      Row row{sense, {}, b[i]};
      auto cols = a.row_cols(i);
      auto vals = a.row_values(i);
      row.entries.reserve(cols.size());
      for (std::size_t k = 0; k < cols.size(); ++k) row.entries.push_back({cols[k], vals[k]});
      rows.push_back(std::move(row));
    }
  };
  add_rows(lp.a_eq, lp.b_eq, Sense::kEq);
  add_rows(lp.a_le, lp.b_le, Sense::kLe);

  const double btol =
      options.feas_tol * (1.0 + std::max(inf_norm(lp.b_eq), inf_norm(lp.b_le)));
  Presolved ps = presolve(lp, rows, btol, options.presolve);

  LPSolution sol;
  if (ps.infeasible) {
    sol.status = LPStatus::kInfeasible;
    sol.message = "presolve: " + ps.reason;
    return sol;
  }

  // Reduced problem: surviving rows and unfixed columns.
  std::vector<int> col_of(n, -1);
  std::vector<int> orig_of;
  for (int j = 0; j < n; ++j) {
    if (!ps.fixed[j]) {
      col_of[j] = static_cast<int>(orig_of.size());
      orig_of.push_back(j);
    }
  }
  std::vector<int> row_ids;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (ps.row_active[i]) row_ids.push_back(static_cast<int>(i));
  }
  const int m = static_cast<int>(row_ids.size());
  const int ns = static_cast<int>(orig_of.size());

  std::vector<double> x_full(n, 0.0);
  for (int j = 0; j < n; ++j) {
    if (ps.fixed[j]) x_full[j] = ps.value[j];
  }

  long iterations = 0;
  if (m > 0) {
    // Row equilibration, then column-compressed storage.
    std::vector<double> scale(m, 1.0);
    std::vector<double> b(m);
    int nle = 0;
    std::vector<int> slack_of(m, -1);
    for (int r = 0; r < m; ++r) {
      const Row& row = rows[row_ids[r]];
      double mx = 0.0;
      for (const auto& e : row.entries) {
        if (!ps.fixed[e.col]) mx = std::max(mx, std::abs(e.value));
      }
      scale[r] = mx > 0.0 ? 1.0 / mx : 1.0;
      b[r] = ps.rhs[row_ids[r]] * scale[r];
      if (row.sense == Sense::kLe) slack_of[r] = nle++;
    }
    const int total = ns + nle + m;
    std::vector<std::vector<std::pair<int, double>>> cols(total);
    for (int r = 0; r < m; ++r) {
      for (const auto& e : rows[row_ids[r]].entries) {
        if (ps.fixed[e.col]) continue;
        cols[col_of[e.col]].emplace_back(r, e.value * scale[r]);
      }
    }
    std::vector<double> lb(total, 0.0), ub(total, kInfinity), cost2(total, 0.0);
    for (int c = 0; c < ns; ++c) {
      lb[c] = ps.lo[orig_of[c]];
      ub[c] = ps.hi[orig_of[c]];
      cost2[c] = lp.objective[orig_of[c]];
    }
    // Residual with structurals at their lower bounds decides which rows
    // start on a slack and which need an artificial.
    std::vector<double> resid = b;
    for (int c = 0; c < ns; ++c) {
      if (lb[c] == 0.0) continue;
      for (auto [r, v] : cols[c]) resid[r] -= v * lb[c];
    }
    std::vector<int> start_col(m);
    std::vector<double> start_sign(m, 1.0);
    for (int r = 0; r < m; ++r) {
      if (slack_of[r] >= 0) cols[ns + slack_of[r]].emplace_back(r, 1.0);
      const int art = ns + nle + r;
      const double sgn = resid[r] >= 0.0 ? 1.0 : -1.0;
      cols[art].emplace_back(r, sgn);
      if (slack_of[r] >= 0 && resid[r] >= 0.0) {
        start_col[r] = ns + slack_of[r];
        ub[art] = 0.0;
      } else {
        start_col[r] = art;
        start_sign[r] = sgn;
      }
    }
    std::vector<int> col_ptr(total + 1, 0), row_idx;
    std::vector<double> vals;
    for (int c = 0; c < total; ++c) {
      for (auto [r, v] : cols[c]) {
        row_idx.push_back(r);
        vals.push_back(v);
      }
      col_ptr[c + 1] = static_cast<int>(row_idx.size());
    }

    Simplex sx(m, std::move(col_ptr), std::move(row_idx), std::move(vals), lb, ub,
               b, options);
    auto& x = sx.x();
    auto& state = sx.state();
    auto& head = sx.head();
    for (int c = 0; c < total; ++c) {
      x[c] = lb[c];
      state[c] = kAtLower;
    }
    for (int r = 0; r < m; ++r) {
      const int c = start_col[r];
      head[r] = c;
      state[c] = kBasic;
      x[c] = std::abs(resid[r]);
      sx.binv()[static_cast<std::size_t>(r) * m + r] = start_sign[r];
    }

    std::vector<double> cost1(total, 0.0);
    bool any_art = false;
    for (int r = 0; r < m; ++r) {
      if (start_col[r] == ns + nle + r) {
        cost1[ns + nle + r] = 1.0;
        any_art = true;
      }
    }

    auto fail = [&](RunStatus st, const char* phase) {
      LPSolution out;
      out.iterations = sx.iterations();
      out.status = st == RunStatus::kIterationLimit ? LPStatus::kIterationLimit
                                                    : LPStatus::kNumericFailure;
      out.message = fmt::format("{}: {}", phase,
                                st == RunStatus::kIterationLimit ? "iteration limit"
                                                                 : "singular basis");
      return out;
    };

    if (any_art) {
      RunStatus st = sx.run(cost1);
      if (st != RunStatus::kOptimal) return fail(st, "phase 1");
      double infeas = 0.0;
      for (int r = 0; r < m; ++r) infeas += cost1[ns + nle + r] * x[ns + nle + r];
      if (infeas > options.feas_tol * (1.0 + inf_norm(b))) {
        LPSolution out;
        out.status = LPStatus::kInfeasible;
        out.iterations = sx.iterations();
        out.message = fmt::format("phase 1 optimum {:.3e} > 0", infeas);
        return out;
      }
      // Drive zero-valued artificials out of the basis where possible; the
      // ones that stay mark redundant rows and are pinned to zero.
      for (int pos = 0; pos < m; ++pos) {
        if (head[pos] < ns + nle) continue;
        int best = -1;
        double best_abs = 1e-7;
        for (int c = 0; c < ns + nle; ++c) {
          if (state[c] == kBasic) continue;
          const double v = std::abs(sx.row_dot_column(pos, c));
          if (v > best_abs) {
            best_abs = v;
            best = c;
          }
        }
        if (best >= 0) sx.pivot_in_place(best, pos);
      }
      for (int r = 0; r < m; ++r) {
        sx.ub()[ns + nle + r] = 0.0;
        sx.lb()[ns + nle + r] = 0.0;
      }
      if (!sx.refactor()) return fail(RunStatus::kNumericFailure, "phase 2 start");
    }

    RunStatus st = sx.run(cost2);
    iterations = sx.iterations();
    if (st == RunStatus::kUnbounded) {
      LPSolution out;
      out.status = LPStatus::kUnbounded;
      out.iterations = iterations;
      out.message = "improving ray found";
      return out;
    }
    if (st != RunStatus::kOptimal) return fail(st, "phase 2");
    for (int c = 0; c < ns; ++c) {
      x_full[orig_of[c]] = std::clamp(x[c], ps.lo[orig_of[c]], ps.hi[orig_of[c]]);
    }
  }

  if (ps.unbounded_ray) {
    sol.status = LPStatus::kUnbounded;
    sol.iterations = iterations;
    sol.message = "unbounded column with negative cost";
    return sol;
  }

  sol.iterations = iterations;
  const std::string bad = check_solution(lp, x_full, options.feas_tol);
  if (!bad.empty()) {
    sol.status = LPStatus::kNumericFailure;
    sol.message = "final residual check failed: " + bad;
    sol.x = std::move(x_full);
    return sol;
  }
  sol.status = LPStatus::kOptimal;
  double obj = 0.0;
  for (int j = 0; j < n; ++j) obj += lp.objective[j] * x_full[j];
  sol.objective_value = obj;
  sol.x = std::move(x_full);
  return sol;
}

}  // namespace r3
