#pragma once

// Exact rational linear programming: a two-phase simplex with Bland's rule,
// LP duality for programs in inequality form, and optimal-solution recovery
// from a dual optimum through complementary slackness.

#include <sip/numerics.hpp>
#include <sip/structure.hpp>

#include <algorithm>
#include <cassert>
#include <string>
#include <utility>
#include <vector>

namespace sip {

enum class Form { Eq, Leq };

/// min c^T x subject to Ax = b (Form::Eq) or Ax <= b (Form::Leq), x >= 0.
struct IlpInstance {
  SparseIntMatrix A;
  IntVec b;
  IntVec c;
  Form form = Form::Eq;

  std::size_t rows() const { return A.rows(); }
  std::size_t cols() const { return A.cols(); }

  void validate() const {
    if (b.size() != A.rows()) throw dimension_error("instance: b has length " + std::to_string(b.size()) +
                                                    ", expected " + std::to_string(A.rows()));
    if (c.size() != A.cols()) throw dimension_error("instance: c has length " + std::to_string(c.size()) +
                                                    ", expected " + std::to_string(A.cols()));
  }

  template <class T>
  bool feasible(const std::vector<T>& x) const {
    if (x.size() != cols()) return false;
    for (const auto& v : x)
      if (v < 0) return false;
    auto ax = A * x;
    for (std::size_t i = 0; i < rows(); ++i) {
      if (form == Form::Eq && ax[i] != b[i]) return false;
      if (form == Form::Leq && ax[i] > b[i]) return false;
    }
    return true;
  }

  Rat objective(const RatVec& x) const { return dot(c, x); }
  Int objective(const IntVec& x) const { return dot(c, x); }

  friend bool operator==(const IlpInstance&, const IlpInstance&) = default;
};

enum class Status { Optimal, Infeasible, Unbounded };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::Optimal: return "optimal";
    case Status::Infeasible: return "infeasible";
    case Status::Unbounded: return "unbounded";
  }
  return "?";
}

template <class Vec>
struct SolveStatus {
  Status status = Status::Infeasible;
  Vec x;          // set when Optimal
  Rat objective;  // set when Optimal

  bool optimal() const { return status == Status::Optimal; }

  static SolveStatus infeasible() { return {Status::Infeasible, {}, 0}; }
  static SolveStatus unbounded() { return {Status::Unbounded, {}, 0}; }
};

using LpResult = SolveStatus<RatVec>;
using IlpStatus = SolveStatus<IntVec>;

// ---------------------------------------------------------------------------
// Simplex

namespace detail {

/// Dense tableau in canonical form for min c^T x, Tx = rhs, x >= 0.
class Tableau {
 public:
  Tableau(RatMatrix t, RatVec rhs, std::vector<std::size_t> basis)
      : t_(std::move(t)), rhs_(std::move(rhs)), basis_(std::move(basis)) {}

  /// Reduced costs for objective `cost` given the current basis.
  void set_objective(const RatVec& cost) {
    cost_ = cost;
    reduced_ = cost;
    value_ = 0;
    for (std::size_t i = 0; i < t_.rows(); ++i) {
      const Rat& cb = cost[basis_[i]];
      if (cb == 0) continue;
      for (std::size_t j = 0; j < t_.cols(); ++j)
        if (t_(i, j) != 0) reduced_[j] -= cb * t_(i, j);
      value_ += cb * rhs_[i];
    }
  }

  /// Bland's rule iterations. Returns false when unbounded.
  bool optimise(const std::vector<bool>& allowed) {
    for (;;) {
      std::size_t enter = npos;
      for (std::size_t j = 0; j < t_.cols(); ++j)
        if (allowed[j] && reduced_[j] < 0) {
          enter = j;
          break;
        }
      if (enter == npos) return true;
      std::size_t leave = npos;
      Rat best;
      for (std::size_t i = 0; i < t_.rows(); ++i) {
        if (t_(i, enter) <= 0) continue;
        Rat ratio = rhs_[i] / t_(i, enter);
        if (leave == npos || ratio < best || (ratio == best && basis_[i] < basis_[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == npos) return false;
      pivot(leave, enter);
    }
  }

  void pivot(std::size_t r, std::size_t col) {
    Rat p = t_(r, col);
    for (std::size_t j = 0; j < t_.cols(); ++j)
      if (t_(r, j) != 0) t_(r, j) /= p;
    rhs_[r] /= p;
    for (std::size_t i = 0; i < t_.rows(); ++i) {
      if (i == r || t_(i, col) == 0) continue;
      Rat f = t_(i, col);
      for (std::size_t j = 0; j < t_.cols(); ++j)
        if (t_(r, j) != 0) t_(i, j) -= f * t_(r, j);
      rhs_[i] -= f * rhs_[r];
    }
    if (reduced_.size() == t_.cols() && reduced_[col] != 0) {
      Rat f = reduced_[col];
      for (std::size_t j = 0; j < t_.cols(); ++j)
        if (t_(r, j) != 0) reduced_[j] -= f * t_(r, j);
      value_ += f * rhs_[r];
    }
    basis_[r] = col;
  }

  void drop_row(std::size_t r) {
    RatMatrix t(t_.rows() - 1, t_.cols());
    RatVec rhs;
    std::vector<std::size_t> basis;
    for (std::size_t i = 0, k = 0; i < t_.rows(); ++i) {
      if (i == r) continue;
      for (std::size_t j = 0; j < t_.cols(); ++j) t(k, j) = t_(i, j);
      rhs.push_back(rhs_[i]);
      basis.push_back(basis_[i]);
      ++k;
    }
    t_ = std::move(t);
    rhs_ = std::move(rhs);
    basis_ = std::move(basis);
  }

  const RatMatrix& table() const { return t_; }
  const std::vector<std::size_t>& basis() const { return basis_; }
  const Rat& value() const { return value_; }

  RatVec solution(std::size_t n) const {
    RatVec x(n, Rat(0));
    for (std::size_t i = 0; i < basis_.size(); ++i)
      if (basis_[i] < n) x[basis_[i]] = rhs_[i];
    return x;
  }

 private:
  RatMatrix t_;
  RatVec rhs_;
  std::vector<std::size_t> basis_;
  RatVec cost_;
  RatVec reduced_;
  Rat value_;
};

/// Two-phase simplex on min c^T x, Ax = b, x >= 0 (dense data).
inline LpResult simplex_eq(const SparseIntMatrix& A, const IntVec& b, const RatVec& c, bool feasibility_only = false) {
  const std::size_t n = A.rows(), m = A.cols();
  RatMatrix t(n, m + n);
  RatVec rhs(n);
  std::vector<std::size_t> basis(n);
  for (const auto& e : A.entries()) t(e.row, e.col) = e.value;
  for (std::size_t i = 0; i < n; ++i) {
    rhs[i] = b[i];
    if (b[i] < 0) {
      for (std::size_t j = 0; j < m; ++j) t(i, j) = -t(i, j);
      rhs[i] = -rhs[i];
    }
    t(i, m + i) = 1;
    basis[i] = m + i;
  }
  Tableau tab(std::move(t), std::move(rhs), std::move(basis));

  RatVec phase1(m + n, Rat(0));
  for (std::size_t i = 0; i < n; ++i) phase1[m + i] = 1;
  tab.set_objective(phase1);
  tab.optimise(std::vector<bool>(m + n, true));
  if (tab.value() != 0) return LpResult::infeasible();

  // Drive degenerate artificials out of the basis; drop redundant rows.
  for (std::size_t i = 0; i < tab.basis().size();) {
    if (tab.basis()[i] < m) {
      ++i;
      continue;
    }
    std::size_t col = npos;
    for (std::size_t j = 0; j < m; ++j)
      if (tab.table()(i, j) != 0) {
        col = j;
        break;
      }
    if (col == npos) {
      tab.drop_row(i);
    } else {
      tab.pivot(i, col);
      ++i;
    }
  }

  RatVec phase2(m + n, Rat(0));
  if (!feasibility_only)
    for (std::size_t j = 0; j < m; ++j) phase2[j] = c[j];
  tab.set_objective(phase2);
  std::vector<bool> allowed(m + n, false);
  std::fill(allowed.begin(), allowed.begin() + static_cast<std::ptrdiff_t>(m), true);
  if (!tab.optimise(allowed)) return LpResult::unbounded();
  RatVec x = tab.solution(m);
  Rat obj = 0;
  for (std::size_t j = 0; j < m; ++j) obj += phase2[j] * x[j];
  return {Status::Optimal, std::move(x), obj};
}

}  // namespace detail

/// Exact vertex optimum of the LP relaxation (Bland's rule, deterministic).
inline LpResult simplex_solve(const IlpInstance& p) {
  p.validate();
  RatVec c = to_rat(p.c);
  if (p.form == Form::Eq) return detail::simplex_eq(p.A, p.b, c);
  SparseIntMatrix with_slack = hstack(p.A, sparse_identity(p.rows()));
  c.resize(p.cols() + p.rows(), Rat(0));
  LpResult r = detail::simplex_eq(with_slack, p.b, c);
  if (r.optimal()) r.x.resize(p.cols());
  return r;
}

/// Simplex with a rational objective (used for auxiliary programs).
inline LpResult simplex_solve(const IlpInstance& p, const RatVec& objective) {
  if (objective.size() != p.cols()) throw dimension_error("simplex_solve: objective dimension mismatch");
  if (p.form == Form::Eq) return detail::simplex_eq(p.A, p.b, objective);
  RatVec c = objective;
  c.resize(p.cols() + p.rows(), Rat(0));
  LpResult r = detail::simplex_eq(hstack(p.A, sparse_identity(p.rows())), p.b, c);
  if (r.optimal()) r.x.resize(p.cols());
  return r;
}

inline bool lp_feasible(const IlpInstance& p) {
  IlpInstance q = p;
  std::fill(q.c.begin(), q.c.end(), Int(0));
  return simplex_solve(q).optimal();
}

// ---------------------------------------------------------------------------
// Forms and duality

/// Replaces each equality by two inequalities: [A; -A] x <= [b; -b].
inline IlpInstance eq_to_leq(const IlpInstance& p) {
  if (p.form != Form::Eq) throw argument_error("eq_to_leq: instance is not in equality form");
  IlpInstance q;
  q.A = vstack(p.A, p.A.negated());
  q.b = p.b;
  for (const auto& v : p.b) q.b.push_back(-v);
  q.c = p.c;
  q.form = Form::Leq;
  return q;
}

/// The dual of min c^T x, Ax <= b, x >= 0:  max b^T y, A^T y <= c, y <= 0.
struct DualProgram {
  SparseIntMatrix At;  // A^T
  IntVec objective;    // b, maximised
  IntVec rhs;          // c

  /// With y' = -y >= 0: min b^T y', -A^T y' <= c.
  IlpInstance as_leq() const { return {At.negated(), rhs, objective, Form::Leq}; }

  /// Slack reformulation: min b^T y', -A^T y' + I z = c, y', z >= 0.
  IlpInstance slack_form() const {
    IlpInstance q;
    q.A = hstack(At.negated(), sparse_identity(At.rows()));
    q.b = rhs;
    q.c = objective;
    q.c.resize(At.cols() + At.rows(), Int(0));
    q.form = Form::Eq;
    return q;
  }

  bool feasible(const RatVec& y) const {
    if (y.size() != At.cols()) return false;
    for (const auto& v : y)
      if (v > 0) return false;
    auto aty = At * y;
    for (std::size_t j = 0; j < rhs.size(); ++j)
      if (aty[j] > rhs[j]) return false;
    return true;
  }

  Rat value(const RatVec& y) const { return dot(objective, y); }
};

inline DualProgram dualize(const IlpInstance& p) {
  if (p.form != Form::Leq) throw argument_error("dualize: instance is not in inequality form");
  p.validate();
  return {p.A.transpose(), p.b, p.c};
}

/// Solves the dual through its slack reformulation. On Optimal, x holds
/// y* <= 0 and objective holds max b^T y.
inline LpResult solve_dual(const DualProgram& d) {
  LpResult r = simplex_solve(d.slack_form());
  if (!r.optimal()) return r;
  RatVec y(d.At.cols());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = -r.x[i];
  return {Status::Optimal, y, d.value(y)};
}

struct SlacknessSets {
  std::vector<std::size_t> X;  // rows with y*_i < 0
  std::vector<std::size_t> Y;  // columns with (A^T y*)_j < c_j

  bool in_Y(std::size_t j) const { return std::binary_search(Y.begin(), Y.end(), j); }
  bool in_X(std::size_t i) const { return std::binary_search(X.begin(), X.end(), i); }
};

inline SlacknessSets slackness_sets(const IlpInstance& p, const RatVec& y_star) {
  if (p.form != Form::Leq) throw argument_error("slackness_sets: instance is not in inequality form");
  if (y_star.size() != p.rows()) throw dimension_error("slackness_sets: y has wrong dimension");
  SlacknessSets s;
  for (std::size_t i = 0; i < p.rows(); ++i) {
    if (y_star[i] > 0) throw argument_error("slackness_sets: y is not dual feasible (positive entry)");
    if (y_star[i] < 0) s.X.push_back(i);
  }
  auto aty = p.A.transpose_times(y_star);
  for (std::size_t j = 0; j < p.cols(); ++j) {
    if (aty[j] > p.c[j]) throw argument_error("slackness_sets: y is not dual feasible (A^T y > c)");
    if (aty[j] < p.c[j]) s.Y.push_back(j);
  }
  return s;
}

/// The feasible region {Ax <= b, rows of X tight, x_Y = 0, x >= 0} written in
/// equality form over the free columns and the slacks of non-tight rows.
struct SlackProgram {
  IlpInstance eq;
  std::vector<std::size_t> free_cols;  // original column of each leading variable
  std::size_t n_cols = 0;              // column count of the original program

  RatVec lift(const RatVec& z) const {
    RatVec x(n_cols, Rat(0));
    for (std::size_t k = 0; k < free_cols.size(); ++k) x[free_cols[k]] = z[k];
    return x;
  }
};

inline SlackProgram slack_program(const IlpInstance& p, const SlacknessSets& s) {
  SlackProgram sp;
  sp.n_cols = p.cols();
  for (std::size_t j = 0; j < p.cols(); ++j)
    if (!s.in_Y(j)) sp.free_cols.push_back(j);
  std::vector<std::size_t> all_rows(p.rows());
  for (std::size_t i = 0; i < p.rows(); ++i) all_rows[i] = i;
  SparseIntMatrix left = p.A.submatrix(all_rows, sp.free_cols);
  std::vector<Entry> slack;
  std::size_t k = 0;
  for (std::size_t i = 0; i < p.rows(); ++i)
    if (!s.in_X(i)) slack.push_back({i, k++, 1});
  sp.eq.A = hstack(left, SparseIntMatrix::from_entries(p.rows(), k, std::move(slack)));
  sp.eq.b = p.b;
  sp.eq.c.assign(sp.eq.A.cols(), Int(0));
  sp.eq.form = Form::Eq;
  return sp;
}

struct RecoveryStats {
  std::size_t max_depth = 0;  // deepest recursive call (root = 0)
  std::size_t lp_solves = 0;
};

namespace detail {

class Recovery {
 public:
  explicit Recovery(RecoveryStats& stats) : stats_(stats) {}

  /// Optimal solution of p, which is known to have an optimum.
  RatVec solve(const IlpInstance& p, std::size_t level) {
    stats_.max_depth = std::max(stats_.max_depth, level);
    RatVec x(p.cols(), Rat(0));
    if (p.cols() == 0) return x;
    auto bp = block_partition(p.A);
    if (bp.decomposable()) {
      for (const auto& blk : bp.blocks) {
        if (blk.cols.empty()) continue;  // 0 <= b_i holds at an optimum
        if (blk.rows.empty()) {
          // Zero column: nonnegative cost, since the program is bounded.
          assert(p.c[blk.cols.front()] >= 0);
          continue;
        }
        IlpInstance sub{blk.sub, slice(p.b, blk.rows), slice(p.c, blk.cols), Form::Leq};
        RatVec xs = solve(sub, level + 1);
        for (std::size_t k = 0; k < blk.cols.size(); ++k) x[blk.cols[k]] = xs[k];
      }
      return x;
    }

    // Not decomposable: fix x_1 to its value in some optimal solution.
    Rat xi = 0;
    DualProgram d = dualize(p);
    LpResult dual = solve_dual(d);
    ++stats_.lp_solves;
    assert(dual.optimal());
    SlacknessSets sets = slackness_sets(p, dual.x);
    if (!sets.in_Y(0)) {
      SlackProgram sp = slack_program(p, sets);
      RatVec obj(sp.eq.cols(), Rat(0));
      obj[0] = 1;  // column 0 is free, so it leads
      LpResult hat = simplex_solve(sp.eq, obj);
      ++stats_.lp_solves;
      assert(hat.optimal());
      xi = hat.objective;
    }
    IlpInstance rest;
    rest.A = p.A.without_first_column();
    rest.c.assign(p.c.begin() + 1, p.c.end());
    rest.form = Form::Leq;
    const auto a1 = p.A.column(0);
    RatVec rhs(p.rows());
    for (std::size_t i = 0; i < p.rows(); ++i) rhs[i] = p.b[i] - xi * a1[i];
    RatVec xr = solve_rational(rest, rhs, level + 1);
    x[0] = xi;
    for (std::size_t k = 0; k < xr.size(); ++k) x[k + 1] = xr[k];
    return x;
  }

 private:
  template <class T>
  static std::vector<T> slice(const std::vector<T>& v, const std::vector<std::size_t>& idx) {
    std::vector<T> out;
    out.reserve(idx.size());
    for (auto i : idx) out.push_back(v[i]);
    return out;
  }

  /// Right-hand sides become rational after fixing x_1 = xi. Scaling a
  /// row by a positive integer changes neither solutions nor structure, so
  /// each row is cleared of denominators before recursing.
  RatVec solve_rational(IlpInstance p, const RatVec& rhs, std::size_t level) {
    IntVec scale(p.rows());
    p.b.resize(p.rows());
    for (std::size_t i = 0; i < p.rows(); ++i) {
      scale[i] = rhs[i].get_den();
      p.b[i] = rhs[i].get_num();
    }
    std::vector<Entry> entries;
    for (const auto& e : p.A.entries()) entries.push_back({e.row, e.col, e.value * scale[e.row]});
    p.A = SparseIntMatrix::from_entries(p.rows(), p.cols(), std::move(entries));
    return solve(p, level);
  }

  RecoveryStats& stats_;
};

}  // namespace detail

/// Optimal primal solution assembled from dual optima: complementary
/// slackness pins x_1, the first column is substituted out, and
/// block-decomposable programs are split.
inline LpResult recover_solution(const IlpInstance& p, RecoveryStats* stats = nullptr) {
  if (p.form != Form::Leq) throw argument_error("recover_solution: instance is not in inequality form");
  p.validate();
  RecoveryStats local;
  RecoveryStats& st = stats ? *stats : local;
  st = {};

  // Zero columns: unbounded if feasible with negative cost, otherwise x_j = 0.
  std::vector<bool> used(p.cols(), false);
  for (const auto& e : p.A.entries()) used[e.col] = true;
  std::vector<std::size_t> keep;
  bool negative_zero_col = false;
  for (std::size_t j = 0; j < p.cols(); ++j) {
    if (used[j])
      keep.push_back(j);
    else if (p.c[j] < 0)
      negative_zero_col = true;
  }
  std::vector<std::size_t> all_rows(p.rows());
  for (std::size_t i = 0; i < p.rows(); ++i) all_rows[i] = i;
  IlpInstance core{p.A.submatrix(all_rows, keep), p.b, {}, Form::Leq};
  for (auto j : keep) core.c.push_back(p.c[j]);

  DualProgram d = dualize(core);
  LpResult dual = solve_dual(d);
  ++st.lp_solves;
  if (dual.status == Status::Unbounded) return LpResult::infeasible();
  if (dual.status == Status::Infeasible) {
    ++st.lp_solves;
    return lp_feasible(core) ? LpResult::unbounded() : LpResult::infeasible();
  }
  if (negative_zero_col) return LpResult::unbounded();

  detail::Recovery rec(st);
  RatVec xc = rec.solve(core, 0);
  RatVec x(p.cols(), Rat(0));
  for (std::size_t k = 0; k < keep.size(); ++k) x[keep[k]] = xc[k];
  return {Status::Optimal, x, p.objective(x)};
}

}  // namespace sip
