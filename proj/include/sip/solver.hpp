#pragma once

// Proximity-guided branching for block-structured integer programs in
// equality form: split independent blocks, otherwise solve the relaxation and
// branch on the first variable within a radius of its LP value.

#include <sip/graver.hpp>
#include <sip/lp.hpp>
#include <sip/proximity.hpp>
#include <sip/structure.hpp>

#include <algorithm>
#include <exception>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

namespace sip {

struct RadiusPolicy {
  enum class Mode { Certified, Heuristic };
  Mode mode = Mode::Heuristic;
  long rho0 = 2;
  long growth = 2;
  long cap = 64;
  Int branch_budget = 10000;       // Certified: most branch values per node
  std::size_t graver_columns = 8;  // largest node for the integral unboundedness test
  std::size_t rs_limit = 2;        // Certified: largest r and s tried for the (r,s) bound

  static RadiusPolicy certified() {
    RadiusPolicy p;
    p.mode = Mode::Certified;
    return p;
  }
  static RadiusPolicy heuristic(long rho0 = 2, long growth = 2, long cap = 64) {
    RadiusPolicy p;
    p.rho0 = rho0;
    p.growth = growth;
    p.cap = cap;
    return p;
  }

  void validate() const {
    if (mode == Mode::Heuristic && (rho0 < 1 || growth < 2 || cap < rho0))
      throw argument_error("radius policy: need rho0 >= 1, growth >= 2, cap >= rho0");
  }
};

struct SolveStats {
  std::size_t nodes = 0;
  std::size_t lp_solves = 0;
  Int max_radius = 0;
  std::size_t max_depth = 0;

  void merge(const SolveStats& o) {
    nodes += o.nodes;
    lp_solves += o.lp_solves;
    max_radius = std::max(max_radius, o.max_radius);
    max_depth = std::max(max_depth, o.max_depth);
  }
};

struct IlpResult {
  IlpStatus status;
  bool certified = true;   // the radius reached a proved bound at every node
  bool undecided = false;  // LP unbounded and integral unboundedness not decided
  SolveStats stats;
};

/// Certified mode refuses a node whose proved radius exceeds the budget.
struct radius_refused : budget_exceeded {
  std::string bound;
  radius_refused(const std::string& what, std::string b) : budget_exceeded(what), bound(std::move(b)) {}
};

struct SubProgram {
  IlpInstance instance;
  std::vector<std::size_t> rows;
  std::vector<std::size_t> cols;
};

/// One subprogram per block of the block decomposition.
inline std::vector<SubProgram> split_blocks(const IlpInstance& p) {
  if (p.form != Form::Eq) throw argument_error("split_blocks: instance must be in equality form");
  BlockPartition bp = block_partition(p.A);
  if (!bp.decomposable()) throw argument_error("split_blocks: matrix is not block-decomposable");
  std::vector<SubProgram> parts;
  for (auto& blk : bp.blocks) {
    SubProgram sp;
    sp.instance.A = std::move(blk.sub);
    sp.instance.form = Form::Eq;
    for (auto i : blk.rows) sp.instance.b.push_back(p.b[i]);
    for (auto j : blk.cols) sp.instance.c.push_back(p.c[j]);
    sp.rows = std::move(blk.rows);
    sp.cols = std::move(blk.cols);
    parts.push_back(std::move(sp));
  }
  return parts;
}

/// Places part solutions back at their original column positions.
inline IntVec recombine(const std::vector<SubProgram>& parts, const std::vector<IntVec>& xs, std::size_t m) {
  IntVec x(m, 0);
  for (std::size_t k = 0; k < parts.size(); ++k)
    for (std::size_t q = 0; q < parts[k].cols.size(); ++q) x[parts[k].cols[q]] = xs[k][q];
  return x;
}

/// P'(xi): drop the first column, right-hand side b - xi a_1.
inline IlpInstance fix_first_variable(const IlpInstance& p, const Int& xi) {
  if (p.cols() == 0) throw argument_error("fix_first_variable: no columns");
  if (xi < 0) throw argument_error("fix_first_variable: xi must be nonnegative");
  IlpInstance q;
  q.form = p.form;
  q.A = p.A.without_first_column();
  q.b = p.b;
  for (const auto& e : p.A.entries())
    if (e.col == 0) q.b[e.row] -= xi * e.value;
  q.c.assign(p.c.begin() + 1, p.c.end());
  return q;
}

namespace detail {

struct NodeResult {
  IlpStatus status;
  bool certified = true;
  bool undecided = false;
};

class BranchSolver {
 public:
  BranchSolver(const RadiusPolicy& policy, SolveStats& stats) : policy_(policy), stats_(stats) {}

  NodeResult solve(const IlpInstance& p, std::size_t level, unsigned threads) {
    ++stats_.nodes;
    stats_.max_depth = std::max(stats_.max_depth, level);
    if (auto trivial = solve_trivial(p)) return *trivial;
    if (block_partition(p.A).decomposable()) return solve_split(p, level, threads);
    return solve_branch(p, level, threads);
  }

 private:
  // Programs without rows or without columns.
  static std::optional<NodeResult> solve_trivial(const IlpInstance& p) {
    NodeResult r;
    if (p.cols() == 0) {
      if (!is_zero(p.b)) return r;  // infeasible
      r.status = {Status::Optimal, {}, 0};
      return r;
    }
    if (p.rows() == 0) {
      for (const auto& c : p.c)
        if (c < 0) {
          r.status = IlpStatus::unbounded();
          return r;
        }
      r.status = {Status::Optimal, IntVec(p.cols(), 0), 0};
      return r;
    }
    return std::nullopt;
  }

  NodeResult solve_split(const IlpInstance& p, std::size_t level, unsigned threads) {
    auto parts = split_blocks(p);
    std::vector<NodeResult> results(parts.size());
    std::vector<SolveStats> part_stats(parts.size());
    auto run = [&](std::size_t k, unsigned budget) {
      if (auto t = solve_trivial(parts[k].instance)) {
        results[k] = *t;
        return;
      }
      BranchSolver child(policy_, part_stats[k]);
      results[k] = child.solve(parts[k].instance, level + 1, budget);
    };

    if (threads > 1 && parts.size() > 1) {
      const unsigned workers = std::min<unsigned>(threads, static_cast<unsigned>(parts.size()));
      const unsigned each = std::max(1u, threads / workers);
      std::vector<std::exception_ptr> errors(parts.size());
      std::vector<std::thread> pool;
      for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
          for (std::size_t k = w; k < parts.size(); k += workers) {
            try {
              run(k, each);
            } catch (...) {
              errors[k] = std::current_exception();
            }
          }
        });
      for (auto& t : pool) t.join();
      for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    } else {
      for (std::size_t k = 0; k < parts.size(); ++k) run(k, 1);
    }
    for (const auto& s : part_stats) stats_.merge(s);

    NodeResult out;
    for (const auto& r : results) {
      out.certified = out.certified && r.certified;
      out.undecided = out.undecided || r.undecided;
    }
    // An infeasible part decides the whole program; prefer a certified one.
    for (const auto& r : results)
      if (r.status.status == Status::Infeasible && r.certified) return {IlpStatus::infeasible(), true, false};
    for (const auto& r : results)
      if (r.status.status == Status::Infeasible) return {IlpStatus::infeasible(), false, out.undecided};
    for (const auto& r : results)
      if (r.status.status == Status::Unbounded) {
        out.status = IlpStatus::unbounded();
        return out;
      }
    std::vector<IntVec> xs;
    Rat obj = 0;
    for (const auto& r : results) {
      xs.push_back(r.status.x);
      obj += r.status.objective;
    }
    out.status = {Status::Optimal, recombine(parts, xs, p.cols()), obj};
    return out;
  }

  // Smallest proved proximity bound for this node.
  Int certified_radius(const IlpInstance& p) const {
    const Int delta = std::max(p.A.max_abs(), Int(1));
    Int best = proximity_bound_columns(p.cols(), delta);
    for (std::size_t r = 1; r <= policy_.rs_limit; ++r)
      for (std::size_t s = 1; s <= policy_.rs_limit; ++s) {
        if (r + s >= p.cols() || !is_rs_stochastic(p.A, r, s)) continue;
        try {
          best = std::min(best, proximity_bound_rs(r, s, delta));
        } catch (const bound_too_large&) {
        }
      }
    return best;
  }

  NodeResult solve_unbounded_lp(const IlpInstance& p, std::size_t level, unsigned threads) {
    NodeResult r;
    if (p.cols() > policy_.graver_columns) {
      r.status = IlpStatus::unbounded();
      r.certified = false;
      r.undecided = true;
      return r;
    }
    IlpInstance feas = p;
    std::fill(feas.c.begin(), feas.c.end(), Int(0));
    NodeResult f = solve(feas, level + 1, threads);
    if (f.status.status != Status::Optimal) return f;
    GraverOptions opts;
    opts.max_columns = policy_.graver_columns;
    GraverBasis g = graver_basis(p.A, opts);
    for (const auto& v : g.elements) {
      bool nonneg = std::all_of(v.begin(), v.end(), [](const Int& x) { return x >= 0; });
      if (nonneg && dot(p.c, v) < 0) {
        // a feasible point plus an improving integral ray settles it exactly
        r.status = IlpStatus::unbounded();
        r.certified = true;
        return r;
      }
    }
    // Not reachable with a complete basis; reported rather than guessed.
    r.certified = false;
    r.undecided = true;
    r.status = IlpStatus::unbounded();
    return r;
  }

  NodeResult solve_branch(const IlpInstance& p, std::size_t level, unsigned threads) {
    ++stats_.lp_solves;
    LpResult lp = simplex_solve(p);
    if (lp.status == Status::Infeasible) return {IlpStatus::infeasible(), true, false};
    if (lp.status == Status::Unbounded) return solve_unbounded_lp(p, level, threads);

    const Rat x1 = lp.x[0];
    const bool certified_mode = policy_.mode == RadiusPolicy::Mode::Certified;
    const Int delta = std::max(p.A.max_abs(), Int(1));
    const Int proved = proximity_bound_columns(p.cols(), delta);
    Int rho;
    if (certified_mode) {
      rho = certified_radius(p);
      if (2 * rho + 1 > policy_.branch_budget)
        throw radius_refused("solve_ilp: certified radius " + to_string(rho) + " exceeds the branch budget of " +
                                 to_string(policy_.branch_budget) + " values",
                             to_string(rho));
    } else {
      rho = policy_.rho0;
    }

    NodeResult best;
    bool have = false;
    bool all_certified = true;
    bool any_undecided = false;
    std::set<Int> tried;
    for (;;) {
      stats_.max_radius = std::max(stats_.max_radius, rho);
      Int lo = std::max(Int(0), ceil(x1 - rho)), hi = floor(x1 + rho);
      for (Int xi = lo; xi <= hi; ++xi) {
        if (!tried.insert(xi).second) continue;
        IlpInstance child = fix_first_variable(p, xi);
        auto leaf = solve_trivial(child);
        NodeResult r = leaf ? *leaf : solve(child, level + 1, threads);
        all_certified = all_certified && r.certified;
        any_undecided = any_undecided || r.undecided;
        if (r.status.status == Status::Unbounded) {
          r.certified = r.certified && all_certified;
          return r;
        }
        if (r.status.status != Status::Optimal) continue;
        Rat value = Rat(p.c[0] * xi) + r.status.objective;
        if (!have || value < best.status.objective) {
          have = true;
          IntVec x{xi};
          x.insert(x.end(), r.status.x.begin(), r.status.x.end());
          best.status = {Status::Optimal, std::move(x), value};
        }
      }
      if (have || certified_mode || rho >= policy_.cap) break;
      rho = std::min(Int(rho * policy_.growth), Int(policy_.cap));
    }
    const bool radius_ok = certified_mode || rho >= proved;
    best.certified = radius_ok && all_certified;
    best.undecided = any_undecided;
    if (!have) best.status = IlpStatus::infeasible();
    return best;
  }

  const RadiusPolicy& policy_;
  SolveStats& stats_;
};

}  // namespace detail

/// Solves min c^T x, Ax = b, x >= 0 over the integers. Leq programs are
/// converted with slack columns first; x then excludes the slacks.
inline IlpResult solve_ilp(const IlpInstance& p, const RadiusPolicy& policy = {}, unsigned threads = 1) {
  policy.validate();
  p.validate();
  IlpInstance q = p;
  if (p.form == Form::Leq) {
    q.A = hstack(p.A, sparse_identity(p.rows()));
    q.c.resize(p.cols() + p.rows(), Int(0));
    q.form = Form::Eq;
  }
  IlpResult out;
  detail::BranchSolver solver(policy, out.stats);
  detail::NodeResult r = solver.solve(q, 0, std::max(1u, threads));
  out.status = r.status;
  out.certified = r.certified;
  out.undecided = r.undecided;
  if (out.status.optimal()) out.status.x.resize(p.cols());
  return out;
}

}  // namespace sip
