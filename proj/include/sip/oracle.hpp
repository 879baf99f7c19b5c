#pragma once

// Ground truth by enumeration, and reproducible random instances.

#include <sip/lp.hpp>
#include <sip/rng.hpp>
#include <sip/structure.hpp>

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace sip {

// ---------------------------------------------------------------------------
// Enumeration

namespace detail {

// Depth-first enumeration of integer points of {Ax = b, 0 <= x <= box} in
// lexicographic order; visit(x) is called for each.
class BoxEnumerator {
 public:
  BoxEnumerator(const IlpInstance& p, const IntVec& lo, const IntVec& hi) : p_(p), lo_(lo), hi_(hi) {
    const std::size_t n = p.rows(), m = p.cols();
    cols_.assign(m, {});
    for (const auto& e : p.A.entries()) cols_[e.col].push_back({e.row, e.value});
    // reach_lo/hi[k][i]: range of sum_{j >= k} A_ij x_j over the box
    reach_lo_.assign(m + 1, IntVec(n, 0));
    reach_hi_.assign(m + 1, IntVec(n, 0));
    for (std::size_t k = m; k-- > 0;) {
      reach_lo_[k] = reach_lo_[k + 1];
      reach_hi_[k] = reach_hi_[k + 1];
      for (const auto& [i, a] : cols_[k]) {
        Int u = a * lo_[k], v = a * hi_[k];
        reach_lo_[k][i] += std::min(u, v);
        reach_hi_[k][i] += std::max(u, v);
      }
    }
  }

  void run(const std::function<void(const IntVec&)>& visit) {
    x_.assign(p_.cols(), 0);
    partial_.assign(p_.rows(), 0);
    visit_ = &visit;
    go(0);
  }

 private:
  void go(std::size_t k) {
    for (std::size_t i = 0; i < p_.rows(); ++i) {
      Int need = p_.b[i] - partial_[i];
      if (need < reach_lo_[k][i] || need > reach_hi_[k][i]) return;
    }
    if (k == p_.cols()) {
      (*visit_)(x_);
      return;
    }
    for (Int v = lo_[k]; v <= hi_[k]; ++v) {
      x_[k] = v;
      for (const auto& [i, a] : cols_[k]) partial_[i] += a * v;
      go(k + 1);
      for (const auto& [i, a] : cols_[k]) partial_[i] -= a * v;
    }
    x_[k] = 0;
  }

  const IlpInstance& p_;
  IntVec lo_, hi_;
  std::vector<std::vector<std::pair<std::size_t, Int>>> cols_;
  std::vector<IntVec> reach_lo_, reach_hi_;
  IntVec x_, partial_;
  const std::function<void(const IntVec&)>* visit_ = nullptr;
};

inline void check_box(const IlpInstance& p, const IntVec& box, const Int& max_volume) {
  if (p.form != Form::Eq) throw argument_error("brute_force_ilp: instance must be in equality form");
  p.validate();
  if (box.size() != p.cols()) throw dimension_error("brute_force_ilp: box has the wrong dimension");
  Int volume = 1;
  for (const auto& v : box) {
    if (v < 0) throw argument_error("brute_force_ilp: negative box bound");
    volume *= v + 1;
    if (volume > max_volume) throw budget_exceeded("brute_force_ilp: box volume exceeds " + to_string(max_volume));
  }
}

}  // namespace detail

/// Exact minimum over the integer points of {Ax = b, 0 <= x <= box}; ties go
/// to the lexicographically smallest point. Never reports Unbounded.
inline IlpStatus brute_force_ilp(const IlpInstance& p, const IntVec& box, const Int& max_volume = 100000000) {
  detail::check_box(p, box, max_volume);
  IlpStatus best = IlpStatus::infeasible();
  Int best_obj;
  detail::BoxEnumerator(p, IntVec(p.cols(), 0), box).run([&](const IntVec& x) {
    Int obj = p.objective(x);
    if (!best.optimal() || obj < best_obj) {
      best.status = Status::Optimal;
      best.x = x;
      best_obj = obj;
    }
  });
  if (best.optimal()) best.objective = best_obj;
  return best;
}

struct AllOptima {
  Status status = Status::Infeasible;
  Int objective;
  std::vector<IntVec> points;  // lexicographic order
};

/// Every optimal integer point inside the box.
inline AllOptima brute_force_all_optima(const IlpInstance& p, const IntVec& box, const Int& max_volume = 100000000) {
  detail::check_box(p, box, max_volume);
  AllOptima out;
  detail::BoxEnumerator(p, IntVec(p.cols(), 0), box).run([&](const IntVec& x) {
    Int obj = p.objective(x);
    if (out.status != Status::Optimal || obj < out.objective) {
      out.status = Status::Optimal;
      out.objective = obj;
      out.points.clear();
    }
    if (obj == out.objective) out.points.push_back(x);
  });
  return out;
}

/// A box that contains every optimal integer point of an equality program
/// with known feasible point z: floor of max x_i over {Ax = b, x >= 0,
/// c^T x <= c^T z}. nullopt when that region is unbounded.
inline std::optional<IntVec> provable_box(const IlpInstance& p, const IntVec& z) {
  if (p.form != Form::Eq) throw argument_error("provable_box: instance must be in equality form");
  if (!p.feasible(z)) throw argument_error("provable_box: z is not feasible");
  const std::size_t m = p.cols();
  IlpInstance q;
  std::vector<Entry> e = p.A.entries();
  for (std::size_t j = 0; j < m; ++j)
    if (p.c[j] != 0) e.push_back({p.rows(), j, p.c[j]});
  e.push_back({p.rows(), m, 1});
  q.A = SparseIntMatrix::from_entries(p.rows() + 1, m + 1, e);
  q.b = p.b;
  q.b.push_back(p.objective(z));
  q.c.assign(m + 1, 0);
  IntVec box(m);
  for (std::size_t j = 0; j < m; ++j) {
    RatVec obj(m + 1, Rat(0));
    obj[j] = -1;
    LpResult r = simplex_solve(q, obj);
    if (r.status != Status::Optimal) return std::nullopt;
    box[j] = floor(-r.objective);
  }
  return box;
}

// ---------------------------------------------------------------------------
// Instance generation

struct RsFamily {
  std::size_t t = 2, r = 1, s = 2;
};

struct MultistageFamily {
  std::size_t d = 2, branching = 2;
};

struct GenParams {
  std::variant<RsFamily, MultistageFamily> family = RsFamily{};
  long delta = 2;
  std::size_t rows_per_block = 1;
  long magnitude = 2;  // planted point entries in [0, magnitude]
  std::uint64_t seed = 0;
};

struct GeneratedInstance {
  IlpInstance instance;
  IntVec planted;  // A planted = b
};

namespace detail {

inline void gen_entries(Rng& rng, long delta, std::size_t row, const std::vector<std::size_t>& cols,
                        std::vector<Entry>& out) {
  for (auto j : cols)
    if (long v = rng.uniform(-delta, delta)) out.push_back({row, j, v});
}

}  // namespace detail

/// Random program with entries in [-delta, delta], b = A z for a random
/// nonnegative integral z, and c in [-delta, delta]. Deterministic per seed.
inline GeneratedInstance gen_instance(const GenParams& p) {
  if (p.delta < 1 || p.rows_per_block < 1 || p.magnitude < 0)
    throw argument_error("gen_instance: counts must be positive");
  Rng rng(p.seed);
  std::vector<Entry> e;
  std::size_t rows = 0, cols = 0;
  if (const auto* rs = std::get_if<RsFamily>(&p.family)) {
    if (rs->t < 1 || rs->s < 1) throw argument_error("gen_instance: t and s must be positive");
    std::vector<std::size_t> globals(rs->r);
    for (std::size_t j = 0; j < rs->r; ++j) globals[j] = j;
    cols = rs->r;
    for (std::size_t b = 0; b < rs->t; ++b) {
      std::vector<std::size_t> support = globals;
      for (std::size_t j = 0; j < rs->s; ++j) support.push_back(cols + j);
      for (std::size_t i = 0; i < p.rows_per_block; ++i) detail::gen_entries(rng, p.delta, rows++, support, e);
      cols += rs->s;
    }
  } else {
    const auto& ms = std::get<MultistageFamily>(p.family);
    if (ms.d < 1 || ms.branching < 1) throw argument_error("gen_instance: d and branching must be positive");
    std::function<void(std::size_t, std::vector<std::size_t>)> grow = [&](std::size_t level,
                                                                           std::vector<std::size_t> path) {
      path.push_back(cols++);
      if (level + 1 == ms.d) {
        for (std::size_t i = 0; i < p.rows_per_block; ++i) detail::gen_entries(rng, p.delta, rows++, path, e);
        return;
      }
      for (std::size_t k = 0; k < ms.branching; ++k) grow(level + 1, path);
    };
    grow(0, {});
  }
  GeneratedInstance g;
  g.instance.A = SparseIntMatrix::from_entries(rows, cols, e);
  g.planted.resize(cols);
  for (auto& z : g.planted) z = rng.uniform(0, p.magnitude);
  g.instance.b = g.instance.A * g.planted;
  g.instance.c.resize(cols);
  for (auto& c : g.instance.c) c = rng.uniform(-p.delta, p.delta);
  g.instance.form = Form::Eq;
  return g;
}

struct Scrambled {
  IlpInstance instance;
  std::vector<std::size_t> row_order;  // new row k = old row row_order[k]
  std::vector<std::size_t> col_order;  // new column k = old column col_order[k]

  /// Maps a solution of the scrambled program back to the original columns.
  IntVec unscramble(const IntVec& x) const {
    IntVec out(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) out[col_order[k]] = x[k];
    return out;
  }
  /// Maps a solution of the original program to the scrambled columns.
  IntVec scramble(const IntVec& x) const {
    IntVec out(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) out[k] = x[col_order[k]];
    return out;
  }
};

/// Random row and column permutations of P.
inline Scrambled scramble(const IlpInstance& p, std::uint64_t seed) {
  Rng rng(seed);
  Scrambled s;
  s.row_order.resize(p.rows());
  s.col_order.resize(p.cols());
  for (std::size_t i = 0; i < p.rows(); ++i) s.row_order[i] = i;
  for (std::size_t j = 0; j < p.cols(); ++j) s.col_order[j] = j;
  rng.shuffle(s.row_order);
  rng.shuffle(s.col_order);
  s.instance.A = p.A.permuted(s.row_order, s.col_order);
  s.instance.form = p.form;
  for (auto i : s.row_order) s.instance.b.push_back(p.b[i]);
  for (auto j : s.col_order) s.instance.c.push_back(p.c[j]);
  return s;
}

}  // namespace sip
