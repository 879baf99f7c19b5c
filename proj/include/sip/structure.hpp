#pragma once

// Sparse integer matrices and detection of block structure: block
// partitions, depth, primal graphs, elimination forests and (r,s)
// stochastic decompositions.

#include <sip/numerics.hpp>

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

namespace sip {

inline constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

struct Entry {
  std::size_t row;
  std::size_t col;
  Int value;

  friend bool operator==(const Entry&, const Entry&) = default;
};

/// Integer matrix stored as its list of nonzero entries, sorted by (row, col).
class SparseIntMatrix {
 public:
  SparseIntMatrix() = default;
  SparseIntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {}

  /// Validating constructor. Entries may come in any order; zero values,
  /// duplicate positions and out-of-range indices are rejected.
  static SparseIntMatrix from_entries(std::size_t rows, std::size_t cols, std::vector<Entry> entries) {
    for (const auto& e : entries) {
      if (e.row >= rows || e.col >= cols)
        throw argument_error("entry (" + std::to_string(e.row) + "," + std::to_string(e.col) +
                             ") out of range for " + std::to_string(rows) + "x" + std::to_string(cols));
      if (e.value == 0)
        throw argument_error("zero entry at (" + std::to_string(e.row) + "," + std::to_string(e.col) + ")");
    }
    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) { return std::tie(a.row, a.col) < std::tie(b.row, b.col); });
    for (std::size_t k = 1; k < entries.size(); ++k)
      if (entries[k].row == entries[k - 1].row && entries[k].col == entries[k - 1].col)
        throw argument_error("duplicate entry at (" + std::to_string(entries[k].row) + "," +
                             std::to_string(entries[k].col) + ")");
    SparseIntMatrix m(rows, cols);
    m.entries_ = std::move(entries);
    return m;
  }

  static SparseIntMatrix from_dense(const IntMatrix& d) {
    SparseIntMatrix m(d.rows(), d.cols());
    for (std::size_t i = 0; i < d.rows(); ++i)
      for (std::size_t j = 0; j < d.cols(); ++j)
        if (d(i, j) != 0) m.entries_.push_back({i, j, d(i, j)});
    return m;
  }

  static SparseIntMatrix from_dense(std::initializer_list<std::initializer_list<long>> rows) {
    IntMatrix d(rows.size(), rows.size() ? rows.begin()->size() : 0);
    std::size_t i = 0;
    for (const auto& row : rows) {
      if (row.size() != d.cols()) throw dimension_error("from_dense: ragged rows");
      std::size_t j = 0;
      for (long v : row) d(i, j++) = v;
      ++i;
    }
    return from_dense(d);
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const std::vector<Entry>& entries() const { return entries_; }
  std::size_t nnz() const { return entries_.size(); }

  Int at(std::size_t i, std::size_t j) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), std::pair{i, j}, [](const Entry& e, const auto& key) {
      return std::tie(e.row, e.col) < std::tie(key.first, key.second);
    });
    if (it != entries_.end() && it->row == i && it->col == j) return it->value;
    return 0;
  }

  IntMatrix to_dense() const {
    IntMatrix d(rows_, cols_);
    for (const auto& e : entries_) d(e.row, e.col) = e.value;
    return d;
  }

  /// Largest absolute entry, ||A||_inf in the entrywise sense.
  Int max_abs() const {
    Int best = 0;
    for (const auto& e : entries_) best = std::max(best, abs(e.value));
    return best;
  }

  template <class T>
  std::vector<T> operator*(const std::vector<T>& x) const {
    if (x.size() != cols_) throw dimension_error("sparse product: dimension mismatch");
    std::vector<T> y(rows_, T(0));
    for (const auto& e : entries_) y[e.row] += e.value * x[e.col];
    return y;
  }

  /// Inner products of every column with y (A^T y), over column entry lists.
  template <class T>
  std::vector<T> transpose_times(const std::vector<T>& y) const {
    if (y.size() != rows_) throw dimension_error("transposed product: dimension mismatch");
    std::vector<T> out(cols_, T(0));
    for (const auto& e : entries_) out[e.col] += e.value * y[e.row];
    return out;
  }

  /// Nonzero column indices per row.
  std::vector<std::vector<std::size_t>> row_supports() const {
    std::vector<std::vector<std::size_t>> s(rows_);
    for (const auto& e : entries_) s[e.row].push_back(e.col);
    return s;
  }

  SparseIntMatrix transpose() const {
    std::vector<Entry> t;
    t.reserve(entries_.size());
    for (const auto& e : entries_) t.push_back({e.col, e.row, e.value});
    return from_entries(cols_, rows_, std::move(t));
  }

  SparseIntMatrix negated() const {
    SparseIntMatrix m = *this;
    for (auto& e : m.entries_) e.value = -e.value;
    return m;
  }

  /// Rows `row_ids` and columns `col_ids` (in the given order), reindexed.
  SparseIntMatrix submatrix(const std::vector<std::size_t>& row_ids, const std::vector<std::size_t>& col_ids) const {
    std::vector<std::size_t> rmap(rows_, npos), cmap(cols_, npos);
    for (std::size_t k = 0; k < row_ids.size(); ++k) rmap.at(row_ids[k]) = k;
    for (std::size_t k = 0; k < col_ids.size(); ++k) cmap.at(col_ids[k]) = k;
    std::vector<Entry> sub;
    for (const auto& e : entries_)
      if (rmap[e.row] != npos && cmap[e.col] != npos) sub.push_back({rmap[e.row], cmap[e.col], e.value});
    return from_entries(row_ids.size(), col_ids.size(), std::move(sub));
  }

  /// New row k is old row row_order[k]; new column k is old column col_order[k].
  SparseIntMatrix permuted(const std::vector<std::size_t>& row_order, const std::vector<std::size_t>& col_order) const {
    if (row_order.size() != rows_ || col_order.size() != cols_) throw dimension_error("permuted: wrong permutation size");
    return submatrix(row_order, col_order);
  }

  SparseIntMatrix without_first_column() const {
    if (cols_ == 0) throw dimension_error("without_first_column: no columns");
    std::vector<Entry> sub;
    for (const auto& e : entries_)
      if (e.col != 0) sub.push_back({e.row, e.col - 1, e.value});
    SparseIntMatrix m(rows_, cols_ - 1);
    m.entries_ = std::move(sub);
    return m;
  }

  std::vector<Int> column(std::size_t j) const {
    std::vector<Int> c(rows_, Int(0));
    for (const auto& e : entries_)
      if (e.col == j) c[e.row] = e.value;
    return c;
  }

  bool has_zero_column() const {
    std::vector<bool> seen(cols_, false);
    for (const auto& e : entries_) seen[e.col] = true;
    return std::find(seen.begin(), seen.end(), false) != seen.end();
  }

  friend bool operator==(const SparseIntMatrix&, const SparseIntMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Entry> entries_;
};

/// [A; B] stacked vertically.
inline SparseIntMatrix vstack(const SparseIntMatrix& a, const SparseIntMatrix& b) {
  if (a.cols() != b.cols()) throw dimension_error("vstack: column count mismatch");
  std::vector<Entry> e = a.entries();
  for (const auto& x : b.entries()) e.push_back({x.row + a.rows(), x.col, x.value});
  return SparseIntMatrix::from_entries(a.rows() + b.rows(), a.cols(), std::move(e));
}

/// [A B] side by side.
inline SparseIntMatrix hstack(const SparseIntMatrix& a, const SparseIntMatrix& b) {
  if (a.rows() != b.rows()) throw dimension_error("hstack: row count mismatch");
  std::vector<Entry> e = a.entries();
  for (const auto& x : b.entries()) e.push_back({x.row, x.col + a.cols(), x.value});
  return SparseIntMatrix::from_entries(a.rows(), a.cols() + b.cols(), std::move(e));
}

inline SparseIntMatrix sparse_identity(std::size_t n) {
  std::vector<Entry> e;
  for (std::size_t i = 0; i < n; ++i) e.push_back({i, i, 1});
  return SparseIntMatrix::from_entries(n, n, std::move(e));
}

// ---------------------------------------------------------------------------
// Block partition

struct Block {
  std::vector<std::size_t> rows;  // ascending original row indices
  std::vector<std::size_t> cols;  // ascending, contiguous column range
  SparseIntMatrix sub;
};

struct BlockPartition {
  std::vector<Block> blocks;

  std::size_t size() const { return blocks.size(); }
  bool decomposable() const { return blocks.size() > 1; }
};

/// Finest block-diagonal presentation of M, allowing rows to be reordered
/// but keeping the column order. Blocks with columns come first, ordered by
/// column position; all-zero rows follow as column-less blocks.
inline BlockPartition block_partition(const SparseIntMatrix& m) {
  const auto supports = m.row_supports();
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < m.rows(); ++i)
    if (!supports[i].empty()) order.push_back(i);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return supports[a].front() < supports[b].front(); });

  struct Group {
    std::size_t lo, hi;
    std::vector<std::size_t> rows;
  };
  std::vector<Group> groups;
  for (std::size_t i : order) {
    std::size_t first = supports[i].front(), last = supports[i].back();
    if (groups.empty() || first > groups.back().hi) {
      groups.push_back({first, last, {i}});
    } else {
      groups.back().hi = std::max(groups.back().hi, last);
      groups.back().rows.push_back(i);
    }
  }

  BlockPartition bp;
  auto emit = [&](std::vector<std::size_t> rows, std::size_t lo, std::size_t hi_excl) {
    std::sort(rows.begin(), rows.end());
    std::vector<std::size_t> cols(hi_excl - lo);
    std::iota(cols.begin(), cols.end(), lo);
    Block b{std::move(rows), std::move(cols), {}};
    b.sub = m.submatrix(b.rows, b.cols);
    bp.blocks.push_back(std::move(b));
  };
  std::size_t next_col = 0;
  for (auto& g : groups) {
    for (; next_col < g.lo; ++next_col) emit({}, next_col, next_col + 1);
    emit(std::move(g.rows), g.lo, g.hi + 1);
    next_col = g.hi + 1;
  }
  for (; next_col < m.cols(); ++next_col) emit({}, next_col, next_col + 1);
  for (std::size_t i = 0; i < m.rows(); ++i)
    if (supports[i].empty()) {
      Block b{{i}, {}, {}};
      b.sub = SparseIntMatrix(1, 0);
      bp.blocks.push_back(std::move(b));
    }
  return bp;
}

/// Recursive depth: 0 without columns, the maximum over blocks when
/// decomposable, otherwise one more than the depth after dropping the first
/// column.
inline std::size_t depth(const SparseIntMatrix& m) {
  if (m.cols() == 0) return 0;
  auto bp = block_partition(m);
  if (bp.decomposable()) {
    std::size_t d = 0;
    for (const auto& b : bp.blocks) d = std::max(d, depth(b.sub));
    return d;
  }
  return 1 + depth(m.without_first_column());
}

// ---------------------------------------------------------------------------
// Primal graph

struct Graph {
  std::size_t n = 0;
  std::vector<std::vector<std::size_t>> adj;  // sorted neighbour lists

  bool adjacent(std::size_t a, std::size_t b) const {
    return std::binary_search(adj[a].begin(), adj[a].end(), b);
  }
  std::size_t edge_count() const {
    std::size_t e = 0;
    for (const auto& l : adj) e += l.size();
    return e / 2;
  }

  /// Connected components of the subgraph induced by `alive`, each sorted,
  /// ordered by smallest vertex.
  std::vector<std::vector<std::size_t>> components(const std::vector<bool>& alive) const {
    std::vector<std::vector<std::size_t>> out;
    std::vector<bool> seen(n, false);
    for (std::size_t s = 0; s < n; ++s) {
      if (!alive[s] || seen[s]) continue;
      std::vector<std::size_t> comp{s}, stack{s};
      seen[s] = true;
      while (!stack.empty()) {
        auto v = stack.back();
        stack.pop_back();
        for (auto w : adj[v])
          if (alive[w] && !seen[w]) {
            seen[w] = true;
            comp.push_back(w);
            stack.push_back(w);
          }
      }
      std::sort(comp.begin(), comp.end());
      out.push_back(std::move(comp));
    }
    return out;
  }
};

/// Columns are adjacent iff some row has nonzeros in both.
inline Graph primal_graph(const SparseIntMatrix& a) {
  Graph g;
  g.n = a.cols();
  g.adj.resize(g.n);
  for (const auto& sup : a.row_supports())
    for (std::size_t x = 0; x < sup.size(); ++x)
      for (std::size_t y = x + 1; y < sup.size(); ++y) {
        g.adj[sup[x]].push_back(sup[y]);
        g.adj[sup[y]].push_back(sup[x]);
      }
  for (auto& l : g.adj) {
    std::sort(l.begin(), l.end());
    l.erase(std::unique(l.begin(), l.end()), l.end());
  }
  return g;
}

// ---------------------------------------------------------------------------
// Treedepth and elimination forests

struct EliminationForest {
  std::vector<std::size_t> parent;  // npos marks a root
  std::size_t depth = 0;

  /// Number of vertices on the root path of v, v included.
  std::size_t level(std::size_t v) const {
    std::size_t l = 1;
    while (parent[v] != npos) {
      v = parent[v];
      ++l;
    }
    return l;
  }

  bool is_ancestor_or_self(std::size_t anc, std::size_t v) const {
    for (; v != npos; v = parent[v])
      if (v == anc) return true;
    return false;
  }
};

struct DepthWitness {
  std::vector<std::size_t> row_order;  // new row k = old row row_order[k]
  std::vector<std::size_t> col_order;  // new column k = old column col_order[k]
  EliminationForest forest;
};

namespace detail {

/// Exact treedepth of connected induced subgraphs, memoised on vertex masks.
class TreedepthSolver {
 public:
  explicit TreedepthSolver(const Graph& g) : g_(g) {
    if (g.n > 64) throw budget_exceeded("treedepth search supports at most 64 columns per component");
    nbr_.assign(g.n, 0);
    for (std::size_t v = 0; v < g.n; ++v)
      for (auto w : g.adj[v]) nbr_[v] |= std::uint64_t{1} << w;
  }

  /// Treedepth of the (connected) set `mask`, or limit+1 if it exceeds limit.
  int td(std::uint64_t mask, int limit) {
    int cnt = std::popcount(mask);
    if (cnt <= 1) return cnt;
    if (auto it = exact_.find(mask); it != exact_.end()) return std::min(it->second, limit + 1);
    if (auto it = lower_.find(mask); it != lower_.end() && it->second > limit) return limit + 1;
    if (limit <= 0) return limit + 1;
    // A clique needs all of its vertices.
    bool clique = true;
    for (std::uint64_t rest = mask; rest && clique; rest &= rest - 1) {
      int v = std::countr_zero(rest);
      if ((nbr_[v] & mask) != (mask & ~(std::uint64_t{1} << v))) clique = false;
    }
    if (clique) {
      exact_[mask] = cnt;
      return std::min(cnt, limit + 1);
    }
    int best = limit + 1;
    for (std::uint64_t rest = mask; rest; rest &= rest - 1) {
      int v = std::countr_zero(rest);
      int worst = 0;
      for (auto comp : split(mask & ~(std::uint64_t{1} << v))) {
        worst = std::max(worst, td(comp, best - 2));
        if (worst >= best - 1) break;
      }
      if (1 + worst < best) best = 1 + worst;
    }
    if (best <= limit) {
      exact_[mask] = best;
    } else {
      auto& lb = lower_[mask];
      lb = std::max(lb, limit + 1);
    }
    return best;
  }

  /// Vertex whose removal realises td(mask) (mask connected, td known <= limit).
  int best_root(std::uint64_t mask) {
    int target = td(mask, 64);
    for (std::uint64_t rest = mask; rest; rest &= rest - 1) {
      int v = std::countr_zero(rest);
      int worst = 0;
      for (auto comp : split(mask & ~(std::uint64_t{1} << v))) worst = std::max(worst, td(comp, target - 1));
      if (1 + worst == target) return v;
    }
    return std::countr_zero(mask);
  }

  std::vector<std::uint64_t> split(std::uint64_t mask) const {
    std::vector<std::uint64_t> comps;
    while (mask) {
      std::uint64_t comp = mask & (~mask + 1), frontier = comp;
      while (frontier) {
        std::uint64_t next = 0;
        for (std::uint64_t f = frontier; f; f &= f - 1) next |= nbr_[std::countr_zero(f)];
        next &= mask & ~comp;
        comp |= next;
        frontier = next;
      }
      comps.push_back(comp);
      mask &= ~comp;
    }
    return comps;
  }

 private:
  const Graph& g_;
  std::vector<std::uint64_t> nbr_;
  std::unordered_map<std::uint64_t, int> exact_;
  std::unordered_map<std::uint64_t, int> lower_;
};

}  // namespace detail

/// Exact treedepth of a graph (at most 64 vertices).
inline std::size_t treedepth(const Graph& g) {
  detail::TreedepthSolver solver(g);
  int best = 0;
  std::uint64_t all = g.n == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << g.n) - 1);
  for (auto comp : solver.split(all)) best = std::max(best, solver.td(comp, 64));
  return static_cast<std::size_t>(best);
}

/// Finds row/column orders under which depth(A) <= d, via an optimal
/// elimination forest of the primal graph; nullopt when td_P(A) > d.
inline std::optional<DepthWitness> find_depth_permutation(const SparseIntMatrix& a, std::size_t d) {
  const Graph g = primal_graph(a);
  detail::TreedepthSolver solver(g);
  const int limit = static_cast<int>(std::min<std::size_t>(d, 64));
  std::uint64_t all = g.n == 64 ? ~std::uint64_t{0} : (g.n ? ((std::uint64_t{1} << g.n) - 1) : 0);

  EliminationForest forest;
  forest.parent.assign(g.n, npos);
  std::vector<std::size_t> col_order;

  // Pre-order construction: pick the optimal root, recurse on components.
  auto build = [&](auto&& self, std::uint64_t mask, std::size_t parent, std::size_t level) -> void {
    int v = solver.best_root(mask);
    forest.parent[v] = parent;
    forest.depth = std::max(forest.depth, level);
    col_order.push_back(static_cast<std::size_t>(v));
    for (auto comp : solver.split(mask & ~(std::uint64_t{1} << v))) self(self, comp, static_cast<std::size_t>(v), level + 1);
  };
  for (auto comp : solver.split(all)) {
    if (solver.td(comp, limit) > limit) return std::nullopt;
    build(build, comp, npos, 1);
  }

  std::vector<std::size_t> pos(g.n);
  for (std::size_t k = 0; k < col_order.size(); ++k) pos[col_order[k]] = k;
  const auto supports = a.row_supports();
  auto first_pos = [&](std::size_t i) {
    std::size_t p = npos;
    for (auto c : supports[i]) p = std::min(p, pos[c]);
    return p;
  };
  std::vector<std::size_t> row_order(a.rows());
  std::iota(row_order.begin(), row_order.end(), 0);
  std::stable_sort(row_order.begin(), row_order.end(),
                   [&](std::size_t x, std::size_t y) { return first_pos(x) < first_pos(y); });
  return DepthWitness{std::move(row_order), std::move(col_order), std::move(forest)};
}

// ---------------------------------------------------------------------------
// (r,s)-stochastic decompositions

struct StochasticBlock {
  std::vector<std::size_t> rows;  // original row indices
  std::vector<std::size_t> cols;  // original column indices of B_i
  SparseIntMatrix a_part;         // rows x global columns
  SparseIntMatrix b_part;         // rows x cols
};

struct StochasticDecomposition {
  std::size_t r = 0;                   // number of global columns actually used
  std::size_t t = 0;                   // number of blocks
  std::vector<std::size_t> globals;    // original indices of the global columns
  std::vector<std::size_t> row_order;  // new row k = old row row_order[k]
  std::vector<std::size_t> col_order;  // new column k = old column col_order[k]
  std::vector<StochasticBlock> blocks;
};

/// True iff removing the first r columns leaves only blocks of <= s columns.
inline bool is_rs_stochastic(const SparseIntMatrix& a, std::size_t r, std::size_t s) {
  SparseIntMatrix rest = a;
  for (std::size_t k = 0; k < r && rest.cols() > 0; ++k) rest = rest.without_first_column();
  for (const auto& b : block_partition(rest).blocks)
    if (b.cols.size() > s) return false;
  return true;
}

/// Searches for at most r columns whose removal leaves primal-graph
/// components of at most s columns, and lays the matrix out accordingly.
inline std::optional<StochasticDecomposition> find_rs_decomposition(const SparseIntMatrix& a, std::size_t r,
                                                                     std::size_t s) {
  const Graph g = primal_graph(a);
  std::vector<bool> alive(g.n, true);
  std::vector<std::size_t> chosen;

  auto search = [&](auto&& self) -> bool {
    auto comps = g.components(alive);
    const std::vector<std::size_t>* big = nullptr;
    for (const auto& c : comps)
      if (c.size() > s) {
        big = &c;
        break;
      }
    if (!big) return true;
    if (chosen.size() == r) return false;
    // Some vertex of any connected (s+1)-subset must be removed.
    std::vector<std::size_t> sub{big->front()};
    std::vector<bool> in(g.n, false);
    in[big->front()] = true;
    for (std::size_t k = 0; k < sub.size() && sub.size() < s + 1; ++k)
      for (auto w : g.adj[sub[k]])
        if (alive[w] && !in[w] && sub.size() < s + 1) {
          in[w] = true;
          sub.push_back(w);
        }
    for (auto v : sub) {
      alive[v] = false;
      chosen.push_back(v);
      if (self(self)) return true;
      chosen.pop_back();
      alive[v] = true;
    }
    return false;
  };
  if (!search(search)) return std::nullopt;

  StochasticDecomposition dec;
  dec.globals = chosen;
  std::sort(dec.globals.begin(), dec.globals.end());
  dec.r = dec.globals.size();
  dec.col_order = dec.globals;
  auto comps = g.components(alive);
  std::vector<std::size_t> comp_of(g.n, npos);
  for (std::size_t k = 0; k < comps.size(); ++k)
    for (auto v : comps[k]) {
      comp_of[v] = k;
      dec.col_order.push_back(v);
    }

  const auto supports = a.row_supports();
  std::vector<std::vector<std::size_t>> rows_of(comps.size());
  std::vector<std::size_t> global_only;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    std::size_t k = npos;
    for (auto c : supports[i])
      if (comp_of[c] != npos) k = comp_of[c];
    if (k == npos)
      global_only.push_back(i);
    else
      rows_of[k].push_back(i);
  }
  for (std::size_t k = 0; k < comps.size(); ++k) {
    dec.row_order.insert(dec.row_order.end(), rows_of[k].begin(), rows_of[k].end());
    dec.blocks.push_back({rows_of[k], comps[k], a.submatrix(rows_of[k], dec.globals), a.submatrix(rows_of[k], comps[k])});
  }
  for (auto i : global_only) {
    dec.row_order.push_back(i);
    dec.blocks.push_back({{i}, {}, a.submatrix({i}, dec.globals), SparseIntMatrix(1, 0)});
  }
  dec.t = dec.blocks.size();
  return dec;
}

}  // namespace sip
