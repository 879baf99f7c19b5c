#include <sip/structure.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <functional>
#include <numeric>
#include <random>
#include <set>

namespace {

using sip::SparseIntMatrix;

SparseIntMatrix random_sparse(std::mt19937_64& rng, std::size_t rows, std::size_t cols, double density) {
  std::bernoulli_distribution keep(density);
  std::uniform_int_distribution<long> val(1, 2);
  std::bernoulli_distribution neg(0.5);
  std::vector<sip::Entry> e;
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      if (keep(rng)) e.push_back({i, j, neg(rng) ? -val(rng) : val(rng)});
  return SparseIntMatrix::from_entries(rows, cols, e);
}

// Block-diagonal matrix whose rows are shuffled afterwards.
SparseIntMatrix random_block_diagonal(std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> nb(1, 4), sz(0, 3);
  std::vector<sip::Entry> e;
  std::size_t r0 = 0, c0 = 0;
  for (std::size_t b = nb(rng); b > 0; --b) {
    std::size_t r = sz(rng), c = sz(rng);
    // Connected unless degenerate: first row and first column are full.
    auto blk = random_sparse(rng, r, c, 0.4).to_dense();
    for (std::size_t j = 0; j < c && r > 0; ++j) blk(0, j) = 1;
    for (std::size_t i = 0; i < r && c > 0; ++i) blk(i, 0) = -1;
    auto sparse = SparseIntMatrix::from_dense(blk);
    for (const auto& x : sparse.entries()) e.push_back({x.row + r0, x.col + c0, x.value});
    r0 += r;
    c0 += c;
  }
  std::vector<std::size_t> perm(r0);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  for (auto& x : e) x.row = perm[x.row];
  return SparseIntMatrix::from_entries(r0, c0, e);
}

// Connected components of the bipartite row/column incidence graph.
std::set<std::pair<std::set<std::size_t>, std::set<std::size_t>>> incidence_components(const SparseIntMatrix& m) {
  std::vector<std::size_t> parent(m.rows() + m.cols());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    return parent[x] == x ? x : parent[x] = find(parent[x]);
  };
  for (const auto& e : m.entries()) parent[find(e.row)] = find(m.rows() + e.col);
  std::map<std::size_t, std::pair<std::set<std::size_t>, std::set<std::size_t>>> groups;
  for (std::size_t i = 0; i < m.rows(); ++i) groups[find(i)].first.insert(i);
  for (std::size_t j = 0; j < m.cols(); ++j) groups[find(m.rows() + j)].second.insert(j);
  std::set<std::pair<std::set<std::size_t>, std::set<std::size_t>>> out;
  for (auto& [k, v] : groups) out.insert(v);
  return out;
}

TEST(BlockPartition, Examples) {
  EXPECT_EQ(sip::block_partition(SparseIntMatrix::from_dense({{1, 0}, {0, 1}})).size(), 2u);
  EXPECT_EQ(sip::block_partition(SparseIntMatrix::from_dense({{1, 1}, {1, 1}})).size(), 1u);
  auto bp = sip::block_partition(SparseIntMatrix::from_dense({{1, 1}, {1, 1}, {0, 0}}));
  ASSERT_EQ(bp.size(), 2u);
  EXPECT_EQ(bp.blocks[1].rows, std::vector<std::size_t>{2});
  EXPECT_TRUE(bp.blocks[1].cols.empty());
}

TEST(BlockPartition, ZeroColumnsBecomeRowlessBlocks) {
  auto bp = sip::block_partition(SparseIntMatrix::from_dense({{1, 0, 0}, {0, 0, 1}}));
  ASSERT_EQ(bp.size(), 3u);
  EXPECT_EQ(bp.blocks[1].cols, std::vector<std::size_t>{1});
  EXPECT_TRUE(bp.blocks[1].rows.empty());
}

TEST(BlockPartition, RunningMaximumPreventsFalseSplit) {
  // Row 0 reaches column 3, so rows 1 and 2 cannot be split off.
  auto m = SparseIntMatrix::from_dense({{1, 0, 0, 1}, {0, 1, 0, 0}, {0, 0, 1, 0}});
  EXPECT_EQ(sip::block_partition(m).size(), 1u);
}

TEST(BlockPartition, AgreesWithIncidenceComponents) {
  std::mt19937_64 rng(42);
  for (int it = 0; it < 300; ++it) {
    auto m = random_block_diagonal(rng);
    auto bp = sip::block_partition(m);
    std::set<std::pair<std::set<std::size_t>, std::set<std::size_t>>> got;
    std::set<std::size_t> rows_seen, cols_seen;
    for (const auto& b : bp.blocks) {
      got.insert({{b.rows.begin(), b.rows.end()}, {b.cols.begin(), b.cols.end()}});
      for (auto r : b.rows) EXPECT_TRUE(rows_seen.insert(r).second);
      for (auto c : b.cols) EXPECT_TRUE(cols_seen.insert(c).second);
      EXPECT_EQ(b.sub, m.submatrix(b.rows, b.cols));
    }
    EXPECT_EQ(rows_seen.size(), m.rows());
    EXPECT_EQ(cols_seen.size(), m.cols());
    EXPECT_EQ(got, incidence_components(m));
  }
}

TEST(Depth, Examples) {
  EXPECT_EQ(sip::depth(SparseIntMatrix(3, 0)), 0u);
  for (std::size_t n = 1; n <= 5; ++n) EXPECT_EQ(sip::depth(sip::sparse_identity(n)), 1u);
  // (1,1)-stochastic: global column plus width-1 blocks.
  auto rs = SparseIntMatrix::from_dense({{1, 2, 0, 0}, {-1, 0, 1, 0}, {2, 0, 0, -2}});
  EXPECT_LE(sip::depth(rs), 2u);
  EXPECT_EQ(sip::depth(SparseIntMatrix::from_dense({{1, 1, 1}})), 3u);
}

TEST(Depth, BoundedByColumnsAndRowSupport) {
  std::mt19937_64 rng(5);
  for (int it = 0; it < 300; ++it) {
    auto m = random_sparse(rng, 1 + it % 5, it % 7, 0.35);
    std::size_t d = sip::depth(m);
    EXPECT_LE(d, m.cols());
    for (const auto& sup : m.row_supports()) EXPECT_LE(sup.size(), d);
  }
}

TEST(PrimalGraph, Examples) {
  EXPECT_EQ(sip::primal_graph(sip::sparse_identity(4)).edge_count(), 0u);
  auto k4 = sip::primal_graph(SparseIntMatrix::from_dense({{1, 1, 1, 1}}));
  EXPECT_EQ(k4.edge_count(), 6u);
  auto rs = SparseIntMatrix::from_dense({{1, 2, 0}, {-1, 0, 1}});
  auto g = sip::primal_graph(rs);
  // Direct scan: column 0 shares a row with 1 and with 2; 1 and 2 do not.
  EXPECT_TRUE(g.adjacent(0, 1));
  EXPECT_TRUE(g.adjacent(0, 2));
  EXPECT_FALSE(g.adjacent(1, 2));
}

// Textbook recursion over vertex sets, without memoisation or pruning.
std::size_t brute_treedepth(const sip::Graph& g, std::vector<bool> alive) {
  auto comps = g.components(alive);
  if (comps.empty()) return 0;
  std::size_t worst = 0;
  for (const auto& comp : comps) {
    std::size_t best = comp.size();
    for (auto v : comp) {
      std::vector<bool> sub(g.n, false);
      for (auto w : comp) sub[w] = true;
      sub[v] = false;
      best = std::min(best, 1 + brute_treedepth(g, sub));
    }
    worst = std::max(worst, best);
  }
  return worst;
}

TEST(Treedepth, MatchesBruteForce) {
  std::mt19937_64 rng(9);
  for (int it = 0; it < 150; ++it) {
    auto m = random_sparse(rng, 1 + it % 6, 1 + it % 7, 0.3);
    auto g = sip::primal_graph(m);
    EXPECT_EQ(sip::treedepth(g), brute_treedepth(g, std::vector<bool>(g.n, true)));
  }
}

TEST(FindDepthPermutation, Examples) {
  auto w = sip::find_depth_permutation(sip::sparse_identity(4), 1);
  ASSERT_TRUE(w);
  EXPECT_EQ(sip::depth(sip::sparse_identity(4).permuted(w->row_order, w->col_order)), 1u);
  EXPECT_FALSE(sip::find_depth_permutation(SparseIntMatrix::from_dense({{1, 1, 1}}), 2));
  EXPECT_TRUE(sip::find_depth_permutation(SparseIntMatrix::from_dense({{1, 1, 1}}), 3));
}

TEST(FindDepthPermutation, WitnessRealisesDepth) {
  std::mt19937_64 rng(13);
  for (int it = 0; it < 200; ++it) {
    auto m = random_sparse(rng, 1 + it % 6, 1 + it % 8, 0.3);
    auto td = sip::treedepth(sip::primal_graph(m));
    EXPECT_FALSE(sip::find_depth_permutation(m, td - 1));
    auto w = sip::find_depth_permutation(m, td);
    ASSERT_TRUE(w);
    EXPECT_EQ(w->forest.depth, td);
    auto pm = m.permuted(w->row_order, w->col_order);
    EXPECT_LE(sip::depth(pm), td);
    // Elimination forest property: columns sharing a row are comparable.
    for (const auto& sup : m.row_supports())
      for (auto a : sup)
        for (auto b : sup)
          EXPECT_TRUE(w->forest.is_ancestor_or_self(a, b) || w->forest.is_ancestor_or_self(b, a));
  }
}

// Column-shuffled (r,s)-stochastic matrix; returns it with the ground-truth r, s.
SparseIntMatrix shuffled_rs(std::mt19937_64& rng, std::size_t r, std::size_t s, std::size_t t) {
  std::uniform_int_distribution<long> val(-2, 2);
  std::vector<sip::Entry> e;
  std::size_t rows = 0, cols = r;
  for (std::size_t b = 0; b < t; ++b) {
    for (std::size_t i = 0; i < 2; ++i, ++rows)
      for (std::size_t j = 0; j < r + s; ++j) {
        long v = val(rng);
        if (v != 0) e.push_back({rows, j < r ? j : cols + (j - r), v});
      }
    cols += s;
  }
  std::vector<std::size_t> perm(cols);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  for (auto& x : e) x.col = perm[x.col];
  return SparseIntMatrix::from_entries(rows, cols, e);
}

TEST(FindDepthPermutation, RecoversShuffledStochastic) {
  std::mt19937_64 rng(17);
  for (int it = 0; it < 50; ++it) {
    auto m = shuffled_rs(rng, 1 + it % 2, 1 + it % 2, 3);
    std::size_t d = (1 + it % 2) * 2;
    auto w = sip::find_depth_permutation(m, d);
    ASSERT_TRUE(w);
    EXPECT_LE(sip::depth(m.permuted(w->row_order, w->col_order)), d);
  }
}

TEST(FindRsDecomposition, Examples) {
  auto already = SparseIntMatrix::from_dense({{1, 2, 0}, {-1, 0, 1}});
  auto dec = sip::find_rs_decomposition(already, 1, 1);
  ASSERT_TRUE(dec);
  EXPECT_EQ(dec->col_order, (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_EQ(dec->row_order, (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(dec->t, 2u);
  // Dense row over r+s+1 columns cannot be split.
  EXPECT_FALSE(sip::find_rs_decomposition(SparseIntMatrix::from_dense({{1, 1, 1, 1}}), 1, 2));
  EXPECT_FALSE(sip::find_rs_decomposition(SparseIntMatrix::from_dense({{1, 1, 1, 1, 1}}), 2, 2));
  EXPECT_TRUE(sip::find_rs_decomposition(SparseIntMatrix::from_dense({{1, 1, 1, 1}}), 2, 2));
}

bool brute_rs_exists(const SparseIntMatrix& m, std::size_t r, std::size_t s) {
  auto g = sip::primal_graph(m);
  for (std::uint32_t mask = 0; mask < (1u << g.n); ++mask) {
    if (static_cast<std::size_t>(std::popcount(mask)) > r) continue;
    std::vector<bool> alive(g.n);
    for (std::size_t v = 0; v < g.n; ++v) alive[v] = !(mask >> v & 1);
    bool ok = true;
    for (const auto& c : g.components(alive)) ok = ok && c.size() <= s;
    if (ok) return true;
  }
  return false;
}

TEST(FindRsDecomposition, MatchesSubsetEnumerationAndRevalidates) {
  std::mt19937_64 rng(23);
  for (int it = 0; it < 300; ++it) {
    auto m = random_sparse(rng, 1 + it % 5, 1 + it % 8, 0.3);
    std::size_t r = it % 3, s = 1 + (it / 3) % 3;
    auto dec = sip::find_rs_decomposition(m, r, s);
    EXPECT_EQ(dec.has_value(), brute_rs_exists(m, r, s));
    if (!dec) continue;
    EXPECT_LE(dec->r, r);
    auto pm = m.permuted(dec->row_order, dec->col_order);
    EXPECT_TRUE(sip::is_rs_stochastic(pm, dec->r, s));
    for (const auto& b : dec->blocks) EXPECT_LE(b.cols.size(), s);
  }
}

TEST(FindRsDecomposition, RecoversShuffledInstances) {
  std::mt19937_64 rng(29);
  for (int it = 0; it < 60; ++it) {
    std::size_t r = 1 + it % 2, s = 1 + (it / 2) % 2;
    auto m = shuffled_rs(rng, r, s, 1 + it % 4);
    auto dec = sip::find_rs_decomposition(m, r, s);
    ASSERT_TRUE(dec);
    EXPECT_TRUE(sip::is_rs_stochastic(m.permuted(dec->row_order, dec->col_order), dec->r, s));
  }
}

TEST(SparseIntMatrix, RejectsInvalidEntries) {
  EXPECT_THROW(SparseIntMatrix::from_entries(1, 1, {{0, 0, 0}}), sip::argument_error);
  EXPECT_THROW(SparseIntMatrix::from_entries(1, 1, {{0, 1, 1}}), sip::argument_error);
  EXPECT_THROW(SparseIntMatrix::from_entries(1, 2, {{0, 1, 1}, {0, 1, 2}}), sip::argument_error);
  auto m = SparseIntMatrix::from_entries(2, 2, {{1, 0, 3}, {0, 1, 2}});
  EXPECT_EQ(m.entries().front().row, 0u);
}

}  // namespace
