#include <sip/graver.hpp>

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

namespace {

using sip::Int;
using sip::IntVec;
using sip::SparseIntMatrix;
using sip::operator+;
using sip::operator-;

IntVec iv(std::initializer_list<long> xs) { return IntVec(xs.begin(), xs.end()); }

SparseIntMatrix random_matrix(std::mt19937_64& rng, std::size_t n, std::size_t m, long delta) {
  std::uniform_int_distribution<long> val(-delta, delta);
  std::vector<sip::Entry> e;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (long v = val(rng)) e.push_back({i, j, v});
  return SparseIntMatrix::from_entries(n, m, e);
}

TEST(ConformalOrder, Examples) {
  EXPECT_TRUE(sip::conformal_leq(iv({1, -1}), iv({2, -3})));
  EXPECT_FALSE(sip::conformal_leq(iv({1, 1}), iv({2, -3})));
  EXPECT_TRUE(sip::conformal_leq(iv({0, 0}), iv({2, -3})));
  EXPECT_FALSE(sip::conformal_leq(iv({0, 1}), iv({2, 0})));
  EXPECT_TRUE(sip::conformal_leq(sip::RatVec{sip::Rat(1, 2), 0}, sip::RatVec{1, -1}));
  EXPECT_THROW(sip::conformal_leq(iv({1}), iv({1, 2})), sip::dimension_error);
}

TEST(LatticeKernel, SpansIntegerKernel) {
  auto a = SparseIntMatrix::from_dense({{2, 4, 6}});
  auto basis = sip::lattice_kernel_basis(a);
  ASSERT_EQ(basis.size(), 2u);
  for (const auto& k : basis) EXPECT_TRUE(sip::is_zero(a * k));
  // The lattice index is 1: some 2x2 minor of the basis is ±1 up to gcd.
  sip::IntMatrix b(3, 2);
  for (std::size_t j = 0; j < 2; ++j)
    for (std::size_t i = 0; i < 3; ++i) b(i, j) = basis[j][i];
  Int g = 0;
  for (std::size_t p = 0; p < 3; ++p)
    for (std::size_t q = p + 1; q < 3; ++q) g = sip::gcd(g, b(p, 0) * b(q, 1) - b(q, 0) * b(p, 1));
  EXPECT_EQ(g, 1);
}

TEST(GraverBasis, Examples) {
  auto g1 = sip::graver_basis(SparseIntMatrix::from_dense({{1, -1}}));
  EXPECT_EQ(g1.elements, (std::vector<IntVec>{iv({-1, -1}), iv({1, 1})}));
  EXPECT_EQ(sip::graver_norm(g1), 1);

  auto g2 = sip::graver_basis(SparseIntMatrix::from_dense({{2, -3}}));
  EXPECT_EQ(g2.elements, (std::vector<IntVec>{iv({-3, -2}), iv({3, 2})}));
  EXPECT_EQ(sip::graver_norm(g2), 3);
  EXPECT_LE(sip::graver_norm(g2), sip::graver_bound_rows(1, 3));
  EXPECT_EQ(sip::graver_bound_rows(1, 3), 7);

  auto g3 = sip::graver_basis(SparseIntMatrix(2, 3));
  EXPECT_EQ(g3.elements, (std::vector<IntVec>{iv({-1, 0, 0}), iv({0, -1, 0}), iv({0, 0, -1}), iv({0, 0, 1}),
                                               iv({0, 1, 0}), iv({1, 0, 0})}));
}

TEST(GraverBasis, KnownThreeColumnBasis) {
  // [1 1 1]: circuits are ±(e_i - e_j); nothing else is minimal.
  auto g = sip::graver_basis(SparseIntMatrix::from_dense({{1, 1, 1}}));
  EXPECT_EQ(g.size(), 6u);
  // [1 2 3]: five elements up to sign.
  auto h = sip::graver_basis(SparseIntMatrix::from_dense({{1, 2, 3}}));
  EXPECT_EQ(h.size(), 10u);
  EXPECT_TRUE(h.contains(iv({2, -1, 0})));
  EXPECT_TRUE(h.contains(iv({1, -2, 1})));
  EXPECT_TRUE(h.contains(iv({3, 0, -1})));
  EXPECT_TRUE(h.contains(iv({1, 1, -1})));
  EXPECT_TRUE(h.contains(iv({0, 3, -2})));
}

TEST(GraverBasis, FullColumnRankIsEmpty) {
  auto g = sip::graver_basis(sip::sparse_identity(3));
  EXPECT_EQ(g.size(), 0u);
  EXPECT_EQ(sip::graver_norm(g), 0);
}

TEST(GraverBasis, MatchesEnumerationOracle) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::size_t> dn(1, 3), dm(1, 4);
  std::uniform_int_distribution<long> dd(1, 2);
  for (int it = 0; it < 60; ++it) {
    auto a = random_matrix(rng, dn(rng), dm(rng), dd(rng));
    auto g = sip::graver_basis(a);
    EXPECT_EQ(g.elements, oracle::graver_brute(a)) << "iteration " << it;
    Int delta = std::max(a.max_abs(), Int(1));
    EXPECT_LE(sip::graver_norm(g), sip::graver_bound_rows(a.rows(), delta));
    EXPECT_LE(sip::graver_norm(g), sip::graver_bound_columns(a.cols(), delta));
    for (const auto& v : g.elements) {
      EXPECT_TRUE(sip::is_zero(a * v));
      EXPECT_TRUE(g.contains(-v));
      for (const auto& w : g.elements) {
        if (w != v) {
          EXPECT_FALSE(sip::conformal_leq(w, v));
        }
      }
    }
  }
}

TEST(GraverBasis, SizeGuardAndCap) {
  auto wide = SparseIntMatrix::from_dense({{1, 1, 1, 1, 1, 1, 1, 1, 1}});
  EXPECT_THROW(sip::graver_basis(wide), sip::budget_exceeded);
  sip::GraverOptions opts;
  opts.norm_cap = Int(2);
  try {
    sip::graver_basis(SparseIntMatrix::from_dense({{2, -3}}), opts);
    FAIL() << "expected budget_exceeded";
  } catch (const sip::graver_budget_exceeded& e) {
    for (const auto& v : e.partial) EXPECT_LE(sip::norm_inf(v), 2);
  }
}

TEST(GraverBasis, FingerprintIdentifiesMatrix) {
  auto a = SparseIntMatrix::from_dense({{1, 2, 3}});
  auto b = SparseIntMatrix::from_dense({{1, 2, 4}});
  EXPECT_EQ(sip::graver_basis(a).fingerprint, sip::matrix_fingerprint(a));
  EXPECT_NE(sip::matrix_fingerprint(a), sip::matrix_fingerprint(b));
}

TEST(ConformalDecompose, Examples) {
  auto a = SparseIntMatrix::from_dense({{1, -1}});
  EXPECT_EQ(sip::conformal_decompose(iv({1, 1}), a), (std::vector<IntVec>{iv({1, 1})}));
  EXPECT_EQ(sip::conformal_decompose(iv({2, 2}), a), (std::vector<IntVec>{iv({1, 1}), iv({1, 1})}));
  EXPECT_TRUE(sip::conformal_decompose(iv({0, 0}), a).empty());
  EXPECT_THROW(sip::conformal_decompose(iv({1, 0}), a), sip::argument_error);
  EXPECT_THROW(sip::conformal_decompose(iv({1}), a), sip::dimension_error);
}

TEST(ConformalDecompose, RandomKernelVectors) {
  std::mt19937_64 rng(12);
  std::uniform_int_distribution<long> coef(-3, 3);
  for (int it = 0; it < 40; ++it) {
    auto a = random_matrix(rng, 1 + it % 2, 3 + it % 2, 2);
    auto g = sip::graver_basis(a);
    auto kb = sip::lattice_kernel_basis(a);
    IntVec v(a.cols(), 0);
    for (const auto& k : kb) {
      long c = coef(rng);
      for (std::size_t i = 0; i < v.size(); ++i) v[i] += c * k[i];
    }
    auto parts = sip::conformal_decompose(v, a, g);
    IntVec sum(a.cols(), 0);
    for (const auto& p : parts) {
      EXPECT_TRUE(g.contains(p));
      EXPECT_TRUE(sip::conformal_leq(p, v));
      sum = sum + p;
    }
    EXPECT_EQ(sum, v);
  }
}

}  // namespace
