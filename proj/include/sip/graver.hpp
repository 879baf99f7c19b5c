#pragma once

// Conformal order, Graver bases by completion, and conformal decomposition.

#include <sip/numerics.hpp>
#include <sip/structure.hpp>

#include <algorithm>
#include <cstdint>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <vector>

namespace sip {

/// x ⊑ y: |x_i| <= |y_i| and x_i y_i >= 0 for every i.
template <class T>
bool conformal_leq(const std::vector<T>& x, const std::vector<T>& y) {
  if (x.size() != y.size()) throw dimension_error("conformal_leq: dimension mismatch");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0) continue;
    if ((x[i] > 0) != (y[i] > 0) || y[i] == 0) return false;
    if (abs(x[i]) > abs(y[i])) return false;
  }
  return true;
}

/// (2 n Delta + 1)^n: bound on g_inf(A) for A with n rows.
inline Int graver_bound_rows(std::size_t n, const Int& delta) {
  return pow(2 * Int(static_cast<unsigned long>(n)) * delta + 1, n);
}

/// (2 m Delta + 1)^m: the same bound in terms of the column count.
inline Int graver_bound_columns(std::size_t m, const Int& delta) { return graver_bound_rows(m, delta); }

/// Basis of the integer kernel of A, by unimodular column operations on [A; I].
inline std::vector<IntVec> lattice_kernel_basis(const SparseIntMatrix& a) {
  const std::size_t n = a.rows(), m = a.cols();
  IntMatrix w(n + m, m);
  for (const auto& e : a.entries()) w(e.row, e.col) = e.value;
  for (std::size_t j = 0; j < m; ++j) w(n + j, j) = 1;

  auto combine = [&](std::size_t p, std::size_t q, const Int& s, const Int& t, const Int& u, const Int& v) {
    // (col_p, col_q) <- (s col_p + t col_q, u col_p + v col_q); det = sv - tu = ±1.
    for (std::size_t i = 0; i < n + m; ++i) {
      Int x = w(i, p), y = w(i, q);
      w(i, p) = s * x + t * y;
      w(i, q) = u * x + v * y;
    }
  };

  std::size_t lead = 0;  // columns < lead already carry pivots
  for (std::size_t row = 0; row < n && lead < m; ++row) {
    for (std::size_t j = lead + 1; j < m; ++j) {
      if (w(row, j) == 0) continue;
      Int x = w(row, lead), y = w(row, j);
      Int g, s, t;
      mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
      Int u = -y / g, v = x / g;  // exact
      combine(lead, j, s, t, u, v);
    }
    if (w(row, lead) != 0) ++lead;
  }
  std::vector<IntVec> basis;
  for (std::size_t j = lead; j < m; ++j) {
    IntVec k(m);
    for (std::size_t i = 0; i < m; ++i) k[i] = w(n + i, j);
    basis.push_back(std::move(k));
  }
  return basis;
}

struct GraverBasis {
  std::string fingerprint;        // identifies the matrix
  std::vector<IntVec> elements;   // sorted lexicographically

  std::size_t size() const { return elements.size(); }
  bool contains(const IntVec& v) const { return std::binary_search(elements.begin(), elements.end(), v); }
};

/// Thrown when a Graver element would exceed the norm cap; carries the
/// elements found so far.
struct graver_budget_exceeded : budget_exceeded {
  std::vector<IntVec> partial;
  graver_budget_exceeded(const std::string& what, std::vector<IntVec> p) : budget_exceeded(what), partial(std::move(p)) {}
};

inline std::string matrix_fingerprint(const SparseIntMatrix& a) {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&](const std::string& s) {
    for (unsigned char ch : s) {
      h ^= ch;
      h *= 1099511628211ull;
    }
    h ^= 0xff;
    h *= 1099511628211ull;
  };
  mix(std::to_string(a.rows()));
  mix(std::to_string(a.cols()));
  for (const auto& e : a.entries()) {
    mix(std::to_string(e.row));
    mix(std::to_string(e.col));
    mix(to_string(e.value));
  }
  static const char* hex = "0123456789abcdef";
  std::string out = std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + "-";
  for (int k = 60; k >= 0; k -= 4) out += hex[(h >> k) & 0xf];
  return out;
}

struct GraverOptions {
  std::optional<Int> norm_cap;  // default: min((2m||A||+1)^m, 10^6)
  std::size_t max_columns = 8;  // size guard unless norm_cap is given
};

namespace detail {

inline bool sign_compatible(const IntVec& a, const IntVec& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if ((a[i] > 0 && b[i] < 0) || (a[i] < 0 && b[i] > 0)) return false;
  return true;
}

struct ByNorm {
  bool operator()(const std::pair<Int, IntVec>& a, const std::pair<Int, IntVec>& b) const {
    if (a.first != b.first) return a.first > b.first;
    return a.second > b.second;
  }
};

}  // namespace detail

/// Graver basis by completion: start from a symmetric lattice basis of the
/// integer kernel, add normal forms of conformal-incompatible sums in order
/// of increasing l1 norm, then keep the ⊑-minimal elements.
inline GraverBasis graver_basis(const SparseIntMatrix& a, const GraverOptions& opts = {}) {
  const std::size_t m = a.cols();
  if (!opts.norm_cap && m > opts.max_columns)
    throw budget_exceeded("graver_basis: " + std::to_string(m) + " columns exceeds the size guard of " +
                          std::to_string(opts.max_columns));
  Int cap = opts.norm_cap ? *opts.norm_cap : std::min(graver_bound_columns(m, std::max(a.max_abs(), Int(1))), Int(1000000));

  std::vector<IntVec> gens;
  std::set<IntVec> members;
  using Item = std::pair<Int, IntVec>;
  std::priority_queue<Item, std::vector<Item>, detail::ByNorm> queue;

  auto reduce = [&](IntVec s) {
    bool changed = true;
    while (changed && !is_zero(s)) {
      changed = false;
      for (const auto& g : gens)
        if (conformal_leq(g, s)) {
          for (std::size_t i = 0; i < m; ++i) s[i] -= g[i];
          changed = true;
          break;
        }
    }
    return s;
  };
  auto add = [&](const IntVec& g) {
    if (norm_inf(g) > cap)
      throw graver_budget_exceeded("graver_basis: element " + format_vec(g) + " exceeds norm cap " + to_string(cap),
                                   gens);
    for (const auto& h : gens)
      if (!detail::sign_compatible(g, h)) {
        IntVec s = g + h;
        if (!is_zero(s)) queue.emplace(norm_1(s), std::move(s));
      }
    gens.push_back(g);
    members.insert(g);
  };

  for (const auto& k : lattice_kernel_basis(a)) queue.emplace(norm_1(k), k), queue.emplace(norm_1(k), -k);
  while (!queue.empty()) {
    IntVec s = queue.top().second;
    queue.pop();
    if (members.count(s)) continue;
    IntVec r = reduce(std::move(s));
    if (is_zero(r) || members.count(r)) continue;
    add(r);
    IntVec neg = -r;
    if (!members.count(neg)) add(neg);
  }

  GraverBasis out;
  out.fingerprint = matrix_fingerprint(a);
  for (const auto& g : gens) {
    bool minimal = true;
    for (const auto& h : gens)
      if (&h != &g && h != g && conformal_leq(h, g)) {
        minimal = false;
        break;
      }
    if (minimal) out.elements.push_back(g);
  }
  std::sort(out.elements.begin(), out.elements.end());
  out.elements.erase(std::unique(out.elements.begin(), out.elements.end()), out.elements.end());
  return out;
}

/// g_inf: the largest l_inf norm of a basis element (0 for an empty basis).
inline Int graver_norm(const GraverBasis& g) {
  Int best = 0;
  for (const auto& v : g.elements) best = std::max(best, norm_inf(v));
  return best;
}

/// Writes v (in the integer kernel of A) as a sum of Graver elements, each
/// conformal to v, greedily taking the lexicographically smallest fit.
inline std::vector<IntVec> conformal_decompose(const IntVec& v, const SparseIntMatrix& a, const GraverBasis& g) {
  if (v.size() != a.cols()) throw dimension_error("conformal_decompose: dimension mismatch");
  if (!is_zero(a * v)) throw argument_error("conformal_decompose: vector is not in the kernel");
  std::vector<IntVec> parts;
  IntVec rest = v;
  while (!is_zero(rest)) {
    const IntVec* pick = nullptr;
    for (const auto& e : g.elements)
      if (conformal_leq(e, rest)) {
        pick = &e;
        break;
      }
    if (!pick) throw argument_error("conformal_decompose: basis does not belong to this matrix");
    rest = rest - *pick;
    parts.push_back(*pick);
  }
  return parts;
}

inline std::vector<IntVec> conformal_decompose(const IntVec& v, const SparseIntMatrix& a) {
  if (v.size() != a.cols()) throw dimension_error("conformal_decompose: dimension mismatch");
  if (!is_zero(a * v)) throw argument_error("conformal_decompose: vector is not in the kernel");
  return conformal_decompose(v, a, graver_basis(a));
}

}  // namespace sip
