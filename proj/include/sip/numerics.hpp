#pragma once

// Exact integer/rational arithmetic and small dense linear algebra.

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sip {

using Int = mpz_class;
using Rat = mpq_class;
using IntVec = std::vector<Int>;
using RatVec = std::vector<Rat>;

struct dimension_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct argument_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Thrown when an enumeration or search exceeds its configured budget.
struct budget_exceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Decimal codecs

inline std::string to_string(const Int& v) { return v.get_str(10); }

/// "p/q" in lowest terms, or "p" when the denominator is 1.
inline std::string to_string(const Rat& v) { return v.get_str(10); }

inline Int parse_int(std::string_view s) {
  std::string t(s);
  if (t.empty()) throw argument_error("empty integer literal");
  std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
  if (i == t.size()) throw argument_error("malformed integer literal '" + t + "'");
  for (std::size_t k = i; k < t.size(); ++k)
    if (t[k] < '0' || t[k] > '9') throw argument_error("malformed integer literal '" + t + "'");
  if (t[0] == '+') t.erase(0, 1);
  return Int(t, 10);
}

inline Rat parse_rat(std::string_view s) {
  auto slash = s.find('/');
  if (slash == std::string_view::npos) return Rat(parse_int(s));
  Int num = parse_int(s.substr(0, slash));
  Int den = parse_int(s.substr(slash + 1));
  if (den == 0) throw argument_error("zero denominator in '" + std::string(s) + "'");
  Rat r(num, den);
  r.canonicalize();
  return r;
}

// ---------------------------------------------------------------------------
// Scalar helpers

inline Int abs(const Int& v) { return v < 0 ? Int(-v) : v; }
inline Rat abs(const Rat& v) { return v < 0 ? Rat(-v) : v; }

inline Int floor(const Rat& v) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), v.get_num_mpz_t(), v.get_den_mpz_t());
  return q;
}

inline Int ceil(const Rat& v) {
  Int q;
  mpz_cdiv_q(q.get_mpz_t(), v.get_num_mpz_t(), v.get_den_mpz_t());
  return q;
}

inline bool is_integral(const Rat& v) { return v.get_den() == 1; }

inline Int gcd(const Int& a, const Int& b) {
  Int g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

inline Int lcm(const Int& a, const Int& b) {
  Int l;
  mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return l;
}

inline Int pow(const Int& base, unsigned long e) {
  Int r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

/// Least common multiple of a nonempty list of positive integers.
inline Int lcm_list(const std::vector<Int>& xs) {
  if (xs.empty()) throw argument_error("lcm_list: empty sequence");
  Int acc = 1;
  for (const auto& x : xs) {
    if (x <= 0) throw argument_error("lcm_list: nonpositive element " + to_string(x));
    acc = lcm(acc, x);
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Vectors

inline RatVec to_rat(const IntVec& v) { return RatVec(v.begin(), v.end()); }

inline IntVec to_int(const RatVec& v) {
  IntVec out;
  out.reserve(v.size());
  for (const auto& x : v) {
    if (!is_integral(x)) throw argument_error("to_int: non-integral entry " + to_string(x));
    out.emplace_back(x.get_num());
  }
  return out;
}

template <class T>
T dot(const std::vector<T>& a, const std::vector<T>& b) {
  if (a.size() != b.size()) throw dimension_error("dot: dimension mismatch");
  T acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

inline Rat dot(const IntVec& a, const RatVec& b) {
  if (a.size() != b.size()) throw dimension_error("dot: dimension mismatch");
  Rat acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

template <class T>
T norm_inf(const std::vector<T>& v) {
  T best = 0;
  for (const auto& x : v) best = std::max<T>(best, abs(x));
  return best;
}

template <class T>
T norm_1(const std::vector<T>& v) {
  T acc = 0;
  for (const auto& x : v) acc += abs(x);
  return acc;
}

template <class T>
bool is_zero(const std::vector<T>& v) {
  return std::all_of(v.begin(), v.end(), [](const T& x) { return x == 0; });
}

template <class T>
std::vector<T> operator+(const std::vector<T>& a, const std::vector<T>& b) {
  if (a.size() != b.size()) throw dimension_error("vector add: dimension mismatch");
  std::vector<T> r(a);
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += b[i];
  return r;
}

template <class T>
std::vector<T> operator-(const std::vector<T>& a, const std::vector<T>& b) {
  if (a.size() != b.size()) throw dimension_error("vector sub: dimension mismatch");
  std::vector<T> r(a);
  for (std::size_t i = 0; i < a.size(); ++i) r[i] -= b[i];
  return r;
}

template <class T>
std::vector<T> operator-(const std::vector<T>& a) {
  std::vector<T> r(a);
  for (auto& x : r) x = -x;
  return r;
}

inline std::string format_vec(const IntVec& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += to_string(v[i]);
  }
  return s + ")";
}

inline std::string format_vec(const RatVec& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += to_string(v[i]);
  }
  return s + ")";
}

// ---------------------------------------------------------------------------
// Small dense matrices (d <= ~8). Sparse data lives in structure.hpp.

template <class T>
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}
  DenseMatrix(std::initializer_list<std::initializer_list<T>> init) {
    rows_ = init.size();
    cols_ = rows_ ? init.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& row : init) {
      if (row.size() != cols_) throw dimension_error("DenseMatrix: ragged initializer");
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::vector<T> column(std::size_t j) const {
    std::vector<T> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  std::vector<T> operator*(const std::vector<T>& x) const {
    if (x.size() != cols_) throw dimension_error("matrix-vector product: dimension mismatch");
    std::vector<T> y(rows_, T(0));
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) y[i] += (*this)(i, j) * x[j];
    return y;
  }

  T max_abs() const {
    T best = 0;
    for (const auto& v : data_) best = std::max<T>(best, abs(v));
    return best;
  }

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using IntMatrix = DenseMatrix<Int>;
using RatMatrix = DenseMatrix<Rat>;

inline IntMatrix identity_matrix(std::size_t d) {
  IntMatrix m(d, d);
  for (std::size_t i = 0; i < d; ++i) m(i, i) = 1;
  return m;
}

/// Exact determinant by fraction-free (Bareiss) elimination.
inline Int det(const IntMatrix& m) {
  if (!m.square()) throw dimension_error("det: matrix is not square");
  const std::size_t d = m.rows();
  if (d == 0) return 1;
  IntMatrix a = m;
  int sign = 1;
  Int prev = 1;
  for (std::size_t k = 0; k + 1 < d; ++k) {
    if (a(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < d && a(p, k) == 0) ++p;
      if (p == d) return 0;
      for (std::size_t j = 0; j < d; ++j) std::swap(a(k, j), a(p, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < d; ++i) {
      for (std::size_t j = k + 1; j < d; ++j) {
        Int t = a(i, j) * a(k, k) - a(i, k) * a(k, j);
        mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
        a(i, j) = t;
      }
      a(i, k) = 0;
    }
    prev = a(k, k);
  }
  Int r = a(d - 1, d - 1);
  return sign < 0 ? Int(-r) : r;
}

/// Solves Mx = v exactly. Returns nullopt when M is singular.
inline std::optional<RatVec> solve_square(const IntMatrix& m, const IntVec& v) {
  if (!m.square()) throw dimension_error("solve_square: matrix is not square");
  if (v.size() != m.rows()) throw dimension_error("solve_square: right-hand side dimension mismatch");
  const std::size_t d = m.rows();
  RatMatrix a(d, d + 1);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) a(i, j) = m(i, j);
    a(i, d) = v[i];
  }
  for (std::size_t k = 0; k < d; ++k) {
    std::size_t p = k;
    while (p < d && a(p, k) == 0) ++p;
    if (p == d) return std::nullopt;
    if (p != k)
      for (std::size_t j = 0; j <= d; ++j) std::swap(a(k, j), a(p, j));
    for (std::size_t i = 0; i < d; ++i) {
      if (i == k || a(i, k) == 0) continue;
      Rat f = a(i, k) / a(k, k);
      for (std::size_t j = k; j <= d; ++j) a(i, j) -= f * a(k, j);
    }
  }
  RatVec x(d);
  for (std::size_t i = 0; i < d; ++i) x[i] = a(i, d) / a(i, i);
  return x;
}

/// Rank of an integer matrix (rational Gaussian elimination).
inline std::size_t rank(const IntMatrix& m) {
  RatMatrix a(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) a(i, j) = m(i, j);
  std::size_t r = 0;
  for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
    std::size_t p = r;
    while (p < a.rows() && a(p, c) == 0) ++p;
    if (p == a.rows()) continue;
    for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(r, j), a(p, j));
    for (std::size_t i = r + 1; i < a.rows(); ++i) {
      if (a(i, c) == 0) continue;
      Rat f = a(i, c) / a(r, c);
      for (std::size_t j = c; j < a.cols(); ++j) a(i, j) -= f * a(r, j);
    }
    ++r;
  }
  return r;
}

}  // namespace sip
