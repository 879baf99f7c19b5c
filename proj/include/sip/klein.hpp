#pragma once

// Common submultiset sums of near-equal multisets, and the lcm/cone toolkit
// behind the existence argument.

#include <sip/numerics.hpp>
#include <sip/rng.hpp>

#include <algorithm>
#include <climits>
#include <cmath>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace sip {

struct KleinInstance {
  std::size_t d = 0;
  Int delta = 0;
  std::vector<std::vector<IntVec>> sets;
  IntVec b;
  Int eps = 1;

  /// Throws argument_error unless dimensions, norms and the closeness of
  /// every set sum to b hold.
  void validate() const {
    if (b.size() != d) throw dimension_error("klein instance: b has dimension " + std::to_string(b.size()));
    if (eps <= 0) throw argument_error("klein instance: eps must be positive");
    for (std::size_t i = 0; i < sets.size(); ++i) {
      IntVec sum(d, 0);
      for (const auto& v : sets[i]) {
        if (v.size() != d) throw dimension_error("klein instance: vector of wrong dimension in set " + std::to_string(i));
        if (norm_inf(v) > delta) throw argument_error("klein instance: vector " + format_vec(v) + " exceeds delta");
        sum = sum + v;
      }
      if (norm_inf(sum - b) >= eps)
        throw argument_error("klein instance: sum of set " + std::to_string(i) + " is not within eps of b");
    }
  }
};

struct KleinCertificate {
  IntVec b_prime;
  std::vector<std::vector<std::size_t>> subsets;  // ascending indices into each set
};

inline bool validate_certificate(const KleinInstance& k, const KleinCertificate& c) {
  if (c.subsets.size() != k.sets.size() || c.b_prime.size() != k.d) return false;
  for (std::size_t i = 0; i < k.sets.size(); ++i) {
    if (c.subsets[i].empty()) return false;
    IntVec sum(k.d, 0);
    std::vector<std::size_t> seen = c.subsets[i];
    std::sort(seen.begin(), seen.end());
    if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) return false;
    for (auto idx : seen) {
      if (idx >= k.sets[i].size()) return false;
      sum = sum + k.sets[i][idx];
    }
    if (sum != c.b_prime) return false;
  }
  return true;
}

/// A closed-form bound whose binary length exceeds max_bound_bits; carries
/// an estimate of log2 of the value.
struct bound_too_large : budget_exceeded {
  double log2_estimate;
  bound_too_large(const std::string& what, double log2) : budget_exceeded(what), log2_estimate(log2) {}
};

inline constexpr double max_bound_bits = 4194304.0;  // 2^22

/// f(d, Delta) = 2d(d+1) * 3^{(d Delta)^d} * (d Delta)^{d^2}.
inline Int klein_bound(std::size_t d, const Int& delta) {
  if (d == 0 || delta < 1) throw argument_error("klein_bound: d and delta must be positive");
  Int dd = Int(static_cast<unsigned long>(d)) * delta;
  const double ld = std::log2(dd.get_d());
  const double log2 = std::log2(2.0 * d * (d + 1)) + std::exp2(d * ld) * std::log2(3.0) + double(d) * d * ld;
  if (!(log2 <= max_bound_bits))
    throw bound_too_large("klein_bound: value has about 2^" + std::to_string(std::log2(log2)) + " bits", log2);
  Int e = pow(dd, d);
  Int ud = static_cast<unsigned long>(d);
  return 2 * ud * (ud + 1) * pow(Int(3), e.get_ui()) * pow(dd, d * d);
}

namespace detail {

struct PickNode {
  std::size_t index;
  std::shared_ptr<const PickNode> prev;
};

using SumKey = std::vector<long>;
using SumTable = std::map<SumKey, std::shared_ptr<const PickNode>>;

inline long norm_inf(const SumKey& v) {
  long best = 0;
  for (long x : v) best = std::max(best, x < 0 ? -x : x);
  return best;
}

// Reachable subset sums of one multiset whose norm stays within the ball of
// radius bound; a partial sum is kept while the remaining vectors could still
// bring it back inside.
inline SumTable subset_sums(const std::vector<IntVec>& set, std::size_t d, long bound, std::size_t max_states) {
  const std::size_t k = set.size();
  std::vector<SumKey> vs(k, SumKey(d));
  std::vector<long> suffix(k + 1, 0);
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t t = 0; t < d; ++t) {
      if (!set[j][t].fits_slong_p()) throw budget_exceeded("subset_sums: entry too large");
      vs[j][t] = set[j][t].get_si();
    }
  for (std::size_t j = k; j-- > 0;) suffix[j] = suffix[j + 1] + norm_inf(vs[j]);

  SumTable table;
  table.emplace(SumKey(d, 0), nullptr);
  for (std::size_t j = 0; j < k; ++j) {
    const long reach = bound + suffix[j + 1];
    SumTable next;
    for (const auto& [s, w] : table)
      if (norm_inf(s) <= reach) next.emplace(s, w);
    for (const auto& [s, w] : table) {
      SumKey t = s;
      for (std::size_t q = 0; q < d; ++q) t[q] += vs[j][q];
      if (norm_inf(t) <= reach) next.emplace(std::move(t), std::make_shared<const PickNode>(PickNode{j, w}));
    }
    if (next.size() > max_states)
      throw budget_exceeded("common_submultiset_sum: more than " + std::to_string(max_states) + " states");
    table = std::move(next);
  }
  return table;
}

}  // namespace detail

/// Finds nonempty S_i ⊆ T_i with one common nonzero sum b' of norm at most
/// search_bound; b' is minimal in (l_inf norm, lexicographic) order.
inline std::optional<KleinCertificate> common_submultiset_sum(const KleinInstance& k, const Int& search_bound,
                                                              std::size_t max_states = 10000000) {
  if (search_bound < 1) throw argument_error("common_submultiset_sum: search bound must be at least 1");
  if (k.sets.empty()) return std::nullopt;
  Int total = 0;
  for (const auto& set : k.sets) {
    Int s = 0;
    for (const auto& v : set) s += norm_inf(v);
    total = std::max(total, s);
  }
  if (!total.fits_slong_p() || total > LONG_MAX / 4) throw budget_exceeded("common_submultiset_sum: sets too large");
  const long bound = search_bound > total ? total.get_si() : search_bound.get_si();

  std::vector<detail::SumTable> tables;
  for (const auto& set : k.sets) tables.push_back(detail::subset_sums(set, k.d, bound, max_states));

  const detail::SumKey* best = nullptr;
  long best_norm = 0;
  for (const auto& [s, w] : tables[0]) {
    long nrm = detail::norm_inf(s);
    if (nrm == 0 || nrm > bound) continue;
    if (best && (nrm > best_norm || (nrm == best_norm && !(s < *best)))) continue;
    bool common = true;
    for (std::size_t i = 1; i < tables.size() && common; ++i) common = tables[i].count(s) > 0;
    if (common) best = &s, best_norm = nrm;
  }
  if (!best) return std::nullopt;

  KleinCertificate cert;
  cert.b_prime.assign(best->begin(), best->end());
  for (const auto& t : tables) {
    std::vector<std::size_t> idx;
    for (auto node = t.at(*best); node; node = node->prev) idx.push_back(node->index);
    std::reverse(idx.begin(), idx.end());
    cert.subsets.push_back(std::move(idx));
  }
  return cert;
}

// ---------------------------------------------------------------------------
// Cones spanned by the columns of invertible matrices

/// v ∈ cone(A): A^{-1} v >= 0.
inline bool cone_member(const IntVec& v, const IntMatrix& a) {
  auto x = solve_square(a, v);
  if (!x) throw argument_error("cone_member: singular matrix");
  return std::all_of(x->begin(), x->end(), [](const Rat& q) { return q >= 0; });
}

struct ScaledMembership {
  Int m;
  bool ok = false;
};

/// For v in every cone(A_i), M = lcm |det A_i| and whether M v lies in every
/// integer cone.
inline ScaledMembership intcone_member_scaled(const IntVec& v, const std::vector<IntMatrix>& mats) {
  std::vector<Int> dets;
  for (const auto& a : mats) {
    if (!cone_member(v, a)) throw argument_error("intcone_member_scaled: " + format_vec(v) + " is outside a cone");
    dets.push_back(abs(det(a)));
  }
  ScaledMembership out;
  out.m = mats.empty() ? Int(1) : lcm_list(dets);
  IntVec mv = v;
  for (auto& x : mv) x *= out.m;
  out.ok = true;
  for (const auto& a : mats) {
    auto x = solve_square(a, mv);
    for (const auto& q : *x)
      if (q < 0 || !is_integral(q)) out.ok = false;
  }
  return out;
}

namespace detail {

inline IntVec primitive(IntVec v) {
  Int g = 0;
  for (const auto& x : v) g = gcd(g, x);
  if (g > 1)
    for (auto& x : v) x /= g;
  return v;
}

inline IntVec cross(const IntVec& a, const IntVec& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

}  // namespace detail

/// Extreme rays of the intersection of the cones, primitive and then scaled
/// by M = lcm |det A_i| so each lies in every integer cone.
inline std::vector<IntVec> cone_intersection_rays(const std::vector<IntMatrix>& mats) {
  if (mats.empty()) throw argument_error("cone_intersection_rays: no cones");
  const std::size_t d = mats[0].rows();
  if (d == 0 || d > 3) throw argument_error("cone_intersection_rays: dimension " + std::to_string(d) + " unsupported");
  std::vector<Int> dets;
  for (const auto& a : mats) {
    if (a.rows() != d || a.cols() != d) throw dimension_error("cone_intersection_rays: matrices differ in shape");
    Int dt = det(a);
    if (dt == 0) throw argument_error("cone_intersection_rays: singular matrix");
    dets.push_back(abs(dt));
  }
  const Int m = lcm_list(dets);

  std::vector<IntVec> candidates;
  if (d <= 2) {
    for (const auto& a : mats)
      for (std::size_t j = 0; j < d; ++j) candidates.push_back(a.column(j));
  } else {
    std::vector<IntVec> normals;  // inward facet normals
    for (const auto& a : mats)
      for (std::size_t k = 0; k < 3; ++k) {
        IntVec n = detail::cross(a.column((k + 1) % 3), a.column((k + 2) % 3));
        if (dot(n, a.column(k)) < 0) n = -n;
        normals.push_back(detail::primitive(n));
      }
    for (std::size_t p = 0; p < normals.size(); ++p)
      for (std::size_t q = p + 1; q < normals.size(); ++q) {
        IntVec r = detail::cross(normals[p], normals[q]);
        if (is_zero(r)) continue;
        candidates.push_back(r);
        candidates.push_back(-r);
      }
  }

  std::vector<IntVec> rays;
  for (auto& c : candidates) {
    IntVec r = detail::primitive(c);
    bool inside = std::all_of(mats.begin(), mats.end(), [&](const IntMatrix& a) { return cone_member(r, a); });
    if (inside) rays.push_back(std::move(r));
  }
  std::sort(rays.begin(), rays.end());
  rays.erase(std::unique(rays.begin(), rays.end()), rays.end());
  if (rays.empty()) throw argument_error("cone_intersection_rays: the cones meet only in the origin");
  for (auto& r : rays)
    for (auto& x : r) x *= m;
  return rays;
}

// ---------------------------------------------------------------------------
// Random instances

struct KleinGenParams {
  std::size_t d = 2;
  long delta = 2;
  std::size_t n_sets = 3;
  std::size_t size = 8;
  long eps = 1;
  bool planted = true;
  std::size_t planted_size = 3;
};

namespace detail {

inline IntVec random_vector(Rng& rng, std::size_t d, long delta) {
  IntVec v(d);
  for (auto& x : v) x = rng.uniform(-delta, delta);
  return v;
}

// Moves one unit between two vectors of the list, keeping the total.
inline void shuffle_units(Rng& rng, std::vector<IntVec>& vs, long delta, std::size_t steps) {
  if (vs.size() < 2) return;
  const std::size_t d = vs[0].size();
  for (std::size_t s = 0; s < steps; ++s) {
    std::size_t a = rng.index(vs.size()), b = rng.index(vs.size()), q = rng.index(d);
    if (a == b) continue;
    if (vs[a][q] < delta && vs[b][q] > -delta) ++vs[a][q], --vs[b][q];
  }
}

// Adjusts random coordinates by one until the total is `target`.
inline void steer_sum(Rng& rng, std::vector<IntVec>& vs, const IntVec& target, long delta) {
  IntVec sum(target.size(), 0);
  for (const auto& v : vs) sum = sum + v;
  for (std::size_t q = 0; q < target.size(); ++q)
    while (sum[q] != target[q]) {
      const int step = sum[q] < target[q] ? 1 : -1;
      std::vector<std::size_t> room;
      for (std::size_t j = 0; j < vs.size(); ++j)
        if ((step > 0 && vs[j][q] < delta) || (step < 0 && vs[j][q] > -delta)) room.push_back(j);
      if (room.empty()) break;
      vs[room[rng.index(room.size())]][q] += step;
      sum[q] += step;
    }
}

}  // namespace detail

/// Multisets whose sums all lie within eps of b = sum of the first. With
/// `planted`, each set also contains a sub-multiset of planted_size vectors
/// summing to one common nonzero vector.
inline KleinInstance generate_klein_instance(const KleinGenParams& p, Rng& rng) {
  if (p.d == 0 || p.delta < 1 || p.n_sets == 0 || p.eps < 1) throw argument_error("generate_klein_instance: bad parameters");
  if (p.planted && (p.planted_size == 0 || p.planted_size > p.size))
    throw argument_error("generate_klein_instance: planted size must be in [1, size]");
  KleinInstance k;
  k.d = p.d;
  k.delta = p.delta;
  k.eps = p.eps;
  const std::size_t core = p.planted ? p.planted_size : 0;

  std::vector<IntVec> planted;
  if (p.planted) {
    do {
      planted.clear();
      for (std::size_t j = 0; j < core; ++j) planted.push_back(detail::random_vector(rng, p.d, p.delta));
    } while (is_zero([&] {
      IntVec s(p.d, 0);
      for (const auto& v : planted) s = s + v;
      return s;
    }()));
  }
  std::vector<IntVec> pad_first;
  for (std::size_t j = core; j < p.size; ++j) pad_first.push_back(detail::random_vector(rng, p.d, p.delta));
  IntVec pad_sum(p.d, 0);
  for (const auto& v : pad_first) pad_sum = pad_sum + v;

  for (std::size_t i = 0; i < p.n_sets; ++i) {
    std::vector<IntVec> core_i = planted;
    detail::shuffle_units(rng, core_i, p.delta, 4 * core);
    std::vector<IntVec> pad;
    if (i == 0) {
      pad = pad_first;
    } else {
      for (std::size_t j = core; j < p.size; ++j) pad.push_back(detail::random_vector(rng, p.d, p.delta));
      IntVec target = pad_sum;
      for (auto& x : target) x += rng.uniform(-(p.eps - 1), p.eps - 1);
      detail::steer_sum(rng, pad, target, p.delta);
    }
    std::vector<IntVec> set = core_i;
    set.insert(set.end(), pad.begin(), pad.end());
    rng.shuffle(set);
    k.sets.push_back(std::move(set));
  }
  k.b = IntVec(p.d, 0);
  for (const auto& v : k.sets[0]) k.b = k.b + v;
  // Steering can stall when a padding set is too small; widen eps so the
  // instance stays valid.
  for (const auto& set : k.sets) {
    IntVec s(p.d, 0);
    for (const auto& v : set) s = s + v;
    k.eps = std::max(k.eps, Int(norm_inf(s - k.b) + 1));
  }
  return k;
}

}  // namespace sip
