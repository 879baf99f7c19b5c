#pragma once

// Closed-form proximity bounds and per-pair proximity witnesses.

#include <sip/graver.hpp>
#include <sip/klein.hpp>
#include <sip/lp.hpp>
#include <sip/oracle.hpp>

#include <optional>
#include <vector>

namespace sip {

/// (m Delta)^{m+1}.
inline Int proximity_bound_columns(std::size_t m, const Int& delta) {
  if (m == 0 || delta < 1) throw argument_error("proximity_bound_columns: m and delta must be positive");
  return pow(Int(static_cast<unsigned long>(m)) * delta, m + 1);
}

/// m (m Delta)^m, the intermediate step inside the single-block bound.
inline Int proximity_bound_cook(std::size_t m, const Int& delta) {
  if (m == 0 || delta < 1) throw argument_error("proximity_bound_cook: m and delta must be positive");
  return Int(static_cast<unsigned long>(m)) * pow(Int(static_cast<unsigned long>(m)) * delta, m);
}

/// 3 k gamma rho * f(k, gamma).
inline Int proximity_bound_composition(std::size_t k, const Int& gamma, const Int& rho) {
  if (k == 0 || gamma < 1 || rho < 1) throw argument_error("proximity_bound_composition: arguments must be positive");
  return 3 * Int(static_cast<unsigned long>(k)) * gamma * rho * klein_bound(k, gamma);
}

/// The composition bound with gamma = (2(r+s)Delta+1)^{r+s} and
/// rho = ((r+s) Delta)^{r+s+1}.
inline Int proximity_bound_rs(std::size_t r, std::size_t s, const Int& delta) {
  if (r == 0 || s == 0 || delta < 1) throw argument_error("proximity_bound_rs: arguments must be positive");
  return proximity_bound_composition(r, graver_bound_columns(r + s, delta), proximity_bound_columns(r + s, delta));
}

struct ProximityWitness {
  RatVec x_star;
  IntVec x_box;
  IntVec x_diamond;
  Rat rho;

  bool valid(const IlpInstance& p) const {
    if (!p.feasible(x_diamond)) return false;
    RatVec d(x_star.size()), e(x_star.size());
    for (std::size_t i = 0; i < x_star.size(); ++i) {
      d[i] = Rat(x_diamond[i]) - x_star[i];
      e[i] = Rat(x_box[i]) - x_star[i];
    }
    return conformal_leq(d, e) && rho == norm_inf(d);
  }
};

/// The point of Sol^Z(P) between x_star and x_box (inward-rounded box)
/// closest to x_star in l_inf; ties go to the lexicographically smallest.
inline ProximityWitness proximity_witness(const IlpInstance& p, const RatVec& x_star, const IntVec& x_box,
                                          const Int& budget = 10000000) {
  if (p.form != Form::Eq) throw argument_error("proximity_witness: instance must be in equality form");
  if (x_star.size() != p.cols() || x_box.size() != p.cols()) throw dimension_error("proximity_witness: dimension mismatch");
  if (!p.feasible(x_star)) throw argument_error("proximity_witness: x_star is not a fractional solution");
  if (!p.feasible(x_box)) throw argument_error("proximity_witness: x_box is not an integral solution");
  const std::size_t m = p.cols();
  IntVec lo(m), hi(m);
  Int volume = 1;
  for (std::size_t i = 0; i < m; ++i) {
    if (x_box[i] >= x_star[i]) {
      lo[i] = ceil(x_star[i]);
      hi[i] = x_box[i];
    } else {
      lo[i] = x_box[i];
      hi[i] = floor(x_star[i]);
    }
    volume *= hi[i] - lo[i] + 1;
    if (volume > budget) throw budget_exceeded("proximity_witness: box volume exceeds " + to_string(budget));
  }
  ProximityWitness w{x_star, x_box, x_box, 0};
  w.rho = norm_inf(RatVec(to_rat(x_box) - x_star));
  bool found = false;
  detail::BoxEnumerator(p, lo, hi).run([&](const IntVec& x) {
    Rat dist = 0;
    for (std::size_t i = 0; i < m; ++i) dist = std::max(dist, Rat(abs(Rat(x[i] - x_star[i]))));
    if (!found || dist < w.rho) {
      found = true;
      w.rho = dist;
      w.x_diamond = x;
    }
  });
  return w;
}

struct ProximityReport {
  RatVec x_star;
  IntVec x_diamond;       // closest optimal integral point
  Rat distance;           // ||x_diamond - x_star||_inf
  Int bound;
  std::size_t optima = 0;  // number of optimal integral points in the box
  bool pass = false;
};

/// Optimal vertex of the relaxation against the closest optimal integral
/// point inside `box`.
inline ProximityReport check_optimal_proximity(const IlpInstance& p, const Int& bound, const IntVec& box) {
  LpResult lp = simplex_solve(p);
  if (lp.status != Status::Optimal)
    throw argument_error(std::string("check_optimal_proximity: relaxation is ") + to_string(lp.status));
  AllOptima opt = brute_force_all_optima(p, box);
  if (opt.status != Status::Optimal) throw argument_error("check_optimal_proximity: no integral point in the box");
  ProximityReport r;
  r.x_star = lp.x;
  r.bound = bound;
  r.optima = opt.points.size();
  bool first = true;
  for (const auto& x : opt.points) {
    Rat dist = norm_inf(RatVec(to_rat(x) - lp.x));
    if (first || dist < r.distance) {
      first = false;
      r.distance = dist;
      r.x_diamond = x;
    }
  }
  r.pass = r.distance <= bound;
  return r;
}

}  // namespace sip
