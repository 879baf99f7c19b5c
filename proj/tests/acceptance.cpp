// Acceptance harness: one PASS/FAIL line per criterion. Exit status is the
// number of failing criteria. All comparisons are exact (tolerance 0).

#include "oracles.hpp"

#include <sip/experiment.hpp>
#include <sip/graver.hpp>
#include <sip/klein.hpp>
#include <sip/lp.hpp>
#include <sip/oracle.hpp>
#include <sip/proximity.hpp>
#include <sip/solver.hpp>

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

namespace {

using sip::Int;
using sip::IntMatrix;
using sip::IntVec;
using sip::IlpInstance;
using sip::Rat;
using sip::RatVec;
using sip::SparseIntMatrix;
using sip::Status;

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& name, const std::function<Outcome()>& run) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = run();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!o.pass) ++failures;
  std::printf("%s [%d] %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", id, name.c_str(), o.detail.c_str(), secs);
  std::fflush(stdout);
}

std::string ratio(std::size_t good, std::size_t total) { return std::to_string(good) + "/" + std::to_string(total); }

// Independent checks of the solver output: feasibility and objective.
bool agrees(const IlpInstance& p, const sip::IlpResult& got, const sip::IlpStatus& want) {
  if (got.status.status != want.status) return false;
  if (!want.optimal()) return true;
  return p.feasible(got.status.x) && Rat(p.objective(got.status.x)) == got.status.objective &&
         got.status.objective == want.objective;
}

Outcome solver_exactness() {
  const auto start = std::chrono::steady_clock::now();
  std::size_t good = 0;
  const std::size_t total = 500;
  for (std::size_t k = 0; k < total; ++k) {
    sip::RsSample s = sip::sample_rs_instance(1001, k);
    auto got = sip::solve_ilp(s.generated.instance, sip::RadiusPolicy::heuristic(2, 2, 64));
    auto want = sip::brute_force_ilp(s.generated.instance, s.box);
    good += agrees(s.generated.instance, got, want);
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::ostringstream d;
  d << ratio(good, total) << " zero gap, " << static_cast<int>(secs) << " s total (limit 300 s)";
  return {good == total && secs < 300, d.str()};
}

Outcome certified_mode() {
  sip::RsLimits lim;
  lim.max_delta = 1;
  lim.max_cols = 3;
  std::size_t good = 0, certified = 0;
  const std::size_t total = 120;
  for (std::size_t k = 0; k < total; ++k) {
    sip::RsSample s = sip::sample_rs_instance(2002, k, lim);
    const auto& p = s.generated.instance;
    if (sip::proximity_bound_columns(p.cols(), std::max(p.A.max_abs(), Int(1))) > 10000)
      return {false, "sample outside the subfamily"};
    auto got = sip::solve_ilp(p, sip::RadiusPolicy::certified());
    certified += got.certified;
    good += got.certified && agrees(p, got, sip::brute_force_ilp(p, s.box));
  }
  return {good == total && total >= 100, ratio(good, total) + " exact and certified (need >= 100)"};
}

IlpInstance random_feasible_leq(sip::Rng& rng) {
  for (;;) {
    const std::size_t n = 1 + rng.index(4), m = 1 + rng.index(6);
    std::vector<sip::Entry> e;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < m; ++j)
        if (long v = rng.uniform(-3, 3)) e.push_back({i, j, v});
    IlpInstance p;
    p.form = sip::Form::Leq;
    p.A = SparseIntMatrix::from_entries(n, m, e);
    IntVec z(m);
    for (auto& x : z) x = rng.uniform(0, 3);
    p.b = p.A * z;
    for (auto& x : p.b) x += rng.uniform(0, 2);
    p.c.resize(m);
    for (auto& x : p.c) x = rng.uniform(-3, 3);
    if (sip::simplex_solve(p).optimal()) return p;
  }
}

std::vector<IlpInstance> leq_programs() {
  sip::Rng rng(3003);
  std::vector<IlpInstance> out;
  for (int k = 0; k < 200; ++k) out.push_back(random_feasible_leq(rng));
  return out;
}

Outcome strong_duality() {
  std::size_t good = 0;
  const auto programs = leq_programs();
  for (const auto& p : programs) {
    auto primal = sip::simplex_solve(p);
    auto d = sip::dualize(p);
    auto dual = sip::solve_dual(d);
    // y <= 0 with A^T y <= c, checked densely here
    bool ok = dual.optimal() && primal.objective == dual.objective;
    if (ok) {
      auto dense = p.A.to_dense();
      for (std::size_t i = 0; i < p.rows(); ++i) ok = ok && dual.x[i] <= 0;
      Rat value = 0;
      for (std::size_t i = 0; i < p.rows(); ++i) value += Rat(p.b[i]) * dual.x[i];
      ok = ok && value == dual.objective;
      for (std::size_t j = 0; j < p.cols(); ++j) {
        Rat acc = 0;
        for (std::size_t i = 0; i < p.rows(); ++i) acc += Rat(dense(i, j)) * dual.x[i];
        ok = ok && acc <= p.c[j];
      }
    }
    good += ok;
  }
  return {good == programs.size(), ratio(good, programs.size()) + " primal = dual exactly"};
}

Outcome recovery_pipeline() {
  std::size_t good = 0;
  const auto programs = leq_programs();
  for (const auto& p : programs) {
    auto s = sip::simplex_solve(p);
    auto r = sip::recover_solution(p);
    bool ok = r.optimal() && r.objective == s.objective && p.feasible(r.x) && p.objective(r.x) == r.objective;
    if (ok) {
      auto dual = sip::solve_dual(sip::dualize(p));
      auto dense = p.A.to_dense();
      for (std::size_t i = 0; i < p.rows(); ++i) {
        if (dual.x[i] >= 0) continue;  // row in X: tight
        Rat ax = 0;
        for (std::size_t j = 0; j < p.cols(); ++j) ax += Rat(dense(i, j)) * r.x[j];
        ok = ok && ax == p.b[i];
      }
      for (std::size_t j = 0; j < p.cols(); ++j) {
        Rat acc = 0;
        for (std::size_t i = 0; i < p.rows(); ++i) acc += Rat(dense(i, j)) * dual.x[i];
        if (acc < p.c[j]) ok = ok && r.x[j] == 0;  // column in Y: zero
      }
    }
    good += ok;
  }
  return {good == programs.size(), ratio(good, programs.size()) + " objective equal and slackness exact"};
}

Outcome graver_equivalence() {
  std::size_t good = 0, violations = 0;
  const std::size_t total = 60;
  for (std::size_t k = 0; k < total; ++k) {
    SparseIntMatrix a = sip::sample_matrix(4004, k);
    auto g = sip::graver_basis(a);
    good += g.elements == oracle::graver_brute(a);
    violations += sip::graver_norm(g) > sip::graver_bound_rows(a.rows(), a.max_abs());
  }
  return {good == total && violations == 0,
          ratio(good, total) + " set-equal to enumeration, " + std::to_string(violations) + " bound violations"};
}

Outcome conformal_decomposition() {
  sip::Rng rng(5005);
  std::size_t good = 0, total = 0;
  for (std::size_t attempt = 0; total < 100; ++attempt) {
    SparseIntMatrix a = sip::sample_matrix(5005, attempt);
    auto basis = sip::lattice_kernel_basis(a);
    if (basis.empty()) continue;
    IntVec v(a.cols(), 0);
    for (const auto& b : basis) {
      const long c = rng.uniform(-4, 4);
      for (std::size_t i = 0; i < v.size(); ++i) v[i] += c * b[i];
    }
    if (sip::is_zero(v) || sip::norm_inf(v) > 20) continue;
    ++total;
    const auto minimal = oracle::graver_brute(a);
    auto parts = sip::conformal_decompose(v, a);
    IntVec sum(a.cols(), 0);
    bool ok = true;
    for (const auto& p : parts) {
      for (std::size_t i = 0; i < v.size(); ++i) sum[i] += p[i];
      ok = ok && oracle::conformally_below(p, v) && std::binary_search(minimal.begin(), minimal.end(), p);
    }
    good += ok && sum == v;
  }
  return {good == total, ratio(good, total) + " decompositions valid"};
}

sip::KleinInstance klein_sample(std::uint64_t seed, std::size_t k, bool planted, std::size_t max_size) {
  sip::Rng rng = sip::Rng(seed).split(k);
  sip::KleinGenParams g;
  g.d = 1 + rng.index(2);
  g.delta = rng.uniform(1, 2);
  g.n_sets = 2 + rng.index(4);
  g.size = 3 + rng.index(max_size - 2);
  g.planted = planted;
  g.planted_size = 1 + rng.index(std::min<std::size_t>(3, g.size));
  return sip::generate_klein_instance(g, rng);
}

Outcome klein_certificates() {
  std::size_t planted_ok = 0, unplanted_ok = 0;
  for (std::size_t k = 0; k < 200; ++k) {
    auto inst = klein_sample(6006, k, true, 10);
    auto cert = sip::common_submultiset_sum(inst, sip::klein_bound(inst.d, inst.delta));
    planted_ok += cert && sip::validate_certificate(inst, *cert);
  }
  for (std::size_t k = 0; k < 200; ++k) {
    auto inst = klein_sample(6007, k, false, 12);
    const Int bound = sip::klein_bound(inst.d, inst.delta);
    auto cert = sip::common_submultiset_sum(inst, bound);
    auto all = oracle::common_subset_sums(inst.sets, inst.d, bound);
    bool ok = cert.has_value() == !all.empty();
    if (ok && cert) {
      // smallest common sum in (l_inf, lexicographic) order
      auto best = *std::min_element(all.begin(), all.end(), [](const IntVec& x, const IntVec& y) {
        Int nx = sip::norm_inf(x), ny = sip::norm_inf(y);
        return nx != ny ? nx < ny : x < y;
      });
      ok = sip::validate_certificate(inst, *cert) && cert->b_prime == best;
    }
    unplanted_ok += ok;
  }
  return {planted_ok == 200 && unplanted_ok == 200,
          "planted " + ratio(planted_ok, 200) + " certified, unplanted " + ratio(unplanted_ok, 200) +
              " match enumeration"};
}

// Integral cone membership by Cramer's rule on a 2x2 matrix.
bool in_int_cone_2x2(const IntMatrix& a, const IntVec& v) {
  const Int det = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
  const Int l0 = a(1, 1) * v[0] - a(0, 1) * v[1], l1 = a(0, 0) * v[1] - a(1, 0) * v[0];
  if (l0 % det != 0 || l1 % det != 0) return false;
  return l0 / det >= 0 && l1 / det >= 0;
}

Outcome cone_lemma() {
  sip::Rng rng(7007);
  std::size_t tested = 0, violations = 0, rays = 0;
  while (tested < 100) {
    const long delta = rng.uniform(1, 2);
    auto draw = [&] {
      for (;;) {
        IntMatrix m{{rng.uniform(-delta, delta), rng.uniform(-delta, delta)},
                    {rng.uniform(-delta, delta), rng.uniform(-delta, delta)}};
        if (m(0, 0) * m(1, 1) != m(0, 1) * m(1, 0)) return m;
      }
    };
    IntMatrix a = draw(), b = draw();
    const long s0 = rng.uniform(0, 3), s1 = rng.uniform(0, 3);
    IntVec v{a(0, 0) * s0 + a(0, 1) * s1, a(1, 0) * s0 + a(1, 1) * s1};
    if (sip::is_zero(v) || !sip::cone_member(v, b)) continue;
    ++tested;
    const Int da = abs(a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0)), db = abs(b(0, 0) * b(1, 1) - b(0, 1) * b(1, 0));
    Int m;
    mpz_lcm(m.get_mpz_t(), da.get_mpz_t(), db.get_mpz_t());
    const Int limit = sip::pow(Int(3), static_cast<unsigned long>(4 * delta * delta));
    bool ok = m <= limit;
    auto scaled = sip::intcone_member_scaled(v, {a, b});
    ok = ok && scaled.m == m && scaled.ok;
    IntVec mv{m * v[0], m * v[1]};
    ok = ok && in_int_cone_2x2(a, mv) && in_int_cone_2x2(b, mv);
    for (const auto& r : sip::cone_intersection_rays({a, b})) {
      ++rays;
      // rays come scaled by M; their primitive direction scaled by M must be in both integral cones
      ok = ok && in_int_cone_2x2(a, r) && in_int_cone_2x2(b, r);
    }
    violations += !ok;
  }
  return {violations == 0, std::to_string(tested) + " pairs, " + std::to_string(rays) + " rays, " +
                               std::to_string(violations) + " violations"};
}

Outcome proximity_bound() {
  std::size_t good = 0;
  const std::size_t total = 200;
  for (std::size_t k = 0; k < total; ++k) {
    sip::SmallSample s = sip::sample_small_program(8008, k);
    const auto& p = s.instance;
    auto lp = sip::simplex_solve(p);
    auto ip = sip::brute_force_ilp(p, s.box);
    if (!lp.optimal() || !ip.optimal()) continue;
    auto w = sip::proximity_witness(p, lp.x, ip.x);
    const Int delta = std::max(p.A.max_abs(), Int(1));
    const std::size_t m = p.cols();
    bool ok = p.feasible(w.x_diamond);
    Rat dist = 0;
    for (std::size_t i = 0; i < m; ++i) {
      const Rat d = Rat(w.x_diamond[i]) - lp.x[i], e = Rat(ip.x[i]) - lp.x[i];
      ok = ok && d * e >= 0 && abs(d) <= abs(e);
      dist = std::max(dist, Rat(abs(d)));
    }
    const Int cook = Int(static_cast<unsigned long>(m)) * sip::pow(Int(static_cast<unsigned long>(m)) * delta, m);
    ok = ok && dist == w.rho && w.rho <= cook && cook <= sip::pow(Int(static_cast<unsigned long>(m)) * delta, m + 1);
    good += ok;
  }
  return {good == total, ratio(good, total) + " within m(m||A||)^m"};
}

Outcome determinism() {
  sip::ExperimentSpec spec;
  spec.name = "solver-vs-oracle";
  spec.count = 100;
  spec.seed = 9009;
  spec.threads = 1;
  const std::string one = sip::run_experiment(spec);
  spec.threads = 8;
  const std::string many = sip::run_experiment(spec);
  return {one == many && !one.empty(), one == many ? "CSV byte-identical with 1 and 8 threads" : "CSV differs"};
}

}  // namespace

int main() {
  report(1, "solver exactness (500 RS instances, heuristic)", solver_exactness);
  report(2, "certified mode (m <= 3, delta = 1)", certified_mode);
  report(3, "strong duality (200 Leq programs)", strong_duality);
  report(4, "recovery pipeline (200 Leq programs)", recovery_pipeline);
  report(5, "Graver completion vs enumeration", graver_equivalence);
  report(6, "conformal decomposition (100 kernel vectors)", conformal_decomposition);
  report(7, "common submultiset sums", klein_certificates);
  report(8, "cone scaling (100 pairs of 2x2 cones)", cone_lemma);
  report(9, "proximity bound (200 instances)", proximity_bound);
  report(10, "determinism across thread counts", determinism);
  std::printf("%d criteria failed\n", failures);
  return failures;
}
