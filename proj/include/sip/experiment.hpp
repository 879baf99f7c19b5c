#pragma once

// Reproducible experiment runners producing CSV, and the instance samplers
// they share with the acceptance harness.
//
// Columns:
//   solver-vs-oracle: index,t,r,s,delta,rows_per_block,rows,cols,solver_status,oracle_status,
//                     solver_objective,oracle_objective,gap,certified,nodes,max_radius
//   proximity:        index,m,n,delta,distance,cook_bound,bound,pass
//   klein:            index,d,delta,sets,size,eps,planted,found,valid,b_prime,b_prime_norm,f_bound
//   graver-bounds:    index,rows,cols,delta,elements,g_inf,bound,pass
// Tuples inside a field are separated by ';'. gap is "mismatch" when the
// statuses differ and "0" when both are not optimal.

#include <sip/graver.hpp>
#include <sip/io.hpp>
#include <sip/klein.hpp>
#include <sip/oracle.hpp>
#include <sip/proximity.hpp>
#include <sip/solver.hpp>

#include <limits>
#include <string>

namespace sip {

struct RsLimits {
  std::size_t max_t = 4, max_r = 2, max_s = 2;
  long max_delta = 2;
  std::size_t max_rows_per_block = 2;
  std::size_t max_cols = std::numeric_limits<std::size_t>::max();
  Int max_volume = 100000000;
};

struct RsSample {
  RsFamily family;
  GenParams params;
  GeneratedInstance generated;
  IntVec box;  // every optimum lies in [0, box]
};

/// Instance `index` of the stream `seed`; draws again until the provable
/// oracle box exists and is small enough.
inline RsSample sample_rs_instance(std::uint64_t seed, std::size_t index, const RsLimits& lim = {}) {
  Rng rng = Rng(seed).split(index);
  for (;;) {
    RsSample s;
    s.family = {1 + rng.index(lim.max_t), rng.index(lim.max_r + 1), 1 + rng.index(lim.max_s)};
    if (s.family.r + s.family.t * s.family.s > lim.max_cols) continue;
    s.params.family = s.family;
    s.params.delta = rng.uniform(1, lim.max_delta);
    s.params.rows_per_block = 1 + rng.index(lim.max_rows_per_block);
    s.params.seed = rng.next();
    s.generated = gen_instance(s.params);
    auto box = provable_box(s.generated.instance, s.generated.planted);
    if (!box) continue;
    Int volume = 1;
    for (const auto& v : *box) volume *= v + 1;
    if (volume > lim.max_volume) continue;
    s.box = *box;
    return s;
  }
}

struct SmallSample {
  IlpInstance instance;
  IntVec planted;
  IntVec box;
  long delta;
};

/// Equality program with 2..4 columns, fewer rows than columns, entries in
/// [-delta, delta] (delta in {1, 2}) and a bounded relaxation.
inline SmallSample sample_small_program(std::uint64_t seed, std::size_t index) {
  Rng rng = Rng(seed).split(index);
  for (;;) {
    const std::size_t m = 2 + rng.index(3), n = 1 + rng.index(m - 1);
    const long delta = rng.uniform(1, 2);
    std::vector<Entry> e;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < m; ++j)
        if (long v = rng.uniform(-delta, delta)) e.push_back({i, j, v});
    SmallSample s;
    s.delta = delta;
    s.instance.A = SparseIntMatrix::from_entries(n, m, e);
    s.planted.resize(m);
    for (auto& x : s.planted) x = rng.uniform(0, 3);
    s.instance.b = s.instance.A * s.planted;
    s.instance.c.resize(m);
    for (auto& x : s.instance.c) x = rng.uniform(-delta, delta);
    auto box = provable_box(s.instance, s.planted);
    if (!box) continue;
    Int volume = 1;
    for (const auto& v : *box) volume *= v + 1;
    if (volume > 1000000) continue;
    s.box = *box;
    return s;
  }
}

/// Random n x m matrix (n <= 3, m <= 4) with entries in [-delta, delta].
inline SparseIntMatrix sample_matrix(std::uint64_t seed, std::size_t index, long* delta_out = nullptr) {
  Rng rng = Rng(seed).split(index);
  for (;;) {
    const std::size_t n = 1 + rng.index(3), m = 2 + rng.index(3);
    const long delta = rng.uniform(1, 2);
    std::vector<Entry> e;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < m; ++j)
        if (long v = rng.uniform(-delta, delta)) e.push_back({i, j, v});
    if (e.empty()) continue;
    if (delta_out) *delta_out = delta;
    return SparseIntMatrix::from_entries(n, m, e);
  }
}

struct ExperimentSpec {
  std::string name;
  std::size_t count = 10;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  RadiusPolicy policy;      // solver-vs-oracle
  std::optional<Int> bound;  // proximity; default (m ||A||)^{m+1}
};

namespace detail {

inline std::string tuple(const IntVec& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + to_string(v[i]);
  return s;
}

inline std::string solver_vs_oracle(const ExperimentSpec& spec) {
  std::string out = csv_row({"index", "t", "r", "s", "delta", "rows_per_block", "rows", "cols", "solver_status",
                             "oracle_status", "solver_objective", "oracle_objective", "gap", "certified", "nodes",
                             "max_radius"});
  for (std::size_t k = 0; k < spec.count; ++k) {
    RsSample s = sample_rs_instance(spec.seed, k);
    const IlpInstance& p = s.generated.instance;
    IlpResult got = solve_ilp(p, spec.policy, spec.threads);
    IlpStatus want = brute_force_ilp(p, s.box);
    std::string gap;
    if (got.status.status != want.status) gap = "mismatch";
    else if (want.optimal()) gap = to_string(Rat(got.status.objective - want.objective));
    else gap = "0";
    out += csv_row({std::to_string(k), std::to_string(s.family.t), std::to_string(s.family.r),
                    std::to_string(s.family.s), std::to_string(s.params.delta), std::to_string(s.params.rows_per_block),
                    std::to_string(p.rows()), std::to_string(p.cols()), to_string(got.status.status),
                    to_string(want.status), got.status.optimal() ? to_string(got.status.objective) : "",
                    want.optimal() ? to_string(want.objective) : "", gap, got.certified ? "1" : "0",
                    std::to_string(got.stats.nodes), to_string(got.stats.max_radius)});
  }
  return out;
}

inline std::string proximity(const ExperimentSpec& spec) {
  std::string out = csv_row({"index", "m", "n", "delta", "distance", "cook_bound", "bound", "pass"});
  for (std::size_t k = 0; k < spec.count; ++k) {
    SmallSample s = sample_small_program(spec.seed, k);
    const IlpInstance& p = s.instance;
    LpResult lp = simplex_solve(p);
    IlpStatus ip = brute_force_ilp(p, s.box);
    if (!lp.optimal() || !ip.optimal()) throw argument_error("proximity experiment: sample without an optimum");
    ProximityWitness w = proximity_witness(p, lp.x, ip.x);
    const Int delta = std::max(p.A.max_abs(), Int(1));
    const Int bound = spec.bound ? *spec.bound : proximity_bound_columns(p.cols(), delta);
    out += csv_row({std::to_string(k), std::to_string(p.cols()), std::to_string(p.rows()), to_string(delta),
                    to_string(w.rho), to_string(proximity_bound_cook(p.cols(), delta)), to_string(bound),
                    w.rho <= bound ? "1" : "0"});
  }
  return out;
}

inline std::string klein(const ExperimentSpec& spec) {
  std::string out = csv_row({"index", "d", "delta", "sets", "size", "eps", "planted", "found", "valid", "b_prime",
                             "b_prime_norm", "f_bound"});
  for (std::size_t k = 0; k < spec.count; ++k) {
    Rng rng = Rng(spec.seed).split(k);
    KleinGenParams g;
    g.d = 1 + rng.index(2);
    g.delta = rng.uniform(1, 2);
    g.n_sets = 2 + rng.index(4);
    g.size = 4 + rng.index(7);
    g.planted = k % 2 == 0;
    g.planted_size = 1 + rng.index(3);
    KleinInstance inst = generate_klein_instance(g, rng);
    const Int f = klein_bound(inst.d, inst.delta);
    auto cert = common_submultiset_sum(inst, f);
    out += csv_row({std::to_string(k), std::to_string(inst.d), to_string(inst.delta), std::to_string(inst.sets.size()),
                    std::to_string(g.size), to_string(inst.eps), g.planted ? "1" : "0", cert ? "1" : "0",
                    cert && validate_certificate(inst, *cert) ? "1" : "0", cert ? tuple(cert->b_prime) : "",
                    cert ? to_string(sip::norm_inf(cert->b_prime)) : "", to_string(f)});
  }
  return out;
}

inline std::string graver_bounds(const ExperimentSpec& spec) {
  std::string out = csv_row({"index", "rows", "cols", "delta", "elements", "g_inf", "bound", "pass"});
  for (std::size_t k = 0; k < spec.count; ++k) {
    SparseIntMatrix a = sample_matrix(spec.seed, k);
    GraverBasis g = graver_basis(a);
    const Int delta = a.max_abs();
    const Int bound = graver_bound_rows(a.rows(), delta);
    const Int ginf = graver_norm(g);
    out += csv_row({std::to_string(k), std::to_string(a.rows()), std::to_string(a.cols()), to_string(delta),
                    std::to_string(g.size()), to_string(ginf), to_string(bound), ginf <= bound ? "1" : "0"});
  }
  return out;
}

}  // namespace detail

inline std::string run_experiment(const ExperimentSpec& spec) {
  if (spec.name == "solver-vs-oracle") return detail::solver_vs_oracle(spec);
  if (spec.name == "proximity") return detail::proximity(spec);
  if (spec.name == "klein") return detail::klein(spec);
  if (spec.name == "graver-bounds") return detail::graver_bounds(spec);
  throw argument_error("unknown experiment \"" + spec.name +
                       "\" (expected solver-vs-oracle, proximity, klein or graver-bounds)");
}

}  // namespace sip
