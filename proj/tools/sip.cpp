// sip: command-line front end for the structured integer programming library.

#include <sip/experiment.hpp>
#include <sip/graver.hpp>
#include <sip/io.hpp>
#include <sip/klein.hpp>
#include <sip/lp.hpp>
#include <sip/oracle.hpp>
#include <sip/proximity.hpp>
#include <sip/solver.hpp>
#include <sip/structure.hpp>

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

namespace {

enum Exit { kOk = 0, kError = 1, kInfeasible = 2, kUnbounded = 3, kUncertified = 4 };

unsigned resolve_threads(unsigned flag) {
  if (flag > 0) return flag;
  if (const char* env = std::getenv("SIP_THREADS")) {
    try {
      sip::Int v = sip::parse_int(env);
      if (v >= 1 && v <= 1024) return static_cast<unsigned>(v.get_ui());
    } catch (const sip::argument_error&) {
    }
    throw sip::argument_error(std::string("SIP_THREADS must be an integer in 1..1024, got \"") + env + "\"");
  }
  return 1;
}

int status_exit(sip::Status s) {
  switch (s) {
    case sip::Status::Optimal: return kOk;
    case sip::Status::Infeasible: return kInfeasible;
    case sip::Status::Unbounded: return kUnbounded;
  }
  return kError;
}

sip::json index_array(const std::vector<std::size_t>& v) {
  sip::json a = sip::json::array();
  for (auto x : v) a.push_back(std::to_string(x));
  return a;
}

void print(const sip::json& j) { std::cout << j.dump(2) << "\n"; }

struct SolveArgs {
  std::string file, mode = "heuristic";
  long rho0 = 2, growth = 2, cap = 64;
  unsigned threads = 0;
  bool json = false;
};

int run_solve(const SolveArgs& a) {
  const sip::IlpInstance p = sip::parse_instance(a.file);
  sip::RadiusPolicy policy = a.mode == "certified" ? sip::RadiusPolicy::certified()
                                                   : sip::RadiusPolicy::heuristic(a.rho0, a.growth, a.cap);
  const unsigned threads = resolve_threads(a.threads);
  std::optional<std::string> refused;
  sip::IlpResult r;
  try {
    r = sip::solve_ilp(p, policy, threads);
  } catch (const sip::radius_refused& e) {
    refused = e.bound;
    r = sip::solve_ilp(p, sip::RadiusPolicy::heuristic(a.rho0, a.growth, a.cap), threads);
    r.certified = false;
  }
  const bool best_effort = !r.certified || r.undecided;
  if (a.json) {
    sip::json j = sip::to_json(r.status);
    j["certified"] = r.certified;
    j["undecided"] = r.undecided;
    if (refused) j["refused_bound"] = *refused;
    j["stats"] = {{"nodes", std::to_string(r.stats.nodes)},
                  {"lp_solves", std::to_string(r.stats.lp_solves)},
                  {"max_radius", sip::to_string(r.stats.max_radius)},
                  {"max_depth", std::to_string(r.stats.max_depth)}};
    print(j);
  } else {
    std::cout << "status: " << sip::to_string(r.status.status) << "\n";
    if (r.status.optimal()) {
      std::cout << "objective: " << sip::to_string(r.status.objective) << "\n";
      std::cout << "x: " << sip::format_vec(r.status.x) << "\n";
    }
    std::cout << "certified: " << (r.certified ? "yes" : "no") << "\n";
    if (r.undecided) std::cout << "note: relaxation unbounded, integral unboundedness undecided\n";
    if (refused) std::cout << "note: certified radius " << *refused << " exceeds the branch budget\n";
    std::cout << "nodes: " << r.stats.nodes << "\n";
  }
  return best_effort ? kUncertified : status_exit(r.status.status);
}

int run_lp(const std::string& file, const std::string& method) {
  const sip::IlpInstance p = sip::parse_instance(file);
  sip::LpResult r;
  sip::json j;
  if (method == "recovery") {
    sip::IlpInstance q = p;
    if (p.form == sip::Form::Eq) q = sip::eq_to_leq(p);
    sip::RecoveryStats stats;
    r = sip::recover_solution(q, &stats);
    j = sip::to_json(r);
    j["recursion_depth"] = std::to_string(stats.max_depth);
  } else {
    r = sip::simplex_solve(p);
    j = sip::to_json(r);
  }
  j["method"] = method;
  print(j);
  return status_exit(r.status);
}

int run_structure(const std::string& file, const std::string& rs, std::optional<std::size_t> depth_limit) {
  const sip::IlpInstance p = sip::parse_instance(file);
  sip::json j;
  j["rows"] = std::to_string(p.rows());
  j["cols"] = std::to_string(p.cols());
  j["nnz"] = std::to_string(p.A.nnz());
  j["blocks"] = std::to_string(sip::block_partition(p.A).size());
  j["depth"] = std::to_string(sip::depth(p.A));
  if (!rs.empty()) {
    auto comma = rs.find(',');
    if (comma == std::string::npos) throw sip::argument_error("--rs expects r,s");
    const auto r = sip::parse_int(rs.substr(0, comma)), s = sip::parse_int(rs.substr(comma + 1));
    if (r < 0 || s < 1) throw sip::argument_error("--rs expects r >= 0 and s >= 1");
    auto dec = sip::find_rs_decomposition(p.A, r.get_ui(), s.get_ui());
    sip::json w;
    w["r"] = sip::to_string(r);
    w["s"] = sip::to_string(s);
    w["found"] = dec.has_value();
    if (dec) {
      w["globals"] = index_array(dec->globals);
      w["row_order"] = index_array(dec->row_order);
      w["col_order"] = index_array(dec->col_order);
      w["blocks"] = std::to_string(dec->t);
    }
    j["rs"] = w;
  }
  if (depth_limit) {
    auto wit = sip::find_depth_permutation(p.A, *depth_limit);
    sip::json w;
    w["d"] = std::to_string(*depth_limit);
    w["found"] = wit.has_value();
    if (wit) {
      w["row_order"] = index_array(wit->row_order);
      w["col_order"] = index_array(wit->col_order);
      sip::json parents = sip::json::array();
      for (auto v : wit->forest.parent) parents.push_back(v == sip::npos ? "root" : std::to_string(v));
      w["forest_parent"] = parents;
      w["forest_depth"] = std::to_string(wit->forest.depth);
    }
    j["depth_witness"] = w;
  }
  print(j);
  return kOk;
}

int run_graver(const std::string& file, const std::string& cap) {
  const sip::IlpInstance p = sip::parse_instance(file);
  sip::GraverOptions opts;
  if (!cap.empty()) opts.norm_cap = sip::parse_int(cap);
  const sip::GraverBasis g = sip::graver_basis(p.A, opts);
  for (const auto& e : g.elements) std::cout << sip::format_vec(e) << "\n";
  const sip::Int delta = std::max(p.A.max_abs(), sip::Int(1));
  std::cout << "elements: " << g.size() << "\n";
  std::cout << "g_inf: " << sip::to_string(sip::graver_norm(g)) << "\n";
  std::cout << "bound_rows: " << sip::to_string(sip::graver_bound_rows(p.rows(), delta)) << "\n";
  return kOk;
}

struct KleinArgs {
  std::size_t d = 2, sets = 3, size = 8, planted_size = 3;
  long delta = 2, eps = 1;
  std::uint64_t seed = 1;
  bool planted = false;
};

int run_klein(const KleinArgs& a) {
  sip::KleinGenParams g;
  g.d = a.d;
  g.delta = a.delta;
  g.n_sets = a.sets;
  g.size = a.size;
  g.eps = a.eps;
  g.planted = a.planted;
  g.planted_size = a.planted_size;
  sip::Rng rng(a.seed);
  const sip::KleinInstance k = sip::generate_klein_instance(g, rng);
  sip::json j;
  j["instance"] = {{"d", std::to_string(k.d)},     {"delta", sip::to_string(k.delta)},
                   {"sets", std::to_string(k.sets.size())}, {"size", std::to_string(a.size)},
                   {"eps", sip::to_string(k.eps)}, {"b", sip::to_json(k.b)},
                   {"planted", a.planted}};
  sip::json threshold;
  try {
    const sip::Int f = sip::klein_bound(k.d, k.delta);
    const auto cert = sip::common_submultiset_sum(k, f);
    if (cert) {
      sip::json subsets = sip::json::array();
      for (const auto& s : cert->subsets) subsets.push_back(index_array(s));
      j["certificate"] = {{"b_prime", sip::to_json(cert->b_prime)},
                          {"subsets", subsets},
                          {"valid", sip::validate_certificate(k, *cert)}};
    } else {
      j["certificate"] = "none";
    }
    threshold["f"] = sip::to_string(f);
    threshold["eps_f"] = sip::to_string(sip::Int(k.eps * f));
    threshold["b_norm"] = sip::to_string(sip::norm_inf(k.b));
    threshold["b_norm_exceeds_eps_f"] = sip::norm_inf(k.b) > k.eps * f;
  } catch (const sip::bound_too_large& e) {
    j["certificate"] = "none";
    threshold["f"] = "too large";
    threshold["log2_f"] = std::to_string(e.log2_estimate);
  }
  j["threshold"] = threshold;
  print(j);
  return kOk;
}

int run_gen(const std::string& family, const sip::GenParams& base, std::size_t t, std::size_t r, std::size_t s,
            std::size_t d, std::size_t branching, const std::string& out, std::string sidecar) {
  sip::GenParams gp = base;
  if (family == "rs") gp.family = sip::RsFamily{t, r, s};
  else if (family == "multistage") gp.family = sip::MultistageFamily{d, branching};
  else throw sip::argument_error("--family must be rs or multistage");
  const sip::GeneratedInstance g = sip::gen_instance(gp);
  const sip::IlpInstance& p = g.instance;
  sip::json side;
  side["planted"] = sip::to_json(g.planted);
  if (auto box = sip::provable_box(p, g.planted)) {
    side["box"] = sip::to_json(*box);
    side["box_kind"] = "provable";
  } else {
    // fall back to the planted point plus the single-block proximity bound
    const sip::Int delta = std::max(p.A.max_abs(), sip::Int(1));
    sip::IntVec fallback = g.planted;
    for (const auto& b : sip::block_partition(p.A).blocks)
      for (auto j : b.cols) fallback[j] += sip::proximity_bound_columns(b.cols.size(), delta);
    side["box"] = sip::to_json(fallback);
    side["box_kind"] = "proximity";
  }
  side["seed"] = std::to_string(gp.seed);
  if (sidecar.empty()) sidecar = out + ".sidecar.json";
  sip::write_file(out, sip::write_instance(p));
  sip::write_file(sidecar, side.dump(2) + "\n");
  std::cout << "wrote " << out << " (" << p.rows() << "x" << p.cols() << ") and " << sidecar << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact solver for block-structured integer programs"};
  app.require_subcommand(1);

  SolveArgs solve;
  auto* cmd_solve = app.add_subcommand("solve", "Solve an instance file");
  cmd_solve->add_option("file", solve.file, "Instance JSON")->required();
  cmd_solve->add_option("--mode", solve.mode)->check(CLI::IsMember({"certified", "heuristic"}));
  cmd_solve->add_option("--rho0", solve.rho0, "Initial branching radius (heuristic)");
  cmd_solve->add_option("--growth", solve.growth, "Radius growth factor (heuristic)");
  cmd_solve->add_option("--cap", solve.cap, "Largest radius (heuristic)");
  cmd_solve->add_option("--threads", solve.threads, "Worker threads (default: SIP_THREADS or 1)");
  cmd_solve->add_flag("--json", solve.json, "JSON output");

  std::string lp_file, lp_method = "simplex";
  auto* cmd_lp = app.add_subcommand("lp", "Solve the LP relaxation");
  cmd_lp->add_option("file", lp_file)->required();
  cmd_lp->add_option("--method", lp_method)->check(CLI::IsMember({"simplex", "recovery"}));

  std::string st_file, st_rs;
  std::optional<std::size_t> st_depth;
  auto* cmd_structure = app.add_subcommand("structure", "Block, depth and (r,s) structure");
  cmd_structure->add_option("file", st_file)->required();
  cmd_structure->add_option("--rs", st_rs, "Find an (r,s) decomposition, e.g. 1,2");
  cmd_structure->add_option("--depth", st_depth, "Find a depth-d permutation");

  std::string gr_file, gr_cap;
  auto* cmd_graver = app.add_subcommand("graver", "Graver basis of the constraint matrix");
  cmd_graver->add_option("file", gr_file)->required();
  cmd_graver->add_option("--cap", gr_cap, "Norm cap for the completion");

  KleinArgs klein;
  auto* cmd_klein = app.add_subcommand("klein", "Random common submultiset sum instance");
  cmd_klein->add_option("--d", klein.d)->check(CLI::Range(1, 3));
  cmd_klein->add_option("--delta", klein.delta)->check(CLI::PositiveNumber);
  cmd_klein->add_option("--sets", klein.sets)->check(CLI::PositiveNumber);
  cmd_klein->add_option("--size", klein.size)->check(CLI::PositiveNumber);
  cmd_klein->add_option("--eps", klein.eps)->check(CLI::PositiveNumber);
  cmd_klein->add_option("--seed", klein.seed);
  cmd_klein->add_option("--planted-size", klein.planted_size)->check(CLI::PositiveNumber);
  cmd_klein->add_flag("--planted", klein.planted);

  std::size_t px_samples = 20;
  std::uint64_t px_seed = 1;
  std::string px_bound = "auto";
  auto* cmd_prox = app.add_subcommand("proximity", "Proximity samples as CSV");
  cmd_prox->add_option("--samples", px_samples);
  cmd_prox->add_option("--seed", px_seed);
  cmd_prox->add_option("--bound", px_bound, "auto or an integer");

  std::string gen_family = "rs", gen_out, gen_sidecar;
  std::size_t gen_t = 2, gen_r = 1, gen_s = 2, gen_d = 2, gen_branching = 2;
  sip::GenParams gen;
  auto* cmd_gen = app.add_subcommand("gen", "Generate an instance with a planted solution");
  cmd_gen->add_option("--family", gen_family)->check(CLI::IsMember({"rs", "multistage"}));
  cmd_gen->add_option("--t", gen_t)->check(CLI::PositiveNumber);
  cmd_gen->add_option("--r", gen_r);
  cmd_gen->add_option("--s", gen_s)->check(CLI::PositiveNumber);
  cmd_gen->add_option("--d", gen_d)->check(CLI::PositiveNumber);
  cmd_gen->add_option("--branching", gen_branching)->check(CLI::PositiveNumber);
  cmd_gen->add_option("--delta", gen.delta)->check(CLI::PositiveNumber);
  cmd_gen->add_option("--rows-per-block", gen.rows_per_block)->check(CLI::PositiveNumber);
  cmd_gen->add_option("--magnitude", gen.magnitude)->check(CLI::PositiveNumber);
  cmd_gen->add_option("--seed", gen.seed);
  cmd_gen->add_option("--out", gen_out, "Instance path")->required();
  cmd_gen->add_option("--sidecar", gen_sidecar, "Sidecar path (default: <out>.sidecar.json)");

  sip::ExperimentSpec exp;
  std::string exp_out, exp_mode = "heuristic", exp_bound = "auto";
  unsigned exp_threads = 0;
  auto* cmd_exp = app.add_subcommand("experiment", "Run an experiment and print CSV");
  cmd_exp->add_option("name", exp.name, "solver-vs-oracle, proximity, klein or graver-bounds")->required();
  cmd_exp->add_option("--count", exp.count);
  cmd_exp->add_option("--seed", exp.seed);
  cmd_exp->add_option("--threads", exp_threads);
  cmd_exp->add_option("--mode", exp_mode)->check(CLI::IsMember({"certified", "heuristic"}));
  cmd_exp->add_option("--bound", exp_bound, "proximity: auto or an integer");
  cmd_exp->add_option("--out", exp_out, "CSV path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kError;
  }

  try {
    if (*cmd_solve) return run_solve(solve);
    if (*cmd_lp) return run_lp(lp_file, lp_method);
    if (*cmd_structure) return run_structure(st_file, st_rs, st_depth);
    if (*cmd_graver) return run_graver(gr_file, gr_cap);
    if (*cmd_klein) return run_klein(klein);
    if (*cmd_prox) {
      sip::ExperimentSpec spec;
      spec.name = "proximity";
      spec.count = px_samples;
      spec.seed = px_seed;
      if (px_bound != "auto") spec.bound = sip::parse_int(px_bound);
      std::cout << sip::run_experiment(spec);
      return kOk;
    }
    if (*cmd_gen) return run_gen(gen_family, gen, gen_t, gen_r, gen_s, gen_d, gen_branching, gen_out, gen_sidecar);
    if (*cmd_exp) {
      exp.threads = resolve_threads(exp_threads);
      if (exp_mode == "certified") exp.policy = sip::RadiusPolicy::certified();
      if (exp_bound != "auto") exp.bound = sip::parse_int(exp_bound);
      const std::string csv = sip::run_experiment(exp);
      if (exp_out.empty()) std::cout << csv;
      else sip::write_file(exp_out, csv);
      return kOk;
    }
  } catch (const std::exception& e) {
    std::cerr << "sip: error: " << e.what() << "\n";
    return kError;
  }
  return kError;
}
