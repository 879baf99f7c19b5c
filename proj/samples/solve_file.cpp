// Loads an instance file, prints its structure and solves it both ways.

#include <sip/io.hpp>
#include <sip/solver.hpp>
#include <sip/structure.hpp>

#include <iostream>

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: solve_file INSTANCE.json\n";
    return 1;
  }
  try {
    sip::IlpInstance p = sip::parse_instance(argv[1]);
    std::cout << p.rows() << "x" << p.cols() << ", " << sip::block_partition(p.A).size() << " block(s), depth "
              << sip::depth(p.A) << "\n";

    sip::LpResult lp = sip::simplex_solve(p);
    std::cout << "relaxation: " << sip::to_string(lp.status);
    if (lp.optimal()) std::cout << " " << sip::to_string(lp.objective) << " at " << sip::format_vec(lp.x);
    std::cout << "\n";

    sip::IlpResult h = sip::solve_ilp(p);
    std::cout << "heuristic: " << sip::to_json(h.status).dump() << (h.certified ? " (certified)" : "") << "\n";
    try {
      sip::IlpResult c = sip::solve_ilp(p, sip::RadiusPolicy::certified());
      std::cout << "certified: " << sip::to_json(c.status).dump() << "\n";
    } catch (const sip::radius_refused& e) {
      std::cout << "certified: refused, proximity radius " << e.bound << " is over budget\n";
    }
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
}
