// Generates (r,s)-stochastic instances, scrambles them and checks the solver
// against brute force inside the provable box.

#include <sip/oracle.hpp>
#include <sip/solver.hpp>

#include <iostream>

int main() {
  int agree = 0, total = 0;
  for (std::uint64_t seed = 0; total < 20; ++seed) {
    sip::GenParams gp;
    gp.family = sip::RsFamily{3, 1, 2};
    gp.delta = 2;
    gp.seed = seed;
    auto g = sip::gen_instance(gp);
    auto s = sip::scramble(g.instance, seed + 1000);
    auto box = sip::provable_box(s.instance, s.scramble(g.planted));
    if (!box) continue;
    ++total;
    auto dec = sip::find_rs_decomposition(s.instance.A, 1, 2);
    auto got = sip::solve_ilp(s.instance);
    auto want = sip::brute_force_ilp(s.instance, *box);
    const bool same = got.status.status == want.status && got.status.objective == want.objective;
    agree += same;
    std::cout << "seed " << seed << ": " << s.instance.rows() << "x" << s.instance.cols() << " (1,2)-witness "
              << (dec ? "found" : "missing") << ", objective " << sip::to_string(got.status.objective)
              << (same ? "" : " MISMATCH") << "\n";
  }
  std::cout << agree << "/" << total << " agree with brute force\n";
  return agree == total ? 0 : 1;
}
