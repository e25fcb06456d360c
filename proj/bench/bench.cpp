#include <chrono>
#include <cstdio>
#include <random>

#include "qexp/expcheck.hpp"
#include "qexp/parallel.hpp"
#include "support.hpp"

using namespace qexp;

namespace {

template <class Fn>
double best_of(int reps, Fn&& fn) {
  double best = 1e30;
  for (int r = 0; r < reps; ++r) {
    auto t0 = std::chrono::steady_clock::now();
    fn();
    std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
    best = std::min(best, dt.count());
  }
  return best;
}

bool same(const ConditionReport& x, const ConditionReport& y) {
  return x.verdict == y.verdict &&
         x.condition_one.size() == y.condition_one.size() &&
         x.condition_two.size() == y.condition_two.size();
}

void row(const char* name, double s, double p, bool agree) {
  std::printf("%-28s serial %9.4f s  parallel %9.4f s  speedup %5.2fx  %s\n",
              name, s, p, s / p, agree ? "same" : "DIFFERENT");
}

}  // namespace

int main(int argc, char** argv) {
  const int n = argc > 1 ? std::atoi(argv[1]) : 150;
  const int reps = argc > 2 ? std::atoi(argv[2]) : 3;
  std::mt19937 rng(7);
  auto q = chain_quantale(6);
  auto b = qtest::random_category(q, 4, rng, 0.7, "b");
  FiberedFunctor f(qtest::random_functor_into(b, n, rng, 0.6));
  std::printf("threads %d, |A| = %d, |B| = %d, base chain(6)\n",
              worker_threads(), n, b->size());

  ConditionReport s1, p1, s2, p2;
  const double ts1 = best_of(reps, [&] { s1 = serial::check_condition_one(f); });
  const double tp1 = best_of(reps, [&] { p1 = check_condition_one(f); });
  row("condition (1)", ts1, tp1, same(s1, p1));
  const double ts2 = best_of(reps, [&] { s2 = serial::check_condition_two(f); });
  const double tp2 = best_of(reps, [&] { p2 = check_condition_two(f); });
  row("condition (2)", ts2, tp2, same(s2, p2));

  auto small = qtest::random_functor_into(qtest::random_category(q, 3, rng, 0.7, "b"), 6, rng, 0.6);
  FiberedFunctor g(small);
  Fig4Options opt;
  opt.budget = 1u << 16;
  Fig4Result sf, pf;
  const double tsf = best_of(reps, [&] { sf = serial::check_fig4_lax(g, 0, 1, 2, opt); });
  const double tpf = best_of(reps, [&] { pf = check_fig4_lax(g, 0, 1, 2, opt); });
  row("fig4 square (b0,b1,b2)", tsf, tpf,
      sf.holds == pf.holds && sf.pairs_checked == pf.pairs_checked);
  return same(s1, p1) && same(s2, p2) && sf.holds == pf.holds ? 0 : 1;
}
