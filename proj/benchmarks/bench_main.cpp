#include "genvam/axioms.hpp"
#include "genvam/iteration.hpp"
#include "genvam/rates.hpp"
#include "genvam/verify.hpp"

#include <benchmark/benchmark.h>

using namespace genvam;

namespace {

IterationConfig hppa(const Schedule& s, std::size_t dim) {
  const Space sp = Space::euclidean(dim);
  const Sequence lam = s.lambda;
  Family fam(sp, Objective(objective::Quadratic{Vec(dim, 0.0)}), [lam](std::uint64_t n) { return lam(n); });
  Vec u(dim, 0.0);
  u[0] = 1.0;
  return IterationConfig{std::move(fam), contraction::Constant{Point(u)}, s, Point(u), Point(Vec(dim, 0.0)),
                         1'000'000, kDefaultMetricTol, kDefaultBrowderTol, {}, true, false};
}

void BM_run_genvam(benchmark::State& st) {
  const IterationConfig c = hppa(make_linear_schedule(Rational(0)), static_cast<std::size_t>(st.range(1)));
  for (auto _ : st) benchmark::DoNotOptimize(run_genvam(c, static_cast<std::uint64_t>(st.range(0))));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}
BENCHMARK(BM_run_genvam)->Args({1000, 1})->Args({10000, 1})->Args({10000, 5});

void BM_browder_point(benchmark::State& st) {
  const IterationConfig c = hppa(make_offset_schedule(Rational(0), Rational(1, 3)), 1);
  std::uint64_t n = 0;
  for (auto _ : st) benchmark::DoNotOptimize(browder_point(c, n++ % 1000, 1e-10));
}
BENCHMARK(BM_browder_point);

void BM_rate_asreg(benchmark::State& st) {
  const Schedule s = make_offset_schedule(Rational(0), Rational(1, 3));
  const Modulus phi = rate_asreg(s, Rational(0), Nat(1), LambdaVariant::ResForward);
  for (auto _ : st) benchmark::DoNotOptimize(phi.evaluate(Nat(st.range(0))));
}
BENCHMARK(BM_rate_asreg)->Arg(0)->Arg(30)->Arg(1000);

void BM_hppa_meta(benchmark::State& st) {
  const Schedule s = make_offset_schedule(Rational(0), Rational(1, 3));
  const MetaRate phi = rate_hppa_meta(rate_dxy(s, Rational(0), Nat(1)), rate_browder_meta(Nat(3), browder::Nonincreasing{}));
  const Counter g = Counter::identity();
  const EvalBudget budget(pow_nat(Nat(10), 300));
  for (auto _ : st) benchmark::DoNotOptimize(phi.evaluate(Nat(st.range(0)), g, budget));
}
BENCHMARK(BM_hppa_meta)->Arg(0)->Arg(2);

void BM_check_axioms(benchmark::State& st) {
  const Space s = st.range(0) == 0 ? Space::tripod(3) : Space::euclidean(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(check_axioms(s, 1000, 1e-9));
}
BENCHMARK(BM_check_axioms)->Arg(0)->Arg(2)->Arg(5);

void BM_verify_metastability(benchmark::State& st) {
  const Space r1 = Space::euclidean(1);
  std::vector<Point> seq;
  for (int n = 0; n < 20000; ++n) seq.push_back(Point::scalar(1.0 / (n + 1)));
  const MetaRate omega([](const Nat& k, const Counter&, EvalBudget&) { return 40 * (k + 1); }, "40(k+1)");
  const auto gallery = default_gallery();
  for (auto _ : st) benchmark::DoNotOptimize(verify_metastability(seq, r1, omega, {0, 1, 2, 3}, gallery, 1e-9));
}
BENCHMARK(BM_verify_metastability);

}  // namespace
BENCHMARK_MAIN();
