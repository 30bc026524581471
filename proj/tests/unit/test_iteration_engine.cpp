#include "genvam/iteration.hpp"

#include <doctest.h>

#include <random>

using namespace genvam;

namespace {

Family quad(const Space& s, const Sequence& lambda) {
  return Family(s, Objective(objective::Quadratic{Vec(s.dim(), 0.0)}), [lambda](std::uint64_t n) { return lambda(n); });
}

IterationConfig make(const Schedule& s, ContractionSpec f, Point x0, Point z = Point::scalar(0)) {
  const Space r1 = Space::euclidean(1);
  IterationConfig c{quad(r1, s.lambda), std::move(f), s, std::move(x0), std::move(z), 1000, 1e-9, 1e-10, {}, true, false};
  return c;
}

Schedule half_alpha() {
  Witnesses w;
  w.lambda_limit = Rational(1);
  return make_custom_schedule("half", Sequence::rational([](std::uint64_t) { return Rational(1, 2); }, "1/2"),
                              Sequence::rational([](std::uint64_t) { return Rational(1); }, "1"), w);
}

}  // namespace

TEST_SUITE("iteration_engine") {

TEST_CASE("bound constant") {
  const Schedule lin = make_linear_schedule(Rational(0));
  CHECK(compute_Kz(make(lin, contraction::Constant{Point::scalar(10)}, Point::scalar(10))).K == 10);
  CHECK(compute_Kz(make(lin, contraction::Constant{Point::scalar(0)}, Point::scalar(0))).K == 1);
  // alpha=1/2, d(x0,z)=1, d(f(z),z)=2: f(x) = W(u, x, 1/2) with f(0) = u/2, so u = 4
  const Schedule half = make_linear_schedule(Rational(1, 2));
  CHECK(compute_Kz(make(half, contraction::GeodesicPull{Point::scalar(4), 0.5}, Point::scalar(1))).K == 4);
}

TEST_CASE("one step and invariance") {
  const Schedule lin = make_linear_schedule(Rational(0));
  const Trace t = run_genvam(make(lin, contraction::Constant{Point::scalar(7)}, Point::scalar(-3)), 5);
  CHECK(t.iterates[1].vec()[0] == doctest::Approx(7.0));
  const Trace still = run_genvam(make(lin, contraction::Constant{Point::scalar(0)}, Point::scalar(0)), 50);
  for (const Point& p : still.iterates) CHECK(p.vec()[0] == doctest::Approx(0.0));
  // x_2 = a_1 u + (1 - a_1) T_1 x_1 with a_1 = 2/3, lambda_1 = 3/2
  const double x2 = 2.0 / 3 * 7 + 1.0 / 3 * (7 / 2.5);
  CHECK(t.iterates[2].vec()[0] == doctest::Approx(x2));
}

TEST_CASE("bounded by K") {
  const Schedule off = make_offset_schedule(Rational(0), Rational(1, 3));
  const IterationConfig c = make(off, contraction::Constant{Point::scalar(5)}, Point::scalar(-2));
  const BoundConstant K = compute_Kz(c);
  const Trace t = run_genvam(c, 500);
  for (const Point& p : t.iterates) CHECK(std::abs(p.vec()[0]) <= to_double(K.K) + 1e-9);
  CHECK(check_trace_invariants(c, t, K).status == Status::Pass);
  CHECK(t.step.size() == 500);
  CHECK(t.tilde.size() == 500);
}

TEST_CASE("implicit sequence") {
  const IterationConfig c = make(half_alpha(), contraction::Constant{Point::scalar(3)}, Point::scalar(0));
  CHECK(browder_point(c, 0, 1e-12).vec()[0] == doctest::Approx(2.0));
  const IterationConfig at_z = make(half_alpha(), contraction::Constant{Point::scalar(0)}, Point::scalar(0));
  CHECK(browder_point(at_z, 4, 1e-12).vec()[0] == doctest::Approx(0.0));
  const Schedule off = make_offset_schedule(Rational(0), Rational(1, 3));
  const IterationConfig c2 = make(off, contraction::Constant{Point::scalar(4)}, Point::scalar(1));
  for (std::uint64_t n = 0; n < 40; ++n) {
    CHECK(std::abs(browder_point(c2, n, 1e-10).vec()[0]) <= 4 + 1e-10);
  }
}

TEST_CASE("anchored runs") {
  const Schedule lin = make_linear_schedule(Rational(0));
  const IterationConfig c = make(lin, contraction::Constant{Point::scalar(1)}, Point::scalar(1));
  for (const Point& p : w_sequence(c, Point::scalar(0), 30)) CHECK(p.vec()[0] == doctest::Approx(0.0));
  // w_1 = a_0 x + (1 - a_0) T_0 w_0 = x since a_0 = 1
  const auto w = w_sequence(c, Point::scalar(3), 3);
  CHECK(w[1].vec()[0] == doctest::Approx(3.0));
  CHECK(w[2].vec()[0] == doctest::Approx(2.0 / 3 * 3 + 1.0 / 3 * 3 / 2.5));
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int i = 0; i < 20; ++i) {
    const double a = u(rng), b = u(rng);
    const auto wa = w_sequence(c, Point::scalar(a), 40);
    const auto wb = w_sequence(c, Point::scalar(b), 40);
    for (std::size_t n = 0; n < wa.size(); ++n) CHECK(std::abs(wa[n].vec()[0] - wb[n].vec()[0]) <= std::abs(a - b) + 1e-9);
  }
}

TEST_CASE("validation") {
  const Schedule lin = make_linear_schedule(Rational(0));
  CHECK_THROWS_AS(make(lin, contraction::Constant{Point::scalar(0)}, Point::scalar(0), Point::scalar(2)).validate(),
                  std::invalid_argument);
}

}
