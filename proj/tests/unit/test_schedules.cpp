#include "genvam/schedule.hpp"
#include "genvam/verify.hpp"

#include <doctest.h>

#include <cmath>

using namespace genvam;

namespace {

Nat N(std::uint64_t v) { return Nat(v); }

Schedule with_witnesses(Witnesses w) {
  return make_custom_schedule("toy", Sequence::rational([](std::uint64_t n) { return Rational(1, n + 1); }, "1/(n+1)"),
                              Sequence::rational([](std::uint64_t) { return Rational(1); }, "1"), std::move(w));
}

}  // namespace

TEST_SUITE("schedules") {

TEST_CASE("presets") {
  const Schedule lin = make_linear_schedule(Rational(0));
  CHECK(*lin.J == 2);
  CHECK(lin.alpha.exact(0) == 1);
  CHECK(lin.lambda.exact(0) == 2);
  CHECK(lin.alpha.exact(8) == Rational(2, 10));
  const Schedule half = make_linear_schedule(Rational(1, 2));
  CHECK(*half.J == 4);
  const Schedule pw = make_power_schedule();
  CHECK(pw.alpha(0) == doctest::Approx(std::pow(2.0, -0.75)));
  CHECK(pw.lambda.exact(0) == 2);
  const Schedule off = make_offset_schedule(Rational(0), Rational(1, 3));
  CHECK(*off.J == 3);
  for (std::uint64_t n = 0; n < 50; ++n) {
    CHECK(off.alpha.exact(n) == Rational(1, 3) + Rational(2, n + 3));
    CHECK(off.lambda.exact(n) == Rational(n + 3, n + 2));
  }
  CHECK_THROWS(make_offset_schedule(Rational(0), Rational(1, 2)));
  CHECK_THROWS(make_linear_schedule(Rational(1)));
}

TEST_CASE("offset witnesses") {
  const Witnesses w = offset_schedule_witnesses(Rational(0), Rational(1, 3));
  for (std::uint64_t n = 0; n < 30; ++n) {
    const Nat a = pow_nat(N(4), (n + 1) / 2 + 2) - 3;
    const Nat b = monus(N(3 * n), N(1));
    CHECK((*w.sigma1)(N(n)) == (a < b ? a : b));
  }
  for (std::uint64_t k = 0; k < 30; ++k) {
    CHECK((*w.sigma4)(N(k)) == ceil_sqrt(N(18 * (k + 1))) - 3);
    CHECK((*w.theta4)(N(k)) == monus(N(k), N(1)));
  }
}

TEST_CASE("derived divergence and lambda witnesses") {
  Witnesses w;
  w.sigma1 = Modulus::identity(Role::RateOfDivergence);
  const AlphaDivergence d0 = derive_alpha_divergence(with_witnesses(w), Rational(0));
  for (std::uint64_t n = 0; n < 10; ++n) CHECK(d0.theta(N(n)) == n);
  const AlphaDivergence dh = derive_alpha_divergence(with_witnesses(w), Rational(1, 2));
  CHECK(dh.theta(N(3)) == 6);

  Witnesses l;
  l.N_Lambda = N(0);
  l.Lambda = N(1);
  l.theta2 = Modulus::identity(Role::CauchyModulus);
  l.theta4 = Modulus::identity(Role::RateOfConvergence);
  const LambdaWitnesses lw = derive_lambda_witnesses(with_witnesses(l));
  REQUIRE(lw.theta1);
  CHECK((*lw.theta1)(N(1)) == 1);
  REQUIRE(lw.theta4_star);
  for (std::uint64_t k = 0; k < 10; ++k) CHECK((*lw.theta4_star)(N(k)) == 2 * k + 1);
}

TEST_CASE("missing witness is named") {
  const Schedule lin = make_linear_schedule(Rational(0));
  CHECK_THROWS_WITH_AS(lin.need(lin.w.sigma4, "sigma4"), doctest::Contains("sigma4"), std::invalid_argument);
  CHECK(lin.w.Lambda);
  CHECK(*lin.w.Lambda == 1);
  CHECK(*lin.w.N_Lambda == 0);
}

TEST_CASE("preset witnesses validate") {
  for (const Schedule& s : {make_linear_schedule(Rational(0)), make_linear_schedule(Rational(1, 2)),
                            make_offset_schedule(Rational(0), Rational(1, 3)), make_power_schedule()}) {
    for (const Verdict& v : validate_schedule(s, 1000, 20)) {
      INFO(v.id << ": " << v.detail);
      CHECK(v.status != Status::Fail);
    }
  }
}

TEST_CASE("a false witness is caught") {
  Witnesses w;
  w.sigma3 = Modulus::constant(N(0), Role::RateOfConvergence);  // 1/(n+1) <= 1/(k+1) fails at n=0, k=1
  bool failed = false;
  for (const Verdict& v : validate_schedule(with_witnesses(w), 200, 5)) failed = failed || v.status == Status::Fail;
  CHECK(failed);
}

}
