#include "genvam/rates.hpp"

#include <doctest.h>

using namespace genvam;

namespace {

Nat N(std::uint64_t v) { return Nat(v); }

Schedule toy(Witnesses w) {
  return make_custom_schedule("toy", Sequence::rational([](std::uint64_t n) { return Rational(1, n + 1); }, "1/(n+1)"),
                              Sequence::rational([](std::uint64_t) { return Rational(1); }, "1"), std::move(w));
}

MetaRate constant_meta(std::uint64_t c) {
  return MetaRate([c](const Nat&, const Counter&, EvalBudget&) { return Nat(c); }, "c");
}

}  // namespace

TEST_SUITE("rate_library") {

TEST_CASE("asymptotic regularity") {
  Witnesses w;
  w.sigma1 = Modulus::identity(Role::RateOfDivergence);
  w.sigma2 = Modulus::constant(N(0), Role::CauchyModulus);
  w.theta1 = Modulus::constant(N(0), Role::CauchyModulus);
  w.theta1_star = w.theta1;
  const Schedule s = toy(w);
  const Modulus phi = rate_asreg(s, Rational(0), N(1), LambdaVariant::ResForward);
  // (0 + 1 + ceil(ln 4)) + 1
  CHECK(phi(N(0)) == 4);
  const Modulus back = rate_asreg(s, Rational(0), N(1), LambdaVariant::ResBackward);
  for (std::uint64_t k = 0; k < 20; ++k) {
    CHECK(phi(N(k)) >= 1);
    CHECK(back(N(k)) == phi(N(k)));
  }
  CHECK_THROWS_AS(rate_asreg(s, Rational(0), N(1), LambdaVariant::LowerBound), std::invalid_argument);
}

TEST_CASE("T_n and T_m rates") {
  const Modulus id = Modulus::identity();
  const Modulus zero = Modulus::constant(N(0));
  CHECK(rate_Tn_asreg(id, zero, N(1))(N(0)) == 1);
  for (std::uint64_t k = 0; k < 10; ++k) CHECK(rate_Tn_asreg(zero, zero, N(3))(N(k)) == 0);
  CHECK(rate_Tn_asreg(id, id, N(1))(N(1)) == 7);
  const Modulus psi = Modulus::affine(N(3), N(2));
  for (std::uint64_t k = 0; k < 10; ++k) CHECK(rate_Tm_asreg(psi, N(1), N(0), N(1))(N(k)) == psi(N(2 * k + 1)));
  CHECK(rate_Tm_asreg(zero, N(1), N(40), N(1))(N(3)) == 40);
}

TEST_CASE("d(x_n, y_n)") {
  Witnesses w;
  w.sigma1 = Modulus::identity(Role::RateOfDivergence);
  w.sigma4 = Modulus::identity(Role::RateOfConvergence);
  w.theta4 = Modulus::identity(Role::RateOfConvergence);
  w.lambda_limit = Rational(1);
  const Modulus sigma = rate_dxy(toy(w), Rational(0), N(1));
  CHECK(sigma(N(0)) == 10);
  CHECK(sigma.label() == "Sigma*");

  // power schedule closed form at alpha = 0
  const Schedule pw = make_power_schedule();
  const Modulus sp = rate_dxy(pw, Rational(0), N(1));
  for (std::uint64_t k = 0; k < 2; ++k) {
    const Nat inner = N(4096) * pow_nat(N(k + 1), 4) + 2 + ceil_ln(Rational(4 * (k + 1)));
    CHECK(sp.evaluate(N(k), EvalBudget(pow_nat(N(10), 40))).value() == pow_nat(inner, 4) + 1);
  }

  const Schedule lin = make_linear_schedule(Rational(0));
  CHECK_THROWS_WITH_AS(rate_dxy(lin, Rational(0), N(1)), doctest::Contains("sigma4"), std::invalid_argument);
}

TEST_CASE("tilde suite") {
  const Modulus zero = Modulus::constant(N(0));
  const Modulus id = Modulus::identity();
  const TildeSuite a = rate_tilde_suite(id, zero, zero, N(1), N(1), {{3, N(0)}});
  CHECK(a.tilde(N(0)) == 3);
  for (std::uint64_t k = 0; k < 10; ++k) CHECK(a.tm.at(3)(N(k)) == a.tilde(N(k)));
  const TildeSuite b = rate_tilde_suite(id, zero, id, N(2), N(1), {});
  for (std::uint64_t k = 0; k < 10; ++k) {
    const Nat t = b.tilde(N(2 * k + 1));
    CHECK(b.tn(N(k)) == (t > 2 ? t : Nat(2)));
  }
}

TEST_CASE("linear rates") {
  for (std::uint64_t K : {1u, 10u}) {
    const LinearSuite s = rate_linear_suite(Rational(0), N(K));
    CHECK(s.J == 2);
    CHECK(s.J0 == 6);
    for (std::uint64_t k = 0; k <= 100; ++k) {
      CHECK(s.asreg(N(k)) == 6 * K * (k + 1) - 2);
      CHECK(s.tn(N(k)) == 10 * K * (k + 1) - 2);
      CHECK(s.tm(N(k)) == 20 * K * (k + 1) - 2);
      CHECK(s.tm(N(k)) == s.tn(N(2 * k + 1)));
    }
  }
  const LinearSuite h = rate_linear_suite(Rational(1, 2), N(5));
  CHECK(h.J == 4);
  CHECK(h.J0 == 24);
  CHECK(h.asreg(N(0)) == 24 * 5 - 4);
  // offset preset: ceil(27K/2)(k+1) - 3 at alpha = 0
  for (std::uint64_t k = 0; k < 20; ++k) CHECK(rate_offset_asreg(Rational(0), N(1))(N(k)) == 14 * (k + 1) - 3);
}

TEST_CASE("Cauchy modulus of T_n x") {
  const Modulus id = Modulus::identity();
  for (std::uint64_t k = 0; k < 5; ++k) CHECK(rate_gamma(id, N(1), Rational(1), Rational(1), true)(N(k)) == 0);
  CHECK(rate_gamma(id, N(1), Rational(1), Rational(1), false)(N(0)) == 7);
}

TEST_CASE("metastability of the implicit sequence") {
  const Counter one = Counter::constant(N(1));
  CHECK(rate_browder_meta(N(1), browder::Nonincreasing{})(N(0), one) == 1);
  CHECK(rate_browder_meta(N(3), browder::Nonincreasing{})(N(0), one) == 9);
  for (std::uint64_t k = 0; k < 4; ++k) {
    CHECK(rate_browder_meta(N(3), browder::Nonincreasing{})(N(k), Counter::constant(N(0))) == 0);
    CHECK(rate_browder_meta(N(2), browder::Nonincreasing{})(N(k), one) == 4 * (k + 1) * (k + 1));
  }
}

TEST_CASE("metastability of the explicit sequence") {
  const Counter g = Counter::affine(N(1), N(2));
  const MetaRate omega([](const Nat& k, const Counter& c, EvalBudget& b) { return k + c(N(0), b); }, "k+g(0)");
  const MetaRate a = rate_hppa_meta(Modulus::constant(N(0)), omega);
  for (std::uint64_t k = 0; k < 5; ++k) CHECK(a(N(k), g) == omega(N(3 * k + 2), g));
  // Sigma*(2) = 50 dominates Omega*(2, h) = 2 + h(0) = 2 + 50 + g(50)
  const MetaRate b = rate_hppa_meta(Modulus::constant(N(50)), omega);
  CHECK(b(N(0), g) == 2 + 50 + 52);
  const MetaRate c = rate_hppa_meta(Modulus::constant(N(500)), constant_meta(3));
  CHECK(c(N(0), g) == 500);
}

TEST_CASE("genVAM metastability respects the budget") {
  const Modulus sigma1 = Modulus::identity(Role::RateOfDivergence);
  const MetaRate phi = constant_meta(0);
  const MetaRate omega = rate_genvam_meta(phi, sigma1, Rational(1, 2), N(1));
  const EvalOutcome small = omega.evaluate(N(0), Counter::constant(N(0)));
  REQUIRE(small.has_value());
  const MetaRate big = rate_genvam_meta(rate_browder_meta(N(3), browder::Nonincreasing{}), sigma1, Rational(1, 2), N(3));
  const EvalOutcome out = big.evaluate(N(2), Counter::identity(), EvalBudget(N(1000)));
  REQUIRE(out.exceeded());
  CHECK(out.report().depth >= 1);
  CHECK_THROWS_AS(rate_genvam_meta(phi, sigma1, Rational(0), N(1)), std::invalid_argument);
}

}
