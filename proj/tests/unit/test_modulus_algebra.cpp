#include "genvam/combinators.hpp"
#include "genvam/moduli_suite.hpp"

#include <doctest.h>

#include <cmath>

using namespace genvam;

namespace {

Modulus fn(std::function<Nat(const Nat&)> f, const char* label = "f") {
  return Modulus::plain(std::move(f), Role::Generic, label);
}

Nat N(std::uint64_t v) { return Nat(v); }

}  // namespace

TEST_SUITE("modulus_algebra") {

TEST_CASE("numeric helpers") {
  CHECK(monus(N(3), N(5)) == 0);
  CHECK(monus(N(5), N(3)) == 2);
  CHECK(ceil_nat(Rational(7, 3)) == 3);
  CHECK(ceil_nat(Rational(6, 3)) == 2);
  CHECK(ceil_sqrt(N(18)) == 5);
  CHECK(ceil_sqrt(N(16)) == 4);
  CHECK(parse_rational("0.25") == Rational(1, 4));
  CHECK(parse_rational("1/3") == Rational(1, 3));
  CHECK(parse_rational("0.08") == Rational(2, 25));
  CHECK(parse_rational("-1.5e-2") == Rational(-3, 200));
  CHECK(parse_rational("007") == 7);
  CHECK(parse_nat("1e12") == Nat(1000000000000LL));
  // ceil(ln x) never undershoots
  for (int x = 1; x < 200; ++x) {
    const Nat c = ceil_ln(Rational(x));
    CHECK(to_double(c) >= std::log(static_cast<double>(x)) - 1e-12);
  }
  CHECK(ceil_ln(Rational(2)) == 1);
  CHECK(ceil_ln(Rational(4)) == 2);
  CHECK(rational_upper(0.1) >= Rational(1, 10));
}

TEST_CASE("cauchy_from_conv") {
  CHECK(cauchy_from_conv(Modulus::identity())(N(0)) == 1);
  const Modulus zero = Modulus::constant(N(0));
  for (std::uint64_t k = 0; k < 20; ++k) CHECK(cauchy_from_conv(zero)(N(k)) == 0);
  const Modulus quartic = fn([](const Nat& k) { return pow_nat(k + 1, 4); });
  CHECK(cauchy_from_conv(quartic)(N(1)) == 256);
  for (std::uint64_t k = 0; k < 30; ++k) CHECK(cauchy_from_conv(quartic)(N(k)) == quartic(N(2 * k + 1)));
}

TEST_CASE("transform_divergence") {
  const Modulus theta = fn([](const Nat& n) { return pow_nat(N(4), static_cast<std::uint64_t>(n)) - 1; });
  const Modulus shifted = transform_divergence(theta, divergence::TailShift{N(2), std::nullopt, true});
  for (std::uint64_t n = 0; n < 10; ++n) {
    CHECK(shifted(N(n)) == pow_nat(N(4), n + 2) - 3);
  }
  const Modulus scaled = transform_divergence(Modulus::identity(), divergence::Scale{Rational(2)});
  for (std::uint64_t n = 0; n < 20; ++n) CHECK(scaled(N(n)) == (n + 1) / 2);
  const Modulus sum = transform_divergence(Modulus::identity(), divergence::Sum{Modulus::affine(N(2), N(0))});
  CHECK(sum(N(5)) == 5);
}

TEST_CASE("combine_linear") {
  const Modulus id = Modulus::identity();
  CHECK(combine_linear(id, id, Rational(1), Rational(1))(N(0)) == 1);
  const Modulus zero = Modulus::constant(N(0));
  for (std::uint64_t k = 0; k < 10; ++k) CHECK(combine_linear(zero, zero, Rational(3), Rational(5))(N(k)) == 0);
  const Modulus twice = Modulus::affine(N(2), N(0));
  CHECK(combine_linear(id, twice, Rational(1, 2), Rational(1, 2))(N(1)) == 2);
}

TEST_CASE("xu_rate") {
  const Modulus id = Modulus::identity();
  const Modulus case1 = xu_rate(id, xu::VanishingFactor{id}, N(1));
  CHECK(case1(N(0)) == 3);
  const Modulus case2 = xu_rate(id, xu::SummablePerturbation{Modulus::constant(N(0))}, N(1));
  CHECK(case2(N(0)) == 3);
  const Modulus zero = Modulus::constant(N(0));
  const Modulus tiny = xu_rate(zero, xu::VanishingFactor{zero}, N(1));
  for (std::uint64_t k = 0; k < 10; ++k) CHECK(tiny(N(k)) >= 1);
}

TEST_CASE("sabach_shtern_bound") {
  const auto b = sabach_shtern_bound(Rational(3), N(2), N(2), Rational(1));
  CHECK(b(N(0)) == 3);
  CHECK(b(N(2)) == Rational(3, 2));
  // linear instance: 3 J K / ((1-alpha)(n+J)) with J=2, K=10, alpha=0 corresponds to L = 3K, gamma = 1
  const auto lin = sabach_shtern_bound(Rational(30), N(2), N(2), Rational(1));
  CHECK(lin(N(8)) == Rational(3 * 2 * 10, 10));
  CHECK_THROWS(sabach_shtern_bound(Rational(1), N(1), N(2), Rational(1)));
}

TEST_CASE("meta_from_cauchy") {
  const Counter g = Counter::affine(N(3), N(1));
  CHECK(meta_from_cauchy(Modulus::constant(N(0)))(N(4), g) == 0);
  CHECK(meta_from_cauchy(Modulus::identity())(N(7), g) == 7);
  const Counter square([](const Nat& n, EvalBudget&) { return n * n; }, "n^2");
  CHECK(meta_from_cauchy(Modulus::affine(N(2), N(1)))(N(3), square) == 7);
}

TEST_CASE("meta_shift") {
  const MetaRate zero([](const Nat&, const Counter&, EvalBudget&) { return Nat(0); }, "0");
  CHECK(meta_shift(zero, ShiftKind::Plus)(N(0), Counter::identity(), N(5)) == 5);
  const MetaRate at_zero([](const Nat&, const Counter& g, EvalBudget& b) { return g(Nat(0), b); }, "g(0)");
  // g_3(0) = 3 + g(3) = 6, so the shifted value is 3 + 6
  CHECK(meta_shift(at_zero, ShiftKind::Plus)(N(0), Counter::identity(), N(3)) == 9);
  const Counter g = Counter::affine(N(2), N(5));
  CHECK(meta_shift(at_zero, ShiftKind::Dagger)(N(1), g, N(0)) == meta_shift(at_zero, ShiftKind::Plus)(N(1), g, N(0)));
  Nat prev = 0;
  for (std::uint64_t n = 0; n < 20; ++n) {
    const Nat d = meta_shift(at_zero, ShiftKind::Dagger)(N(1), g, N(n));
    CHECK(d >= prev);
    CHECK(d >= meta_shift(at_zero, ShiftKind::Plus)(N(1), g, N(n)));
    prev = d;
  }
}

TEST_CASE("accuracy conversion") {
  CHECK(accuracy_index(Rational(1, 2)) == 1);
  CHECK(accuracy_index(Rational(3, 10)) == 3);
  CHECK(accuracy_index(Rational(1)) == 0);
  const MetaRate omega([](const Nat& k, const Counter& g, EvalBudget& b) { return k + g(k, b); }, "k+g(k)");
  const EpsMetaRate eps = to_epsilon_form(omega);
  EvalBudget b;
  CHECK(eps(Rational(1, 4), Counter::constant(N(2)), b) == omega(N(3), Counter::constant(N(2))));
  const MetaRate back = to_index_form(eps);
  // back(k,g) = omega(k, n -> n + g(n))
  CHECK(back(N(3), Counter::constant(N(2))) == 3 + 3 + 2);
}

TEST_CASE("meta_transfer") {
  const MetaRate omega([](const Nat& k, const Counter& g, EvalBudget& b) { return k + g(Nat(1), b); }, "k+g(1)");
  const MetaRate t0 = meta_transfer(omega, Modulus::constant(N(0)));
  const Counter g = Counter::affine(N(2), N(3));
  for (std::uint64_t k = 0; k < 5; ++k) CHECK(t0(N(k), g) == omega(N(3 * k + 2), g));
  const MetaRate idk([](const Nat& k, const Counter&, EvalBudget&) { return k; }, "k");
  CHECK(meta_transfer(idk, Modulus::identity())(N(0), Counter::constant(N(0))) == 2);
  // h_{k,g}(m) = max{P,m} - m + g(max{P,m})
  const Counter h = transfer_counter(N(4), g);
  CHECK(h(N(1)) == 3 + g(N(4)));
  CHECK(h(N(7)) == g(N(7)));
}

TEST_CASE("lmeta_from_asreg") {
  CHECK(lmeta_from_asreg(Modulus::identity(), N(1))(N(0)) == 0);
  CHECK(lmeta_from_asreg(Modulus::identity(), N(2))(N(3)) == 7);
}

TEST_CASE("budget folding") {
  const Modulus tower = fn([](const Nat& n) { return pow_nat(N(10), static_cast<std::uint64_t>(n)); });
  const EvalOutcome ok = tower.evaluate(N(5), EvalBudget(Nat(1000000)));
  REQUIRE(ok.has_value());
  CHECK(ok.value() == 100000);
  const EvalOutcome bad = tower.evaluate(N(7), EvalBudget(Nat(1000000)));
  CHECK(bad.exceeded());
}

TEST_CASE("synthetic combinator suite, reduced") {
  SuiteOptions opt;
  opt.cases = 5;
  opt.horizon = 40;
  for (const Verdict& v : run_moduli_suite(opt)) {
    INFO(v.id << ": " << v.detail);
    CHECK(v.status == Status::Pass);
  }
  CHECK(run_sabach_shtern_suite(kDefaultSuiteSeed, 5, 200).status == Status::Pass);
}

}
