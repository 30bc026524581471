#include "genvam/experiment.hpp"
#include "genvam/verify.hpp"

#include <doctest.h>

#include <cmath>

using namespace genvam;

namespace {

Nat N(std::uint64_t v) { return Nat(v); }

const char* kSmallConfig = R"({
  "name": "unit_small",
  "seed": 3,
  "space": {"kind": "euclidean", "dim": 1},
  "contraction": {"kind": "constant", "u": [2]},
  "schedule": {"preset": "linear"},
  "family": {"kind": "prox", "objective": {"kind": "quadratic", "b": [0]}},
  "x0": [2],
  "z": [0],
  "record": {"tm": [0, 5]},
  "rates": [
    {"id": "linear_asreg", "k_max": 10},
    {"id": "linear_tm_asreg", "k_max": 10, "m": [5]},
    {"id": "gamma", "k_max": 5},
    {"id": "lmeta", "k_max": 3, "L": [2]}
  ],
  "checks": {"schedule": false}
})";

}  // namespace

TEST_SUITE("verifier") {

TEST_CASE("convergence rates on columns") {
  CHECK(verify_conv_rate(std::vector<double>(50, 0.0), Modulus::constant(N(0)), 20, 0.0).status == Status::Pass);
  std::vector<double> harm;
  for (int n = 0; n < 100; ++n) harm.push_back(1.0 / (n + 1));
  CHECK(verify_conv_rate(harm, Modulus::identity(), 50, 0.0).status == Status::Pass);
  const Modulus pred = Modulus::plain([](const Nat& k) { return monus(k, Nat(1)); }, Role::RateOfConvergence, "k-1");
  const Verdict v = verify_conv_rate(harm, pred, 50, 0.0);
  REQUIRE(v.status == Status::Fail);
  CHECK(v.violation->k == 1);
  CHECK(v.violation->n == 0);
  // replay the cited pair
  CHECK(harm[v.violation->n] > 1.0 / (v.violation->k + 1));
  // exact columns
  std::vector<Rational> exact;
  for (int n = 0; n < 30; ++n) exact.emplace_back(1, n + 1);
  CHECK(verify_conv_rate(exact, Modulus::identity(), 20, Rational(0)).status == Status::Pass);
  // rates beyond the prefix give Partial with the largest verified k
  const Verdict p = verify_conv_rate(harm, Modulus::affine(N(10), N(0)), 20, 0.0);
  CHECK(p.status == Status::Partial);
  CHECK(*p.max_verified_k == 9);
}

TEST_CASE("Cauchy moduli") {
  auto d = [](double a, double b) { return std::abs(a - b); };
  CHECK(verify_cauchy_modulus(std::vector<double>(20, 3.0), d, Modulus::constant(N(0)), 10, 5, 0.0).status == Status::Pass);
  // partial sums of sum |lambda_n - lambda_{n+1}| with lambda_n = (n+2)/(n+1): Cauchy modulus k -> k
  // S_n = sum_{i <= n} |lambda_i - lambda_{i+1}|
  std::vector<Rational> sums;
  for (std::uint64_t n = 0; n < 300; ++n) {
    const Rational a(n + 2, n + 1), b(n + 3, n + 2);
    sums.push_back((sums.empty() ? Rational(0) : sums.back()) + (a > b ? Rational(a - b) : Rational(b - a)));
  }
  auto dq = [](const Rational& a, const Rational& b) { return a > b ? Rational(a - b) : Rational(b - a); };
  const Schedule lin = make_linear_schedule(Rational(0));
  CHECK(verify_cauchy_modulus(sums, dq, *lin.w.theta2, 40, 200, 0.0).status == Status::Pass);
  CHECK(verify_cauchy_modulus(sums, dq, Modulus::constant(N(0)), 40, 200, 0.0).status == Status::Fail);
}

TEST_CASE("divergence rates") {
  const SeriesTerms ones{[](std::uint64_t) { return Rational(1); }, [](std::uint64_t) { return 1.0; }};
  CHECK(verify_divergence_rate(ones, Modulus::identity(), 100).status == Status::Pass);
  const SeriesTerms harmonic{[](std::uint64_t n) { return Rational(1, n + 1); }, [](std::uint64_t n) { return 1.0 / (n + 1); }};
  const Modulus four = Modulus::plain([](const Nat& n) { return pow_nat(Nat(4), static_cast<std::uint64_t>(n)) - 1; },
                                      Role::RateOfDivergence, "4^n-1");
  CHECK(verify_divergence_rate(harmonic, four, 8).status == Status::Pass);
  CHECK(verify_divergence_rate(harmonic, Modulus::identity(), 8).status == Status::Fail);
  const Schedule off = make_offset_schedule(Rational(0), Rational(1, 3));
  const SeriesTerms alpha{[off](std::uint64_t n) { return off.alpha.exact(n); }, [off](std::uint64_t n) { return off.alpha(n); }};
  CHECK(verify_divergence_rate(alpha, *off.w.sigma1, 30).status == Status::Pass);
}

TEST_CASE("metastability search") {
  const Space r1 = Space::euclidean(1);
  const std::vector<Point> flat(40, Point::scalar(1.5));
  const MetaRate zero([](const Nat&, const Counter&, EvalBudget&) { return Nat(0); }, "0");
  const Verdict v = verify_metastability(flat, r1, zero, {0, 1, 2}, default_gallery(), 0.0);
  CHECK(v.status == Status::Pass);
  CHECK(v.certificates.size() == 12);
  // 1/(n+1): windows [N; N+g(N)] with N = 4(k+1) have diameter < 1/(k+1)
  std::vector<Point> harm;
  for (int n = 0; n < 2000; ++n) harm.push_back(Point::scalar(1.0 / (n + 1)));
  const MetaRate lin([](const Nat& k, const Counter&, EvalBudget&) { return 4 * (k + 1); }, "4(k+1)");
  CHECK(verify_metastability(harm, r1, lin, {0, 1, 5}, {Counter::constant(N(5)), Counter::identity()}, 0.0).status ==
        Status::Pass);
  const Verdict bad = verify_metastability(harm, r1, zero, {3}, {Counter::constant(N(5))}, 0.0);
  CHECK(bad.status == Status::Fail);
  // bound past the recorded prefix
  const MetaRate far([](const Nat&, const Counter&, EvalBudget&) { return Nat(100000); }, "far");
  std::vector<Point> alt;
  for (int n = 0; n < 50; ++n) alt.push_back(Point::scalar(n % 2));
  CHECK(verify_metastability(alt, r1, far, {3}, {Counter::constant(N(1))}, 0.0).status == Status::Partial);
}

TEST_CASE("gallery") {
  const auto g = default_gallery();
  REQUIRE(g.size() == 4);
  CHECK(g[0](N(9)) == 1);
  CHECK(g[1](N(9)) == 5);
  CHECK(g[2](N(9)) == 9);
  CHECK(g[3](N(9)) == 23);
}

TEST_CASE("config errors carry field paths") {
  auto path_of = [](const std::string& text) {
    try {
      (void)parse_config(text);
    } catch (const ConfigError& e) {
      return e.path();
    }
    return std::string("<none>");
  };
  std::string cfg = kSmallConfig;
  CHECK(path_of(R"({"name": 3})") == "name");
  const std::string bad_dim = std::string(cfg).replace(cfg.find("\"dim\": 1"), 8, "\"dim\": 0");
  CHECK(path_of(bad_dim) == "space.dim");
  const std::string bad_rate = std::string(cfg).replace(cfg.find("\"gamma\""), 7, "\"nope\"");
  CHECK(path_of(bad_rate) == "rates[2].id");
  const std::string extra = std::string(cfg).replace(cfg.find("\"seed\""), 6, "\"sede\"");
  CHECK(path_of(extra) == "sede");
  const std::string dxy = std::string(cfg).replace(cfg.find("\"gamma\""), 7, "\"dxy\"");
  CHECK(path_of(dxy) == "rates[2]");
  CHECK(path_of("{") == "<document>");
}

TEST_CASE("end-to-end run is deterministic") {
  const ExperimentConfig c = parse_config(kSmallConfig);
  const ExperimentResult a = run_experiment(c);
  const ExperimentResult b = run_experiment(c);
  CHECK(a.exit_code == 0);
  CHECK(a.trace_csv == b.trace_csv);
  CHECK(a.bounds_csv == b.bounds_csv);
  CHECK(a.report_json == b.report_json);
  CHECK(a.trace_csv.rfind("# genvam trace v1", 0) == 0);
  CHECK(a.trace_csv.find("linear_tm_asreg_m5_bound") != std::string::npos);
  CHECK(a.bounds_csv.find("lmeta.L2,3,") != std::string::npos);
  for (const Verdict& v : a.verdicts) {
    INFO(v.id << ": " << v.detail);
    CHECK(v.status == Status::Pass);
  }
  CHECK(exit_code({}, false) == 0);
  Verdict p;
  p.partial("x");
  CHECK(exit_code({p}, false) == 2);
  CHECK(exit_code({p}, true) == 0);
  Verdict f;
  f.fail(Violation{}, "x");
  CHECK(exit_code({p, f}, true) == 1);
}

}
