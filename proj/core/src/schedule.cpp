#include "genvam/schedule.hpp"

#include "genvam/combinators.hpp"

#include <cmath>
#include <stdexcept>

namespace genvam {

namespace {

Nat u64(std::uint64_t n) { return Nat(n); }

/// 4^e - J, or BudgetExceeded once the power would be absurdly large.
Nat pow4_minus(const Nat& e, const Nat& j, EvalBudget& b) {
  // 4^e has 2e+1 bits; refuse before materialising more than the ceiling allows.
  const std::size_t ceiling_bits = boost::multiprecision::msb(b.ceiling() + 1) + 1;
  if (e > Nat(ceiling_bits)) b.admit(pow_nat(Nat(2), ceiling_bits + 1) , "4^e");
  Nat v = pow_nat(Nat(4), static_cast<std::uint64_t>(e)) ;
  return monus(v, j);
}

Modulus harmonic_sigma1(const Rational& alpha, const Nat& j) {
  const Rational half_gap = (Rational(1) - alpha) / 2;
  return Modulus(
      [half_gap, j](const Nat& n, EvalBudget& b) {
        const Nat e = ceil_nat(half_gap * Rational(n)) + j - 1;
        return pow4_minus(e, j, b);
      },
      Role::RateOfDivergence, "4^(ceil((1-a)n/2)+J-1)-J", true);
}

/// ceil(2(k+1)/(1-alpha)) - shift
Modulus harmonic_tail(const Rational& alpha, const Nat& shift, Role role, std::string label) {
  const Rational c = Rational(2) / (Rational(1) - alpha);
  return Modulus([c, shift](const Nat& k, EvalBudget&) { return monus(ceil_nat(c * Rational(k + 1)), shift); }, role,
                 std::move(label), true);
}

Modulus shifted_identity(const Nat& plus, const Nat& minus, Role role, std::string label) {
  return Modulus([plus, minus](const Nat& k, EvalBudget&) { return monus(k + plus, minus); }, role, std::move(label),
                 true);
}

void check_alpha(const Rational& alpha) {
  if (alpha < 0 || alpha >= 1) throw std::invalid_argument("contraction constant alpha must lie in [0,1)");
}

Nat linear_J(const Rational& alpha) { return 2 * ceil_nat(Rational(1) / (Rational(1) - alpha)); }

Sequence ratio_lambda(const Nat& j) {
  const std::uint64_t J = static_cast<std::uint64_t>(j);
  return Sequence::rational([J](std::uint64_t n) { return Rational(u64(n + J), u64(n + J - 1)); },
                            "(n+" + to_string(j) + ")/(n+" + to_string(j) + "-1)");
}

}  // namespace

Sequence Sequence::rational(std::function<Rational(std::uint64_t)> fn, std::string formula) {
  Sequence s;
  s.exact = fn;
  s.approx = [fn](std::uint64_t n) { return to_double(fn(n)); };
  s.formula = std::move(formula);
  return s;
}

Sequence Sequence::real(std::function<double(std::uint64_t)> fn, std::string formula) {
  Sequence s;
  s.approx = std::move(fn);
  s.formula = std::move(formula);
  return s;
}

std::string to_string(Preset p) {
  switch (p) {
    case Preset::Linear:
      return "linear";
    case Preset::Power:
      return "power";
    case Preset::Offset:
      return "offset";
    case Preset::Custom:
      return "custom";
  }
  return "custom";
}

const Modulus& Schedule::need(const std::optional<Modulus>& m, const char* what) const {
  if (!m) throw std::invalid_argument("schedule '" + name + "' lacks the witness " + what);
  return *m;
}
const Nat& Schedule::need(const std::optional<Nat>& m, const char* what) const {
  if (!m) throw std::invalid_argument("schedule '" + name + "' lacks the constant " + what);
  return *m;
}
const Rational& Schedule::need(const std::optional<Rational>& m, const char* what) const {
  if (!m) throw std::invalid_argument("schedule '" + name + "' lacks the constant " + what);
  return *m;
}

Schedule make_linear_schedule(const Rational& alpha) {
  check_alpha(alpha);
  const Nat j = linear_J(alpha);
  const std::uint64_t J = static_cast<std::uint64_t>(j);
  const Rational c = Rational(2) / (Rational(1) - alpha);
  Schedule s;
  s.preset = Preset::Linear;
  s.name = "linear(alpha=" + to_string(alpha) + ")";
  s.J = j;
  s.contraction_alpha = alpha;
  s.alpha = Sequence::rational([c, J](std::uint64_t n) { return Rational(c / Rational(u64(n + J))); },
                               "2/((1-a)(n+" + to_string(j) + "))");
  s.lambda = ratio_lambda(j);
  Witnesses& w = s.w;
  w.sigma1 = harmonic_sigma1(alpha, j);
  w.sigma2 = harmonic_tail(alpha, j + 1, Role::CauchyModulus, "ceil(2(k+1)/(1-a))-(J+1)");
  w.sigma3 = harmonic_tail(alpha, j, Role::RateOfConvergence, "ceil(2(k+1)/(1-a))-J");
  w.theta2 = shifted_identity(Nat(1), j, Role::CauchyModulus, "(k+1)-J");
  w.theta4 = shifted_identity(Nat(2), j, Role::RateOfConvergence, "(k+2)-J");
  w.Lambda = Nat(1);
  w.N_Lambda = Nat(0);
  w.lambda_limit = Rational(1);
  w.l = Nat(1);
  const Rational half_gap = (Rational(1) - alpha) / 2;
  w.h = Modulus([half_gap, j](const Nat& n, EvalBudget&) { return monus(ceil_nat(half_gap * Rational(n + j)), Nat(1)); },
                Role::Generic, "ceil((1-a)(n+J)/2)-1", true);
  w.nonincreasing = true;
  return s;
}

Schedule make_power_schedule() {
  Schedule s;
  s.preset = Preset::Power;
  s.name = "power";
  s.alpha = Sequence::real([](std::uint64_t n) { return std::pow(static_cast<double>(n) + 2.0, -0.75); },
                           "(n+2)^(-3/4)");
  s.lambda = Sequence::rational(
      [](std::uint64_t n) {
        const Rational step(Nat(1), u64(n + 1));
        return (n % 2 == 0) ? Rational(1 + step) : Rational(1 - step);
      },
      "1+(-1)^n/(n+1)");
  Witnesses& w = s.w;
  w.sigma1 = Modulus([](const Nat& k, EvalBudget&) { return Nat(pow_nat(k + 1, 4)); }, Role::RateOfDivergence,
                     "(k+1)^4", true);
  w.sigma4 = Modulus([](const Nat& k, EvalBudget&) { return Nat(pow_nat(k + 1, 4) + 1); }, Role::RateOfConvergence,
                     "(k+1)^4+1", true);
  // (n+2)^3 >= (k+1)^4
  w.sigma3 = Modulus([](const Nat& k, EvalBudget&) { return monus(ceil_cbrt(pow_nat(k + 1, 4)), Nat(2)); },
                     Role::RateOfConvergence, "ceil((k+1)^(4/3))-2", true);
  w.sigma2 = Modulus([](const Nat& k, EvalBudget&) { return monus(ceil_cbrt(pow_nat(k + 1, 4)), Nat(3)); },
                     Role::CauchyModulus, "ceil((k+1)^(4/3))-3", true);
  w.theta4 = Modulus::identity(Role::RateOfConvergence).with_label("k");
  w.Lambda = Nat(2);
  w.N_Lambda = Nat(0);
  w.lambda_limit = Rational(1);
  w.l = Nat(1);
  // (n+2)^(3/4) <= h(n)+1
  w.h = Modulus([](const Nat& n, EvalBudget&) { return monus(ceil_sqrt(ceil_sqrt(pow_nat(n + 2, 3))), Nat(1)); },
                Role::Generic, "ceil((n+2)^(3/4))-1", true);
  w.nonincreasing = true;
  return s;
}

Witnesses offset_schedule_witnesses(const Rational& alpha, const Rational& alpha_bar) {
  check_alpha(alpha);
  const Rational top = (Rational(1) - alpha) / (Rational(3) - alpha);
  if (alpha_bar <= 0 || alpha_bar > top) {
    throw std::invalid_argument("alpha_bar must lie in (0, " + to_string(top) + "]");
  }
  const Nat j = linear_J(alpha) + 1;
  Witnesses w;
  const Modulus log_branch = harmonic_sigma1(alpha, j);
  const Rational abar = alpha_bar;
  w.sigma1 = Modulus(
      [log_branch, abar, j, alpha](const Nat& n, EvalBudget& b) {
        const Nat lin = monus(ceil_nat(Rational(n) / abar), Nat(1));
        // The power branch only wins while 4^e - J <= lin.
        const Nat e = ceil_nat((Rational(1) - alpha) / 2 * Rational(n)) + j - 1;
        if (e > Nat(boost::multiprecision::msb(lin + j + 1) / 2 + 2)) return lin;
        const Nat p = log_branch(n, b);
        return p < lin ? p : lin;
      },
      Role::RateOfDivergence, "min{4^(ceil((1-a)n/2)+J-1)-J, ceil(n/abar)-1}", true);
  const Nat c = ceil_nat(Rational(2) / (alpha_bar * alpha_bar * (Rational(1) - alpha)));
  w.sigma4 = Modulus([c, j](const Nat& k, EvalBudget&) { return monus(ceil_sqrt(c * (k + 1)), j); },
                     Role::RateOfConvergence, "ceil(sqrt(" + to_string(c) + "(k+1)))-J", true);
  w.theta4 = shifted_identity(Nat(2), j, Role::RateOfConvergence, "(k+2)-J");
  w.sigma2 = harmonic_tail(alpha, j + 1, Role::CauchyModulus, "ceil(2(k+1)/(1-a))-(J+1)");
  w.theta2 = shifted_identity(Nat(1), j, Role::CauchyModulus, "(k+1)-J");
  w.Lambda = Nat(1);
  w.N_Lambda = Nat(0);
  w.lambda_limit = Rational(1);
  w.l = Nat(1);
  w.h = Modulus::constant(monus(ceil_nat(Rational(1) / alpha_bar), Nat(1)), Role::Generic).with_label("ceil(1/abar)-1");
  w.nonincreasing = true;
  w.alpha_bar = alpha_bar;
  return w;
}

Schedule make_offset_schedule(const Rational& alpha, const Rational& alpha_bar) {
  Schedule s;
  s.w = offset_schedule_witnesses(alpha, alpha_bar);
  const Nat j = linear_J(alpha) + 1;
  const std::uint64_t J = static_cast<std::uint64_t>(j);
  const Rational c = Rational(2) / (Rational(1) - alpha);
  s.preset = Preset::Offset;
  s.name = "offset(alpha=" + to_string(alpha) + ", abar=" + to_string(alpha_bar) + ")";
  s.J = j;
  s.contraction_alpha = alpha;
  const Rational abar = alpha_bar;
  s.alpha = Sequence::rational([abar, c, J](std::uint64_t n) { return Rational(abar + c / Rational(u64(n + J))); },
                               to_string(alpha_bar) + "+2/((1-a)(n+" + to_string(j) + "))");
  s.lambda = ratio_lambda(j);
  return s;
}

Schedule make_custom_schedule(std::string name, Sequence alpha, Sequence lambda, Witnesses w) {
  if (!alpha.approx || !lambda.approx) throw std::invalid_argument("custom schedule needs both sequences");
  for (std::uint64_t n = 0; n < 64; ++n) {
    const double a = alpha(n);
    const double l = lambda(n);
    if (!(a > 0.0 && a <= 1.0)) throw std::invalid_argument("custom alpha_" + std::to_string(n) + " outside (0,1]");
    if (!(l > 0.0)) throw std::invalid_argument("custom lambda_" + std::to_string(n) + " not positive");
  }
  if (w.lambda_limit && w.l && !(*w.lambda_limit * Rational(*w.l + 1) > 1)) {
    throw std::invalid_argument("custom schedule: lambda must exceed 1/(l+1)");
  }
  Schedule s;
  s.preset = Preset::Custom;
  s.name = std::move(name);
  s.alpha = std::move(alpha);
  s.lambda = std::move(lambda);
  s.w = std::move(w);
  return s;
}

AlphaDivergence derive_alpha_divergence(const Schedule& s, const Rational& alpha) {
  check_alpha(alpha);
  const Modulus& sigma1 = s.need(s.w.sigma1, "sigma1 (sum alpha_n diverges)");
  const Rational gap = Rational(1) - alpha;
  Modulus theta = transform_divergence(sigma1, divergence::Scale{gap});
  const Modulus upper = sigma1.prefix_max();
  Modulus theta_star(
      [upper, gap](const Nat& n, EvalBudget& b) { return monus(upper(ceil_nat(Rational(n) / gap) + 1, b), Nat(1)); },
      Role::RateOfDivergence, sigma1.label() + "+(ceil(n/(1-a))+1)-1", true);
  return {std::move(theta), std::move(theta_star)};
}

LambdaWitnesses derive_lambda_witnesses(const Schedule& s) {
  LambdaWitnesses out;
  const Witnesses& w = s.w;
  if (w.theta2 && w.Lambda && w.N_Lambda) {
    const Modulus theta2 = *w.theta2;
    const Nat big = *w.Lambda;
    const Nat start = *w.N_Lambda;
    Modulus t1(
        [theta2, big, start](const Nat& k, EvalBudget& b) {
          Nat v = theta2(monus(big * (k + 1), Nat(1)), b);
          return v > start ? v : start;
        },
        Role::CauchyModulus, "max{N_L," + theta2.label() + "(L(k+1)-1)}", theta2.monotone());
    out.theta1 = t1;
    out.theta1_star = t1;
  } else {
    out.theta1 = w.theta1;
    out.theta1_star = w.theta1_star;
  }
  if (w.theta4) out.theta4_star = cauchy_from_conv(*w.theta4);
  return out;
}

std::vector<std::pair<std::string, std::string>> preset_catalog() {
  return {
      {"linear", "alpha_n=2/((1-a)(n+J)), lambda_n=(n+J)/(n+J-1), J=2ceil(1/(1-a)); params: alpha"},
      {"power", "alpha_n=(n+2)^(-3/4), lambda_n=1+(-1)^n/(n+1); no params"},
      {"offset", "alpha_n=abar+2/((1-a)(n+J)), lambda_n=(n+J)/(n+J-1), J=2ceil(1/(1-a))+1; params: alpha, alpha_bar"},
      {"custom", "alpha/lambda from the sequence catalog plus explicitly claimed witnesses"},
  };
}

}  // namespace genvam
