#include "genvam/combinators.hpp"

#include <stdexcept>
#include <utility>

namespace genvam {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

/// ceil(2c(k+1)) - 1, always >= 0 for c > 0.
Nat scaled_index(const Rational& c, const Nat& k) {
  return monus(ceil_nat(Rational(2) * c * Rational(k + 1)), Nat(1));
}

}  // namespace

Modulus cauchy_from_conv(const Modulus& phi) {
  return Modulus([phi](const Nat& k, EvalBudget& b) { return phi(2 * k + 1, b); }, Role::CauchyModulus,
                 phi.label() + "(2k+1)", phi.monotone());
}

Modulus transform_divergence(const Modulus& theta, const divergence::Kind& kind) {
  return std::visit(
      Overloaded{
          [&](const divergence::TailShift& t) -> Modulus {
            if (t.count == 0) throw std::invalid_argument("transform_divergence: tail shift by zero terms");
            if (t.unit_bounded) {
              const Modulus upper = theta.prefix_max();
              const Nat count = t.count;
              return Modulus([upper, count](const Nat& n, EvalBudget& b) { return monus(upper(n + count, b), count); },
                             Role::RateOfDivergence, theta.label() + "+(n+" + to_string(count) + ")-" + to_string(count));
            }
            if (!t.head_sum_ceiling) {
              throw std::invalid_argument("transform_divergence: tail shift needs the head sum ceiling or unit bound");
            }
            const Nat count = t.count;
            const Nat head = *t.head_sum_ceiling;
            return Modulus([theta, count, head](const Nat& n, EvalBudget& b) { return monus(theta(n + head, b), count); },
                           Role::RateOfDivergence, theta.label() + "(n+" + to_string(head) + ")-" + to_string(count));
          },
          [&](const divergence::Scale& s) -> Modulus {
            if (s.factor <= 0) throw std::invalid_argument("transform_divergence: scale factor must be positive");
            const Rational c = s.factor;
            return Modulus([theta, c](const Nat& n, EvalBudget& b) { return theta(ceil_nat(Rational(n) / c), b); },
                           Role::RateOfDivergence, theta.label() + "(ceil(n/" + to_string(c) + "))", theta.monotone());
          },
          [&](const divergence::Sum& s) -> Modulus {
            const Modulus other = s.other;
            return Modulus(
                [theta, other](const Nat& n, EvalBudget& b) {
                  Nat x = theta(n, b);
                  Nat y = other(n, b);
                  return x < y ? x : y;
                },
                Role::RateOfDivergence, "min{" + theta.label() + "," + other.label() + "}",
                theta.monotone() && other.monotone());
          },
      },
      kind);
}

Modulus combine_linear(const Modulus& phi1, const Modulus& phi2, const Rational& q, const Rational& r) {
  if (q <= 0 || r <= 0) throw std::invalid_argument("combine_linear: weights must be positive");
  if (phi1.role() != phi2.role()) throw std::invalid_argument("combine_linear: moduli have different roles");
  return Modulus(
      [phi1, phi2, q, r](const Nat& k, EvalBudget& b) {
        Nat x = phi1(scaled_index(q, k), b);
        Nat y = phi2(scaled_index(r, k), b);
        return x > y ? x : y;
      },
      phi1.role(), "max{" + phi1.label() + "," + phi2.label() + "}", phi1.monotone() && phi2.monotone());
}

Modulus xu_rate(const Modulus& theta, const xu::Case& aux, const Nat& bound) {
  if (bound == 0) throw std::invalid_argument("xu_rate: the upper bound L must be positive");
  const Nat two_l = 2 * bound;
  return std::visit(
      Overloaded{
          [&](const xu::VanishingFactor& c) -> Modulus {
            const Modulus psi = c.psi;
            return Modulus(
                [theta, psi, two_l](const Nat& k, EvalBudget& b) {
                  const Nat log_term = ceil_ln(Rational(two_l * (k + 1)));
                  return Nat(theta(psi(2 * k + 1, b) + log_term, b) + 1);
                },
                Role::RateOfConvergence, "xu1[" + theta.label() + "," + psi.label() + "]",
                theta.monotone() && psi.monotone());
          },
          [&](const xu::SummablePerturbation& c) -> Modulus {
            const Modulus chi = c.chi;
            return Modulus(
                [theta, chi, two_l](const Nat& k, EvalBudget& b) {
                  const Nat log_term = ceil_ln(Rational(two_l * (k + 1)));
                  return Nat(theta(chi(2 * k + 1, b) + 1 + log_term, b) + 1);
                },
                Role::RateOfConvergence, "xu2[" + theta.label() + "," + chi.label() + "]",
                theta.monotone() && chi.monotone());
          },
      },
      aux);
}

std::function<Rational(const Nat&)> sabach_shtern_bound(const Rational& bound, const Nat& j, const Nat& n,
                                                         const Rational& gamma) {
  if (bound <= 0) throw std::invalid_argument("sabach_shtern_bound: L must be positive");
  if (n < 2) throw std::invalid_argument("sabach_shtern_bound: N must be at least 2");
  if (j < n) throw std::invalid_argument("sabach_shtern_bound: J must be at least N");
  if (gamma <= 0 || gamma > 1) throw std::invalid_argument("sabach_shtern_bound: gamma must lie in (0,1]");
  return [bound, j, gamma](const Nat& idx) { return Rational(Rational(j) * bound / (gamma * Rational(idx + j))); };
}

MetaRate meta_from_cauchy(const Modulus& phi) {
  return MetaRate([phi](const Nat& k, const Counter&, EvalBudget& b) { return phi(k, b); }, "meta[" + phi.label() + "]");
}

ShiftedMetaRate meta_shift(const MetaRate& omega, ShiftKind kind) {
  auto plus = [omega](const Nat& k, const Counter& g, const Nat& n, EvalBudget& b) {
    return Nat(n + omega(k, g.shifted(n), b));
  };
  if (kind == ShiftKind::Plus) return ShiftedMetaRate(plus, omega.label() + "+");
  return ShiftedMetaRate(
      [plus](const Nat& k, const Counter& g, const Nat& n, EvalBudget& b) {
        Nat best = 0;
        for (Nat i = 0; i <= n; ++i) {
          b.step();
          Nat v = plus(k, g, i, b);
          if (v > best) best = std::move(v);
        }
        return best;
      },
      omega.label() + "dag");
}

Nat accuracy_index(const Rational& eps) {
  if (eps <= 0) throw std::invalid_argument("accuracy must be positive");
  return monus(ceil_nat(Rational(1) / eps), Nat(1));
}

EpsMetaRate to_epsilon_form(const MetaRate& omega) {
  return EpsMetaRate(
      [omega](const Rational& eps, const Counter& g, EvalBudget& b) { return omega(accuracy_index(eps), g, b); },
      omega.label() + "*");
}

MetaRate to_index_form(const EpsMetaRate& omega) {
  return MetaRate(
      [omega](const Nat& k, const Counter& g, EvalBudget& b) {
        return omega(Rational(Nat(1), Nat(k + 1)), g.tilde(), b);
      },
      omega.label() + "~");
}

Counter transfer_counter(const Nat& p, const Counter& g) {
  return Counter(
      [p, g](const Nat& m, EvalBudget& b) {
        const Nat top = p > m ? p : m;
        return Nat(top - m + g(top, b));
      },
      "h[" + to_string(p) + "," + g.label() + "]");
}

MetaRate meta_transfer(const MetaRate& omega, const Modulus& phi) {
  return MetaRate(
      [omega, phi](const Nat& k, const Counter& g, EvalBudget& b) {
        const Nat k3 = 3 * k + 2;
        Nat p = phi(k3, b);
        Nat o = omega(k3, transfer_counter(p, g), b);
        return p > o ? p : o;
      },
      "transfer[" + omega.label() + "," + phi.label() + "]");
}

Modulus lmeta_from_asreg(const Modulus& phi, const Nat& window) {
  if (window == 0) throw std::invalid_argument("lmeta_from_asreg: L must be positive");
  return Modulus([phi, window](const Nat& k, EvalBudget& b) { return phi(monus(window * (k + 1), Nat(1)), b); },
                 Role::Generic, phi.label() + "_L" + to_string(window), phi.monotone());
}

}  // namespace genvam
