#pragma once

// Combinators that turn quantitative witnesses into new ones. All arithmetic
// is on arbitrary-precision naturals with truncated subtraction.

#include "genvam/modulus.hpp"

#include <functional>
#include <optional>
#include <variant>

namespace genvam {

/// Rate of convergence phi -> Cauchy modulus k -> phi(2k+1).
Modulus cauchy_from_conv(const Modulus& phi);

namespace divergence {

/// Drop the first `count` terms. Either the ceiling of the dropped head sum
/// is known, or every term lies in [0,1].
struct TailShift {
  Nat count;
  std::optional<Nat> head_sum_ceiling;
  bool unit_bounded = false;
};

/// Multiply every term by a positive rational.
struct Scale {
  Rational factor;
};

/// Add a second divergent series with rate `other`.
struct Sum {
  Modulus other;
};

using Kind = std::variant<TailShift, Scale, Sum>;

}  // namespace divergence

Modulus transform_divergence(const Modulus& theta, const divergence::Kind& kind);

/// phi(k) = max{phi1(ceil(2q(k+1)) - 1), phi2(ceil(2r(k+1)) - 1)} for c_n = q a_n + r b_n.
Modulus combine_linear(const Modulus& phi1, const Modulus& phi2, const Rational& q, const Rational& r);

namespace xu {

/// s_{n+1} <= (1 - a_n) s_n + a_n b_n with b_n <= 1/(k+1) from psi(k) on.
struct VanishingFactor {
  Modulus psi;
};

/// s_{n+1} <= (1 - a_n) s_n + c_n with sum c_n Cauchy with modulus chi.
struct SummablePerturbation {
  Modulus chi;
};

using Case = std::variant<VanishingFactor, SummablePerturbation>;

}  // namespace xu

/// Rate of convergence to zero of a sequence bounded by `bound` that obeys
/// one of the two Xu-type recurrences; theta is a rate of divergence of sum a_n.
Modulus xu_rate(const Modulus& theta, const xu::Case& aux, const Nat& bound);

/// n -> J L / (gamma (n + J)). Requires J >= N >= 2, gamma in (0,1], L > 0.
std::function<Rational(const Nat&)> sabach_shtern_bound(const Rational& bound, const Nat& j, const Nat& n,
                                                         const Rational& gamma);

/// Omega(k, g) = phi(k).
MetaRate meta_from_cauchy(const Modulus& phi);

enum class ShiftKind { Plus, Dagger };

/// Plus:   (k, g, n) -> n + Omega(k, g_n)
/// Dagger: (k, g, n) -> max over i in [0;n] of the Plus value; monotone in n.
ShiftedMetaRate meta_shift(const MetaRate& omega, ShiftKind kind);

/// ceil(1/eps) - 1, the index used when converting between the two forms.
Nat accuracy_index(const Rational& eps);

/// k-form -> epsilon-form: (eps, g) -> Omega(ceil(1/eps) - 1, g).
EpsMetaRate to_epsilon_form(const MetaRate& omega);

/// epsilon-form -> k-form: (k, g) -> Omega(1/(k+1), n -> n + g(n)).
MetaRate to_index_form(const EpsMetaRate& omega);

/// Transfer a metastability rate of (x_n) to (y_n) given a rate of
/// convergence phi of d(x_n, y_n) -> 0.
MetaRate meta_transfer(const MetaRate& omega, const Modulus& phi);

/// The counter-function h_{k,g}(m) = max{P,m} - m + g(max{P,m}) with P = phi(3k+2).
Counter transfer_counter(const Nat& p, const Counter& g);

/// Rate of asymptotic regularity -> rate of L-metastability k -> phi(L(k+1) - 1).
Modulus lmeta_from_asreg(const Modulus& phi, const Nat& window);

}  // namespace genvam
