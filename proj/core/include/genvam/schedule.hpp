#pragma once

// Parameter sequences (alpha_n), (lambda_n) with the quantitative witnesses
// consumed by the rate constructors.

#include "genvam/modulus.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace genvam {

/// A real sequence, exact when a rational form is available.
struct Sequence {
  std::function<double(std::uint64_t)> approx;
  std::function<Rational(std::uint64_t)> exact;  ///< empty for irrational sequences
  std::string formula;

  double operator()(std::uint64_t n) const { return approx(n); }
  bool is_exact() const noexcept { return static_cast<bool>(exact); }

  static Sequence rational(std::function<Rational(std::uint64_t)> fn, std::string formula);
  static Sequence real(std::function<double(std::uint64_t)> fn, std::string formula);
};

struct Witnesses {
  std::optional<Modulus> sigma1;  ///< rate of divergence of sum alpha_n
  std::optional<Modulus> sigma2;  ///< Cauchy modulus of sum |alpha_n - alpha_{n+1}|
  std::optional<Modulus> sigma3;  ///< rate of convergence alpha_n -> 0
  std::optional<Modulus> sigma4;  ///< rate of convergence |alpha_{n+1} - alpha_n| / alpha_n^2 -> 0
  std::optional<Modulus> theta1;       ///< Cauchy modulus of sum |1 - lambda_{n+1}/lambda_n|
  std::optional<Modulus> theta1_star;  ///< Cauchy modulus of sum |1 - lambda_n/lambda_{n+1}|
  std::optional<Modulus> theta2;  ///< Cauchy modulus of sum |lambda_n - lambda_{n+1}|
  std::optional<Modulus> theta4;  ///< rate of convergence lambda_n -> lambda
  std::optional<Nat> Lambda;      ///< lambda_n >= 1/Lambda for n >= N_Lambda
  std::optional<Nat> N_Lambda;
  std::optional<Rational> lambda_limit;
  std::optional<Nat> l;           ///< lambda_limit > 1/(l+1)
  std::optional<Modulus> h;       ///< alpha_n >= 1/(h(n)+1)
  bool nonincreasing = false;     ///< (alpha_n) nonincreasing
  std::optional<Rational> alpha_bar;
};

enum class Preset { Linear, Power, Offset, Custom };

std::string to_string(Preset p);

struct Schedule {
  Preset preset = Preset::Custom;
  std::string name;
  Sequence alpha;
  Sequence lambda;
  Witnesses w;
  std::optional<Nat> J;
  std::optional<Rational> contraction_alpha;  ///< the alpha the preset was built for

  /// Throws std::invalid_argument naming the missing hypothesis.
  const Modulus& need(const std::optional<Modulus>& m, const char* what) const;
  const Nat& need(const std::optional<Nat>& m, const char* what) const;
  const Rational& need(const std::optional<Rational>& m, const char* what) const;
};

/// alpha_n = 2/((1-alpha)(n+J)), lambda_n = (n+J)/(n+J-1), J = 2 ceil(1/(1-alpha)).
Schedule make_linear_schedule(const Rational& alpha);
/// alpha_n = (n+2)^(-3/4), lambda_n = 1 + (-1)^n/(n+1).
Schedule make_power_schedule();
/// alpha_n = abar + 2/((1-alpha)(n+J)), lambda_n = (n+J)/(n+J-1), J = 2 ceil(1/(1-alpha)) + 1.
Schedule make_offset_schedule(const Rational& alpha, const Rational& alpha_bar);

/// Custom: caller supplies sequences and every witness it wants to claim.
Schedule make_custom_schedule(std::string name, Sequence alpha, Sequence lambda, Witnesses w);

/// Witnesses for the offset schedule; validates abar in (0, (1-alpha)/(3-alpha)].
Witnesses offset_schedule_witnesses(const Rational& alpha, const Rational& alpha_bar);

struct AlphaDivergence {
  Modulus theta;       ///< for sum (1-alpha) alpha_n
  Modulus theta_star;  ///< for sum (1-alpha) alpha_{n+1}
};
AlphaDivergence derive_alpha_divergence(const Schedule& s, const Rational& alpha);

struct LambdaWitnesses {
  std::optional<Modulus> theta1;
  std::optional<Modulus> theta1_star;
  std::optional<Modulus> theta4_star;  ///< Cauchy modulus of (lambda_n)
};
/// theta1 = theta1* = k -> max{N_Lambda, theta2(Lambda(k+1)-1)} when Lambda, N_Lambda, theta2 are present,
/// otherwise the attached theta1/theta1*; theta4*(k) = theta4(2k+1).
LambdaWitnesses derive_lambda_witnesses(const Schedule& s);

/// Presets with a short description, for list-presets.
std::vector<std::pair<std::string, std::string>> preset_catalog();

}  // namespace genvam
