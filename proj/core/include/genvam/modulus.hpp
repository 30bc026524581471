#pragma once

#include "genvam/budget.hpp"
#include "genvam/numeric.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>

namespace genvam {

enum class Role {
  RateOfConvergence,
  CauchyModulus,
  RateOfDivergence,
  RateOfAsymptoticRegularity,
  Generic,
};

std::string to_string(Role role);

/// A total function N -> N with a semantic tag.
///
/// Evaluation is pure; every produced value passes through the budget so
/// towers of iterated functions surface as BudgetExceeded instead of running
/// out of memory. Instances are immutable and cheap to copy.
class Modulus {
 public:
  using Fn = std::function<Nat(const Nat&, EvalBudget&)>;

  Modulus(Fn fn, Role role, std::string label, bool monotone = false);

  static Modulus identity(Role role = Role::Generic);
  static Modulus constant(Nat c, Role role = Role::Generic);
  /// n -> a*n + b
  static Modulus affine(Nat a, Nat b, Role role = Role::Generic);
  /// Lift a budget-free callable; the result is still checked against the ceiling.
  static Modulus plain(std::function<Nat(const Nat&)> fn, Role role, std::string label, bool monotone = false);

  Nat operator()(const Nat& n, EvalBudget& budget) const;
  /// Evaluate under the default budget; throws BudgetExceeded.
  Nat operator()(const Nat& n) const;
  EvalOutcome evaluate(const Nat& n, const EvalBudget& budget = EvalBudget()) const;

  Role role() const noexcept { return role_; }
  const std::string& label() const noexcept { return label_; }
  /// True when the function is known to be nondecreasing.
  bool monotone() const noexcept { return monotone_; }

  Modulus with_role(Role role) const;
  Modulus with_label(std::string label) const;

  /// g+(n) = max{g(i) : i in [0;n]}.
  Modulus prefix_max() const;

 private:
  std::shared_ptr<const Fn> fn_;
  Role role_;
  std::string label_;
  bool monotone_;
};

/// Counter-function g : N -> N as used by metastability statements.
/// Keeps an affine description when one is known so that long iterates of
/// additive maps can be evaluated in closed form.
class Counter {
 public:
  using Fn = std::function<Nat(const Nat&, EvalBudget&)>;
  struct Affine {
    Nat slope;
    Nat offset;
  };

  Counter(Fn fn, std::string label);
  static Counter affine(Nat slope, Nat offset);
  static Counter constant(Nat c) { return affine(Nat(0), std::move(c)); }
  static Counter identity() { return affine(Nat(1), Nat(0)); }
  static Counter from_modulus(const Modulus& m);

  Nat operator()(const Nat& n, EvalBudget& budget) const;
  Nat operator()(const Nat& n) const;

  /// n + g(n)
  Counter tilde() const;
  /// g_n(m) = n + g(n + m)
  Counter shifted(const Nat& n) const;
  /// max{g(i) : i in [0;n]}
  Nat prefix_max(const Nat& n, EvalBudget& budget) const;
  /// g^(times)(start). Stops early at a fixed point.
  Nat iterate(const Nat& times, const Nat& start, EvalBudget& budget) const;

  const std::optional<Affine>& affine_form() const noexcept { return affine_; }
  const std::string& label() const noexcept { return label_; }

 private:
  std::shared_ptr<const Fn> fn_;
  std::optional<Affine> affine_;
  std::string label_;
};

/// Rate of metastability: (k, g) -> N.
class MetaRate {
 public:
  using Fn = std::function<Nat(const Nat&, const Counter&, EvalBudget&)>;

  MetaRate(Fn fn, std::string label);

  Nat operator()(const Nat& k, const Counter& g, EvalBudget& budget) const;
  Nat operator()(const Nat& k, const Counter& g) const;
  EvalOutcome evaluate(const Nat& k, const Counter& g, const EvalBudget& budget = EvalBudget()) const;

  const std::string& label() const noexcept { return label_; }

 private:
  std::shared_ptr<const Fn> fn_;
  std::string label_;
};

/// Metastability rate in epsilon form: windows are [N; g(N)] and the
/// accuracy is a positive rational.
class EpsMetaRate {
 public:
  using Fn = std::function<Nat(const Rational&, const Counter&, EvalBudget&)>;

  EpsMetaRate(Fn fn, std::string label);

  Nat operator()(const Rational& eps, const Counter& g, EvalBudget& budget) const;
  const std::string& label() const noexcept { return label_; }

 private:
  std::shared_ptr<const Fn> fn_;
  std::string label_;
};

/// Three-argument shifted rate (k, g, n) -> N.
class ShiftedMetaRate {
 public:
  using Fn = std::function<Nat(const Nat&, const Counter&, const Nat&, EvalBudget&)>;

  ShiftedMetaRate(Fn fn, std::string label);

  Nat operator()(const Nat& k, const Counter& g, const Nat& n, EvalBudget& budget) const;
  Nat operator()(const Nat& k, const Counter& g, const Nat& n) const;
  const std::string& label() const noexcept { return label_; }

 private:
  std::shared_ptr<const Fn> fn_;
  std::string label_;
};

}  // namespace genvam
