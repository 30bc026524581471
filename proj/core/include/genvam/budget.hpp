#pragma once

#include "genvam/numeric.hpp"

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>

namespace genvam {

/// Why an evaluation was abandoned.
struct BudgetReport {
  std::string reason;
  std::size_t depth = 0;      ///< nesting depth reached when the budget ran out
  std::uint64_t steps = 0;    ///< elementary steps spent
};

class BudgetExceeded : public std::runtime_error {
 public:
  explicit BudgetExceeded(BudgetReport report);
  const BudgetReport& report() const noexcept { return report_; }

 private:
  BudgetReport report_;
};

/// Ceiling on every intermediate rate value plus a cap on elementary steps
/// (function iterates, prefix maxima). One instance is threaded through a
/// single evaluation; copy it to start a fresh evaluation.
class EvalBudget {
 public:
  static constexpr std::uint64_t kDefaultMaxSteps = 20'000'000;

  EvalBudget();
  explicit EvalBudget(Nat ceiling, std::uint64_t max_steps = kDefaultMaxSteps);

  const Nat& ceiling() const noexcept { return ceiling_; }
  std::uint64_t max_steps() const noexcept { return max_steps_; }
  std::uint64_t steps_used() const noexcept { return steps_; }
  std::size_t depth() const noexcept { return depth_; }
  std::size_t max_depth() const noexcept { return max_depth_; }

  /// Returns v, or throws BudgetExceeded when v > ceiling.
  const Nat& admit(const Nat& v, const char* what = "value") const;

  void step(std::uint64_t count = 1);

  /// RAII marker for nested constructions; depth ends up in the report.
  class Scope {
   public:
    explicit Scope(EvalBudget& budget) : budget_(budget) {
      if (++budget_.depth_ > budget_.max_depth_) budget_.max_depth_ = budget_.depth_;
    }
    ~Scope() { --budget_.depth_; }
    Scope(const Scope&) = delete;
    Scope& operator=(const Scope&) = delete;

   private:
    EvalBudget& budget_;
  };

  /// Fresh copy with the same limits and zeroed counters.
  EvalBudget fresh() const { return EvalBudget(ceiling_, max_steps_); }

 private:
  Nat ceiling_;
  std::uint64_t max_steps_;
  std::uint64_t steps_ = 0;
  std::size_t depth_ = 0;
  std::size_t max_depth_ = 0;
};

/// Either a value or the report of a crossed budget.
class EvalOutcome {
 public:
  EvalOutcome(Nat value) : state_(std::move(value)) {}  // NOLINT(google-explicit-constructor)
  EvalOutcome(BudgetReport report) : state_(std::move(report)) {}  // NOLINT

  bool has_value() const noexcept { return std::holds_alternative<Nat>(state_); }
  bool exceeded() const noexcept { return !has_value(); }
  const Nat& value() const { return std::get<Nat>(state_); }
  const BudgetReport& report() const { return std::get<BudgetReport>(state_); }

 private:
  std::variant<Nat, BudgetReport> state_;
};

/// Run fn(budget) and fold a BudgetExceeded into the outcome.
template <class Fn>
EvalOutcome guarded(EvalBudget budget, Fn&& fn) {
  try {
    return EvalOutcome(fn(budget));
  } catch (const BudgetExceeded& e) {
    return EvalOutcome(e.report());
  }
}

}  // namespace genvam
