#include "genvam/budget.hpp"

namespace genvam {

BudgetExceeded::BudgetExceeded(BudgetReport report)
    : std::runtime_error("evaluation budget exceeded: " + report.reason), report_(std::move(report)) {}

EvalBudget::EvalBudget() : EvalBudget(pow_nat(Nat(10), 12)) {}

EvalBudget::EvalBudget(Nat ceiling, std::uint64_t max_steps)
    : ceiling_(std::move(ceiling)), max_steps_(max_steps) {}

const Nat& EvalBudget::admit(const Nat& v, const char* what) const {
  if (v > ceiling_) {
    std::string digits = to_string(v);
    if (digits.size() > 40) digits = digits.substr(0, 12) + "...(" + std::to_string(digits.size()) + " digits)";
    throw BudgetExceeded(BudgetReport{std::string(what) + " " + digits + " exceeds ceiling " + to_string(ceiling_),
                                      max_depth_, steps_});
  }
  return v;
}

void EvalBudget::step(std::uint64_t count) {
  steps_ += count;
  if (steps_ > max_steps_) {
    throw BudgetExceeded(
        BudgetReport{"step limit " + std::to_string(max_steps_) + " reached", max_depth_, steps_});
  }
}

}  // namespace genvam
