#include "genvam/modulus.hpp"

#include <utility>

namespace genvam {

std::string to_string(Role role) {
  switch (role) {
    case Role::RateOfConvergence:
      return "rate of convergence";
    case Role::CauchyModulus:
      return "Cauchy modulus";
    case Role::RateOfDivergence:
      return "rate of divergence";
    case Role::RateOfAsymptoticRegularity:
      return "rate of asymptotic regularity";
    case Role::Generic:
      break;
  }
  return "generic";
}

// ---------------------------------------------------------------- Modulus

Modulus::Modulus(Fn fn, Role role, std::string label, bool monotone)
    : fn_(std::make_shared<const Fn>(std::move(fn))), role_(role), label_(std::move(label)), monotone_(monotone) {}

Modulus Modulus::identity(Role role) {
  return Modulus([](const Nat& n, EvalBudget&) { return n; }, role, "n", true);
}

Modulus Modulus::constant(Nat c, Role role) {
  std::string label = to_string(c);
  return Modulus([c = std::move(c)](const Nat&, EvalBudget&) { return c; }, role, std::move(label), true);
}

Modulus Modulus::affine(Nat a, Nat b, Role role) {
  std::string label = to_string(a) + "n+" + to_string(b);
  return Modulus([a = std::move(a), b = std::move(b)](const Nat& n, EvalBudget&) { return Nat(a * n + b); }, role,
                 std::move(label), true);
}

Modulus Modulus::plain(std::function<Nat(const Nat&)> fn, Role role, std::string label, bool monotone) {
  return Modulus([fn = std::move(fn)](const Nat& n, EvalBudget&) { return fn(n); }, role, std::move(label), monotone);
}

Nat Modulus::operator()(const Nat& n, EvalBudget& budget) const {
  Nat v = (*fn_)(n, budget);
  budget.admit(v, label_.c_str());
  return v;
}

Nat Modulus::operator()(const Nat& n) const {
  EvalBudget budget;
  return (*this)(n, budget);
}

EvalOutcome Modulus::evaluate(const Nat& n, const EvalBudget& budget) const {
  return guarded(budget.fresh(), [&](EvalBudget& b) { return (*this)(n, b); });
}

Modulus Modulus::with_role(Role role) const {
  Modulus copy = *this;
  copy.role_ = role;
  return copy;
}

Modulus Modulus::with_label(std::string label) const {
  Modulus copy = *this;
  copy.label_ = std::move(label);
  return copy;
}

Modulus Modulus::prefix_max() const {
  if (monotone_) return with_label(label_ + "+");
  auto inner = fn_;
  return Modulus(
      [inner](const Nat& n, EvalBudget& budget) {
        Nat best = 0;
        for (Nat i = 0; i <= n; ++i) {
          budget.step();
          Nat v = (*inner)(i, budget);
          budget.admit(v);
          if (v > best) best = std::move(v);
        }
        return best;
      },
      role_, label_ + "+", true);
}

// ---------------------------------------------------------------- Counter

Counter::Counter(Fn fn, std::string label)
    : fn_(std::make_shared<const Fn>(std::move(fn))), label_(std::move(label)) {}

Counter Counter::affine(Nat slope, Nat offset) {
  std::string label;
  if (slope == 0) {
    label = "g=" + to_string(offset);
  } else {
    label = "g=" + (slope == 1 ? std::string() : to_string(slope)) + "n" + (offset == 0 ? "" : "+" + to_string(offset));
  }
  Counter c([slope, offset](const Nat& n, EvalBudget&) { return Nat(slope * n + offset); }, std::move(label));
  c.affine_ = Affine{std::move(slope), std::move(offset)};
  return c;
}

Counter Counter::from_modulus(const Modulus& m) {
  return Counter([m](const Nat& n, EvalBudget& b) { return m(n, b); }, m.label());
}

Nat Counter::operator()(const Nat& n, EvalBudget& budget) const {
  Nat v = (*fn_)(n, budget);
  budget.admit(v, "counter value");
  return v;
}

Nat Counter::operator()(const Nat& n) const {
  EvalBudget budget;
  return (*this)(n, budget);
}

Counter Counter::tilde() const {
  auto inner = fn_;
  Counter c([inner](const Nat& n, EvalBudget& b) { return Nat(n + (*inner)(n, b)); }, label_ + "~");
  if (affine_) c.affine_ = Affine{affine_->slope + 1, affine_->offset};
  return c;
}

Counter Counter::shifted(const Nat& n) const {
  auto inner = fn_;
  Counter c([inner, n](const Nat& m, EvalBudget& b) { return Nat(n + (*inner)(Nat(n + m), b)); },
            label_ + "_" + to_string(n));
  if (affine_) c.affine_ = Affine{affine_->slope, n + affine_->slope * n + affine_->offset};
  return c;
}

Nat Counter::prefix_max(const Nat& n, EvalBudget& budget) const {
  if (affine_) return (*this)(n, budget);
  Nat best = 0;
  for (Nat i = 0; i <= n; ++i) {
    budget.step();
    Nat v = (*this)(i, budget);
    if (v > best) best = std::move(v);
  }
  return best;
}

Nat Counter::iterate(const Nat& times, const Nat& start, EvalBudget& budget) const {
  if (times == 0) return start;
  if (affine_) {
    if (affine_->slope == 0) return budget.admit(affine_->offset, "iterate");
    if (affine_->slope == 1) {
      Nat v = start + times * affine_->offset;
      budget.admit(v, "iterate");
      return v;
    }
  }
  Nat v = start;
  for (Nat i = 0; i < times; ++i) {
    budget.step();
    Nat next = (*this)(v, budget);
    if (next == v) break;
    v = std::move(next);
  }
  return v;
}

// ---------------------------------------------------------------- MetaRate

MetaRate::MetaRate(Fn fn, std::string label)
    : fn_(std::make_shared<const Fn>(std::move(fn))), label_(std::move(label)) {}

Nat MetaRate::operator()(const Nat& k, const Counter& g, EvalBudget& budget) const {
  EvalBudget::Scope scope(budget);
  Nat v = (*fn_)(k, g, budget);
  budget.admit(v, label_.c_str());
  return v;
}

Nat MetaRate::operator()(const Nat& k, const Counter& g) const {
  EvalBudget budget;
  return (*this)(k, g, budget);
}

EvalOutcome MetaRate::evaluate(const Nat& k, const Counter& g, const EvalBudget& budget) const {
  return guarded(budget.fresh(), [&](EvalBudget& b) { return (*this)(k, g, b); });
}

EpsMetaRate::EpsMetaRate(Fn fn, std::string label)
    : fn_(std::make_shared<const Fn>(std::move(fn))), label_(std::move(label)) {}

Nat EpsMetaRate::operator()(const Rational& eps, const Counter& g, EvalBudget& budget) const {
  EvalBudget::Scope scope(budget);
  Nat v = (*fn_)(eps, g, budget);
  budget.admit(v, label_.c_str());
  return v;
}

ShiftedMetaRate::ShiftedMetaRate(Fn fn, std::string label)
    : fn_(std::make_shared<const Fn>(std::move(fn))), label_(std::move(label)) {}

Nat ShiftedMetaRate::operator()(const Nat& k, const Counter& g, const Nat& n, EvalBudget& budget) const {
  EvalBudget::Scope scope(budget);
  Nat v = (*fn_)(k, g, n, budget);
  budget.admit(v, label_.c_str());
  return v;
}

Nat ShiftedMetaRate::operator()(const Nat& k, const Counter& g, const Nat& n) const {
  EvalBudget budget;
  return (*this)(k, g, n, budget);
}

}  // namespace genvam
