#include "genvam/experiment.hpp"

#include "genvam/axioms.hpp"
#include "genvam/verify.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

namespace genvam {

using nlohmann::json;

namespace {

// ------------------------------------------------------------ json access

/// A json value together with its path in the document.
class Field {
 public:
  Field(const json& j, std::string path) : j_(&j), path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }
  const json& raw() const noexcept { return *j_; }

  [[noreturn]] void error(const std::string& message) const { throw ConfigError(path_, message); }

  bool has(const char* key) const { return j_->is_object() && j_->contains(key); }

  Field at(const char* key) const {
    if (!j_->is_object()) error("expected an object");
    auto it = j_->find(key);
    if (it == j_->end()) throw ConfigError(child(key), "missing required field");
    return Field(*it, child(key));
  }

  std::optional<Field> get(const char* key) const {
    if (!has(key)) return std::nullopt;
    return at(key);
  }

  std::vector<Field> items() const {
    if (!j_->is_array()) error("expected an array");
    std::vector<Field> out;
    for (std::size_t i = 0; i < j_->size(); ++i) out.emplace_back((*j_)[i], path_ + "[" + std::to_string(i) + "]");
    return out;
  }

  void only(std::initializer_list<const char*> keys) const {
    if (!j_->is_object()) error("expected an object");
    for (auto it = j_->begin(); it != j_->end(); ++it) {
      bool known = false;
      for (const char* k : keys) known = known || it.key() == k;
      if (!known) {
        std::string list;
        for (const char* k : keys) list += std::string(list.empty() ? "" : ", ") + k;
        throw ConfigError(child(it.key()), "unknown field; expected one of: " + list);
      }
    }
  }

  std::string str() const {
    if (!j_->is_string()) error("expected a string");
    return j_->get<std::string>();
  }

  bool boolean() const {
    if (!j_->is_boolean()) error("expected true or false");
    return j_->get<bool>();
  }

  double num() const {
    if (j_->is_number()) return j_->get<double>();
    if (j_->is_string()) return to_double(rational());
    error("expected a number");
  }

  double positive() const {
    const double v = num();
    if (!(v > 0.0)) error("must be positive");
    return v;
  }

  std::uint64_t u64() const {
    if (j_->is_number_unsigned()) return j_->get<std::uint64_t>();
    if (j_->is_number_integer() && j_->get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(j_->get<std::int64_t>());
    if (j_->is_string() || j_->is_number_float()) {
      const Nat n = nat();
      if (!fits_u64(n)) error("value too large");
      return static_cast<std::uint64_t>(n);
    }
    error("expected a nonnegative integer");
  }

  Rational rational() const {
    try {
      if (j_->is_number_integer()) return Rational(j_->get<std::int64_t>());
      if (j_->is_number_unsigned()) return Rational(Nat(j_->get<std::uint64_t>()));
      if (j_->is_number_float()) return parse_rational(j_->dump());
      if (j_->is_string()) return parse_rational(j_->get<std::string>());
    } catch (const std::exception& e) {
      error(std::string("not a rational: ") + e.what());
    }
    error("expected a number or a rational string such as \"1/3\"");
  }

  Nat nat() const {
    try {
      if (j_->is_number_unsigned()) return Nat(j_->get<std::uint64_t>());
      if (j_->is_number_integer() && j_->get<std::int64_t>() >= 0) return Nat(j_->get<std::int64_t>());
      if (j_->is_number_float()) return parse_nat(j_->dump());
      if (j_->is_string()) return parse_nat(j_->get<std::string>());
    } catch (const std::exception& e) {
      error(std::string("not a natural number: ") + e.what());
    }
    error("expected a natural number");
  }

  std::vector<std::uint64_t> u64_list() const {
    std::vector<std::uint64_t> out;
    if (j_->is_number()) return {u64()};
    for (const Field& f : items()) out.push_back(f.u64());
    return out;
  }

  std::vector<double> num_list() const {
    std::vector<double> out;
    if (j_->is_number()) return {num()};
    for (const Field& f : items()) out.push_back(f.num());
    return out;
  }

 private:
  std::string child(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  const json* j_;
  std::string path_;
};

// ------------------------------------------------------------ structural parts

IterationConfig make_iteration(Family family, ContractionSpec f, Schedule schedule, Point x0, Point z) {
  IterationConfig c{std::move(family), std::move(f), std::move(schedule), std::move(x0), std::move(z), {}, {}, {}, {}, {}, {}};
  c.budget = 1'000'000;
  c.metric_tol = kDefaultMetricTol;
  c.eps_fp = kDefaultBrowderTol;
  c.record_tilde = true;
  c.record_browder = false;
  return c;
}

Point parse_point(const Field& f, const Space& space) {
  if (space.is_tree()) {
    f.only({"branch", "t"});
    const std::uint64_t branch = f.at("branch").u64();
    const double t = f.at("t").num();
    if (branch >= space.branches()) f.at("branch").error("branch index out of range");
    if (t < 0) f.at("t").error("must be nonnegative");
    return Point::tree(branch, t);
  }
  Vec v = f.num_list();
  if (v.size() != space.dim()) f.error("expected " + std::to_string(space.dim()) + " coordinates");
  return Point(std::move(v));
}

Subset parse_subset(const Field& f, bool tree, std::size_t dim, std::size_t branches) {
  const std::string kind = f.at("kind").str();
  if (kind == "whole") {
    f.only({"kind"});
    return subset::Whole{};
  }
  // Points are parsed against the ambient space.
  const Space ambient = tree ? Space::tripod(branches) : Space::euclidean(dim);
  if (kind == "ball") {
    f.only({"kind", "center", "radius"});
    return subset::Ball{parse_point(f.at("center"), ambient), f.at("radius").positive()};
  }
  if (kind == "box") {
    f.only({"kind", "lo", "hi"});
    if (tree) f.at("kind").error("boxes are only available in euclidean spaces");
    Vec lo = f.at("lo").num_list();
    Vec hi = f.at("hi").num_list();
    if (lo.size() != dim) f.at("lo").error("expected " + std::to_string(dim) + " coordinates");
    if (hi.size() != dim) f.at("hi").error("expected " + std::to_string(dim) + " coordinates");
    for (std::size_t i = 0; i < dim; ++i) {
      if (lo[i] > hi[i]) f.error("lo exceeds hi in coordinate " + std::to_string(i));
    }
    return subset::Box{lo, hi};
  }
  f.at("kind").error("unknown subset kind '" + kind + "'; expected whole, ball or box");
}

Space parse_space(const Field& f) {
  f.only({"kind", "dim", "branches", "subset"});
  const std::string kind = f.at("kind").str();
  const std::optional<Field> sub = f.get("subset");
  if (kind == "euclidean") {
    const std::uint64_t dim = f.at("dim").u64();
    if (dim == 0) f.at("dim").error("must be at least 1");
    return Space::euclidean(dim, sub ? parse_subset(*sub, false, dim, 0) : Subset(subset::Whole{}));
  }
  if (kind == "tripod") {
    const std::uint64_t branches = f.has("branches") ? f.at("branches").u64() : 3;
    if (branches < 2) f.at("branches").error("must be at least 2");
    return Space::tripod(branches, sub ? parse_subset(*sub, true, 0, branches) : Subset(subset::Whole{}));
  }
  f.at("kind").error("unknown space kind '" + kind + "'; expected euclidean or tripod");
}

Objective parse_objective(const Field& f, const Space& space) {
  const std::string kind = f.at("kind").str();
  auto vec_of = [&](const char* key) {
    Vec v = f.at(key).num_list();
    if (v.size() != space.dim()) f.at(key).error("expected " + std::to_string(space.dim()) + " coordinates");
    return v;
  };
  auto euclid_only = [&] {
    if (space.is_tree()) f.at("kind").error("objective '" + kind + "' needs a euclidean space");
  };
  if (kind == "quadratic") {
    f.only({"kind", "b"});
    euclid_only();
    return objective::Quadratic{f.has("b") ? vec_of("b") : Vec(space.dim(), 0.0)};
  }
  if (kind == "norm1") {
    f.only({"kind", "scale"});
    euclid_only();
    return objective::Norm1{f.has("scale") ? f.at("scale").positive() : 1.0};
  }
  if (kind == "indicator_ball") {
    f.only({"kind", "center", "radius"});
    return objective::IndicatorBall{parse_point(f.at("center"), space), f.at("radius").positive()};
  }
  if (kind == "indicator_box") {
    f.only({"kind", "lo", "hi"});
    euclid_only();
    return objective::IndicatorBox{vec_of("lo"), vec_of("hi")};
  }
  if (kind == "distance_squared") {
    f.only({"kind", "p"});
    return objective::DistanceSquared{parse_point(f.at("p"), space)};
  }
  if (kind == "quartic") {
    f.only({"kind", "b"});
    euclid_only();
    return objective::Quartic{f.has("b") ? vec_of("b") : Vec(space.dim(), 0.0)};
  }
  f.at("kind").error("unknown objective '" + kind +
                     "'; expected quadratic, norm1, indicator_ball, indicator_box, distance_squared or quartic");
}

NonexpansiveMap parse_map(const Field& f, const Space& space) {
  const std::string kind = f.at("kind").str();
  if (kind == "identity") {
    f.only({"kind"});
    return nonexp::Identity{};
  }
  if (kind == "constant") {
    f.only({"kind", "p"});
    return nonexp::Constant{parse_point(f.at("p"), space)};
  }
  if (kind == "shrink") {
    f.only({"kind", "amount"});
    return nonexp::Shrink{f.at("amount").positive()};
  }
  if (kind == "rotation") {
    f.only({"kind", "angle"});
    if (space.is_tree() || space.dim() < 2) f.at("kind").error("rotation needs a euclidean space of dimension >= 2");
    return nonexp::Rotation2D{f.at("angle").num()};
  }
  if (kind == "projection") {
    f.only({"kind", "center", "radius"});
    return nonexp::Projection{parse_point(f.at("center"), space), f.at("radius").positive()};
  }
  f.at("kind").error("unknown map '" + kind + "'; expected identity, constant, shrink, rotation or projection");
}

// ------------------------------------------------------------ schedules

Modulus parse_poly(const Field& f, Role role) {
  std::vector<Nat> coeffs;
  Nat minus = 0;
  if (f.raw().is_object()) {
    f.only({"poly", "minus"});
    for (const Field& c : f.at("poly").items()) coeffs.push_back(c.nat());
    if (f.has("minus")) minus = f.at("minus").nat();
  } else if (f.raw().is_array()) {
    for (const Field& c : f.items()) coeffs.push_back(c.nat());
  } else {
    coeffs.push_back(f.nat());
  }
  if (coeffs.empty()) f.error("empty polynomial");
  std::string label;
  for (std::size_t i = coeffs.size(); i-- > 0;) {
    if (coeffs[i] == 0) continue;
    if (!label.empty()) label += "+";
    label += to_string(coeffs[i]);
    if (i >= 1) label += "n";
    if (i >= 2) label += "^" + std::to_string(i);
  }
  if (label.empty()) label = "0";
  if (minus > 0) label = "(" + label + ")-" + to_string(minus);
  return Modulus(
      [coeffs, minus](const Nat& n, EvalBudget& b) {
        Nat v = 0;
        for (std::size_t i = coeffs.size(); i-- > 0;) {
          v = v * n + coeffs[i];
          b.admit(v, "polynomial witness");
        }
        return monus(v, minus);
      },
      role, label, true);
}

Sequence parse_alpha_sequence(const Field& f) {
  f.only({"kind", "a", "b", "p", "value"});
  const std::string kind = f.at("kind").str();
  if (kind == "harmonic") {
    const Rational a = f.at("a").rational();
    const Rational b = f.at("b").rational();
    if (a <= 0 || b <= 0) f.error("harmonic a/(n+b) needs a, b > 0");
    return Sequence::rational([a, b](std::uint64_t n) { return Rational(a / (Rational(Nat(n)) + b)); },
                              to_string(a) + "/(n+" + to_string(b) + ")");
  }
  if (kind == "power") {
    const Rational b = f.at("b").rational();
    const Rational p = f.at("p").rational();
    if (b < 1 || p <= 0) f.error("power (n+b)^(-p) needs b >= 1, p > 0");
    const double bd = to_double(b);
    const double pd = to_double(p);
    return Sequence::real([bd, pd](std::uint64_t n) { return std::pow(static_cast<double>(n) + bd, -pd); },
                          "(n+" + to_string(b) + ")^(-" + to_string(p) + ")");
  }
  if (kind == "constant") {
    const Rational v = f.at("value").rational();
    return Sequence::rational([v](std::uint64_t) { return v; }, to_string(v));
  }
  f.at("kind").error("unknown alpha sequence '" + kind + "'; expected harmonic, power or constant");
}

Sequence parse_lambda_sequence(const Field& f) {
  f.only({"kind", "value", "J", "c"});
  const std::string kind = f.at("kind").str();
  if (kind == "constant") {
    const Rational v = f.at("value").rational();
    if (v <= 0) f.at("value").error("must be positive");
    return Sequence::rational([v](std::uint64_t) { return v; }, to_string(v));
  }
  if (kind == "ratio") {
    const std::uint64_t J = f.at("J").u64();
    if (J < 2) f.at("J").error("must be at least 2");
    return Sequence::rational([J](std::uint64_t n) { return Rational(Nat(n + J), Nat(n + J - 1)); },
                              "(n+" + std::to_string(J) + ")/(n+" + std::to_string(J - 1) + ")");
  }
  if (kind == "alternating") {
    const Rational c = f.at("c").rational();
    if (c <= 0 || c >= 2) f.at("c").error("must lie in (0,2)");
    return Sequence::rational(
        [c](std::uint64_t n) { return Rational(1 + (n % 2 == 0 ? c : Rational(-c)) / Rational(Nat(n + 1))); },
        "1+" + to_string(c) + "(-1)^n/(n+1)");
  }
  f.at("kind").error("unknown lambda sequence '" + kind + "'; expected constant, ratio or alternating");
}

Schedule parse_schedule(const Field& f, const Rational& contraction_alpha) {
  const std::string preset = f.at("preset").str();
  auto alpha_param = [&] {
    if (!f.has("alpha")) return contraction_alpha;
    const Rational a = f.at("alpha").rational();
    if (a != contraction_alpha) f.at("alpha").error("must equal the contraction factor " + to_string(contraction_alpha));
    return a;
  };
  try {
    if (preset == "linear") {
      f.only({"preset", "alpha"});
      return make_linear_schedule(alpha_param());
    }
    if (preset == "power") {
      f.only({"preset"});
      return make_power_schedule();
    }
    if (preset == "offset") {
      f.only({"preset", "alpha", "alpha_bar"});
      const Rational a = alpha_param();
      return make_offset_schedule(a, f.at("alpha_bar").rational());
    }
  } catch (const std::invalid_argument& e) {
    f.error(e.what());
  }
  if (preset != "custom") f.at("preset").error("unknown preset '" + preset + "'; expected linear, power, offset or custom");

  f.only({"preset", "name", "alpha", "lambda", "witnesses"});
  Sequence alpha = parse_alpha_sequence(f.at("alpha"));
  Sequence lambda = parse_lambda_sequence(f.at("lambda"));
  Witnesses w;
  if (const auto wf = f.get("witnesses")) {
    wf->only({"sigma1", "sigma2", "sigma3", "sigma4", "theta1", "theta1_star", "theta2", "theta4", "Lambda", "N_Lambda",
              "lambda", "l", "h", "nonincreasing", "alpha_bar"});
    auto mod = [&](const char* key, Role role) -> std::optional<Modulus> {
      if (!wf->has(key)) return std::nullopt;
      return parse_poly(wf->at(key), role).with_label(std::string(key) + "=" + parse_poly(wf->at(key), role).label());
    };
    w.sigma1 = mod("sigma1", Role::RateOfDivergence);
    w.sigma2 = mod("sigma2", Role::CauchyModulus);
    w.sigma3 = mod("sigma3", Role::RateOfConvergence);
    w.sigma4 = mod("sigma4", Role::RateOfConvergence);
    w.theta1 = mod("theta1", Role::CauchyModulus);
    w.theta1_star = mod("theta1_star", Role::CauchyModulus);
    w.theta2 = mod("theta2", Role::CauchyModulus);
    w.theta4 = mod("theta4", Role::RateOfConvergence);
    w.h = mod("h", Role::Generic);
    if (wf->has("Lambda")) {
      w.Lambda = wf->at("Lambda").nat();
      if (*w.Lambda == 0) wf->at("Lambda").error("must be positive");
    }
    if (wf->has("N_Lambda")) w.N_Lambda = wf->at("N_Lambda").nat();
    if (wf->has("lambda")) {
      w.lambda_limit = wf->at("lambda").rational();
      if (*w.lambda_limit <= 0) wf->at("lambda").error("must be positive");
    }
    if (wf->has("l")) {
      w.l = wf->at("l").nat();
      if (*w.l == 0) wf->at("l").error("must be positive");
    }
    if (wf->has("nonincreasing")) w.nonincreasing = wf->at("nonincreasing").boolean();
    if (wf->has("alpha_bar")) w.alpha_bar = wf->at("alpha_bar").rational();
  }
  try {
    return make_custom_schedule(f.has("name") ? f.at("name").str() : "custom", std::move(alpha), std::move(lambda),
                                std::move(w));
  } catch (const std::invalid_argument& e) {
    f.error(e.what());
  }
}

// ------------------------------------------------------------ rate plan

enum class Column { Step, Tn, Tm, Tilde, BrowderGap, TnSequence, XMeta, YMeta };

struct Target {
  std::string id;
  Column column = Column::Step;
  std::uint64_t m = 0;
  std::uint64_t k_max = 0;
  double slack = 0.0;
  std::uint64_t p_max = 0;
  std::vector<std::uint64_t> ks;
  std::vector<Counter> gallery;
  bool meta_budget = false;
};

struct Plan {
  RateBundle bundle;
  std::vector<Target> targets;
  bool needs_browder = false;
  std::set<std::uint64_t> tm;
};

const std::vector<std::pair<std::string, std::string>>& catalog() {
  static const std::vector<std::pair<std::string, std::string>> c = {
      {"asreg", "rate of asymptotic regularity d(x_n,x_{n+1}) -> 0"},
      {"tn_asreg", "rate of convergence d(x_n,T_n x_n) -> 0"},
      {"tm_asreg", "rate of convergence d(x_n,T_m x_n) -> 0 for the listed m"},
      {"linear_asreg", "linear rate J0 K(k+1)-J for d(x_n,x_{n+1}) (linear schedule)"},
      {"linear_tn_asreg", "linear rate (J0+2J) K(k+1)-J for d(x_n,T_n x_n) (linear schedule)"},
      {"linear_tm_asreg", "linear rate (2J0+4J) K(k+1)-J for d(x_n,T_m x_n) (linear schedule)"},
      {"offset_asreg", "linear rate ceil(3J^2K/2)(k+1)-J for d(x_n,x_{n+1}) (offset schedule)"},
      {"dxy", "rate of convergence d(x_n,y_n) -> 0 against the implicit sequence"},
      {"tilde_asreg", "rate of convergence d(x_n,T~x_n) -> 0"},
      {"tilde_tn_asreg", "rate of convergence d(x_n,T_n x_n) -> 0 via T~"},
      {"tilde_tm_asreg", "rate of convergence d(x_n,T_m x_n) -> 0 via T~"},
      {"gamma", "Cauchy modulus of (T_n x_0)"},
      {"lmeta", "rate of L-metastability from a rate of asymptotic regularity"},
      {"browder_meta", "rate of metastability of the implicit sequence (y_n)"},
      {"hppa_meta", "rate of metastability of (x_n), constant contraction"},
      {"genvam_meta", "rate of metastability of (x_n), alpha in (0,1), bounded C"},
  };
  return c;
}

Nat ceil_of(const Sequence& s, std::uint64_t n) {
  if (s.is_exact()) return ceil_nat(s.exact(n));
  return Nat(static_cast<std::uint64_t>(std::ceil(s(n) - 1e-15)));
}

Rational abs_rat(const Rational& x) { return x < 0 ? Rational(-x) : x; }

/// diameter of C, or nullopt when C is unbounded
std::optional<double> diameter(const Space& s) {
  if (const auto* b = std::get_if<subset::Ball>(&s.subset())) return 2.0 * b->radius;
  if (const auto* b = std::get_if<subset::Box>(&s.subset())) {
    double sq = 0.0;
    for (std::size_t i = 0; i < b->lo.size(); ++i) sq += (b->hi[i] - b->lo[i]) * (b->hi[i] - b->lo[i]);
    return std::sqrt(sq);
  }
  return std::nullopt;
}

MetaRate meta_of_modulus(const Modulus& m, std::string label) {
  return MetaRate([m](const Nat& k, const Counter&, EvalBudget& b) { return m(k, b); }, std::move(label));
}

Plan make_plan(const ExperimentConfig& c, const BoundConstant& Kc) {
  Plan plan;
  const Schedule& s = c.iter.schedule;
  const Rational& alpha = c.contraction_alpha;
  const Nat& K = Kc.K;
  const Nat M = c.meta.M.value_or(3 * K);
  const double browder_slack = c.slack + 2 * c.iter.eps_fp;
  plan.bundle.constants["K"] = to_string(K);
  plan.bundle.constants["alpha"] = to_string(alpha);

  auto need_preset = [&](Preset p, const std::string& id) {
    if (s.preset != p) throw std::invalid_argument(id + " needs the " + to_string(p) + " schedule");
  };
  auto lambda_m = [&](std::uint64_t m) {
    Nat v = ceil_of(s.lambda, m);
    return v == 0 ? Nat(1) : v;
  };
  auto browder_variant = [&]() -> browder::Variant {
    if (s.w.nonincreasing) return browder::Nonincreasing{};
    return browder::VanishingAlpha{s.need(s.w.sigma3, "sigma3 (alpha_n -> 0)"), s.need(s.w.h, "h (alpha_n >= 1/(h(n)+1))")};
  };
  auto add_modulus = [&](const std::string& id, const Modulus& m, std::vector<std::string> hyps, const std::string& text,
                         Column col, const RateRequest& r, std::uint64_t mi = 0, double slack = -1.0) {
    plan.bundle.add(RateEntry{id, m, std::move(hyps), text});
    Target t;
    t.id = id;
    t.column = col;
    t.m = mi;
    t.k_max = r.k_max;
    t.slack = slack < 0 ? c.slack : slack;
    t.p_max = r.p_max;
    plan.targets.push_back(std::move(t));
    if (col == Column::Tm) plan.tm.insert(mi);
    if (col == Column::BrowderGap) plan.needs_browder = true;
  };
  auto add_meta = [&](const std::string& id, const MetaRate& m, std::vector<std::string> hyps, const std::string& text,
                      Column col, const RateRequest& r, std::vector<std::uint64_t> ks, std::vector<Counter> gallery,
                      double slack) {
    plan.bundle.add(RateEntry{id, m, std::move(hyps), text});
    Target t;
    t.id = id;
    t.column = col;
    t.k_max = r.k_max;
    t.ks = std::move(ks);
    t.gallery = std::move(gallery);
    t.slack = slack;
    t.meta_budget = true;
    plan.targets.push_back(std::move(t));
    if (col == Column::YMeta) plan.needs_browder = true;
  };
  auto asreg_hyps = [&](LambdaVariant v) {
    std::vector<std::string> h{"sigma1", "sigma2"};
    if (v == LambdaVariant::ResForward) h.push_back("theta1");
    if (v == LambdaVariant::ResBackward) h.push_back("theta1*");
    if (v == LambdaVariant::LowerBound) {
      h.insert(h.end(), {"Lambda", "N_Lambda", "theta2"});
    }
    return h;
  };
  auto tm_list = [&](const RateRequest& r) {
    if (r.m.empty()) throw std::invalid_argument(r.id + " needs a nonempty list m");
    return r.m;
  };
  // Build a rate of asymptotic regularity by id (used directly and as the lmeta source).
  auto asreg_by_id = [&](const std::string& id, LambdaVariant v) -> Modulus {
    if (id == "asreg") return rate_asreg(s, alpha, K, v);
    if (id == "linear_asreg") {
      need_preset(Preset::Linear, id);
      return rate_linear_suite(alpha, K).asreg;
    }
    if (id == "offset_asreg") {
      need_preset(Preset::Offset, id);
      return rate_offset_asreg(alpha, K);
    }
    throw std::invalid_argument("'" + id + "' is not a rate of asymptotic regularity");
  };

  for (std::size_t i = 0; i < c.rates.size(); ++i) {
    const RateRequest& r = c.rates[i];
    try {
      if (r.id == "asreg" || r.id == "linear_asreg" || r.id == "offset_asreg") {
        std::vector<std::string> hyps = r.id == "asreg" ? asreg_hyps(r.variant) : std::vector<std::string>{"schedule preset"};
        add_modulus(r.id, asreg_by_id(r.id, r.variant), hyps, "d(x_n,x_{n+1})", Column::Step, r);
      } else if (r.id == "tn_asreg" || r.id == "tm_asreg") {
        const Modulus psi = rate_Tn_asreg(rate_asreg(s, alpha, K, r.variant), s.need(s.w.sigma3, "sigma3 (alpha_n -> 0)"), K);
        auto hyps = asreg_hyps(r.variant);
        hyps.push_back("sigma3");
        if (r.id == "tn_asreg") {
          add_modulus(r.id, psi, hyps, "d(x_n,T_n x_n)", Column::Tn, r);
        } else {
          const Nat big = s.need(s.w.Lambda, "Lambda (lambda_n bounded below)");
          const Nat start = s.need(s.w.N_Lambda, "N_Lambda (lambda_n bounded below)");
          hyps.insert(hyps.end(), {"Lambda", "N_Lambda"});
          for (std::uint64_t m : tm_list(r)) {
            const Nat lm = lambda_m(m);
            plan.bundle.constants["Lambda_" + std::to_string(m)] = to_string(lm);
            add_modulus(r.id + ".m" + std::to_string(m), rate_Tm_asreg(psi, big, start, lm), hyps,
                        "d(x_n,T_" + std::to_string(m) + " x_n)", Column::Tm, r, m);
          }
        }
      } else if (r.id == "linear_tn_asreg" || r.id == "linear_tm_asreg") {
        need_preset(Preset::Linear, r.id);
        const LinearSuite ls = rate_linear_suite(alpha, K);
        plan.bundle.constants["J"] = to_string(ls.J);
        plan.bundle.constants["J0"] = to_string(ls.J0);
        if (r.id == "linear_tn_asreg") {
          add_modulus(r.id, ls.tn, {"schedule preset"}, "d(x_n,T_n x_n)", Column::Tn, r);
        } else {
          for (std::uint64_t m : tm_list(r)) {
            add_modulus(r.id + ".m" + std::to_string(m), ls.tm, {"schedule preset"}, "d(x_n,T_" + std::to_string(m) + " x_n)",
                        Column::Tm, r, m);
          }
        }
      } else if (r.id == "dxy") {
        add_modulus(r.id, rate_dxy(s, alpha, K), {"sigma1", "sigma4", "theta4", "lambda"}, "d(x_n,y_n)",
                    Column::BrowderGap, r, 0, browder_slack);
      } else if (r.id == "tilde_asreg" || r.id == "tilde_tn_asreg" || r.id == "tilde_tm_asreg") {
        const Modulus sigma = rate_dxy(s, alpha, K);
        const Modulus sigma3 = s.need(s.w.sigma3, "sigma3 (alpha_n -> 0)");
        const Modulus theta4 = s.need(s.w.theta4, "theta4 (lambda_n -> lambda)");
        const Nat l = s.need(s.w.l, "l (lambda > 1/(l+1))");
        const Rational lim = s.need(s.w.lambda_limit, "lambda (lambda_n -> lambda)");
        std::map<std::uint64_t, Nat> lstar;
        if (r.id == "tilde_tm_asreg") {
          for (std::uint64_t m : tm_list(r)) {
            const Rational gap = s.lambda.is_exact() ? abs_rat(s.lambda.exact(m) - lim)
                                                     : rational_upper(std::abs(s.lambda(m) - to_double(lim)) + 1e-15);
            lstar[m] = ceil_nat(gap);
            plan.bundle.constants["Lambda*_" + std::to_string(m)] = to_string(lstar[m]);
          }
        }
        const TildeSuite suite = rate_tilde_suite(sigma, sigma3, theta4, l, K, lstar);
        const std::vector<std::string> hyps{"sigma1", "sigma3", "sigma4", "theta4", "lambda", "l"};
        plan.bundle.constants["l"] = to_string(l);
        if (r.id == "tilde_asreg") add_modulus(r.id, suite.tilde, hyps, "d(x_n,T~x_n)", Column::Tilde, r);
        if (r.id == "tilde_tn_asreg") add_modulus(r.id, suite.tn, hyps, "d(x_n,T_n x_n)", Column::Tn, r);
        if (r.id == "tilde_tm_asreg") {
          for (const auto& [m, mod] : suite.tm) {
            add_modulus(r.id + ".m" + std::to_string(m), mod, hyps, "d(x_n,T_" + std::to_string(m) + " x_n)", Column::Tm, r, m);
          }
        }
      } else if (r.id == "gamma") {
        const Space& sp = c.iter.space();
        const double d = sp.dist(c.iter.x0, c.iter.z);
        const bool in_F = d <= c.iter.metric_tol;
        const Modulus g = rate_gamma(s.need(s.w.theta4, "theta4 (lambda_n -> lambda)"), s.need(s.w.l, "l (lambda > 1/(l+1))"),
                                     s.need(s.w.lambda_limit, "lambda (lambda_n -> lambda)"), rational_upper(d), in_F);
        add_modulus(r.id, g, {"theta4", "l", "lambda"}, "(T_n x_0) Cauchy", Column::TnSequence, r);
      } else if (r.id == "lmeta") {
        std::string source = r.source;
        if (source.empty()) {
          source = s.preset == Preset::Linear ? "linear_asreg" : s.preset == Preset::Offset ? "offset_asreg" : "asreg";
        }
        const Modulus phi = asreg_by_id(source, r.variant);
        const std::vector<std::uint64_t> Ls = r.L.empty() ? std::vector<std::uint64_t>{1, 5} : r.L;
        std::vector<std::uint64_t> ks;
        for (std::uint64_t k = 0; k <= r.k_max; ++k) ks.push_back(k);
        for (std::uint64_t L : Ls) {
          if (L == 0) throw std::invalid_argument("L must be positive");
          const Modulus phiL = lmeta_from_asreg(phi, Nat(L));
          add_meta(r.id + ".L" + std::to_string(L), meta_of_modulus(phiL, phiL.label()), {source},
                   "windows [N;N+" + std::to_string(L) + "] of (x_n)", Column::XMeta, r, ks, {Counter::constant(Nat(L))},
                   c.slack);
          plan.targets.back().meta_budget = false;
        }
      } else if (r.id == "browder_meta" || r.id == "hppa_meta" || r.id == "genvam_meta") {
        plan.bundle.constants["M"] = to_string(M);
        const MetaRate omega_star = rate_browder_meta(M, browder_variant());
        const std::string var = s.w.nonincreasing ? "nonincreasing" : "sigma3, h";
        if (r.id == "browder_meta") {
          add_meta(r.id, omega_star, {var}, "metastability of (y_n)", Column::YMeta, r, c.meta.ks, c.meta.gallery,
                   browder_slack);
        } else if (r.id == "hppa_meta") {
          if (alpha != 0) throw std::invalid_argument("hppa_meta needs a constant contraction (alpha = 0)");
          const MetaRate phi_star = rate_hppa_meta(rate_dxy(s, 0, K), omega_star);
          add_meta(r.id, phi_star, {"sigma1", "sigma4", "theta4", "lambda", var}, "metastability of (x_n)", Column::XMeta, r,
                   c.meta.ks, c.meta.gallery, c.slack);
        } else {
          const std::optional<double> diam = diameter(c.iter.space());
          if (!diam) throw std::invalid_argument("genvam_meta needs a bounded subset C");
          if (to_double(M) < *diam) throw std::invalid_argument("M = " + to_string(M) + " is below the diameter of C");
          const MetaRate phi_M = rate_hppa_meta(rate_dxy(s, 0, M), omega_star);
          const MetaRate omega = rate_genvam_meta(phi_M, s.need(s.w.sigma1, "sigma1 (sum alpha_n diverges)"), alpha, M);
          add_meta(r.id, omega, {"sigma1", "sigma4", "theta4", "lambda", var, "bounded C"}, "metastability of (x_n)",
                   Column::XMeta, r, c.meta.ks, c.meta.gallery, c.slack);
        }
      } else {
        std::string list;
        for (const auto& [id, text] : catalog()) list += (list.empty() ? "" : ", ") + id;
        throw ConfigError("rates[" + std::to_string(i) + "].id", "unknown rate '" + r.id + "'; valid: " + list);
      }
    } catch (const std::invalid_argument& e) {
      throw ConfigError("rates[" + std::to_string(i) + "]", r.id + ": " + e.what());
    }
  }
  return plan;
}

// ------------------------------------------------------------ formatting

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string column_name(const Target& t) {
  std::string id = t.id;
  std::replace(id.begin(), id.end(), '.', '_');
  return id + "_bound";
}

json verdict_json(const Verdict& v) {
  json j;
  j["id"] = v.id;
  j["status"] = to_string(v.status);
  j["detail"] = v.detail;
  j["slack"] = v.slack;
  j["samples"] = v.samples;
  if (v.seed) j["seed"] = *v.seed;
  if (v.worst_margin) j["worst_margin"] = *v.worst_margin;
  if (v.max_verified_k) j["max_verified_k"] = *v.max_verified_k;
  if (v.violation) {
    j["violation"] = {{"k", v.violation->k},
                      {"n", v.violation->n},
                      {"measured", v.violation->measured},
                      {"bound", v.violation->bound},
                      {"where", v.violation->where}};
  }
  if (!v.certificates.empty()) j["certificates"] = v.certificates;
  return j;
}

}  // namespace

// ================================================================ public

std::vector<std::pair<std::string, std::string>> rate_catalog() { return catalog(); }

ExperimentConfig parse_config(std::string_view json_text, const std::filesystem::path& base_dir) {
  (void)base_dir;
  json doc;
  try {
    doc = json::parse(json_text.begin(), json_text.end(), nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigError("<document>", e.what());
  }
  const Field root(doc, "");
  if (!doc.is_object()) root.error("the config must be a JSON object");
  root.only({"name", "seed", "space", "family", "contraction", "schedule", "x0", "z", "budget", "tolerances", "record",
             "rates", "metastability", "checks", "partial_is_pass", "output", "comment"});

  ExperimentConfig c(make_iteration(
                         Family(Space::euclidean(1), Objective(objective::Quadratic{Vec{0.0}}), [](std::uint64_t) { return 1.0; }),
                         contraction::Constant{Point::scalar(0.0)}, Schedule{}, Point::scalar(0.0), Point::scalar(0.0)));
  c.name = root.has("name") ? root.at("name").str() : "experiment";
  if (root.has("seed")) c.seed = root.at("seed").u64();

  const Space space = parse_space(root.at("space"));

  // contraction first: the schedule presets depend on its factor
  const Field cf = root.at("contraction");
  const std::string ckind = cf.at("kind").str();
  ContractionSpec f = contraction::Constant{space.origin()};
  if (ckind == "constant") {
    cf.only({"kind", "u"});
    f = contraction::Constant{parse_point(cf.at("u"), space)};
    c.contraction_alpha = 0;
  } else if (ckind == "geodesic_pull") {
    cf.only({"kind", "u", "alpha"});
    c.contraction_alpha = cf.at("alpha").rational();
    if (c.contraction_alpha < 0 || c.contraction_alpha >= 1) cf.at("alpha").error("must lie in [0,1)");
    f = contraction::GeodesicPull{parse_point(cf.at("u"), space), to_double(c.contraction_alpha)};
  } else {
    cf.at("kind").error("unknown contraction '" + ckind + "'; expected constant or geodesic_pull");
  }

  Schedule schedule = parse_schedule(root.at("schedule"), c.contraction_alpha);

  const Field ff = root.at("family");
  const std::string fkind = ff.at("kind").str();
  Family::Kind kind = Objective(objective::Quadratic{});
  if (fkind == "prox") {
    ff.only({"kind", "objective"});
    kind = parse_objective(ff.at("objective"), space);
  } else if (fkind == "resolvent_nonexp") {
    ff.only({"kind", "map"});
    kind = parse_map(ff.at("map"), space);
  } else {
    ff.at("kind").error("unknown family '" + fkind + "'; expected prox or resolvent_nonexp");
  }
  const std::string flabel = fkind == "prox" ? "prox[" + describe(std::get<Objective>(kind)) + "]"
                                             : "resolvent[" + describe(std::get<NonexpansiveMap>(kind)) + "]";
  const Sequence lam = schedule.lambda;
  Family family(space, kind, [lam](std::uint64_t n) { return lam(n); }, flabel);

  c.iter = make_iteration(std::move(family), f, std::move(schedule), parse_point(root.at("x0"), space),
                          parse_point(root.at("z"), space));

  if (const auto b = root.get("budget")) {
    b->only({"iterations", "max_iterations", "ceiling", "max_steps"});
    if (b->has("max_iterations")) c.max_iterations = b->at("max_iterations").u64();
    if (b->has("iterations")) {
      const Field it = b->at("iterations");
      if (it.raw().is_string() && it.str() == "auto") {
        c.iterations.reset();
      } else {
        c.iterations = it.u64();
        c.max_iterations = std::max(c.max_iterations, *c.iterations);
      }
    }
    if (b->has("ceiling")) c.ceiling = b->at("ceiling").nat();
    if (b->has("max_steps")) c.max_steps = b->at("max_steps").u64();
  }
  c.iter.budget = c.max_iterations;

  if (const auto t = root.get("tolerances")) {
    t->only({"metric", "eps_fp", "slack"});
    if (t->has("metric")) c.iter.metric_tol = t->at("metric").positive();
    if (t->has("eps_fp")) c.iter.eps_fp = t->at("eps_fp").positive();
    if (t->has("slack")) c.slack = t->at("slack").num();
  }
  c.iter.record_browder = false;
  if (const auto r = root.get("record")) {
    r->only({"tm", "tilde", "browder"});
    if (r->has("tm")) c.iter.tm_indices = r->at("tm").u64_list();
    if (r->has("tilde")) c.iter.record_tilde = r->at("tilde").boolean();
    if (r->has("browder")) c.iter.record_browder = r->at("browder").boolean();
  }

  if (const auto rs = root.get("rates")) {
    for (const Field& rf : rs->items()) {
      rf.only({"id", "k_max", "m", "L", "source", "variant", "p_max"});
      RateRequest r;
      r.id = rf.at("id").str();
      if (rf.has("k_max")) r.k_max = rf.at("k_max").u64();
      if (rf.has("m")) r.m = rf.at("m").u64_list();
      if (rf.has("L")) r.L = rf.at("L").u64_list();
      if (rf.has("source")) r.source = rf.at("source").str();
      if (rf.has("p_max")) r.p_max = rf.at("p_max").u64();
      if (rf.has("variant")) {
        const std::string v = rf.at("variant").str();
        if (v == "res_forward") {
          r.variant = LambdaVariant::ResForward;
        } else if (v == "res_backward") {
          r.variant = LambdaVariant::ResBackward;
        } else if (v == "lower_bound") {
          r.variant = LambdaVariant::LowerBound;
        } else {
          rf.at("variant").error("expected res_forward, res_backward or lower_bound");
        }
      }
      c.rates.push_back(std::move(r));
    }
  }

  c.meta.gallery = default_gallery();
  if (const auto m = root.get("metastability")) {
    m->only({"k", "g", "M", "ceiling", "max_steps"});
    if (m->has("k")) c.meta.ks = m->at("k").u64_list();
    if (m->has("M")) {
      c.meta.M = m->at("M").nat();
      if (*c.meta.M == 0) m->at("M").error("must be positive");
    }
    if (m->has("ceiling")) c.meta.ceiling = m->at("ceiling").nat();
    if (m->has("max_steps")) c.meta.max_steps = m->at("max_steps").u64();
    if (m->has("g")) {
      c.meta.gallery.clear();
      for (const Field& g : m->at("g").items()) {
        if (g.raw().is_string()) {
          if (g.str() != "identity") g.error("expected \"identity\", a constant or {slope, offset}");
          c.meta.gallery.push_back(Counter::identity());
        } else if (g.raw().is_object()) {
          g.only({"slope", "offset"});
          c.meta.gallery.push_back(Counter::affine(g.at("slope").nat(), g.has("offset") ? g.at("offset").nat() : Nat(0)));
        } else {
          c.meta.gallery.push_back(Counter::constant(g.nat()));
        }
      }
    }
  }

  if (const auto ch = root.get("checks")) {
    ch->only({"invariants", "schedule", "axioms", "res"});
    if (ch->has("invariants")) c.check_invariants = ch->at("invariants").boolean();
    if (ch->has("schedule")) c.check_schedule = ch->at("schedule").boolean();
    if (const auto a = ch->get("axioms")) {
      if (a->raw().is_boolean()) {
        if (a->boolean()) c.axioms = AxiomOptions{};
      } else {
        a->only({"samples", "tol"});
        AxiomOptions o;
        if (a->has("samples")) o.samples = a->at("samples").u64();
        if (a->has("tol")) o.tol = a->at("tol").positive();
        c.axioms = o;
      }
    }
    if (const auto r = ch->get("res")) {
      if (r->raw().is_boolean()) {
        if (r->boolean()) c.res = ResOptions{};
      } else {
        r->only({"points", "max_index", "tol"});
        ResOptions o;
        if (r->has("points")) o.points = r->at("points").u64();
        if (r->has("max_index")) o.max_index = r->at("max_index").u64();
        if (r->has("tol")) o.tol = r->at("tol").positive();
        c.res = o;
      }
    }
  }
  if (root.has("partial_is_pass")) c.partial_is_pass = root.at("partial_is_pass").boolean();
  c.out_dir = std::filesystem::path("out") / c.name;
  if (const auto o = root.get("output")) {
    o->only({"dir"});
    if (o->has("dir")) c.out_dir = o->at("dir").str();
  }

  try {
    c.iter.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("z", e.what());
  }
  if (c.iter.alpha() >= 1.0) throw ConfigError("contraction.alpha", "must be below 1");
  // Surface missing witnesses at load time.
  (void)make_plan(c, compute_Kz(c.iter));
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("<file>", "cannot open " + file.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), file.parent_path());
}

RateBundle build_rates(const ExperimentConfig& c, const BoundConstant& K) { return make_plan(c, K).bundle; }

int exit_code(const std::vector<Verdict>& verdicts, bool partial_is_pass) {
  Status s = Status::Pass;
  for (const Verdict& v : verdicts) s = combine(s, v.status);
  if (s == Status::Fail) return 1;
  if (s == Status::Partial) return partial_is_pass ? 0 : 2;
  return 0;
}

std::vector<Verdict> run_structure_checks(const ExperimentConfig& c) {
  std::vector<Verdict> out;
  const Space& space = c.iter.space();
  const AxiomOptions ax = c.axioms.value_or(AxiomOptions{});
  Verdict a = check_axioms(space, ax.samples, ax.tol, c.seed);
  a.id = "axioms[" + space.describe() + "]";
  out.push_back(std::move(a));

  const ResOptions ro = c.res.value_or(ResOptions{});
  std::mt19937_64 rng(c.seed);
  std::vector<Point> points;
  for (std::uint64_t i = 0; i < ro.points; ++i) points.push_back(space.sample(rng));
  std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs;
  std::vector<std::uint64_t> indices;
  for (std::uint64_t n = 0; n <= ro.max_index; ++n) {
    indices.push_back(n);
    for (std::uint64_t m = 0; m <= ro.max_index; ++m) pairs.emplace_back(n, m);
  }
  Verdict res = check_res(c.iter.family, pairs, points, ro.tol);
  res.id = "res[" + c.iter.family.label() + "]";
  res.seed = c.seed;
  out.push_back(std::move(res));
  Verdict ne = check_nonexpansive(c.iter.family, indices, points, ro.tol);
  ne.id = "nonexpansive[" + c.iter.family.label() + "]";
  ne.seed = c.seed;
  out.push_back(std::move(ne));

  Verdict f;
  f.id = "contraction";
  f.seed = c.seed;
  f.slack = ro.tol;
  const double alpha = c.iter.alpha();
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    const double lhs = space.dist(contraction_eval(space, c.iter.f, points[i]), contraction_eval(space, c.iter.f, points[i + 1]));
    const double rhs = alpha * space.dist(points[i], points[i + 1]);
    ++f.samples;
    f.note_margin(rhs - lhs);
    if (lhs > rhs + ro.tol) {
      f.fail(Violation{0, i, lhs, rhs, "d(f x, f y) <= alpha d(x, y)"}, "contraction factor exceeded at sample " + std::to_string(i));
      break;
    }
  }
  out.push_back(std::move(f));
  return out;
}

ExperimentResult run_experiment(const ExperimentConfig& c) {
  ExperimentResult r;
  r.name = c.name;
  r.K = compute_Kz(c.iter);
  Plan plan = make_plan(c, r.K);
  r.bundle = plan.bundle;
  const EvalBudget budget(c.ceiling, c.max_steps);
  const EvalBudget meta_budget(c.meta.ceiling, c.meta.max_steps);

  // Iteration count: explicit, or just enough rows for every modulus target.
  std::uint64_t n_max = 0;
  bool capped = false;
  if (c.iterations) {
    n_max = *c.iterations;
  } else {
    for (const Target& t : plan.targets) {
      if (t.column == Column::TnSequence) continue;
      const RateEntry& e = plan.bundle.at(t.id);
      std::optional<Nat> need;
      if (!e.is_meta()) {
        const EvalOutcome o = e.modulus().evaluate(Nat(t.k_max), budget);
        if (o.has_value()) need = o.value() + 2;
      } else if (!t.meta_budget) {
        const EvalOutcome o = e.meta().evaluate(Nat(t.k_max), t.gallery.front(), budget);
        if (o.has_value()) need = o.value() + t.gallery.front()(o.value()) + 2;
      }
      if (!need) continue;
      if (*need > Nat(c.max_iterations)) {
        capped = true;
        need = Nat(c.max_iterations);
      }
      n_max = std::max(n_max, static_cast<std::uint64_t>(*need));
    }
    if (n_max == 0) n_max = 1000;
  }
  if (n_max > c.max_iterations) n_max = c.max_iterations;

  IterationConfig ic = c.iter;
  ic.budget = std::max<std::uint64_t>(ic.budget, n_max);
  ic.record_browder = ic.record_browder || plan.needs_browder;
  std::set<std::uint64_t> tm(ic.tm_indices.begin(), ic.tm_indices.end());
  tm.insert(plan.tm.begin(), plan.tm.end());
  ic.tm_indices.assign(tm.begin(), tm.end());
  r.trace = run_genvam(ic, n_max);
  const Trace& t = r.trace;
  const Space& space = ic.space();

  if (c.check_invariants) r.verdicts.push_back(check_trace_invariants(ic, t, r.K));
  if (c.check_schedule) {
    for (Verdict& v : validate_schedule(ic.schedule)) r.verdicts.push_back(std::move(v));
  }
  if (c.axioms || c.res) {
    for (Verdict& v : run_structure_checks(c)) r.verdicts.push_back(std::move(v));
  }

  for (const Target& tg : plan.targets) {
    const RateEntry& e = plan.bundle.at(tg.id);
    Verdict v;
    switch (tg.column) {
      case Column::Step:
        v = verify_conv_rate(t.step, e.modulus(), tg.k_max, tg.slack, budget, tg.id);
        break;
      case Column::Tn:
        v = verify_conv_rate(t.tn, e.modulus(), tg.k_max, tg.slack, budget, tg.id);
        break;
      case Column::Tm:
        v = verify_conv_rate(t.tm.at(tg.m), e.modulus(), tg.k_max, tg.slack, budget, tg.id);
        break;
      case Column::Tilde:
        if (t.tilde.empty()) {
          v.id = tg.id;
          v.fail(Violation{}, "d(x_n,T~x_n) was not recorded (no limit lambda)");
        } else {
          v = verify_conv_rate(t.tilde, e.modulus(), tg.k_max, tg.slack, budget, tg.id);
        }
        break;
      case Column::BrowderGap:
        v = verify_conv_rate(t.browder_gap, e.modulus(), tg.k_max, tg.slack, budget, tg.id);
        break;
      case Column::TnSequence: {
        const EvalOutcome o = e.modulus().evaluate(Nat(tg.k_max), budget);
        std::uint64_t len = c.max_iterations;
        if (o.has_value() && o.value() + tg.p_max + 2 < Nat(len)) len = static_cast<std::uint64_t>(o.value()) + tg.p_max + 2;
        std::vector<Point> seq;
        seq.reserve(len);
        for (std::uint64_t n = 0; n < len; ++n) seq.push_back(family_eval(ic.family, n, ic.x0));
        v = verify_cauchy_modulus(seq, [&](const Point& a, const Point& b) { return space.dist(a, b); }, e.modulus(),
                                  tg.k_max, tg.p_max, tg.slack, budget, tg.id);
        break;
      }
      case Column::XMeta:
      case Column::YMeta: {
        const std::vector<Point>& seq = tg.column == Column::XMeta ? t.iterates : t.browder;
        std::vector<std::uint64_t> ks = tg.ks;
        if (ks.empty()) {
          for (std::uint64_t k = 0; k <= tg.k_max; ++k) ks.push_back(k);
        }
        v = verify_metastability(seq, space, e.meta(), ks, tg.gallery, tg.slack, tg.meta_budget ? meta_budget : budget, tg.id);
        break;
      }
    }
    if (capped && v.status == Status::Partial) v.detail += "; iterations capped at " + std::to_string(c.max_iterations);
    r.verdicts.push_back(std::move(v));
  }

  // ---- trace.csv
  std::ostringstream tc;
  tc << "# genvam trace v1; config " << t.config_hash << "; rows " << t.rows() << "\n";
  tc << "n,alpha,lambda,step,tn";
  for (const auto& [m, col] : t.tm) tc << ",tm_" << m;
  if (!t.tilde.empty()) tc << ",tildeT";
  if (!t.browder_gap.empty()) tc << ",browder_gap";
  std::vector<std::pair<const Target*, std::vector<std::pair<std::uint64_t, std::uint64_t>>>> envelopes;
  for (const Target& tg : plan.targets) {
    if (tg.column == Column::XMeta || tg.column == Column::YMeta || tg.column == Column::TnSequence) continue;
    tc << "," << column_name(tg);
    // (R(k), k) pairs; row n is bounded by 1/(k+1) for the largest k with R(k) <= n
    std::vector<std::pair<std::uint64_t, std::uint64_t>> env;
    for (std::uint64_t k = 0; k <= tg.k_max; ++k) {
      const EvalOutcome o = plan.bundle.at(tg.id).modulus().evaluate(Nat(k), budget);
      if (o.has_value() && fits_u64(o.value())) env.emplace_back(static_cast<std::uint64_t>(o.value()), k);
    }
    envelopes.emplace_back(&tg, std::move(env));
  }
  tc << "\n";
  for (std::size_t n = 0; n < t.rows(); ++n) {
    tc << n << ',' << fmt(t.alpha[n]) << ',' << fmt(t.lambda[n]) << ',' << fmt(t.step[n]) << ',' << fmt(t.tn[n]);
    for (const auto& [m, col] : t.tm) tc << ',' << fmt(col[n]);
    if (!t.tilde.empty()) tc << ',' << fmt(t.tilde[n]);
    if (!t.browder_gap.empty()) tc << ',' << fmt(t.browder_gap[n]);
    for (const auto& [tg, env] : envelopes) {
      std::optional<std::uint64_t> best;
      for (const auto& [R, k] : env) {
        if (R <= n && (!best || k > *best)) best = k;
      }
      tc << ',';
      if (best) tc << fmt(1.0 / static_cast<double>(*best + 1) + tg->slack);
    }
    tc << "\n";
  }
  r.trace_csv = tc.str();

  // ---- bounds.csv
  std::ostringstream bc;
  bc << "# genvam bounds v1; config " << t.config_hash << "\n";
  bc << "rate,k,g,value,outcome\n";
  for (const Target& tg : plan.targets) {
    const RateEntry& e = plan.bundle.at(tg.id);
    if (!e.is_meta()) {
      for (std::uint64_t k = 0; k <= tg.k_max; ++k) {
        const EvalOutcome o = e.modulus().evaluate(Nat(k), budget);
        bc << tg.id << ',' << k << ",," << (o.has_value() ? to_string(o.value()) : "") << ','
           << (o.has_value() ? "value" : "budget_exceeded") << "\n";
      }
      continue;
    }
    std::vector<std::uint64_t> ks = tg.ks;
    if (ks.empty()) {
      for (std::uint64_t k = 0; k <= tg.k_max; ++k) ks.push_back(k);
    }
    for (std::uint64_t k : ks) {
      for (const Counter& g : tg.gallery) {
        const EvalOutcome o = e.meta().evaluate(Nat(k), g, tg.meta_budget ? meta_budget : budget);
        bc << tg.id << ',' << k << ',' << g.label() << ',';
        if (o.has_value()) {
          bc << to_string(o.value()) << ",value\n";
        } else {
          bc << ",budget_exceeded(" << o.report().reason << ";depth=" << o.report().depth << ")\n";
        }
      }
    }
  }
  r.bounds_csv = bc.str();

  r.exit_code = exit_code(r.verdicts, c.partial_is_pass);

  // ---- reports
  std::ostringstream rt;
  rt << "experiment " << c.name << "\n";
  rt << "config hash " << t.config_hash << "\n";
  rt << "space       " << space.describe() << "\n";
  rt << "family      " << ic.family.label() << "\n";
  rt << "schedule    " << ic.schedule.name << "  alpha_n=" << ic.schedule.alpha.formula
     << "  lambda_n=" << ic.schedule.lambda.formula << "\n";
  rt << "contraction alpha=" << to_string(c.contraction_alpha) << " anchor " << anchor(ic.f).str() << "\n";
  rt << "K           " << r.K.describe() << "\n";
  rt << "iterations  " << t.rows() << (capped ? " (capped)" : "") << "\n";
  for (const auto& [key, value] : plan.bundle.constants) rt << "constant    " << key << " = " << value << "\n";
  rt << "\nrates\n";
  for (const auto& [id, e] : plan.bundle.rates) {
    rt << "  " << id << ": " << (e.is_meta() ? e.meta().label() : e.modulus().label()) << " for " << e.describe;
    if (!e.hypotheses.empty()) {
      rt << "  [uses";
      for (const std::string& h : e.hypotheses) rt << ' ' << h;
      rt << ']';
    }
    rt << "\n";
  }
  rt << "\nverdicts\n" << render_verdicts(r.verdicts);
  rt << "\nexit code " << r.exit_code << "\n";
  r.report_text = rt.str();

  json rj;
  rj["experiment"] = c.name;
  rj["config_hash"] = t.config_hash;
  rj["space"] = space.describe();
  rj["family"] = ic.family.label();
  rj["schedule"] = ic.schedule.name;
  rj["contraction_alpha"] = to_string(c.contraction_alpha);
  rj["K"] = to_string(r.K.K);
  rj["iterations"] = t.rows();
  rj["constants"] = plan.bundle.constants;
  json rates = json::array();
  for (const auto& [id, e] : plan.bundle.rates) {
    rates.push_back({{"id", id},
                     {"label", e.is_meta() ? e.meta().label() : e.modulus().label()},
                     {"checks", e.describe},
                     {"hypotheses", e.hypotheses}});
  }
  rj["rates"] = rates;
  rj["verdicts"] = json::parse(verdicts_json(r.verdicts));
  rj["exit_code"] = r.exit_code;
  r.report_json = rj.dump(2) + "\n";
  return r;
}

std::string render_verdicts(const std::vector<Verdict>& verdicts) {
  std::ostringstream o;
  std::size_t pass = 0, fail = 0, partial = 0;
  for (const Verdict& v : verdicts) {
    o << "  " << to_string(v.status);
    for (std::size_t i = to_string(v.status).size(); i < 8; ++i) o << ' ';
    o << v.id;
    if (!v.detail.empty()) o << "  " << v.detail;
    if (v.worst_margin) o << "  (worst margin " << fmt(*v.worst_margin) << ")";
    if (v.max_verified_k) o << "  [k <= " << *v.max_verified_k << " verified]";
    o << "\n";
    if (v.violation) {
      o << "          first violation k=" << v.violation->k << " n=" << v.violation->n << " measured "
        << fmt(v.violation->measured) << " bound " << fmt(v.violation->bound) << " at " << v.violation->where << "\n";
    }
    for (const std::string& cert : v.certificates) o << "          " << cert << "\n";
    (v.status == Status::Pass ? pass : v.status == Status::Fail ? fail : partial)++;
  }
  o << "  " << pass << " pass, " << fail << " fail, " << partial << " partial\n";
  return o.str();
}

std::string verdicts_json(const std::vector<Verdict>& verdicts) {
  json arr = json::array();
  for (const Verdict& v : verdicts) arr.push_back(verdict_json(v));
  return arr.dump(2);
}

void write_artifacts(const ExperimentResult& r, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto put = [&](const char* file, const std::string& text) {
    std::ofstream out(dir / file, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + (dir / file).string());
    out << text;
  };
  put("trace.csv", r.trace_csv);
  put("bounds.csv", r.bounds_csv);
  put("report.txt", r.report_text);
  put("report.json", r.report_json);
}

}  // namespace genvam
