#include "genvam/operators.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace genvam {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_euclidean(const Space& s, const char* what) {
  if (s.is_tree()) throw std::invalid_argument(std::string(what) + " is defined on Euclidean spaces only");
}

void require_positive(double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("resolvent parameter must be positive");
}

// Root of (y - b)^3 + (y - x) / lambda = 0; the left side is increasing in y.
double quartic_prox_1d(double x, double b, double lambda) {
  auto g = [&](double y) { return (y - b) * (y - b) * (y - b) + (y - x) / lambda; };
  double lo = std::min(x, b);
  double hi = std::max(x, b);
  if (g(lo) > 0.0 || g(hi) < 0.0) {
    // Cannot happen for an increasing g with g(min) <= 0 <= g(max); kept as a guard.
    throw std::runtime_error("quartic prox: root not bracketed");
  }
  for (int it = 0; it < 200 && hi - lo > kProxTol * (1.0 + std::abs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (g(mid) > 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

std::string describe(const Objective& f) {
  return std::visit(Overloaded{[](const objective::Quadratic&) { return std::string("quadratic"); },
                               [](const objective::Norm1& o) { return "norm1*" + std::to_string(o.scale); },
                               [](const objective::IndicatorBall&) { return std::string("indicator_ball"); },
                               [](const objective::IndicatorBox&) { return std::string("indicator_box"); },
                               [](const objective::DistanceSquared&) { return std::string("distance_squared"); },
                               [](const objective::Quartic&) { return std::string("quartic"); }},
                    f);
}

Point prox_eval(const Space& space, const Objective& f, double lambda, const Point& x) {
  require_positive(lambda);
  space.validate(x);
  return std::visit(
      Overloaded{
          [&](const objective::Quadratic& q) {
            require_euclidean(space, "quadratic objective");
            if (q.b.size() != space.dim()) throw std::invalid_argument("quadratic objective: b has wrong dimension");
            Vec out(x.vec());
            for (std::size_t i = 0; i < out.size(); ++i) out[i] = (out[i] + lambda * q.b[i]) / (1.0 + lambda);
            return Point(std::move(out));
          },
          [&](const objective::Norm1& o) {
            require_euclidean(space, "l1 objective");
            const double t = lambda * o.scale;
            Vec out(x.vec());
            for (double& c : out) c = std::copysign(std::max(std::abs(c) - t, 0.0), c);
            return Point(std::move(out));
          },
          [&](const objective::IndicatorBall& b) { return space.project_ball(x, b.center, b.radius); },
          [&](const objective::IndicatorBox& b) {
            require_euclidean(space, "box indicator");
            Vec out(x.vec());
            for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::clamp(out[i], b.lo.at(i), b.hi.at(i));
            return Point(std::move(out));
          },
          [&](const objective::DistanceSquared& d) {
            space.validate(d.p);
            return space.combine(x, d.p, lambda / (1.0 + lambda));
          },
          [&](const objective::Quartic& q) {
            require_euclidean(space, "quartic objective");
            Vec out(x.vec());
            for (std::size_t i = 0; i < out.size(); ++i) out[i] = quartic_prox_1d(out[i], q.b.at(i), lambda);
            return Point(std::move(out));
          },
      },
      f);
}

std::string describe(const NonexpansiveMap& t) {
  return std::visit(Overloaded{[](const nonexp::Identity&) { return std::string("identity"); },
                               [](const nonexp::Constant&) { return std::string("constant"); },
                               [](const nonexp::Shrink& s) { return "shrink(" + std::to_string(s.amount) + ")"; },
                               [](const nonexp::Rotation2D& r) { return "rotation(" + std::to_string(r.angle) + ")"; },
                               [](const nonexp::Projection&) { return std::string("projection"); }},
                    t);
}

Point apply_map(const Space& space, const NonexpansiveMap& t, const Point& x) {
  return std::visit(Overloaded{
                        [&](const nonexp::Identity&) { return x; },
                        [&](const nonexp::Constant& c) { return c.p; },
                        [&](const nonexp::Shrink& s) {
                          const Point o = space.origin();
                          const double d = space.dist(x, o);
                          if (d <= s.amount) return o;
                          return space.combine(o, x, (d - s.amount) / d);
                        },
                        [&](const nonexp::Rotation2D& r) {
                          require_euclidean(space, "rotation");
                          if (space.dim() < 2) throw std::invalid_argument("rotation needs dim >= 2");
                          Vec v(x.vec());
                          const double c = std::cos(r.angle);
                          const double s = std::sin(r.angle);
                          const double a = v[0];
                          const double b = v[1];
                          v[0] = c * a - s * b;
                          v[1] = s * a + c * b;
                          return Point(std::move(v));
                        },
                        [&](const nonexp::Projection& p) { return space.project_ball(x, p.center, p.radius); },
                    },
                    t);
}

Point resolvent_nonexp_eval(const Space& space, const NonexpansiveMap& t, double lambda, const Point& x,
                            double eps_fp) {
  require_positive(lambda);
  space.validate(x);
  const double q = lambda / (1.0 + lambda);
  Point z = x;
  Point next = space.combine(x, apply_map(space, t, z), q);
  const double d0 = space.dist(z, next);
  if (d0 == 0.0) return next;
  // a priori: d(z_i, fixed point) <= q^i d0 / (1 - q)
  const double bound = std::ceil(std::log(eps_fp * (1.0 - q) / d0) / std::log(q));
  const long iterations = std::max(1L, static_cast<long>(std::min(bound, 1e7)));
  double prev_step = d0;
  for (long i = 0; i < iterations; ++i) {
    z = std::move(next);
    next = space.combine(x, apply_map(space, t, z), q);
    const double step = space.dist(z, next);
    if (prev_step > 1e-13 && step > prev_step * q * (1.0 + 1e-9) + 1e-15) {
      std::ostringstream why;
      why << "resolvent iteration is not contracting at step " << i << " (" << step << " > " << q << " * "
          << prev_step << ")";
      throw std::runtime_error(why.str());
    }
    prev_step = step;
    if (step == 0.0) break;
  }
  return next;
}

Family::Family(Space space, Kind kind, LambdaFn lambda, std::string label)
    : space_(std::move(space)), kind_(std::move(kind)), lambda_(std::move(lambda)), label_(std::move(label)) {
  if (!lambda_) throw std::invalid_argument("family needs a lambda sequence");
}

Point Family::resolvent(double lambda, const Point& x) const {
  return std::visit(Overloaded{[&](const Objective& f) { return prox_eval(space_, f, lambda, x); },
                               [&](const NonexpansiveMap& t) { return resolvent_nonexp_eval(space_, t, lambda, x); }},
                    kind_);
}

Point family_eval(const Family& family, std::uint64_t n, const Point& x) {
  return family.resolvent(family.lambda(n), x);
}

Point tilde_T_eval(const Family& family, double lambda_limit, const Point& x) {
  if (!(lambda_limit > 0.0)) throw std::invalid_argument("limit parameter must be positive");
  return family.resolvent(lambda_limit, x);
}

Verdict check_res(const Family& family, const std::vector<std::pair<std::uint64_t, std::uint64_t>>& pairs,
                  const std::vector<Point>& points, double tol) {
  Verdict v;
  v.id = "res";
  v.slack = tol;
  v.samples = points.size() * pairs.size();
  if (points.empty() || pairs.empty()) {
    v.partial("no samples");
    return v;
  }
  const Space& s = family.space();
  for (std::size_t pi = 0; pi < points.size(); ++pi) {
    const Point& y = points[pi];
    for (const auto& [n, m] : pairs) {
      const double ln = family.lambda(n);
      const double lm = family.lambda(m);
      const Point tn = family.resolvent(ln, y);
      const Point tm = family.resolvent(lm, y);
      const double lhs = s.dist(tn, tm);
      const double rhs = std::abs(1.0 - lm / ln) * s.dist(y, tn);
      v.note_margin(rhs - lhs);
      if (lhs > rhs + tol) {
        std::ostringstream why;
        why.precision(17);
        why << "Res(" << n << "," << m << ") fails at point " << pi << " " << y.str() << ": " << lhs << " > " << rhs;
        v.fail(Violation{m, n, lhs, rhs, "point " + std::to_string(pi)}, why.str());
        return v;
      }
    }
  }
  v.detail = std::to_string(points.size()) + " points x " + std::to_string(pairs.size()) + " index pairs";
  return v;
}

Verdict check_nonexpansive(const Family& family, const std::vector<std::uint64_t>& indices,
                           const std::vector<Point>& points, double tol) {
  Verdict v;
  v.id = "nonexpansive";
  v.slack = tol;
  const Space& s = family.space();
  for (std::uint64_t n : indices) {
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
      const double lhs = s.dist(family_eval(family, n, points[i]), family_eval(family, n, points[i + 1]));
      const double rhs = s.dist(points[i], points[i + 1]);
      v.note_margin(rhs - lhs);
      ++v.samples;
      if (lhs > rhs + tol) {
        v.fail(Violation{0, n, lhs, rhs, "pair " + std::to_string(i)}, "T_n expands a sampled pair");
        return v;
      }
    }
  }
  return v;
}

double contraction_factor(const ContractionSpec& f) {
  return std::visit(Overloaded{[](const contraction::Constant&) { return 0.0; },
                               [](const contraction::GeodesicPull& g) { return g.alpha; }},
                    f);
}

const Point& anchor(const ContractionSpec& f) {
  return std::visit(Overloaded{[](const contraction::Constant& c) -> const Point& { return c.u; },
                               [](const contraction::GeodesicPull& g) -> const Point& { return g.u; }},
                    f);
}

Point contraction_eval(const Space& space, const ContractionSpec& f, const Point& x) {
  return std::visit(Overloaded{[&](const contraction::Constant& c) { return c.u; },
                               [&](const contraction::GeodesicPull& g) { return space.combine(g.u, x, g.alpha); }},
                    f);
}

}  // namespace genvam
