#include "genvam/space.hpp"

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

}  // namespace

std::string Point::str() const {
  std::ostringstream out;
  out.precision(17);
  if (is_tree()) {
    out << "(" << node().branch << ", " << node().t << ")";
  } else {
    out << "(";
    for (std::size_t i = 0; i < vec().size(); ++i) out << (i ? ", " : "") << vec()[i];
    out << ")";
  }
  return out.str();
}

Space::Space(bool tree, std::size_t dim, std::size_t branches, Subset c)
    : tree_(tree), dim_(dim), branches_(branches), subset_(std::move(c)) {}

Space Space::euclidean(std::size_t dim, Subset c) {
  if (dim == 0) throw std::invalid_argument("euclidean space needs dim >= 1");
  if (auto* box = std::get_if<subset::Box>(&c)) {
    if (box->lo.size() != dim || box->hi.size() != dim) throw std::invalid_argument("box dimension mismatch");
    for (std::size_t i = 0; i < dim; ++i) {
      if (box->lo[i] > box->hi[i]) throw std::invalid_argument("box has lo > hi");
    }
  }
  Space s(false, dim, 0, std::move(c));
  if (auto* ball = std::get_if<subset::Ball>(&s.subset_)) s.validate(ball->center);
  return s;
}

Space Space::tripod(std::size_t branches, Subset c) {
  if (branches < 2) throw std::invalid_argument("tree space needs at least 2 branches");
  if (std::holds_alternative<subset::Box>(c)) throw std::invalid_argument("box subsets are Euclidean only");
  Space s(true, 0, branches, std::move(c));
  if (auto* ball = std::get_if<subset::Ball>(&s.subset_)) s.validate(ball->center);
  return s;
}

std::string Space::describe() const {
  std::string base = tree_ ? "tripod(" + std::to_string(branches_) + ")" : "R^" + std::to_string(dim_);
  return std::visit(Overloaded{[&](const subset::Whole&) { return base; },
                               [&](const subset::Ball& b) {
                                 std::ostringstream o;
                                 o << base << " ball " << b.center.str() << " r=" << b.radius;
                                 return o.str();
                               },
                               [&](const subset::Box&) { return base + " box"; }},
                    subset_);
}

void Space::validate(const Point& p) const {
  if (tree_) {
    if (!p.is_tree()) throw std::invalid_argument("expected a tree point, got " + p.str());
    if (p.node().branch >= branches_) throw std::invalid_argument("branch index out of range: " + p.str());
    if (!(p.node().t >= 0.0)) throw std::invalid_argument("tree coordinate must be >= 0: " + p.str());
  } else {
    if (p.is_tree()) throw std::invalid_argument("expected a Euclidean point, got " + p.str());
    if (p.vec().size() != dim_) {
      throw std::invalid_argument("dimension mismatch: expected " + std::to_string(dim_) + ", got " + p.str());
    }
  }
}

double Space::dist(const Point& p, const Point& q) const {
  if (tree_) {
    const TreePoint& a = p.node();
    const TreePoint& b = q.node();
    if (a.branch == b.branch) return std::abs(a.t - b.t);
    return a.t + b.t;
  }
  const Vec& a = p.vec();
  const Vec& b = q.vec();
  if (a.size() != b.size()) throw std::invalid_argument("dimension mismatch in dist");
  if (a.size() == 1) return std::abs(a[0] - b[0]);
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

Point Space::combine(const Point& x, const Point& y, double lambda) const {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw std::invalid_argument("combine: lambda outside [0,1]");
  if (lambda == 0.0) return x;
  if (lambda == 1.0) return y;
  if (tree_) {
    const TreePoint& a = x.node();
    const TreePoint& b = y.node();
    if (a.branch == b.branch) return Point::tree(a.branch, (1.0 - lambda) * a.t + lambda * b.t);
    const double s = lambda * (a.t + b.t);
    if (s <= a.t) return Point::tree(a.branch, a.t - s);
    return Point::tree(b.branch, s - a.t);
  }
  const Vec& a = x.vec();
  const Vec& b = y.vec();
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = (1.0 - lambda) * a[i] + lambda * b[i];
  return Point(std::move(out));
}

bool Space::equal(const Point& p, const Point& q, double tol) const { return dist(p, q) <= tol; }

bool Space::contains(const Point& p, double tol) const {
  return std::visit(Overloaded{[&](const subset::Whole&) { return true; },
                               [&](const subset::Ball& b) { return dist(p, b.center) <= b.radius + tol; },
                               [&](const subset::Box& b) {
                                 const Vec& v = p.vec();
                                 for (std::size_t i = 0; i < v.size(); ++i) {
                                   if (v[i] < b.lo[i] - tol || v[i] > b.hi[i] + tol) return false;
                                 }
                                 return true;
                               }},
                    subset_);
}

Point Space::project_ball(const Point& p, const Point& center, double radius) const {
  const double d = dist(p, center);
  if (d <= radius) return p;
  return combine(center, p, radius / d);
}

Point Space::project(const Point& p) const {
  return std::visit(Overloaded{[&](const subset::Whole&) { return p; },
                               [&](const subset::Ball& b) { return project_ball(p, b.center, b.radius); },
                               [&](const subset::Box& b) {
                                 Vec v = p.vec();
                                 for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::clamp(v[i], b.lo[i], b.hi[i]);
                                 return Point(std::move(v));
                               }},
                    subset_);
}

Point Space::origin() const {
  if (tree_) return Point::tree(0, 0.0);
  return Point(Vec(dim_, 0.0));
}

Point Space::sample(std::mt19937_64& rng, double scale) const {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  if (tree_) {
    std::uniform_int_distribution<std::size_t> leg(0, branches_ - 1);
    if (auto* b = std::get_if<subset::Ball>(&subset_)) {
      // Pick a point on a random leg within reach of the center, then project.
      Point raw = Point::tree(leg(rng), unit(rng) * (b->radius + b->center.node().t));
      return project(raw);
    }
    return Point::tree(leg(rng), unit(rng) * scale);
  }
  Vec v(dim_);
  if (auto* box = std::get_if<subset::Box>(&subset_)) {
    for (std::size_t i = 0; i < dim_; ++i) v[i] = box->lo[i] + unit(rng) * (box->hi[i] - box->lo[i]);
    return Point(std::move(v));
  }
  if (auto* ball = std::get_if<subset::Ball>(&subset_)) {
    // Rejection from the bounding cube.
    for (;;) {
      for (std::size_t i = 0; i < dim_; ++i) v[i] = ball->center.vec()[i] + (2.0 * unit(rng) - 1.0) * ball->radius;
      Point p(v);
      if (contains(p)) return p;
    }
  }
  for (std::size_t i = 0; i < dim_; ++i) v[i] = (2.0 * unit(rng) - 1.0) * scale;
  return Point(std::move(v));
}

}  // namespace genvam
