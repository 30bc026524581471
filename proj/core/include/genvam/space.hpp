#pragma once

#include <cstddef>
#include <random>
#include <string>
#include <variant>
#include <vector>

namespace genvam {

/// Coordinate on a leg of a tree with one root; t = 0 is the root.
struct TreePoint {
  std::size_t branch = 0;
  double t = 0.0;
};

using Vec = std::vector<double>;

class Point {
 public:
  Point() = default;
  Point(Vec v) : rep_(std::move(v)) {}  // NOLINT(google-explicit-constructor)
  Point(TreePoint p) : rep_(p) {}       // NOLINT
  static Point scalar(double x) { return Point(Vec{x}); }
  static Point tree(std::size_t branch, double t) { return Point(TreePoint{branch, t}); }

  bool is_tree() const noexcept { return std::holds_alternative<TreePoint>(rep_); }
  const Vec& vec() const { return std::get<Vec>(rep_); }
  Vec& vec() { return std::get<Vec>(rep_); }
  const TreePoint& node() const { return std::get<TreePoint>(rep_); }

  std::string str() const;

 private:
  std::variant<Vec, TreePoint> rep_;
};

constexpr double kPointTol = 1e-12;

namespace subset {
struct Whole {};
/// Closed ball; for trees the center is any tree point.
struct Ball {
  Point center;
  double radius = 1.0;
};
/// Axis-aligned box, Euclidean only.
struct Box {
  Vec lo, hi;
};
}  // namespace subset

using Subset = std::variant<subset::Whole, subset::Ball, subset::Box>;

/// Euclidean R^d or a tripod-like tree with `branches` legs, together with a
/// closed convex subset C.
class Space {
 public:
  static Space euclidean(std::size_t dim, Subset c = subset::Whole{});
  static Space tripod(std::size_t branches, Subset c = subset::Whole{});

  bool is_tree() const noexcept { return tree_; }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t branches() const noexcept { return branches_; }
  const Subset& subset() const noexcept { return subset_; }
  std::string describe() const;

  /// Throws std::invalid_argument on a dimension or branch mismatch.
  void validate(const Point& p) const;

  double dist(const Point& p, const Point& q) const;
  /// W(x, y, lambda): the point at distance lambda d(x,y) from x on [x,y].
  Point combine(const Point& x, const Point& y, double lambda) const;
  bool equal(const Point& p, const Point& q, double tol = kPointTol) const;

  bool contains(const Point& p, double tol = 1e-12) const;
  /// Metric projection onto C.
  Point project(const Point& p) const;
  /// Metric projection onto an arbitrary closed ball.
  Point project_ball(const Point& p, const Point& center, double radius) const;

  Point origin() const;
  /// Uniform-ish sample from C (from a default box of half-width `scale` when C is unbounded).
  Point sample(std::mt19937_64& rng, double scale = 10.0) const;

 private:
  Space(bool tree, std::size_t dim, std::size_t branches, Subset c);
  bool tree_;
  std::size_t dim_;
  std::size_t branches_;
  Subset subset_;
};

}  // namespace genvam
