#pragma once

// Contractions f, nonexpansive families (T_n) given as resolvents, the limit
// map T~ and a numerical checker for the resolvent inequality.

#include "genvam/space.hpp"
#include "genvam/verdict.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace genvam {

// ------------------------------------------------------------------ objectives

namespace objective {
/// 1/2 |x - b|^2 (Euclidean)
struct Quadratic {
  Vec b;
};
/// c |x|_1 (Euclidean)
struct Norm1 {
  double scale = 1.0;
};
/// Indicator of a closed ball (any space).
struct IndicatorBall {
  Point center;
  double radius = 1.0;
};
/// Indicator of an axis-aligned box (Euclidean).
struct IndicatorBox {
  Vec lo, hi;
};
/// 1/2 d^2(x, p) (any CAT(0) instance)
struct DistanceSquared {
  Point p;
};
/// sum_i (x_i - b_i)^4 / 4; prox solved by bisection.
struct Quartic {
  Vec b;
};
}  // namespace objective

using Objective = std::variant<objective::Quadratic, objective::Norm1, objective::IndicatorBall,
                               objective::IndicatorBox, objective::DistanceSquared, objective::Quartic>;

std::string describe(const Objective& f);

inline constexpr double kProxTol = 1e-12;

/// argmin_y f(y) + d^2(x,y) / (2 lambda)
Point prox_eval(const Space& space, const Objective& f, double lambda, const Point& x);

// ------------------------------------------------------------ nonexpansive maps

namespace nonexp {
struct Identity {};
struct Constant {
  Point p;
};
/// Move toward the origin (the root on trees) by `amount`, stopping there.
struct Shrink {
  double amount = 1.0;
};
/// Rotation about the origin in the first two coordinates.
struct Rotation2D {
  double angle = 0.0;
};
/// Metric projection onto a closed ball.
struct Projection {
  Point center;
  double radius = 1.0;
};
}  // namespace nonexp

using NonexpansiveMap = std::variant<nonexp::Identity, nonexp::Constant, nonexp::Shrink, nonexp::Rotation2D,
                                     nonexp::Projection>;

std::string describe(const NonexpansiveMap& t);
Point apply_map(const Space& space, const NonexpansiveMap& t, const Point& x);

inline constexpr double kDefaultFixedPointTol = 1e-12;

/// Fixed point of z -> W(x, T z, lambda / (1 + lambda)) by Picard iteration.
/// Throws std::runtime_error when the displacement ratio exceeds the
/// contraction factor.
Point resolvent_nonexp_eval(const Space& space, const NonexpansiveMap& t, double lambda, const Point& x,
                            double eps_fp = kDefaultFixedPointTol);

// -------------------------------------------------------------------- families

using LambdaFn = std::function<double(std::uint64_t)>;

/// (T_n) with T_n the resolvent of order lambda_n of a fixed operator.
class Family {
 public:
  using Kind = std::variant<Objective, NonexpansiveMap>;

  Family(Space space, Kind kind, LambdaFn lambda, std::string label = {});

  const Space& space() const noexcept { return space_; }
  const Kind& kind() const noexcept { return kind_; }
  const std::string& label() const noexcept { return label_; }
  double lambda(std::uint64_t n) const { return lambda_(n); }

  /// Resolvent of order `lambda` of the underlying operator.
  Point resolvent(double lambda, const Point& x) const;

 private:
  Space space_;
  Kind kind_;
  LambdaFn lambda_;
  std::string label_;
};

/// T_n x
Point family_eval(const Family& family, std::uint64_t n, const Point& x);
/// T~ x, the resolvent at the limit parameter.
Point tilde_T_eval(const Family& family, double lambda_limit, const Point& x);

/// d(T_n y, T_m y) <= |1 - lambda_m / lambda_n| d(y, T_n y) + tol on every point and pair.
Verdict check_res(const Family& family, const std::vector<std::pair<std::uint64_t, std::uint64_t>>& pairs,
                  const std::vector<Point>& points, double tol);

/// d(T_n x, T_n y) <= d(x, y) + tol on consecutive pairs of `points`, for n in `indices`.
Verdict check_nonexpansive(const Family& family, const std::vector<std::uint64_t>& indices,
                           const std::vector<Point>& points, double tol);

// ----------------------------------------------------------------- contractions

namespace contraction {
/// f == u, alpha = 0
struct Constant {
  Point u;
};
/// f(x) = W(u, x, alpha)
struct GeodesicPull {
  Point u;
  double alpha = 0.0;
};
}  // namespace contraction

using ContractionSpec = std::variant<contraction::Constant, contraction::GeodesicPull>;

double contraction_factor(const ContractionSpec& f);
const Point& anchor(const ContractionSpec& f);
Point contraction_eval(const Space& space, const ContractionSpec& f, const Point& x);

}  // namespace genvam
