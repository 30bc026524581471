#include "genvam/operators.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace genvam;

TEST_SUITE("operator_family") {

TEST_CASE("prox") {
  const Space r1 = Space::euclidean(1);
  const Point p = prox_eval(r1, objective::Quadratic{{0.0}}, 1.0, Point::scalar(4));
  CHECK(p.vec()[0] == doctest::Approx(2.0));
  // grid oracle for 1/2 y^2 + (y-4)^2/2
  double best = 0, arg = 0;
  for (int i = 0; i <= 40000; ++i) {
    const double y = i * 1e-4;
    const double v = 0.5 * y * y + 0.5 * (y - 4) * (y - 4);
    if (i == 0 || v < best) best = v, arg = y;
  }
  CHECK(p.vec()[0] == doctest::Approx(arg).epsilon(1e-4));
  const Point q = prox_eval(r1, objective::IndicatorBox{{-1}, {1}}, 7.0, Point::scalar(5));
  CHECK(q.vec()[0] == doctest::Approx(1.0));
  const Point fixed = prox_eval(r1, objective::Norm1{2.0}, 3.0, Point::scalar(0));
  CHECK(fixed.vec()[0] == doctest::Approx(0.0));
  // soft thresholding
  CHECK(prox_eval(r1, objective::Norm1{1.0}, 2.0, Point::scalar(5)).vec()[0] == doctest::Approx(3.0));
  const Point quartic = prox_eval(r1, objective::Quartic{{0.0}}, 1.0, Point::scalar(2));
  const double y = quartic.vec()[0];
  CHECK(y * y * y + y - 2 == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("resolvent of a nonexpansive map") {
  const Space r1 = Space::euclidean(1);
  const Point x = Point::scalar(4);
  CHECK(resolvent_nonexp_eval(r1, nonexp::Identity{}, 1.0, x).vec()[0] == doctest::Approx(4.0));
  CHECK(resolvent_nonexp_eval(r1, nonexp::Constant{Point::scalar(0)}, 1.0, x).vec()[0] == doctest::Approx(2.0));
  // z = (x + lambda T z)/(1 + lambda) on the branch: 2z = 4 + z - 1
  const Space tri = Space::tripod(3);
  const Point z = resolvent_nonexp_eval(tri, nonexp::Shrink{1.0}, 1.0, Point::tree(1, 4));
  CHECK(z.node().branch == 1);
  CHECK(z.node().t == doctest::Approx(3.0));
  // Picard oracle
  double t = 4;
  for (int i = 0; i < 200; ++i) t = (4 + std::max(t - 1, 0.0)) / 2;
  CHECK(z.node().t == doctest::Approx(t));
}

TEST_CASE("family and limit map") {
  const Space r1 = Space::euclidean(1);
  const Family fam(r1, Objective(objective::Quadratic{{0.0}}), [](std::uint64_t) { return 2.0; });
  CHECK(family_eval(fam, 0, Point::scalar(3)).vec()[0] == doctest::Approx(1.0));
  CHECK(family_eval(fam, 17, Point::scalar(3)).vec()[0] == doctest::Approx(1.0));
  CHECK(family_eval(fam, 9, Point::scalar(0)).vec()[0] == doctest::Approx(0.0));
  CHECK(tilde_T_eval(fam, 1.0, Point::scalar(4)).vec()[0] == doctest::Approx(2.0));
  CHECK(tilde_T_eval(fam, 1.0, Point::scalar(0)).vec()[0] == doctest::Approx(0.0));
  // d(T_n x, T~ x) <= |lambda_n - lambda| / lambda * d(x, T~ x)
  const Family near(r1, Objective(objective::Quadratic{{0.0}}), [](std::uint64_t n) { return 1.0 + 1.0 / (n + 1.0); });
  std::mt19937_64 rng(5);
  for (int i = 0; i < 200; ++i) {
    const Point x = r1.sample(rng);
    const std::uint64_t n = i % 30;
    const Point tx = tilde_T_eval(near, 1.0, x);
    const double lhs = r1.dist(family_eval(near, n, x), tx);
    CHECK(lhs <= std::abs(near.lambda(n) - 1.0) * r1.dist(x, tx) + 1e-9);
  }
}

TEST_CASE("resolvent inequality") {
  const Space r1 = Space::euclidean(1);
  const Family fam(r1, Objective(objective::Quadratic{{0.0}}), [](std::uint64_t n) { return n == 0 ? 1.0 : 3.0; });
  // y=1: T_0 y = 1/2, T_1 y = 1/4, lhs 1/4 <= |1 - 3| * 1/2
  const Verdict v = check_res(fam, {{0, 1}, {1, 0}, {0, 0}}, {Point::scalar(1)}, 1e-12);
  CHECK(v.status == Status::Pass);
  CHECK(check_res(fam, {{0, 1}}, {Point::scalar(0)}, 0.0).status == Status::Pass);
  std::mt19937_64 rng(9);
  std::vector<Point> pts;
  for (int i = 0; i < 100; ++i) pts.push_back(Space::euclidean(2).sample(rng));
  const Family box(Space::euclidean(2), Objective(objective::Norm1{1.0}), [](std::uint64_t n) { return 1.0 + n % 3; });
  std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs;
  for (std::uint64_t n = 0; n < 6; ++n)
    for (std::uint64_t m = 0; m < 6; ++m) pairs.emplace_back(n, m);
  CHECK(check_res(box, pairs, pts, 1e-9).status == Status::Pass);
  CHECK(check_nonexpansive(box, {0, 1, 2}, pts, 1e-9).status == Status::Pass);
}

TEST_CASE("contractions") {
  const Space r2 = Space::euclidean(2);
  const Point u(Vec{0, 0});
  CHECK(r2.equal(contraction_eval(r2, contraction::Constant{Point(Vec{1, 2})}, Vec{9, 9}), Vec{1, 2}));
  CHECK(r2.equal(contraction_eval(r2, contraction::GeodesicPull{u, 0.0}, Vec{5, -3}), u));
  CHECK(r2.equal(contraction_eval(r2, contraction::GeodesicPull{u, 0.5}, Vec{2, 2}), Vec{1, 1}));
  CHECK(contraction_factor(contraction::GeodesicPull{u, 0.25}) == 0.25);
}

}
