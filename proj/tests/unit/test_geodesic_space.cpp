#include "genvam/axioms.hpp"

#include <doctest.h>

using namespace genvam;

namespace {

// combine that forgets its parameter
struct BrokenW {
  Space base = Space::euclidean(2);
  double dist(const Point& p, const Point& q) const { return base.dist(p, q); }
  Point combine(const Point& x, const Point& y, double) const { return base.combine(x, y, 0.5); }
  Point sample(std::mt19937_64& rng) const { return base.sample(rng); }
  bool contains(const Point& p) const { return base.contains(p); }
};

}  // namespace

TEST_SUITE("geodesic_space") {

TEST_CASE("distances") {
  const Space r2 = Space::euclidean(2);
  CHECK(r2.dist(Vec{0, 0}, Vec{3, 4}) == doctest::Approx(5.0));
  const Space tri = Space::tripod(3);
  CHECK(tri.dist(Point::tree(1, 2), Point::tree(1, 3)) == doctest::Approx(1.0));
  CHECK(tri.dist(Point::tree(1, 2), Point::tree(2, 3)) == doctest::Approx(5.0));
  CHECK(tri.dist(Point::tree(1, 0), Point::tree(2, 0)) == doctest::Approx(0.0));
}

TEST_CASE("combine") {
  const Space r2 = Space::euclidean(2);
  const Point m = r2.combine(Vec{0, 0}, Vec{2, 2}, 0.5);
  CHECK(r2.equal(m, Vec{1, 1}));
  const Space tri = Space::tripod(3);
  const Point root = tri.combine(Point::tree(1, 2), Point::tree(2, 2), 0.5);
  CHECK(root.node().t == doctest::Approx(0.0));
  const Point x = Point::tree(0, 1.5), y = Point::tree(2, 4);
  CHECK(tri.equal(tri.combine(x, y, 0.0), x));
  CHECK(tri.equal(tri.combine(x, y, 1.0), y));
  // a quarter of the way from (0,1.5) to (2,4): path length 5.5
  const Point q = tri.combine(x, y, 0.25);
  CHECK(tri.dist(x, q) == doctest::Approx(1.375));
}

TEST_CASE("axioms hold on the model spaces") {
  for (std::size_t d : {1u, 2u, 3u, 5u}) {
    const Verdict v = check_axioms(Space::euclidean(d), 10000, 1e-9);
    INFO(v.detail);
    CHECK(v.status == Status::Pass);
  }
  const Verdict t = check_axioms(Space::tripod(3), 10000, 1e-9);
  INFO(t.detail);
  CHECK(t.status == Status::Pass);
  const Verdict ball = check_axioms(Space::euclidean(2, subset::Ball{Point(Vec{1, 1}), 2.0}), 2000, 1e-9);
  CHECK(ball.status == Status::Pass);
}

TEST_CASE("a broken W is caught") {
  const Verdict v = check_axioms(BrokenW{}, 1000, 1e-9);
  REQUIRE(v.status == Status::Fail);
  REQUIRE(v.violation);
  CHECK(v.violation->where == "W2");
}

TEST_CASE("projection onto C") {
  const Space box = Space::euclidean(2, subset::Box{{-1, -1}, {1, 1}});
  CHECK(box.equal(box.project(Vec{3, 0.5}), Vec{1, 0.5}));
  const Space tball = Space::tripod(3, subset::Ball{Point::tree(0, 0), 1.0});
  CHECK(tball.equal(tball.project(Point::tree(2, 5)), Point::tree(2, 1)));
  CHECK_THROWS_AS(Space::euclidean(2).validate(Vec{1, 2, 3}), std::invalid_argument);
}

}
