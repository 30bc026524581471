#pragma once

// Randomized checks of the W-hyperbolic axioms, the CAT(0) midpoint
// inequality and the derived convex-combination identities.

#include "genvam/space.hpp"
#include "genvam/verdict.hpp"

#include <cmath>
#include <concepts>
#include <cstdint>
#include <random>
#include <sstream>

namespace genvam {

template <class S>
concept WSpace = requires(const S& s, const Point& p, double l, std::mt19937_64& rng) {
  { s.dist(p, p) } -> std::convertible_to<double>;
  { s.combine(p, p, l) } -> std::convertible_to<Point>;
  { s.sample(rng) } -> std::convertible_to<Point>;
  { s.contains(p) } -> std::convertible_to<bool>;
};

inline constexpr std::uint64_t kDefaultAxiomSeed = 20240531;

/// Samples points and parameters and checks every inequality; the first one
/// off by more than `tol` becomes the violation.
template <WSpace S>
Verdict check_axioms(const S& space, std::uint64_t samples, double tol, std::uint64_t seed = kDefaultAxiomSeed) {
  Verdict v;
  v.id = "axioms";
  v.seed = seed;
  v.slack = tol;
  v.samples = samples;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::uint64_t idx = 0;
  // lhs <= rhs + tol
  auto le = [&](const char* name, double lhs, double rhs) {
    const double margin = rhs - lhs;
    v.note_margin(margin);
    if (margin < -tol && v.status != Status::Fail) {
      std::ostringstream why;
      why.precision(17);
      why << name << " violated at sample " << idx << ": " << lhs << " > " << rhs;
      v.fail(Violation{0, idx, lhs, rhs, name}, why.str());
    }
  };
  auto eq = [&](const char* name, double lhs, double rhs) {
    const double gap = std::abs(lhs - rhs);
    v.note_margin(-gap);
    if (gap > tol && v.status != Status::Fail) {
      std::ostringstream why;
      why.precision(17);
      why << name << " violated at sample " << idx << ": " << lhs << " != " << rhs;
      v.fail(Violation{0, idx, lhs, rhs, name}, why.str());
    }
  };

  for (idx = 0; idx < samples; ++idx) {
    const Point x = space.sample(rng);
    const Point y = space.sample(rng);
    const Point z = space.sample(rng);
    const Point w = space.sample(rng);
    const double l = unit(rng);
    const double lt = unit(rng);
    auto d = [&](const Point& a, const Point& b) { return space.dist(a, b); };
    auto W = [&](const Point& a, const Point& b, double t) { return space.combine(a, b, t); };

    const Point m = W(x, y, l);
    le("W1", d(z, m), (1 - l) * d(z, x) + l * d(z, y));
    eq("W2", d(m, W(x, y, lt)), std::abs(l - lt) * d(x, y));
    eq("W3", d(m, W(y, x, 1 - l)), 0.0);
    le("W4", d(W(x, z, l), W(y, w, l)), (1 - l) * d(x, y) + l * d(z, w));

    const Point mid = W(x, y, 0.5);
    const double dzm = d(z, mid);
    const double dzx = d(z, x);
    const double dzy = d(z, y);
    const double dxy = d(x, y);
    le("CAT(0)", dzm * dzm, 0.5 * dzx * dzx + 0.5 * dzy * dzy - 0.25 * dxy * dxy);

    eq("distance from x", d(x, m), l * dxy);
    eq("distance from y", d(y, m), (1 - l) * dxy);
    eq("lx+(1-l)x=x", d(W(x, x, l), x), 0.0);
    eq("W(x,y,0)=x", d(W(x, y, 0.0), x), 0.0);
    eq("W(x,y,1)=y", d(W(x, y, 1.0), y), 0.0);
    le("mixed parameters", d(W(x, z, l), W(y, w, lt)), (1 - l) * d(x, y) + l * d(z, w) + std::abs(l - lt) * d(y, w));
    le("mixed parameters, swapped", d(W(z, x, l), W(w, y, lt)),
       l * d(x, y) + (1 - l) * d(z, w) + std::abs(l - lt) * d(y, w));

    if (!space.contains(m)) {
      if (v.status != Status::Fail) v.fail(Violation{0, idx, 1.0, 0.0, "convex subset"}, "combine left the subset C");
    }
    if (v.status == Status::Fail) break;
  }
  if (v.status == Status::Pass) {
    std::ostringstream o;
    o << samples << " samples, seed " << seed;
    v.detail = o.str();
  }
  return v;
}

}  // namespace genvam
