#pragma once

// Empirical certification of rates against recorded sequences.

#include "genvam/modulus.hpp"
#include "genvam/schedule.hpp"
#include "genvam/space.hpp"
#include "genvam/verdict.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace genvam {

inline constexpr double kDefaultSlack = 1e-9;

namespace detail {

inline double as_double(double x) { return x; }
inline double as_double(const Rational& x) { return to_double(x); }

inline std::string nat_text(const Nat& n) {
  std::string s = to_string(n);
  if (s.size() > 30) s = s.substr(0, 10) + "...(" + std::to_string(s.size()) + " digits)";
  return s;
}

}  // namespace detail

/// 1/(k+1) as T.
template <class T>
T inverse_index(std::uint64_t k) {
  if constexpr (std::is_same_v<T, Rational>) {
    return Rational(Nat(1), Nat(k + 1));
  } else {
    return T(1) / T(k + 1);
  }
}

/// Pass iff value_n <= 1/(k+1) + slack for every k <= k_max and every recorded n >= R(k).
/// k whose R(k) lies past the recorded prefix, or cannot be evaluated, make the verdict Partial.
template <class T>
Verdict verify_conv_rate(const std::vector<T>& column, const Modulus& R, std::uint64_t k_max, const T& slack,
                         const EvalBudget& budget = EvalBudget(), std::string id = "conv_rate") {
  Verdict v;
  v.id = std::move(id);
  v.slack = detail::as_double(slack);
  const std::size_t len = column.size();
  // suffix[n] = max of column[n..]
  std::vector<T> suffix(len + 1, T(0));
  for (std::size_t i = len; i-- > 0;) suffix[i] = std::max(column[i], suffix[i + 1]);
  std::optional<std::uint64_t> verified;
  bool gap = false;
  std::uint64_t uncovered = 0;
  for (std::uint64_t k = 0; k <= k_max; ++k) {
    EvalOutcome out = R.evaluate(Nat(k), budget);
    if (out.exceeded()) {
      v.partial("R(" + std::to_string(k) + ") exceeds budget: " + out.report().reason);
      break;
    }
    const Nat& N = out.value();
    const T bound = inverse_index<T>(k) + slack;
    if (N >= Nat(len)) {
      ++uncovered;
      gap = true;
      continue;
    }
    const std::size_t start = static_cast<std::size_t>(N);
    ++v.samples;
    v.note_margin(detail::as_double(bound - suffix[start]));
    if (suffix[start] > bound) {
      std::size_t n = start;
      while (!(column[n] > bound)) ++n;
      std::ostringstream why;
      why.precision(17);
      why << "k=" << k << ": value " << detail::as_double(column[n]) << " at n=" << n << " exceeds 1/(k+1)+slack, R(k)="
          << detail::nat_text(N);
      v.fail(Violation{k, n, detail::as_double(column[n]), detail::as_double(bound), v.id}, why.str());
      return v;
    }
    if (!gap) verified = k;
  }
  v.max_verified_k = verified;
  if (uncovered > 0) {
    v.partial(std::to_string(uncovered) + " k value(s) have R(k) beyond the " + std::to_string(len) + " recorded rows");
  }
  if (v.status == Status::Pass) v.detail = "k <= " + std::to_string(k_max) + " over " + std::to_string(len) + " rows";
  return v;
}

/// Pass iff d(x_{n+p}, x_n) <= 1/(k+1) + slack for k <= k_max, n >= phi(k), 1 <= p <= p_max within the prefix.
template <class T, class Dist>
Verdict verify_cauchy_modulus(const std::vector<T>& seq, Dist dist, const Modulus& phi, std::uint64_t k_max,
                              std::uint64_t p_max, double slack, const EvalBudget& budget = EvalBudget(),
                              std::string id = "cauchy_modulus") {
  using D = decltype(dist(seq[0], seq[0]));
  Verdict v;
  v.id = std::move(id);
  v.slack = slack;
  const std::size_t len = seq.size();
  std::vector<D> spread(len, D(0));  // max over p of d(x_{n+p}, x_n)
  std::vector<std::size_t> argp(len, 0);
  for (std::size_t n = 0; n < len; ++n) {
    for (std::size_t p = 1; p <= p_max && n + p < len; ++p) {
      D d = dist(seq[n + p], seq[n]);
      if (d > spread[n]) {
        spread[n] = d;
        argp[n] = p;
      }
    }
  }
  std::vector<D> suffix(len + 1, D(0));
  for (std::size_t i = len; i-- > 0;) suffix[i] = std::max(spread[i], suffix[i + 1]);
  std::uint64_t uncovered = 0;
  std::optional<std::uint64_t> verified;
  bool gap = false;
  for (std::uint64_t k = 0; k <= k_max; ++k) {
    EvalOutcome out = phi.evaluate(Nat(k), budget);
    if (out.exceeded()) {
      v.partial("phi(" + std::to_string(k) + ") exceeds budget");
      break;
    }
    const Nat& N = out.value();
    if (N + 1 >= Nat(len)) {
      ++uncovered;
      gap = true;
      continue;
    }
    const std::size_t start = static_cast<std::size_t>(N);
    D bound = inverse_index<D>(k);
    if constexpr (std::is_same_v<D, double>) bound += slack;
    ++v.samples;
    v.note_margin(detail::as_double(bound - suffix[start]));
    if (suffix[start] > bound) {
      std::size_t n = start;
      while (!(spread[n] > bound)) ++n;
      std::ostringstream why;
      why.precision(17);
      why << "k=" << k << ": d(x_" << n + argp[n] << ", x_" << n << ") = " << detail::as_double(spread[n])
          << " exceeds 1/(k+1)+slack, phi(k)=" << detail::nat_text(N);
      v.fail(Violation{k, n, detail::as_double(spread[n]), detail::as_double(bound), "p=" + std::to_string(argp[n])},
             why.str());
      return v;
    }
    if (!gap) verified = k;
  }
  v.max_verified_k = verified;
  if (uncovered > 0) v.partial(std::to_string(uncovered) + " k value(s) have phi(k) beyond the recorded prefix");
  if (v.status == Status::Pass) {
    v.detail = "k <= " + std::to_string(k_max) + ", p <= " + std::to_string(p_max) + " over " + std::to_string(len) + " terms";
  }
  return v;
}

/// Terms of a nonnegative series: exact when `exact` is set.
struct SeriesTerms {
  std::function<Rational(std::uint64_t)> exact;
  std::function<double(std::uint64_t)> approx;
  double per_term_slack = 0.0;  ///< added to every approximate term
};

inline constexpr std::uint64_t kExactSummationLimit = 4096;
inline constexpr std::uint64_t kMaxSummedTerms = std::uint64_t(1) << 25;

/// Pass iff sum_{i <= theta(n)} a_i >= n for every n <= n_max.
Verdict verify_divergence_rate(const SeriesTerms& terms, const Modulus& theta, std::uint64_t n_max,
                               const EvalBudget& budget = EvalBudget(), std::string id = "divergence_rate");

/// Pass iff for every k in ks and g in gallery some N <= Omega(k,g) satisfies
/// d(x_i, x_j) <= 1/(k+1) + slack for all i, j in [N; N + g(N)].
Verdict verify_metastability(const std::vector<Point>& seq, const Space& space, const MetaRate& omega,
                             const std::vector<std::uint64_t>& ks, const std::vector<Counter>& gallery, double slack,
                             const EvalBudget& budget = EvalBudget(), std::string id = "metastability");

/// Default counter gallery: g = 1, g = 5, g(n) = n, g(n) = 2n + 5.
std::vector<Counter> default_gallery();

/// Checks every attached witness of a schedule on prefixes.
std::vector<Verdict> validate_schedule(const Schedule& s, std::uint64_t prefix = 2000, std::uint64_t k_max = 40);

}  // namespace genvam
