#include "genvam/verify.hpp"

#include "genvam/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace genvam {

Verdict verify_divergence_rate(const SeriesTerms& terms, const Modulus& theta, std::uint64_t n_max,
                               const EvalBudget& budget, std::string id) {
  Verdict v;
  v.id = std::move(id);
  const bool exact = static_cast<bool>(terms.exact);
  v.slack = exact ? 0.0 : terms.per_term_slack;
  struct Request {
    std::uint64_t n;
    std::uint64_t m;
  };
  std::vector<Request> requests;
  std::uint64_t skipped = 0;
  for (std::uint64_t n = 0; n <= n_max; ++n) {
    EvalOutcome out = theta.evaluate(Nat(n), budget);
    if (out.exceeded() || out.value() >= Nat(kMaxSummedTerms)) {
      ++skipped;
      continue;
    }
    requests.push_back({n, static_cast<std::uint64_t>(out.value())});
  }
  std::sort(requests.begin(), requests.end(), [](const Request& a, const Request& b) { return a.m < b.m; });

  Rational exact_sum = 0;
  long double sum = 0.0L;
  long double err = 0.0L;
  std::uint64_t next = 0;  // number of terms already summed
  auto term = [&](std::uint64_t i) -> long double {
    return exact ? static_cast<long double>(to_double(terms.exact(i))) : static_cast<long double>(terms.approx(i));
  };
  for (const Request& r : requests) {
    while (next <= r.m) {
      if (exact && next < kExactSummationLimit) {
        exact_sum += terms.exact(next);
        if (next + 1 == kExactSummationLimit) sum = static_cast<long double>(to_double(exact_sum)), err = sum * 1e-16L;
      } else {
        const long double t = term(next);
        sum += t;
        err += std::numeric_limits<long double>::epsilon() * (sum + t) + 1e-16L * t;
        if (!exact) err += static_cast<long double>(terms.per_term_slack);
      }
      ++next;
    }
    ++v.samples;
    bool ok;
    double shown;
    if (exact && next <= kExactSummationLimit) {
      ok = exact_sum >= Rational(r.n);
      shown = to_double(exact_sum);
    } else {
      ok = sum - err >= static_cast<long double>(r.n);
      shown = static_cast<double>(sum);
    }
    v.note_margin(shown - static_cast<double>(r.n));
    if (!ok) {
      std::ostringstream why;
      why.precision(17);
      why << "partial sum up to theta(" << r.n << ")=" << r.m << " is " << shown << " < " << r.n;
      v.fail(Violation{r.n, r.m, shown, static_cast<double>(r.n), v.id}, why.str());
      return v;
    }
  }
  if (skipped > 0) {
    v.partial(std::to_string(skipped) + " n value(s) need more than " + std::to_string(kMaxSummedTerms) + " terms");
  } else {
    v.detail = "n <= " + std::to_string(n_max) + ", " + std::to_string(next) + " terms summed";
  }
  return v;
}

namespace {

/// Diameter of seq[a..b] if it can be computed exactly here.
std::optional<double> window_diameter(const std::vector<Point>& seq, const Space& space, std::size_t a, std::size_t b) {
  if (!space.is_tree() && space.dim() == 1) {
    double lo = seq[a].vec()[0];
    double hi = lo;
    for (std::size_t i = a + 1; i <= b; ++i) {
      lo = std::min(lo, seq[i].vec()[0]);
      hi = std::max(hi, seq[i].vec()[0]);
    }
    return hi - lo;
  }
  if (b - a > 3000) return std::nullopt;
  double best = 0.0;
  for (std::size_t i = a; i <= b; ++i) {
    for (std::size_t j = i + 1; j <= b; ++j) best = std::max(best, space.dist(seq[i], seq[j]));
  }
  return best;
}

}  // namespace

Verdict verify_metastability(const std::vector<Point>& seq, const Space& space, const MetaRate& omega,
                             const std::vector<std::uint64_t>& ks, const std::vector<Counter>& gallery, double slack,
                             const EvalBudget& budget, std::string id) {
  Verdict v;
  v.id = std::move(id);
  v.slack = slack;
  const std::size_t len = seq.size();
  for (std::uint64_t k : ks) {
    const double eps = 1.0 / static_cast<double>(k + 1) + slack;
    for (const Counter& g : gallery) {
      const std::string pair = "k=" + std::to_string(k) + " " + g.label();
      EvalBudget local = budget.fresh();
      EvalOutcome bound = omega.evaluate(Nat(k), g, local);
      if (bound.exceeded()) {
        const BudgetReport& r = bound.report();
        v.partial(pair + ": bound exceeds budget (" + r.reason + ", depth " + std::to_string(r.depth) + ", steps " +
                  std::to_string(r.steps) + ")");
        continue;
      }
      const Nat& B = bound.value();
      bool certified = false;
      bool out_of_trace = false;
      ++v.samples;
      for (std::size_t N = 0; Nat(N) <= B; ++N) {
        EvalBudget gb = budget.fresh();
        Nat gN;
        try {
          gN = g(Nat(N), gb);
        } catch (const BudgetExceeded&) {
          out_of_trace = true;
          break;
        }
        if (Nat(N) + gN >= Nat(len)) {
          out_of_trace = true;
          break;
        }
        const std::size_t end = N + static_cast<std::size_t>(gN);
        double r = 0.0;
        for (std::size_t i = N + 1; i <= end && r <= eps; ++i) r = std::max(r, space.dist(seq[N], seq[i]));
        if (r > eps) continue;
        double diam = 2.0 * r;
        if (diam > eps) {
          std::optional<double> exact = window_diameter(seq, space, N, end);
          if (!exact) continue;
          diam = *exact;
        }
        if (diam <= eps) {
          certified = true;
          v.note_margin(eps - slack - diam);
          std::ostringstream cert;
          cert.precision(17);
          cert << pair << " bound=" << detail::nat_text(B) << " N=" << N << " window=[" << N << ";" << end
               << "] diameter<=" << diam;
          v.certificates.push_back(cert.str());
          break;
        }
      }
      if (certified) continue;
      if (out_of_trace) {
        v.partial(pair + ": trace of " + std::to_string(len) + " points ends before a window could be certified");
        continue;
      }
      std::ostringstream why;
      why << pair << ": no N <= " << detail::nat_text(B) << " has a window of diameter <= 1/(k+1)";
      v.fail(Violation{k, static_cast<std::uint64_t>(std::min<Nat>(B, Nat(len))), 0.0, eps, g.label()}, why.str());
      return v;
    }
  }
  if (v.status == Status::Pass) v.detail = std::to_string(v.certificates.size()) + " (k,g) pairs certified";
  return v;
}

std::vector<Counter> default_gallery() {
  return {Counter::constant(Nat(1)), Counter::constant(Nat(5)), Counter::identity(), Counter::affine(Nat(2), Nat(5))};
}

namespace {

/// Largest k <= k_max with R(k) < limit, if any.
std::optional<std::uint64_t> reachable_k(const Modulus& R, std::uint64_t k_max, std::uint64_t limit) {
  std::optional<std::uint64_t> best;
  for (std::uint64_t k = 0; k <= k_max; ++k) {
    EvalOutcome out = R.evaluate(Nat(k));
    if (out.exceeded() || out.value() >= Nat(limit)) break;
    best = k;
  }
  return best;
}

template <class T>
Verdict conv_on_prefix(const std::vector<T>& column, const Modulus& R, std::uint64_t k_max, const T& slack,
                       const std::string& id) {
  std::optional<std::uint64_t> k = reachable_k(R, k_max, column.size());
  if (!k) {
    Verdict v;
    v.id = id;
    v.partial("no k has R(k) inside the prefix");
    return v;
  }
  return verify_conv_rate(column, R, *k, slack, EvalBudget(), id);
}

/// tail[n] = sum_{i=n+1}^{P-1} c_i, the supremum of the Cauchy differences inside the prefix.
template <class T>
std::vector<T> tails(const std::vector<T>& c) {
  std::vector<T> out(c.size(), T(0));
  for (std::size_t n = c.size() - 1; n-- > 0;) out[n] = out[n + 1] + c[n + 1];
  out.pop_back();
  return out;
}

template <class T>
T absval(const T& x) {
  return x < T(0) ? T(-x) : x;
}

}  // namespace

std::vector<Verdict> validate_schedule(const Schedule& s, std::uint64_t prefix, std::uint64_t k_max) {
  std::vector<Verdict> out;
  const Witnesses& w = s.w;
  const bool exact_alpha = s.alpha.is_exact();
  const bool exact_lambda = s.lambda.is_exact();
  const double fslack = 1e-15;

  if (w.sigma1) {
    std::uint64_t n_max = 0;
    for (std::uint64_t n = 0; n <= 100; ++n) {
      EvalOutcome o = w.sigma1->evaluate(Nat(n));
      if (o.exceeded() || o.value() >= Nat(std::uint64_t(1) << 22)) break;
      n_max = n;
    }
    SeriesTerms t;
    if (exact_alpha) {
      t.exact = s.alpha.exact;
    } else {
      t.approx = s.alpha.approx;
      t.per_term_slack = fslack;
    }
    out.push_back(verify_divergence_rate(t, *w.sigma1, n_max, EvalBudget(), "sigma1"));
  }

  // alpha columns
  std::vector<Rational> aq;
  std::vector<double> ad(prefix + 1);
  for (std::uint64_t n = 0; n <= prefix; ++n) ad[n] = s.alpha(n);
  if (exact_alpha) {
    aq.resize(prefix + 1);
    for (std::uint64_t n = 0; n <= prefix; ++n) aq[n] = s.alpha.exact(n);
  }
  auto alpha_check = [&](const std::optional<Modulus>& R, const std::string& id, auto make_q, auto make_d,
                         bool cauchy) {
    if (!R) return;
    if (exact_alpha) {
      std::vector<Rational> col;
      for (std::uint64_t n = 0; n < prefix; ++n) col.push_back(make_q(n));
      out.push_back(conv_on_prefix(cauchy ? tails(col) : col, *R, k_max, Rational(0), id));
    } else {
      std::vector<double> col;
      for (std::uint64_t n = 0; n < prefix; ++n) col.push_back(make_d(n));
      out.push_back(conv_on_prefix(cauchy ? tails(col) : col, *R, k_max, fslack * prefix, id));
    }
  };
  alpha_check(w.sigma2, "sigma2", [&](std::uint64_t n) { return absval<Rational>(aq[n] - aq[n + 1]); },
              [&](std::uint64_t n) { return std::abs(ad[n] - ad[n + 1]); }, true);
  alpha_check(w.sigma3, "sigma3", [&](std::uint64_t n) { return aq[n]; }, [&](std::uint64_t n) { return ad[n]; }, false);
  alpha_check(w.sigma4, "sigma4", [&](std::uint64_t n) { return Rational(absval<Rational>(aq[n + 1] - aq[n]) / (aq[n] * aq[n])); },
              [&](std::uint64_t n) { return std::abs(ad[n + 1] - ad[n]) / (ad[n] * ad[n]); }, false);

  // lambda columns
  std::vector<Rational> lq;
  std::vector<double> ld(prefix + 1);
  for (std::uint64_t n = 0; n <= prefix; ++n) ld[n] = s.lambda(n);
  if (exact_lambda) {
    lq.resize(prefix + 1);
    for (std::uint64_t n = 0; n <= prefix; ++n) lq[n] = s.lambda.exact(n);
  }
  auto lambda_check = [&](const std::optional<Modulus>& R, const std::string& id, auto make_q, auto make_d,
                          bool cauchy) {
    if (!R) return;
    if (exact_lambda) {
      std::vector<Rational> col;
      for (std::uint64_t n = 0; n < prefix; ++n) col.push_back(make_q(n));
      out.push_back(conv_on_prefix(cauchy ? tails(col) : col, *R, k_max, Rational(0), id));
    } else {
      std::vector<double> col;
      for (std::uint64_t n = 0; n < prefix; ++n) col.push_back(make_d(n));
      out.push_back(conv_on_prefix(cauchy ? tails(col) : col, *R, k_max, fslack * prefix, id));
    }
  };
  if (w.theta4 && w.lambda_limit) {
    const Rational lim = *w.lambda_limit;
    const double limd = to_double(lim);
    lambda_check(w.theta4, "theta4", [&](std::uint64_t n) { return absval<Rational>(lq[n] - lim); },
                 [&](std::uint64_t n) { return std::abs(ld[n] - limd); }, false);
  }
  lambda_check(w.theta2, "theta2", [&](std::uint64_t n) { return absval<Rational>(lq[n] - lq[n + 1]); },
               [&](std::uint64_t n) { return std::abs(ld[n] - ld[n + 1]); }, true);
  const LambdaWitnesses lw = derive_lambda_witnesses(s);
  lambda_check(lw.theta1, "theta1", [&](std::uint64_t n) { return absval<Rational>(1 - lq[n + 1] / lq[n]); },
               [&](std::uint64_t n) { return std::abs(1 - ld[n + 1] / ld[n]); }, true);
  lambda_check(lw.theta1_star, "theta1*", [&](std::uint64_t n) { return absval<Rational>(1 - lq[n] / lq[n + 1]); },
               [&](std::uint64_t n) { return std::abs(1 - ld[n] / ld[n + 1]); }, true);

  if (w.Lambda && w.N_Lambda) {
    Verdict v;
    v.id = "Lambda";
    const double inv = 1.0 / to_double(*w.Lambda);
    for (std::uint64_t n = static_cast<std::uint64_t>(*w.N_Lambda); n < prefix; ++n) {
      const bool ok = exact_lambda ? lq[n] * Rational(*w.Lambda) >= 1 : ld[n] >= inv;
      v.note_margin(ld[n] - inv);
      if (!ok) {
        v.fail(Violation{0, n, ld[n], inv, "lambda_n"}, "lambda_" + std::to_string(n) + " < 1/Lambda");
        break;
      }
    }
    out.push_back(v);
  }
  if (w.lambda_limit && w.l) {
    Verdict v;
    v.id = "l";
    if (!(*w.lambda_limit * Rational(*w.l + 1) > 1)) v.fail(Violation{}, "lambda <= 1/(l+1)");
    out.push_back(v);
  }
  if (w.h) {
    Verdict v;
    v.id = "h";
    for (std::uint64_t n = 0; n < prefix; ++n) {
      const Nat hn = (*w.h)(Nat(n));
      const bool ok = exact_alpha ? aq[n] * Rational(hn + 1) >= 1 : ad[n] * (to_double(hn) + 1.0) >= 1.0 - fslack;
      if (!ok) {
        v.fail(Violation{0, n, ad[n], 1.0 / (to_double(hn) + 1.0), "alpha_n"}, "alpha_n < 1/(h(n)+1)");
        break;
      }
    }
    out.push_back(v);
  }
  if (w.nonincreasing) {
    Verdict v;
    v.id = "nonincreasing";
    for (std::uint64_t n = 0; n < prefix; ++n) {
      const bool ok = exact_alpha ? aq[n + 1] <= aq[n] : ad[n + 1] <= ad[n] + fslack;
      if (!ok) {
        v.fail(Violation{0, n, ad[n + 1], ad[n], "alpha"}, "alpha_{n+1} > alpha_n");
        break;
      }
    }
    out.push_back(v);
  }
  for (Verdict& v : out) v.id = s.name + ":" + v.id;
  return out;
}

}  // namespace genvam
