#include "genvam/moduli_suite.hpp"

#include "genvam/combinators.hpp"
#include "genvam/modulus.hpp"
#include "genvam/verify.hpp"

#include <algorithm>
#include <memory>
#include <random>
#include <sstream>

namespace genvam {

namespace {

// Sequence values live on the grid 2^-40 and are stored as integer
// numerators, so window diameters compare exactly against 1/(k+1).
constexpr int kGridBits = 40;
constexpr std::int64_t kScale = std::int64_t(1) << kGridBits;
using Fixed = std::int64_t;

std::uint64_t pick(std::mt19937_64& rng, std::uint64_t lo, std::uint64_t hi) {
  return std::uniform_int_distribution<std::uint64_t>(lo, hi)(rng);
}

int sign(std::mt19937_64& rng) { return pick(rng, 0, 1) == 0 ? -1 : 1; }

/// floor(j / (8 (n+1)) * 2^40), a grid value of size at most j / (8 (n+1)).
Fixed shrinking(std::uint64_t j, std::uint64_t n) {
  return static_cast<Fixed>((static_cast<__int128>(j) * kScale) / (8 * static_cast<__int128>(n + 1)));
}

/// (hi - lo) * (k + 1) <= scale
bool within(Fixed hi, Fixed lo, std::uint64_t k, __int128 scale = kScale) {
  return static_cast<__int128>(hi - lo) * static_cast<__int128>(k + 1) <= scale;
}

double fixed_to_double(__int128 v, __int128 scale = kScale) {
  return static_cast<double>(v) / static_cast<double>(scale);
}

std::uint64_t u64(const Nat& n) { return static_cast<std::uint64_t>(n); }

struct Window {
  Fixed lo, hi;
};

Window window(const std::vector<Fixed>& x, std::size_t a, std::size_t b) {
  Window w{x[a], x[a]};
  for (std::size_t i = a + 1; i <= b; ++i) {
    w.lo = std::min(w.lo, x[i]);
    w.hi = std::max(w.hi, x[i]);
  }
  return w;
}

class Collector {
 public:
  Collector(std::string id, std::uint64_t seed) {
    v_.id = std::move(id);
    v_.seed = seed;
  }

  void check(bool ok, std::uint64_t k, std::uint64_t n, double measured, double bound, const std::string& where) {
    ++v_.samples;
    v_.note_margin(bound - measured);
    if (!ok && v_.status != Status::Fail) {
      std::ostringstream why;
      why.precision(17);
      why << where << ": k=" << k << " n=" << n << " measured " << measured << " > " << bound;
      v_.fail(Violation{k, n, measured, bound, where}, why.str());
    }
  }

  Verdict done(std::uint64_t cases) {
    if (v_.status == Status::Pass) v_.detail = std::to_string(cases) + " cases, " + std::to_string(v_.samples) + " checks";
    return v_;
  }

 private:
  Verdict v_;
};

/// Series with rational terms in [1/m, 1], generated lazily in index order.
class Series {
 public:
  Series(std::uint64_t seed, std::uint64_t m) : rng_(seed), m_(m) {}

  const Rational& term(std::size_t i) {
    grow(i);
    return a_[i];
  }
  /// sum_{j <= i} a_j
  const Rational& sum_to(std::size_t i) {
    grow(i);
    return prefix_[i];
  }
  /// Least j with sum_{i <= j} a_i >= n.
  std::uint64_t tight_rate(std::uint64_t n) {
    if (n == 0) return 0;
    std::size_t j = 0;
    while (sum_to(j) < Rational(n)) ++j;
    return j;
  }

 private:
  void grow(std::size_t i) {
    while (a_.size() <= i) {
      const std::uint64_t q = pick(rng_, 1, 6);
      const std::uint64_t p = pick(rng_, q, m_ * q);
      a_.emplace_back(Nat(p), Nat(m_ * q));
      prefix_.push_back(prefix_.empty() ? a_.back() : Rational(prefix_.back() + a_.back()));
    }
  }

  std::mt19937_64 rng_;
  std::uint64_t m_;
  std::vector<Rational> a_;
  std::vector<Rational> prefix_;
};

Modulus tight_divergence(const std::shared_ptr<Series>& s, const std::string& label) {
  return Modulus::plain([s](const Nat& n) { return Nat(s->tight_rate(u64(n))); }, Role::RateOfDivergence, label, true);
}

/// x_n = limit + e_n with |e_n| <= c/(n+1): rate of convergence k -> c(k+1) - 1.
std::vector<Fixed> convergent(std::mt19937_64& rng, Fixed limit, std::uint64_t c, std::size_t len) {
  std::vector<Fixed> x(len);
  for (std::size_t n = 0; n < len; ++n) x[n] = limit + sign(rng) * shrinking(pick(rng, 0, 8 * c), n);
  return x;
}

Modulus linear_rate(std::uint64_t c, Role role) { return Modulus::affine(Nat(c), Nat(c - 1), role); }

// ------------------------------------------------------------------ checks

void check_cauchy_from_conv(std::mt19937_64& rng, std::uint64_t H, Collector& out) {
  const std::uint64_t c = pick(rng, 1, 4);
  const Fixed limit = static_cast<Fixed>(pick(rng, 0, 10 * kScale)) - 5 * kScale;
  const Modulus phi = linear_rate(c, Role::RateOfConvergence);
  const Modulus star = cauchy_from_conv(phi);
  const std::vector<Fixed> x = convergent(rng, limit, c, u64(star(Nat(H))) + 2 * H + 1);
  for (std::uint64_t k = 0; k <= H; ++k) {
    const std::uint64_t N = u64(star(Nat(k)));
    out.check(N == u64(phi(Nat(2 * k + 1))), k, N, 0, 0, "phi*(k) = phi(2k+1)");
    const Window w = window(x, N, N + 2 * H);
    out.check(within(w.hi, w.lo, k), k, N, fixed_to_double(w.hi - w.lo), 1.0 / (k + 1), "Cauchy window");
  }
}

void check_divergence(std::mt19937_64& rng, std::uint64_t H, Collector& unit, Collector& head, Collector& scale,
                      Collector& sum) {
  auto a = std::make_shared<Series>(rng(), pick(rng, 1, 4));
  auto b = std::make_shared<Series>(rng(), pick(rng, 1, 4));
  const Modulus theta = tight_divergence(a, "theta_a");
  const Modulus gamma = tight_divergence(b, "theta_b");
  const std::uint64_t N = pick(rng, 1, 20);

  const Modulus by_unit = transform_divergence(theta, divergence::TailShift{Nat(N), std::nullopt, true});
  const Nat A = ceil_nat(a->sum_to(N - 1));
  const Modulus by_head = transform_divergence(theta, divergence::TailShift{Nat(N), A, false});
  const Rational c(Nat(pick(rng, 1, 8)), Nat(pick(rng, 1, 8)));
  const Modulus scaled = transform_divergence(theta, divergence::Scale{c});
  const Modulus both = transform_divergence(theta, divergence::Sum{gamma});

  for (std::uint64_t n = 0; n <= H; ++n) {
    const Rational head_sum = a->sum_to(N - 1);
    const std::uint64_t tu = u64(by_unit(Nat(n)));
    const Rational tail_u = a->sum_to(N + tu) - head_sum;
    unit.check(tail_u >= Rational(n), 0, n, to_double(tail_u), double(n), "tail shift, unit terms");
    unit.check(tu + 1 >= n, 0, n, double(tu + 1), double(n), "theta(n) >= n-1");

    const std::uint64_t th = u64(by_head(Nat(n)));
    const Rational tail_h = a->sum_to(N + th) - head_sum;
    head.check(tail_h >= Rational(n), 0, n, to_double(tail_h), double(n), "tail shift, head ceiling");

    const std::uint64_t ts = u64(scaled(Nat(n)));
    const Rational s = c * a->sum_to(ts);
    scale.check(s >= Rational(n), 0, n, to_double(s), double(n), "scale");

    const std::uint64_t tw = u64(both(Nat(n)));
    const Rational w = a->sum_to(tw) + b->sum_to(tw);
    sum.check(w >= Rational(n), 0, n, to_double(w), double(n), "sum");
  }
}

void check_combine_linear(std::mt19937_64& rng, std::uint64_t H, Collector& conv, Collector& cauchy) {
  const std::uint64_t c1 = pick(rng, 1, 4);
  const std::uint64_t c2 = pick(rng, 1, 4);
  const std::uint64_t pq = pick(rng, 1, 16);
  const std::uint64_t pr = pick(rng, 1, 16);
  const Rational q(Nat(pq), Nat(8));
  const Rational r(Nat(pr), Nat(8));
  const Modulus phi1 = linear_rate(c1, Role::RateOfConvergence);
  const Modulus phi2 = linear_rate(c2, Role::RateOfConvergence);
  const Modulus phi = combine_linear(phi1, phi2, q, r);
  const Modulus psi = combine_linear(cauchy_from_conv(phi1).with_role(Role::CauchyModulus),
                                     cauchy_from_conv(phi2).with_role(Role::CauchyModulus), q, r);
  const std::size_t len = std::max(u64(phi(Nat(H))), u64(psi(Nat(H)))) + 2 * H + 1;
  const Fixed x = static_cast<Fixed>(pick(rng, 0, 4 * kScale));
  const Fixed y = static_cast<Fixed>(pick(rng, 0, 4 * kScale));
  const std::vector<Fixed> a = convergent(rng, 0, c1, len);
  const std::vector<Fixed> b = convergent(rng, 0, c2, len);
  // 8 * (q a_n + r b_n) and 8 * (q (x + a_n) + r (y + b_n)) on the grid
  std::vector<Fixed> cn(len), wn(len);
  for (std::size_t n = 0; n < len; ++n) {
    cn[n] = static_cast<Fixed>(pq) * a[n] + static_cast<Fixed>(pr) * b[n];
    wn[n] = static_cast<Fixed>(pq) * (x + a[n]) + static_cast<Fixed>(pr) * (y + b[n]);
  }
  for (std::uint64_t k = 0; k <= H; ++k) {
    const std::uint64_t N = u64(phi(Nat(k)));
    Fixed worst = 0;
    for (std::size_t n = N; n <= N + H; ++n) worst = std::max(worst, cn[n] < 0 ? -cn[n] : cn[n]);
    conv.check(within(worst, 0, k, 8 * static_cast<__int128>(kScale)), k, N, fixed_to_double(worst, 8 * kScale),
               1.0 / (k + 1), "q a_n + r b_n -> 0");
    const std::uint64_t M = u64(psi(Nat(k)));
    const Window w = window(wn, M, M + 2 * H);
    cauchy.check(within(w.hi, w.lo, k, 8 * static_cast<__int128>(kScale)), k, M,
                 fixed_to_double(w.hi - w.lo, 8 * kScale), 1.0 / (k + 1), "q x_n + r y_n Cauchy");
  }
}

/// floor(x * 2^64) / 2^64, never larger than x.
Rational grid_floor(const Rational& x) {
  static const Nat kGrid = pow_nat(Nat(2), 64);
  return Rational(floor_nat(x * Rational(kGrid)), kGrid);
}

void check_xu(std::mt19937_64& rng, std::uint64_t H, Collector& case1, Collector& case2) {
  auto a = std::make_shared<Series>(rng(), pick(rng, 1, 4));
  const Modulus theta = tight_divergence(a, "theta_a");
  const std::uint64_t c = pick(rng, 1, 3);
  const Rational s0(Nat(pick(rng, 0, 32)), Nat(8));

  for (int which = 1; which <= 2; ++which) {
    Collector& out = which == 1 ? case1 : case2;
    Nat L;
    Modulus sigma = Modulus::identity();
    if (which == 1) {
      L = std::max(Nat(c), ceil_nat(s0));
      sigma = xu_rate(theta, xu::VanishingFactor{linear_rate(c, Role::RateOfConvergence)}, L);
    } else {
      L = ceil_nat(s0) + c;
      const Nat cc(c);
      const Modulus chi = Modulus::plain([cc](const Nat& k) { return monus(cc * (k + 1), Nat(2)); },
                                         Role::CauchyModulus, "C(k+1)-2", true);
      sigma = xu_rate(theta, xu::SummablePerturbation{chi}, L);
    }
    const std::size_t len = u64(sigma(Nat(H))) + H + 1;
    std::vector<Rational> s(len);
    s[0] = s0;
    for (std::size_t n = 0; n + 1 < len; ++n) {
      const Rational& an = a->term(n);
      Rational rhs = (1 - an) * s[n];
      if (which == 1) {
        rhs += an * Rational(Nat(pick(rng, 0, 8 * c)), Nat(8 * (n + 1)));
      } else {
        rhs += Rational(Nat(pick(rng, 0, 8 * c)), Nat(8 * (n + 1) * (n + 2)));
      }
      const std::uint64_t damp = pick(rng, 0, 7);
      if (damp == 0) rhs *= Rational(3, 4);
      s[n + 1] = grid_floor(rhs);
    }
    for (std::uint64_t k = 0; k <= H; ++k) {
      const std::uint64_t N = u64(sigma(Nat(k)));
      const Rational bound(Nat(1), Nat(k + 1));
      for (std::size_t n = N; n <= N + H; ++n) {
        if (s[n] > bound) {
          out.check(false, k, n, to_double(s[n]), to_double(bound), which == 1 ? "xu case 1" : "xu case 2");
          break;
        }
      }
      out.check(true, k, N, 0, 0, "");
    }
  }
}

void check_meta_shift(std::mt19937_64& rng, std::uint64_t H, Collector& plus_out, Collector& dagger_out) {
  const std::uint64_t a = pick(rng, 0, 3);
  const std::uint64_t b = pick(rng, 0, 10);
  const std::uint64_t c = pick(rng, 0, 10);
  const MetaRate omega(
      [a, b, c](const Nat& k, const Counter& g, EvalBudget& bud) { return Nat(a * k + g(Nat(b), bud) + c); },
      "ak+g(b)+c");
  const std::uint64_t mod = pick(rng, 2, 13);
  std::vector<Counter> gallery = default_gallery();
  gallery.emplace_back([mod](const Nat& n, EvalBudget&) { return Nat((n * 7 + 3) % mod); },
                       "(7n+3) mod " + std::to_string(mod));
  const ShiftedMetaRate plus = meta_shift(omega, ShiftKind::Plus);
  const ShiftedMetaRate dagger = meta_shift(omega, ShiftKind::Dagger);
  // n + Omega(k, g_n) with g_n(b) = n + g(n + b), expanded by hand
  auto expected = [&](std::uint64_t k, const Counter& g, std::uint64_t n) {
    return Nat(n + a * k + n + g(Nat(n + b)) + c);
  };

  // Plus over the full (k, n) grid on the first g, over a k sample on the rest.
  for (std::size_t gi = 0; gi < gallery.size(); ++gi) {
    const Counter& g = gallery[gi];
    const std::uint64_t k_step = gi == 0 ? 1 : 25;
    for (std::uint64_t k = 0; k <= H; k += k_step) {
      for (std::uint64_t n = 0; n <= H; ++n) {
        const Nat got = plus(Nat(k), g, Nat(n));
        const Nat want = expected(k, g, n);
        plus_out.check(got == want, k, n, to_double(got), to_double(want), "plus on " + g.label());
      }
    }
  }
  const std::uint64_t k = pick(rng, 0, H);
  const Counter& g = gallery[pick(rng, 0, gallery.size() - 1)];
  Nat running = 0;
  Nat previous = 0;
  for (std::uint64_t n = 0; n <= H; ++n) {
    running = std::max(running, expected(k, g, n));
    const Nat got = dagger(Nat(k), g, Nat(n));
    dagger_out.check(got == running, k, n, to_double(got), to_double(running), "dagger = running max on " + g.label());
    dagger_out.check(got >= previous, k, n, to_double(previous), to_double(got), "dagger monotone");
    previous = got;
  }
}

void check_meta_transfer(std::mt19937_64& rng, std::uint64_t H, Collector& out) {
  const std::uint64_t cx = pick(rng, 1, 4);
  const std::uint64_t ce = pick(rng, 1, 4);
  const Modulus phi_x = linear_rate(cx, Role::RateOfConvergence);
  const MetaRate omega = meta_from_cauchy(cauchy_from_conv(phi_x));
  const Modulus phi = linear_rate(ce, Role::RateOfConvergence);
  const MetaRate gamma = meta_transfer(omega, phi);
  const std::vector<Counter> gallery = default_gallery();

  std::uint64_t longest = 0;
  for (const Counter& g : gallery) {
    const std::uint64_t B = u64(gamma(Nat(H), g));
    longest = std::max(longest, B + u64(g(Nat(B))) + 1);
  }
  const Fixed limit = static_cast<Fixed>(pick(rng, 0, 10 * kScale)) - 5 * kScale;
  const std::vector<Fixed> x = convergent(rng, limit, cx, longest);
  std::vector<Fixed> y(longest);
  for (std::size_t n = 0; n < longest; ++n) y[n] = x[n] + sign(rng) * shrinking(pick(rng, 0, 8 * ce), n);

  for (std::uint64_t k = 0; k <= H; ++k) {
    const __int128 eps_num = kScale;
    for (const Counter& g : gallery) {
      const std::uint64_t B = u64(gamma(Nat(k), g));
      std::optional<std::uint64_t> found;
      for (std::uint64_t N = 0; N <= B && !found; ++N) {
        const std::uint64_t end = N + u64(g(Nat(N)));
        Fixed lo = y[N], hi = y[N];
        bool ok = true;
        for (std::size_t i = N + 1; i <= end; ++i) {
          lo = std::min(lo, y[i]);
          hi = std::max(hi, y[i]);
          if (!within(hi, lo, k, eps_num)) {
            ok = false;
            break;
          }
        }
        if (ok) found = N;
      }
      out.check(found.has_value(), k, B, found ? 0.0 : 1.0, 0.0, "transfer on " + g.label());
    }
  }
}

void check_lmeta(std::mt19937_64& rng, std::uint64_t H, Collector& out) {
  const std::uint64_t c = pick(rng, 1, 4);
  const std::uint64_t L = pick(rng, 1, 12);
  const Modulus phi = linear_rate(c, Role::RateOfAsymptoticRegularity);
  const Modulus phi_L = lmeta_from_asreg(phi, Nat(L));
  const std::size_t len = u64(phi_L(Nat(H))) + L + 1;
  std::vector<Fixed> x(len);
  x[0] = static_cast<Fixed>(pick(rng, 0, 4 * kScale));
  for (std::size_t n = 0; n + 1 < len; ++n) x[n + 1] = x[n] + sign(rng) * shrinking(pick(rng, 0, 8 * c), n);
  for (std::uint64_t k = 0; k <= H; ++k) {
    const std::uint64_t N = u64(phi_L(Nat(k)));
    const Window w = window(x, N, N + L);
    out.check(within(w.hi, w.lo, k), k, N, fixed_to_double(w.hi - w.lo), 1.0 / (k + 1), "L-window");
  }
}

}  // namespace

std::vector<Verdict> run_moduli_suite(const SuiteOptions& opt) {
  Collector cfc("cauchy_from_conv", opt.seed);
  Collector unit("transform_divergence.tail_shift_unit", opt.seed);
  Collector head("transform_divergence.tail_shift_head", opt.seed);
  Collector scale("transform_divergence.scale", opt.seed);
  Collector sum("transform_divergence.sum", opt.seed);
  Collector lin("combine_linear.convergence", opt.seed);
  Collector linc("combine_linear.cauchy", opt.seed);
  Collector xu1("xu_rate.case1", opt.seed);
  Collector xu2("xu_rate.case2", opt.seed);
  Collector plus("meta_shift.plus", opt.seed);
  Collector dagger("meta_shift.dagger", opt.seed);
  Collector transfer("meta_transfer", opt.seed);
  Collector lmeta("lmeta_from_asreg", opt.seed);

  for (std::uint64_t i = 0; i < opt.cases; ++i) {
    std::mt19937_64 rng(opt.seed + i);
    const std::uint64_t H = opt.horizon;
    check_cauchy_from_conv(rng, H, cfc);
    check_divergence(rng, H, unit, head, scale, sum);
    check_combine_linear(rng, H, lin, linc);
    check_xu(rng, H, xu1, xu2);
    check_meta_shift(rng, H, plus, dagger);
    check_meta_transfer(rng, H, transfer);
    check_lmeta(rng, H, lmeta);
  }
  std::vector<Verdict> out;
  for (Collector* c : {&cfc, &unit, &head, &scale, &sum, &lin, &linc, &xu1, &xu2, &plus, &dagger, &transfer, &lmeta}) {
    out.push_back(c->done(opt.cases));
  }
  return out;
}

Verdict run_sabach_shtern_suite(std::uint64_t seed, std::uint64_t cases, std::uint64_t n_max) {
  Collector out("sabach_shtern", seed);
  for (std::uint64_t i = 0; i < cases; ++i) {
    std::mt19937_64 rng(seed + 1000 + i);
    const std::uint64_t N = pick(rng, 2, 6);
    const std::uint64_t J = pick(rng, N, N + 6);
    const std::uint64_t gq = pick(rng, 1, 6);
    const Rational gamma(Nat(pick(rng, 1, gq)), Nat(gq));
    const Rational L(Nat(pick(rng, 1, 20)), Nat(pick(rng, 1, 4)));
    const auto bound = sabach_shtern_bound(L, Nat(J), Nat(N), gamma);
    auto a = [&](std::uint64_t n) { return Rational(Rational(N) / (gamma * Rational(n + J))); };
    Rational s = L * Rational(Nat(pick(rng, 0, 8)), Nat(8));
    for (std::uint64_t n = 0; n <= n_max; ++n) {
      const Rational b = bound(Nat(n));
      out.check(s <= b, i, n, to_double(s), to_double(b), "s_n <= JL/(gamma(n+J))");
      const Rational c = L * Rational(Nat(pick(rng, 0, 8)), Nat(8));
      const Rational an = a(n);
      const Rational an1 = a(n + 1);
      s = (1 - gamma * an1) * s + (an - an1) * c;
    }
  }
  return out.done(cases);
}

}  // namespace genvam
