#include "genvam/iteration.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace genvam {

std::optional<double> IterationConfig::lambda_limit() const {
  if (!schedule.w.lambda_limit) return std::nullopt;
  return to_double(*schedule.w.lambda_limit);
}

void IterationConfig::validate() const {
  const Space& s = space();
  s.validate(x0);
  s.validate(z);
  s.validate(anchor(f));
  if (!s.contains(x0)) throw std::invalid_argument("x0 lies outside C");
  if (!s.contains(z)) throw std::invalid_argument("z lies outside C");
  const double a = alpha();
  if (!(a >= 0.0 && a < 1.0)) throw std::invalid_argument("contraction constant must lie in [0,1)");
  for (std::uint64_t n = 0; n <= 20; ++n) {
    const double gap = s.dist(family_eval(family, n, z), z);
    if (gap > metric_tol) {
      std::ostringstream why;
      why << "z is not fixed by T_" << n << ": d(T_n z, z) = " << gap;
      throw std::invalid_argument(why.str());
    }
  }
}

std::string BoundConstant::describe() const {
  std::ostringstream o;
  o.precision(17);
  o << "K=" << to_string(K) << " from d(x0,z)=" << d_x0_z << ", d(f(z),z)=" << d_fz_z << ", alpha=" << alpha;
  return o.str();
}

BoundConstant compute_Kz(const IterationConfig& c) {
  const Space& s = c.space();
  BoundConstant b;
  b.alpha = c.alpha();
  if (b.alpha >= 1.0) throw std::invalid_argument("K_z needs alpha < 1");
  if (!s.contains(c.z)) throw std::invalid_argument("z lies outside C");
  b.d_x0_z = s.dist(c.x0, c.z);
  b.d_fz_z = s.dist(contraction_eval(s, c.f, c.z), c.z);
  const double m = std::max(b.d_x0_z, b.d_fz_z / (1.0 - b.alpha));
  b.K = std::max(Nat(1), ceil_nat(rational_upper(m, 40)));
  // rational_upper may round 10 up to 10 + 2^-40; undo that when m is an exact integer.
  if (m == std::floor(m) && m >= 1.0) b.K = Nat(static_cast<std::uint64_t>(m));
  return b;
}

namespace {

std::string hash_config(const IterationConfig& c, std::uint64_t n_max) {
  std::ostringstream o;
  o.precision(17);
  o << c.space().describe() << '|' << c.family.label() << '|' << c.schedule.name << '|' << c.alpha() << '|'
    << c.x0.str() << '|' << anchor(c.f).str() << '|' << c.z.str() << '|' << n_max;
  const std::string text = o.str();
  std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  std::ostringstream hex;
  hex << std::hex << h;
  return hex.str();
}

}  // namespace

Trace run_genvam(const IterationConfig& c, std::uint64_t n_max) {
  if (n_max > c.budget) throw std::invalid_argument("n_max exceeds the iteration budget");
  const Space& s = c.space();
  Trace t;
  t.config_hash = hash_config(c, n_max);
  t.iterates.reserve(n_max + 1);
  t.iterates.push_back(c.x0);
  const std::optional<double> lim = c.lambda_limit();
  const bool tilde = c.record_tilde && lim.has_value();
  const bool browder = c.record_browder && lim.has_value();
  for (std::uint64_t m : c.tm_indices) t.tm[m].reserve(n_max);
  for (std::uint64_t n = 0; n < n_max; ++n) {
    try {
      const Point& x = t.iterates.back();
      const double a = c.schedule.alpha(n);
      const double l = c.schedule.lambda(n);
      if (!(a >= 0.0 && a <= 1.0)) throw std::runtime_error("alpha_n outside [0,1]");
      const Point tx = family_eval(c.family, n, x);
      const Point fx = contraction_eval(s, c.f, x);
      Point next = s.combine(fx, tx, 1.0 - a);
      t.alpha.push_back(a);
      t.lambda.push_back(l);
      t.step.push_back(s.dist(x, next));
      t.tn.push_back(s.dist(x, tx));
      for (std::uint64_t m : c.tm_indices) t.tm[m].push_back(s.dist(x, family_eval(c.family, m, x)));
      if (tilde) t.tilde.push_back(s.dist(x, tilde_T_eval(c.family, *lim, x)));
      if (browder) {
        const Point* warm = t.browder.empty() ? nullptr : &t.browder.back();
        Point y = browder_point(c, n, c.eps_fp, warm);
        t.browder_gap.push_back(s.dist(x, y));
        t.browder.push_back(std::move(y));
      }
      t.iterates.push_back(std::move(next));
    } catch (const std::exception& e) {
      throw std::runtime_error("iteration failed at n=" + std::to_string(n) + ": " + e.what());
    }
  }
  return t;
}

Point browder_point(const IterationConfig& c, std::uint64_t n, double eps_fp, const Point* warm) {
  const std::optional<double> lim = c.lambda_limit();
  if (!lim) throw std::invalid_argument("browder_point needs the limit lambda of the schedule");
  const Space& s = c.space();
  const double a = c.schedule.alpha(n);
  const double delta = a * c.alpha() + 1.0 - a;
  if (!(delta < 1.0)) throw std::invalid_argument("S_n is not a contraction (delta_n >= 1)");
  auto S = [&](const Point& y) {
    return s.combine(contraction_eval(s, c.f, y), tilde_T_eval(c.family, *lim, y), 1.0 - a);
  };
  Point y = warm ? *warm : c.z;
  Point next = S(y);
  const double d0 = s.dist(y, next);
  if (d0 == 0.0) return next;
  const double cap = std::ceil(std::log(eps_fp * (1.0 - delta) / d0) / std::log(delta));
  const long limit = static_cast<long>(std::clamp(cap, 1.0, 1e8)) + 2;
  for (long i = 0; i < limit; ++i) {
    y = std::move(next);
    next = S(y);
    const double step = s.dist(y, next);
    // distance to the fixed point is at most step * delta / (1 - delta)
    if (step * delta <= eps_fp * (1.0 - delta)) break;
  }
  return next;
}

std::vector<Point> w_sequence(const IterationConfig& c, const Point& x, std::uint64_t n_max) {
  if (n_max > c.budget) throw std::invalid_argument("n_max exceeds the iteration budget");
  const Space& s = c.space();
  std::vector<Point> w;
  w.reserve(n_max + 1);
  w.push_back(x);
  for (std::uint64_t n = 0; n < n_max; ++n) {
    try {
      const double a = c.schedule.alpha(n);
      w.push_back(s.combine(x, family_eval(c.family, n, w.back()), 1.0 - a));
    } catch (const std::exception& e) {
      throw std::runtime_error("anchored run failed at n=" + std::to_string(n) + ": " + e.what());
    }
  }
  return w;
}

Verdict check_trace_invariants(const IterationConfig& c, const Trace& t, const BoundConstant& K) {
  Verdict v;
  v.id = "trace_invariants";
  const double tol = c.metric_tol;
  v.slack = tol;
  const Space& s = c.space();
  const double k = to_double(K.K);
  const double a = c.alpha();
  const std::optional<double> lim = c.lambda_limit();
  auto check = [&](const char* what, std::uint64_t n, double lhs, double rhs) {
    v.note_margin(rhs - lhs);
    ++v.samples;
    if (lhs > rhs + tol && v.status != Status::Fail) {
      std::ostringstream why;
      why.precision(17);
      why << what << " fails at n=" << n << ": " << lhs << " > " << rhs;
      v.fail(Violation{0, n, lhs, rhs, what}, why.str());
    }
  };
  for (std::uint64_t n = 0; n < t.rows() && v.status != Status::Fail; ++n) {
    const Point& x = t.iterates[n];
    const Point fx = contraction_eval(s, c.f, x);
    const Point tx = family_eval(c.family, n, x);
    check("d(x_n,z) <= K", n, s.dist(x, c.z), k);
    check("d(f(x_n),z) <= K", n, s.dist(fx, c.z), k);
    check("d(T_n x_n,z) <= K", n, s.dist(tx, c.z), k);
    check("d(x_n,x_n+1) <= 2K", n, t.step[n], 2 * k);
    check("d(x_n,T_n x_n) <= d(x_n,x_n+1) + 2K alpha_n", n, t.tn[n], t.step[n] + 2 * k * t.alpha[n]);
    for (const auto& [m, col] : t.tm) {
      const Point tmx = family_eval(c.family, m, x);
      check("d(T_m x_n,x_n) <= 2K", n, col[n], 2 * k);
      check("d(T_m x_n,f(x_n)) <= 2K", n, s.dist(tmx, fx), 2 * k);
      const double ratio = c.schedule.lambda(m) / t.lambda[n];
      check("d(T_m x_n,x_n) <= (|1-l_m/l_n|+1) d(T_n x_n,x_n)", n, col[n], (std::abs(1 - ratio) + 1) * t.tn[n]);
      if (ratio >= 1.0) {
        check("d(T_m x_n,x_n) <= (l_m/l_n) d(T_n x_n,x_n)", n, col[n], ratio * t.tn[n]);
      } else {
        check("d(T_m x_n,x_n) <= (2-l_m/l_n) d(T_n x_n,x_n)", n, col[n], (2 - ratio) * t.tn[n]);
      }
    }
    if (!t.browder_gap.empty()) {
      check("d(x_n,y_n) <= 2K", n, t.browder_gap[n], 2 * k + c.eps_fp);
      check("d(y_n,z) <= d(f(z),z)/(1-alpha)", n, s.dist(t.browder[n], c.z), K.d_fz_z / (1 - a) + c.eps_fp);
      if (n + 1 < t.rows() && lim) {
        const double an = t.alpha[n];
        const double an1 = t.alpha[n + 1];
        const double q = (2 * k / (*lim * (1 - a))) * std::abs(t.lambda[n] - *lim) +
                         (2 * k / ((1 - a) * (1 - a))) * std::abs(an - an1) / (an * an);
        check("d(x_n+1,y_n+1) recurrence", n, t.browder_gap[n + 1],
              (1 - (1 - a) * an) * t.browder_gap[n] + (1 - a) * an * q + 2 * c.eps_fp);
      }
    }
  }
  return v;
}

}  // namespace genvam
