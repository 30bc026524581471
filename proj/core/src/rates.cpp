#include "genvam/rates.hpp"

#include <stdexcept>
#include <utility>

namespace genvam {

namespace {

Nat max2(Nat a, Nat b) { return a > b ? a : b; }

/// 4K(k+1) - 1
Nat quad_index(const Nat& K, const Nat& k) { return monus(4 * K * (k + 1), Nat(1)); }

void check_alpha(const Rational& alpha) {
  if (alpha < 0 || alpha >= 1) throw std::invalid_argument("alpha must lie in [0,1)");
}

}  // namespace

Modulus rate_asreg(const Schedule& s, const Rational& alpha, const Nat& K, LambdaVariant variant) {
  check_alpha(alpha);
  if (K == 0) throw std::invalid_argument("K must be positive");
  const Modulus sigma1 = s.need(s.w.sigma1, "sigma1 (sum alpha_n diverges)");
  const Modulus sigma2 = s.need(s.w.sigma2, "sigma2 (sum |alpha_n - alpha_{n+1}| converges)");
  Modulus chi = Modulus::identity();
  switch (variant) {
    case LambdaVariant::ResForward:
    case LambdaVariant::ResBackward: {
      const LambdaWitnesses lw = derive_lambda_witnesses(s);
      const auto& t = variant == LambdaVariant::ResForward ? lw.theta1 : lw.theta1_star;
      if (!t) {
        throw std::invalid_argument(std::string("schedule '") + s.name + "' lacks " +
                                    (variant == LambdaVariant::ResForward ? "theta1 (sum |1 - lambda_{n+1}/lambda_n| converges)" : "theta1* (sum |1 - lambda_n/lambda_{n+1}| converges)"));
      }
      const Modulus theta1 = *t;
      chi = Modulus([sigma2, theta1, K](const Nat& k, EvalBudget& b) {
                      const Nat i = quad_index(K, k);
                      return max2(sigma2(i, b), theta1(i, b));
                    },
                    Role::CauchyModulus, "chi");
      break;
    }
    case LambdaVariant::LowerBound: {
      const Modulus theta2 = s.need(s.w.theta2, "theta2 (sum |lambda_n - lambda_{n+1}| converges)");
      const Nat big = s.need(s.w.Lambda, "Lambda (lambda_n bounded below)");
      const Nat start = s.need(s.w.N_Lambda, "N_Lambda (lambda_n bounded below)");
      chi = Modulus([sigma2, theta2, K, big, start](const Nat& k, EvalBudget& b) {
                      Nat v = max2(sigma2(quad_index(K, k), b), start);
                      return max2(std::move(v), theta2(monus(4 * K * big * (k + 1), Nat(1)), b));
                    },
                    Role::CauchyModulus, "chi");
      break;
    }
  }
  const Modulus upper = sigma1.prefix_max();
  const Rational gap = Rational(1) - alpha;
  return Modulus(
      [upper, chi, gap, K](const Nat& k, EvalBudget& b) {
        const Nat inner = chi(2 * k + 1, b) + 1 + ceil_ln(Rational(4 * K * (k + 1)));
        return upper(ceil_nat(Rational(inner) / gap) + 1, b);
      },
      Role::RateOfAsymptoticRegularity, "Phi", true);
}

Modulus rate_Tn_asreg(const Modulus& phi, const Modulus& sigma3, const Nat& K) {
  return Modulus([phi, sigma3, K](const Nat& k, EvalBudget& b) { return max2(sigma3(quad_index(K, k), b), phi(2 * k + 1, b)); },
                 Role::RateOfAsymptoticRegularity, "Psi", phi.monotone() && sigma3.monotone());
}

Modulus rate_Tm_asreg(const Modulus& psi, const Nat& Lambda, const Nat& N_Lambda, const Nat& Lambda_m) {
  if (Lambda_m == 0) throw std::invalid_argument("Lambda_m must be positive");
  if (Lambda == 0) throw std::invalid_argument("Lambda must be positive");
  return Modulus(
      [psi, Lambda, N_Lambda, Lambda_m](const Nat& k, EvalBudget& b) {
        Nat v = max2(N_Lambda, psi(monus(Lambda_m * Lambda * (k + 1), Nat(1)), b));
        return max2(std::move(v), psi(2 * k + 1, b));
      },
      Role::RateOfAsymptoticRegularity, "Psi_m", psi.monotone());
}

Modulus rate_dxy(const Schedule& s, const Rational& alpha, const Nat& K) {
  check_alpha(alpha);
  if (K == 0) throw std::invalid_argument("K must be positive");
  const Modulus sigma1 = s.need(s.w.sigma1, "sigma1 (sum alpha_n diverges)");
  const Modulus sigma4 = s.need(s.w.sigma4, "sigma4 (|alpha_{n+1} - alpha_n| / alpha_n^2 -> 0)");
  const Modulus theta4 = s.need(s.w.theta4, "theta4 (lambda_n -> lambda)");
  const Rational lambda = s.need(s.w.lambda_limit, "lambda (lambda_n -> lambda)");
  const Rational gap = Rational(1) - alpha;
  Modulus psi(
      [theta4, sigma4, K, lambda, gap](const Nat& k, EvalBudget& b) {
        const Rational base(4 * K * (k + 1));
        const Nat i = monus(ceil_nat(base / (lambda * gap)), Nat(1));
        const Nat j = monus(ceil_nat(base / (gap * gap)), Nat(1));
        return max2(theta4(i, b), sigma4(j, b));
      },
      Role::Generic, "psi");
  return Modulus(
      [sigma1, psi, gap, K](const Nat& k, EvalBudget& b) {
        const Nat inner = psi(2 * k + 1, b) + ceil_ln(Rational(4 * K * (k + 1)));
        return Nat(sigma1(ceil_nat(Rational(inner) / gap), b) + 1);
      },
      Role::RateOfConvergence, alpha == 0 ? "Sigma*" : "Sigma");
}

TildeSuite rate_tilde_suite(const Modulus& sigma, const Modulus& sigma3, const Modulus& theta4, const Nat& l,
                            const Nat& K, const std::map<std::uint64_t, Nat>& Lambda_star) {
  if (l == 0) throw std::invalid_argument("l must be positive");
  Modulus tilde([sigma, sigma3, K](const Nat& k, EvalBudget& b) { return max2(sigma3(quad_index(K, k), b), sigma(4 * k + 3, b)); },
                Role::RateOfAsymptoticRegularity, "Sigma~");
  Modulus tn([tilde, theta4, l](const Nat& k, EvalBudget& b) { return max2(theta4(l, b), tilde(2 * k + 1, b)); },
             Role::RateOfAsymptoticRegularity, "Psi~");
  TildeSuite out{tilde, tn, {}};
  for (const auto& [m, bound] : Lambda_star) {
    const Nat factor = 1 + (l + 1) * bound;
    out.tm.emplace(m, Modulus([tilde, factor](const Nat& k, EvalBudget& b) { return tilde(monus(factor * (k + 1), Nat(1)), b); },
                              Role::RateOfAsymptoticRegularity, "Psi~_" + std::to_string(m)));
  }
  return out;
}

LinearSuite rate_linear_suite(const Rational& alpha, const Nat& K) {
  check_alpha(alpha);
  if (K == 0) throw std::invalid_argument("K must be positive");
  const Nat c = ceil_nat(Rational(1) / (Rational(1) - alpha));
  const Nat J = 2 * c;
  const Nat J0 = 6 * c * c;
  auto line = [J, K](Nat slope, std::string label) {
    return Modulus([slope, J, K](const Nat& k, EvalBudget&) { return monus(slope * K * (k + 1), J); },
                   Role::RateOfAsymptoticRegularity, std::move(label), true);
  };
  return LinearSuite{J, J0, line(J0, "Phi0"), line(J0 + 2 * J, "Psi0"), line(2 * J0 + 4 * J, "Theta0")};
}

Modulus rate_offset_asreg(const Rational& alpha, const Nat& K) {
  check_alpha(alpha);
  if (K == 0) throw std::invalid_argument("K must be positive");
  const Nat J = 2 * ceil_nat(Rational(1) / (Rational(1) - alpha)) + 1;
  const Nat slope = ceil_nat(Rational(3 * J * J * K, Nat(2)));
  return Modulus([slope, J](const Nat& k, EvalBudget&) { return monus(slope * (k + 1), J); },
                 Role::RateOfAsymptoticRegularity, "Phi0'", true);
}

Modulus rate_gamma(const Modulus& theta4, const Nat& l, const Rational& lambda, const Rational& d_xz, bool x_in_F) {
  if (x_in_F) return Modulus::constant(Nat(0), Role::CauchyModulus).with_label("gamma=0");
  if (l == 0) throw std::invalid_argument("l must be positive");
  const Rational denom = lambda * Rational(l + 1) - 1;
  if (denom <= 0) throw std::invalid_argument("rate_gamma needs lambda > 1/(l+1)");
  const Rational L = Rational(2 * (l + 1)) * d_xz / denom;
  return Modulus(
      [theta4, l, L](const Nat& k, EvalBudget& b) {
        const Nat i = monus(2 * ceil_nat(L * Rational(k + 1)), Nat(1));
        return max2(theta4(l, b), theta4(i, b));
      },
      Role::CauchyModulus, "gamma");
}

MetaRate rate_browder_meta(const Nat& M, const browder::Variant& variant) {
  if (M == 0) throw std::invalid_argument("M must be positive");
  if (std::holds_alternative<browder::Nonincreasing>(variant)) {
    return MetaRate(
        [M](const Nat& k, const Counter& g, EvalBudget& b) {
          const Nat times = M * M * (k + 1) * (k + 1);
          return g.tilde().iterate(times, Nat(0), b);
        },
        "Omega*");
  }
  const auto& v = std::get<browder::VanishingAlpha>(variant);
  const Modulus sigma3 = v.sigma3;
  const Modulus h_upper = v.h.prefix_max();
  const Modulus s3_upper = sigma3.prefix_max();
  return MetaRate(
      [M, sigma3, h_upper, s3_upper](const Nat& k, const Counter& g, EvalBudget& b) {
        const Counter gt = g.tilde();
        const Counter gh([sigma3, h_upper, gt](const Nat& n, EvalBudget& bb) { return h_upper(gt(sigma3(n, bb), bb), bb); },
                         "g_h");
        const Nat times = 4 * M * M * (k + 1) * (k + 1);
        return s3_upper(gh.iterate(times, Nat(0), b), b);
      },
      "Omega*");
}

MetaRate rate_hppa_meta(const Modulus& sigma_star, const MetaRate& omega_star) {
  return meta_transfer(omega_star, sigma_star);
}

MetaRate rate_genvam_meta(const MetaRate& phi_star_M, const Modulus& sigma1, const Rational& alpha, const Nat& M) {
  if (alpha <= 0 || alpha >= 1) {
    throw std::invalid_argument("the genVAM metastability rate needs alpha in (0,1); use the abstract HPPA rate for alpha = 0");
  }
  if (M == 0) throw std::invalid_argument("M must be positive");
  const ShiftedMetaRate dagger = meta_shift(phi_star_M, ShiftKind::Dagger);
  const Modulus upper = sigma1.prefix_max();
  const Rational gap = Rational(1) - alpha;

  // sigma*(n) = sigma1+(ceil(n/(1-alpha))); beta(eps, n) = sigma*(n + ceil(ln(2M/eps))) + 1
  auto beta = [upper, gap, M](const Rational& eps, const Nat& n, EvalBudget& b) {
    const Nat shift = ceil_ln(Rational(2 * M) / eps);
    return Nat(upper(ceil_nat(Rational(n + shift) / gap), b) + 1);
  };
  // Phi~(eps, g, n) = Phi_dagger(ceil(1/eps) - 1, g, n)
  auto phi_tilde = [dagger](const Rational& eps, const Counter& g, const Nat& n, EvalBudget& b) {
    return dagger(accuracy_index(eps), g, n, b);
  };

  // Psi(eps, g, n) in the window convention [N; g(N)].
  auto psi = [beta, phi_tilde, alpha, gap, M](const Rational& eps, const Counter& g, const Nat& n, EvalBudget& b) {
    const Rational eps_t = eps * gap / 9;
    const Rational eps0 = eps_t * gap / 2;
    const Nat L = ceil_log_base(alpha, eps_t / Rational(2 * M));
    const Rational third = eps / 3;

    Counter f0(
        [beta, g, third](const Nat& q, EvalBudget& bb) {
          const Nat bq = beta(third, q, bb);
          return max2(g(bq, bb), bq);
        },
        "F^0");
    // F^i for i in [0; L], each closing over the previous one.
    std::vector<Counter> F{f0};
    const std::uint64_t levels = static_cast<std::uint64_t>(L);
    F.reserve(levels + 1);
    for (std::uint64_t i = 0; i < levels; ++i) {
      const Counter prev = F.back();
      F.emplace_back(
          [f0, prev, phi_tilde, eps0](const Nat& q, EvalBudget& bb) { return max2(f0(q, bb), phi_tilde(eps0, prev, q, bb)); },
          "F^" + std::to_string(i + 1));
    }
    Nat acc = n;
    for (std::uint64_t i = 0; i <= levels; ++i) {
      EvalBudget::Scope scope(b);
      acc = phi_tilde(eps0, F[levels - i], acc, b);
    }
    return beta(third, acc, b);
  };

  return MetaRate(
      [psi](const Nat& k, const Counter& g, EvalBudget& b) { return psi(Rational(Nat(1), Nat(k + 1)), g.tilde(), Nat(0), b); },
      "Omega");
}

const RateEntry& RateBundle::at(const std::string& id) const {
  auto it = rates.find(id);
  if (it == rates.end()) throw std::out_of_range("no rate named " + id);
  return it->second;
}

}  // namespace genvam
