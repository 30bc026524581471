#pragma once

// Constructors for the named rates: asymptotic regularity, convergence of
// d(x_n, y_n), the linear rates and the metastability rates.

#include "genvam/combinators.hpp"
#include "genvam/schedule.hpp"

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace genvam {

/// Which lambda hypothesis feeds the asymptotic regularity rate.
enum class LambdaVariant {
  ResForward,   ///< Res(n, n+1) with theta1
  ResBackward,  ///< Res(n+1, n) with theta1*
  LowerBound,   ///< (N_Lambda, Lambda, theta2)
};

/// Phi(k) = sigma1+(ceil((chi(2k+1) + 1 + ceil(ln(4K(k+1)))) / (1-alpha)) + 1)
Modulus rate_asreg(const Schedule& s, const Rational& alpha, const Nat& K, LambdaVariant variant);

/// Psi(k) = max{sigma3(4K(k+1)-1), Phi(2k+1)}
Modulus rate_Tn_asreg(const Modulus& phi, const Modulus& sigma3, const Nat& K);

/// Psi_m(k) = max{N_Lambda, Psi(Lambda_m Lambda (k+1) - 1), Psi(2k+1)}
Modulus rate_Tm_asreg(const Modulus& psi, const Nat& Lambda, const Nat& N_Lambda, const Nat& Lambda_m);

/// Sigma(k) = sigma1(ceil((psi(2k+1) + ceil(ln(4K(k+1)))) / (1-alpha))) + 1 with
/// psi(k) = max{theta4(ceil(4K(k+1)/(lambda(1-alpha))) - 1), sigma4(ceil(4K(k+1)/(1-alpha)^2) - 1)}.
Modulus rate_dxy(const Schedule& s, const Rational& alpha, const Nat& K);

struct TildeSuite {
  Modulus tilde;                     ///< Sigma~ for d(x_n, T~ x_n)
  Modulus tn;                        ///< Psi for d(x_n, T_n x_n)
  std::map<std::uint64_t, Modulus> tm;  ///< Psi_m for d(x_n, T_m x_n)
};

/// Sigma~(k) = max{sigma3(4K(k+1)-1), Sigma(4k+3)}, Psi(k) = max{theta4(l), Sigma~(2k+1)},
/// Psi_m(k) = Sigma~((1 + (l+1) Lambda*_m)(k+1) - 1).
TildeSuite rate_tilde_suite(const Modulus& sigma, const Modulus& sigma3, const Modulus& theta4, const Nat& l,
                            const Nat& K, const std::map<std::uint64_t, Nat>& Lambda_star);

struct LinearSuite {
  Nat J, J0;
  Modulus asreg;  ///< J0 K (k+1) - J
  Modulus tn;     ///< (J0 + 2J) K (k+1) - J
  Modulus tm;     ///< (2 J0 + 4J) K (k+1) - J
};
LinearSuite rate_linear_suite(const Rational& alpha, const Nat& K);

/// ceil(3 J^2 K / 2)(k+1) - J with J = 2 ceil(1/(1-alpha)) + 1.
Modulus rate_offset_asreg(const Rational& alpha, const Nat& K);

/// Cauchy modulus of (T_n x): 0 when x is a common fixed point, otherwise
/// max{theta4(l), theta4(2 ceil(L(k+1)) - 1)} with L = 2(l+1)d(x,z)/(lambda(l+1)-1).
Modulus rate_gamma(const Modulus& theta4, const Nat& l, const Rational& lambda, const Rational& d_xz, bool x_in_F);

namespace browder {
struct Nonincreasing {};
struct VanishingAlpha {
  Modulus sigma3;
  Modulus h;  ///< alpha_n >= 1/(h(n)+1)
};
using Variant = std::variant<Nonincreasing, VanishingAlpha>;
}  // namespace browder

/// Nonincreasing: (k,g) -> g~^(M^2 (k+1)^2)(0)
/// VanishingAlpha: (k,g) -> sigma3+(g_h^(4 M^2 (k+1)^2)(0)), g_h(n) = max{h(i) : i <= g~(sigma3(n))}
MetaRate rate_browder_meta(const Nat& M, const browder::Variant& variant);

/// max{Sigma*(3k+2), Omega*(3k+2, h_{k,g})}
MetaRate rate_hppa_meta(const Modulus& sigma_star, const MetaRate& omega_star);

/// The nested construction for genVAM with bounded C (diameter <= M) and alpha in (0,1).
/// phi_star_M must be the abstract-HPPA rate built with M in place of K.
MetaRate rate_genvam_meta(const MetaRate& phi_star_M, const Modulus& sigma1, const Rational& alpha, const Nat& M);

/// One named rate with the hypotheses it consumed.
struct RateEntry {
  std::string id;
  std::variant<Modulus, MetaRate> rate;
  std::vector<std::string> hypotheses;
  std::string describe;

  bool is_meta() const noexcept { return std::holds_alternative<MetaRate>(rate); }
  const Modulus& modulus() const { return std::get<Modulus>(rate); }
  const MetaRate& meta() const { return std::get<MetaRate>(rate); }
};

struct RateBundle {
  std::map<std::string, RateEntry> rates;
  std::map<std::string, std::string> constants;  ///< K, M, l, Lambda_m ... as text

  void add(RateEntry e) { rates.insert_or_assign(e.id, std::move(e)); }
  const RateEntry& at(const std::string& id) const;
};

}  // namespace genvam
