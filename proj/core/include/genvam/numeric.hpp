#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cstdint>
#include <string>
#include <string_view>

namespace genvam {

/// Arbitrary-precision natural number. Values are kept nonnegative by the
/// helpers below; negative results of subtraction are truncated to zero.
using Nat = boost::multiprecision::mpz_int;

/// Exact rational used for schedule parameters and captured constants.
using Rational = boost::multiprecision::mpq_rational;

/// Truncated subtraction: max{m - n, 0}.
Nat monus(const Nat& m, const Nat& n);

/// Exact ceiling of a rational. Throws std::domain_error for negative input.
Nat ceil_nat(const Rational& x);

/// Exact floor of a nonnegative rational.
Nat floor_nat(const Rational& x);

/// Smallest s with s*s >= m.
Nat ceil_sqrt(const Nat& m);

/// Smallest s with s*s*s >= m.
Nat ceil_cbrt(const Nat& m);

/// 4^e, 2^e and friends for natural exponents.
Nat pow_nat(const Nat& base, std::uint64_t exponent);

/// Upper bound on ceil(ln x) for rational x >= 1.
///
/// The logarithm is evaluated with 50 significant digits; if the result lies
/// within 1e-9 of an integer the ceiling is bumped by one. An enlarged value
/// never invalidates a rate, a smaller one might.
Nat ceil_ln(const Rational& x);

/// Upper bound on ceil(log_base x) for base in (0,1) and x in (0,1], computed
/// as ceil(ln x / ln base) with the same bump rule as ceil_ln.
Nat ceil_log_base(const Rational& base, const Rational& x);

/// Parse "3", "-2", "1/3", "0.25" or "1e-3" into an exact rational.
Rational parse_rational(std::string_view text);

/// Smallest dyadic rational with 2^-precision_bits resolution that is >= x.
/// Used to lift measured floating distances to exact, never-smaller values.
Rational rational_upper(double x, unsigned precision_bits = 52);

double to_double(const Rational& x);
double to_double(const Nat& x);

std::string to_string(const Nat& x);
std::string to_string(const Rational& x);

/// Nat from a decimal string or scientific literal such as "1e12".
Nat parse_nat(std::string_view text);

bool fits_u64(const Nat& x);

}  // namespace genvam
