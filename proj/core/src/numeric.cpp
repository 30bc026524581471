#include "genvam/numeric.hpp"

#include <algorithm>

#include <boost/multiprecision/mpfr.hpp>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace genvam {

namespace bmp = boost::multiprecision;
using Real = bmp::mpfr_float_50;

namespace {

constexpr double kIntegerProximity = 1e-9;

Nat sound_ceil(const Real& value) {
  Real c = bmp::ceil(value);
  Real f = bmp::floor(value);
  // Within 1e-9 of an integer: the true value may sit just above it.
  if (bmp::abs(value - f) < kIntegerProximity || bmp::abs(c - value) < kIntegerProximity) {
    c = bmp::round(value) + 1;
  }
  if (c < 0) return Nat(0);
  return Nat(c.convert_to<Nat>());
}

Real to_real(const Rational& x) {
  return Real(Real(bmp::numerator(x)) / Real(bmp::denominator(x)));
}

}  // namespace

Nat monus(const Nat& m, const Nat& n) { return m > n ? Nat(m - n) : Nat(0); }

Nat ceil_nat(const Rational& x) {
  if (x < 0) throw std::domain_error("ceil_nat: negative argument " + to_string(x));
  Nat num = bmp::numerator(x);
  Nat den = bmp::denominator(x);
  Nat q = num / den;
  if (q * den != num) q += 1;
  return q;
}

Nat floor_nat(const Rational& x) {
  if (x < 0) throw std::domain_error("floor_nat: negative argument " + to_string(x));
  return Nat(bmp::numerator(x) / bmp::denominator(x));
}

Nat ceil_sqrt(const Nat& m) {
  if (m < 0) throw std::domain_error("ceil_sqrt: negative argument");
  Nat s = bmp::sqrt(m);
  if (s * s < m) s += 1;
  return s;
}

Nat ceil_cbrt(const Nat& m) {
  if (m < 0) throw std::domain_error("ceil_cbrt: negative argument");
  if (m == 0) return Nat(0);
  // Float estimate followed by exact correction.
  Real est = bmp::cbrt(Real(m));
  Nat s = Nat(bmp::floor(est).convert_to<Nat>());
  while (s > 0 && s * s * s >= m) s -= 1;
  while (s * s * s < m) s += 1;
  return s;
}

Nat pow_nat(const Nat& base, std::uint64_t exponent) {
  Nat result = 1;
  Nat b = base;
  while (exponent > 0) {
    if (exponent & 1U) result *= b;
    exponent >>= 1U;
    if (exponent > 0) b *= b;
  }
  return result;
}

Nat ceil_ln(const Rational& x) {
  if (x < 1) throw std::domain_error("ceil_ln: argument below 1: " + to_string(x));
  return sound_ceil(bmp::log(to_real(x)));
}

Nat ceil_log_base(const Rational& base, const Rational& x) {
  if (base <= 0 || base >= 1) throw std::domain_error("ceil_log_base: base outside (0,1)");
  if (x <= 0 || x > 1) throw std::domain_error("ceil_log_base: argument outside (0,1]");
  return sound_ceil(bmp::log(to_real(x)) / bmp::log(to_real(base)));
}

Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto trim = [](std::string& t) {
    const auto b = t.find_first_not_of(" \t");
    const auto e = t.find_last_not_of(" \t");
    t = (b == std::string::npos) ? std::string{} : t.substr(b, e - b + 1);
  };
  trim(s);
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  if (auto slash = s.find('/'); slash != std::string::npos) {
    Rational num = parse_rational(s.substr(0, slash));
    Rational den = parse_rational(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
    return num / den;
  }
  bool negative = false;
  std::size_t pos = 0;
  if (s[pos] == '+' || s[pos] == '-') {
    negative = s[pos] == '-';
    ++pos;
  }
  std::string digits;
  long long frac_digits = 0;
  bool seen_point = false;
  for (; pos < s.size() && s[pos] != 'e' && s[pos] != 'E'; ++pos) {
    const char c = s[pos];
    if (c == '.') {
      if (seen_point) throw std::invalid_argument("malformed rational '" + s + "'");
      seen_point = true;
    } else if (c >= '0' && c <= '9') {
      digits.push_back(c);
      if (seen_point) ++frac_digits;
    } else {
      throw std::invalid_argument("malformed rational '" + s + "'");
    }
  }
  if (digits.empty()) throw std::invalid_argument("malformed rational '" + s + "'");
  long long exponent = 0;
  if (pos < s.size()) {
    const std::string exp_text = s.substr(pos + 1);
    try {
      std::size_t used = 0;
      exponent = std::stoll(exp_text, &used);
      if (used != exp_text.size()) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw std::invalid_argument("malformed exponent in '" + s + "'");
    }
  }
  exponent -= frac_digits;
  // a leading zero would make GMP read the digits as octal
  digits.erase(0, std::min(digits.find_first_not_of('0'), digits.size() - 1));
  Rational value{Nat(digits)};
  const Nat scale = pow_nat(Nat(10), static_cast<std::uint64_t>(exponent < 0 ? -exponent : exponent));
  if (exponent >= 0) {
    value *= scale;
  } else {
    value /= scale;
  }
  return negative ? Rational(-value) : value;
}

Rational rational_upper(double x, unsigned precision_bits) {
  if (!std::isfinite(x)) throw std::domain_error("rational_upper: non-finite value");
  const Nat scale = pow_nat(Nat(2), precision_bits);
  // ldexp is exact; the ceiling keeps the result >= x.
  const double scaled = std::ceil(std::ldexp(x, static_cast<int>(precision_bits)));
  Nat num(bmp::mpz_int(0));
  {
    // Integral double -> exact Nat via mpfr to avoid long long overflow.
    Real r(scaled);
    num = r.convert_to<Nat>();
  }
  return Rational(num, scale);
}

double to_double(const Rational& x) { return x.convert_to<double>(); }
double to_double(const Nat& x) { return x.convert_to<double>(); }

std::string to_string(const Nat& x) { return x.str(); }

std::string to_string(const Rational& x) {
  if (bmp::denominator(x) == 1) return bmp::numerator(x).str();
  return bmp::numerator(x).str() + "/" + bmp::denominator(x).str();
}

Nat parse_nat(std::string_view text) {
  const Rational r = parse_rational(text);
  if (r < 0 || bmp::denominator(r) != 1) {
    throw std::invalid_argument("expected a natural number, got '" + std::string(text) + "'");
  }
  return bmp::numerator(r);
}

bool fits_u64(const Nat& x) { return x >= 0 && x <= std::numeric_limits<std::uint64_t>::max(); }

}  // namespace genvam
