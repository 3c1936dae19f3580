#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace graphon {

using Rational = mpq_class;
using Integer = mpz_class;

/// Thrown when an argument violates a mathematical precondition.
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Thrown when two kernels (or a kernel and a weighting) live on different partitions.
struct AlignmentError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Thrown when a computation would exceed the configured evaluation budget.
struct CapacityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline Rational make_rational(long num, long den = 1) {
  if (den == 0) throw DomainError("zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

/// Parses "p/q" or "n" (optionally signed) into lowest terms.
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto first = s.find_first_not_of(" \t");
  auto last = s.find_last_not_of(" \t");
  if (first == std::string::npos) throw DomainError("empty rational literal");
  s = s.substr(first, last - first + 1);
  auto slash = s.find('/');
  auto valid_int = [](const std::string& part) {
    std::size_t i = (!part.empty() && (part[0] == '-' || part[0] == '+')) ? 1 : 0;
    if (i == part.size()) return false;
    for (; i < part.size(); ++i)
      if (part[i] < '0' || part[i] > '9') return false;
    return true;
  };
  std::string num = slash == std::string::npos ? s : s.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!valid_int(num) || !valid_int(den) || den[0] == '-' || den[0] == '+')
    throw DomainError("malformed rational literal: '" + std::string(text) + "'");
  if (num[0] == '+') num.erase(0, 1);
  Integer n(num, 10), d(den, 10);
  if (d == 0) throw DomainError("zero denominator in '" + std::string(text) + "'");
  Rational q(n, d);
  q.canonicalize();
  return q;
}

/// Lowest terms, sign on the numerator, "n" for integers.
inline std::string to_string(const Rational& q) { return q.get_str(10); }

inline Rational rpow(const Rational& base, unsigned long exponent) {
  Rational out;
  mpz_pow_ui(out.get_num_mpz_t(), base.get_num_mpz_t(), exponent);
  mpz_pow_ui(out.get_den_mpz_t(), base.get_den_mpz_t(), exponent);
  out.canonicalize();
  return out;
}

inline Rational abs_of(const Rational& q) { return q < 0 ? Rational(-q) : q; }

/// Natural log of a positive rational; works far outside the double exponent range.
inline double log_of(const Rational& q) {
  if (q <= 0) throw DomainError("log of non-positive rational");
  long en = 0, ed = 0;
  double mn = mpz_get_d_2exp(&en, q.get_num_mpz_t());
  double md = mpz_get_d_2exp(&ed, q.get_den_mpz_t());
  return std::log(mn) - std::log(md) + static_cast<double>(en - ed) * std::log(2.0);
}

/// Decimal rendering with `digits` significant digits. Values outside the
/// double range are rendered in scientific notation from the exact value.
inline std::string to_decimal(const Rational& q, int digits = 17) {
  if (q == 0) return "0";
  mp_bitcnt_t bits = static_cast<mp_bitcnt_t>(digits * 4 + 64);
  mpf_class f(0, bits);
  f = q;
  double d = q.get_d();
  std::ostringstream os;
  if (std::isfinite(d) && d != 0 && std::fabs(d) >= 1e-300 && std::fabs(d) <= 1e300) {
    os.precision(digits);
    os << d;
    return os.str();
  }
  mp_exp_t exp = 0;
  std::string mant = f.get_str(exp, 10, static_cast<std::size_t>(digits));
  bool neg = !mant.empty() && mant[0] == '-';
  if (neg) mant.erase(0, 1);
  if (neg) os << '-';
  os << mant[0];
  if (mant.size() > 1) os << '.' << mant.substr(1);
  os << 'e' << (exp - 1);
  return os.str();
}

}  // namespace graphon
