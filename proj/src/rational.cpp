#include "specden/exactq/rational.hpp"

#include <cctype>

#include "specden/error.hpp"

namespace specden {

Rational frac(long p, long q) {
  if (q == 0) fail("ZeroDenominator", "rational with zero denominator");
  Rational r(p, q);
  r.canonicalize();
  return r;
}

namespace {

Integer parse_integer(const std::string& s, const std::string& whole) {
  if (s.empty()) fail("ParseError", "bad rational: '" + whole + "'");
  size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) fail("ParseError", "bad rational: '" + whole + "'");
  for (size_t j = i; j < s.size(); ++j)
    if (!std::isdigit(static_cast<unsigned char>(s[j])))
      fail("ParseError", "bad rational: '" + whole + "'");
  return Integer(s[0] == '+' ? s.substr(1) : s, 10);
}

}  // namespace

Rational parse_rational(const std::string& raw) {
  std::string s;
  for (char c : raw)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (auto slash = s.find('/'); slash != std::string::npos) {
    Integer p = parse_integer(s.substr(0, slash), raw);
    Integer q = parse_integer(s.substr(slash + 1), raw);
    if (q == 0) fail("ZeroDenominator", "rational with zero denominator: '" + raw + "'");
    Rational r(p, q);
    r.canonicalize();
    return r;
  }
  // decimal with optional exponent, converted exactly
  std::string mant = s;
  long exp10 = 0;
  if (auto e = s.find_first_of("eE"); e != std::string::npos) {
    mant = s.substr(0, e);
    exp10 = parse_integer(s.substr(e + 1), raw).get_si();
  }
  bool neg = !mant.empty() && mant[0] == '-';
  if (!mant.empty() && (mant[0] == '-' || mant[0] == '+')) mant = mant.substr(1);
  std::string digits;
  if (auto dot = mant.find('.'); dot != std::string::npos) {
    digits = mant.substr(0, dot) + mant.substr(dot + 1);
    exp10 -= static_cast<long>(mant.size() - dot - 1);
  } else {
    digits = mant;
  }
  if (digits.empty()) fail("ParseError", "bad rational: '" + raw + "'");
  Integer n = parse_integer(digits, raw);
  if (neg) n = -n;
  Rational r(n);
  Integer ten(10), scale;
  mpz_pow_ui(scale.get_mpz_t(), ten.get_mpz_t(), static_cast<unsigned long>(exp10 < 0 ? -exp10 : exp10));
  if (exp10 >= 0)
    r *= Rational(scale);
  else
    r /= Rational(scale);
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& r) { return r.get_str(10); }

double to_double(const Rational& r) { return r.get_d(); }

Rational pow(const Rational& r, int e) {
  Rational base = e < 0 ? Rational(1) / r : r;
  unsigned n = static_cast<unsigned>(e < 0 ? -e : e);
  Rational out(1);
  while (n) {
    if (n & 1u) out *= base;
    base *= base;
    n >>= 1;
  }
  return out;
}

Integer factorial(unsigned n) {
  Integer f;
  mpz_fac_ui(f.get_mpz_t(), n);
  return f;
}

Integer binomial(unsigned n, unsigned k) {
  Integer b;
  mpz_bin_uiui(b.get_mpz_t(), n, k);
  return b;
}

Rational falling(const Rational& x, int n) {
  Rational out(1);
  for (int i = 0; i < n; ++i) out *= x - i;
  return out;
}

Rational rising(const Rational& x, int n) {
  Rational out(1);
  for (int i = 0; i < n; ++i) out *= x + i;
  return out;
}

std::pair<Integer, Integer> square_split(const Integer& n) {
  Integer rest = n, s = 1;
  for (unsigned long p = 2; Integer(p) * p <= rest; ++p) {
    Integer pp = Integer(p) * p;
    while (rest % pp == 0) {
      rest /= pp;
      s *= p;
    }
  }
  return {s, rest};
}

}  // namespace specden
