#pragma once

#include <gmpxx.h>

#include <string>

namespace specden {

using Rational = mpq_class;
using Integer = mpz_class;

Rational frac(long p, long q = 1);
Rational parse_rational(const std::string& s);
std::string to_string(const Rational& r);
double to_double(const Rational& r);

inline bool is_zero(const Rational& r) { return sgn(r) == 0; }

Rational pow(const Rational& r, int e);
Integer factorial(unsigned n);
Integer binomial(unsigned n, unsigned k);
Rational falling(const Rational& x, int n);
Rational rising(const Rational& x, int n);

// Largest s with s^2 | n for n > 0; returns (s, n / s^2).
std::pair<Integer, Integer> square_split(const Integer& n);

}  // namespace specden
