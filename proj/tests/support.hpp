#pragma once

#include <random>

#include "specden/diffop/catalog.hpp"

namespace specden::testing {

inline EnsembleSpec<Rational> spec(Family f, Rational beta, Rational N, Rational a = 0, Rational b = 0) {
  EnsembleSpec<Rational> s;
  s.family = f;
  s.beta = beta;
  s.N = N;
  s.a = a;
  s.b = b;
  return s;
}

inline Rational rand_q(std::mt19937_64& rng, int lo, int hi, int den = 7) {
  std::uniform_int_distribution<int> n(lo * den, hi * den);
  return frac(n(rng), den);
}

template <class Fn>
std::string error_code(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return "";
}

}  // namespace specden::testing
