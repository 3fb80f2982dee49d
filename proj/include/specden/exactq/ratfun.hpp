#pragma once

#include <string>

#include "specden/exactq/poly.hpp"

namespace specden {

// Reduced quotient num/den with den monic.
template <class F>
class RatFun {
 public:
  using Scalar = F;

  RatFun() : num_(), den_(F(1)) {}
  RatFun(int c) : num_(F(c)), den_(F(1)) {}
  RatFun(const F& c) : num_(c), den_(F(1)) {}
  RatFun(const Poly<F>& p) : num_(p), den_(F(1)) {}
  RatFun(const Poly<F>& n, const Poly<F>& d) : num_(n), den_(d) { normalize(); }

  static RatFun variable() { return RatFun(Poly<F>::x()); }

  const Poly<F>& num() const { return num_; }
  const Poly<F>& den() const { return den_; }
  bool is_polynomial() const { return den_.degree() == 0; }

  F operator()(const F& x) const {
    F d = den_(x);
    if (is_zero(d)) fail("ZeroDenominator", "rational function evaluated at a pole");
    return F(num_(x) / d);
  }

  RatFun derivative() const {
    return RatFun(num_.derivative() * den_ - num_ * den_.derivative(), den_ * den_);
  }

  RatFun& operator+=(const RatFun& o) { return *this = *this + o; }
  RatFun& operator-=(const RatFun& o) { return *this = *this - o; }
  RatFun& operator*=(const RatFun& o) { return *this = *this * o; }
  RatFun& operator/=(const RatFun& o) { return *this = *this / o; }

  friend RatFun operator+(const RatFun& a, const RatFun& b) {
    if (a.den_ == b.den_) return RatFun(a.num_ + b.num_, a.den_);
    return RatFun(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend RatFun operator-(const RatFun& a, const RatFun& b) {
    if (a.den_ == b.den_) return RatFun(a.num_ - b.num_, a.den_);
    return RatFun(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
  }
  friend RatFun operator-(const RatFun& a) {
    RatFun r = a;
    r.num_ = -r.num_;
    return r;
  }
  friend RatFun operator*(const RatFun& a, const RatFun& b) {
    if (a.is_polynomial() && b.is_polynomial()) {
      RatFun r;
      r.num_ = a.num_ * b.num_;
      return r;
    }
    return RatFun(a.num_ * b.num_, a.den_ * b.den_);
  }
  friend RatFun operator/(const RatFun& a, const RatFun& b) {
    if (b.num_.is_zero_poly()) fail("ZeroDenominator", "rational function division by zero");
    return RatFun(a.num_ * b.den_, a.den_ * b.num_);
  }
  friend bool operator==(const RatFun& a, const RatFun& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const RatFun& a, const RatFun& b) { return !(a == b); }

 private:
  void normalize() {
    if (den_.is_zero_poly()) fail("ZeroDenominator", "rational function with zero denominator");
    if (num_.is_zero_poly()) {
      den_ = Poly<F>(F(1));
      return;
    }
    if (den_.degree() > 0) {
      Poly<F> g = gcd(num_, den_);
      if (g.degree() > 0) {
        num_ = exact_div(num_, g);
        den_ = exact_div(den_, g);
      }
    }
    F inv = F(F(1) / den_.lead());
    num_ *= inv;
    den_ *= inv;
  }

  Poly<F> num_, den_;
};

template <class F>
RatFun<F> ratfun_normalize(const Poly<F>& num, const Poly<F>& den) {
  return RatFun<F>(num, den);
}

template <class F>
bool is_zero(const RatFun<F>& r) {
  return r.num().is_zero_poly();
}

template <class F>
std::string to_string(const RatFun<F>& r, const std::string& var = "N") {
  std::string n = to_string(r.num(), var);
  if (r.is_polynomial()) return n;
  return "(" + n + ")/(" + to_string(r.den(), var) + ")";
}

// Rational functions of the symbolic ensemble size N.
using QN = RatFun<Rational>;

}  // namespace specden
