#include "specden/exactq/qsqrt.hpp"

#include <cmath>

#include "specden/error.hpp"

namespace specden {

QSqrt::QSqrt(const Rational& a, const Rational& b, const Rational& radicand) : a_(a), b_(b), d_(1) {
  if (sgn(radicand) < 0) fail("DomainError", "negative radicand");
  if (sgn(b_) == 0 || sgn(radicand) == 0) {
    b_ = 0;
    return;
  }
  // sqrt(p/q) = sqrt(p*q)/q, then pull square factors out
  Integer pq = radicand.get_num() * radicand.get_den();
  auto [s, rest] = square_split(pq);
  b_ *= Rational(s, radicand.get_den());
  b_.canonicalize();
  if (rest == 1) {
    a_ += b_;
    b_ = 0;
    return;
  }
  d_ = rest;
}

void QSqrt::unify(const QSqrt& o) {
  if (o.is_rational()) return;
  if (is_rational()) {
    d_ = o.d_;
    return;
  }
  if (d_ != o.d_) fail("RadicandMismatch", "mixed square roots sqrt(" + d_.get_str() + ") and sqrt(" + o.d_.get_str() + ")");
}

Rational QSqrt::to_rational() const {
  if (!is_rational()) fail("IrrationalResult", "value " + to_string(*this) + " is not rational");
  return a_;
}

double QSqrt::to_double() const { return a_.get_d() + b_.get_d() * std::sqrt(d_.get_d()); }

QSqrt& QSqrt::operator+=(const QSqrt& o) {
  unify(o);
  a_ += o.a_;
  b_ += o.b_;
  return *this;
}

QSqrt& QSqrt::operator-=(const QSqrt& o) {
  unify(o);
  a_ -= o.a_;
  b_ -= o.b_;
  return *this;
}

QSqrt& QSqrt::operator*=(const QSqrt& o) {
  unify(o);
  Rational d(d_);
  Rational a = a_ * o.a_ + b_ * o.b_ * d;
  Rational b = a_ * o.b_ + b_ * o.a_;
  a_ = a;
  b_ = b;
  return *this;
}

QSqrt& QSqrt::operator/=(const QSqrt& o) {
  unify(o);
  Rational d(d_);
  Rational norm = o.a_ * o.a_ - o.b_ * o.b_ * d;
  if (sgn(norm) == 0) fail("ZeroDenominator", "division by zero in Q(sqrt d)");
  QSqrt conj = o;
  conj.b_ = -conj.b_;
  *this *= conj;
  a_ /= norm;
  b_ /= norm;
  return *this;
}

std::string to_string(const QSqrt& q) {
  if (q.is_rational()) return to_string(q.rational_part());
  std::string surd = to_string(q.surd_part()) + "*sqrt(" + q.radicand().get_str() + ")";
  if (sgn(q.rational_part()) == 0) return surd;
  return to_string(q.rational_part()) + (sgn(q.surd_part()) > 0 ? "+" : "") + surd;
}

}  // namespace specden
