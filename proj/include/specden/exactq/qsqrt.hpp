#pragma once

#include <string>

#include "specden/exactq/rational.hpp"

namespace specden {

// a + b*sqrt(d), d a squarefree positive integer (d = 1 means purely rational).
class QSqrt {
 public:
  QSqrt() : a_(0), b_(0), d_(1) {}
  QSqrt(int a) : a_(a), b_(0), d_(1) {}
  QSqrt(const Rational& a) : a_(a), b_(0), d_(1) {}
  QSqrt(const Rational& a, const Rational& b, const Rational& radicand);

  static QSqrt sqrt(const Rational& r) { return QSqrt(0, 1, r); }

  const Rational& rational_part() const { return a_; }
  const Rational& surd_part() const { return b_; }
  const Integer& radicand() const { return d_; }
  bool is_rational() const { return sgn(b_) == 0; }
  Rational to_rational() const;
  double to_double() const;

  QSqrt& operator+=(const QSqrt& o);
  QSqrt& operator-=(const QSqrt& o);
  QSqrt& operator*=(const QSqrt& o);
  QSqrt& operator/=(const QSqrt& o);

  friend QSqrt operator+(QSqrt a, const QSqrt& b) { return a += b; }
  friend QSqrt operator-(QSqrt a, const QSqrt& b) { return a -= b; }
  friend QSqrt operator*(QSqrt a, const QSqrt& b) { return a *= b; }
  friend QSqrt operator/(QSqrt a, const QSqrt& b) { return a /= b; }
  friend QSqrt operator-(QSqrt a) {
    a.a_ = -a.a_;
    a.b_ = -a.b_;
    return a;
  }
  friend bool operator==(const QSqrt& x, const QSqrt& y) {
    return x.a_ == y.a_ && x.b_ == y.b_ && (x.is_rational() || x.d_ == y.d_);
  }
  friend bool operator!=(const QSqrt& x, const QSqrt& y) { return !(x == y); }

 private:
  void unify(const QSqrt& o);

  Rational a_, b_;
  Integer d_;
};

inline bool is_zero(const QSqrt& q) { return is_zero(q.rational_part()) && is_zero(q.surd_part()); }
std::string to_string(const QSqrt& q);
inline double to_double(const QSqrt& q) { return q.to_double(); }

}  // namespace specden
