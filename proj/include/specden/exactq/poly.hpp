#pragma once

#include <string>
#include <utility>
#include <vector>

#include "specden/error.hpp"
#include "specden/exactq/rational.hpp"

namespace specden {

// Dense univariate polynomial over a field F; coefficient i multiplies x^i.
template <class F>
class Poly {
 public:
  using Scalar = F;

  Poly() = default;
  Poly(int c) : Poly(F(c)) {}
  Poly(const F& c) {
    if (!is_zero(c)) c_.push_back(c);
  }
  explicit Poly(std::vector<F> c) : c_(std::move(c)) { trim(); }

  static Poly x() { return monomial(F(1), 1); }
  static Poly monomial(const F& c, int deg) {
    if (is_zero(c)) return Poly();
    std::vector<F> v(static_cast<size_t>(deg) + 1, F(0));
    v[static_cast<size_t>(deg)] = c;
    return Poly(std::move(v));
  }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero_poly() const { return c_.empty(); }
  const std::vector<F>& coeffs() const { return c_; }

  F operator[](int i) const {
    return (i >= 0 && i < static_cast<int>(c_.size())) ? c_[static_cast<size_t>(i)] : F(0);
  }
  const F& lead() const { return c_.back(); }

  F operator()(const F& x) const {
    F acc(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = F(acc * x + *it);
    return acc;
  }

  // Horner evaluation in another ring T, with conv mapping F -> T.
  template <class T, class Conv>
  T eval_as(const T& x, Conv conv) const {
    T acc = T(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + conv(*it);
    return acc;
  }

  Poly derivative() const {
    if (c_.size() <= 1) return Poly();
    std::vector<F> d(c_.size() - 1);
    for (size_t i = 1; i < c_.size(); ++i) d[i - 1] = F(c_[i] * F(static_cast<int>(i)));
    return Poly(std::move(d));
  }

  Poly derivative(int n) const {
    Poly p = *this;
    for (int i = 0; i < n; ++i) p = p.derivative();
    return p;
  }

  Poly compose(const Poly& inner) const {
    Poly acc;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * inner + Poly(*it);
    return acc;
  }

  Poly shift_up(int m) const {
    if (c_.empty() || m == 0) return *this;
    std::vector<F> v(static_cast<size_t>(m), F(0));
    v.insert(v.end(), c_.begin(), c_.end());
    return Poly(std::move(v));
  }

  Poly& operator+=(const Poly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), F(0));
    for (size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
    trim();
    return *this;
  }
  Poly& operator-=(const Poly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), F(0));
    for (size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
    trim();
    return *this;
  }
  Poly& operator*=(const F& s) {
    if (is_zero(s)) {
      c_.clear();
      return *this;
    }
    for (auto& c : c_) c *= s;
    return *this;
  }
  Poly& operator*=(const Poly& o) { return *this = *this * o; }

  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator-(Poly a) {
    for (auto& c : a.c_) c = F(-c);
    return a;
  }
  friend Poly operator*(Poly a, const F& s) { return a *= s; }
  friend Poly operator*(const F& s, Poly a) { return a *= s; }
  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.c_.empty() || b.c_.empty()) return Poly();
    std::vector<F> r(a.c_.size() + b.c_.size() - 1, F(0));
    for (size_t i = 0; i < a.c_.size(); ++i) {
      if (is_zero(a.c_[i])) continue;
      for (size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    }
    return Poly(std::move(r));
  }
  friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

  Poly monic() const {
    if (c_.empty()) return *this;
    F inv = F(F(1) / lead());
    return *this * inv;
  }

 private:
  void trim() {
    while (!c_.empty() && is_zero(c_.back())) c_.pop_back();
  }

  std::vector<F> c_;
};

template <class F>
bool is_zero(const Poly<F>& p) {
  return p.is_zero_poly();
}

template <class F>
std::pair<Poly<F>, Poly<F>> divmod(const Poly<F>& a, const Poly<F>& b) {
  if (b.is_zero_poly()) fail("ZeroDenominator", "polynomial division by zero");
  std::vector<F> r = a.coeffs();
  int db = b.degree();
  int dq = a.degree() - db;
  if (dq < 0) return {Poly<F>(), a};
  std::vector<F> q(static_cast<size_t>(dq) + 1, F(0));
  F inv = F(F(1) / b.lead());
  for (int i = dq; i >= 0; --i) {
    F c = F(r[static_cast<size_t>(i + db)] * inv);
    q[static_cast<size_t>(i)] = c;
    if (is_zero(c)) continue;
    for (int j = 0; j <= db; ++j) r[static_cast<size_t>(i + j)] -= c * b[j];
  }
  r.resize(static_cast<size_t>(db));
  return {Poly<F>(std::move(q)), Poly<F>(std::move(r))};
}

template <class F>
Poly<F> exact_div(const Poly<F>& a, const Poly<F>& b) {
  auto [q, r] = divmod(a, b);
  if (!r.is_zero_poly()) fail("NotDivisible", "polynomial division leaves a remainder");
  return q;
}

// Monic gcd; gcd(0, 0) = 0.
template <class F>
Poly<F> gcd(Poly<F> a, Poly<F> b) {
  while (!b.is_zero_poly()) {
    auto r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

template <class F>
Poly<F> lcm(const Poly<F>& a, const Poly<F>& b) {
  if (a.is_zero_poly() || b.is_zero_poly()) return Poly<F>();
  return exact_div(a * b, gcd(a, b)).monic();
}

template <class F>
std::string to_string(const Poly<F>& p, const std::string& var = "x") {
  if (p.is_zero_poly()) return "0";
  std::string out;
  for (int i = 0; i <= p.degree(); ++i) {
    if (is_zero(p[i])) continue;
    std::string c = to_string(p[i]);
    if (!out.empty()) out += " + ";
    bool compound = c.find_first_of("+ ") != std::string::npos ||
                    (c.find('-', 1) != std::string::npos);
    if (i == 0) {
      out += compound ? "(" + c + ")" : c;
      continue;
    }
    if (c != "1") out += (compound ? "(" + c + ")" : c) + "*";
    out += var;
    if (i > 1) out += "^" + std::to_string(i);
  }
  return out;
}

// Coefficient-wise ring change.
template <class G, class F, class Conv>
Poly<G> poly_map(const Poly<F>& p, Conv conv) {
  std::vector<G> v;
  v.reserve(p.coeffs().size());
  for (const auto& c : p.coeffs()) v.push_back(conv(c));
  return Poly<G>(std::move(v));
}

template <class F>
Poly<F> poly_pow(const Poly<F>& p, int n) {
  Poly<F> out(F(1));
  for (int i = 0; i < n; ++i) out *= p;
  return out;
}

using PolyQ = Poly<Rational>;

}  // namespace specden
