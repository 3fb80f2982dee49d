#pragma once

#include <string>
#include <type_traits>
#include <vector>

#include "specden/exactq.hpp"

namespace specden {

// Sum_i coeff(i) * d^i/dx^i with polynomial coefficients.
template <class F>
class DiffOp {
 public:
  using Scalar = F;

  DiffOp() = default;
  explicit DiffOp(std::vector<Poly<F>> c) : c_(std::move(c)) { trim(); }

  static DiffOp identity() { return DiffOp({Poly<F>(F(1))}); }
  static DiffOp d() { return DiffOp({Poly<F>(), Poly<F>(F(1))}); }

  int order() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero_op() const { return c_.empty(); }
  const std::vector<Poly<F>>& coeffs() const { return c_; }
  Poly<F> coeff(int i) const { return (i >= 0 && i <= order()) ? c_[static_cast<size_t>(i)] : Poly<F>(); }
  const Poly<F>& leading() const { return c_.back(); }

  int max_coeff_degree() const {
    int m = -1;
    for (const auto& p : c_) m = std::max(m, p.degree());
    return m;
  }

  // Largest deg(p_i) - i: the power shift applied to x^mu for large x.
  int degree_shift() const {
    int m = -1000000;
    for (int i = 0; i <= order(); ++i)
      if (!c_[static_cast<size_t>(i)].is_zero_poly()) m = std::max(m, c_[static_cast<size_t>(i)].degree() - i);
    return m;
  }

  Poly<F> operator()(const Poly<F>& f) const {
    Poly<F> out, fd = f;
    for (int i = 0; i <= order(); ++i) {
      if (i > 0) fd = fd.derivative();
      if (fd.is_zero_poly()) break;
      out += c_[static_cast<size_t>(i)] * fd;
    }
    return out;
  }

  InvXSeries<F> operator()(const InvXSeries<F>& s) const {
    if (c_.empty()) return InvXSeries<F>(Poly<F>(), {}, s.order());
    InvXSeries<F> acc, sd = s;
    bool first = true;
    for (int i = 0; i <= order(); ++i) {
      if (i > 0) sd = sd.derivative();
      const auto& p = c_[static_cast<size_t>(i)];
      if (p.is_zero_poly()) continue;
      auto term = sd.times_poly(p);
      acc = first ? term : acc + term;
      first = false;
    }
    return acc;
  }

  DiffOp& operator+=(const DiffOp& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
    trim();
    return *this;
  }
  DiffOp& operator-=(const DiffOp& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
    trim();
    return *this;
  }
  friend DiffOp operator+(DiffOp a, const DiffOp& b) { return a += b; }
  friend DiffOp operator-(DiffOp a, const DiffOp& b) { return a -= b; }
  friend DiffOp operator*(const Poly<F>& p, const DiffOp& a) {
    std::vector<Poly<F>> c;
    for (const auto& q : a.c_) c.push_back(p * q);
    return DiffOp(std::move(c));
  }
  friend DiffOp operator*(const F& s, const DiffOp& a) { return Poly<F>(s) * a; }

  // Composition a∘b.
  friend DiffOp operator*(const DiffOp& a, const DiffOp& b) {
    if (a.c_.empty() || b.c_.empty()) return DiffOp();
    std::vector<Poly<F>> out(static_cast<size_t>(a.order() + b.order() + 1));
    for (int i = 0; i <= a.order(); ++i) {
      const auto& ai = a.c_[static_cast<size_t>(i)];
      if (ai.is_zero_poly()) continue;
      for (int j = 0; j <= b.order(); ++j) {
        Poly<F> bj = b.c_[static_cast<size_t>(j)];
        for (int r = 0; r <= i && !bj.is_zero_poly(); ++r) {
          F binom(Rational(binomial(static_cast<unsigned>(i), static_cast<unsigned>(r))));
          out[static_cast<size_t>(i - r + j)] += ai * bj * binom;
          bj = bj.derivative();
        }
      }
    }
    return DiffOp(std::move(out));
  }

  friend bool operator==(const DiffOp& a, const DiffOp& b) { return a.c_ == b.c_; }
  friend bool operator!=(const DiffOp& a, const DiffOp& b) { return !(a == b); }

 private:
  void trim() {
    while (!c_.empty() && c_.back().is_zero_poly()) c_.pop_back();
  }

  std::vector<Poly<F>> c_;
};

template <class F>
InvXSeries<F> series_apply_diffop(const DiffOp<F>& D, const InvXSeries<F>& s) {
  auto out = D(s);
  if (out.order() < -out.top() && !D.is_zero_op())
    fail("TruncationTooShort", "series of order " + std::to_string(s.order()) + " too short for an operator of shift " +
                                   std::to_string(D.degree_shift() + D.order()));
  return out;
}

template <class G, class F, class Conv>
DiffOp<G> op_map(const DiffOp<F>& D, Conv conv) {
  std::vector<Poly<G>> c;
  for (const auto& p : D.coeffs()) c.push_back(poly_map<G>(p, conv));
  return DiffOp<G>(std::move(c));
}

// A and B proportional: A_i * B_top == B_i * A_top for all i.
template <class F>
bool proportional(const DiffOp<F>& A, const DiffOp<F>& B) {
  if (A.order() != B.order()) return false;
  if (A.is_zero_op()) return true;
  const auto& at = A.leading();
  const auto& bt = B.leading();
  for (int i = 0; i <= A.order(); ++i)
    if (A.coeff(i) * bt != B.coeff(i) * at) return false;
  return true;
}

// Divide out the polynomial content and make the leading coefficient monic.
template <class F>
DiffOp<F> primitive(const DiffOp<F>& D) {
  if (D.is_zero_op()) return D;
  Poly<F> g;
  for (const auto& p : D.coeffs()) g = gcd(g, p);
  std::vector<Poly<F>> c;
  for (const auto& p : D.coeffs()) c.push_back(exact_div(p, g));
  F inv = F(F(1) / c.back().lead());
  for (auto& p : c) p *= inv;
  return DiffOp<F>(std::move(c));
}

// Canonical text form: terms in ascending derivative order, "[p_i]*d^i".
template <class F>
std::string to_string(const DiffOp<F>& D, const std::string& var = "x") {
  if (D.is_zero_op()) return "0";
  std::string out;
  for (int i = 0; i <= D.order(); ++i) {
    if (D.coeff(i).is_zero_poly()) continue;
    if (!out.empty()) out += " + ";
    out += "[" + to_string(D.coeff(i), var) + "]";
    if (i == 1) out += "*d";
    if (i > 1) out += "*d^" + std::to_string(i);
  }
  return out;
}

// Result of clearing denominators: op * x^{-x_power} (1-x)^{-one_minus_x_power}
// is the mathematically transformed operator.
template <class F>
struct ClearedOp {
  DiffOp<F> op;
  int x_power = 0;
  int one_minus_x_power = 0;
};

// (D~ f~)(x) = (D f)(a x + b) for f~ = f(a x + b).
template <class F>
DiffOp<F> op_pullback_affine(const DiffOp<F>& D, const std::type_identity_t<F>& a, const std::type_identity_t<F>& b) {
  if (is_zero(a)) fail("InvalidArgument", "affine pullback with zero scale");
  Poly<F> inner(std::vector<F>{b, a});
  std::vector<Poly<F>> c;
  F ainv = F(F(1) / a), s(1);
  for (int i = 0; i <= D.order(); ++i) {
    c.push_back(D.coeff(i).compose(inner) * s);
    s = F(s * ainv);
  }
  return DiffOp<F>(std::move(c));
}

// (D~ f~)(x) = x^m (D f)(1/x) for f~ = f(1/x); m recorded as x_power.
template <class F>
ClearedOp<F> op_pullback_inverse(const DiffOp<F>& D) {
  // T = -x^2 d represents d/dy with y = 1/x
  DiffOp<F> T({Poly<F>(), Poly<F>::monomial(F(-1), 2)});
  int m = std::max(D.max_coeff_degree(), 0);
  DiffOp<F> out, Tpow = DiffOp<F>::identity();
  for (int i = 0; i <= D.order(); ++i) {
    if (i > 0) Tpow = T * Tpow;
    const auto& p = D.coeff(i);
    // x^m p(1/x) = sum_j p_j x^{m-j}
    std::vector<F> rev(static_cast<size_t>(m) + 1, F(0));
    for (int j = 0; j <= p.degree(); ++j) rev[static_cast<size_t>(m - j)] = p[j];
    out += Poly<F>(std::move(rev)) * Tpow;
  }
  return {out, m, 0};
}

// Rational functions P / (x^mx (1-x)^m1).
template <class F>
struct XPoly {
  Poly<F> p;
  int mx = 0, m1 = 0;

  void reduce() {
    if (p.is_zero_poly()) {
      mx = m1 = 0;
      return;
    }
    Poly<F> x = Poly<F>::x(), omx(std::vector<F>{F(1), F(-1)});
    while (mx > 0 && is_zero(p[0])) {
      p = exact_div(p, x);
      --mx;
    }
    while (m1 > 0 && is_zero(p(F(1)))) {
      p = exact_div(p, omx);
      --m1;
    }
  }

  XPoly raised(int tx, int t1) const {
    Poly<F> omx(std::vector<F>{F(1), F(-1)});
    XPoly r{p.shift_up(tx - mx) * poly_pow(omx, t1 - m1), tx, t1};
    return r;
  }

  friend XPoly operator+(const XPoly& a, const XPoly& b) {
    int tx = std::max(a.mx, b.mx), t1 = std::max(a.m1, b.m1);
    XPoly r{a.raised(tx, t1).p + b.raised(tx, t1).p, tx, t1};
    r.reduce();
    return r;
  }
  friend XPoly operator*(const XPoly& a, const XPoly& b) {
    XPoly r{a.p * b.p, a.mx + b.mx, a.m1 + b.m1};
    r.reduce();
    return r;
  }

  XPoly derivative() const {
    Poly<F> x = Poly<F>::x(), omx(std::vector<F>{F(1), F(-1)});
    XPoly r{p.derivative() * x * omx - p * omx * F(mx) + p * x * F(m1), mx + 1, m1 + 1};
    r.reduce();
    return r;
  }
};

// w(x) = x^A (1-x)^B exp(-c1 x - c2 x^2).
template <class F>
struct WeightTag {
  F A = F(0), B = F(0), c1 = F(0), c2 = F(0);

  static WeightTag gaussian(const F& c) { return {F(0), F(0), F(0), c}; }
  static WeightTag laguerre(const F& a) { return {a, F(0), F(1), F(0)}; }
  static WeightTag jacobi(const F& a, const F& b) { return {a, b, F(0), F(0)}; }

  // w'/w
  XPoly<F> log_derivative() const {
    Poly<F> x = Poly<F>::x(), omx(std::vector<F>{F(1), F(-1)});
    Poly<F> num = omx * A - x * B - (Poly<F>(c1) + x * F(F(2) * c2)) * x * omx;
    XPoly<F> r{num, 1, 1};
    r.reduce();
    return r;
  }
};

// Coefficients q_j of w^{-1} D w = sum_j q_j d^j.
template <class F>
std::vector<XPoly<F>> conjugated_coeffs(const DiffOp<F>& D, const WeightTag<F>& w) {
  int n = D.order();
  std::vector<XPoly<F>> r;
  r.push_back(XPoly<F>{Poly<F>(F(1)), 0, 0});
  XPoly<F> L = w.log_derivative();
  for (int j = 1; j <= n; ++j) r.push_back(r.back().derivative() + r.back() * L);
  std::vector<XPoly<F>> q(static_cast<size_t>(std::max(n + 1, 0)));
  for (int i = 0; i <= n; ++i) {
    const auto& pi = D.coeff(i);
    if (pi.is_zero_poly()) continue;
    for (int j = 0; j <= i; ++j) {
      F binom(Rational(binomial(static_cast<unsigned>(i), static_cast<unsigned>(j))));
      q[static_cast<size_t>(j)] = q[static_cast<size_t>(j)] + XPoly<F>{pi * binom, 0, 0} * r[static_cast<size_t>(i - j)];
    }
  }
  return q;
}

// w^{-1} D w with denominators cleared.
template <class F>
ClearedOp<F> op_conjugate(const DiffOp<F>& D, const WeightTag<F>& w) {
  auto q = conjugated_coeffs(D, w);
  int tx = 0, t1 = 0;
  for (const auto& c : q) {
    tx = std::max(tx, c.mx);
    t1 = std::max(t1, c.m1);
  }
  std::vector<Poly<F>> c;
  for (const auto& qi : q) c.push_back(qi.raised(tx, t1).p);
  return {DiffOp<F>(std::move(c)), tx, t1};
}

template <class F>
struct WeightedResult {
  Poly<F> Q;
  int x_power = 0;
  int one_minus_x_power = 0;
};

// D(w P) = w Q / (x^mx (1-x)^m1) with minimal mx, m1.
template <class F>
WeightedResult<F> op_apply_to_weighted_poly(const DiffOp<F>& D, const Poly<F>& P, const WeightTag<F>& w) {
  auto q = conjugated_coeffs(D, w);
  XPoly<F> acc{Poly<F>(), 0, 0};
  Poly<F> Pd = P;
  for (size_t j = 0; j < q.size(); ++j) {
    if (j > 0) Pd = Pd.derivative();
    acc = acc + q[j] * XPoly<F>{Pd, 0, 0};
  }
  return {acc.p, acc.mx, acc.m1};
}

}  // namespace specden
