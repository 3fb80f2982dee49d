#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "specden/exactq/poly.hpp"

namespace specden {

// Laurent series in 1/x: polynomial head (powers >= 0) plus x^{-j} terms,
// known exactly for every power >= -J.
template <class F>
class InvXSeries {
 public:
  InvXSeries() = default;
  InvXSeries(Poly<F> head, std::vector<F> tail, int J) : head_(std::move(head)), tail_(std::move(tail)), J_(J) {
    tail_.resize(static_cast<size_t>(std::max(J_, 0)), F(0));
  }

  int order() const { return J_; }
  const Poly<F>& head() const { return head_; }
  const std::vector<F>& tail() const { return tail_; }

  // Coefficient of x^e; e must be >= -J.
  F coeff(int e) const {
    if (e < -J_) fail("TruncationTooShort", "coefficient of x^" + std::to_string(e) + " beyond truncation order " + std::to_string(J_));
    if (e >= 0) return head_[e];
    return tail_[static_cast<size_t>(-e - 1)];
  }

  int top() const { return head_.is_zero_poly() ? 0 : head_.degree(); }

  bool is_zero_series() const {
    if (!head_.is_zero_poly()) return false;
    for (const auto& c : tail_)
      if (!is_zero(c)) return false;
    return true;
  }

  // Build from a coefficient accessor over exponents [-J, top].
  template <class Fn>
  static InvXSeries from_exponents(int top, int J, Fn coef) {
    std::vector<F> h;
    for (int e = 0; e <= top; ++e) h.push_back(e >= -J ? coef(e) : F(0));
    std::vector<F> t;
    for (int j = 1; j <= J; ++j) t.push_back(-j <= top ? coef(-j) : F(0));
    return InvXSeries(Poly<F>(std::move(h)), std::move(t), J);
  }

  friend InvXSeries operator+(const InvXSeries& a, const InvXSeries& b) {
    int J = std::min(a.J_, b.J_);
    int top = std::max(a.top(), b.top());
    return from_exponents(top, J, [&](int e) { return F(a.get(e) + b.get(e)); });
  }
  friend InvXSeries operator-(const InvXSeries& a, const InvXSeries& b) {
    int J = std::min(a.J_, b.J_);
    int top = std::max(a.top(), b.top());
    return from_exponents(top, J, [&](int e) { return F(a.get(e) - b.get(e)); });
  }
  friend InvXSeries operator*(const F& s, const InvXSeries& a) {
    return from_exponents(a.top(), a.J_, [&](int e) { return F(s * a.get(e)); });
  }

  InvXSeries derivative() const {
    int J = J_ + 1;
    int t = std::max(top() - 1, 0);
    return from_exponents(t, J, [&](int e) { return F(F(e + 1) * get(e + 1)); });
  }

  InvXSeries times_poly(const Poly<F>& p) const {
    if (p.is_zero_poly()) return InvXSeries(Poly<F>(), {}, J_);
    int J = J_ - p.degree();
    int t = top() + p.degree();
    return from_exponents(t, J, [&](int e) {
      F acc(0);
      for (int i = 0; i <= p.degree(); ++i)
        if (!is_zero(p[i])) acc += p[i] * get(e - i);
      return acc;
    });
  }

  // Raw coefficient, zero outside the stored range (no truncation check).
  F get(int e) const {
    if (e >= 0) return head_[e];
    int j = -e;
    if (j > static_cast<int>(tail_.size())) return F(0);
    return tail_[static_cast<size_t>(j - 1)];
  }

 private:
  Poly<F> head_;
  std::vector<F> tail_;
  int J_ = 0;
};

template <class F>
InvXSeries<F> series_from_moments(const std::vector<F>& m, int J) {
  if (J < 0) fail("InvalidArgument", "negative truncation order");
  if (static_cast<int>(m.size()) < J) fail("InsufficientMoments", "series of order " + std::to_string(J) + " needs " + std::to_string(J) + " moments");
  std::vector<F> t(m.begin(), m.begin() + J);
  return InvXSeries<F>(Poly<F>(), std::move(t), J);
}

template <class F>
std::string to_string(const InvXSeries<F>& s) {
  std::string out;
  auto add = [&](const F& c, int e) {
    if (is_zero(c)) return;
    if (!out.empty()) out += " + ";
    out += "(" + to_string(c) + ")";
    if (e != 0) out += "*x^" + std::to_string(e);
  };
  for (int e = s.top(); e >= 0; --e) add(s.get(e), e);
  for (int j = 1; j <= s.order(); ++j) add(s.get(-j), -j);
  if (out.empty()) out = "0";
  return out + " + O(x^" + std::to_string(-s.order() - 1) + ")";
}

}  // namespace specden
