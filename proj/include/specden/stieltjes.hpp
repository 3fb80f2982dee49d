#pragma once

#include <array>
#include <map>
#include <numeric>
#include <vector>

#include "specden/diffop/diffop.hpp"

namespace specden {

// Linear recurrence sum_l c_l(k) m_{k - l*step} = 0, valid where the boundary
// terms of the underlying integration by parts vanish.
template <class F>
struct Recurrence {
  int step = 1;
  int lead = 0;  // relation at index k comes from integrating x^{k-lead} against the ODE
  std::vector<Poly<F>> c;  // c[l] as a polynomial in k

  int span() const { return static_cast<int>(c.size()) - 1; }
  F coeff(int l, long k) const { return c[static_cast<size_t>(l)](F(static_cast<int>(k))); }
  F coeff(int l, const F& k) const { return c[static_cast<size_t>(l)](k); }
};

namespace detail {

// (k + s)(k + s - 1)...(k + s - n + 1) as a polynomial in k.
template <class F>
Poly<F> falling_in_k(int s, int n) {
  Poly<F> out(F(1));
  auto k = Poly<F>::x();
  for (int t = 0; t < n; ++t) out = out * (k + Poly<F>(F(s - t)));
  return out;
}

template <class F>
F falling_num(long x, int n) {
  F out(1);
  for (int t = 0; t < n; ++t) out = F(out * F(static_cast<int>(x - t)));
  return out;
}

}  // namespace detail

// Multiply D rho = 0 by x^{k - lead} and integrate by parts.
template <class F>
Recurrence<F> moment_recurrence_from_ode(const DiffOp<F>& D, int step_hint = 0) {
  if (D.is_zero_op()) fail("InvalidArgument", "zero operator");
  int emax = D.degree_shift();
  std::map<int, Poly<F>> byLag;
  for (int i = 0; i <= D.order(); ++i) {
    const auto& p = D.coeffs()[static_cast<size_t>(i)];
    F sign(i % 2 ? -1 : 1);
    for (int j = 0; j <= p.degree(); ++j) {
      if (is_zero(p[j])) continue;
      int lag = emax - (j - i);
      byLag[lag] += detail::falling_in_k<F>(j - emax, i) * F(sign * p[j]);
    }
  }
  int g = 0;
  for (const auto& [lag, c] : byLag)
    if (!c.is_zero_poly()) g = std::gcd(g, lag);
  if (g == 0) g = 1;
  int step = step_hint > 0 ? step_hint : g;
  for (const auto& [lag, c] : byLag)
    if (!c.is_zero_poly() && lag % step != 0) fail("InvalidArgument", "step hint incompatible with the operator");
  Recurrence<F> r;
  r.step = step;
  r.lead = emax;
  int maxlag = 0;
  for (const auto& [lag, c] : byLag)
    if (!c.is_zero_poly()) maxlag = std::max(maxlag, lag);
  r.c.assign(static_cast<size_t>(maxlag / step + 1), Poly<F>());
  for (const auto& [lag, c] : byLag) r.c[static_cast<size_t>(lag / step)] += c;
  return r;
}

// Coefficient of x^e in D applied to sum_k m_k x^{-k-1}, as a sparse linear form in the m_k.
template <class F>
std::map<int, F> series_relation(const DiffOp<F>& D, int e) {
  std::map<int, F> out;
  for (int i = 0; i <= D.order(); ++i) {
    const auto& p = D.coeffs()[static_cast<size_t>(i)];
    for (int j = 0; j <= p.degree(); ++j) {
      if (is_zero(p[j])) continue;
      int k = j - i - 1 - e;
      if (k < 0) continue;
      F r = detail::falling_num<F>(-k - 1, i);  // d^i x^{-k-1} = (-k-1)_i x^{-k-1-i}
      out[k] += F(p[j] * r);
    }
  }
  return out;
}

// Polynomial R with D W = m_0 R, where W is the Stieltjes transform of the density.
template <class F>
Poly<F> resolvent_rhs_from_ode(const DiffOp<F>& D, const std::vector<F>& m) {
  int need = std::max(D.degree_shift(), 1);
  if (static_cast<int>(m.size()) < need)
    fail("InsufficientMoments", "resolvent right-hand side needs " + std::to_string(need) + " moments");
  std::vector<F> acc;
  for (int i = 0; i <= D.order(); ++i) {
    const auto& p = D.coeffs()[static_cast<size_t>(i)];
    F sign(i % 2 ? -1 : 1);
    for (int j = 0; j <= p.degree(); ++j) {
      if (is_zero(p[j])) continue;
      for (int r = i; r < j; ++r) {
        int e = j - 1 - r;
        if (static_cast<int>(acc.size()) <= e) acc.resize(static_cast<size_t>(e) + 1, F(0));
        acc[static_cast<size_t>(e)] += F(sign * p[j] * detail::falling_num<F>(r, i) * m[static_cast<size_t>(r - i)]);
      }
    }
  }
  if (acc.empty()) return Poly<F>();
  if (is_zero(m[0])) fail("InvalidArgument", "zero total mass");
  return Poly<F>(std::move(acc)) * F(F(1) / m[0]);
}

// Exact Gauss-Jordan solve of a (possibly overdetermined) system; SingularSystem
// if the solution is not unique, Inconsistent if no solution exists.
template <class F>
std::vector<F> solve_exact(std::vector<std::vector<F>> A, std::vector<F> rhs, int n) {
  int rows = static_cast<int>(A.size());
  int r = 0;
  std::vector<int> pivcol;
  for (int c = 0; c < n && r < rows; ++c) {
    int p = -1;
    for (int i = r; i < rows; ++i)
      if (!is_zero(A[static_cast<size_t>(i)][static_cast<size_t>(c)])) {
        p = i;
        break;
      }
    if (p < 0) continue;
    std::swap(A[static_cast<size_t>(p)], A[static_cast<size_t>(r)]);
    std::swap(rhs[static_cast<size_t>(p)], rhs[static_cast<size_t>(r)]);
    F inv = F(F(1) / A[static_cast<size_t>(r)][static_cast<size_t>(c)]);
    for (int j = c; j < n; ++j) A[static_cast<size_t>(r)][static_cast<size_t>(j)] *= inv;
    rhs[static_cast<size_t>(r)] *= inv;
    for (int i = 0; i < rows; ++i) {
      if (i == r || is_zero(A[static_cast<size_t>(i)][static_cast<size_t>(c)])) continue;
      F f = A[static_cast<size_t>(i)][static_cast<size_t>(c)];
      for (int j = c; j < n; ++j) A[static_cast<size_t>(i)][static_cast<size_t>(j)] -= f * A[static_cast<size_t>(r)][static_cast<size_t>(j)];
      rhs[static_cast<size_t>(i)] -= f * rhs[static_cast<size_t>(r)];
    }
    pivcol.push_back(c);
    ++r;
  }
  for (int i = r; i < rows; ++i)
    if (!is_zero(rhs[static_cast<size_t>(i)])) fail("Inconsistent", "moment equations admit no solution");
  if (r < n) fail("SingularSystem", "initial moments are not determined by the resolvent equation");
  std::vector<F> x(static_cast<size_t>(n));
  for (int i = 0; i < r; ++i) x[static_cast<size_t>(pivcol[static_cast<size_t>(i)])] = rhs[static_cast<size_t>(i)];
  return x;
}

// Substitute W = sum m_k x^{-k-1} into D W = N R and solve for m_0..m_{count-1}.
template <class F>
std::vector<F> initial_moments_from_rhs(const DiffOp<F>& D, const Poly<F>& R, const F& N, int count = -1) {
  if (count < 0) count = D.order();
  int emax = D.degree_shift();
  int top = emax - 1;
  std::vector<std::vector<F>> A;
  std::vector<F> rhs;
  for (int e = top; e >= emax - count; --e) {
    auto rel = series_relation(D, e);
    std::vector<F> row(static_cast<size_t>(count), F(0));
    for (const auto& [k, c] : rel) {
      if (k >= count) fail("InvalidArgument", "relation involves moments beyond the requested range");
      row[static_cast<size_t>(k)] = c;
    }
    A.push_back(std::move(row));
    rhs.push_back(e >= 0 ? F(N * R[e]) : F(0));
  }
  for (int e = std::max(top + 1, 0); e <= R.degree(); ++e)
    if (!is_zero(R[e])) fail("Inconsistent", "right-hand side exceeds the operator's polynomial range");
  std::vector<F> norm(static_cast<size_t>(count), F(0));
  norm[0] = F(1);
  A.push_back(std::move(norm));
  rhs.push_back(N);
  return solve_exact(std::move(A), std::move(rhs), count);
}

// I(s; p, q, n, k) = int x^p (1-x)^q (s-x)^{-k} rho^{(n)}(x) dx written as
// sum_d w[d](s) W^{(d)}(s) + rest(s), rest carrying the moment terms.
template <class F>
struct StieltjesTerm {
  std::vector<Poly<F>> w;
  Poly<F> rest;

  StieltjesTerm& operator+=(const StieltjesTerm& o) {
    if (o.w.size() > w.size()) w.resize(o.w.size());
    for (size_t i = 0; i < o.w.size(); ++i) w[i] += o.w[i];
    rest += o.rest;
    return *this;
  }
  StieltjesTerm scaled(const Poly<F>& f) const {
    StieltjesTerm out;
    for (const auto& c : w) out.w.push_back(c * f);
    out.rest = rest * f;
    return out;
  }
  StieltjesTerm derivative() const {
    StieltjesTerm out;
    out.w.resize(w.size() + 1);
    for (size_t i = 0; i < w.size(); ++i) {
      out.w[i] += w[i].derivative();
      out.w[i + 1] += w[i];
    }
    out.rest = rest.derivative();
    return out;
  }
  bool operator==(const StieltjesTerm& o) const {
    size_t n = std::max(w.size(), o.w.size());
    for (size_t i = 0; i < n; ++i) {
      Poly<F> a = i < w.size() ? w[i] : Poly<F>(), b = i < o.w.size() ? o.w[i] : Poly<F>();
      if (a != b) return false;
    }
    return rest == o.rest;
  }
};

// Integration-by-parts cascade on [0,1]; requires n <= q <= p so boundary terms vanish.
template <class F>
class StieltjesReducer {
 public:
  explicit StieltjesReducer(std::vector<F> moments) : m_(std::move(moments)) {}

  StieltjesTerm<F> term(int p, int q, int n, int k) {
    auto key = std::array<int, 4>{p, q, n, k};
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    StieltjesTerm<F> out;
    if (n > 0) {
      if (!(n <= q && q <= p)) fail("InvalidArgument", "boundary terms need n <= q <= p");
      out += term(p, q - 1, n - 1, k).scaled(Poly<F>(F(p + q)));
      if (p > 0) out += term(p - 1, q - 1, n - 1, k).scaled(Poly<F>(F(-p)));
      if (k > 0) out += term(p, q, n - 1, k + 1).scaled(Poly<F>(F(-k)));
    } else if (k == 0) {
      F acc(0);
      for (int j = 0; j <= q; ++j) {
        F c = F(F(Rational(binomial(static_cast<unsigned>(q), static_cast<unsigned>(j)))) * F(j % 2 ? -1 : 1));
        acc += F(c * moment(p + j));
      }
      out.rest = Poly<F>(acc);
    } else if (k == 1) {
      for (int j = 0; j <= q; ++j) {
        F c = F(F(Rational(binomial(static_cast<unsigned>(q), static_cast<unsigned>(j)))) * F(j % 2 ? -1 : 1));
        int r = p + j;
        StieltjesTerm<F> t;
        t.w = {Poly<F>::monomial(F(1), r)};
        for (int l = 0; l < r; ++l) t.rest -= Poly<F>::monomial(moment(l), r - l - 1);
        out += t.scaled(Poly<F>(c));
      }
    } else {
      // (s-x)^{-k} = (-1)^{k-1}/(k-1)! d^{k-1}/ds^{k-1} (s-x)^{-1}
      StieltjesTerm<F> t = term(p, q, 0, 1);
      for (int i = 1; i < k; ++i) t = t.derivative();
      F c = F(F(Rational((k - 1) % 2 ? -1 : 1)) / F(Rational(factorial(static_cast<unsigned>(k - 1)))));
      out = t.scaled(Poly<F>(c));
    }
    memo_[key] = out;
    return out;
  }

 private:
  F moment(int l) const {
    if (l >= static_cast<int>(m_.size())) fail("InsufficientMoments", "moment m_" + std::to_string(l) + " not supplied");
    return m_[static_cast<size_t>(l)];
  }

  std::vector<F> m_;
  std::map<std::array<int, 4>, StieltjesTerm<F>> memo_;
};

}  // namespace specden
