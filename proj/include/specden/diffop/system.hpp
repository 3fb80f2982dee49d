#pragma once

#include <vector>

#include "specden/diffop/catalog.hpp"

namespace specden {

// Y' = M Y with rational-function entries in x.
template <class F>
struct MatrixODE {
  int dim = 0;
  std::vector<std::vector<RatFun<F>>> m;

  explicit MatrixODE(int n = 0) : dim(n), m(static_cast<size_t>(n), std::vector<RatFun<F>>(static_cast<size_t>(n))) {}
  RatFun<F>& at(int p, int q) { return m[static_cast<size_t>(p)][static_cast<size_t>(q)]; }
  const RatFun<F>& at(int p, int q) const { return m[static_cast<size_t>(p)][static_cast<size_t>(q)]; }
};

// Jacobi chain in the variable of the dual average, n in {2,4,6}.
template <class F>
MatrixODE<F> build_jacobi_system(int n, const EnsembleSpec<F>& s) {
  if (n != 2 && n != 4 && n != 6) fail("UnsupportedN", "system size n must be 2, 4 or 6");
  F ik = F(Rational(1) / s.kappa());
  F N = s.N;
  F ap = F(ik * (s.a + s.b + F(2)) + N - F(2));
  F bp = F(-ik * (s.b + F(n)) - N);
  auto x = Poly<F>::x();
  Poly<F> xx1 = x * (x - Poly<F>(F(1)));
  MatrixODE<F> M(n + 1);
  for (int p = 0; p <= n; ++p) {
    F np(n - p);
    F A = F(np * (ap + bp + F(2) * ik * (np - F(1)) + F(2) * N + F(2)));
    F B = F(-np * (ap + N + F(1) + ik * (np - F(1))));
    F D = F(F(p) * (ik * np + N + F(1)));
    F E = F(ap + bp + ik * F(2 * n - p - 2) + N + F(2));
    M.at(p, p) = RatFun<F>(x * A + Poly<F>(B), xx1);
    if (p < n) M.at(p, p + 1) = RatFun<F>(Poly<F>(F(np * E)), xx1);
    if (p > 0) M.at(p, p - 1) = RatFun<F>(Poly<F>(F(-D)));
  }
  return M;
}

// Gaussian chain for exp(-x^2) G_{n,p}^{(N)}; entries in Q(sqrt kappa).
MatrixODE<QSqrt> build_gaussian_system(int n, const Rational& beta, const Rational& N);

// Differential operators with rational-function coefficients.
template <class F>
using RatOp = std::vector<RatFun<F>>;

template <class F>
RatOp<F> ratop_d_compose(const RatOp<F>& L) {
  RatOp<F> out(L.size() + 1);
  for (size_t i = 0; i < L.size(); ++i) {
    out[i] += L[i].derivative();
    out[i + 1] += L[i];
  }
  return out;
}

template <class F>
void ratop_axpy(RatOp<F>& acc, const RatFun<F>& c, const RatOp<F>& L) {
  if (acc.size() < L.size()) acc.resize(L.size());
  if (is_zero(c)) return;
  for (size_t i = 0; i < L.size(); ++i)
    if (!is_zero(L[i])) acc[i] += c * L[i];
}

template <class F>
DiffOp<F> ratop_clear(const RatOp<F>& L) {
  Poly<F> den(F(1));
  for (const auto& c : L)
    if (!is_zero(c)) den = lcm(den, c.den());
  std::vector<Poly<F>> co;
  for (const auto& c : L) co.push_back(is_zero(c) ? Poly<F>() : exact_div(c.num() * den, c.den()));
  return primitive(DiffOp<F>(std::move(co)));
}

// Scalar operator annihilating component `target` (0 or dim-1) of every solution.
template <class F>
DiffOp<F> eliminate_scalar(const MatrixODE<F>& M0, int target) {
  int n = M0.dim - 1;
  MatrixODE<F> M = M0;
  if (target == n && n > 0) {
    for (int p = 0; p <= n; ++p)
      for (int q = 0; q <= n; ++q) M.at(p, q) = M0.at(n - p, n - q);
  } else if (target != 0) {
    fail("StructureMismatch", "elimination target must be the first or last component");
  }
  for (int p = 0; p <= n; ++p)
    for (int q = p + 2; q <= n; ++q)
      if (!is_zero(M.at(p, q))) fail("StructureMismatch", "row " + std::to_string(p) + " couples beyond the next component");
  std::vector<RatOp<F>> L;
  L.push_back(RatOp<F>{RatFun<F>(1)});
  for (int p = 0; p < n; ++p) {
    if (is_zero(M.at(p, p + 1))) fail("StructureMismatch", "zero coupling in row " + std::to_string(p));
    RatOp<F> next = ratop_d_compose(L[static_cast<size_t>(p)]);
    for (int q = 0; q <= p; ++q) ratop_axpy(next, RatFun<F>(-M.at(p, q)), L[static_cast<size_t>(q)]);
    RatFun<F> inv = RatFun<F>(1) / M.at(p, p + 1);
    for (auto& c : next) c *= inv;
    L.push_back(std::move(next));
  }
  RatOp<F> last = ratop_d_compose(L[static_cast<size_t>(n)]);
  for (int q = 0; q <= n; ++q) ratop_axpy(last, RatFun<F>(-M.at(n, q)), L[static_cast<size_t>(q)]);
  return ratop_clear(last);
}

// Eliminated Gaussian operator with the sqrt(kappa) parts checked to cancel.
DiffOp<Rational> eliminate_gaussian(int n, const Rational& beta, const Rational& N);

}  // namespace specden
