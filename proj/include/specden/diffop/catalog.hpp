#pragma once

#include <optional>
#include <string>

#include "specden/diffop/diffop.hpp"

namespace specden {

enum class Family { Gaussian, Laguerre, Jacobi };

std::string family_name(Family f);
Family parse_family(const std::string& s);

// Ensemble parameters over a scalar field F (Rational, or QN for symbolic N).
// Gaussian weight: exp(-N kappa x^2 / (2 g)); g unset means w = exp(-x^2).
template <class F>
struct EnsembleSpec {
  Family family = Family::Gaussian;
  Rational beta = 2;
  F N = F(1);
  F a = F(0), b = F(0);
  std::optional<F> g;

  Rational kappa() const { return beta / 2; }
  F coupling() const { return g ? *g : F(N * F(kappa()) / F(2)); }
};

bool beta_in(const Rational& beta, std::initializer_list<Rational> set);
bool catalog_supported(Family f, const Rational& beta);

namespace detail {

template <class F>
Poly<F> cst(const F& c) {
  return Poly<F>(c);
}

template <class F>
Poly<F> X() {
  return Poly<F>::x();
}

template <class F>
Poly<F> one_minus_x() {
  return Poly<F>(std::vector<F>{F(1), F(-1)});
}

template <class F>
void check_support(const EnsembleSpec<F>& s) {
  if (!catalog_supported(s.family, s.beta))
    fail("UnsupportedBeta", "no catalog operator for " + family_name(s.family) + " beta=" + to_string(s.beta));
}

template <class F>
DiffOp<F> gaussian_op(const EnsembleSpec<F>& s) {
  Rational k = s.kappa();
  auto x = X<F>();
  F N = s.N;
  if (s.beta == 2) {
    F g = s.coupling();
    F t = F(g / N);
    Poly<F> y2 = x * x - cst(F(F(4) * g));
    return DiffOp<F>({x, -y2, Poly<F>(), cst(F(t * t))});
  }
  if (s.beta == 1 || s.beta == 4) {
    F g = s.coupling();
    F t2 = F(g * g / (N * N * F(k)));
    F ht = F(F(Rational(1) - Rational(1) / k) * g / N);
    Poly<F> y2 = x * x - cst(F(F(4) * g));
    std::vector<Poly<F>> c(6);
    c[5] = cst(F(-(t2 * t2)));
    c[3] = (y2 * F(frac(1, 2)) - cst(ht)) * F(F(5) * t2);
    c[2] = x * F(F(-3) * t2);
    c[1] = -(y2 * y2 - y2 * F(F(4) * ht) - cst(t2));
    c[0] = (y2 - cst(F(F(2) * ht))) * x;
    return DiffOp<F>(std::move(c));
  }
  // beta in {2/3, 6}: unit weight only; operator multiplied through by sqrt(kappa-1)
  if (s.g) fail("UnsupportedParameter", "Gaussian beta=" + to_string(s.beta) + " operator is defined for unit weight only");
  F K(k - 1);
  F Nb = F(K * N);
  Poly<F> u = x * x * F(F(1) / K);  // x^2/K
  Poly<F> one(F(1));
  std::vector<Poly<F>> c(8);
  c[7] = cst(F(F(81) * K * K * K * K));
  c[5] = (cst(F(F(3) * Nb + F(2))) - u * F(2)) * F(F(1008) * K * K * K);
  c[4] = x * F(F(2016) * K * K);
  c[3] = (cst(F(F(21) * Nb + F(5))) - u * F(14)) * (cst(F(F(21) * Nb + F(23))) - u * F(14)) * F(F(64) * K * K);
  c[2] = (cst(F(F(3) * Nb + F(2))) - u * F(2)) * x * F(F(9984) * K);
  c[1] = (cst(F(F(54) * Nb * (F(4) * Nb * Nb + F(8) * Nb + F(3)) - F(20))) -
          u * F(F(432) * Nb * Nb + F(576) * Nb + F(57)) + u * u * F(F(96) * (F(3) * Nb + F(2))) -
          u * u * u * F(64)) *
         F(F(256) * K);
  c[0] = (cst(F(F(144) * Nb * Nb + F(192) * Nb + F(25))) - u * F(F(64) * (F(3) * Nb + F(2))) + u * u * F(64)) * x * F(256);
  return DiffOp<F>(std::move(c));
}

template <class F>
Poly<F> gaussian_rhs(const EnsembleSpec<F>& s) {
  Rational k = s.kappa();
  auto x = X<F>();
  F N = s.N;
  if (s.beta == 2) return cst(F(2));
  if (s.beta == 1 || s.beta == 4) {
    F g = s.coupling();
    F ht = F(F(Rational(1) - Rational(1) / k) * g / N);
    Poly<F> y2 = x * x - cst(F(F(4) * g));
    return y2 * F(2) - cst(F(F(10) * ht));
  }
  F K(k - 1);
  F Nb = F(K * N);
  Poly<F> v = x * x * F(F(4) / K) - cst(F(F(6) * Nb + F(7)));
  return v * v * F(2048) - cst(F(3 * 4096));
}

template <class F>
DiffOp<F> laguerre_op(const EnsembleSpec<F>& s) {
  auto x = X<F>();
  F N = s.N, a = s.a;
  if (s.beta == 2) {
    F A = F(a + F(2) * N);
    std::vector<Poly<F>> c(4);
    c[3] = poly_pow(x, 3);
    c[2] = poly_pow(x, 2) * F(4);
    c[1] = -(x * x - x * F(F(2) * A) + cst(F(a * a - F(2)))) * x;
    c[0] = x * A - cst(F(a * a));
    return DiffOp<F>(std::move(c));
  }
  Rational k = s.kappa();
  F K(k - 1);
  F ab = F(a / K), Nb = F(K * N);
  F at = F(ab * (ab - F(2)));
  F A = F(ab + F(4) * Nb);
  Poly<F> u = x * F(F(1) / K);
  std::vector<Poly<F>> c(6);
  c[5] = poly_pow(x, 5) * F(4);
  c[4] = poly_pow(x, 4) * F(40);
  c[3] = -(u * u * F(5) - u * F(F(10) * A) + cst(F(F(5) * at - F(88)))) * poly_pow(x, 3);
  c[2] = -(u * u * F(16) - u * F(F(38) * A) + cst(F(F(22) * at - F(16)))) * poly_pow(x, 2);
  c[1] = (u * u - u * F(F(4) * A) + cst(F(F(2) * (F(2) * A * A + at - F(2))))) * poly_pow(x, 3) * F(F(1) / (K * K)) -
         (u * F(F(4) * (at - F(3)) * A) - cst(F(at * at - F(14) * at - F(16)))) * x;
  c[0] = -(u * u * u * A) + u * u * F(F(2) * A * A + at) - u * F((F(3) * at + F(4)) * A) + cst(F(at * at));
  return DiffOp<F>(std::move(c));
}

template <class F>
Poly<F> laguerre_rhs(const EnsembleSpec<F>& s) {
  auto x = X<F>();
  F N = s.N, a = s.a;
  if (s.beta == 2) return x + cst(a);
  Rational k = s.kappa();
  F K(k - 1);
  F ab = F(a / K), Nb = F(K * N);
  Poly<F> u = x * F(F(1) / K);
  F iK = F(F(1) / K);
  return (u * u * F(2) + u * F(F(2) * ab - F(1))) * F(F(4) * iK * Nb) - (u * u * u - u * u * F(ab + F(2))) * iK +
         (u * F(ab * ab + F(4) * ab - F(4)) - cst(F(ab * (ab - F(2)) * (ab - F(2))))) * iK;
}

template <class F>
DiffOp<F> jacobi_op(const EnsembleSpec<F>& s) {
  auto x = X<F>();
  auto omx = one_minus_x<F>();
  auto tmx = cst(F(1)) - x * F(2);  // 1-2x
  F N = s.N, a = s.a, b = s.b;
  Poly<F> xo = x * omx;
  if (s.beta == 2) {
    F c = F(a + b + F(2) * N);
    std::vector<Poly<F>> co(4);
    co[3] = poly_pow(xo, 3);
    co[2] = tmx * poly_pow(xo, 2) * F(4);
    co[1] = poly_pow(xo, 2) * F(c * c - F(14)) - (omx * F(a * a) + x * F(b * b) - cst(F(2))) * xo;
    co[0] = tmx * xo * F(F(frac(1, 2)) * (c * c - F(4))) + xo * F(F(frac(3, 2)) * (a * a - b * b)) - omx * F(a * a) +
            x * F(b * b);
    return DiffOp<F>(std::move(co));
  }
  Rational k = s.kappa();
  F K(k - 1);
  F ab = F(a / K), bb = F(b / K), Nb = F(K * N);
  F at = F(ab * (ab - F(2))), bt = F(bb * (bb - F(2)));
  F ct = F(ab + bb + F(4) * Nb - F(1));
  F c2 = F(ct * ct);
  auto fp = [&](const F& p, const F& q) { return omx * p + x * q; };
  auto fm = [&](const F& p, const F& q) { return omx * p - x * q; };
  Poly<F> xo2 = poly_pow(xo, 2), xo3 = poly_pow(xo, 3), xo4 = poly_pow(xo, 4), xo5 = poly_pow(xo, 5);
  std::vector<Poly<F>> co(6);
  co[5] = xo5 * F(4);
  co[4] = tmx * xo4 * F(40);
  co[3] = xo4 * F(F(5) * c2 - F(493)) - (fp(at, bt) * F(5) - cst(F(88))) * xo3;
  co[2] = xo3 * F(F(41) * (at - bt)) + tmx * xo3 * F(F(19) * c2 - F(539)) - fm(at, bt) * xo2 * F(22) + tmx * xo2 * F(16);
  co[1] = xo3 * F(c2 * c2 - F(64) * c2 + F(719)) -
          xo2 * F((c2 - F(45)) * (at + bt - F(6)) + (at - bt) * (at - bt) - F(248)) -
          tmx * xo2 * F((c2 - F(37)) * (at - bt)) +
          (fp(F(at * at), F(bt * bt)) - fp(at, bt) * F(14) - cst(F(16))) * xo;
  co[0] = xo2 * F(F(frac(5, 2)) * (c2 - F(9)) * (at - bt)) + tmx * xo2 * F(F(frac(1, 2)) * (c2 - F(9)) * (c2 - F(9))) -
          (fm(at, bt) * F(F(3) * c2 - F(35)) + cst(F(F(frac(7, 2)) * (at * at - bt * bt) + F(4) * (at - bt)))) * xo *
              F(frac(1, 2)) -
          tmx * xo * F(F(frac(1, 2)) * (F(4) * c2 - F(36) + F(frac(3, 2)) * (at - bt) * (at - bt))) +
          fm(F(at * at), F(bt * bt));
  return DiffOp<F>(std::move(co));
}

template <class F>
Poly<F> jacobi_rhs(const EnsembleSpec<F>& s) {
  auto x = X<F>();
  auto omx = one_minus_x<F>();
  F N = s.N, a = s.a, b = s.b;
  if (s.beta == 2) return (omx * a + x * b) * F(a + b + N);
  Rational k = s.kappa();
  F K(k - 1);
  F ab = F(a / K), bb = F(b / K), Nb = F(K * N);
  F ct = F(ab + bb + F(4) * Nb - F(1));
  F e = F(ct - F(2) * Nb);
  F sab = F(ab + bb);
  Poly<F> lin = omx * ab + x * bb;
  Poly<F> bracket = lin * F(sab * (sab - F(2))) + (lin * F(2) - cst(F(1))) * F(F(4) * Nb * e) -
                    cst(F(ab * bb * (sab - F(6)) + F(4) * (sab - F(1))));
  return x * omx * bracket * e -
         (omx * omx * F(ab * (ab - F(2)) * (ab - F(2))) + x * x * F(bb * (bb - F(2)) * (bb - F(2)))) * e;
}

}  // namespace detail

template <class F>
DiffOp<F> catalog_density_op(const EnsembleSpec<F>& s) {
  detail::check_support(s);
  switch (s.family) {
    case Family::Gaussian: return detail::gaussian_op(s);
    case Family::Laguerre: return detail::laguerre_op(s);
    case Family::Jacobi: return detail::jacobi_op(s);
  }
  fail("UnsupportedBeta", "unknown family");
}

template <class F>
Poly<F> catalog_resolvent_rhs(const EnsembleSpec<F>& s) {
  detail::check_support(s);
  switch (s.family) {
    case Family::Gaussian: return detail::gaussian_rhs(s);
    case Family::Laguerre: return detail::laguerre_rhs(s);
    case Family::Jacobi: return detail::jacobi_rhs(s);
  }
  fail("UnsupportedBeta", "unknown family");
}

template <class F>
WeightTag<F> ensemble_weight(const EnsembleSpec<F>& s) {
  switch (s.family) {
    case Family::Gaussian: return WeightTag<F>::gaussian(s.g ? F(s.N * F(s.kappa()) / (F(2) * *s.g)) : F(1));
    case Family::Laguerre: return WeightTag<F>::laguerre(s.a);
    case Family::Jacobi: return WeightTag<F>::jacobi(s.a, s.b);
  }
  fail("InvalidArgument", "unknown family");
}

}  // namespace specden
