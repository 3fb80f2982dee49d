#include <random>

#include "doctest.h"
#include "specden/diffop/system.hpp"

using namespace specden;

namespace {

using Op = DiffOp<Rational>;

EnsembleSpec<Rational> spec(Family f, Rational beta, Rational N, Rational a = 0, Rational b = 0) {
  EnsembleSpec<Rational> s;
  s.family = f;
  s.beta = beta;
  s.N = N;
  s.a = a;
  s.b = b;
  return s;
}

Rational rand_q(std::mt19937_64& rng, int lo, int hi, int den = 7) {
  std::uniform_int_distribution<int> n(lo * den, hi * den);
  return frac(n(rng), den);
}

// Printed scalar operator for the n = 2 Jacobi chain.
Op jacobi_chain_printed(const Rational& a, const Rational& b, const Rational& N) {
  auto x = PolyQ::x();
  PolyQ x1 = x - PolyQ(1);
  PolyQ tmx = PolyQ(1) - x * Rational(2);
  PolyQ C2 = x1 * Rational(a + 2 * N) - PolyQ(b) - x * Rational(2);
  std::vector<PolyQ> c(4);
  c[3] = x * x * x1 * x1;
  c[2] = -(C2 * Rational(3) - tmx * Rational(2)) * x * x1;
  c[1] = x * x1 * Rational((a + N) * (1 + 4 * N) + 4 + N) + (C2 * Rational(2) - tmx * Rational(3)) * C2;
  c[0] = -(C2 * Rational(2) - tmx * Rational(3)) * Rational(2 * N * (a + N));
  return Op(c);
}

}  // namespace

TEST_CASE("catalog examples") {
  auto x = PolyQ::x();
  auto J = catalog_density_op(spec(Family::Jacobi, 2, 3, 1, 2));
  CHECK(J.order() == 3);
  CHECK(J.leading() == poly_pow(x * (PolyQ(1) - x), 3));
  auto s = spec(Family::Gaussian, 2, 1);
  s.g = frac(1, 2);
  auto G = catalog_density_op(s);
  CHECK(G.coeff(3) == PolyQ(frac(1, 4)));
  CHECK(G.coeff(2) == PolyQ());
  CHECK(G.coeff(1) == -(x * x - PolyQ(2)));
  CHECK(G.coeff(0) == x);
  try {
    catalog_density_op(spec(Family::Jacobi, 6, 2));
    FAIL("expected UnsupportedBeta");
  } catch (const Error& e) {
    CHECK(e.code() == "UnsupportedBeta");
  }
  CHECK(catalog_density_op(spec(Family::Gaussian, frac(2, 3), 2)).order() == 7);
  CHECK(catalog_density_op(spec(Family::Laguerre, 4, 2, 1)).order() == 5);
  CHECK(catalog_density_op(spec(Family::Jacobi, 1, 2, 1, 1)).order() == 5);
}

TEST_CASE("catalog resolvent right-hand sides") {
  auto x = PolyQ::x();
  CHECK(catalog_resolvent_rhs(spec(Family::Gaussian, 2, 5)) == PolyQ(2));
  CHECK(catalog_resolvent_rhs(spec(Family::Jacobi, 2, 3, 1, 2)) == PolyQ(6) + x * Rational(6));
  CHECK(catalog_resolvent_rhs(spec(Family::Laguerre, 2, 3, 0)) == x);
}

TEST_CASE("op_apply_to_weighted_poly examples") {
  auto x = PolyQ::x();
  auto r = op_apply_to_weighted_poly(Op::d(), PolyQ(1), WeightTag<Rational>::gaussian(1));
  CHECK(r.Q == x * Rational(-2));
  auto s = spec(Family::Gaussian, 2, 1);
  s.g = frac(1, 2);
  auto z = op_apply_to_weighted_poly(catalog_density_op(s), PolyQ(1), WeightTag<Rational>::gaussian(1));
  CHECK(z.Q.is_zero_poly());
  Rational a = frac(3, 2);
  auto l = op_apply_to_weighted_poly(Op::d(), x, WeightTag<Rational>::laguerre(a));
  CHECK(l.Q == PolyQ(a + 1) - x);
  CHECK(l.x_power == 0);
  auto j = op_apply_to_weighted_poly(Op::d(), PolyQ(1), WeightTag<Rational>::jacobi(a, 2));
  CHECK(j.x_power == 1);
  CHECK(j.one_minus_x_power == 1);
  CHECK(j.Q == (PolyQ(1) - x) * a - x * Rational(2));
}

TEST_CASE("pullback examples and functoriality") {
  auto x = PolyQ::x();
  CHECK(op_pullback_affine(Op::d(), Rational(2), Rational(0)) == Op({PolyQ(), PolyQ(frac(1, 2))}));
  auto inv = op_pullback_inverse(Op::d());
  CHECK(inv.op == Op({PolyQ(), -(x * x)}));
  auto inv2 = op_pullback_inverse(Op({PolyQ(), PolyQ(), PolyQ(1)}));
  CHECK(inv2.op == Op({PolyQ(), x * x * x * Rational(2), poly_pow(x, 4)}));
  std::mt19937_64 rng(5);
  for (int t = 0; t < 5; ++t) {
    auto D = catalog_density_op(spec(Family::Jacobi, 4, 3, rand_q(rng, 0, 3), rand_q(rng, 0, 3)));
    Rational al = rand_q(rng, 1, 4);
    if (al == 0) al = 1;
    CHECK(op_pullback_affine(op_pullback_affine(D, al, Rational(0)), Rational(1) / al, Rational(0)) == D);
  }
}

TEST_CASE("Jacobi operators are symmetric under (x,a,b) -> (1-x,b,a)") {
  std::mt19937_64 rng(7);
  for (Rational beta : {Rational(1), Rational(2), Rational(4)}) {
    for (int t = 0; t < 3; ++t) {
      Rational a = rand_q(rng, 0, 4), b = rand_q(rng, 0, 4), N(t + 2);
      auto D = catalog_density_op(spec(Family::Jacobi, beta, N, a, b));
      auto S = catalog_density_op(spec(Family::Jacobi, beta, N, b, a));
      auto P = op_pullback_affine(D, Rational(-1), Rational(1));
      bool same = P == S || P == Rational(-1) * S;
      CHECK(same);
    }
  }
}

TEST_CASE("Gaussian system entries") {
  auto M2 = build_gaussian_system(2, 2, Rational(4));  // N-1 with N = 5
  CHECK(M2.at(1, 0) == RatFun<QSqrt>(QSqrt(6)));
  CHECK(M2.at(0, 1) == RatFun<QSqrt>(QSqrt(-4)));
  CHECK(M2.at(0, 0) == RatFun<QSqrt>(Poly<QSqrt>::x() * QSqrt(2)));
  auto M6 = build_gaussian_system(6, 6, Rational(1));
  CHECK(M6.at(0, 1) == RatFun<QSqrt>(QSqrt(0, -4, 3)));
  auto M4 = build_gaussian_system(4, 4, Rational(2));
  CHECK(M4.at(0, 1) == RatFun<QSqrt>(QSqrt(0, -4, 2)));
  CHECK_THROWS_AS(build_gaussian_system(3, 2, Rational(1)), Error);
}

TEST_CASE("Jacobi system coefficient D_2") {
  Rational N = 3;
  auto M = build_jacobi_system(2, spec(Family::Jacobi, 2, N, 1, 1));
  CHECK(M.at(2, 1) == RatFun<Rational>(Rational(-2 * (N + 1))));
}

TEST_CASE("elimination reproduces the Gaussian catalog") {
  std::mt19937_64 rng(3);
  for (Rational beta : {Rational(2), Rational(4), Rational(6)}) {
    for (int t = 0; t < 3; ++t) {
      Rational N(t + 2);
      Rational sc = beta == 6 ? Rational(1) : rand_q(rng, 1, 3, 5) + frac(1, 5);
      auto E = eliminate_gaussian(beta == 2 ? 2 : (beta == 4 ? 4 : 6), beta, N - 1);
      auto s = spec(Family::Gaussian, beta, N);
      if (beta != 6) s.g = N * beta / 4 / (sc * sc);
      auto C = catalog_density_op(s);
      auto P = op_pullback_affine(E, sc, Rational(0));
      CHECK(proportional(P, C));
    }
  }
}

TEST_CASE("elimination reproduces the printed n=2 Jacobi chain operator") {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 3; ++t) {
    Rational a = rand_q(rng, 0, 3), b = rand_q(rng, 0, 3), N(t + 1);
    auto E = eliminate_scalar(build_jacobi_system(2, spec(Family::Jacobi, 2, N, a, b)), 0);
    CHECK(proportional(E, jacobi_chain_printed(a, b, N)));
  }
}

TEST_CASE("n=4 Jacobi elimination matches printed d^5 and d^4 coefficients") {
  auto x = PolyQ::x();
  std::mt19937_64 rng(13);
  for (int t = 0; t < 3; ++t) {
    Rational a = rand_q(rng, 0, 3), b = rand_q(rng, 0, 3), N(t + 1);
    auto E = eliminate_scalar(build_jacobi_system(4, spec(Family::Jacobi, 4, N, a, b)), 0);
    REQUIRE(E.order() == 5);
    PolyQ x1 = x - PolyQ(1);
    PolyQ c5 = poly_pow(x * x1, 4) * Rational(4);
    PolyQ c4 = -(x1 * Rational(a + 4 * N) - PolyQ(b) - x * Rational(2)) * poly_pow(x * x1, 3) * Rational(20);
    PolyQ printed3 = poly_pow(x * x1, 3) * Rational(5 * (a + 4 * N) * (a + 4 * N) - 5 * a * (a - 2) - 12);
    Rational s = c5.lead() / E.leading().lead();
    CHECK(E.coeff(5) * s == c5);
    CHECK(E.coeff(4) * s == c4);
    // printed d^3 coefficient disagrees; the full operator is checked against the catalog below
    auto [q3, r3] = divmod(E.coeff(3) * s, poly_pow(x * x1, 2));
    CHECK(r3.is_zero_poly());
    CHECK(q3.degree() == 2);
    CHECK(E.coeff(3) * s != printed3);
  }
}

TEST_CASE("Jacobi chains reproduce the beta = 2 and 4 catalog operators") {
  std::mt19937_64 rng(17);
  for (int n : {2, 4}) {
    for (int t = 0; t < 3; ++t) {
      Rational a = rand_q(rng, 0, 3), b = rand_q(rng, 0, 3), N(t + 2);
      auto E = eliminate_scalar(build_jacobi_system(n, spec(Family::Jacobi, n, N - 1, a, b)), 0);
      auto inv = op_pullback_inverse(E);
      auto C = op_conjugate(inv.op, WeightTag<Rational>::jacobi(Rational(-a - n * (N - 1)), Rational(-b)));
      auto target = catalog_density_op(spec(Family::Jacobi, n, N, a, b));
      CHECK(proportional(primitive(C.op), target));
    }
  }
}

TEST_CASE("operator pretty printer is canonical") {
  auto s = spec(Family::Gaussian, 2, 1);
  s.g = frac(1, 2);
  CHECK(to_string(catalog_density_op(s)) == "[x] + [2 + -1*x^2]*d + [1/4]*d^3");
}
