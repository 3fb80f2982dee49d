#include "doctest.h"
#include "specden/moments.hpp"
#include "support.hpp"

using namespace specden;
using specden::testing::error_code;
using specden::testing::rand_q;
using specden::testing::spec;

namespace {

Rational catalan(unsigned k) { return Rational(binomial(2 * k, k)) / (k + 1); }

}  // namespace

TEST_CASE("moments_exact examples") {
  auto gue = moments_symbolic(Family::Gaussian, 2, {}, {}, 6);
  auto N = QN::variable();
  CHECK(gue.at(0) == N);
  CHECK(gue.at(4) == (QN(2) * N * N * N + N) / QN(4));
  for (int k : {1, 3, 5}) CHECK(is_zero(gue.at(k)));

  CHECK(moments_exact(spec(Family::Jacobi, 2, 1, 0, 0), 3).at(3) == frac(1, 4));
  CHECK(moments_exact(spec(Family::Laguerre, 2, 1, 2), 1).at(1) == 3);
  CHECK(error_code([] { moments_exact(spec(Family::Jacobi, 6, 2), 3); }) == "UnsupportedBeta");
  CHECK(error_code([] { moments_exact(spec(Family::Jacobi, 2, 1), 2).at(3); }) == "RangeTooSmall");
}

TEST_CASE("Gaussian odd moments vanish and m_0 = N") {
  for (Rational beta : {frac(2, 3), Rational(1), Rational(2), Rational(4), Rational(6)}) {
    auto t = moments_exact(spec(Family::Gaussian, beta, 3), 12);
    CHECK(t.at(0) == 3);
    for (int k = 1; k <= 11; k += 2) CHECK(t.at(k) == 0);
    for (int k = 2; k <= 12; k += 2) CHECK(t.at(k) > 0);
  }
}

TEST_CASE("symbolic and numeric moment runs agree") {
  std::mt19937_64 rng(31);
  for (Family f : {Family::Laguerre, Family::Jacobi}) {
    for (Rational beta : {Rational(1), Rational(2), Rational(4)}) {
      Rational a = rand_q(rng, 0, 3), b = rand_q(rng, 0, 3);
      auto sym = moments_symbolic(f, beta, Scaled{0, a}, Scaled{0, b}, 8);
      for (int N = 1; N <= 3; ++N) {
        auto num = moments_exact(spec(f, beta, N, a, b), 8);
        for (int k = 0; k <= 8; ++k) CHECK(sym.at(k)(Rational(N)) == num.at(k));
      }
    }
  }
}

TEST_CASE("zero pivots fall back to the symbolic run") {
  // forward pivot vanishes at k = a + b + 2N + 1 for the beta = 2 Jacobi operator
  auto s = spec(Family::Jacobi, 2, 1, 0, 0);
  auto t = moments_exact(s, 6);
  for (int k = 0; k <= 6; ++k) CHECK(t.at(k) == Rational(1) / (k + 1));
}

TEST_CASE("negative moments") {
  CHECK(moments_negative(spec(Family::Laguerre, 2, 1, 2), -1).at(-1) == frac(1, 2));
  CHECK(moments_negative(spec(Family::Laguerre, 2, 2, 5), -1).at(-1) == frac(2, 5));
  CHECK(error_code([] { moments_negative(spec(Family::Laguerre, 2, 1, 1), -2); }) == "DivergentMoment");
  CHECK(error_code([] { moments_negative(spec(Family::Gaussian, 2, 1), -1); }) == "InvalidArgument");
  // uniform density on (0,1) with a = 1/2 weight: m_{-1} = int x^{-1/2} / int x^{1/2}
  CHECK(moments_negative(spec(Family::Jacobi, 2, 1, frac(1, 2), 0), -1).at(-1) == 3);
}

TEST_CASE("LUE reciprocity") {
  Rational a = 5, N = 2;
  auto s = spec(Family::Laguerre, 2, N, a);
  auto neg = moments_negative(s, -4);
  auto pos = moments_exact(s, 3);
  for (int k = 0; k <= 3; ++k) {
    Rational prod = 1;
    for (int j = -k; j <= k; ++j) prod /= a - j;
    CHECK(neg.at(-k - 1) == prod * pos.at(k));
  }
}

TEST_CASE("JUE difference reciprocity") {
  Rational a = 5, b = 3, N = 2;
  auto s = spec(Family::Jacobi, 2, N, a, b);
  auto neg = moments_negative(s, -5);
  auto pos = moments_exact(s, 4);
  auto dm = [&](int k) { return (k < 0 ? neg.at(k) : pos.at(k)) - (k + 1 < 0 ? neg.at(k + 1) : pos.at(k + 1)); };
  for (int k = 0; k <= 3; ++k) {
    Rational prod = 1;
    for (int j = -k; j <= k; ++j) prod *= (a + b + 2 * N - j) / (a - j);
    CHECK(dm(-k - 1) == prod * dm(k));
  }
}

TEST_CASE("Jacobi reflection symmetry") {
  std::mt19937_64 rng(32);
  for (Rational beta : {Rational(1), Rational(2), Rational(4)}) {
    Rational a = rand_q(rng, 0, 4), b = rand_q(rng, 0, 4), N = rand_q(rng, 1, 4);
    auto ab = moments_exact(spec(Family::Jacobi, beta, N, a, b), 6);
    auto ba = moments_exact(spec(Family::Jacobi, beta, N, b, a), 6);
    CHECK(ab.at(1) + ba.at(1) == N);
    // moments of 1 - x are binomial transforms
    for (unsigned k = 0; k <= 6; ++k) {
      Rational acc = 0;
      for (unsigned j = 0; j <= k; ++j) acc += Rational(binomial(k, j)) * (j % 2 ? -1 : 1) * ab.at(static_cast<int>(j));
      CHECK(acc == ba.at(static_cast<int>(k)));
    }
  }
}

TEST_CASE("coeff_table examples") {
  auto g = coeff_table(Family::Gaussian, 2, {}, {}, 10, 10);
  CHECK(g.at(1, 0) == frac(1, 2));
  CHECK(g.at(2, 0) == frac(1, 2));
  CHECK(g.at(2, 2) == frac(1, 4));
  CHECK(g.at(2, 1) == 0);
  for (unsigned k = 0; k <= 10; ++k) CHECK(g.at(static_cast<int>(k), 0) == catalan(k) / pow(Rational(2), static_cast<int>(k)));

  auto l = coeff_table(Family::Laguerre, 2, {}, {}, 10, 4);
  for (int k = 1; k <= 10; ++k) CHECK(l.at(k, 0) == frac(2 * (2 * k - 1), k + 1) * l.at(k - 1, 0));
  CHECK(error_code([&] { l.at(11, 0); }) == "RangeTooSmall");
  CHECK(error_code([&] { l.at(3, 5); }) == "RangeTooSmall");

  auto j = coeff_table(Family::Jacobi, 2, {1, 0}, {1, 0}, 6, 6);
  for (int k = 0; k <= 6; ++k)
    for (int ll = 1; ll <= 6; ll += 2) CHECK(j.at(k, ll) == 0);
}

TEST_CASE("Jacobi 1/N expansion reconstructs the moments") {
  auto sym = moments_symbolic(Family::Jacobi, 2, {1, 0}, {2, 0}, 4);
  auto t = coeff_table(Family::Jacobi, 2, {1, 0}, {2, 0}, 4, 14);
  for (int k = 0; k <= 4; ++k) {
    Rational N = 1000;
    Rational exact = sym.at(k)(N), approx = 0;
    for (int l = 0; l <= 14; ++l) approx += t.at(k, l) * pow(N, 1 - l);
    CHECK(abs(exact - approx) < pow(N, -13));
  }
}

TEST_CASE("large-N expansion of a rational function") {
  auto N = QN::variable();
  auto [top, c] = large_n_expansion(N * N / (N + QN(1)), 4);
  CHECK(top == 1);
  CHECK(c == std::vector<Rational>{1, -1, 1, -1});
}

TEST_CASE("printed recursions hold on the moment tables") {
  auto lue = coeff_table(Family::Laguerre, 2, {1, 0}, {}, 10, 10);
  auto r17 = verify_printed_recursion("rr17", lue);
  CHECK(r17.checked > 0);
  CHECK(r17.violations.empty());

  auto jue = coeff_table(Family::Jacobi, 2, {1, 0}, {1, 0}, 8, 6);
  auto r20 = verify_printed_recursion("rr20", jue);
  CHECK(r20.checked > 0);
  CHECK(r20.violations.empty());

  auto jue0 = coeff_table(Family::Jacobi, 2, {}, {}, 10, 8);
  auto r22 = verify_printed_recursion("rr22", jue0);
  CHECK(r22.checked > 0);
  CHECK(r22.violations.empty());

  for (Rational beta : {frac(2, 3), Rational(6)}) {
    auto g = coeff_table(Family::Gaussian, beta, {}, {}, 10, 10);
    CHECK(verify_printed_recursion("rr16", g).violations.empty());
    CHECK(verify_printed_recursion("rr14c", g).violations.empty());
  }
  for (Rational beta : {Rational(1), Rational(4)}) {
    auto t = coeff_table(Family::Laguerre, beta, {frac(3, 2), 0}, {}, 10, 10);
    CHECK(verify_printed_recursion("rr18c", t).violations.empty());
  }
  auto lse = coeff_table(Family::Laguerre, 4, {frac(3, 2), 0}, {}, 10, 10);
  CHECK(verify_printed_recursion("rr18", lse).violations.empty());
  auto shifted = coeff_table(Family::Laguerre, 2, {2, 3}, {}, 10, 10);
  CHECK(verify_printed_recursion("rr17c", shifted).violations.empty());
}

TEST_CASE("printed recursions with misprints are reported") {
  auto g = coeff_table(Family::Gaussian, 6, {}, {}, 10, 10);
  CHECK_FALSE(verify_printed_recursion("rr14", g).violations.empty());
  auto loe = coeff_table(Family::Laguerre, 1, {frac(3, 2), 0}, {}, 10, 10);
  CHECK_FALSE(verify_printed_recursion("rr18", loe).violations.empty());
  auto shifted = coeff_table(Family::Laguerre, 2, {2, 3}, {}, 10, 10);
  auto rep = verify_printed_recursion("rr17", shifted);
  REQUIRE_FALSE(rep.violations.empty());
  CHECK(rep.violations.front().lhs != rep.violations.front().rhs);
}

TEST_CASE("verify_printed_recursion argument checks") {
  auto g = coeff_table(Family::Gaussian, 6, {}, {}, 4, 4);
  CHECK(error_code([&] { verify_printed_recursion("rr14", g); }) == "RangeTooSmall");
  CHECK(error_code([&] { verify_printed_recursion("rr17", g); }) == "InvalidArgument");
  CHECK(error_code([&] { verify_printed_recursion("nope", g); }) == "InvalidArgument");
}
