#include <cmath>

#include "doctest.h"
#include "specden/oracle.hpp"
#include "support.hpp"

using namespace specden;
using specden::testing::error_code;
using specden::testing::spec;

namespace {

std::vector<double> grid(double lo, double hi, int n) {
  std::vector<double> g;
  for (int i = 0; i < n; ++i) g.push_back(lo + (hi - lo) * i / (n - 1));
  return g;
}

double simpson(const std::function<double(double)>& f, double lo, double hi, int n) {
  double h = (hi - lo) / n, acc = f(lo) + f(hi);
  for (int i = 1; i < n; ++i) acc += f(lo + i * h) * (i % 2 ? 4 : 2);
  return acc * h / 3;
}

}  // namespace

TEST_CASE("closed-form recurrences match moment orthogonalization") {
  for (auto s : {spec(Family::Gaussian, 2, 1), spec(Family::Laguerre, 2, 1, frac(1, 2)), spec(Family::Laguerre, 2, 1, 3),
                 spec(Family::Jacobi, 2, 1, 0, 0), spec(Family::Jacobi, 2, 1, frac(1, 2), 3), spec(Family::Jacobi, 2, 1, 1, frac(-1, 2))}) {
    auto a = classical_recurrence(s, 7);
    auto b = recurrence_from_moments(s, 7);
    CHECK(a.alpha == b.alpha);
    for (size_t j = 1; j < 7; ++j) CHECK(a.beta[j] == b.beta[j]);
  }
}

TEST_CASE("cd_density examples") {
  CHECK(cd_density(spec(Family::Gaussian, 2, 1)).P == PolyQ(1));
  auto g2 = cd_density(spec(Family::Gaussian, 2, 2));
  CHECK(g2.P == PolyQ(1) + PolyQ::monomial(2, 2));
  CHECK(g2.constant_class == "sqrt(1/pi)");
  CHECK(cd_density(spec(Family::Laguerre, 2, 1)).P == PolyQ(1));
  CHECK(error_code([] { cd_density(spec(Family::Gaussian, 1, 2)); }) == "UnsupportedBeta");
  CHECK(error_code([] { cd_density(spec(Family::Gaussian, 2, 13)); }) == "InvalidArgument");
}

TEST_CASE("cd densities integrate to N") {
  auto g = cd_density(spec(Family::Gaussian, 2, 4));
  CHECK(simpson(g, -9, 9, 4000) == doctest::Approx(4).epsilon(1e-10));
  auto l = cd_density(spec(Family::Laguerre, 2, 3, 2));
  CHECK(simpson(l, 0, 80, 8000) == doctest::Approx(3).epsilon(1e-9));
  auto j = cd_density(spec(Family::Jacobi, 2, 3, 1, 2));
  CHECK(simpson(j, 0, 1, 2000) == doctest::Approx(3).epsilon(1e-10));
}

TEST_CASE("numeric and exact cd densities agree") {
  for (auto s : {spec(Family::Gaussian, 2, 6), spec(Family::Laguerre, 2, 5, frac(3, 2)), spec(Family::Jacobi, 2, 4, 1, frac(1, 2))}) {
    auto d = cd_density(s);
    double lo = s.family == Family::Gaussian ? -3 : 0.05, hi = s.family == Family::Gaussian ? 3 : (s.family == Family::Jacobi ? 0.95 : 15);
    for (double x : grid(lo, hi, 23)) CHECK(cd_density_numeric(s, x) == doctest::Approx(d(x)).epsilon(1e-11));
  }
}

TEST_CASE("catalog operators annihilate cd densities exactly") {
  for (int N = 1; N <= 6; ++N) {
    CHECK(cd_annihilation(spec(Family::Gaussian, 2, N)).Q.is_zero_poly());
    for (Rational a : {Rational(0), frac(1, 2), Rational(1), Rational(3)}) {
      CHECK(cd_annihilation(spec(Family::Laguerre, 2, N, a)).Q.is_zero_poly());
      for (Rational b : {Rational(0), frac(1, 2), Rational(1), Rational(3)})
        CHECK(cd_annihilation(spec(Family::Jacobi, 2, N, a, b)).Q.is_zero_poly());
    }
  }
}

TEST_CASE("moments_bruteforce examples") {
  CHECK(moments_bruteforce(spec(Family::Gaussian, 2, 2), 2).at(2) == 2);
  auto one = moments_bruteforce(spec(Family::Laguerre, 4, 1, 2), 4);
  auto mu = weight_moments(spec(Family::Laguerre, 4, 1, 2), 4);
  for (int k = 0; k <= 4; ++k) CHECK(one.at(k) == mu[static_cast<size_t>(k)]);
  CHECK(moments_bruteforce(spec(Family::Jacobi, 2, 2), 1).at(1) == 1);
  CHECK(error_code([] { moments_bruteforce(spec(Family::Gaussian, 1, 2), 2); }) == "UnsupportedBeta");
  BruteForceLimits tiny;
  tiny.max_terms = 10;
  CHECK(error_code([&] { moments_bruteforce(spec(Family::Gaussian, 6, 3), 2, tiny); }) == "SizeLimit");
}

TEST_CASE("brute force equals the recurrence moments") {
  for (Rational beta : {Rational(2), Rational(4)})
    for (int N = 1; N <= 3; ++N) {
      for (auto s : {spec(Family::Gaussian, beta, N), spec(Family::Laguerre, beta, N, frac(3, 2)),
                     spec(Family::Jacobi, beta, N, 1, frac(1, 2))}) {
        auto bf = moments_bruteforce(s, 8);
        auto ex = moments_exact(s, 8);
        for (int k = 0; k <= 8; ++k) CHECK(bf.at(k) == ex.at(k));
      }
    }
  for (int N = 1; N <= 2; ++N) {
    auto s = spec(Family::Gaussian, 6, N);
    auto bf = moments_bruteforce(s, 6);
    auto ex = moments_exact(s, 6);
    for (int k = 0; k <= 6; ++k) CHECK(bf.at(k) == ex.at(k));
  }
}

TEST_CASE("moments_quadrature examples") {
  auto g = moments_quadrature(spec(Family::Gaussian, 1, 2), 6);
  CHECK(std::abs(g[0] - 2) < 1e-10);
  auto ex = moments_exact(spec(Family::Gaussian, 1, 2), 6);
  for (int k = 1; k <= 6; ++k) CHECK(std::abs(g[static_cast<size_t>(k)] - to_double(ex.at(k))) <= 1e-8 * std::max(1.0, std::abs(g[static_cast<size_t>(k)])));

  auto j = moments_quadrature(spec(Family::Jacobi, 1, 2), 2);
  CHECK(std::abs(j[1] - 1) < 1e-9);

  auto l = moments_quadrature(spec(Family::Laguerre, 1, 2, frac(1, 2)), 6);
  auto lex = moments_exact(spec(Family::Laguerre, 1, 2, frac(1, 2)), 6);
  for (int k = 0; k <= 6; ++k) CHECK(l[static_cast<size_t>(k)] == doctest::Approx(to_double(lex.at(k))).epsilon(1e-8));

  CHECK(error_code([] { moments_quadrature(spec(Family::Gaussian, 1, 3), 2); }) == "InvalidArgument");
  CHECK(error_code([] { moments_quadrature(spec(Family::Gaussian, 2, 2), 2); }) == "UnsupportedBeta");
}

TEST_CASE("tridiagonal eigensolver") {
  auto e = tridiagonal_eigenvalues({2, 1}, {0});
  CHECK(e == std::vector<double>{1, 2});
  auto f = tridiagonal_eigenvalues({2, 2, 2, 2}, {1, 1, 1});
  for (int k = 1; k <= 4; ++k) CHECK(f[static_cast<size_t>(k - 1)] == doctest::Approx(2 - 2 * std::cos(k * M_PI / 5)).epsilon(1e-14));
  CHECK(tridiagonal_eigenvalues({5}, {}) == std::vector<double>{5});
  CHECK(error_code([] { tridiagonal_eigenvalues({1, 2}, {}); }) == "InvalidArgument");
}

TEST_CASE("mc_moments statistical agreement") {
  auto s = spec(Family::Gaussian, 2, 2);
  auto est = mc_moments(s, 2, 100000, 11);
  CHECK(std::abs(est.mean.at(2) - 2) < 4 * est.stderr_.at(2));
  CHECK(est.stderr_.at(2) > 0);
  CHECK(est.mean.at(0) == 2);

  auto l = mc_moments(spec(Family::Laguerre, 2, 4), 1, 100000, 12);
  CHECK(std::abs(l.mean.at(1) - 16) < 4 * l.stderr_.at(1));

  for (Rational beta : {Rational(1), Rational(4), frac(2, 3)}) {
    auto t = spec(Family::Gaussian, beta, 3);
    auto m = mc_moments(t, 4, 40000, 13);
    auto ex = moments_exact(t, 4);
    for (int k = 1; k <= 4; ++k) CHECK(std::abs(m.mean.at(k) - to_double(ex.at(k))) < 4 * m.stderr_.at(k));
  }
  auto lse = spec(Family::Laguerre, 4, 3, frac(1, 2));
  auto m = mc_moments(lse, 3, 40000, 14);
  auto ex = moments_exact(lse, 3);
  for (int k = 1; k <= 3; ++k) CHECK(std::abs(m.mean.at(k) - to_double(ex.at(k))) < 4 * m.stderr_.at(k));
}

TEST_CASE("mc_moments is reproducible for a fixed seed and worker count") {
  auto s = spec(Family::Laguerre, 1, 5, 1);
  auto a = mc_moments(s, 4, 5000, 99, 3);
  auto b = mc_moments(s, 4, 5000, 99, 3);
  CHECK(a.mean == b.mean);
  CHECK(a.stderr_ == b.stderr_);
  auto c = mc_moments(s, 4, 5000, 100, 3);
  CHECK(a.mean != c.mean);
  CHECK(error_code([] { mc_moments(spec(Family::Jacobi, 2, 2), 2, 100, 1); }) == "UnsupportedFamily");
  CHECK(error_code([] { mc_moments(spec(Family::Gaussian, 2, 65), 2, 100, 1); }) == "InvalidArgument");
}

TEST_CASE("ode_residual on cd densities") {
  auto s = spec(Family::Gaussian, 2, 3);
  auto d = cd_density(s);
  DensityEvaluator ev = [&](double x, int n) { return d.derivatives(x, n); };
  auto r = ode_residual(catalog_density_op(s), ev, grid(-4, 4, 81));
  CHECK(r.max < 1e-12);

  auto js = spec(Family::Jacobi, 2, 2, 1, 1);
  auto jd = cd_density(js);
  DensityEvaluator jev = [&](double x, int n) { return jd.derivatives(x, n); };
  CHECK(ode_residual(catalog_density_op(js), jev, grid(0.02, 0.98, 49)).max < 1e-12);

  // perturbation eps * x * w must register at the eps scale
  const double eps = 1e-4;
  auto pert = cd_density(s);
  pert.P = pert.P + PolyQ::monomial(Rational(1, 10000), 1);
  DensityEvaluator pev = [&](double x, int n) { return pert.derivatives(x, n); };
  auto rp = ode_residual(catalog_density_op(s), pev, grid(-4, 4, 81));
  CHECK(rp.max > eps / 100);
  CHECK(rp.mean > 0);
}
