#include "specden/diffop/system.hpp"

namespace specden {

std::string family_name(Family f) {
  switch (f) {
    case Family::Gaussian: return "gaussian";
    case Family::Laguerre: return "laguerre";
    case Family::Jacobi: return "jacobi";
  }
  return "unknown";
}

Family parse_family(const std::string& s) {
  if (s == "gaussian" || s == "G") return Family::Gaussian;
  if (s == "laguerre" || s == "L") return Family::Laguerre;
  if (s == "jacobi" || s == "J") return Family::Jacobi;
  fail("InvalidArgument", "unknown family '" + s + "'");
}

bool beta_in(const Rational& beta, std::initializer_list<Rational> set) {
  for (const auto& b : set)
    if (b == beta) return true;
  return false;
}

bool catalog_supported(Family f, const Rational& beta) {
  if (f == Family::Gaussian) return beta_in(beta, {frac(2, 3), 1, 2, 4, 6});
  return beta_in(beta, {1, 2, 4});
}

MatrixODE<QSqrt> build_gaussian_system(int n, const Rational& beta, const Rational& N) {
  if (n != 2 && n != 4 && n != 6) fail("UnsupportedN", "system size n must be 2, 4 or 6");
  Rational k = beta / 2;
  QSqrt rk = QSqrt::sqrt(Rational(1) / k);  // 1/sqrt(kappa)
  auto x = Poly<QSqrt>::x();
  MatrixODE<QSqrt> M(n + 1);
  for (int p = 0; p <= n; ++p) {
    Rational np(n - p);
    M.at(p, p) = RatFun<QSqrt>(x * QSqrt(Rational(2 * (np / k - 1))));
    if (p > 0) M.at(p, p - 1) = RatFun<QSqrt>(QSqrt(Rational(p * (np / k + N + 1))) * rk);
    if (p < n) M.at(p, p + 1) = RatFun<QSqrt>(QSqrt(Rational(-2 * np)) * rk);
  }
  return M;
}

DiffOp<Rational> eliminate_gaussian(int n, const Rational& beta, const Rational& N) {
  auto op = eliminate_scalar(build_gaussian_system(n, beta, N), 0);
  return op_map<Rational>(op, [](const QSqrt& q) { return q.to_rational(); });
}

}  // namespace specden
