#include "specden/edge.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <boost/math/special_functions/airy.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <cmath>
#include <limits>

namespace specden {

namespace {

using DPoly = std::vector<double>;

std::vector<DPoly> to_double_coeffs(const DiffOp<Rational>& D) {
  std::vector<DPoly> out;
  for (const auto& p : D.coeffs()) {
    DPoly q;
    for (const auto& c : p.coeffs()) q.push_back(to_double(c));
    out.push_back(q);
  }
  return out;
}

Poly<Rational> lin(const Rational& c0, const Rational& c1) { return Poly<Rational>(std::vector<Rational>{c0, c1}); }

Poly<Rational> xpow(const Rational& c, int k) { return Poly<Rational>::monomial(c, k); }

// Series sum_m v[m - lo] x^{gamma - m/2}.
struct HalfSeries {
  int lo = 0;
  std::vector<double> v;

  double get(int m) const {
    int i = m - lo;
    return i >= 0 && i < static_cast<int>(v.size()) ? v[static_cast<size_t>(i)] : 0.0;
  }
  int hi() const { return lo + static_cast<int>(v.size()) - 1; }
  void add(int m, double c) {
    if (v.empty()) {
      lo = m;
      v.push_back(0);
    }
    if (m < lo) {
      v.insert(v.begin(), static_cast<size_t>(lo - m), 0.0);
      lo = m;
    }
    if (m > hi()) v.resize(static_cast<size_t>(m - lo + 1), 0.0);
    v[static_cast<size_t>(m - lo)] += c;
  }
};

// exp(-phi) d/dx exp(phi) f with phi' = -s x^{1/2}.
HalfSeries tmap(const HalfSeries& u, double s, double g) {
  HalfSeries o;
  o.lo = u.lo - 1;
  o.v.assign(u.v.size() + 3, 0.0);
  for (int m = o.lo; m <= o.hi(); ++m) o.v[static_cast<size_t>(m - o.lo)] = -s * u.get(m + 1) + (g - (m - 2) / 2.0) * u.get(m - 2);
  return o;
}

HalfSeries apply_series(const std::vector<DPoly>& P, double s, double g, const HalfSeries& a) {
  HalfSeries acc, t = a;
  for (size_t i = 0; i < P.size(); ++i) {
    if (i > 0) t = tmap(t, s, g);
    for (size_t j = 0; j < P[i].size(); ++j) {
      if (P[i][j] == 0) continue;
      for (int m = t.lo; m <= t.hi(); ++m) acc.add(m - 2 * static_cast<int>(j), P[i][j] * t.get(m));
    }
  }
  return acc;
}

int top_weight(const std::vector<DPoly>& P) {
  int w = 0;
  for (size_t i = 0; i < P.size(); ++i)
    for (size_t j = 0; j < P[i].size(); ++j)
      if (P[i][j] != 0) w = std::max(w, static_cast<int>(i + 2 * j));
  return w;
}

HalfSeries unit(int k) {
  HalfSeries e;
  e.lo = 0;
  e.v.assign(static_cast<size_t>(k) + 1, 0.0);
  e.v.back() = 1;
  return e;
}

std::vector<double> real_roots(const std::vector<double>& coeffs_low_to_high) {
  auto c = coeffs_low_to_high;
  while (!c.empty() && c.back() == 0) c.pop_back();
  std::vector<double> out;
  int n = static_cast<int>(c.size()) - 1;
  if (n < 1) return out;
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) M(i, i - 1) = 1;
  for (int i = 0; i < n; ++i) M(i, n - 1) = -c[static_cast<size_t>(i)] / c.back();
  Eigen::EigenSolver<Eigen::MatrixXd> es(M, false);
  for (int i = 0; i < n; ++i) {
    auto z = es.eigenvalues()[i];
    if (std::abs(z.imag()) <= 1e-7 * std::max(1.0, std::abs(z))) out.push_back(z.real());
  }
  std::sort(out.begin(), out.end());
  return out;
}

double falling_d(double m, int i) {
  double p = 1;
  for (int k = 0; k < i; ++k) p *= m - k;
  return p;
}

using Real = long double;

template <class T>
T eval_t(const DPoly& p, T x) {
  T acc = 0;
  for (size_t i = p.size(); i-- > 0;) acc = acc * x + p[i];
  return acc;
}

// State rhs for D y = 0 written as a first order system.
template <class T>
std::function<void(T, const std::vector<T>&, std::vector<T>&)> system_rhs(const std::vector<DPoly>& P) {
  return [P](T x, const std::vector<T>& y, std::vector<T>& dy) {
    size_t n = P.size() - 1;
    T acc = 0;
    for (size_t i = 0; i < n; ++i) {
      dy[i] = i + 1 < n ? y[i + 1] : 0.0;
      acc += eval_t(P[i], x) * y[i];
    }
    dy[n - 1] = -acc / eval_t(P[n], x);
  };
}

std::vector<double> uniform_grid(double lo, double hi, double step) {
  int n = static_cast<int>(std::llround((hi - lo) / step));
  if (n < 1) fail("InvalidArgument", "grid needs at least two points");
  std::vector<double> g;
  for (int i = 0; i <= n; ++i) g.push_back(i == n ? hi : lo + i * (hi - lo) / n);
  return g;
}

void check_kind_beta(const Rational& beta, bool hard) {
  bool ok = hard ? beta_in(beta, {1, 2, 4}) : beta_in(beta, {frac(2, 3), 1, 2, 4, 6});
  if (!ok) fail("UnsupportedBeta", std::string(hard ? "hard" : "soft") + " edge operator undefined for beta=" + to_string(beta));
}

bool even_beta(const Rational& beta) { return beta.get_den() == 1 && beta.get_num() % 2 == 0; }

// Least-squares weights making sum_b w_b basis[b] fit target on rows.
std::vector<double> lsq(const std::vector<std::vector<double>>& cols, const std::vector<double>& target) {
  Eigen::MatrixXd A(static_cast<Eigen::Index>(target.size()), static_cast<Eigen::Index>(cols.size()));
  Eigen::VectorXd b(static_cast<Eigen::Index>(target.size()));
  for (size_t r = 0; r < target.size(); ++r) {
    b(static_cast<Eigen::Index>(r)) = target[r];
    for (size_t c = 0; c < cols.size(); ++c) A(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = cols[c][r];
  }
  Eigen::VectorXd norm = A.colwise().lpNorm<Eigen::Infinity>().transpose();
  for (Eigen::Index c = 0; c < A.cols(); ++c)
    if (norm(c) > 0) A.col(c) /= norm(c);
  Eigen::VectorXd w = A.colPivHouseholderQr().solve(b);
  for (Eigen::Index c = 0; c < A.cols(); ++c)
    if (norm(c) > 0) w(c) /= norm(c);
  return std::vector<double>(w.data(), w.data() + w.size());
}

using States = std::vector<std::vector<Real>>;  // states[grid index][derivative]

States combine(const std::vector<States>& basis, const std::vector<double>& w) {
  States out = basis.front();
  for (size_t i = 0; i < out.size(); ++i)
    for (size_t d = 0; d < out[i].size(); ++d) {
      Real acc = 0;
      for (size_t b = 0; b < basis.size(); ++b) acc += w[b] * basis[b][i][d];
      out[i][d] = acc;
    }
  return out;
}

}  // namespace

DiffOp<Rational> soft_edge_op(const Rational& beta) {
  check_kind_beta(beta, false);
  Rational k = beta / 2;
  if (beta == 2) return DiffOp<Rational>({Poly<Rational>(Rational(2)), xpow(-4, 1), Poly<Rational>(), Poly<Rational>(Rational(1))});
  if (beta == 1 || beta == 4) {
    std::vector<Poly<Rational>> c(6);
    c[0] = xpow(-8 * k * k, 1);
    c[1] = xpow(16 * k * k, 2);
    c[2] = Poly<Rational>(Rational(6 * k));
    c[3] = xpow(-10 * k, 1);
    c[5] = Poly<Rational>(Rational(1));
    return DiffOp<Rational>(std::move(c));
  }
  std::vector<Poly<Rational>> c(8);
  c[0] = xpow(128 * k * k * k, 2);
  c[1] = xpow(-256 * k * k * k, 3) + Poly<Rational>(Rational(68 * k * k));
  c[2] = xpow(-208 * k * k, 1);
  c[3] = xpow(frac(784, 3) * k * k, 2);
  c[4] = Poly<Rational>(Rational(28 * k));
  c[5] = xpow(-56 * k, 1);
  c[7] = Poly<Rational>(Rational(3));
  return DiffOp<Rational>(std::move(c));
}

DiffOp<Rational> hard_edge_op(const Rational& beta, const Rational& a) {
  check_kind_beta(beta, true);
  if (beta == 2) {
    Rational a2 = a * a;
    return DiffOp<Rational>({lin(-a2, frac(1, 2)), lin(0, 2 - a2) + xpow(1, 2), xpow(4, 2), xpow(1, 3)});
  }
  Rational k = beta / 2;
  Rational ab = a / (k - 1);
  Rational at = ab * (ab - 2);
  auto u = lin(-at, 2 * k);  // 2 kappa x - a~
  auto v = lin(-at, k);      // kappa x - a~
  std::vector<Poly<Rational>> c(6);
  c[5] = xpow(4, 5);
  c[4] = xpow(40, 4);
  c[3] = lin(88 - 5 * at, 10 * k).shift_up(3);
  c[2] = lin(16 - 22 * at, 38 * k).shift_up(2);
  c[1] = (u * u + lin(-14 * at - 16, 12 * k)).shift_up(1);
  c[0] = u * v - xpow(4 * k, 1);
  return DiffOp<Rational>(std::move(c));
}

double airy_ai(double x) {
  if (!(std::abs(x) <= 12)) fail("DomainExceeded", "Airy oracle is defined for |x| <= 12");
  return boost::math::airy_ai(x);
}

double airy_ai_prime(double x) {
  if (!(std::abs(x) <= 12)) fail("DomainExceeded", "Airy oracle is defined for |x| <= 12");
  return boost::math::airy_ai_prime(x);
}

double besselj(double nu, double x) {
  if (!(nu > -1)) fail("DomainExceeded", "Bessel oracle needs nu > -1");
  if (!(x >= 0)) fail("DomainExceeded", "Bessel oracle needs x >= 0");
  return boost::math::cyl_bessel_j(nu, x);
}

double soft_airy_density(double x) {
  double ai = airy_ai(x), aip = airy_ai_prime(x);
  return aip * aip - x * ai * ai;
}

double hard_bessel_density(double a, double x) {
  if (x == 0) return a == 0 ? 0.25 : 0.0;
  double z = std::sqrt(x);
  double j0 = besselj(a, z), j1 = besselj(a + 1, z);
  // J_{a-1} = (2a/z) J_a - J_{a+1}
  return 0.25 * (j0 * j0 + j1 * j1 - 2 * a / z * j0 * j1);
}

namespace {

template <class T>
void dopri5_advance(const std::function<void(T, const std::vector<T>&, std::vector<T>&)>& f, T tol, T& h, long& steps,
                    std::vector<T>& scale, T x0, T x1, std::vector<T>& y) {
  static const T c2 = T(1) / 5, c3 = T(3) / 10, c4 = T(4) / 5, c5 = T(8) / 9;
  static const T a21 = T(1) / 5;
  static const T a31 = T(3) / 40, a32 = T(9) / 40;
  static const T a41 = T(44) / 45, a42 = -T(56) / 15, a43 = T(32) / 9;
  static const T a51 = T(19372) / 6561, a52 = -T(25360) / 2187, a53 = T(64448) / 6561, a54 = -T(212) / 729;
  static const T a61 = T(9017) / 3168, a62 = -T(355) / 33, a63 = T(46732) / 5247, a64 = T(49) / 176, a65 = -T(5103) / 18656;
  static const T b1 = T(35) / 384, b3 = T(500) / 1113, b4 = T(125) / 192, b5 = -T(2187) / 6784, b6 = T(11) / 84;
  static const T e1 = T(71) / 57600, e3 = -T(71) / 16695, e4 = T(71) / 1920, e5 = -T(17253) / 339200, e6 = T(22) / 525,
                      e7 = -T(1) / 40;
  size_t n = y.size();
  std::vector<T> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), t(n), yn(n);
  T dir = x1 >= x0 ? T(1) : T(-1), x = x0;
  f(x, y, k1);
  while (dir * (x1 - x) > 0) {
    T hh = std::min(h, dir * (x1 - x));
    bool last = hh == dir * (x1 - x);
    T hs = dir * hh;
    auto stage = [&](std::vector<T>& out, T cx, std::initializer_list<std::pair<T, const std::vector<T>*>> terms) {
      for (size_t i = 0; i < n; ++i) {
        T acc = y[i];
        for (const auto& [c, k] : terms) acc += hs * c * (*k)[i];
        t[i] = acc;
      }
      f(x + cx * hs, t, out);
    };
    stage(k2, c2, {{a21, &k1}});
    stage(k3, c3, {{a31, &k1}, {a32, &k2}});
    stage(k4, c4, {{a41, &k1}, {a42, &k2}, {a43, &k3}});
    stage(k5, c5, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}});
    stage(k6, T(1), {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}});
    for (size_t i = 0; i < n; ++i) yn[i] = y[i] + hs * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    f(x + hs, yn, k7);
    if (scale.size() != n) scale.assign(n, 0.0);
    T ratio = 0;
    for (size_t i = 0; i < n; ++i) {
      T sc = std::max({scale[i], std::abs(y[i]), std::abs(yn[i]), std::numeric_limits<T>::min()});
      T e = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      ratio = std::max(ratio, std::abs(e) / (tol * hh * sc));
    }
    ++steps;
    if (!std::isfinite(ratio)) fail("ToleranceNotMet", "integrator produced a non-finite state");
    if (ratio <= 1) {
      for (size_t i = 0; i < n; ++i) scale[i] = std::max({scale[i], std::abs(y[i]), std::abs(yn[i])});
      x = last ? x1 : x + hs;
      y = yn;
      k1 = k7;
    }
    T fac = ratio == 0 ? T(5) : std::clamp(T(0.9) * std::pow(ratio, T(-0.25)), T(0.2), T(5));
    if (!(ratio <= 1 && last)) h = hh * fac;
    if (h < T(1e-14) * std::max(T(1), std::abs(x))) fail("ToleranceNotMet", "step size underflow at x=" + std::to_string(static_cast<double>(x)));
  }
}

}  // namespace

void Dopri5::advance(double x0, double x1, std::vector<double>& y) { dopri5_advance<double>(f, tol, h, steps, scale, x0, x1, y); }

std::vector<double> soft_decay_rates(const DiffOp<Rational>& D) {
  auto P = to_double_coeffs(D);
  int w = top_weight(P);
  // char(s) = sum_{i + 2j = w} p_ij (-s)^i
  std::vector<double> c(P.size(), 0.0);
  for (size_t i = 0; i < P.size(); ++i) {
    int j2 = w - static_cast<int>(i);
    if (j2 < 0 || j2 % 2) continue;
    size_t j = static_cast<size_t>(j2 / 2);
    if (j < P[i].size()) c[i] = P[i][j] * (i % 2 ? -1.0 : 1.0);
  }
  std::vector<double> out;
  for (double r : real_roots(c))
    if (r > 1e-9) out.push_back(r);
  return out;
}

DecayingSeries decaying_series(const DiffOp<Rational>& D, double s, int terms) {
  auto P = to_double_coeffs(D);
  int mtop = -top_weight(P);
  double sc = 0;
  for (size_t i = 0; i < P.size(); ++i)
    for (double c : P[i]) sc = std::max(sc, std::abs(c) * std::pow(std::max(1.0, s), static_cast<double>(i)));
  auto coeff_at = [&](double g, int offset) { return apply_series(P, s, g, unit(0)).get(mtop + offset); };
  if (std::abs(coeff_at(0, 0)) > 1e-9 * sc) fail("InvalidArgument", "s is not a root of the characteristic polynomial");
  int d = 0;
  for (int o = 1; o <= 8 && d == 0; ++o)
    for (double g : {0.0, 1.0, 2.0})
      if (std::abs(coeff_at(g, o)) > 1e-9 * sc) d = o;
  if (d == 0) fail("ToleranceNotMet", "no exponent equation in the formal tail series");
  double c0 = coeff_at(0, d), c1 = coeff_at(1, d);
  if (std::abs(c1 - c0) < 1e-12 * sc) fail("ToleranceNotMet", "tail exponent undetermined");
  DecayingSeries out;
  out.s = s;
  out.gamma = -c0 / (c1 - c0);
  if (std::abs(coeff_at(out.gamma, d)) > 1e-8 * sc) fail("ToleranceNotMet", "tail exponent equation is not affine");
  HalfSeries a = unit(0);
  for (int k = 1; k < terms; ++k) {
    a.v.resize(static_cast<size_t>(k) + 1, 0.0);
    int m = mtop + k + d;
    double L = apply_series(P, s, out.gamma, unit(k)).get(m);
    double r = apply_series(P, s, out.gamma, a).get(m);
    a.v[static_cast<size_t>(k)] = -r / L;
  }
  out.c = a.v;
  return out;
}

std::vector<double> DecayingSeries::derivatives(const DiffOp<Rational>& D, double x, int n) const {
  (void)D;
  HalfSeries t;
  t.lo = 0;
  t.v = c;
  double e = std::exp(-2.0 / 3.0 * s * std::pow(x, 1.5));
  std::vector<double> out;
  for (int i = 0; i <= n; ++i) {
    if (i > 0) t = tmap(t, s, gamma);
    // drop the indices created past the last known coefficient
    int valid_hi = static_cast<int>(c.size()) - 1 - i;
    double acc = 0, prev = std::numeric_limits<double>::infinity();
    int growth = 0;
    for (int m = t.lo; m <= valid_hi; ++m) {
      double term = t.get(m) * std::pow(x, gamma - m / 2.0);
      if (term == 0) continue;
      if (std::abs(term) > prev) {
        if (++growth >= 3) break;
      } else {
        growth = 0;
      }
      prev = std::abs(term);
      acc += term;
    }
    out.push_back(e * acc);
  }
  return out;
}

std::vector<double> indicial_roots(const DiffOp<Rational>& D) {
  auto P = to_double_coeffs(D);
  // I_0(r) = sum_i [x^i] p_i * falling(r, i)
  std::vector<double> poly(P.size(), 0.0);
  for (size_t i = 0; i < P.size(); ++i) {
    for (size_t j = 0; j < i && j < P[i].size(); ++j)
      if (P[i][j] != 0) fail("InvalidArgument", "operator is not regular singular at 0");
    double q = i < P[i].size() ? P[i][i] : 0.0;
    std::vector<double> f{1.0};
    for (size_t k = 0; k < i; ++k) {
      std::vector<double> g(f.size() + 1, 0.0);
      for (size_t t = 0; t < f.size(); ++t) {
        g[t + 1] += f[t];
        g[t] -= static_cast<double>(k) * f[t];
      }
      f = g;
    }
    for (size_t t = 0; t < f.size(); ++t) poly[t] += q * f[t];
  }
  // merge clustered (multiple) roots into their mean
  auto roots = real_roots(poly);
  std::vector<double> out;
  for (size_t i = 0; i < roots.size();) {
    size_t j = i;
    double acc = 0;
    while (j < roots.size() && std::abs(roots[j] - roots[i]) <= 1e-5 * (1 + std::abs(roots[i]))) acc += roots[j++];
    out.push_back(acc / static_cast<double>(j - i));
    i = j;
  }
  return out;
}

FrobeniusSeries frobenius_series(const DiffOp<Rational>& D, double r, int terms) {
  auto P = to_double_coeffs(D);
  size_t J = 0;
  for (size_t i = 0; i < P.size(); ++i)
    if (P[i].size() > i) J = std::max(J, P[i].size() - 1 - i);
  auto I = [&](size_t j, double m) {
    double acc = 0;
    for (size_t i = 0; i < P.size(); ++i)
      if (i + j < P[i].size()) acc += P[i][i + j] * falling_d(m, static_cast<int>(i));
    return acc;
  };
  FrobeniusSeries out;
  out.r = r;
  out.c.assign(static_cast<size_t>(terms), 0.0);
  out.c[0] = 1;

  // sum_i |[x^{i+j}] p_i| |falling(m, i)|, the size of I_j(m) before cancellation
  auto Iabs = [&](size_t j, double m) {
    double acc = 0;
    for (size_t i = 0; i < P.size(); ++i)
      if (i + j < P[i].size()) acc += std::abs(P[i][i + j] * falling_d(m, static_cast<int>(i)));
    return acc;
  };
  if (std::abs(I(0, r)) > 1e-7 * Iabs(0, r)) fail("InvalidArgument", "r is not an indicial root");
  for (int k = 1; k < terms; ++k) {
    double rhs = 0, mag = 0;
    for (size_t j = 1; j <= J && static_cast<int>(j) <= k; ++j) {
      double m = r + k - static_cast<double>(j);
      rhs += I(j, m) * out.c[static_cast<size_t>(k) - j];
      mag += Iabs(j, m) * std::abs(out.c[static_cast<size_t>(k) - j]);
    }
    double i0 = I(0, r + k);
    if (std::abs(i0) <= 1e-9 * Iabs(0, r + k)) {
      if (std::abs(rhs) > 1e-9 * mag) fail("UnsupportedParameter", "resonant indicial roots need logarithmic terms");
      out.c[static_cast<size_t>(k)] = 0;  // spanned by the root r + k
      continue;
    }
    out.c[static_cast<size_t>(k)] = -rhs / i0;
  }
  return out;
}

std::vector<double> FrobeniusSeries::derivatives(double x, int n) const {
  std::vector<double> out(static_cast<size_t>(n) + 1, 0.0);
  double lx = std::log(x);
  for (size_t k = 0; k < c.size(); ++k) {
    if (c[k] == 0) continue;
    double e = r + static_cast<double>(k);
    double base = c[k] * std::exp(e * lx);
    if (!std::isfinite(base)) break;
    for (int i = 0; i <= n; ++i) out[static_cast<size_t>(i)] += base * falling_d(e, i) / std::pow(x, i);
  }
  return out;
}

namespace {

template <class T>
double residual_impl(const std::vector<DPoly>& P, const std::vector<double>& grid, const std::vector<std::vector<T>>& states,
                     const std::vector<double>* top, std::vector<double>* pointwise = nullptr) {
  size_t n = P.size() - 1, m = grid.size();
  if (pointwise) pointwise->assign(m, std::numeric_limits<double>::quiet_NaN());
  std::vector<T> raw(m, -1);
  T num = 0, den = 0;
  std::vector<T> lower(m, 0);
  for (size_t k = 0; k < m; ++k) {
    T acc = 0;
    for (size_t i = 0; i < n; ++i) acc += eval_t<T>(P[i], grid[k]) * states[k][i];
    lower[k] = acc;
    den = std::max(den, std::abs(acc));
  }
  for (size_t k = 0; k < m; ++k) {
    T yn;
    if (top && !std::isnan((*top)[k])) {
      yn = (*top)[k];
    } else {
      if (k < 3 || k + 3 >= m) continue;
      T h = (T(grid[k + 3]) - T(grid[k - 3])) / 6;
      auto g = [&](size_t i) { return states[i][n - 1]; };
      yn = (-g(k - 3) + 9 * g(k - 2) - 45 * g(k - 1) + 45 * g(k + 1) - 9 * g(k + 2) + g(k + 3)) / (60 * h);
    }
    raw[k] = std::abs(lower[k] + eval_t<T>(P[n], grid[k]) * yn);
    num = std::max(num, raw[k]);
  }
  if (pointwise)
    for (size_t k = 0; k < m; ++k)
      if (raw[k] >= 0) (*pointwise)[k] = static_cast<double>(den > 0 ? raw[k] / den : raw[k]);
  return static_cast<double>(den > 0 ? num / den : num);
}

}  // namespace

double tabulated_residual(const DiffOp<Rational>& D, const std::vector<double>& grid, const std::vector<std::vector<double>>& states,
                          const std::vector<double>* top) {
  return residual_impl<double>(to_double_coeffs(D), grid, states, top);
}

double soft_tail_amplitude(const Rational& beta) {
  if (!even_beta(beta)) fail("UnsupportedBeta", "tail amplitude is known for even beta only");
  double k = to_double(beta) / 2;
  return std::tgamma(1 + k) / std::pow(8 * k, k) / M_PI;
}

double EdgeSolution::at(double x) const {
  if (grid.empty()) fail("InvalidArgument", "empty solution");
  if (x <= grid.front()) return values.front();
  if (x >= grid.back()) return values.back();
  auto it = std::upper_bound(grid.begin(), grid.end(), x);
  size_t i = static_cast<size_t>(it - grid.begin());
  double t = (x - grid[i - 1]) / (grid[i] - grid[i - 1]);
  return values[i - 1] * (1 - t) + values[i] * t;
}

namespace {

States integrate_left(const std::vector<DPoly>& P, const std::vector<double>& seed, const std::vector<double>& grid, double x0,
                      double tol) {
  auto f = system_rhs<Real>(P);
  States st(grid.size());
  long steps = 0;
  // points beyond x0 are reached rightward from the seed, the rest leftward
  size_t split = static_cast<size_t>(std::upper_bound(grid.begin(), grid.end(), x0) - grid.begin());
  {
    std::vector<Real> y(seed.begin(), seed.end()), scale;
    Real h = 1e-2L, x = x0;
    for (size_t i = split; i < grid.size(); ++i) {
      dopri5_advance<Real>(f, tol, h, steps, scale, x, grid[i], y);
      x = grid[i];
      st[i] = y;
    }
  }
  std::vector<Real> y(seed.begin(), seed.end()), scale;
  Real h = 1e-2L, x = x0;
  for (size_t i = split; i-- > 0;) {
    dopri5_advance<Real>(f, tol, h, steps, scale, x, grid[i], y);
    x = grid[i];
    st[i] = y;
  }
  return st;
}

struct SoftFit {
  std::vector<double> weights;
  std::string rule;
  States states;
};

SoftFit soft_fit(const Rational& beta, const DiffOp<Rational>& D, const std::vector<double>& grid, double x0, double tol,
                 double fit_point, double step) {
  auto P = to_double_coeffs(D);
  int n = D.order();
  double kappa = to_double(beta) / 2;
  auto rates = soft_decay_rates(D);
  SoftFit fit;
  if (even_beta(beta)) {
    double s = 2 * kappa, best = 0;
    for (double r : rates)
      if (std::abs(r - s) < std::abs(best - s)) best = r;
    if (std::abs(best - s) > 1e-8) fail("ToleranceNotMet", "density decay rate is not a characteristic root");
    double A = soft_tail_amplitude(beta);
    auto seed = decaying_series(D, s).derivatives(D, x0, n - 1);
    for (double& v : seed) v *= A;
    fit.weights = {A};
    fit.rule = "tail-amplitude";
    fit.states = integrate_left(P, seed, grid, x0, tol);
    return fit;
  }
  // bulk fit against sqrt|x|/pi over [x_fit, x_fit/2], below the output grid when x_min > x_fit
  double x_fit = std::min(grid.front(), fit_point);
  std::vector<double> full;
  if (x_fit < grid.front()) {
    full = uniform_grid(x_fit, grid.front(), step);
    full.pop_back();
  }
  size_t off = full.size();
  full.insert(full.end(), grid.begin(), grid.end());
  std::vector<States> basis;
  for (double r : rates) basis.push_back(integrate_left(P, decaying_series(D, r).derivatives(D, x0, n - 1), full, x0, tol));
  std::vector<std::vector<double>> cols(basis.size());
  std::vector<double> target;
  for (size_t i = 0; i < full.size() && full[i] <= x_fit / 2; ++i) {
    double t = std::sqrt(-full[i]) / M_PI;
    target.push_back(1.0);
    for (size_t b = 0; b < basis.size(); ++b) cols[b].push_back(static_cast<double>(basis[b][i][0]) / t);
  }
  for (auto& b : basis) b.erase(b.begin(), b.begin() + static_cast<std::ptrdiff_t>(off));
  fit.weights = lsq(cols, target);
  fit.rule = "bulk-least-squares";
  fit.states = combine(basis, fit.weights);
  return fit;
}

}  // namespace

EdgeSolution solve_soft_edge(const Rational& beta, double x_min, double x_max, const EdgeOptions& opt) {
  auto D = soft_edge_op(beta);
  if (!(x_max >= 3) || !(x_min <= -4)) fail("InvalidArgument", "soft edge grid needs x_min <= -4 and x_max >= 3");
  if (!(opt.step > 0)) fail("InvalidArgument", "step must be positive");
  auto grid = uniform_grid(x_min, x_max, opt.step);
  double x0 = std::max(x_max, opt.seed_point);
  auto fit = soft_fit(beta, D, grid, x0, opt.tol, opt.bulk_fit_point, opt.step);

  EdgeSolution out;
  out.beta = beta;
  out.kind = "soft";
  out.grid = grid;
  for (const auto& st : fit.states) out.values.push_back(static_cast<double>(st[0]));
  out.normalization = fit.rule;
  out.mode_weights = fit.weights;
  out.seed_x = x0;
  out.ode_residual = residual_impl<Real>(to_double_coeffs(D), grid, fit.states, nullptr, &out.residuals);
  if (beta == 2) {
    double dev = 0;
    for (size_t i = 0; i < grid.size(); ++i)
      if (std::abs(grid[i]) <= 12) dev = std::max(dev, std::abs(out.values[i] - soft_airy_density(grid[i])));
    out.oracle_deviation = dev;
  }
  for (double v : out.values)
    if (!std::isfinite(v)) fail("ToleranceNotMet", "non-finite soft edge value");
  if (out.ode_residual > opt.residual_tol)
    fail("ToleranceNotMet", "soft edge ODE residual " + std::to_string(out.ode_residual));

  if (opt.check_seed) {
    double scale = 0;
    for (double v : out.values) scale = std::max(scale, std::abs(v));
    for (double shift : {-1.0, 1.0}) {
      auto alt = soft_fit(beta, D, grid, x0 + shift, opt.tol, opt.bulk_fit_point, opt.step);
      double dev = 0;
      // compared where both seeds reach the grid by leftward integration
      for (size_t i = 0; i < grid.size() && grid[i] <= std::min(x0, x0 + shift); ++i)
        dev = std::max(dev, std::abs(static_cast<double>(alt.states[i][0]) - out.values[i]));
      if (dev > opt.seed_tol * scale)
        fail("SeedUnstable", "moving the seed point by " + std::to_string(shift) + " changes the solution by " + std::to_string(dev / scale));
    }
  }
  return out;
}

double hard_tail_envelope_mean(const EdgeSolution& s) {
  double x_max = s.grid.back();
  std::vector<double> g, xs;
  for (size_t i = 0; i < s.grid.size(); ++i)
    if (s.grid[i] >= x_max / 10) {
      g.push_back(2 * M_PI * std::sqrt(s.grid[i]) * s.values[i]);
      xs.push_back(s.grid[i]);
    }
  std::vector<size_t> up, lo;
  for (size_t i = 1; i + 1 < g.size(); ++i) {
    if (g[i] > g[i - 1] && g[i] >= g[i + 1]) up.push_back(i);
    if (g[i] < g[i - 1] && g[i] <= g[i + 1]) lo.push_back(i);
  }
  double acc = 0;
  if (up.empty() || lo.empty()) {
    for (double v : g) acc += v;
    return g.empty() ? 0.0 : acc / static_cast<double>(g.size());
  }
  // piecewise linear through the extrema, constant beyond the first and last
  auto envelope = [&](const std::vector<size_t>& ext, double x) {
    if (x <= xs[ext.front()]) return g[ext.front()];
    if (x >= xs[ext.back()]) return g[ext.back()];
    size_t k = 1;
    while (xs[ext[k]] < x) ++k;
    double x0 = xs[ext[k - 1]], x1 = xs[ext[k]];
    return g[ext[k - 1]] + (g[ext[k]] - g[ext[k - 1]]) * (x - x0) / (x1 - x0);
  };
  for (double x : xs) acc += 0.5 * (envelope(up, x) + envelope(lo, x));
  return acc / static_cast<double>(xs.size());
}

namespace {

// Coefficient of the non-oscillating mode of 2 pi sqrt(x) y for x >= lo, fitted jointly with
// t^{-1/2-j} e^{+-i w t} and t^{-2-j} e^{+-2 i w t}, t = sqrt(x).
double tail_mean_mode(const std::vector<double>& grid, const States& st, double omega, double lo) {
  const int K = 4;
  std::vector<std::vector<double>> cols(5 * K);
  std::vector<double> target;
  for (size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] < lo) continue;
    double t = std::sqrt(grid[i]);
    target.push_back(2 * M_PI * t * static_cast<double>(st[i][0]));
    for (int j = 0; j < K; ++j) {
      double slow = std::pow(t, -0.5 - j), fast = std::pow(t, -2.0 - j);
      cols[static_cast<size_t>(j)].push_back(std::pow(t, -j));
      cols[static_cast<size_t>(K + 2 * j)].push_back(slow * std::cos(omega * t));
      cols[static_cast<size_t>(K + 2 * j + 1)].push_back(slow * std::sin(omega * t));
      cols[static_cast<size_t>(3 * K + 2 * j)].push_back(fast * std::cos(2 * omega * t));
      cols[static_cast<size_t>(3 * K + 2 * j + 1)].push_back(fast * std::sin(2 * omega * t));
    }
  }
  return lsq(cols, target).front();
}

}  // namespace

double hard_small_x_constant(const Rational& beta, const Rational& a) {
  double k = to_double(beta) / 2, ad = to_double(a);
  return std::exp((2 * ad + 1) * std::log(k) + std::lgamma(1 + k) - (ad + 1) * std::log(4.0) - std::lgamma(1 + ad) -
                  std::lgamma(1 + ad + k));
}

EdgeSolution solve_hard_edge(const Rational& beta, const Rational& a, double x_max, const EdgeOptions& opt) {
  auto D = hard_edge_op(beta, a);
  double ad = to_double(a);
  if (!(a > -1)) fail("InvalidArgument", "hard edge needs a > -1");
  if (!(x_max > 0) || x_max > 100) fail("InvalidArgument", "hard edge needs 0 < x_max <= 100");
  if (!(opt.step > 0)) fail("InvalidArgument", "step must be positive");
  auto P = to_double_coeffs(D);
  int n = D.order();
  auto grid = uniform_grid(0, x_max, opt.step);
  grid.erase(grid.begin());

  std::vector<FrobeniusSeries> series;
  for (double r : indicial_roots(D)) {
    if (std::abs(r - ad) < 1e-6) r = ad;
    if (r >= ad) series.push_back(frobenius_series(D, r));
  }
  if (series.empty() || std::abs(series.front().r - ad) > 1e-7) fail("ToleranceNotMet", "no indicial root at x^a");
  if (series.size() > 2) fail("UnsupportedParameter", "more than two admissible Frobenius branches");

  // a second branch is fixed by the tail mean, fitted on [x_end/10, x_end]
  auto full = grid;
  double x_end = series.size() > 1 ? std::max(x_max, opt.tail_fit_point) : x_max;
  if (x_end > x_max) {
    auto ext = uniform_grid(x_max, x_end, std::max(opt.step, 0.25));
    full.insert(full.end(), ext.begin() + 1, ext.end());
  }

  double xs = std::min(opt.series_point, x_max);
  std::vector<States> basis;
  std::vector<std::vector<double>> tops;
  for (const auto& fs : series) {
    States st(full.size());
    std::vector<double> tp(full.size(), std::numeric_limits<double>::quiet_NaN());
    auto f = system_rhs<Real>(P);
    Real h = 1e-2L, x = xs;
    long steps = 0;
    std::vector<Real> scale;
    auto y0 = fs.derivatives(xs, n - 1);
    std::vector<Real> y(y0.begin(), y0.end());
    for (size_t i = 0; i < full.size(); ++i) {
      if (full[i] <= xs) {
        auto d = fs.derivatives(full[i], n);
        tp[i] = d.back();
        d.pop_back();
        st[i].assign(d.begin(), d.end());
        continue;
      }
      dopri5_advance<Real>(f, opt.tol, h, steps, scale, x, full[i], y);
      x = full[i];
      st[i] = y;
    }
    basis.push_back(std::move(st));
    tops.push_back(std::move(tp));
  }

  EdgeSolution out;
  out.beta = beta;
  out.kind = "hard";
  out.a = a;
  out.grid = grid;
  out.mode_weights = {hard_small_x_constant(beta, a)};
  out.normalization = "small-x-constant";
  if (basis.size() == 2) {
    double omega = std::sqrt(to_double(beta));
    double m0 = tail_mean_mode(full, basis[0], omega, x_end / 10);
    double m1 = tail_mean_mode(full, basis[1], omega, x_end / 10);
    if (!(std::abs(m1) > 0)) fail("ToleranceNotMet", "second Frobenius branch has no tail mean");
    out.mode_weights.push_back((1 - out.mode_weights[0] * m0) / m1);
    out.normalization = "small-x-constant+tail-mean";
  }
  for (auto& st : basis) st.resize(grid.size());
  auto states = combine(basis, out.mode_weights);
  std::vector<double> top(grid.size(), std::numeric_limits<double>::quiet_NaN());
  for (size_t i = 0; i < grid.size(); ++i) {
    if (std::isnan(tops[0][i])) continue;
    double acc = 0;
    for (size_t b = 0; b < basis.size(); ++b) acc += out.mode_weights[b] * tops[b][i];
    top[i] = acc;
  }
  for (const auto& st : states) out.values.push_back(static_cast<double>(st[0]));
  for (double v : out.values)
    if (!std::isfinite(v)) fail("ToleranceNotMet", "non-finite hard edge value");
  out.ode_residual = residual_impl<Real>(P, grid, states, &top, &out.residuals);
  if (beta == 2) {
    double dev = 0;
    for (size_t i = 0; i < grid.size(); ++i) dev = std::max(dev, std::abs(out.values[i] - hard_bessel_density(ad, grid[i])));
    out.oracle_deviation = dev;
  }
  if (out.ode_residual > opt.residual_tol)
    fail("ToleranceNotMet", "hard edge ODE residual " + std::to_string(out.ode_residual));
  return out;
}

EdgeScalingMap edge_scaling_map(const EnsembleSpec<Rational>& spec, EdgeKind kind, const std::optional<Rational>& alpha1,
                                const std::optional<Rational>& alpha2) {
  EdgeScalingMap m;
  m.spec = spec;
  m.kind = kind;
  double k = to_double(spec.kappa()), N = to_double(spec.N), a = to_double(spec.a);
  if (!(N >= 1)) fail("InvalidArgument", "edge scaling needs N >= 1");
  switch (spec.family) {
    case Family::Gaussian: {
      if (kind == EdgeKind::Hard) fail("NoHardEdge", "the Gaussian ensemble has no hard edge");
      // unit weight exp(-x^2); exp(-N kappa x^2/(2g)) rescales x by sqrt(2g/(N kappa))
      double unit = spec.g ? std::sqrt(2 * to_double(*spec.g) / (N * k)) : 1.0;
      m.delta = (1 - 1 / k) / (2 * std::sqrt(2 * N));
      m.c0 = std::sqrt(k) * (std::sqrt(2 * N) + m.delta) * unit;
      m.c1 = std::sqrt(k) / (std::sqrt(2.0) * std::cbrt(std::sqrt(N))) * unit;
      if (kind == EdgeKind::SoftSmallest) {
        m.c0 = -m.c0;
        m.orientation = -1;
      }
      break;
    }
    case Family::Laguerre: {
      if (kind == EdgeKind::Hard) {
        m.delta = 2 * a / k;
        m.c0 = 0;
        m.c1 = k / (4 * N + m.delta);
        break;
      }
      if (!alpha1) {
        if (kind == EdgeKind::SoftSmallest) fail("InvalidArgument", "smallest eigenvalue soft edge needs a = alpha1 N");
        m.delta = 2 * a / k;
        m.c0 = k * (4 * N + m.delta);
        m.c1 = k * 2 * std::cbrt(2 * N);
        break;
      }
      double r = to_double(*alpha1) / k;
      if (!(r > 0)) fail("InvalidArgument", "alpha1 must be positive");
      double qp = std::sqrt(1 + r) + 1, qm = std::sqrt(1 + r) - 1;
      m.q_plus = qp;
      m.q_minus = qm;
      m.delta = (1 - 1 / k) * r / (2 * std::sqrt(r + 1));
      if (kind == EdgeKind::Soft) {
        m.c0 = k * (qp * qp * N + m.delta);
        m.c1 = k * qp * std::cbrt(qp * N / (qp - 1));
      } else {
        m.c0 = k * (qm * qm * N - m.delta);
        m.c1 = k * qm * std::cbrt(qm * N / (qm + 1));
        m.orientation = -1;
      }
      break;
    }
    case Family::Jacobi: {
      if (kind != EdgeKind::Hard) fail("UnsupportedParameter", "Jacobi soft edge scaling is not tabulated");
      double f = alpha2 ? 1 + to_double(*alpha2) / k : 1.0;
      m.c0 = 0;
      m.c1 = 1 / (4 * f * N * N);
      break;
    }
  }
  if (!(m.c1 > 0)) fail("InvalidArgument", "edge scaling produced a non-positive Jacobian");
  return m;
}

}  // namespace specden
