#include "specden/oracle.hpp"

#include <algorithm>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/sinh_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <limits>
#include <random>
#include <thread>

namespace specden {

namespace {

int integer_n(const EnsembleSpec<Rational>& s, int nmax) {
  if (s.N.get_den() != 1 || s.N < 1 || s.N > nmax)
    fail("InvalidArgument", "N must be an integer in [1, " + std::to_string(nmax) + "]");
  return static_cast<int>(s.N.get_num().get_si());
}

Rational gaussian_c(const EnsembleSpec<Rational>& s) { return ensemble_weight(s).c2; }

void check_weight(const EnsembleSpec<Rational>& s) {
  if (s.family != Family::Gaussian && s.a <= -1) fail("InvalidArgument", "weight exponent a must exceed -1");
  if (s.family == Family::Jacobi && s.b <= -1) fail("InvalidArgument", "weight exponent b must exceed -1");
}

double log_weight_value(const EnsembleSpec<Rational>& s, double x) {
  const double inf = std::numeric_limits<double>::infinity();
  switch (s.family) {
    case Family::Gaussian: return -to_double(gaussian_c(s)) * x * x;
    case Family::Laguerre: return x > 0 ? to_double(s.a) * std::log(x) - x : -inf;
    case Family::Jacobi: return x > 0 && x < 1 ? to_double(s.a) * std::log(x) + to_double(s.b) * std::log1p(-x) : -inf;
  }
  return -inf;
}

double weight_value(const EnsembleSpec<Rational>& s, double x) { return std::exp(log_weight_value(s, x)); }

double log_inv_h0_value(const EnsembleSpec<Rational>& s) {
  switch (s.family) {
    case Family::Gaussian: return 0.5 * std::log(to_double(gaussian_c(s)) / M_PI);
    case Family::Laguerre: return -std::lgamma(to_double(s.a) + 1);
    case Family::Jacobi: {
      double a = to_double(s.a), b = to_double(s.b);
      return std::lgamma(a + b + 2) - std::lgamma(a + 1) - std::lgamma(b + 1);
    }
  }
  return 0;
}

double inv_h0_value(const EnsembleSpec<Rational>& s) { return std::exp(log_inv_h0_value(s)); }

std::string constant_class_of(const EnsembleSpec<Rational>& s) {
  switch (s.family) {
    case Family::Gaussian: return "sqrt(" + to_string(gaussian_c(s)) + "/pi)";
    case Family::Laguerre: return "1/Gamma(" + to_string(s.a + 1) + ")";
    case Family::Jacobi: return "1/B(" + to_string(s.a + 1) + "," + to_string(s.b + 1) + ")";
  }
  return "";
}

double eval_d(const PolyQ& p, double x) {
  return p.eval_as<double>(x, [](const Rational& r) { return to_double(r); });
}

double eval_x(const XPoly<Rational>& q, double x) {
  return eval_d(q.p, x) / (std::pow(x, q.mx) * std::pow(1 - x, q.m1));
}

// Welford accumulator; workers are merged in index order.
struct Running {
  double n = 0, mean = 0, m2 = 0;

  void add(double v) {
    n += 1;
    double d = v - mean;
    mean += d / n;
    m2 += d * (v - mean);
  }
  void merge(const Running& o) {
    if (o.n == 0) return;
    double tot = n + o.n, d = o.mean - mean;
    mean += d * o.n / tot;
    m2 += o.m2 + d * d * n * o.n / tot;
    n = tot;
  }
};

}  // namespace

std::vector<Rational> weight_moments(const EnsembleSpec<Rational>& s, int kmax) {
  check_weight(s);
  std::vector<Rational> mu(static_cast<size_t>(std::max(kmax, 0)) + 1);
  mu[0] = 1;
  for (int k = 1; k <= kmax; ++k) {
    size_t i = static_cast<size_t>(k);
    switch (s.family) {
      case Family::Gaussian:
        mu[i] = k % 2 ? Rational(0) : Rational(mu[i - 2] * (k - 1) / (2 * gaussian_c(s)));
        break;
      case Family::Laguerre: mu[i] = mu[i - 1] * (s.a + k); break;
      case Family::Jacobi: mu[i] = mu[i - 1] * (s.a + k) / (s.a + s.b + k + 1); break;
    }
  }
  return mu;
}

ThreeTerm classical_recurrence(const EnsembleSpec<Rational>& s, int n) {
  check_weight(s);
  ThreeTerm r;
  for (int j = 0; j < n; ++j) {
    Rational al, be;
    switch (s.family) {
      case Family::Gaussian:
        al = 0;
        be = Rational(j) / (2 * gaussian_c(s));
        break;
      case Family::Laguerre:
        al = 2 * j + s.a + 1;
        be = j * (j + s.a);
        break;
      case Family::Jacobi: {
        // x = (1 + t)/2 maps to the (1-t)^b (1+t)^a Jacobi weight on [-1, 1]
        Rational A = s.b, B = s.a, S = A + B;
        Rational at = j == 0 ? Rational((B - A) / (S + 2)) : Rational((B * B - A * A) / ((2 * j + S) * (2 * j + S + 2)));
        Rational bt;
        if (j == 1)
          bt = 4 * (1 + A) * (1 + B) / ((2 + S) * (2 + S) * (3 + S));
        else if (j > 1)
          bt = 4 * j * (j + A) * (j + B) * (j + S) / ((2 * j + S) * (2 * j + S) * (2 * j + S + 1) * (2 * j + S - 1));
        al = (1 + at) / 2;
        be = bt / 4;
        break;
      }
    }
    al.canonicalize();
    be.canonicalize();
    r.alpha.push_back(al);
    r.beta.push_back(be);
  }
  return r;
}

ThreeTerm recurrence_from_moments(const EnsembleSpec<Rational>& s, int n) {
  auto mu = weight_moments(s, 2 * n + 1);
  auto ip = [&](const PolyQ& p, const PolyQ& q) {
    Rational acc = 0;
    for (int i = 0; i <= p.degree(); ++i)
      for (int j = 0; j <= q.degree(); ++j) acc += p[i] * q[j] * mu[static_cast<size_t>(i + j)];
    return acc;
  };
  ThreeTerm r;
  PolyQ prev, cur(1), x = PolyQ::x();
  Rational nprev = 0;
  for (int j = 0; j < n; ++j) {
    Rational nc = ip(cur, cur);
    Rational al = ip(x * cur, cur) / nc;
    Rational be = j == 0 ? Rational(0) : Rational(nc / nprev);
    r.alpha.push_back(al);
    r.beta.push_back(be);
    PolyQ next = (x - PolyQ(al)) * cur - prev * be;
    prev = cur;
    cur = next;
    nprev = nc;
  }
  return r;
}

double CDKernelDensity::weight(double x) const { return weight_value(spec, x); }

double CDKernelDensity::operator()(double x) const { return inv_h0 * weight(x) * eval_d(P, x); }

std::vector<double> CDKernelDensity::derivatives(double x, int n) const {
  if (d_.empty()) d_.push_back(XPoly<Rational>{P, 0, 0});
  auto L = ensemble_weight(spec).log_derivative();
  while (static_cast<int>(d_.size()) <= n) d_.push_back(d_.back().derivative() + d_.back() * L);
  double w = inv_h0 * weight(x);
  std::vector<double> out;
  for (int j = 0; j <= n; ++j) out.push_back(w * eval_x(d_[static_cast<size_t>(j)], x));
  return out;
}

CDKernelDensity cd_density(const EnsembleSpec<Rational>& s) {
  if (s.beta != 2) fail("UnsupportedBeta", "Christoffel-Darboux densities are beta = 2 only");
  int N = integer_n(s, 12);
  CDKernelDensity d;
  d.spec = s;
  d.rec = classical_recurrence(s, N);
  PolyQ prev, cur(1), x = PolyQ::x();
  Rational h = 1;
  for (int j = 0; j < N; ++j) {
    if (j > 0) h *= d.rec.beta[static_cast<size_t>(j)];
    d.P = d.P + cur * cur * (1 / h);
    PolyQ next = (x - PolyQ(d.rec.alpha[static_cast<size_t>(j)])) * cur - prev * d.rec.beta[static_cast<size_t>(j)];
    prev = cur;
    cur = next;
  }
  d.constant_class = constant_class_of(s);
  d.inv_h0 = inv_h0_value(s);
  return d;
}

double cd_density_numeric(const EnsembleSpec<Rational>& s, double x) {
  if (s.beta != 2) fail("UnsupportedBeta", "Christoffel-Darboux densities are beta = 2 only");
  int N = integer_n(s, 100000);
  auto rec = classical_recurrence(s, N);
  double lw = log_weight_value(s, x);
  if (!std::isfinite(lw)) return 0.0;
  // orthonormal values carried as p * exp(ls)
  double ls = 0.5 * (log_inv_h0_value(s) + lw), p0 = 1, pm = 0, acc = 0;
  for (int j = 0; j < N; ++j) {
    acc += p0 * p0;
    if (j + 1 == N) break;
    double bj = j == 0 ? 0.0 : std::sqrt(to_double(rec.beta[static_cast<size_t>(j)]));
    double bn = std::sqrt(to_double(rec.beta[static_cast<size_t>(j + 1)]));
    double pn = ((x - to_double(rec.alpha[static_cast<size_t>(j)])) * p0 - bj * pm) / bn;
    pm = p0;
    p0 = pn;
    if (std::abs(p0) > 1e100) {
      p0 *= 1e-100, pm *= 1e-100, acc *= 1e-200;
      ls += 100 * std::log(10.0);
    }
  }
  return acc * std::exp(2 * ls);
}

WeightedResult<Rational> cd_annihilation(const EnsembleSpec<Rational>& s) {
  return op_apply_to_weighted_poly(catalog_density_op(s), cd_density(s).P, ensemble_weight(s));
}

MomentTable<Rational> moments_bruteforce(const EnsembleSpec<Rational>& s, int kmax, const BruteForceLimits& lim) {
  if (s.beta.get_den() != 1 || s.beta <= 0 || s.beta.get_num().get_si() % 2 != 0)
    fail("UnsupportedBeta", "brute-force expansion needs an even integer beta");
  int n = integer_n(s, 8);
  int beta = static_cast<int>(s.beta.get_num().get_si());
  using Mono = std::vector<int>;
  std::map<Mono, Integer> V{{Mono(static_cast<size_t>(n), 0), Integer(1)}};
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int r = 0; r < beta; ++r) {
        std::map<Mono, Integer> next;
        for (const auto& [m, c] : V) {
          Mono a = m, b = m;
          ++a[static_cast<size_t>(i)];
          ++b[static_cast<size_t>(j)];
          next[a] += c;
          next[b] -= c;
        }
        V.clear();
        for (auto& [m, c] : next)
          if (c != 0) V.emplace(m, std::move(c));
        if (V.size() > lim.max_terms)
          fail("SizeLimit", "Vandermonde expansion exceeds " + std::to_string(lim.max_terms) + " terms");
      }
  auto mu = weight_moments(s, beta * (n - 1) + std::max(kmax, 0));
  MomentTable<Rational> t;
  t.family = s.family;
  t.beta = s.beta;
  t.provenance = "brute-force Vandermonde expansion";
  Rational Z = 0;
  for (const auto& [m, c] : V) {
    Rational p = c;
    for (int e : m) p *= mu[static_cast<size_t>(e)];
    Z += p;
  }
  for (int k = 0; k <= kmax; ++k) {
    Rational acc = 0;
    for (const auto& [m, c] : V)
      for (int i = 0; i < n; ++i) {
        Rational p = c;
        for (int v = 0; v < n; ++v) p *= mu[static_cast<size_t>(m[static_cast<size_t>(v)] + (v == i ? k : 0))];
        acc += p;
      }
    t.values[k] = acc / Z;
  }
  return t;
}

std::vector<double> moments_quadrature(const EnsembleSpec<Rational>& s, int kmax, double tol) {
  if (s.beta != 1) fail("UnsupportedBeta", "quadrature oracle is for beta = 1");
  if (s.N != 2) fail("InvalidArgument", "quadrature oracle is for N = 2");
  check_weight(s);
  using namespace boost::math::quadrature;
  const double qtol = 1e-14;
  auto w = [&](double x) { return weight_value(s, x); };
  // integral over x < y of (y - x) f(x, y) w(x) w(y), with a propagated error estimate
  // integral over y of g(y), with Boost's error estimate
  auto outer = [&](auto g) {
    double v = 0, err = 0;
    switch (s.family) {
      case Family::Gaussian: v = sinh_sinh<double>().integrate(g, qtol, &err); break;
      case Family::Laguerre:
        v = exp_sinh<double>().integrate(g, 0.0, std::numeric_limits<double>::infinity(), qtol, &err);
        break;
      case Family::Jacobi: v = tanh_sinh<double>().integrate(g, 0.0, 1.0, qtol, &err); break;
    }
    return std::pair{v, err};
  };
  // integral over x < y of (y - x) f(x, y) w(x) w(y); the inner error is integrated like the value
  auto integrate = [&](auto f) {
    auto inner = [&](double y) {
      double e = 0, res = 0;
      if (w(y) == 0) return std::pair{0.0, 0.0};
      if (s.family == Family::Gaussian) {
        res = exp_sinh<double>().integrate([&](double u) {
          double wv = w(y - u);
          return wv == 0 ? 0.0 : u * f(y - u, y) * wv;
        }, 0.0,
                                           std::numeric_limits<double>::infinity(), qtol, &e);
      } else if (y > 0) {
        res = tanh_sinh<double>().integrate([&](double x) { return (y - x) * f(x, y) * w(x); }, 0.0, y, qtol, &e);
      }
      double wy = w(y);
      return wy == 0 ? std::pair{0.0, 0.0} : std::pair{res * wy, e * wy};
    };
    auto [v, err] = outer([&](double y) { return inner(y).first; });
    auto [ie, ignored] = outer([&](double y) { return inner(y).second; });
    return std::pair{v, err + std::abs(ie)};
  };
  auto [Z, zerr] = integrate([](double, double) { return 1.0; });
  std::vector<double> m;
  for (int k = 0; k <= kmax; ++k) {
    auto [I, ierr] = integrate([k](double x, double y) { return std::pow(x, k) + std::pow(y, k); });
    double v = I / Z;
    double e = std::abs(v) * (ierr / std::max(std::abs(I), 1e-300) + zerr / Z);
    if (e > tol * std::max(1.0, std::abs(v)))
      fail("ToleranceNotMet", "quadrature error estimate " + std::to_string(e) + " for m_" + std::to_string(k));
    m.push_back(v);
  }
  return m;
}

std::vector<double> tridiagonal_eigenvalues(std::vector<double> d, std::vector<double> e) {
  const int n = static_cast<int>(d.size());
  if (n == 0) return d;
  if (static_cast<int>(e.size()) != n - 1) fail("InvalidArgument", "off-diagonal must have n - 1 entries");
  e.push_back(0.0);
  const double eps = std::numeric_limits<double>::epsilon();
  for (int l = 0; l < n; ++l) {
    int iter = 0, m;
    do {
      for (m = l; m < n - 1; ++m) {
        double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * dd) break;
      }
      if (m != l) {
        if (++iter > 60) fail("ToleranceNotMet", "QL iteration did not converge");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1, c = 1, p = 0;
        int i;
        for (i = m - 1; i >= l; --i) {
          double f = s * e[i], b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
        }
        if (r == 0.0 && i >= l) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
  std::sort(d.begin(), d.end());
  return d;
}

MCEstimate mc_moments(const EnsembleSpec<Rational>& s, int kmax, std::uint64_t samples, std::uint64_t seed, int workers) {
  if (s.family == Family::Jacobi) fail("UnsupportedFamily", "no sampling model for the Jacobi ensemble");
  if (s.beta <= 0) fail("UnsupportedBeta", "beta must be positive");
  int n = integer_n(s, 64);
  if (samples < 2 || samples > 10000000) fail("InvalidArgument", "samples must be in [2, 1e7]");
  if (workers < 1 || kmax < 0) fail("InvalidArgument", "workers >= 1 and kmax >= 0 required");
  check_weight(s);
  const double beta = to_double(s.beta);
  const double xscale = s.family == Family::Gaussian ? 1.0 / std::sqrt(2.0 * to_double(gaussian_c(s))) : 0.5;
  const double aDE = to_double(s.a) + 1.0 + beta * (n - 1) / 2.0;

  std::vector<std::vector<Running>> acc(static_cast<size_t>(workers), std::vector<Running>(static_cast<size_t>(kmax) + 1));
  auto work = [&](int w) {
    std::seed_seq sq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), static_cast<std::uint32_t>(w)};
    std::mt19937_64 rng(sq);
    std::normal_distribution<double> normal(0.0, 1.0);
    auto chi = [&](double dof) { return std::sqrt(std::chi_squared_distribution<double>(dof)(rng)); };
    std::uint64_t lo = samples * static_cast<std::uint64_t>(w) / static_cast<std::uint64_t>(workers);
    std::uint64_t hi = samples * static_cast<std::uint64_t>(w + 1) / static_cast<std::uint64_t>(workers);
    std::vector<double> diag(static_cast<size_t>(n)), off(static_cast<size_t>(n - 1));
    auto& mine = acc[static_cast<size_t>(w)];
    for (std::uint64_t t = lo; t < hi; ++t) {
      if (s.family == Family::Gaussian) {
        for (int i = 0; i < n; ++i) diag[static_cast<size_t>(i)] = normal(rng);
        for (int i = 0; i + 1 < n; ++i) off[static_cast<size_t>(i)] = chi(beta * (n - 1 - i)) / std::sqrt(2.0);
      } else {
        std::vector<double> dd(static_cast<size_t>(n)), ss(static_cast<size_t>(n - 1));
        for (int i = 0; i < n; ++i) dd[static_cast<size_t>(i)] = chi(2.0 * aDE - beta * i);
        for (int i = 0; i + 1 < n; ++i) ss[static_cast<size_t>(i)] = chi(beta * (n - 1 - i));
        for (int i = 0; i < n; ++i) {
          double v = dd[static_cast<size_t>(i)] * dd[static_cast<size_t>(i)];
          if (i > 0) v += ss[static_cast<size_t>(i - 1)] * ss[static_cast<size_t>(i - 1)];
          diag[static_cast<size_t>(i)] = v;
        }
        for (int i = 0; i + 1 < n; ++i) off[static_cast<size_t>(i)] = dd[static_cast<size_t>(i)] * ss[static_cast<size_t>(i)];
      }
      auto ev = tridiagonal_eigenvalues(diag, off);
      std::vector<double> ps(static_cast<size_t>(kmax) + 1, 0.0);
      for (double lam : ev) {
        double x = lam * xscale, p = 1;
        for (int k = 0; k <= kmax; ++k) {
          ps[static_cast<size_t>(k)] += p;
          p *= x;
        }
      }
      for (int k = 0; k <= kmax; ++k) mine[static_cast<size_t>(k)].add(ps[static_cast<size_t>(k)]);
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }
  MCEstimate est;
  est.samples = samples;
  est.seed = seed;
  est.workers = workers;
  for (int k = 0; k <= kmax; ++k) {
    Running tot;
    for (int w = 0; w < workers; ++w) tot.merge(acc[static_cast<size_t>(w)][static_cast<size_t>(k)]);
    est.mean[k] = tot.mean;
    est.stderr_[k] = std::sqrt(tot.m2 / (tot.n - 1) / tot.n);
  }
  return est;
}

OdeResidual ode_residual(const DiffOp<Rational>& D, const DensityEvaluator& rho, const std::vector<double>& grid) {
  int n = D.order();
  double mx = 0, sum = 0, lead = 0;
  for (double x : grid) {
    auto d = rho(x, n);
    double r = 0;
    for (int i = 0; i <= n; ++i) r += eval_d(D.coeff(i), x) * d[static_cast<size_t>(i)];
    mx = std::max(mx, std::abs(r));
    sum += std::abs(r);
    lead = std::max(lead, std::abs(eval_d(D.coeff(n), x) * d[static_cast<size_t>(n)]));
  }
  OdeResidual out;
  double scale = lead > 0 ? lead : 1.0;
  out.max = mx / scale;
  out.mean = grid.empty() ? 0.0 : sum / static_cast<double>(grid.size()) / scale;
  return out;
}

}  // namespace specden
