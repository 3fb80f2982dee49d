#include "specden/resolvent.hpp"

#include <algorithm>

namespace specden {

namespace {

QSqrt qpow(const QSqrt& q, int n) {
  QSqrt out(1);
  for (int i = 0; i < std::abs(n); ++i) out *= q;
  return n < 0 ? QSqrt(1) / out : out;
}

EnsembleSpec<QN> scaled_spec(Family f, const Rational& beta, const Rational& a1, const Rational& a2) {
  EnsembleSpec<QN> s;
  s.family = f;
  s.beta = beta;
  s.N = QN::variable();
  s.a = QN(a1) * s.N;
  s.b = QN(a2) * s.N;
  return s;
}

SeriesS head_series(const PolyS& p, int J) { return SeriesS(p, {}, J); }

}  // namespace

SeriesQ resolvent_series(const EnsembleSpec<Rational>& s, int J) {
  if (J < 0) fail("InvalidArgument", "negative truncation order");
  if (J == 0) return SeriesQ(PolyQ(), {}, 0);
  auto t = moments_exact(s, J - 1);
  std::vector<Rational> m;
  for (int k = 0; k < J; ++k) m.push_back(t.at(k));
  return series_from_moments(m, J);
}

ResidualReport check_resolvent_ode(const EnsembleSpec<Rational>& s, int J) {
  auto D = catalog_density_op(s);
  auto W = resolvent_series(s, J);
  auto out = (Rational(1) / s.N) * D(W);
  ResidualReport rep;
  rep.expected = catalog_resolvent_rhs(s);
  rep.polynomial_part = out.head();
  for (int j = 1; j <= out.order(); ++j) {
    ++rep.checked_negative;
    if (!is_zero(out.get(-j))) rep.nonzero_negative.push_back(-j);
  }
  return rep;
}

ExpansionScaling expansion_scaling(Family f, const Rational& beta) {
  ExpansionScaling sc;
  sc.kappa = beta / 2;
  QSqrt rk = QSqrt::sqrt(sc.kappa);
  switch (f) {
    case Family::Gaussian:
      sc.nu = 2;
      sc.mu = 1;
      sc.sigma = rk;
      sc.c = QSqrt(2);
      sc.eta = QSqrt(2) * rk;
      sc.parameter = "2N sqrt(kappa)";
      break;
    case Family::Laguerre:
      sc.nu = 1;
      sc.mu = 1;
      sc.sigma = QSqrt(sc.kappa);
      sc.c = QSqrt(1);
      sc.eta = rk;
      sc.parameter = "N sqrt(kappa)";
      break;
    case Family::Jacobi:
      sc.nu = 1;
      sc.mu = 0;
      sc.sigma = QSqrt(1);
      sc.c = QSqrt(1);
      sc.eta = QSqrt(sc.kappa);
      sc.parameter = "N kappa";
      break;
  }
  return sc;
}

LevelSystem level_system(Family f, const Rational& beta, const Rational& alpha1, const Rational& alpha2) {
  auto spec = scaled_spec(f, beta, alpha1, alpha2);
  auto D = catalog_density_op(spec);
  auto R = catalog_resolvent_rhs(spec);
  PolyQ L(1);
  for (const auto& p : D.coeffs())
    for (int j = 0; j <= p.degree(); ++j) L = lcm(L, p[j].den());
  for (int j = 0; j <= R.degree(); ++j) L = lcm(L, R[j].den());
  QN Lq(L);
  auto as_poly = [&](const QN& v) {
    QN w = v * Lq;
    if (!w.is_polynomial()) fail("StructureMismatch", "operator coefficient is not polynomial in N");
    return w.num();
  };

  LevelSystem sys;
  sys.family = f;
  sys.beta = beta;
  sys.alpha1 = alpha1;
  sys.alpha2 = alpha2;
  sys.scaling = expansion_scaling(f, beta);
  const auto& sc = sys.scaling;
  std::map<int, std::vector<PolyS>> ops;
  for (int i = 0; i <= D.order(); ++i) {
    const auto& p = D.coeffs()[static_cast<size_t>(i)];
    for (int j = 0; j <= p.degree(); ++j) {
      if (is_zero(p[j])) continue;
      PolyQ c = as_poly(p[j]);
      QSqrt sg = qpow(sc.sigma, j - i);
      for (int r = 0; r <= c.degree(); ++r) {
        if (is_zero(c[r])) continue;
        int q = sc.nu * r + sc.mu * (j - i);
        auto& v = ops[q];
        if (static_cast<int>(v.size()) <= i) v.resize(static_cast<size_t>(i) + 1);
        v[static_cast<size_t>(i)] += PolyS::monomial(QSqrt(c[r]) * sg, j);
      }
    }
  }
  for (auto& [q, v] : ops) {
    OpS op(std::move(v));
    if (!op.is_zero_op()) sys.ops.emplace(q, std::move(op));
  }
  if (sys.ops.empty()) fail("InvalidArgument", "zero operator");
  // D W = N R(x)  ->  D~ W~ = s N R(s X)
  QN Nq = QN::variable();
  for (int e = 0; e <= R.degree(); ++e) {
    if (is_zero(R[e])) continue;
    PolyQ c = as_poly(R[e] * Nq);
    QSqrt sg = qpow(sc.sigma, e + 1);
    for (int r = 0; r <= c.degree(); ++r) {
      if (is_zero(c[r])) continue;
      int p = sc.nu * r + sc.mu * (e + 1);
      sys.rhs[p] += PolyS::monomial(QSqrt(c[r]) * sg, e);
    }
  }
  return sys;
}

SeriesS solve_level(const OpS& A, const SeriesS& F, int J, const std::optional<QSqrt>& c0) {
  int E = A.degree_shift();
  for (int e = E; e <= F.top(); ++e)
    if (!is_zero(F.get(e))) fail("Inconsistent", "level right-hand side has a power x^" + std::to_string(e) + " beyond the operator range");
  std::vector<QSqrt> c(static_cast<size_t>(J));
  const auto& q = A.coeffs();
  for (int jp = 0; jp < J; ++jp) {
    QSqrt acc = F.coeff(E - 1 - jp);
    QSqrt lam(0);
    for (int j = 0; j <= jp; ++j) {
      QSqrt mult(0);
      for (int i = 0; i <= A.order(); ++i) {
        QSqrt v = q[static_cast<size_t>(i)][E + i + j - jp];
        if (is_zero(v)) continue;
        mult += v * QSqrt(falling(Rational(-j - 1), i));
      }
      if (j == jp)
        lam = mult;
      else if (!is_zero(mult))
        acc -= mult * c[static_cast<size_t>(j)];
    }
    if (is_zero(lam)) {
      if (jp > 0 || !c0) fail("SingularSystem", "level operator annihilates x^" + std::to_string(-jp - 1));
      if (!is_zero(acc)) fail("Inconsistent", "level equation fails at x^" + std::to_string(E - 1));
      c[0] = *c0;
      continue;
    }
    c[static_cast<size_t>(jp)] = acc / lam;
    if (jp == 0 && c0 && c[0] != *c0) fail("Inconsistent", "level solution violates the 1/x normalization");
  }
  return SeriesS(PolyS(), std::move(c), J);
}

ExpansionStack expansion_coefficients(Family f, const Rational& beta, const Rational& alpha1, const Rational& alpha2,
                                      int lmax, int J) {
  if (lmax < 0 || J < 0) fail("InvalidArgument", "negative level or truncation");
  auto sys = level_system(f, beta, alpha1, alpha2);
  const auto& sc = sys.scaling;
  const int Q = sys.top(), nu = sc.nu;
  const OpS& A = sys.leading();
  const int E = A.degree_shift();
  auto rhs_at = [&](int p, int order) {
    auto it = sys.rhs.find(p);
    return head_series(it == sys.rhs.end() ? PolyS() : it->second, order);
  };
  // sum over l of c eta^{-l} A_{p - nu + nu l} W^l, restricted to computed levels
  auto lhs_at = [&](int p, const std::vector<SeriesS>& W, int lhi, int order) {
    SeriesS acc(PolyS(), {}, order);
    for (int l = 0; l <= lhi; ++l) {
      auto it = sys.ops.find(p - nu + nu * l);
      if (it == sys.ops.end()) continue;
      acc = acc + (sc.c * qpow(sc.eta, -l)) * it->second(W[static_cast<size_t>(l)]);
    }
    return acc;
  };

  int extra = 0;
  for (;;) {
    int Jint = J + extra;
    std::vector<SeriesS> W;
    for (int n = 0; n <= lmax; ++n) {
      int P = Q + nu - nu * n;
      SeriesS F = rhs_at(P, Jint + 8) - lhs_at(P, W, n - 1, Jint + 8);
      F = (qpow(sc.eta, n) / sc.c) * F;
      int avail = std::min(Jint, F.order() + E);
      QSqrt norm = n == 0 ? QSqrt(1) / sc.c : QSqrt(0);
      W.push_back(solve_level(A, F, std::max(avail, 0), norm));
    }
    int have = J;
    for (const auto& w : W) have = std::min(have, w.order());
    if (have < J) {
      extra += J - have;
      continue;
    }
    ExpansionStack st;
    st.family = f;
    st.beta = beta;
    st.alpha1 = alpha1;
    st.alpha2 = alpha2;
    st.scaling = sc;
    st.J = J;
    for (const auto& w : W) {
      std::vector<QSqrt> t(w.tail().begin(), w.tail().begin() + J);
      st.levels.emplace_back(PolyS(), std::move(t), J);
    }
    // equations at t-powers between level equations must hold identically
    int ptop = std::max(Q + nu, sys.rhs.empty() ? Q + nu : sys.rhs.rbegin()->first);
    int plow = Q + nu - nu * lmax;
    for (int p = ptop; p > plow; --p) {
      if (p <= Q + nu && (Q + nu - p) % nu == 0) continue;
      int lhi = std::min(lmax, (Q + nu - p) / nu);
      auto r = lhs_at(p, W, lhi, Jint + 8) - rhs_at(p, Jint + 8);
      for (int e = r.top(); e >= -r.order(); --e) {
        if (e < E - J) break;
        if (!is_zero(r.get(e))) fail("Inconsistent", "scaled resolvent equation fails at N-power " + std::to_string(p));
        ++st.consistency_checked;
      }
    }
    return st;
  }
}

std::vector<SeriesS> reassemble_levels(const CoeffTable& t, int lmax, int J) {
  Rational kappa = t.beta / 2;
  QSqrt rk = QSqrt::sqrt(kappa);
  std::vector<SeriesS> out;
  for (int l = 0; l <= lmax; ++l) {
    std::vector<QSqrt> c(static_cast<size_t>(J));
    for (int j = 0; j < J; ++j) {
      switch (t.shape) {
        case Shape::Gaussian:
          if (j % 2 == 0)
            c[static_cast<size_t>(j)] = QSqrt(t.at(j / 2, l) * pow(kappa, -j / 2) / 2) * qpow(QSqrt(2) * rk, l);
          break;
        case Shape::Laguerre:
          c[static_cast<size_t>(j)] = QSqrt(t.at(j, l) * pow(kappa, -j)) * qpow(rk, l);
          break;
        case Shape::Jacobi:
          c[static_cast<size_t>(j)] = QSqrt(t.at(j, l) * pow(kappa, l));
          break;
      }
    }
    out.emplace_back(PolyS(), std::move(c), J);
  }
  return out;
}

UniversalityReport w0_universality_check(Family f, const std::vector<Rational>& betas, int J, const Rational& alpha1,
                                         const Rational& alpha2) {
  UniversalityReport rep;
  rep.betas = betas;
  rep.J = J;
  std::vector<SeriesS> w0;
  for (const auto& beta : betas) {
    Rational k = beta / 2;
    w0.push_back(expansion_coefficients(f, beta, alpha1 * k, alpha2 * k, 0, J).levels[0]);
  }
  for (int j = 0; j < J && rep.first_difference < 0; ++j)
    for (size_t b = 1; b < w0.size(); ++b)
      if (w0[b].get(-j - 1) != w0[0].get(-j - 1)) {
        rep.first_difference = j;
        break;
      }
  return rep;
}

namespace {

// Series algebra for the printed level equations.
struct Lv {
  const std::vector<SeriesS>& W;
  int J;

  SeriesS at(int l, int n = 0) const {
    if (l < 0) return SeriesS(PolyS(), {}, J + 16);
    SeriesS s = W[static_cast<size_t>(l)];
    for (int i = 0; i < n; ++i) s = s.derivative();
    return s;
  }
  SeriesS c(const QSqrt& v) const { return SeriesS(PolyS(v), {}, J + 16); }
};

SeriesS operator*(const PolyS& p, const SeriesS& s) { return s.times_poly(p); }
PolyS cst(const QSqrt& v) { return PolyS(v); }

struct Eq {
  std::string id;
  int level;
  SeriesS residual;
};

void gaussian_eqs(const Lv& L, const Rational& beta, int lmax, std::vector<Eq>& out) {
  auto x = PolyS::x();
  PolyS y2 = x * x - cst(2), y4 = y2 * y2;
  QSqrt rk = QSqrt::sqrt(beta / 2), h = rk - QSqrt(1) / rk;
  auto lin = [&](int l) { return y2 * L.at(l, 1) - x * L.at(l); };
  out.push_back({beta == 1 || beta == 4 ? "rr31" : "rr34", 0, lin(0) + L.c(1)});
  if (beta == 1 || beta == 4) {
    if (lmax >= 1) out.push_back({"rr32", 1, y2 * lin(1) - (QSqrt(4) * h) * (y2 * L.at(0, 1)) + h * (cst(2) * x * L.at(0) + L.c(5))});
    for (int l = 2; l <= lmax; ++l) {
      SeriesS r = y2 * lin(l) - (QSqrt(4) * h) * (y2 * L.at(l - 1, 1)) + (QSqrt(2) * h) * (x * L.at(l - 1)) -
                  ((y2 * QSqrt(frac(5, 2))) * L.at(l - 2, 3) - (x * QSqrt(3)) * L.at(l - 2, 2) + L.at(l - 2, 1)) +
                  (QSqrt(5) * h) * L.at(l - 3, 3) - L.at(l - 4, 5);
      out.push_back({"rr33", l, r});
    }
    return;
  }
  auto big = [&](int l) {
    return QSqrt(frac(1, 12)) * ((y4 * QSqrt(49)) * L.at(l, 3) - (x * y2 * QSqrt(78)) * L.at(l, 2) +
                                 (cst(216) - x * x * QSqrt(57)) * L.at(l, 1) + (x * QSqrt(25)) * L.at(l));
  };
  auto head = [&](int l) {
    return y4 * lin(l) - (QSqrt(6) * h) * (y4 * L.at(l - 1, 1)) + (QSqrt(4) * h) * (x * y2 * L.at(l - 1));
  };
  if (lmax >= 1) out.push_back({"rr35", 1, y2 * lin(1) - (QSqrt(6) * h) * (y2 * L.at(0, 1)) + h * (cst(4) * x * L.at(0) - L.c(7))});
  if (lmax >= 2) out.push_back({"rr36", 2, head(2) + L.c(frac(43, 3)) - big(0)});
  for (int l = 3; l <= lmax; ++l) {
    SeriesS r = head(l) - big(l - 2) -
                (h * QSqrt(frac(1, 3))) * ((y2 * QSqrt(49)) * L.at(l - 3, 3) + (x * QSqrt(39)) * L.at(l - 3, 2) - QSqrt(10) * L.at(l - 3, 1)) -
                (QSqrt(7) * h) * L.at(l - 5, 5) -
                QSqrt(frac(1, 18)) * ((y2 * QSqrt(63)) * L.at(l - 4, 5) + (x * QSqrt(63)) * L.at(l - 4, 4) + QSqrt(230) * L.at(l - 4, 3)) -
                (QSqrt(frac(3, 4)) * h) * L.at(l - 6, 7);
    out.push_back({"rr37", l, r});
  }
}

void laguerre_eqs(const Lv& L, const Rational& beta, const Rational& alpha1, int lmax, std::vector<Eq>& out) {
  auto x = PolyS::x();
  if (beta == 2) {
    QSqrt a(alpha1);
    PolyS P = (cst(a) - x) * (cst(a) - x) - x * QSqrt(4);
    PolyS Qc = x * (a + QSqrt(2)) - cst(a * a);
    out.push_back({"rr38", 0, (-P * x) * L.at(0, 1) + Qc * L.at(0) - (x + cst(a)) * L.c(1)});
    for (int l = 1; l <= lmax; ++l) {
      SeriesS r = (P * x) * L.at(l, 1) - Qc * L.at(l) -
                  ((x * x * x) * L.at(l - 2, 3) + (x * x * QSqrt(4)) * L.at(l - 2, 2) + (x * QSqrt(2)) * L.at(l - 2, 1));
      out.push_back({"rr39", l, r});
    }
    return;
  }
  QSqrt a(beta == 4 ? alpha1 / 4 : alpha1);
  QSqrt rk = QSqrt::sqrt(beta / 2), h = rk - QSqrt(1) / rk;
  PolyS y2 = (cst(QSqrt(2) * a) - x) * (cst(QSqrt(2) * a) - x) - x * QSqrt(4), y4 = y2 * y2;
  PolyS G = x * (a + QSqrt(1)) - cst(QSqrt(2) * a * a);
  PolyS H = x * x - x * (QSqrt(6) * (a + QSqrt(1))) + cst(QSqrt(8) * a * a);
  auto head = [&](int l) {
    return (x * y4) * L.at(l, 1) - (y2 * G * QSqrt(2)) * L.at(l) - (x * y2 * (QSqrt(8) * h * a)) * L.at(l - 1, 1) -
           (H * (QSqrt(4) * h * a)) * L.at(l - 1);
  };
  auto two = [&](int l) {
    return (x * x * x * y2 * QSqrt(frac(5, 2))) * L.at(l, 3) +
           (x * x * (x * x * QSqrt(8) - x * (QSqrt(38) * (a + QSqrt(1))) + cst(QSqrt(44) * a * a))) * L.at(l, 2) +
           (x * (x * x - x * (QSqrt(6) * (a + QSqrt(1))) + cst(QSqrt(10) * a * a)) * QSqrt(2)) * L.at(l, 1) +
           (x * (QSqrt(4) * (a + QSqrt(1))) - cst(QSqrt(8) * a * a)) * L.at(l);
  };
  out.push_back({"rr40", 0, (-x * y2) * L.at(0, 1) + (G * QSqrt(2)) * L.at(0) - (x + cst(QSqrt(2) * a)) * L.c(1)});
  if (lmax >= 1)
    out.push_back({"rr41", 1, head(1) - (x * (x - cst(1)) + x * (QSqrt(4) * a) + cst(QSqrt(8) * a * a)) * L.c(QSqrt(2) * h)});
  if (lmax >= 2) out.push_back({"rr42", 2, head(2) - two(0) + (x + cst(QSqrt(2) * a)) * L.c(2)});
  for (int l = 3; l <= lmax; ++l) {
    SeriesS r = head(l) - two(l - 2) +
                (x * (QSqrt(2) * h * a)) * ((x * x * QSqrt(5)) * L.at(l - 3, 3) + (x * QSqrt(22)) * L.at(l - 3, 2) + QSqrt(14) * L.at(l - 3, 1)) +
                (poly_pow(x, 5) * L.at(l - 4, 5) + (poly_pow(x, 4) * QSqrt(10)) * L.at(l - 4, 4) + (poly_pow(x, 3) * QSqrt(22)) * L.at(l - 4, 3) +
                 (x * x * QSqrt(4)) * L.at(l - 4, 2) - (x * QSqrt(4)) * L.at(l - 4, 1));
    out.push_back({"rr43", l, r});
  }
}

void jacobi_eqs(const Lv& L, const Rational& alpha1, const Rational& alpha2, int lmax, std::vector<Eq>& out) {
  auto x = PolyS::x();
  QSqrt a(alpha1), b(alpha2);
  PolyS xm = x - cst(1), omx = cst(1) - x, tx = cst(1) - x * QSqrt(2);
  QSqrt s2 = a + b + QSqrt(2);
  PolyS P = (x * x * (s2 * s2) - x * (QSqrt(2) * (a + QSqrt(2)) * (a + b)) + cst(a * a)) * x * xm;
  PolyS Qc = poly_pow(xm, 3) * (a * a) + x * omx * tx * (a * (b + QSqrt(2))) + poly_pow(x, 3) * ((b + QSqrt(2)) * (b + QSqrt(2))) -
             (x * x * QSqrt(3) + x) * (QSqrt(2) * (b + QSqrt(1)));
  out.push_back({"rr44", 0, P * L.at(0, 1) + Qc * L.at(0) - (omx * a + x * b) * L.c(a + b + QSqrt(1))});
  for (int l = 1; l <= lmax; ++l) {
    SeriesS r = P * L.at(l, 1) + Qc * L.at(l) -
                (poly_pow(x * xm, 3) * L.at(l - 2, 3) - (poly_pow(x * xm, 2) * tx * QSqrt(4)) * L.at(l - 2, 2) +
                 (x * xm * (x * xm * QSqrt(7) + cst(1)) * QSqrt(2)) * L.at(l - 2, 1) - (x * xm * tx * QSqrt(2)) * L.at(l - 2));
    out.push_back({"rr45", l, r});
  }
}

}  // namespace

std::vector<PrintedLevelCheck> verify_printed_levels(const ExpansionStack& s) {
  Lv L{s.levels, s.J};
  int lmax = static_cast<int>(s.levels.size()) - 1;
  std::vector<Eq> eqs;
  if (s.family == Family::Gaussian && s.beta != 2)
    gaussian_eqs(L, s.beta, lmax, eqs);
  else if (s.family == Family::Laguerre)
    laguerre_eqs(L, s.beta, s.alpha1, lmax, eqs);
  else if (s.family == Family::Jacobi && s.beta == 2)
    jacobi_eqs(L, s.alpha1, s.alpha2, lmax, eqs);
  std::vector<PrintedLevelCheck> out;
  for (const auto& e : eqs) {
    PrintedLevelCheck c;
    c.equation = e.id;
    c.level = e.level;
    for (int p = e.residual.top(); p >= -e.residual.order(); --p) {
      ++c.checked;
      if (!is_zero(e.residual.get(p))) c.nonzero.push_back(p);
    }
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace specden
