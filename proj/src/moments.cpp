#include "specden/moments.hpp"

namespace specden {

namespace {

EnsembleSpec<QN> symbolic_spec(Family f, const Rational& beta, const Scaled& a, const Scaled& b,
                               const std::optional<Rational>& g) {
  EnsembleSpec<QN> s;
  s.family = f;
  s.beta = beta;
  s.N = QN::variable();
  s.a = QN(a.alpha) * s.N + QN(a.delta);
  s.b = QN(b.alpha) * s.N + QN(b.delta);
  if (g) s.g = QN(*g);
  return s;
}

Rational ff(const Rational& x, int n) { return falling(x, n); }

}  // namespace

MomentTable<QN> moments_symbolic(Family f, const Rational& beta, const Scaled& a, const Scaled& b, int kmax,
                                 const std::optional<Rational>& g) {
  auto t = moments_run(symbolic_spec(f, beta, a, b, g), kmax);
  t.provenance += ", symbolic in N";
  return t;
}

MomentTable<Rational> moments_exact(const EnsembleSpec<Rational>& s, int kmax) {
  try {
    return moments_run(s, kmax);
  } catch (const Error& e) {
    if (e.code() != "SingularSystem") throw;
  }
  auto sym = moments_symbolic(s.family, s.beta, Scaled{0, s.a}, Scaled{0, s.b}, kmax, s.g);
  MomentTable<Rational> t;
  t.family = s.family;
  t.beta = s.beta;
  t.provenance = sym.provenance + ", evaluated at N = " + to_string(s.N);
  for (const auto& [k, v] : sym.values) t.values[k] = v(s.N);
  return t;
}

MomentTable<Rational> moments_negative(const EnsembleSpec<Rational>& s, int kmin) {
  if (s.family == Family::Gaussian) fail("InvalidArgument", "negative moments of the Gaussian ensembles diverge");
  if (kmin >= 0) fail("InvalidArgument", "kmin must be negative");
  if (!(Rational(-kmin) < s.a + 1))
    fail("DivergentMoment", "m_" + std::to_string(kmin) + " diverges unless " + std::to_string(-kmin) + " < a + 1");
  auto D = catalog_density_op(s);
  auto rec = moment_recurrence_from_ode(D);
  int width = rec.span() * rec.step;
  auto t = moments_exact(s, width);
  t.provenance += ", downward recurrence";
  for (int target = -1; target >= kmin; --target) {
    int k = target + width;
    Rational piv = rec.coeff(rec.span(), k);
    if (is_zero(piv)) fail("SingularSystem", "zero trailing coefficient at k = " + std::to_string(k));
    Rational acc = 0;
    for (int l = 0; l < rec.span(); ++l) acc += rec.coeff(l, k) * t.at(k - l * rec.step);
    t.values[target] = -acc / piv;
  }
  return t;
}

std::pair<int, std::vector<Rational>> large_n_expansion(const QN& r, int terms) {
  std::vector<Rational> out(static_cast<size_t>(std::max(terms, 0)), Rational(0));
  if (is_zero(r)) return {0, out};
  const auto& n = r.num();
  const auto& d = r.den();
  int dn = n.degree(), dd = d.degree();
  // reversed polynomials in u = 1/N
  auto rn = [&](int j) { return j <= dn ? n[dn - j] : Rational(0); };
  auto rd = [&](int j) { return j <= dd ? d[dd - j] : Rational(0); };
  Rational d0 = rd(0);
  for (int j = 0; j < terms; ++j) {
    Rational acc = rn(j);
    for (int i = 1; i <= j; ++i) acc -= rd(i) * out[static_cast<size_t>(j - i)];
    out[static_cast<size_t>(j)] = acc / d0;
  }
  return {dn - dd, out};
}

CoeffTable coeff_table(Family f, const Rational& beta, const Scaled& a, const Scaled& b, int kmax, int lmax) {
  CoeffTable t;
  t.shape = f == Family::Gaussian ? Shape::Gaussian : (f == Family::Laguerre ? Shape::Laguerre : Shape::Jacobi);
  t.beta = beta;
  t.a = a;
  t.b = b;
  t.kmax = kmax;
  t.lmax = lmax;
  int mk = f == Family::Gaussian ? 2 * kmax : kmax;
  auto m = moments_symbolic(f, beta, a, b, mk);
  for (int k = 0; k <= kmax; ++k) {
    const QN& v = m.at(f == Family::Gaussian ? 2 * k : k);
    if (f != Family::Jacobi) {
      if (!v.is_polynomial()) fail("StructureMismatch", "moment m_" + std::to_string(k) + " is not polynomial in N");
      const auto& p = v.num();
      for (int e = 0; e <= p.degree(); ++e) {
        if (is_zero(p[e])) continue;
        int l = k + 1 - e;
        if (l < 0 || (k > 0 && l > k)) fail("StructureMismatch", "moment m_" + std::to_string(k) + " has an unexpected power of N");
        if (l <= lmax) t.entries[{k, l}] = p[e];
      }
    } else {
      auto [top, c] = large_n_expansion(v, lmax + 2);
      if (top > 1) fail("StructureMismatch", "Jacobi moment grows faster than N");
      for (int l = 0; l <= lmax; ++l) {
        int j = l - 1 + top;  // coefficient of N^{1-l} is c_{top-(1-l)}
        if (j < 0) continue;
        if (!is_zero(c[static_cast<size_t>(j)])) t.entries[{k, l}] = c[static_cast<size_t>(j)];
      }
    }
  }
  return t;
}

namespace {

// M_{k,l} with the zero conventions of the printed recursions.
Rational Mget(const CoeffTable& t, int k, int l, bool upper_zero) {
  if (l < 0 || k < 0) return 0;
  if (upper_zero && l > k) return 0;
  return t.at(k, l);
}

using Side = std::pair<Rational, Rational>;

Side rr14_impl(const CoeffTable& t, int k0, int l, int base) {
  Rational k(k0), K = t.beta / 2 - 1;
  Rational f[7][7];
  f[1][0] = 3 * (6 * k - 1);
  f[1][1] = 2 * (6 * k - 1);
  f[2][0] = 36 * (4 - 3 * k);
  f[2][1] = 48 * (4 - 3 * k);
  f[2][2] = 49 * k * k * k - 108 * k * k + 23 * k + 40;
  f[3][0] = 108 * (2 * k - 5);
  f[3][1] = 216 * (2 * k - 5);
  f[3][2] = 3 * (5 - 2 * k) * (98 * k * k - 304 * k + 189);
  f[3][3] = 2 * (5 - 2 * k) * (98 * k * k - 304 * k + 221);
  f[4][2] = Rational(441, 2) * ff(2 * k - 5, 3);
  f[4][3] = 294 * ff(2 * k - 5, 3);
  f[4][4] = Rational(1, 2) * ff(2 * k - 5, 3) * (126 * k * (3 - k) - 137);
  f[5][4] = Rational(189, 2) * ff(2 * k - 5, 5);
  f[5][5] = 63 * ff(2 * k - 5, 5);
  f[6][6] = Rational(81, 8) * ff(2 * k - 5, 7);
  Rational rhs = 0;
  for (int i = 1; i <= 6; ++i)
    for (int j = 0; j <= i; ++j)
      if (!is_zero(f[i][j])) rhs += pow(K, 2 * i - j) / pow(Rational(base), i) * f[i][j] * Mget(t, k0 - i, l - j, true);
  return {(k + 1) * Mget(t, k0, l, true), rhs};
}

Side rr14(const CoeffTable& t, int k0, int l) { return rr14_impl(t, k0, l, 2); }
Side rr14c(const CoeffTable& t, int k0, int l) { return rr14_impl(t, k0, l, 4); }

Side rr16(const CoeffTable& t, int k0, int) {
  Rational k(k0), K = t.beta / 2 - 1;
  Rational rhs = 12 * (6 * k - 1) * pow(K, 2) * Mget(t, k0 - 1, 0, true) - 36 * (3 * k - 4) * pow(K, 4) * Mget(t, k0 - 2, 0, true) +
                 27 * (2 * k - 5) * pow(K, 6) * Mget(t, k0 - 3, 0, true);
  return {16 * (k + 1) * Mget(t, k0, 0, true), rhs};
}

Side rr17_impl(const CoeffTable& t, int k0, int l, bool cross) {
  Rational k(k0);
  const Rational &a1 = t.a.alpha, &d1 = t.a.delta;
  auto M = [&](int kk, int ll) { return Mget(t, kk, ll, true); };
  Rational rhs = (2 * k - 1) * ((2 + a1) * M(k0 - 1, l) + d1 * M(k0 - 1, l - 1)) - a1 * a1 * (k - 2) * M(k0 - 2, l) +
                 (k - 2) * ((k - 1) * (k - 1) - d1 * d1) * M(k0 - 2, l - 2);
  if (cross) rhs -= 2 * a1 * d1 * (k - 2) * M(k0 - 2, l - 1);
  return {(k + 1) * M(k0, l), rhs};
}

Side rr17(const CoeffTable& t, int k0, int l) { return rr17_impl(t, k0, l, false); }
Side rr17c(const CoeffTable& t, int k0, int l) { return rr17_impl(t, k0, l, true); }

Side rr18_impl(const CoeffTable& t, int k0, int l, bool corrected) {
  Rational k(k0), K = t.beta / 2 - 1;
  const Rational& a1 = t.a.alpha;
  // printed: (a1 + 4K) K; the expansion of the moment recurrence gives a1 + 4K^2
  Rational AK = corrected ? Rational(a1 + 4 * K * K) : Rational((a1 + 4 * K) * K);
  Rational g[5][5];
  g[1][0] = (4 * k - 1) * AK;
  g[2][0] = (3 - 2 * k) * (a1 * a1 + 2 * AK * AK);
  g[2][1] = 2 * (2 * k - 3) * a1;
  g[2][2] = (k - 1) * (5 * k * k - 11 * k + 4);
  g[3][0] = (4 * k - 11) * AK * a1 * a1;
  g[3][1] = 2 * (11 - 4 * k) * AK * a1;
  g[3][2] = 2 * (3 - k) * (5 * k * k - 19 * k + 16) * AK;
  g[4][0] = (4 - k) * pow(a1, 4);
  g[4][1] = 4 * (k - 4) * pow(a1, 3);
  g[4][2] = (k - 4) * (5 * k * k - 32 * k + 47) * a1 * a1;
  g[4][3] = 2 * (4 - k) * (k - 3) * (5 * k - 17) * a1;
  g[4][4] = 4 * (1 - k) * pow((k - 4) * (k - 3), 2);
  Rational rhs = 0;
  for (int i = 1; i <= 4; ++i)
    for (int j = 0; j <= i; ++j)
      if (!is_zero(g[i][j])) rhs += pow(K, j) * g[i][j] * Mget(t, k0 - i, l - j, true);
  return {(k + 1) * Mget(t, k0, l, true), rhs};
}

Side rr18(const CoeffTable& t, int k0, int l) { return rr18_impl(t, k0, l, false); }
Side rr18c(const CoeffTable& t, int k0, int l) { return rr18_impl(t, k0, l, true); }

Side rr20(const CoeffTable& t, int k0, int l) {
  Rational k(k0);
  const Rational &a1 = t.a.alpha, &a2 = t.b.alpha;
  auto M = [&](int kk, int ll) { return Mget(t, kk, ll, false); };
  Rational h[4][2];
  h[1][0] = 2 * (4 * k - 3) * (a1 + a2 + 1) + (3 * a1 * (k - 1) + a2 * k) * (a1 + a2);
  h[1][1] = (1 - k) * (3 * k * k - 8 * k + 6);
  h[2][0] = 3 * a1 * a1 * (2 - k) + (3 - 2 * k) * ((a1 + 2) * (a2 + 2) - 2);
  h[2][1] = (k - 2) * (3 * k * k - 10 * k + 9);
  h[3][0] = a1 * a1 * (k - 3);
  h[3][1] = (3 - k) * (k - 2) * (k - 2);
  Rational rhs = k * (k - 1) * (k - 1) * M(k0, l - 2);
  for (int i = 1; i <= 3; ++i) rhs += h[i][0] * M(k0 - i, l) + h[i][1] * M(k0 - i, l - 2);
  return {k * (a1 + a2 + 2) * (a1 + a2 + 2) * M(k0, l), rhs};
}

Side rr22(const CoeffTable& t, int k0, int l) {
  Rational k(k0);
  auto M = [&](int kk, int ll) { return Mget(t, kk, ll, false); };
  Rational rhs = k * (k - 1) * (k - 1) * M(k0, l - 2) + 2 * (4 * k - 3) * M(k0 - 1, l) +
                 (1 - k) * (3 * k * k - 8 * k + 6) * M(k0 - 1, l - 2) + 2 * (3 - 2 * k) * M(k0 - 2, l) +
                 (k - 2) * (3 * k * k - 10 * k + 9) * M(k0 - 2, l - 2) + (3 - k) * (k - 2) * (k - 2) * M(k0 - 3, l - 2);
  return {4 * k * M(k0, l), rhs};
}

struct FixtureDef {
  const char* id;
  Shape shape;
  int kmin;    // printed validity bound
  int kfirst;  // smallest k with all referenced indices non-negative
  bool l0_only;
  Side (*fn)(const CoeffTable&, int, int);
};

const FixtureDef kFixtures[] = {
    {"rr14", Shape::Gaussian, 6, 1, false, rr14}, {"rr16", Shape::Gaussian, 6, 1, true, rr16},
    {"rr17", Shape::Laguerre, 2, 2, false, rr17}, {"rr18", Shape::Laguerre, 4, 1, false, rr18},
    {"rr20", Shape::Jacobi, 3, 3, false, rr20},   {"rr22", Shape::Jacobi, 3, 3, false, rr22},
    {"rr14c", Shape::Gaussian, 6, 1, false, rr14c}, {"rr17c", Shape::Laguerre, 2, 2, false, rr17c},
    {"rr18c", Shape::Laguerre, 4, 1, false, rr18c},
};

}  // namespace

RecursionReport verify_printed_recursion(const std::string& fixture_id, const CoeffTable& t) {
  const FixtureDef* def = nullptr;
  for (const auto& f : kFixtures)
    if (fixture_id == f.id) def = &f;
  if (!def) fail("InvalidArgument", "unknown recursion fixture '" + fixture_id + "'");
  if (def->shape != t.shape) fail("InvalidArgument", fixture_id + " does not apply to this table family");
  if (t.kmax < def->kmin) fail("RangeTooSmall", fixture_id + " needs k up to at least " + std::to_string(def->kmin));
  RecursionReport rep;
  rep.fixture = fixture_id;
  int lhi = def->l0_only ? 0 : t.lmax;
  for (int k = def->kfirst; k <= t.kmax; ++k)
    for (int l = 0; l <= lhi; ++l) {
      if (t.shape != Shape::Jacobi && l > k) continue;
      auto [lhs, rhs] = def->fn(t, k, l);
      if (k < def->kmin) {
        if (lhs != rhs) rep.below_range.push_back({k, l, lhs, rhs});
        continue;
      }
      ++rep.checked;
      if (lhs != rhs) rep.violations.push_back({k, l, lhs, rhs});
    }
  return rep;
}

}  // namespace specden
