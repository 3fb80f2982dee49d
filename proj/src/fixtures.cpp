#include "specden/fixtures.hpp"

#include <algorithm>
#include <random>

#include "specden/error.hpp"
#include "specden/stieltjes.hpp"

namespace specden {

namespace {

struct Tilde {
  Rational at, bt, ct, ab, Nb;
};

Tilde tilde(const Rational& beta, const Rational& N, const Rational& a, const Rational& b) {
  Rational K = beta / 2 - 1;
  Tilde t;
  t.ab = a / K;
  Rational bb = b / K;
  t.Nb = K * N;
  t.at = t.ab * (t.ab - 2);
  t.bt = bb * (bb - 2);
  t.ct = t.ab + bb + 4 * t.Nb - 1;
  return t;
}

Rational ff(const Rational& x, int n) { return falling(x, n); }

}  // namespace

std::vector<Rational> rr3_jacobi2(long k0, const Rational&, const Rational& N, const Rational& a, const Rational& b) {
  Rational k(k0);
  Rational c = a + b + 2 * N;
  Rational d0 = k * (c * c - (k - 1) * (k - 1));
  Rational d1 = 3 * k * k * k - 11 * k * k - k * (2 * c * c + a * a - b * b - 14) + 3 * (a + b) * (a + 2 * N) + 6 * (N * N - 1);
  Rational d2 = (2 * k - 3) * (2 * N * (a + b + N) + a * b) - (k - 2) * (3 * k * k - 10 * k - 3 * a * a + 9);
  Rational d3 = (k - 3) * ((k - 2) * (k - 2) - a * a);
  return {d0, d1, d2, d3};
}

std::vector<Rational> rr4_laguerre2(long k0, const Rational&, const Rational& N, const Rational& a, const Rational&) {
  Rational k(k0);
  return {k + 1, -(2 * k - 1) * (a + 2 * N), -(k - 2) * ((k - 1) * (k - 1) - a * a)};
}

std::vector<Rational> rr6_jacobi14(long k0, const Rational& beta, const Rational& N, const Rational& a, const Rational& b) {
  Rational k(k0);
  Tilde t = tilde(beta, N, a, b);
  const Rational &at = t.at, &bt = t.bt;
  Rational c2 = t.ct * t.ct, c4 = c2 * c2;
  Rational s = at + bt, d = at - bt;
  Rational k2 = k * k, k3 = k2 * k, k4 = k3 * k;
  Rational d0 = k * (c2 - (k - 2) * (k - 2)) * (c2 - (2 * k - 1) * (2 * k - 1));
  Rational d1 = Rational(1, 2) * (c2 - 9) * (c2 - 9) * (5 - 6 * k) +
                Rational(1, 2) * d * ((c2 - 9) * (5 - 4 * k) + 2 * k * (5 * (k - 1) * (k - 5) + 4 * k)) +
                (c2 - 9) * k * (5 * (4 * k - 3) * (k - 3) + 2 * k) - 4 * k2 * (k - 5) * (5 * (k - 2) * (k - 1) - 2);
  Rational d2 = c4 * (3 * k - 5) + c2 * (Rational(1, 2) * s * (2 * k - 5) + 5 * d * (k - 2)) -
                c2 * (30 * k3 - 171 * k2 + 339 * k - 230) - Rational(1, 2) * s * (5 * k3 - 44 * k2 + 129 * k - 125) -
                Rational(1, 2) * d * (35 * k3 - 246 * k2 + 581 * k - 460) + Rational(1, 2) * (2 * k - 5) * d * d +
                40 * k4 * (k - 11) + 1966 * k3 - 4443 * k2 + 5056 * k - 2305;
  Rational d3 = Rational(1, 2) * c4 * (5 - 2 * k) +
                c2 * (Rational(1, 4) * s * (25 - 8 * k) + Rational(1, 4) * d * (45 - 16 * k)) +
                c2 * (20 * k3 - 155 * k2 + 401 * k - 345) + Rational(5, 4) * s * (6 * k3 - 62 * k2 + 216 * k - 253) +
                Rational(1, 4) * d * (90 * k3 - 806 * k2 + 2436 * k - 2485) + Rational(1, 4) * (at * at - bt * bt) * (15 - 4 * k) +
                Rational(1, 4) * d * d * (25 - 8 * k) - 4 * k3 * (10 * k2 - 140 * k + 789) + 8923 * k2 - 12600 * k +
                Rational(14125, 2);
  Rational d4 = (k - 4) * (k3 + k2 - 18 * k - (c2 - bt - 4 * k2 + 29 * k - 51) * (5 * k2 - 29 * k + 40)) +
                Rational(1, 2) * at * at * (6 * k - 25) +
                Rational(1, 2) * at * ((4 * k - 15) * (c2 - bt - 10 * k2 + 76 * k - 147) - 2 * (k - 5));
  Rational d5 = (k - 5) * (4 * (k - 5) * (k - 4) - at) * (at - (k - 4) * (k - 2));
  return {d0, d1, d2, d3, d4, d5};
}

std::vector<Rational> rr8_laguerre14(long k0, const Rational& beta, const Rational& N, const Rational& a, const Rational&) {
  Rational k(k0);
  Tilde t = tilde(beta, N, a, 0);
  Rational K = beta / 2 - 1;
  Rational A = t.ab + 4 * t.Nb;
  const Rational& at = t.at;
  std::vector<Rational> d(5);
  d[0] = k + 1;
  d[1] = (1 - 4 * k) * A;
  d[2] = (1 - k) * (5 * k * k - 11 * k + 4) + (2 * k - 3) * (at + 2 * A * A);
  d[3] = A * ((11 - 4 * k) * at + 10 * k * k * k - 68 * k * k + 146 * k - 96);
  d[4] = (k - 4) * (at - 4 * (k - 4) * (k - 3)) * (at - (k - 3) * (k - 1));
  for (int l = 0; l < 5; ++l) d[static_cast<size_t>(l)] *= pow(K, l);
  return d;
}

std::vector<Rational> rr10_gaussian6(long k0, const Rational& beta, const Rational& N, const Rational&, const Rational&) {
  Rational k(k0);
  Rational K = beta / 2 - 1;
  Rational Nb = K * N;
  Rational P = Nb * (3 * Nb + 4), Q = 3 * Nb + 2;
  std::vector<Rational> d(7);
  d[0] = -4 * (k + 2);
  d[1] = 8 * (3 * k - 1) * Q;
  d[2] = 48 * (8 - 3 * k) * P + 49 * k * k * k - 216 * k * k + 92 * k + 320;
  d[3] = 4 * (k - 5) * Q * (24 * P - 49 * k * k + 304 * k - 442);
  d[4] = 2 * ff(k - 5, 3) * (294 * P - 63 * k * (k - 6) - 274);
  d[5] = 252 * ff(k - 5, 5) * Q;
  d[6] = 81 * ff(k - 5, 7);
  for (int l = 0; l < 7; ++l) d[static_cast<size_t>(l)] *= pow(K / 4, l);
  return d;
}

const PrintedRecurrence& printed_recurrence(const std::string& id) {
  static const PrintedRecurrence table[] = {
      {"rr3", 1, rr3_jacobi2},      {"rr4", 1, rr4_laguerre2},   {"rr6", 1, rr6_jacobi14},
      {"rr8", 1, rr8_laguerre14},   {"rr10", 2, rr10_gaussian6},
  };
  for (const auto& r : table)
    if (r.id == id) return r;
  fail("InvalidArgument", "unknown recurrence fixture '" + id + "'");
}

std::vector<FixtureTarget> fixture_targets(const std::string& id) {
  if (id == "rr3") return {{Family::Jacobi, 2}};
  if (id == "rr4") return {{Family::Laguerre, 2}};
  if (id == "rr6") return {{Family::Jacobi, 1}, {Family::Jacobi, 4}};
  if (id == "rr8") return {{Family::Laguerre, 1}, {Family::Laguerre, 4}};
  if (id == "rr10") return {{Family::Gaussian, frac(2, 3)}, {Family::Gaussian, 6}};
  fail("InvalidArgument", "unknown recurrence fixture '" + id + "'");
}

FixtureCheck verify_recurrence_fixture(const std::string& id, const FixtureTarget& t, int trials, std::uint64_t seed,
                                       long kmin, long kmax) {
  const auto& pr = printed_recurrence(id);
  FixtureCheck out;
  out.id = id;
  out.family = t.family;
  out.beta = t.beta;
  out.trials = trials;
  std::mt19937_64 rng(seed);
  auto draw = [&](int lo, int hi) { return frac(std::uniform_int_distribution<int>(lo * 7, hi * 7)(rng), 7); };
  for (int trial = 0; trial < trials; ++trial) {
    EnsembleSpec<Rational> s;
    s.family = t.family;
    s.beta = t.beta;
    s.N = draw(1, 6);
    s.a = draw(0, 5);
    s.b = draw(0, 5);
    if (s.N == 0) s.N = 1;
    std::string where = " at N=" + to_string(s.N) + " a=" + to_string(s.a) + " b=" + to_string(s.b);
    Recurrence<Rational> r;
    try {
      // special parameters can thin the lags to a multiple of the printed step
      r = moment_recurrence_from_ode(catalog_density_op(s), pr.step);
    } catch (const Error& e) {
      out.violations.push_back(std::string(e.what()) + where);
      continue;
    }
    for (long k = kmin; k <= kmax; ++k) {
      auto p = pr.coeffs(k, s.beta, s.N, s.a, s.b);
      if (static_cast<int>(p.size()) != r.span() + 1) {
        out.violations.push_back("span differs" + where);
        break;
      }
      for (int l = 0; l <= r.span(); ++l) {
        Rational d = r.coeff(l, k), q = p[static_cast<size_t>(l)];
        ++out.checked;
        if (!out.factor && q != 0) out.factor = d / q;
        if (out.factor ? d != *out.factor * q : d != 0)
          out.violations.push_back("k=" + std::to_string(k) + " l=" + std::to_string(l) + where + ": derived " + to_string(d) +
                                   ", printed " + to_string(q));
      }
    }
  }
  if (!out.factor) out.violations.push_back("printed coefficients vanish identically");
  return out;
}

std::vector<CoeffTarget> coeff_fixture_targets(const std::string& id) {
  if (id == "rr14" || id == "rr14c" || id == "rr16")
    return {{Family::Gaussian, frac(2, 3), {}, {}, 10, 10}, {Family::Gaussian, 6, {}, {}, 10, 10}};
  if (id == "rr17") return {{Family::Laguerre, 2, {1, 0}, {}, 10, 10}};
  if (id == "rr17c") return {{Family::Laguerre, 2, {1, 0}, {}, 10, 10}, {Family::Laguerre, 2, {2, 3}, {}, 10, 10}};
  if (id == "rr18" || id == "rr18c")
    return {{Family::Laguerre, 1, {frac(3, 2), 0}, {}, 10, 10}, {Family::Laguerre, 4, {frac(3, 2), 0}, {}, 10, 10}};
  if (id == "rr20") return {{Family::Jacobi, 2, {1, 0}, {1, 0}, 8, 6}};
  if (id == "rr22") return {{Family::Jacobi, 2, {}, {}, 8, 6}};
  fail("InvalidArgument", "unknown recursion fixture '" + id + "'");
}

std::vector<std::string> fixture_ids() {
  return {"rr3", "rr4", "rr6", "rr8", "rr10", "rr14", "rr14c", "rr16", "rr17", "rr17c", "rr18", "rr18c", "rr20", "rr22"};
}

namespace {

std::string scaled_text(const Scaled& s) { return to_string(s.alpha) + "N+" + to_string(s.delta); }

}  // namespace

std::vector<FixtureResult> run_fixture(const std::string& id, int trials, std::uint64_t seed) {
  std::vector<FixtureResult> out;
  static const std::vector<std::string> moment_ids = {"rr3", "rr4", "rr6", "rr8", "rr10"};
  if (std::find(moment_ids.begin(), moment_ids.end(), id) != moment_ids.end()) {
    for (const auto& t : fixture_targets(id)) {
      auto c = verify_recurrence_fixture(id, t, trials, seed);
      out.push_back({id, family_name(t.family) + " beta=" + to_string(t.beta), c.checked, c.violations, c.factor});
    }
    return out;
  }
  for (const auto& t : coeff_fixture_targets(id)) {
    auto table = coeff_table(t.family, t.beta, t.a, t.b, t.kmax, t.lmax);
    auto rep = verify_printed_recursion(id, table);
    FixtureResult r;
    r.id = id;
    r.target = family_name(t.family) + " beta=" + to_string(t.beta) + " a=" + scaled_text(t.a);
    if (t.family == Family::Jacobi) r.target += " b=" + scaled_text(t.b);
    r.target += " k<=" + std::to_string(t.kmax) + " l<=" + std::to_string(t.lmax);
    r.checked = rep.checked;
    for (const auto& v : rep.violations)
      r.violations.push_back("k=" + std::to_string(v.k) + " l=" + std::to_string(v.l) + ": " + to_string(v.lhs) + " != " + to_string(v.rhs));
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace specden
