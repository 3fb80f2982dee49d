#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "specden/diffop/catalog.hpp"
#include "specden/stieltjes.hpp"

namespace specden {

template <class F>
struct MomentTable {
  Family family = Family::Gaussian;
  Rational beta = 2;
  std::map<int, F> values;
  std::string provenance;

  const F& at(int k) const {
    auto it = values.find(k);
    if (it == values.end()) fail("RangeTooSmall", "moment m_" + std::to_string(k) + " not in table");
    return it->second;
  }
  bool has(int k) const { return values.count(k) > 0; }
};

// Parameter a = alpha*N + delta in symbolic-N mode.
struct Scaled {
  Rational alpha = 0, delta = 0;
};

// Forward run of the series relations of the catalog pair (D, R); throws
// SingularSystem when a relation has a zero pivot.
template <class F>
MomentTable<F> moments_run(const EnsembleSpec<F>& s, int kmax) {
  auto D = catalog_density_op(s);
  auto R = catalog_resolvent_rhs(s);
  int lead = D.degree_shift();
  MomentTable<F> t;
  t.family = s.family;
  t.beta = s.beta;
  t.provenance = "series relations of the " + family_name(s.family) + " beta=" + to_string(s.beta) + " operator";
  t.values[0] = s.N;
  for (int k = 0; k <= kmax; ++k) {
    int e = lead - 1 - k;
    auto rel = series_relation(D, e);
    F rhs = e >= 0 ? F(s.N * R[e]) : F(0);
    F piv(0);
    for (const auto& [j, c] : rel) {
      if (j == k)
        piv = c;
      else
        rhs -= F(c * t.values.at(j));
    }
    if (k == 0) {
      if (F(piv * s.N) != rhs) fail("Inconsistent", "normalization m_0 = N violates the resolvent equation");
      continue;
    }
    if (is_zero(piv)) fail("SingularSystem", "zero pivot at m_" + std::to_string(k));
    t.values[k] = F(rhs / piv);
  }
  return t;
}

// Exact moments m_0..m_kmax; zero pivots are resolved through the symbolic-N run.
MomentTable<Rational> moments_exact(const EnsembleSpec<Rational>& s, int kmax);

// Moments as rational functions of N with a = alpha1 N + delta1, b = alpha2 N + delta2.
MomentTable<QN> moments_symbolic(Family f, const Rational& beta, const Scaled& a, const Scaled& b, int kmax,
                                 const std::optional<Rational>& g = std::nullopt);

// Downward recurrence for m_{-1}..m_{kmin}; requires |k| < a + 1.
MomentTable<Rational> moments_negative(const EnsembleSpec<Rational>& s, int kmin);

enum class Shape { Gaussian, Laguerre, Jacobi };

struct CoeffTable {
  Shape shape = Shape::Gaussian;
  Rational beta = 2;
  Scaled a, b;
  int kmax = 0, lmax = 0;
  std::map<std::pair<int, int>, Rational> entries;

  Rational at(int k, int l) const {
    if (k < 0 || k > kmax || l > lmax) fail("RangeTooSmall", "M(" + std::to_string(k) + "," + std::to_string(l) + ") outside table");
    auto it = entries.find({k, l});
    return it == entries.end() ? Rational(0) : it->second;
  }
};

// Expansion coefficients M_{k,l}: Gaussian m_{2k} = sum M N^{k-l+1}, Laguerre
// m_k = sum M N^{k-l+1}, Jacobi m_k = sum M N^{1-l}.
CoeffTable coeff_table(Family f, const Rational& beta, const Scaled& a, const Scaled& b, int kmax, int lmax);

// Coefficients of r(N) = sum_j c_j N^{top - j} for large N, j < terms; returns (top, c).
std::pair<int, std::vector<Rational>> large_n_expansion(const QN& r, int terms);

struct Violation {
  int k = 0, l = 0;
  Rational lhs, rhs;
};

struct RecursionReport {
  std::string fixture;
  int checked = 0;
  std::vector<Violation> violations;
  std::vector<Violation> below_range;  // failures for k under the printed validity bound
};

RecursionReport verify_printed_recursion(const std::string& fixture_id, const CoeffTable& t);

}  // namespace specden
