#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "specden/moments.hpp"

namespace specden {

using SeriesQ = InvXSeries<Rational>;
using SeriesS = InvXSeries<QSqrt>;
using PolyS = Poly<QSqrt>;
using OpS = DiffOp<QSqrt>;

// Truncated 1/x series of W = sum m_k x^{-k-1}, J coefficients.
SeriesQ resolvent_series(const EnsembleSpec<Rational>& s, int J);

struct ResidualReport {
  PolyQ polynomial_part;
  PolyQ expected;
  int checked_negative = 0;
  std::vector<int> nonzero_negative;  // exponents e < 0 with nonzero coefficient
  bool ok() const { return polynomial_part == expected && nonzero_negative.empty(); }
};

// Substitutes the truncated resolvent into D (1/N) W and compares with the catalog right-hand side.
ResidualReport check_resolvent_ode(const EnsembleSpec<Rational>& s, int J);

// Global scaling x = s(N) X with s = sigma t^mu, N = t^nu, and
// tilde W = c N sum_l W^l (eta t^nu)^{-l}.
struct ExpansionScaling {
  Rational kappa;
  int nu = 1, mu = 0;
  QSqrt sigma, c, eta;
  std::string parameter;  // expansion parameter in terms of N
};

ExpansionScaling expansion_scaling(Family f, const Rational& beta);

// Scaled resolvent equation sum_q t^q A_q tilde W = sum_p t^p rhs_p.
struct LevelSystem {
  Family family = Family::Gaussian;
  Rational beta = 2;
  Rational alpha1 = 0, alpha2 = 0;
  ExpansionScaling scaling;
  std::map<int, OpS> ops;
  std::map<int, PolyS> rhs;
  int top() const { return ops.rbegin()->first; }
  const OpS& leading() const { return ops.rbegin()->second; }
};

LevelSystem level_system(Family f, const Rational& beta, const Rational& alpha1 = 0, const Rational& alpha2 = 0);

struct ExpansionStack {
  Family family = Family::Gaussian;
  Rational beta = 2;
  Rational alpha1 = 0, alpha2 = 0;
  ExpansionScaling scaling;
  int J = 0;
  std::vector<SeriesS> levels;
  int consistency_checked = 0;  // t-powers outside the level equations verified to vanish
};

// Levels W^0..W^lmax as 1/x series with J coefficients, solved level by level
// from the scaled resolvent equation.
ExpansionStack expansion_coefficients(Family f, const Rational& beta, const Rational& alpha1, const Rational& alpha2,
                                      int lmax, int J);

// Levels rebuilt from a CoeffTable through the global scaling.
std::vector<SeriesS> reassemble_levels(const CoeffTable& t, int lmax, int J);

// Solve A W = F for W = sum_{j<J} c_j x^{-j-1}; F must be known down to x^{E-J}.
// c0 fixes the 1/x coefficient when A annihilates it at top order, and is checked otherwise.
SeriesS solve_level(const OpS& A, const SeriesS& F, int J, const std::optional<QSqrt>& c0 = std::nullopt);

struct UniversalityReport {
  std::vector<Rational> betas;
  int J = 0;
  int first_difference = -1;  // smallest j where some beta's level-0 coefficient differs
  bool identical() const { return first_difference < 0; }
};

// Level 0 across beta, with alpha_i rescaled by kappa so that alpha_i / kappa is fixed.
UniversalityReport w0_universality_check(Family f, const std::vector<Rational>& betas, int J,
                                         const Rational& alpha1 = 1, const Rational& alpha2 = 1);

struct PrintedLevelCheck {
  std::string equation;
  int level = 0;
  int checked = 0;
  std::vector<int> nonzero;  // exponents with a nonzero residual
};

// Residuals of the printed level equations evaluated on a computed stack.
std::vector<PrintedLevelCheck> verify_printed_levels(const ExpansionStack& s);

}  // namespace specden
