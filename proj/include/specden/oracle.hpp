#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "specden/moments.hpp"

namespace specden {

// Normalized moments of the one-variable weight, int x^k w / int w.
std::vector<Rational> weight_moments(const EnsembleSpec<Rational>& s, int kmax);

// Monic three-term recurrence p_{j+1} = (x - alpha_j) p_j - beta_j p_{j-1}.
struct ThreeTerm {
  std::vector<Rational> alpha, beta;  // beta[0] unused
};

// Closed-form coefficients for the classical weights, j < n.
ThreeTerm classical_recurrence(const EnsembleSpec<Rational>& s, int n);

// Same coefficients by Stieltjes orthogonalization against weight_moments.
ThreeTerm recurrence_from_moments(const EnsembleSpec<Rational>& s, int n);

// beta = 2 density rho = w(x) P(x) / h_0 with h_0 = int w.
struct CDKernelDensity {
  EnsembleSpec<Rational> spec;
  PolyQ P;
  ThreeTerm rec;
  std::string constant_class;  // 1/h_0 in closed form
  double inv_h0 = 0;

  double weight(double x) const;
  double operator()(double x) const;
  // rho and its first n derivatives.
  std::vector<double> derivatives(double x, int n) const;

 private:
  mutable std::vector<XPoly<Rational>> d_;  // (w P)^{(j)} / w
};

CDKernelDensity cd_density(const EnsembleSpec<Rational>& s);

// Density through the orthonormal recurrence in binary64; usable for large N.
double cd_density_numeric(const EnsembleSpec<Rational>& s, double x);

// Exact D(w P) for the catalog operator of s; zero for a correct density.
WeightedResult<Rational> cd_annihilation(const EnsembleSpec<Rational>& s);

struct BruteForceLimits {
  size_t max_terms = 400000;
};

// Moments from expanding |Delta|^beta and integrating monomials, beta even.
MomentTable<Rational> moments_bruteforce(const EnsembleSpec<Rational>& s, int kmax, const BruteForceLimits& lim = {});

// beta = 1, N = 2 moments by nested adaptive quadrature over x < y.
std::vector<double> moments_quadrature(const EnsembleSpec<Rational>& s, int kmax, double tol = 1e-10);

// Eigenvalues of the symmetric tridiagonal matrix, ascending (implicit QL).
std::vector<double> tridiagonal_eigenvalues(std::vector<double> diag, std::vector<double> offdiag);

struct MCEstimate {
  std::map<int, double> mean, stderr_;
  std::uint64_t samples = 0, seed = 0;
  int workers = 1;
};

// Power-sum moments from the tridiagonal (Gaussian) or bidiagonal (Laguerre) models.
MCEstimate mc_moments(const EnsembleSpec<Rational>& s, int kmax, std::uint64_t samples, std::uint64_t seed, int workers = 1);

// Density and derivatives 0..n at x.
using DensityEvaluator = std::function<std::vector<double>(double, int)>;

struct OdeResidual {
  double max = 0, mean = 0;  // normalized by the largest |leading term| on the grid
};

OdeResidual ode_residual(const DiffOp<Rational>& D, const DensityEvaluator& rho, const std::vector<double>& grid);

}  // namespace specden
