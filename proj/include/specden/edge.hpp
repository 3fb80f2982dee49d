#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "specden/diffop/catalog.hpp"

namespace specden {

DiffOp<Rational> soft_edge_op(const Rational& beta);
DiffOp<Rational> hard_edge_op(const Rational& beta, const Rational& a);

// Oracles; Airy on |x| <= 12, Bessel J_nu for nu > -1 and x >= 0.
double airy_ai(double x);
double airy_ai_prime(double x);
double besselj(double nu, double x);

// beta = 2 closed forms: Ai'^2 - x Ai^2 and (1/4)[J_a^2 - J_{a+1} J_{a-1}](sqrt x).
double soft_airy_density(double x);
double hard_bessel_density(double a, double x);

// Adaptive Dormand-Prince 5(4); the local error per unit step of component i is kept
// below tol times the running maximum of |y_i|.
struct Dopri5 {
  using Rhs = std::function<void(double, const std::vector<double>&, std::vector<double>&)>;
  Rhs f;
  double tol = 1e-10;
  double h = 1e-3;  // current step magnitude, carried between calls
  long steps = 0;
  std::vector<double> scale;

  // Advances y from x0 to x1 (either direction).
  void advance(double x0, double x1, std::vector<double>& y);
};

// Formal solution exp(-2 s x^{3/2} / 3) sum_k c_k x^{gamma - k/2} of a soft edge operator.
struct DecayingSeries {
  double s = 0, gamma = 0;
  std::vector<double> c;
  // y and its first n derivatives at x, truncated at the smallest term.
  std::vector<double> derivatives(const DiffOp<Rational>& D, double x, int n) const;
};

// Positive real roots s of the characteristic polynomial, ascending.
std::vector<double> soft_decay_rates(const DiffOp<Rational>& D);
DecayingSeries decaying_series(const DiffOp<Rational>& D, double s, int terms = 40);

// Frobenius solution x^r sum_k c_k x^k at the regular singular point 0.
struct FrobeniusSeries {
  double r = 0;
  std::vector<double> c;
  std::vector<double> derivatives(double x, int n) const;
};

std::vector<double> indicial_roots(const DiffOp<Rational>& D);
FrobeniusSeries frobenius_series(const DiffOp<Rational>& D, double r, int terms = 400);

struct EdgeOptions {
  double step = 0.01;        // output grid spacing
  double tol = 1e-10;        // integrator tolerance (error per unit step)
  double seed_point = 8.0;   // soft edge: series seed at max(x_max, seed_point)
  double series_point = 2.0; // hard edge: series used up to here
  double tail_fit_point = 1000; // hard edge, two branches: tail mean fitted over [this/10, this]
  double bulk_fit_point = -30; // soft edge, beta in {1, 2/3}: bulk fit over [min(x_min, this), half of it]
  bool check_seed = true;
  double seed_tol = 1e-6;      // SeedUnstable threshold, relative to max |rho|
  double residual_tol = 1e-8;  // ToleranceNotMet threshold on the normalized residual
};

struct EdgeSolution {
  Rational beta;
  std::string kind;  // "soft" or "hard"
  Rational a = 0;
  std::vector<double> grid, values;
  std::vector<double> residuals;  // pointwise |D rho| on the ode_residual scale; NaN where not evaluated
  double ode_residual = 0;
  std::optional<double> oracle_deviation;
  std::string normalization;
  std::vector<double> mode_weights;  // basis coefficients fixed by the normalization
  double seed_x = 0;

  double at(double x) const;  // linear interpolation on the grid
};

EdgeSolution solve_soft_edge(const Rational& beta, double x_min, double x_max, const EdgeOptions& opt = {});
EdgeSolution solve_hard_edge(const Rational& beta, const Rational& a, double x_max, const EdgeOptions& opt = {});

// Tail amplitude (1/pi) Gamma(1+kappa)/(8 kappa)^kappa for even beta.
double soft_tail_amplitude(const Rational& beta);
// Limit of rho(x)/x^a as x -> 0: kappa^{2a+1} Gamma(1+kappa) / (4^{a+1} Gamma(1+a) Gamma(1+a+kappa)).
double hard_small_x_constant(const Rational& beta, const Rational& a);
// Grid average over [x_max/10, x_max] of the mean of the upper and lower envelopes of 2 pi sqrt(x) rho,
// each interpolated linearly through the local extrema.
double hard_tail_envelope_mean(const EdgeSolution& s);

// max |D rho| / max |sum_{i<n} p_i rho^{(i)}| with rho^{(n)} from central differences of the
// tabulated states; a non-NaN entry of top replaces the difference quotient at that point.
double tabulated_residual(const DiffOp<Rational>& D, const std::vector<double>& grid,
                          const std::vector<std::vector<double>>& states, const std::vector<double>* top = nullptr);

enum class EdgeKind { Soft, SoftSmallest, Hard };

// x_raw = c0 + orientation * c1 * x; the scaled density is c1 * rho_N(x_raw).
struct EdgeScalingMap {
  EnsembleSpec<Rational> spec;
  EdgeKind kind = EdgeKind::Soft;
  double c0 = 0, c1 = 1, delta = 0;
  int orientation = 1;
  std::optional<double> q_plus, q_minus;

  double raw(double x) const { return c0 + orientation * c1 * x; }
  double scaled(const std::function<double(double)>& rho_raw, double x) const { return c1 * rho_raw(raw(x)); }
};

// alpha1 selects the a = alpha1 N Laguerre regime; alpha2 the b = alpha2 N Jacobi hard edge.
EdgeScalingMap edge_scaling_map(const EnsembleSpec<Rational>& spec, EdgeKind kind,
                                const std::optional<Rational>& alpha1 = std::nullopt,
                                const std::optional<Rational>& alpha2 = std::nullopt);

}  // namespace specden
