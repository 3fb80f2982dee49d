#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "specden/moments.hpp"

namespace specden {

// Printed moment recurrences: coefficients of m_{k - l*step}, l = 0..span.
struct PrintedRecurrence {
  std::string id;
  int step = 1;
  std::vector<Rational> (*coeffs)(long k, const Rational& beta, const Rational& N, const Rational& a, const Rational& b);
};

std::vector<Rational> rr3_jacobi2(long k, const Rational& beta, const Rational& N, const Rational& a, const Rational& b);
std::vector<Rational> rr4_laguerre2(long k, const Rational& beta, const Rational& N, const Rational& a, const Rational& b);
std::vector<Rational> rr6_jacobi14(long k, const Rational& beta, const Rational& N, const Rational& a, const Rational& b);
std::vector<Rational> rr8_laguerre14(long k, const Rational& beta, const Rational& N, const Rational& a, const Rational& b);
std::vector<Rational> rr10_gaussian6(long k, const Rational& beta, const Rational& N, const Rational& a, const Rational& b);

const PrintedRecurrence& printed_recurrence(const std::string& id);

struct FixtureTarget {
  Family family;
  Rational beta;
};

// (family, beta) pairs a printed recurrence applies to.
std::vector<FixtureTarget> fixture_targets(const std::string& id);

struct FixtureCheck {
  std::string id;
  Family family = Family::Gaussian;
  Rational beta = 2;
  int trials = 0, checked = 0;
  std::optional<Rational> factor;  // derived = factor * printed
  std::vector<std::string> violations;
};

// Derived recurrence of the catalog operator against the printed one for k in [kmin, kmax]
// at random rational (N, a, b); one constant factor is fitted across all trials.
FixtureCheck verify_recurrence_fixture(const std::string& id, const FixtureTarget& t, int trials, std::uint64_t seed,
                                       long kmin = -3, long kmax = 25);

// Standard coefficient table a printed 1/N recursion is checked on.
struct CoeffTarget {
  Family family;
  Rational beta;
  Scaled a, b;
  int kmax = 10, lmax = 10;
};

std::vector<CoeffTarget> coeff_fixture_targets(const std::string& id);

struct FixtureResult {
  std::string id, target;
  int checked = 0;
  std::vector<std::string> violations;
  std::optional<Rational> factor;
};

// Moment recurrences rr3, rr4, rr6, rr8, rr10 and coefficient recursions rr14..rr22 with their corrected forms.
std::vector<std::string> fixture_ids();
std::vector<FixtureResult> run_fixture(const std::string& id, int trials, std::uint64_t seed);

}  // namespace specden
