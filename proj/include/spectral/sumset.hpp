#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spectral/bohr.hpp"
#include "spectral/increment.hpp"
#include "spectral/progression.hpp"

namespace spectral {

/// start, start + diff, ..., start + (length - 1) diff, all in the host set and
/// not extendable at either end.
struct APWitness {
  std::int64_t start = 0;
  std::int64_t diff = 1;
  std::int64_t length = 0;
};

/// A + B for A, B inside {1..N}.
IntSet integer_sumset(const IntSet& a, const IntSet& b);

/// Longest AP in a sorted set; ties go to the smallest difference, then the smallest start.
/// A single element has length 1 and difference 1.
APWitness longest_ap(const IntSet& s);

/// Exact longest AP in A + B for A, B inside {1..N}, N <= 10^5.
APWitness longest_ap_in_sumset(const IntSet& a, const IntSet& b, std::int64_t n);

struct ItsaParams {
  /// rho >= c_impl alpha^exponent / d; also the required growth c in Case 2.
  double c_impl = 1.0 / 16;
  /// 2 as in the statement, 4 as in its proof.
  int exponent = 2;
  std::uint64_t seed = 0;
};

struct ItsaResult {
  int which = 1;
  double sigma = 0;
  double alpha1 = 0, alpha2 = 0;
  double rho_floor = 0;
  int exponent = 2;
  /// Case 1: B' = B(rho) and the covered proportion of B'.
  double rho = 0;
  BohrWidth b_prime;
  std::size_t b_prime_size = 0;
  double coverage = 0;
  /// Case 2: B'' with the translates attaining both sups.
  BohrWidth b_dprime;
  ElementSet b_dprime_members;
  int rank = 0;
  std::size_t lambda_size = 0;
  int role = 0;
  double sup1 = 0, sup2 = 0;
  Element x1 = 0, x2 = 0;
  double product = 0;
  double target = 0;
  bool empirical = false;
  std::vector<NamedInequality> checks;
};

/// One step of the sumset iteration for A1, A2 inside a regular Bohr set B of Z_N, N <= 1021.
ItsaResult itsa_step(const ElementSet& a1, const ElementSet& a2, const BohrSetZ& b, double sigma,
                     const ItsaParams& params = {});

struct ItsaIteration {
  std::vector<ItsaResult> steps;
  bool case1_reached = false;
};

/// Chains Case 2 (passing to B'' and the maximizing translates) until Case 1 or the budget.
ItsaIteration itsa_iterate(const ElementSet& a1, const ElementSet& a2, const BohrSetZ& b, double sigma,
                           int budget, const ItsaParams& params = {});

}  // namespace spectral
