#pragma once

#include <cstdint>
#include <vector>

#include "spectral/increment.hpp"

namespace spectral {

/// Positive integers, sorted and duplicate-free.
using IntSet = std::vector<std::int64_t>;

/// No x < y < z in s with x + z = 2y.
bool is_3ap_free(const IntSet& s);

struct BehrendParams {
  int digits_below = 0;  // d: every digit lies in [0, d)
  int length = 0;        // k: number of digits, base 2d - 1
  std::int64_t radius = 0;
};

struct BehrendSet {
  IntSet set;
  BehrendParams params;
};

/// Sphere construction in {1..N}, maximized over (d, k, radius); 8 <= N <= 10^6.
/// Sizes are nondecreasing in N because every candidate for N is one for N + 1.
BehrendSet behrend_construct(std::int64_t n);

struct ExactR {
  int value = 0;
  IntSet witness;
};

/// Largest 3AP-free subset of {1..N} by branch and bound; N <= 40, TooLarge otherwise.
ExactR exact_R(int n);

/// Z_{N'} with N' the next prime above (2 max|c_i| + 1) N, large enough that
/// c1 x1 + c2 x2 + c3 x3 = 0 over {1..N} has no wraparound solutions.
Group embedding_group(std::int64_t n, const EquationCoeffs& c);
ElementSet embed(const Group& g, const IntSet& s);

}  // namespace spectral
