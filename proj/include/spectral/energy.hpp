#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "spectral/fourier.hpp"

namespace spectral {

/// Nonnegative weights on characters, stored sparsely. Zero weights are
/// dropped so that support() is exactly where the weight is positive.
class WeightFn {
 public:
  WeightFn(Group group, std::vector<std::pair<Character, double>> weights);

  static WeightFn indicator(const Group& g, const CharacterSet& set);

  const Group& group() const noexcept { return group_; }
  const CharacterSet& support() const noexcept { return support_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  double operator()(Character gamma) const;
  double l1() const noexcept { return l1_; }
  double l2() const noexcept { return l2_; }
  VectorXr dense() const;

 private:
  Group group_;
  CharacterSet support_;
  std::vector<double> weights_;
  double l1_ = 0, l2_ = 0;
};

/// Tuple enumeration is refused above this many 2m-tuples.
inline constexpr double kEnumerationLimit = 1e8;

enum class EnergyMethod { automatic, enumerate, convolve };

/// E_{2m}(omega, Gamma). automatic enumerates when feasible and requires the
/// convolution path to agree to 1e-6 relative; otherwise it convolves.
double additive_energy(const WeightFn& omega, const CharacterSet& gamma, int m,
                       EnergyMethod method = EnergyMethod::automatic);

/// mu_m(x) = sum over m-tuples of characters summing to x of the weight product.
VectorXr convolution_power(const WeightFn& omega, int m);

/// D(v) = sum over disjoint unordered (D1, D2) of sizes (t1, t2) inside
/// supp(omega) with sum D1 - sum D2 = v of the weight product. Every restricted
/// energy at these orders is a sum of D over a shifted Gamma.
class RestrictedDistribution {
 public:
  RestrictedDistribution(const WeightFn& omega, int t1, int t2);

  int t1() const noexcept { return t1_; }
  int t2() const noexcept { return t2_; }
  const VectorXr& values() const noexcept { return values_; }
  /// E#(omega, Gamma + lambda).
  double at(const CharacterSet& gamma, Character lambda) const;
  /// max over every lambda in the dual group, with a maximizing lambda.
  std::pair<double, Character> sup(const CharacterSet& gamma) const;

 private:
  Group group_;
  int t1_, t2_;
  VectorXr values_;
};

/// E#_{t1,t2}(omega, Gamma + lambda). Without a shift, t1 = t2 = 0 returns 1 by
/// convention; with a shift the empty pair is tested literally, giving [-lambda in Gamma].
double restricted_energy(const WeightFn& omega, const CharacterSet& gamma, int t1, int t2,
                         std::optional<Character> lambda = std::nullopt);

struct BoundCheck {
  double lhs = 0;
  double rhs = 0;
  bool holds = false;
};

/// E#_{t1,t2}(S, Gamma + lambda) <= 4^{k+m}, k = |S| - dim_Gamma(S).
BoundCheck en1_bound_check(const Group& g, const CharacterSet& s, const CharacterSet& gamma, int m,
                           int t1, int t2, std::optional<Character> lambda = std::nullopt);

/// E_{2m}(omega, Gamma) against the restricted-energy expansion; the sup over
/// shifts is exact over the whole dual group.
BoundCheck en2_bound_check(const WeightFn& omega, const CharacterSet& gamma, int m);

struct ShkredovCheck {
  double energy = 0;
  double lower = 0;
  bool holds = false;
};

/// E_{2m}(omega, Delta_eps(B)) against the lower bound for f supported on B
/// and omega supported on Delta_eta(f).
ShkredovCheck shkredov_check(const DensityFn& f, const ElementSet& b, const WeightFn& omega, double eta,
                             int m, double eps);

/// n! / (floor(n/2)!)^2 <= 2 (n+1)^{1/2} 2^n, decided in exact integers.
bool en2_micro_inequality(int n);

}  // namespace spectral
