#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "spectral/cover.hpp"
#include "spectral/fourier.hpp"
#include "spectral/spectra.hpp"

namespace spectral {

/// c1 x1 + c2 x2 + c3 x3 = 0 with c1 + c2 + c3 = 0 (exactly for Z_N, mod p for F_p^n).
struct EquationCoeffs {
  std::int64_t c1 = 1, c2 = 1, c3 = -2;
};

/// Throws InvalidInput unless the coefficients sum to zero and CoefficientNotUnit
/// unless each acts invertibly on the group.
void validate_coeffs(const Group& g, const EquationCoeffs& c);

/// <A1 * A2, A3> = #{(x, y) in A1 x A2 : x + y in A3}.
std::uint64_t trilinear_count(const Group& g, const ElementSet& a1, const ElementSet& a2, const ElementSet& a3);

struct SolutionCount {
  std::uint64_t count = 0;
  std::uint64_t direct = 0;
  double fourier = 0;
};

/// Upsilon_c(A) by solving for x3 over all pairs and by N^{-1} sum_gamma
/// A^(c1 gamma) A^(c2 gamma) A^(c3 gamma); Inconclusive if they disagree.
SolutionCount count_solutions(const Group& g, const ElementSet& a, const EquationCoeffs& c);

/// Upsilon(A) == Upsilon(u A + t).
bool upsilon_invariance(const Group& g, const ElementSet& a, const EquationCoeffs& c, Element t, std::int64_t u);

/// A(x) - alpha B(x) with alpha = |A| / |B|.
VectorXr balanced_function(const Group& g, const ElementSet& a, const ElementSet& b);

struct NamedInequality {
  std::string name;
  double lhs = 0;
  double rhs = 0;
  bool holds = false;
};

bool all_hold(const std::vector<NamedInequality>& checks);

struct De1Result {
  std::vector<NamedInequality> hypotheses;
  bool hypotheses_hold = false;
  /// The Fourier-size hypothesis evaluated with |B'| in place of |B| differs in outcome.
  bool size_convention_matters = false;
  Element witness = 0;
  double sup = 0;
  double target = 0;
  bool conclusion_holds = false;
};

/// L2-to-L-infinity increment for f: B -> [0, 1] against a symmetric B'.
De1Result de1_l2_increment(const Group& g, const VectorXr& f, const ElementSet& b, const CharacterSet& gamma,
                           double nu, const ElementSet& b_prime);

struct De2Result {
  bool precondition = false;
  ControlReport lambda_control;
  ControlReport gamma_control;
  /// min over covered gamma of |B^(gamma)| / |B|.
  double worst_ratio = 1;
  Character worst_gamma = 0;
  bool conclusion_holds = false;
};

/// (4d)^{-1}-control of Lambda and 1/8-control of Gamma give |B^(gamma)| >= |B|/2
/// on every covered gamma.
De2Result de2_control_from_cover(const Group& g, const CoverCertificate& cert, const ElementSet& b);

struct De3Result {
  bool precondition = false;
  double excess = 0;
  double allowed = 0;
  ControlReport control;
  bool conclusion_holds = false;
};

/// |(B + B') \ B| <= c eps |B| gives B' 2c-control of Delta_eps(B).
De3Result de3_control_from_addition(const Group& g, const ElementSet& b, const ElementSet& b_prime, double c,
                                    double eps);

/// Quantities of the weighted-spectrum increment that do not depend on B''.
struct ThdeSpectrum {
  double alpha = 0;
  double tau = 0;
  double nu = 0;
  double eta = 0;
  double eps = 0;
  /// Union of the per-level cover generators; d = |lambda|.
  CharacterSet lambda;
  double lambda_bound = 0;
  CharacterSet delta_prime;
  /// Delta_eps(B'), the covering set.
  CharacterSet gamma;
  int levels = 0;
  std::vector<NamedInequality> checks;
};

ThdeSpectrum thde_spectrum(const Group& g, const ElementSet& a, const ElementSet& b, const VectorXr& f,
                           const ElementSet& b_prime, std::uint64_t seed);

/// The three conditions a candidate B'' must meet.
std::vector<NamedInequality> thde_hypotheses(const Group& g, const ElementSet& b, const ElementSet& b_prime,
                                             const ThdeSpectrum& spec, const ElementSet& b_dprime);

struct ThdeResult {
  enum class Status { increment, hypothesis_unmet, increment_not_found };
  Status status = Status::hypothesis_unmet;
  ThdeSpectrum spectrum;
  ElementSet b_dprime;
  std::vector<NamedInequality> hypotheses;
  Element witness = 0;
  std::size_t hits = 0;
  double new_density = 0;
  double target = 0;
};

/// Exhaustive translate scan of A against B'', ties to the smallest x.
std::pair<Element, std::size_t> best_translate(const Group& g, const ElementSet& a, const ElementSet& b_dprime);

ThdeResult thde_conclude(const Group& g, const ElementSet& a, const ElementSet& b, const ElementSet& b_prime,
                         const ThdeSpectrum& spec, const ElementSet& b_dprime);

using BohrFactory = std::function<ElementSet(const ThdeSpectrum&)>;

ThdeResult thde_increment(const Group& g, const ElementSet& a, const ElementSet& b, const VectorXr& f,
                          const ElementSet& b_prime, const BohrFactory& make_b_dprime, std::uint64_t seed);

struct MaindiResult {
  bool hypothesis_holds = false;
  NamedInequality hypothesis;
  double alpha = 0;
  double alpha1 = 0, alpha2 = 0, alpha3 = 0;
  std::uint64_t count = 0;
  double bound = 0;
  bool many_solutions = false;
  /// 2 or 3: which of A2, A3 carries the increment.
  int role = 0;
  double split_lhs = 0, split_rhs = 0;
  std::optional<ThdeResult> increment;
  std::vector<NamedInequality> checks;
};

/// Trilinear count against 2^-2 a1 a2 a3 |B||B'|, else the Cauchy-Schwarz split
/// picks A2 or A3 and the weighted-spectrum increment runs with f = A1 on B'.
MaindiResult maindi_step(const Group& g, const ElementSet& a1, const ElementSet& a2, const ElementSet& a3,
                         const ElementSet& b_prime, const ElementSet& b, const BohrFactory& make_b_dprime,
                         std::uint64_t seed);

}  // namespace spectral

namespace spectral {

/// {x : |1 - lambda(x)| <= eps for all lambda in Lambda}, the largest set with
/// eps-control of Lambda. Symmetric and contains 0.
ElementSet control_set(const Group& g, const CharacterSet& lambda, double eps);

}  // namespace spectral
