#pragma once

#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "spectral/fourier.hpp"

namespace spectral {

/// Additive slack applied to every threshold comparison on floating moduli.
inline constexpr double kGuardBand = 1e-9;
/// Moduli at or below kZeroFloor * ||f||_1 are treated as exact zeros; they
/// never enter a spectrum, however small the threshold.
inline constexpr double kZeroFloor = 1e-11;

struct SpectrumReport {
  double eta = 0;
  double threshold = 0;
  /// +inf for the plain spectrum, 2 * threshold for a level spectrum.
  double upper_threshold = std::numeric_limits<double>::infinity();
  CharacterSet members;
  /// |f^(gamma)| for each member, aligned with members.
  std::vector<double> moduli;
};

/// Delta_eta(f) = {gamma : |f^(gamma)| >= eta ||f||_1}.
SpectrumReport spectrum(const DensityFn& f, double eta);
/// Same, from an already computed transform.
SpectrumReport spectrum(const VectorXc& transform, double l1, double eta);

/// eta ||f||_1 <= |f^(gamma)| < 2 eta ||f||_1.
SpectrumReport level_spectrum(const DensityFn& f, double eta);
SpectrumReport level_spectrum(const VectorXc& transform, double l1, double eta);

/// Delta_eps(B) for the indicator of B; eps <= 0 gives the whole dual group.
CharacterSet set_spectrum(const Group& g, const ElementSet& b, double eps);

struct ControlReport {
  bool holds = true;
  double worst = 0;
  /// (x, gamma) attaining the largest |1 - gamma(x)|.
  std::optional<std::pair<Element, Character>> worst_pair;
};

/// B has eps-control of Gamma iff |1 - gamma(x)| <= eps for all x in B, gamma in Gamma.
ControlReport has_control(const Group& g, const ElementSet& b, const CharacterSet& gamma, double eps);

/// 2 + ceil(log(1/delta)) with the natural logarithm.
int cal_L(double delta);

}  // namespace spectral
