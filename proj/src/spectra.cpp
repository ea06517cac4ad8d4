#include "spectral/spectra.hpp"

#include <cmath>

namespace spectral {
namespace {

bool clears(double modulus, double threshold, double l1) {
  if (modulus <= kZeroFloor * l1) return false;
  return modulus >= threshold - kGuardBand;
}

void check_eta(double eta, double l1) {
  if (!(eta > 0.0 && eta <= 1.0)) throw Error(ErrorKind::OutOfRange, "eta must lie in (0, 1]");
  if (!(l1 > 0.0)) throw Error(ErrorKind::EmptyFunction, "||f||_1 must be positive");
}

/// For real f, |f^(-gamma)| = |f^(gamma)|; using the smaller computed modulus
/// for both keeps the reported spectrum exactly symmetric.
double modulus(const VectorXc& transform, Eigen::Index i, const Group* real_on) {
  const double m = std::abs(transform(i));
  if (!real_on) return m;
  return std::min(m, std::abs(transform(real_on->neg(static_cast<Element>(i)))));
}

SpectrumReport band(const VectorXc& transform, double l1, double eta, bool level, const Group* real_on = nullptr) {
  check_eta(eta, l1);
  SpectrumReport report;
  report.eta = eta;
  report.threshold = eta * l1;
  if (level) report.upper_threshold = 2.0 * eta * l1;
  for (Eigen::Index i = 0; i < transform.size(); ++i) {
    const double m = modulus(transform, i, real_on);
    if (!clears(m, report.threshold, l1)) continue;
    if (level && clears(m, report.upper_threshold, l1)) continue;
    report.members.push_back(static_cast<Character>(i));
    report.moduli.push_back(m);
  }
  return report;
}

bool is_real(const DensityFn& f) { return f.values().imag().isZero(0.0); }

}  // namespace

SpectrumReport spectrum(const VectorXc& transform, double l1, double eta) {
  return band(transform, l1, eta, false);
}

SpectrumReport spectrum(const DensityFn& f, double eta) {
  check_eta(eta, f.l1());
  return band(f.transform(), f.l1(), eta, false, is_real(f) ? &f.group() : nullptr);
}

SpectrumReport level_spectrum(const VectorXc& transform, double l1, double eta) {
  return band(transform, l1, eta, true);
}

SpectrumReport level_spectrum(const DensityFn& f, double eta) {
  check_eta(eta, f.l1());
  return band(f.transform(), f.l1(), eta, true, is_real(f) ? &f.group() : nullptr);
}

CharacterSet set_spectrum(const Group& g, const ElementSet& b, double eps) {
  if (b.empty()) throw Error(ErrorKind::EmptyFunction, "spectrum of the empty set");
  if (eps <= 0.0) return all_elements(g);
  const auto f = DensityFn::indicator(g, b);
  const VectorXc t = f.transform();
  CharacterSet out;
  for (Eigen::Index i = 0; i < t.size(); ++i)
    if (clears(modulus(t, i, &g), eps * f.l1(), f.l1())) out.push_back(static_cast<Character>(i));
  return out;
}

ControlReport has_control(const Group& g, const ElementSet& b, const CharacterSet& gamma, double eps) {
  ControlReport report;
  for (Element x : b)
    for (Character c : gamma) {
      const double d = g.distance_from_one(c, x);
      if (!report.worst_pair || d > report.worst) {
        report.worst = d;
        report.worst_pair = std::make_pair(x, c);
      }
    }
  report.holds = report.worst <= eps + kGuardBand;
  return report;
}

int cal_L(double delta) {
  if (!(delta > 0.0 && delta <= 1.0)) throw Error(ErrorKind::OutOfRange, "delta must lie in (0, 1]");
  return 2 + static_cast<int>(std::ceil(std::log(1.0 / delta) - 1e-12));
}

}  // namespace spectral
