#include "spectral/energy.hpp"

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <functional>

#include "spectral/dissociation.hpp"
#include "spectral/spectra.hpp"

namespace spectral {

WeightFn::WeightFn(Group group, std::vector<std::pair<Character, double>> weights) : group_(std::move(group)) {
  std::sort(weights.begin(), weights.end());
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const auto [gamma, w] = weights[i];
    if (!group_.contains(gamma)) throw Error(ErrorKind::OutOfRange, "weight on a character outside the dual group");
    if (!(w >= 0.0) || !std::isfinite(w)) throw Error(ErrorKind::InvalidInput, "weights must be finite and nonnegative");
    if (i > 0 && weights[i - 1].first == gamma) throw Error(ErrorKind::InvalidInput, "duplicate character in weights");
    if (w == 0.0) continue;
    support_.push_back(gamma);
    weights_.push_back(w);
  }
  long double s1 = 0, s2 = 0;
  for (double w : weights_) {
    s1 += w;
    s2 += static_cast<long double>(w) * w;
  }
  l1_ = static_cast<double>(s1);
  l2_ = static_cast<double>(std::sqrt(s2));
}

WeightFn WeightFn::indicator(const Group& g, const CharacterSet& set) {
  std::vector<std::pair<Character, double>> w;
  w.reserve(set.size());
  for (Character c : set) w.emplace_back(c, 1.0);
  return WeightFn(g, std::move(w));
}

double WeightFn::operator()(Character gamma) const {
  const auto it = std::lower_bound(support_.begin(), support_.end(), gamma);
  if (it == support_.end() || *it != gamma) return 0.0;
  return weights_[static_cast<std::size_t>(it - support_.begin())];
}

VectorXr WeightFn::dense() const {
  VectorXr out = VectorXr::Zero(group_.order());
  for (std::size_t i = 0; i < support_.size(); ++i) out(support_[i]) = weights_[i];
  return out;
}

namespace {

double enumerate_energy(const WeightFn& omega, const CharacterSet& gamma, int m) {
  const Group& g = omega.group();
  const auto mask = indicator_mask(g, gamma);
  const auto& sup = omega.support();
  const auto& w = omega.weights();
  const int slots = 2 * m;
  long double total = 0;
  std::function<void(int, Element, long double)> rec = [&](int slot, Element sum, long double prod) {
    if (slot == slots) {
      if (mask[sum]) total += prod;
      return;
    }
    const bool plus = slot < m;
    for (std::size_t i = 0; i < sup.size(); ++i)
      rec(slot + 1, plus ? g.add(sum, sup[i]) : g.sub(sum, sup[i]), prod * w[i]);
  };
  rec(0, 0, 1.0L);
  return static_cast<double>(total);
}

double correlate_energy(const Group& g, const VectorXr& mu, const CharacterSet& gamma) {
  const std::uint64_t n = g.order();
  if (n * gamma.size() <= 50'000'000ULL) {
    long double total = 0;
    for (Character c : gamma)
      for (Element x = 0; x < n; ++x) total += static_cast<long double>(mu(x)) * mu(g.sub(x, c));
    return static_cast<double>(total);
  }
  // R(c) = sum_x mu(x) mu(x - c) has transform |mu^|^2.
  const VectorXc spec = fourier_transform(g, mu).cwiseAbs2().cast<std::complex<double>>();
  const VectorXc r = inverse_fourier(g, spec);
  long double total = 0;
  for (Character c : gamma) total += r(c).real();
  return static_cast<double>(total);
}

}  // namespace

VectorXr convolution_power(const WeightFn& omega, int m) {
  const Group& g = omega.group();
  const std::uint64_t n = g.order();
  VectorXr mu = VectorXr::Zero(n);
  mu(0) = 1.0;
  if (m == 0) return mu;
  if (n * omega.support().size() * static_cast<std::uint64_t>(m) > 50'000'000ULL) {
    const VectorXc t = fourier_transform(g, omega.dense());
    VectorXc power = t;
    for (int step = 1; step < m; ++step) power = power.cwiseProduct(t);
    return inverse_fourier(g, power).real();
  }
  for (int step = 0; step < m; ++step) {
    VectorXr next = VectorXr::Zero(n);
    for (Element x = 0; x < n; ++x) {
      if (mu(x) == 0.0) continue;
      for (std::size_t i = 0; i < omega.support().size(); ++i)
        next(g.add(x, omega.support()[i])) += mu(x) * omega.weights()[i];
    }
    mu = std::move(next);
  }
  return mu;
}

double additive_energy(const WeightFn& omega, const CharacterSet& gamma, int m, EnergyMethod method) {
  if (m < 0) throw Error(ErrorKind::OutOfRange, "m must be nonnegative");
  if (m == 0) return 1.0;
  for (Character c : gamma)
    if (!omega.group().contains(c)) throw Error(ErrorKind::OutOfRange, "Gamma outside the dual group");
  const double tuples = std::pow(static_cast<double>(omega.support().size()), 2.0 * m);
  const bool feasible = tuples <= kEnumerationLimit;
  if (method == EnergyMethod::enumerate) {
    if (!feasible) throw Error(ErrorKind::TooLarge, "tuple enumeration exceeds 1e8 terms");
    return enumerate_energy(omega, gamma, m);
  }
  const double convolved = correlate_energy(omega.group(), convolution_power(omega, m), gamma);
  if (method == EnergyMethod::convolve || !feasible) return convolved;
  const double enumerated = enumerate_energy(omega, gamma, m);
  const double scale = std::pow(omega.l1(), 2.0 * m);
  if (std::abs(enumerated - convolved) > 1e-6 * std::max({scale, std::abs(enumerated), 1e-300}))
    throw Error(ErrorKind::Inconclusive, "energy evaluation paths disagree");
  return enumerated;
}

RestrictedDistribution::RestrictedDistribution(const WeightFn& omega, int t1, int t2)
    : group_(omega.group()), t1_(t1), t2_(t2) {
  const auto& sup = omega.support();
  const auto& w = omega.weights();
  const int s = static_cast<int>(sup.size());
  if (t1 < 0 || t2 < 0) throw Error(ErrorKind::OutOfRange, "restricted orders must be nonnegative");
  values_ = VectorXr::Zero(group_.order());
  if (t1 + t2 > s) return;
  const double terms = std::exp(std::lgamma(s + 1.0) - std::lgamma(t1 + 1.0) - std::lgamma(t2 + 1.0) -
                                std::lgamma(s - t1 - t2 + 1.0));
  if (terms > kEnumerationLimit) throw Error(ErrorKind::TooLarge, "restricted enumeration exceeds 1e8 terms");
  std::vector<long double> acc(group_.order(), 0.0L);
  std::function<void(int, int, int, Element, long double)> rec = [&](int i, int left1, int left2, Element sum,
                                                                     long double prod) {
    if (left1 == 0 && left2 == 0) {
      acc[sum] += prod;
      return;
    }
    if (s - i < left1 + left2) return;
    if (left1 > 0) rec(i + 1, left1 - 1, left2, group_.add(sum, sup[i]), prod * w[i]);
    if (left2 > 0) rec(i + 1, left1, left2 - 1, group_.sub(sum, sup[i]), prod * w[i]);
    rec(i + 1, left1, left2, sum, prod);
  };
  rec(0, t1, t2, 0, 1.0L);
  for (Element v = 0; v < group_.order(); ++v) values_(v) = static_cast<double>(acc[v]);
}

double RestrictedDistribution::at(const CharacterSet& gamma, Character lambda) const {
  long double total = 0;
  for (Character c : gamma) total += values_(group_.add(c, lambda));
  return static_cast<double>(total);
}

std::pair<double, Character> RestrictedDistribution::sup(const CharacterSet& gamma) const {
  std::pair<double, Character> best{-1.0, 0};
  for (Character lambda = 0; lambda < group_.order(); ++lambda) {
    const double v = at(gamma, lambda);
    if (v > best.first) best = {v, lambda};
  }
  return best;
}

double restricted_energy(const WeightFn& omega, const CharacterSet& gamma, int t1, int t2,
                         std::optional<Character> lambda) {
  if (t1 == 0 && t2 == 0 && !lambda) return 1.0;
  return RestrictedDistribution(omega, t1, t2).at(gamma, lambda.value_or(0));
}

BoundCheck en1_bound_check(const Group& g, const CharacterSet& s, const CharacterSet& gamma, int m, int t1,
                           int t2, std::optional<Character> lambda) {
  if (!(m >= t1 && m >= t2 && t1 >= 0 && t2 >= 0)) throw Error(ErrorKind::OutOfRange, "need m >= t1, t2 >= 0");
  const auto dim = gamma_dimension(g, s, gamma);
  BoundCheck out;
  out.lhs = restricted_energy(WeightFn::indicator(g, s), gamma, t1, t2, lambda);
  out.rhs = std::pow(4.0, dim.deficiency + m);
  out.holds = out.lhs <= out.rhs;
  return out;
}

BoundCheck en2_bound_check(const WeightFn& omega, const CharacterSet& gamma, int m) {
  if (m < 2) throw Error(ErrorKind::OutOfRange, "m must be at least 2");
  BoundCheck out;
  out.lhs = additive_energy(omega, gamma, m);
  const double l2 = omega.l2();
  long double sum = 0;
  for (int t1 = 0; t1 <= m; ++t1)
    for (int t2 = 0; t2 <= m; ++t2) {
      const double sup = RestrictedDistribution(omega, t1, t2).sup(gamma).first;
      if (sup <= 0) continue;
      const long double fact = std::exp(0.5L * (std::lgamma(m - t1 + 1.0L) + std::lgamma(m - t2 + 1.0L)));
      sum += std::pow(static_cast<long double>(l2), -(t1 + t2)) / fact * sup;
    }
  const long double mfact = std::tgamma(m + 1.0L);
  out.rhs = static_cast<double>(std::pow(2.0L, 4 * m) * mfact * mfact * std::pow(static_cast<long double>(l2), 2 * m) * sum);
  out.holds = out.lhs <= out.rhs * (1 + 1e-9);
  return out;
}

ShkredovCheck shkredov_check(const DensityFn& f, const ElementSet& b, const WeightFn& omega, double eta, int m,
                             double eps) {
  require_same_group(f.group(), omega.group());
  if (m < 1) throw Error(ErrorKind::OutOfRange, "m must be at least 1");
  if (!(eps >= 0.0 && eps <= 1.0)) throw Error(ErrorKind::OutOfRange, "eps must lie in [0, 1]");
  if (!is_subset(f.support(), b)) throw Error(ErrorKind::SupportViolation, "f must be supported on B");
  const auto spec = spectrum(f, eta);
  if (!is_subset(omega.support(), spec.members))
    throw Error(ErrorKind::SupportViolation, "omega is positive outside Delta_eta(f)");
  const CharacterSet delta_b = set_spectrum(f.group(), b, eps);
  ShkredovCheck out;
  out.energy = additive_energy(omega, delta_b, m);
  const double p = 2.0 * m / (2.0 * m - 1.0);
  const double ratio = eta * f.l1() / (f.lp(p) * std::pow(static_cast<double>(b.size()), 1.0 / (2.0 * m)));
  const double scale = std::pow(omega.l1(), 2.0 * m);
  out.lower = scale * (std::pow(ratio, 2.0 * m) - eps);
  out.holds = out.energy >= out.lower - 1e-9 * scale;
  return out;
}

bool en2_micro_inequality(int n) {
  using boost::multiprecision::cpp_int;
  if (n < 0 || n > 60) throw Error(ErrorKind::OutOfRange, "n must lie in [0, 60]");
  cpp_int nf = 1, hf = 1;
  for (int i = 2; i <= n; ++i) nf *= i;
  for (int i = 2; i <= n / 2; ++i) hf *= i;
  // n! <= 2 sqrt(n+1) 2^n (h!)^2  <=>  (n!)^2 <= 4 (n+1) 4^n (h!)^4, all terms positive.
  const cpp_int lhs = nf * nf;
  const cpp_int rhs = cpp_int(4) * (n + 1) * (cpp_int(1) << (2 * n)) * hf * hf * hf * hf;
  return lhs <= rhs;
}

}  // namespace spectral
