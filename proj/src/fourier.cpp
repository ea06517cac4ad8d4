#include "spectral/fourier.hpp"

#include <cmath>

namespace spectral {

DensityFn::DensityFn(Group group, VectorXc values) : group_(std::move(group)), values_(std::move(values)) {
  if (static_cast<std::uint32_t>(values_.size()) != group_.order())
    throw Error(ErrorKind::GroupMismatch, "values do not cover the group");
  for (Eigen::Index i = 0; i < values_.size(); ++i) {
    const double m = std::abs(values_(i));
    l1_ += m;
    l2_ += m * m;
    linf_ = std::max(linf_, m);
  }
  l2_ = std::sqrt(l2_);
}

DensityFn DensityFn::indicator(const Group& g, const ElementSet& set) {
  return real(g, indicator_vector(g, set));
}

DensityFn DensityFn::real(const Group& g, const VectorXr& values) {
  return DensityFn(g, values.cast<std::complex<double>>());
}

double DensityFn::lp(double p) const {
  if (!(p >= 1.0)) throw Error(ErrorKind::OutOfRange, "norm exponent must be >= 1");
  double acc = 0;
  for (Eigen::Index i = 0; i < values_.size(); ++i) acc += std::pow(std::abs(values_(i)), p);
  return std::pow(acc, 1.0 / p);
}

ElementSet DensityFn::support() const {
  ElementSet out;
  for (Eigen::Index i = 0; i < values_.size(); ++i)
    if (values_(i) != std::complex<double>(0)) out.push_back(static_cast<Element>(i));
  return out;
}

bool DensityFn::is_indicator() const {
  for (Eigen::Index i = 0; i < values_.size(); ++i) {
    const auto v = values_(i);
    if (v != std::complex<double>(0) && v != std::complex<double>(1)) return false;
  }
  return true;
}

double parseval_gap(const DensityFn& f, const DensityFn& g) {
  require_same_group(f.group(), g.group());
  // Eigen's dot conjugates its first argument: g.dot(f) = sum_x f(x) conj(g(x)).
  const std::complex<double> physical = g.values().dot(f.values());
  const VectorXc fh = f.transform();
  const VectorXc gh = g.transform();
  const std::complex<double> spectral = gh.dot(fh) / static_cast<double>(f.group().order());
  return std::abs(physical - spectral);
}

VectorXr indicator_vector(const Group& g, const ElementSet& s) {
  VectorXr v = VectorXr::Zero(g.order());
  for (Element x : s) v(x) = 1.0;
  return v;
}

}  // namespace spectral
