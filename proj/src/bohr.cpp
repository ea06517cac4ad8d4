#include "spectral/bohr.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <limits>

#include "spectral/error.hpp"

namespace spectral {

BohrSetZ::BohrSetZ(Group g, BohrWidth width) : BohrSetZ(std::move(g), std::move(width), true) {}

BohrSetZ::BohrSetZ(Group g, BohrWidth width, bool check) : group_(std::move(g)), width_(std::move(width)) {
  if (!group_.is_cyclic()) throw Error(ErrorKind::InvalidInput, "Bohr sets with widths need a cyclic group");
  if (width_.freqs.size() != width_.widths.size()) throw Error(ErrorKind::InvalidInput, "one width per frequency");
  std::vector<std::size_t> order(width_.freqs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return width_.freqs[a] < width_.freqs[b]; });
  BohrWidth sorted;
  for (std::size_t i : order) {
    const Character f = width_.freqs[i];
    const double w = width_.widths[i];
    if (!group_.contains(f)) throw Error(ErrorKind::OutOfRange, "frequency outside the dual group");
    if (!sorted.freqs.empty() && sorted.freqs.back() == f) throw Error(ErrorKind::InvalidInput, "repeated frequency");
    if (check && !(w >= 0.0 && w <= 2.0)) throw Error(ErrorKind::WidthOutOfRange, "widths must lie in [0, 2]");
    if (!(w >= 0.0) || !std::isfinite(w)) throw Error(ErrorKind::WidthOutOfRange, "widths must be finite and nonnegative");
    sorted.freqs.push_back(f);
    sorted.widths.push_back(w);
  }
  width_ = std::move(sorted);
  const Element n = group_.order();
  ratio_.assign(n, 0.0);
  for (Element x = 0; x < n; ++x) {
    double r = 0;
    for (std::size_t i = 0; i < width_.freqs.size(); ++i) {
      const double dist = group_.distance_from_one(width_.freqs[i], x) + kBohrGuard;
      const double w = width_.widths[i];
      r = std::max(r, w > 0 ? dist / w : std::numeric_limits<double>::infinity());
    }
    ratio_[x] = r;
    if (r < 1.0) members_.push_back(x);
  }
  sorted_ratio_ = ratio_;
  std::sort(sorted_ratio_.begin(), sorted_ratio_.end());
}

BohrSetZ BohrSetZ::dilate(double lambda) const {
  if (!(lambda > 0.0)) throw Error(ErrorKind::OutOfRange, "dilation factor must be positive");
  BohrWidth w = width_;
  for (double& x : w.widths) x *= lambda;
  return BohrSetZ(group_, std::move(w), false);
}

std::size_t BohrSetZ::size_at(double lambda) const {
  return static_cast<std::size_t>(std::lower_bound(sorted_ratio_.begin(), sorted_ratio_.end(), lambda) -
                                  sorted_ratio_.begin());
}

BohrSetZ BohrSetZ::scaled(std::int64_t c) const {
  if (!group_.is_unit(c)) throw Error(ErrorKind::CoefficientNotUnit, "dilation by a non-unit");
  const std::int64_t inv = group_.inverse_scalar(c);
  BohrWidth w;
  for (std::size_t i = 0; i < width_.freqs.size(); ++i) {
    w.freqs.push_back(group_.scale(inv, width_.freqs[i]));
    w.widths.push_back(width_.widths[i]);
  }
  return BohrSetZ(group_, std::move(w), false);
}

namespace {

/// Regularity of B(lambda) read off the sorted ratios of B: an element of
/// ratio r has ratio r / lambda in B(lambda).
RegularityReport regular_from_ratios(const std::vector<double>& sorted, double lambda, int d, int grid) {
  RegularityReport rep;
  if (d == 0) return rep;
  const double kmax = std::ldexp(1.0, -6) / d;
  const double slope = std::ldexp(1.0, 6) * d;
  auto count_below = [&](double t) {  // #{r/lambda < t}
    return static_cast<double>(std::lower_bound(sorted.begin(), sorted.end(), t * lambda) - sorted.begin());
  };
  auto count_at_most = [&](double t) {  // #{r/lambda <= t}
    return static_cast<double>(std::upper_bound(sorted.begin(), sorted.end(), t * lambda) - sorted.begin());
  };
  const double size = count_below(1.0);
  auto record = [&](double kappa, double diff) {
    const double allowed = slope * std::abs(kappa) * size;
    const double ratio = allowed > 0 ? diff / allowed : (diff > 0 ? std::numeric_limits<double>::infinity() : 0.0);
    if (ratio > rep.worst_ratio) {
      rep.worst_ratio = ratio;
      rep.worst_kappa = kappa;
    }
    if (diff > allowed) rep.regular = false;
  };
  // kappa > 0: the excess #{1 <= r < 1 + kappa} is worst just above each breakpoint t.
  const auto hi_begin = std::lower_bound(sorted.begin(), sorted.end(), lambda);
  for (auto it = hi_begin; it != sorted.end(); ++it) {
    const double t = *it / lambda;
    if (t - 1.0 >= kmax) break;
    if (it + 1 != sorted.end() && *(it + 1) == *it) continue;
    record(t - 1.0, count_at_most(t) - size);
  }
  // kappa < 0: the deficit #{1 + kappa <= r < 1} is worst exactly at each breakpoint.
  for (auto it = hi_begin; it != sorted.begin();) {
    --it;
    const double t = *it / lambda;
    if (1.0 - t > kmax) break;
    record(t - 1.0, size - count_below(t));
  }
  for (int i = 1; i <= grid; ++i) {
    const double kappa = kmax * i / grid;
    record(kappa, count_below(1.0 + kappa) - size);
    record(-kappa, size - count_below(1.0 - kappa));
  }
  return rep;
}

}  // namespace

RegularityReport is_regular(const BohrSetZ& b, int kappa_grid_size) {
  std::vector<double> sorted(b.group().order());
  for (Element x = 0; x < b.group().order(); ++x) sorted[x] = b.critical_ratio(x);
  std::sort(sorted.begin(), sorted.end());
  return regular_from_ratios(sorted, 1.0, b.rank(), kappa_grid_size);
}

double find_regular_dilate(const BohrSetZ& b) {
  std::vector<double> sorted(b.group().order());
  for (Element x = 0; x < b.group().order(); ++x) sorted[x] = b.critical_ratio(x);
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> candidates = {1.0};
  // Geometric midpoints of the breakpoint-free intervals of [1/2, 1], descending.
  std::vector<double> cuts = {1.0};
  for (auto it = sorted.rbegin(); it != sorted.rend(); ++it)
    if (*it < 1.0 && *it > 0.5 && *it != cuts.back()) cuts.push_back(*it);
  cuts.push_back(0.5);
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) candidates.push_back(std::sqrt(cuts[i] * cuts[i + 1]));
  candidates.push_back(0.5);
  for (int i = 1; i < 4096; ++i) candidates.push_back(std::pow(0.5, i / 4096.0));
  for (double lambda : candidates) {
    if (regular_from_ratios(sorted, lambda, b.rank(), 64).regular) {
      // Confirm on the materialized dilate.
      if (is_regular(b.dilate(lambda)).regular) return lambda;
    }
  }
  throw Error(ErrorKind::NotFound, "no regular dilate in [1/2, 1]");
}

BohrWidth meet_widths(const BohrWidth& rho, const BohrWidth& rho_prime) {
  BohrWidth out;
  std::size_t i = 0, j = 0;
  while (i < rho.freqs.size() || j < rho_prime.freqs.size()) {
    if (j == rho_prime.freqs.size() || (i < rho.freqs.size() && rho.freqs[i] < rho_prime.freqs[j])) {
      out.freqs.push_back(rho.freqs[i]);
      out.widths.push_back(rho.widths[i++]);
    } else if (i == rho.freqs.size() || rho_prime.freqs[j] < rho.freqs[i]) {
      out.freqs.push_back(rho_prime.freqs[j]);
      out.widths.push_back(rho_prime.widths[j++]);
    } else {
      out.freqs.push_back(rho.freqs[i]);
      out.widths.push_back(std::min(rho.widths[i++], rho_prime.widths[j++]));
    }
  }
  return out;
}

SizeCheck siz_check(const BohrSetZ& b, const BohrWidth& rho_prime) {
  const BohrSetZ joint(b.group(), meet_widths(b.width(), rho_prime));
  SizeCheck out;
  out.lhs = static_cast<double>(joint.size());
  double prod = 1;
  for (double w : rho_prime.widths) prod *= w / 4;
  out.rhs = prod * static_cast<double>(b.size());
  out.holds = out.lhs >= out.rhs;
  return out;
}

SizeCheck dilate_siz_check(const BohrSetZ& b, double lambda) {
  SizeCheck out;
  out.lhs = static_cast<double>(b.size_at(lambda));
  out.rhs = std::pow(lambda, 3.0 * b.rank()) * static_cast<double>(b.size());
  out.holds = out.lhs >= out.rhs;
  return out;
}

bool dilate_commutes(const BohrSetZ& b, std::int64_t c, double lambda) {
  const ElementSet left = dilate(b.group(), b.dilate(lambda).members(), c);
  const ElementSet right = b.scaled(c).dilate(lambda).members();
  return left == right && dilate(b.group(), b.members(), c) == b.scaled(c).members();
}

namespace {

using IntMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

/// Reduced row echelon form over F_p; returns the nonzero rows.
IntMatrix row_reduce(IntMatrix m, std::int64_t p) {
  const auto inverse = [p](std::int64_t a) {
    std::int64_t r = 1, e = p - 2, b = a % p;
    for (; e > 0; e >>= 1, b = b * b % p)
      if (e & 1) r = r * b % p;
    return r;
  };
  Eigen::Index row = 0;
  for (Eigen::Index col = 0; col < m.cols() && row < m.rows(); ++col) {
    Eigen::Index pivot = row;
    while (pivot < m.rows() && m(pivot, col) == 0) ++pivot;
    if (pivot == m.rows()) continue;
    m.row(pivot).swap(m.row(row));
    const std::int64_t inv = inverse(m(row, col));
    m.row(row) = m.row(row).unaryExpr([&](std::int64_t v) { return v * inv % p; });
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      if (r == row || m(r, col) == 0) continue;
      const std::int64_t f = m(r, col);
      m.row(r) = (m.row(r) - f * m.row(row)).unaryExpr([&](std::int64_t v) { return ((v % p) + p) % p; });
    }
    ++row;
  }
  return m.topRows(row);
}

IntMatrix as_matrix(const Group& g, const CharacterSet& vectors) {
  IntMatrix m(static_cast<Eigen::Index>(vectors.size()), g.dim());
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    const auto c = g.coords(vectors[i]);
    for (int j = 0; j < g.dim(); ++j) m(static_cast<Eigen::Index>(i), j) = c[static_cast<std::size_t>(j)];
  }
  return m;
}

}  // namespace

int f_rank(const Group& g, const CharacterSet& vectors) {
  if (vectors.empty()) return 0;
  return static_cast<int>(row_reduce(as_matrix(g, vectors), g.base()).rows());
}

BohrSpaceF::BohrSpaceF(Group g, CharacterSet gamma) : group_(std::move(g)), gamma_(make_set(std::move(gamma))) {
  if (group_.is_cyclic()) throw Error(ErrorKind::InvalidInput, "Bohr spaces need a vector group");
  for (Character c : gamma_)
    if (!group_.contains(c)) throw Error(ErrorKind::OutOfRange, "frequency outside the dual group");
  if (!gamma_.empty()) {
    const IntMatrix rref = row_reduce(as_matrix(group_, gamma_), group_.base());
    for (Eigen::Index r = 0; r < rref.rows(); ++r) {
      std::vector<int> c(static_cast<std::size_t>(group_.dim()));
      for (int j = 0; j < group_.dim(); ++j) c[static_cast<std::size_t>(j)] = static_cast<int>(rref(r, j));
      basis_.push_back(group_.from_coords(c));
    }
  }
  for (Element x = 0; x < group_.order(); ++x) {
    bool in = true;
    for (Character c : basis_) in = in && group_.pairing(c, x) == 0;
    if (in) members_.push_back(x);
  }
  std::vector<Element> span = {0};
  for (Character c : basis_) {
    const std::size_t before = span.size();
    for (std::uint32_t k = 1; k < group_.base(); ++k)
      for (std::size_t i = 0; i < before; ++i) span.push_back(group_.add(span[i], group_.scale(k, c)));
  }
  annihilator_ = make_set(std::move(span));
  basis_ = make_set(std::move(basis_));
}

bool BohrSpaceF::contains(Element x) const { return std::binary_search(members_.begin(), members_.end(), x); }

BohrSpaceF BohrSpaceF::scaled(std::int64_t c) const {
  if (!group_.is_unit(c)) throw Error(ErrorKind::CoefficientNotUnit, "dilation by a non-unit");
  CharacterSet g;
  const std::int64_t inv = group_.inverse_scalar(c);
  for (Character x : gamma_) g.push_back(group_.scale(inv, x));
  return BohrSpaceF(group_, g);
}

BohrSpaceF BohrSpaceF::refine(const CharacterSet& extra) const { return BohrSpaceF(group_, set_union(gamma_, extra)); }

}  // namespace spectral
