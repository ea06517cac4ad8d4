#pragma once

#include <optional>
#include <vector>

#include "spectral/error.hpp"
#include "spectral/group.hpp"

namespace spectral {

/// Width function rho: Gamma -> [0, 2], stored aligned with the sorted frequencies.
struct BohrWidth {
  CharacterSet freqs;
  std::vector<double> widths;
};

/// Slack for the strict membership |gamma(n) - 1| < rho(gamma).
inline constexpr double kBohrGuard = 1e-12;

/// B_rho(Gamma) in a prime cyclic group. Membership of every dilate B(lambda)
/// is decided by one number per element, the critical ratio
///   r(n) = max_gamma (|gamma(n) - 1| + guard) / rho(gamma),
/// with n in B(lambda) iff r(n) < lambda.
class BohrSetZ {
 public:
  /// Widths must lie in [0, 2]; throws WidthOutOfRange otherwise.
  BohrSetZ(Group g, BohrWidth width);

  const Group& group() const noexcept { return group_; }
  const BohrWidth& width() const noexcept { return width_; }
  const CharacterSet& freqs() const noexcept { return width_.freqs; }
  int rank() const noexcept { return static_cast<int>(width_.freqs.size()); }
  const ElementSet& members() const noexcept { return members_; }
  std::size_t size() const noexcept { return members_.size(); }
  bool contains(Element x) const { return ratio_[x] < 1.0; }
  double critical_ratio(Element x) const { return ratio_[x]; }

  /// B(lambda) = B_{lambda rho}(Gamma). Dilated widths may exceed 2.
  BohrSetZ dilate(double lambda) const;
  /// |B(lambda)| from the cached ratios.
  std::size_t size_at(double lambda) const;
  /// B_rho(c^{-1} Gamma), which equals c . B under the self-dual pairing.
  BohrSetZ scaled(std::int64_t c) const;

 private:
  BohrSetZ(Group g, BohrWidth width, bool check);

  Group group_;
  BohrWidth width_;
  std::vector<double> ratio_;
  std::vector<double> sorted_ratio_;
  ElementSet members_;
};

struct RegularityReport {
  bool regular = true;
  /// kappa maximizing | |B(1+kappa)| - |B| | / (2^6 d |kappa| |B|); 0 when none was tested.
  double worst_kappa = 0;
  double worst_ratio = 0;
};

/// Exact test at every breakpoint with |kappa| <= 2^-6 / d, plus a uniform grid.
RegularityReport is_regular(const BohrSetZ& b, int kappa_grid_size = 64);

/// Largest tested lambda in [1/2, 1] with B(lambda) regular; NotFound otherwise.
double find_regular_dilate(const BohrSetZ& b);

/// rho ^ rho' on Gamma u Gamma'.
BohrWidth meet_widths(const BohrWidth& rho, const BohrWidth& rho_prime);

struct SizeCheck {
  double lhs = 0;
  double rhs = 0;
  bool holds = false;
};

/// |B_{rho ^ rho'}(Gamma u Gamma')| >= prod (rho'/4) |B_rho(Gamma)|.
SizeCheck siz_check(const BohrSetZ& b, const BohrWidth& rho_prime);
/// |B(lambda)| >= lambda^{3d} |B|.
SizeCheck dilate_siz_check(const BohrSetZ& b, double lambda);

/// c . (B(lambda)) == (c . B)(lambda) by enumeration.
bool dilate_commutes(const BohrSetZ& b, std::int64_t c, double lambda);

/// Bohr space B(Gamma) = {x : gamma(x) = 1 for all gamma in Gamma} in F_p^n,
/// with its annihilator [B] = span(Gamma).
class BohrSpaceF {
 public:
  BohrSpaceF(Group g, CharacterSet gamma);

  const Group& group() const noexcept { return group_; }
  const CharacterSet& generators() const noexcept { return gamma_; }
  /// Row-reduced basis of span(Gamma).
  const CharacterSet& basis() const noexcept { return basis_; }
  int rank() const noexcept { return static_cast<int>(basis_.size()); }
  const ElementSet& members() const noexcept { return members_; }
  const CharacterSet& annihilator() const noexcept { return annihilator_; }
  std::size_t size() const noexcept { return members_.size(); }
  bool contains(Element x) const;

  /// c . B, again a Bohr space of the same rank.
  BohrSpaceF scaled(std::int64_t c) const;
  /// The Bohr space of Gamma u extra.
  BohrSpaceF refine(const CharacterSet& extra) const;

 private:
  Group group_;
  CharacterSet gamma_;
  CharacterSet basis_;
  ElementSet members_;
  CharacterSet annihilator_;
};

/// Rank of a set of vectors over F_p, by row reduction.
int f_rank(const Group& g, const CharacterSet& vectors);

}  // namespace spectral
