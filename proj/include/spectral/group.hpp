#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace spectral {

/// Group elements are indexed by integers in [0, order). For the vector group
/// F_p^n the index is the little-endian base-p expansion of the coordinates.
/// Characters are indexed by the same integers through the self-dual pairing
///   cyclic: gamma_a(x) = exp(2 pi i a x / N)
///   vector: gamma_a(x) = exp(2 pi i <a, x> / p)
using Element = std::uint32_t;
using Character = Element;

/// Sorted, duplicate-free list of elements.
using ElementSet = std::vector<Element>;
using CharacterSet = ElementSet;

enum class GroupKind { cyclic, vector };

inline constexpr std::uint64_t kHardMaxOrder = std::uint64_t{1} << 20;

/// Upper bound on group order, from SPECTRAL_LAB_MAX_ORDER when set.
std::uint64_t max_group_order();

bool is_prime(std::uint64_t n);

/// Smallest prime strictly greater than n.
std::uint64_t next_prime(std::uint64_t n);

class Group {
 public:
  /// Z_N for prime N. Throws NonPrimeModulus.
  static Group cyclic(std::uint64_t modulus);
  /// F_p^n for prime p, n >= 1. Throws NonPrimeModulus / DimensionZero.
  static Group vector(std::uint64_t base, int dim);

  GroupKind kind() const noexcept { return kind_; }
  bool is_cyclic() const noexcept { return kind_ == GroupKind::cyclic; }
  std::uint32_t order() const noexcept { return order_; }
  /// N for Z_N and p for F_p^n: every character value is a power of
  /// exp(2 pi i / exponent()).
  std::uint32_t exponent() const noexcept { return exponent_; }
  std::uint32_t base() const noexcept { return exponent_; }
  int dim() const noexcept { return dim_; }

  Element add(Element a, Element b) const noexcept;
  Element sub(Element a, Element b) const noexcept;
  Element neg(Element a) const noexcept;
  /// Scalar action by an integer (reduced mod N or mod p).
  Element scale(std::int64_t c, Element a) const noexcept;
  /// Reduces an integer scalar into [0, exponent).
  std::uint32_t reduce_scalar(std::int64_t c) const noexcept;
  bool is_unit(std::int64_t c) const noexcept { return reduce_scalar(c) != 0; }
  /// Multiplicative inverse of a unit scalar modulo the exponent.
  std::uint32_t inverse_scalar(std::int64_t c) const;

  /// <gamma, x> in [0, exponent).
  std::uint32_t pairing(Character gamma, Element x) const noexcept;
  std::complex<double> character(Character gamma, Element x) const noexcept {
    return roots_->at(pairing(gamma, x));
  }
  /// |1 - gamma(x)| computed as 2|sin(pi k / e)| from the exact pairing.
  double distance_from_one(Character gamma, Element x) const noexcept;
  /// exp(2 pi i k / exponent) for k in [0, exponent).
  const std::vector<std::complex<double>>& roots() const noexcept { return *roots_; }

  std::vector<int> coords(Element a) const;
  Element from_coords(std::span<const int> coords) const;
  bool contains(std::int64_t value) const noexcept { return value >= 0 && value < order_; }

  std::string describe() const;

  friend bool operator==(const Group& a, const Group& b) noexcept {
    return a.kind_ == b.kind_ && a.exponent_ == b.exponent_ && a.dim_ == b.dim_;
  }

 private:
  Group(GroupKind kind, std::uint32_t exponent, int dim);

  GroupKind kind_;
  std::uint32_t exponent_;
  int dim_;
  std::uint32_t order_;
  std::shared_ptr<const std::vector<std::complex<double>>> roots_;
};

/// Throws GroupMismatch unless the groups agree.
void require_same_group(const Group& a, const Group& b);

// Set helpers ---------------------------------------------------------------

/// Sorts and deduplicates.
ElementSet make_set(std::vector<Element> elements);
/// Validates range and rejects duplicates (the file format contract).
ElementSet checked_set(const Group& g, const std::vector<std::int64_t>& elements);
bool contains(const ElementSet& s, Element x);
ElementSet all_elements(const Group& g);
std::vector<std::uint8_t> indicator_mask(const Group& g, const ElementSet& s);
ElementSet from_mask(const std::vector<std::uint8_t>& mask);

ElementSet set_union(const ElementSet& a, const ElementSet& b);
ElementSet set_intersection(const ElementSet& a, const ElementSet& b);
ElementSet set_difference(const ElementSet& a, const ElementSet& b);
bool is_subset(const ElementSet& a, const ElementSet& b);

ElementSet translate(const Group& g, const ElementSet& s, Element t);
ElementSet dilate(const Group& g, const ElementSet& s, std::int64_t c);
ElementSet negate(const Group& g, const ElementSet& s);
/// A + B.
ElementSet sumset(const Group& g, const ElementSet& a, const ElementSet& b);
/// A - B.
ElementSet difference_set(const Group& g, const ElementSet& a, const ElementSet& b);
/// Gamma + lambda.
ElementSet shift(const Group& g, const ElementSet& s, Element lambda);
bool is_symmetric(const Group& g, const ElementSet& s);

/// |(X + Y) \ Z|, the quantity behind every "approximately closed" hypothesis.
std::size_t sumset_excess(const Group& g, const ElementSet& x, const ElementSet& y,
                          const ElementSet& z);

}  // namespace spectral
