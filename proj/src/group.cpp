#include "spectral/group.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <sstream>
#include <utility>

#include "spectral/error.hpp"

namespace spectral {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonPrimeModulus: return "NonPrimeModulus";
    case ErrorKind::DimensionZero: return "DimensionZero";
    case ErrorKind::GroupMismatch: return "GroupMismatch";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::EmptyFunction: return "EmptyFunction";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::SupportViolation: return "SupportViolation";
    case ErrorKind::NotSymmetric: return "NotSymmetric";
    case ErrorKind::HypothesisViolated: return "HypothesisViolated";
    case ErrorKind::HypothesisUnmet: return "HypothesisUnmet";
    case ErrorKind::Inconclusive: return "Inconclusive";
    case ErrorKind::Exhausted: return "Exhausted";
    case ErrorKind::WidthOutOfRange: return "WidthOutOfRange";
    case ErrorKind::NotFound: return "NotFound";
    case ErrorKind::IncrementNotFound: return "IncrementNotFound";
    case ErrorKind::CoefficientNotUnit: return "CoefficientNotUnit";
    case ErrorKind::StepFailure: return "StepFailure";
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::UnknownSuite: return "UnknownSuite";
    case ErrorKind::ConfigInvalid: return "ConfigInvalid";
  }
  return "Unknown";
}

std::uint64_t max_group_order() {
  if (const char* env = std::getenv("SPECTRAL_LAB_MAX_ORDER")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && v > 0) return std::min<std::uint64_t>(v, kHardMaxOrder);
  }
  return kHardMaxOrder;
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d * d <= n; d += 2)
    if (n % d == 0) return false;
  return true;
}

std::uint64_t next_prime(std::uint64_t n) {
  std::uint64_t p = n + 1;
  while (!is_prime(p)) ++p;
  return p;
}

Group::Group(GroupKind kind, std::uint32_t exponent, int dim)
    : kind_(kind), exponent_(exponent), dim_(dim), order_(1) {
  for (int i = 0; i < dim; ++i) order_ *= exponent;
  auto roots = std::make_shared<std::vector<std::complex<double>>>(exponent);
  for (std::uint32_t k = 0; k < exponent; ++k) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(k) / exponent;
    (*roots)[k] = {std::cos(theta), std::sin(theta)};
  }
  roots_ = std::move(roots);
}

Group Group::cyclic(std::uint64_t modulus) {
  if (!is_prime(modulus))
    throw Error(ErrorKind::NonPrimeModulus, "cyclic modulus " + std::to_string(modulus) + " is not prime");
  if (modulus > max_group_order())
    throw Error(ErrorKind::TooLarge, "group order " + std::to_string(modulus) + " exceeds cap");
  return Group(GroupKind::cyclic, static_cast<std::uint32_t>(modulus), 1);
}

Group Group::vector(std::uint64_t base, int dim) {
  if (dim < 1) throw Error(ErrorKind::DimensionZero, "vector group needs dim >= 1");
  if (!is_prime(base))
    throw Error(ErrorKind::NonPrimeModulus, "vector base " + std::to_string(base) + " is not prime");
  std::uint64_t order = 1;
  for (int i = 0; i < dim; ++i) {
    order *= base;
    if (order > max_group_order())
      throw Error(ErrorKind::TooLarge, "group order exceeds cap");
  }
  return Group(GroupKind::vector, static_cast<std::uint32_t>(base), dim);
}

Element Group::add(Element a, Element b) const noexcept {
  if (kind_ == GroupKind::cyclic) {
    const std::uint32_t s = a + b;
    return s >= exponent_ ? s - exponent_ : s;
  }
  Element out = 0, place = 1;
  for (int i = 0; i < dim_; ++i) {
    const std::uint32_t da = a % exponent_, db = b % exponent_;
    a /= exponent_;
    b /= exponent_;
    std::uint32_t s = da + db;
    if (s >= exponent_) s -= exponent_;
    out += s * place;
    place *= exponent_;
  }
  return out;
}

Element Group::neg(Element a) const noexcept {
  if (kind_ == GroupKind::cyclic) return a == 0 ? 0 : exponent_ - a;
  Element out = 0, place = 1;
  for (int i = 0; i < dim_; ++i) {
    const std::uint32_t da = a % exponent_;
    a /= exponent_;
    out += (da == 0 ? 0 : exponent_ - da) * place;
    place *= exponent_;
  }
  return out;
}

Element Group::sub(Element a, Element b) const noexcept { return add(a, neg(b)); }

std::uint32_t Group::reduce_scalar(std::int64_t c) const noexcept {
  const std::int64_t e = exponent_;
  return static_cast<std::uint32_t>(((c % e) + e) % e);
}

std::uint32_t Group::inverse_scalar(std::int64_t c) const {
  const std::uint32_t r = reduce_scalar(c);
  if (r == 0) throw Error(ErrorKind::CoefficientNotUnit, "scalar " + std::to_string(c) + " is not a unit");
  // Extended Euclid over the prime exponent.
  std::int64_t t = 0, new_t = 1, m = exponent_, new_m = r;
  while (new_m != 0) {
    const std::int64_t q = m / new_m;
    t = std::exchange(new_t, t - q * new_t);
    m = std::exchange(new_m, m - q * new_m);
  }
  return reduce_scalar(t);
}

Element Group::scale(std::int64_t c, Element a) const noexcept {
  const std::uint64_t r = reduce_scalar(c);
  if (kind_ == GroupKind::cyclic) return static_cast<Element>(r * a % exponent_);
  Element out = 0, place = 1;
  for (int i = 0; i < dim_; ++i) {
    const std::uint64_t da = a % exponent_;
    a /= exponent_;
    out += static_cast<Element>(r * da % exponent_) * place;
    place *= exponent_;
  }
  return out;
}

std::uint32_t Group::pairing(Character gamma, Element x) const noexcept {
  if (kind_ == GroupKind::cyclic)
    return static_cast<std::uint32_t>(static_cast<std::uint64_t>(gamma) * x % exponent_);
  std::uint64_t acc = 0;
  for (int i = 0; i < dim_; ++i) {
    acc += static_cast<std::uint64_t>(gamma % exponent_) * (x % exponent_);
    gamma /= exponent_;
    x /= exponent_;
  }
  return static_cast<std::uint32_t>(acc % exponent_);
}

double Group::distance_from_one(Character gamma, Element x) const noexcept {
  const std::uint32_t k = pairing(gamma, x);
  const std::uint32_t folded = std::min(k, exponent_ - k);
  return 2.0 * std::sin(std::numbers::pi * static_cast<double>(folded) / exponent_);
}

std::vector<int> Group::coords(Element a) const {
  std::vector<int> out(static_cast<std::size_t>(dim_));
  for (int i = 0; i < dim_; ++i) {
    out[static_cast<std::size_t>(i)] = static_cast<int>(a % exponent_);
    a /= exponent_;
  }
  return out;
}

Element Group::from_coords(std::span<const int> coords) const {
  if (static_cast<int>(coords.size()) != dim_)
    throw Error(ErrorKind::InvalidInput, "coordinate vector has wrong length");
  Element out = 0, place = 1;
  for (int c : coords) {
    if (c < 0 || c >= static_cast<int>(exponent_))
      throw Error(ErrorKind::OutOfRange, "coordinate out of range");
    out += static_cast<Element>(c) * place;
    place *= exponent_;
  }
  return out;
}

std::string Group::describe() const {
  std::ostringstream os;
  if (kind_ == GroupKind::cyclic)
    os << "Z_" << exponent_;
  else
    os << "F_" << exponent_ << "^" << dim_;
  return os.str();
}

void require_same_group(const Group& a, const Group& b) {
  if (!(a == b)) throw Error(ErrorKind::GroupMismatch, a.describe() + " vs " + b.describe());
}

ElementSet make_set(std::vector<Element> elements) {
  std::sort(elements.begin(), elements.end());
  elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
  return elements;
}

ElementSet checked_set(const Group& g, const std::vector<std::int64_t>& elements) {
  ElementSet out;
  out.reserve(elements.size());
  for (std::int64_t v : elements) {
    if (!g.contains(v))
      throw Error(ErrorKind::OutOfRange, "element " + std::to_string(v) + " outside " + g.describe());
    out.push_back(static_cast<Element>(v));
  }
  std::sort(out.begin(), out.end());
  if (std::adjacent_find(out.begin(), out.end()) != out.end())
    throw Error(ErrorKind::InvalidInput, "duplicate element in set");
  return out;
}

bool contains(const ElementSet& s, Element x) { return std::binary_search(s.begin(), s.end(), x); }

ElementSet all_elements(const Group& g) {
  ElementSet out(g.order());
  for (Element i = 0; i < g.order(); ++i) out[i] = i;
  return out;
}

std::vector<std::uint8_t> indicator_mask(const Group& g, const ElementSet& s) {
  std::vector<std::uint8_t> mask(g.order(), 0);
  for (Element x : s) mask[x] = 1;
  return mask;
}

ElementSet from_mask(const std::vector<std::uint8_t>& mask) {
  ElementSet out;
  for (std::size_t i = 0; i < mask.size(); ++i)
    if (mask[i]) out.push_back(static_cast<Element>(i));
  return out;
}

ElementSet set_union(const ElementSet& a, const ElementSet& b) {
  ElementSet out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

ElementSet set_intersection(const ElementSet& a, const ElementSet& b) {
  ElementSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

ElementSet set_difference(const ElementSet& a, const ElementSet& b) {
  ElementSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

bool is_subset(const ElementSet& a, const ElementSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

ElementSet translate(const Group& g, const ElementSet& s, Element t) {
  std::vector<Element> out;
  out.reserve(s.size());
  for (Element x : s) out.push_back(g.add(x, t));
  return make_set(std::move(out));
}

ElementSet dilate(const Group& g, const ElementSet& s, std::int64_t c) {
  std::vector<Element> out;
  out.reserve(s.size());
  for (Element x : s) out.push_back(g.scale(c, x));
  return make_set(std::move(out));
}

ElementSet negate(const Group& g, const ElementSet& s) { return dilate(g, s, -1); }

ElementSet sumset(const Group& g, const ElementSet& a, const ElementSet& b) {
  std::vector<std::uint8_t> mask(g.order(), 0);
  for (Element x : a)
    for (Element y : b) mask[g.add(x, y)] = 1;
  return from_mask(mask);
}

ElementSet difference_set(const Group& g, const ElementSet& a, const ElementSet& b) {
  return sumset(g, a, negate(g, b));
}

ElementSet shift(const Group& g, const ElementSet& s, Element lambda) { return translate(g, s, lambda); }

bool is_symmetric(const Group& g, const ElementSet& s) {
  for (Element x : s)
    if (!contains(s, g.neg(x))) return false;
  return true;
}

std::size_t sumset_excess(const Group& g, const ElementSet& x, const ElementSet& y,
                          const ElementSet& z) {
  const auto in_z = indicator_mask(g, z);
  std::vector<std::uint8_t> seen(g.order(), 0);
  std::size_t count = 0;
  for (Element a : x)
    for (Element b : y) {
      const Element s = g.add(a, b);
      if (!seen[s]) {
        seen[s] = 1;
        if (!in_z[s]) ++count;
      }
    }
  return count;
}

}  // namespace spectral
