#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "spectral/error.hpp"
#include "spectral/group.hpp"

namespace spectral {

/// A character list that may repeat entries; <Lambda> for a list is the set of
/// signed sums with one sign per entry.
using CharacterList = std::vector<Character>;

/// Public span() refuses more generators than this.
inline constexpr std::size_t kMaxSpanGenerators = 20;

/// <Lambda> = { sum eps_i lambda_i : eps_i in {-1, 0, 1} }, <{}> = {0}.
CharacterSet span(const Group& g, const CharacterList& lambda);

struct CoverWitness {
  Character element = 0;
  Character gamma1 = 0;
  Character gamma2 = 0;
  /// One sign per generator of Lambda, in order.
  std::vector<std::int8_t> signs;
};

struct CoverResult {
  bool covered = true;
  std::vector<CoverWitness> witnesses;
  CharacterSet uncovered;
};

/// Decides S subset Gamma - Gamma + <Lambda>, with a witness for every covered element.
CoverResult is_covered(const Group& g, const CharacterSet& s, const CharacterSet& gamma,
                       const CharacterList& lambda);

/// s == gamma1 - gamma2 + sum signs_i lambda_i, with gamma1, gamma2 in Gamma.
bool check_witness(const Group& g, const CoverWitness& w, const CharacterSet& gamma,
                   const CharacterList& lambda);

struct DissociationViolation {
  int k = 0;
  Character lambda = 0;
  std::uint64_t count = 0;
};

struct DissociationResult {
  bool dissociated = true;
  /// Smallest k, then smallest lambda, with more than 2^k pairs.
  std::optional<DissociationViolation> violation;
};

/// Pair counts C_k(v) = #{disjoint (D1, D2) in Delta : |D1 u D2| = k, sum D1 - sum D2 = v},
/// maintained incrementally as elements are added. Adding gamma maps
///   C'_k(v) = C_k(v) + C_{k-1}(v - gamma) + C_{k-1}(v + gamma).
class PairCounts {
 public:
  PairCounts(const Group& g, const CharacterSet& gamma);

  std::size_t size() const noexcept { return members_.size(); }
  const CharacterList& members() const noexcept { return members_; }
  PairCounts with(Character gamma) const;
  /// First violation of the dissociation bound, if any.
  std::optional<DissociationViolation> violation() const;

 private:
  Group group_;
  std::shared_ptr<const CharacterSet> gamma_;
  CharacterList members_;
  std::vector<std::vector<std::uint64_t>> counts_;
};

/// Bounds the work of a single dissociation test: order * (|Delta| + 1) cells.
inline constexpr std::uint64_t kMaxPairCountCells = std::uint64_t{1} << 25;

DissociationResult is_dissociated(const Group& g, const CharacterSet& delta, const CharacterSet& gamma);

/// Exhaustive dimension search is refused above this many elements.
inline constexpr std::size_t kMaxDimensionSet = 24;

struct DissociationReport {
  CharacterSet set;
  CharacterSet gamma;
  int dimension = 0;
  /// Lexicographically first dissociated subset of maximum size.
  CharacterSet witness;
  int deficiency = 0;
};

DissociationReport gamma_dimension(const Group& g, const CharacterSet& s, const CharacterSet& gamma);

/// Grows a dissociated subset of s by scanning `order` and keeping every
/// element whose addition stays dissociated.
CharacterSet greedy_dissociated(const Group& g, const CharacterList& order, const CharacterSet& gamma);

struct TechlemmaPartition {
  CharacterSet lambda0;
  CharacterSet lambda1;
  int dimension = 0;
  /// The maximum dissociated subset Delta_0 used in the construction.
  CharacterSet delta0;
  /// Delta_0 listed twice; Lambda_0 lies in Gamma - Gamma + <certificate>.
  CharacterList certificate;
  CoverResult cover;
};

/// Partition of the dual group into a part 2r-covered by Gamma and a part that
/// raises the dimension of Delta, r = dim_Gamma(Delta). Materializes the dual
/// group, so the order is capped at 2^10.
TechlemmaPartition techlemma_partition(const Group& g, const CharacterSet& delta, const CharacterSet& gamma);

}  // namespace spectral
