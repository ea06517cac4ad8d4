#include "spectral/dissociation.hpp"

#include <algorithm>
#include <functional>

#include "spectral/error.hpp"

namespace spectral {
namespace {

/// Layered reachability over <Lambda>: generator i may only extend elements
/// reached using generators < i, so each generator is used at most once.
struct SpanTable {
  std::vector<std::int32_t> generator;  // -2 unreached, -1 root
  std::vector<Element> parent;
  std::vector<std::int8_t> sign;
  ElementSet members;
};

SpanTable build_span(const Group& g, const CharacterList& lambda) {
  for (Character l : lambda)
    if (!g.contains(l)) throw Error(ErrorKind::OutOfRange, "generator outside the dual group");
  SpanTable t;
  t.generator.assign(g.order(), -2);
  t.parent.assign(g.order(), 0);
  t.sign.assign(g.order(), 0);
  t.generator[0] = -1;
  std::vector<Element> reached = {0};
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    const std::size_t before = reached.size();
    for (std::size_t j = 0; j < before; ++j) {
      const Element x = reached[j];
      for (std::int8_t s : {std::int8_t{1}, std::int8_t{-1}}) {
        const Element y = s > 0 ? g.add(x, lambda[i]) : g.sub(x, lambda[i]);
        if (t.generator[y] != -2) continue;
        t.generator[y] = static_cast<std::int32_t>(i);
        t.parent[y] = x;
        t.sign[y] = s;
        reached.push_back(y);
      }
    }
  }
  t.members = make_set(std::move(reached));
  return t;
}

std::vector<std::int8_t> signs_of(const SpanTable& t, Element x, std::size_t generators) {
  std::vector<std::int8_t> signs(generators, 0);
  while (t.generator[x] >= 0) {
    signs[static_cast<std::size_t>(t.generator[x])] = t.sign[x];
    x = t.parent[x];
  }
  return signs;
}

}  // namespace

CharacterSet span(const Group& g, const CharacterList& lambda) {
  if (lambda.size() > kMaxSpanGenerators) throw Error(ErrorKind::TooLarge, "span limited to 20 generators");
  return build_span(g, lambda).members;
}

CoverResult is_covered(const Group& g, const CharacterSet& s, const CharacterSet& gamma,
                       const CharacterList& lambda) {
  const SpanTable t = build_span(g, lambda);
  // First (gamma1, gamma2) realizing each difference.
  std::vector<std::uint8_t> seen(g.order(), 0);
  std::vector<std::pair<Character, Character>> rep(g.order());
  ElementSet diffs;
  for (Character a : gamma)
    for (Character b : gamma) {
      const Element d = g.sub(a, b);
      if (seen[d]) continue;
      seen[d] = 1;
      rep[d] = {a, b};
      diffs.push_back(d);
    }
  std::sort(diffs.begin(), diffs.end());
  CoverResult out;
  for (Character x : s) {
    bool found = false;
    for (Element d : diffs) {
      const Element rest = g.sub(x, d);
      if (t.generator[rest] == -2) continue;
      out.witnesses.push_back({x, rep[d].first, rep[d].second, signs_of(t, rest, lambda.size())});
      found = true;
      break;
    }
    if (!found) out.uncovered.push_back(x);
  }
  out.covered = out.uncovered.empty();
  return out;
}

bool check_witness(const Group& g, const CoverWitness& w, const CharacterSet& gamma,
                   const CharacterList& lambda) {
  if (w.signs.size() != lambda.size()) return false;
  if (!contains(gamma, w.gamma1) || !contains(gamma, w.gamma2)) return false;
  Element acc = g.sub(w.gamma1, w.gamma2);
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    if (w.signs[i] > 1 || w.signs[i] < -1) return false;
    acc = g.add(acc, g.scale(w.signs[i], lambda[i]));
  }
  return acc == w.element;
}

PairCounts::PairCounts(const Group& g, const CharacterSet& gamma)
    : group_(g), gamma_(std::make_shared<const CharacterSet>(gamma)) {
  counts_.assign(1, std::vector<std::uint64_t>(g.order(), 0));
  counts_[0][0] = 1;
}

PairCounts PairCounts::with(Character gamma) const {
  const std::uint64_t n = group_.order();
  if (n * (members_.size() + 2) > kMaxPairCountCells)
    throw Error(ErrorKind::TooLarge, "dissociation table too large");
  PairCounts next = *this;
  next.members_.push_back(gamma);
  next.counts_.push_back(std::vector<std::uint64_t>(n, 0));
  for (std::size_t k = next.counts_.size() - 1; k >= 1; --k) {
    const auto& prev = counts_[k - 1];
    auto& cur = next.counts_[k];
    for (Element v = 0; v < n; ++v) {
      if (prev[v] == 0) continue;
      cur[group_.add(v, gamma)] += prev[v];
      cur[group_.sub(v, gamma)] += prev[v];
    }
  }
  return next;
}

std::optional<DissociationViolation> PairCounts::violation() const {
  const Element n = group_.order();
  for (std::size_t k = 1; k < counts_.size(); ++k) {
    const auto& c = counts_[k];
    const std::uint64_t cap = std::uint64_t{1} << k;
    for (Element lambda = 0; lambda < n; ++lambda) {
      std::uint64_t total = 0;
      for (Character g : *gamma_) total += c[group_.add(lambda, g)];
      if (total > cap) return DissociationViolation{static_cast<int>(k), lambda, total};
    }
  }
  return std::nullopt;
}

DissociationResult is_dissociated(const Group& g, const CharacterSet& delta, const CharacterSet& gamma) {
  PairCounts counts(g, gamma);
  for (Character x : delta) counts = counts.with(x);
  DissociationResult out;
  out.violation = counts.violation();
  out.dissociated = !out.violation.has_value();
  return out;
}

DissociationReport gamma_dimension(const Group& g, const CharacterSet& s, const CharacterSet& gamma) {
  if (s.size() > kMaxDimensionSet) throw Error(ErrorKind::TooLarge, "dimension search limited to 24 elements");
  DissociationReport report{s, gamma, 0, {}, 0};
  CharacterList current;
  // Dissociation is hereditary, so the search only ever extends dissociated sets.
  std::function<void(const PairCounts&, std::size_t)> dfs = [&](const PairCounts& counts, std::size_t i) {
    if (counts.size() > report.witness.size()) report.witness = counts.members();
    if (i == s.size() || counts.size() + (s.size() - i) <= report.witness.size()) return;
    const PairCounts next = counts.with(s[i]);
    if (!next.violation()) dfs(next, i + 1);
    dfs(counts, i + 1);
  };
  dfs(PairCounts(g, gamma), 0);
  report.dimension = static_cast<int>(report.witness.size());
  report.deficiency = static_cast<int>(s.size()) - report.dimension;
  return report;
}

CharacterSet greedy_dissociated(const Group& g, const CharacterList& order, const CharacterSet& gamma) {
  PairCounts counts(g, gamma);
  for (Character x : order) {
    if (std::find(counts.members().begin(), counts.members().end(), x) != counts.members().end()) continue;
    PairCounts next = counts.with(x);
    if (!next.violation()) counts = std::move(next);
  }
  return make_set(counts.members());
}

TechlemmaPartition techlemma_partition(const Group& g, const CharacterSet& delta, const CharacterSet& gamma) {
  if (g.order() > (1u << 10)) throw Error(ErrorKind::TooLarge, "partition materialized only for order <= 2^10");
  if (!is_symmetric(g, gamma)) throw Error(ErrorKind::NotSymmetric, "Gamma must be symmetric");
  if (gamma.empty() && !delta.empty())
    throw Error(ErrorKind::HypothesisViolated, "Gamma - Gamma is empty, nothing can be covered");
  TechlemmaPartition out;
  const DissociationReport dim = gamma_dimension(g, delta, gamma);
  out.dimension = dim.dimension;
  out.delta0 = dim.witness;
  PairCounts base(g, gamma);
  for (Character x : out.delta0) base = base.with(x);
  for (Character x = 0; x < g.order(); ++x) {
    const bool in_lambda0 = contains(out.delta0, x) || base.with(x).violation().has_value();
    (in_lambda0 ? out.lambda0 : out.lambda1).push_back(x);
  }
  out.certificate = out.delta0;
  out.certificate.insert(out.certificate.end(), out.delta0.begin(), out.delta0.end());
  out.cover = is_covered(g, out.lambda0, gamma, out.certificate);
  return out;
}

}  // namespace spectral
