#include <doctest.h>

#include "spectral/dissociation.hpp"
#include "spectral/rng.hpp"

using namespace spectral;

TEST_CASE("span") {
  const auto z7 = Group::cyclic(7);
  CHECK(span(z7, {}) == CharacterSet{0});
  CHECK(span(z7, {1}) == CharacterSet{0, 1, 6});
  const auto z13 = Group::cyclic(13);
  CHECK(span(z13, {1, 3}) == CharacterSet{0, 1, 2, 3, 4, 9, 10, 11, 12});
  CHECK_THROWS_AS(span(z13, CharacterList(21, 1)), Error);
  // Repeated generators act independently.
  CHECK(span(z13, {1, 1}) == CharacterSet{0, 1, 2, 11, 12});
}

TEST_CASE("covering with witnesses") {
  const auto z7 = Group::cyclic(7);
  CHECK(is_covered(z7, {0, 3, 4}, {0, 3}, {}).covered);
  const auto r = is_covered(z7, {5}, {0}, {1});
  CHECK_FALSE(r.covered);
  CHECK(r.uncovered == CharacterSet{5});

  const auto z13 = Group::cyclic(13);
  const CharacterList lambda = {1, 3};
  const auto c = is_covered(z13, {1, 2}, {0}, lambda);
  CHECK(c.covered);
  for (const auto& w : c.witnesses) CHECK(check_witness(z13, w, {0}, lambda));
  CHECK_FALSE(is_covered(z13, {5}, {0}, lambda).covered);

  Rng rng(2);
  const auto z101 = Group::cyclic(101);
  for (int trial = 0; trial < 20; ++trial) {
    CharacterList l;
    for (int i = 0; i < 4; ++i) l.push_back(static_cast<Character>(rng.below(101)));
    const CharacterSet gamma = {0, static_cast<Character>(rng.below(101))};
    const auto res = is_covered(z101, all_elements(z101), gamma, l);
    for (const auto& w : res.witnesses) CHECK(check_witness(z101, w, gamma, l));
    CHECK(res.witnesses.size() + res.uncovered.size() == 101);
  }
}

TEST_CASE("dissociation") {
  const auto z13 = Group::cyclic(13);
  CHECK(is_dissociated(z13, {5}, {0}).dissociated);
  CHECK(is_dissociated(z13, {0}, {0}).dissociated);
  const auto r = is_dissociated(z13, {1, 2, 3, 4, 5, 6}, {0});
  CHECK_FALSE(r.dissociated);
  REQUIRE(r.violation);
  CHECK(r.violation->k == 2);
  CHECK(r.violation->lambda == 1);
  CHECK(r.violation->count == 5);
}

TEST_CASE("dissociation is stable under translating Gamma") {
  Rng rng(17);
  const auto g = Group::cyclic(11);
  for (int trial = 0; trial < 30; ++trial) {
    CharacterSet delta, gamma;
    for (Character c = 0; c < 11; ++c) {
      if (rng.bernoulli(0.3)) delta.push_back(c);
      if (rng.bernoulli(0.2)) gamma.push_back(c);
    }
    if (!is_dissociated(g, delta, gamma).dissociated) continue;
    for (Element mu = 0; mu < 11; ++mu) CHECK(is_dissociated(g, delta, shift(g, gamma, mu)).dissociated);
  }
}

TEST_CASE("dimension") {
  const auto z13 = Group::cyclic(13);
  CHECK(gamma_dimension(z13, {}, {0}).dimension == 0);
  CHECK(gamma_dimension(z13, {7}, {0}).dimension == 1);
  CHECK(gamma_dimension(z13, {1, 2}, {0}).dimension == 2);
  const auto r = gamma_dimension(z13, {1, 2, 3}, {0});
  CHECK(r.dimension == 3);
  CHECK(r.deficiency == 0);

  Rng rng(23);
  const auto z31 = Group::cyclic(31);
  for (int trial = 0; trial < 20; ++trial) {
    CharacterSet s, gamma = {0};
    for (Character c = 0; c < 31; ++c)
      if (rng.bernoulli(0.3) && s.size() < 10) s.push_back(c);
    if (rng.bernoulli(0.5)) gamma.push_back(static_cast<Character>(rng.below(31)));
    gamma = make_set(gamma);
    const auto rep = gamma_dimension(z31, s, gamma);
    CHECK(is_dissociated(z31, rep.witness, gamma).dissociated);
    CHECK(is_subset(rep.witness, s));
    // Exhaustive: no subset one larger is dissociated.
    const std::size_t n = s.size();
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      if (static_cast<int>(__builtin_popcount(mask)) != rep.dimension + 1) continue;
      CharacterSet sub;
      for (std::size_t i = 0; i < n; ++i)
        if (mask >> i & 1) sub.push_back(s[i]);
      CHECK_FALSE(is_dissociated(z31, sub, gamma).dissociated);
    }
    if (!s.empty()) {
      auto smaller = s;
      smaller.pop_back();
      CHECK(gamma_dimension(z31, smaller, gamma).dimension <= rep.dimension);
    }
  }
}

TEST_CASE("techlemma partition") {
  const auto z7 = Group::cyclic(7);
  const auto empty = techlemma_partition(z7, {}, {0});
  CHECK(empty.lambda0.empty());
  CHECK(empty.lambda1 == all_elements(z7));

  const auto p = techlemma_partition(z7, {1}, {0});
  CHECK(p.dimension == 1);
  CHECK(p.cover.covered);
  CHECK(p.certificate.size() == 2);
  for (Character x : p.lambda1) CHECK(gamma_dimension(z7, set_union({1}, {x}), {0}).dimension == 2);

  const auto z13 = Group::cyclic(13);
  const auto q = techlemma_partition(z13, {1, 3}, {0, 2, 11});
  CHECK(q.cover.covered);
  CHECK(set_union(q.lambda0, q.lambda1) == all_elements(z13));
  CHECK(set_intersection(q.lambda0, q.lambda1).empty());
  for (Character x : q.lambda1)
    CHECK(gamma_dimension(z13, set_union({1, 3}, {x}), {0, 2, 11}).dimension == q.dimension + 1);

  CHECK_THROWS_AS(techlemma_partition(z13, {1}, {0, 2}), Error);
}
