#include <doctest.h>

#include "spectral/rng.hpp"
#include "spectral/sumset.hpp"

using namespace spectral;

namespace {

// Quadratic oracle: every start and every difference, extended greedily.
std::int64_t brute_longest(const IntSet& s) {
  if (s.empty()) return 0;
  std::int64_t best = 1;
  const auto in = [&](std::int64_t x) { return std::binary_search(s.begin(), s.end(), x); };
  for (const auto x : s)
    for (std::int64_t d = 1; d <= s.back() - s.front(); ++d) {
      std::int64_t l = 1;
      while (in(x + l * d)) ++l;
      best = std::max(best, l);
    }
  return best;
}

IntSet random_int_set(Rng& rng, std::int64_t n, double density) {
  IntSet s;
  for (std::int64_t x = 1; x <= n; ++x)
    if (rng.bernoulli(density)) s.push_back(x);
  if (s.empty()) s.push_back(1);
  return s;
}

IntSet brute_sumset(const IntSet& a, const IntSet& b) {
  IntSet s;
  for (const auto x : a)
    for (const auto y : b) s.push_back(x + y);
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

}  // namespace

TEST_CASE("longest AP in a sumset") {
  IntSet full;
  for (int x = 1; x <= 50; ++x) full.push_back(x);
  const auto w = longest_ap_in_sumset(full, full, 50);
  CHECK(w.length == 99);
  CHECK(w.diff == 1);
  CHECK(w.start == 2);

  const auto one = longest_ap_in_sumset({1}, {1}, 1);
  CHECK(one.length == 1);
  CHECK(one.start == 2);

  // {2, 4, 6} with {10, 20} gives 12, 14, 16, 22, 24, 26; ties go to difference 2 at 12.
  const auto tie = longest_ap(brute_sumset({2, 4, 6}, {10, 20}));
  CHECK(tie.length == 3);
  CHECK(tie.diff == 2);
  CHECK(tie.start == 12);

  Rng rng(12);
  for (int t = 0; t < 40; ++t) {
    const std::int64_t n = 20 + static_cast<std::int64_t>(rng.below(200));
    const auto a = random_int_set(rng, n, 0.05 + 0.1 * rng.uniform());
    const auto b = random_int_set(rng, n, 0.05 + 0.1 * rng.uniform());
    const auto s = integer_sumset(a, b);
    CHECK(s == brute_sumset(a, b));
    const auto r = longest_ap_in_sumset(a, b, n);
    CHECK(r.length == brute_longest(s));
    for (std::int64_t k = 0; k < r.length; ++k) CHECK(std::binary_search(s.begin(), s.end(), r.start + k * r.diff));
    CHECK_FALSE(std::binary_search(s.begin(), s.end(), r.start - r.diff));
    CHECK_FALSE(std::binary_search(s.begin(), s.end(), r.start + r.length * r.diff));
  }
  CHECK_THROWS_AS(longest_ap_in_sumset({1}, {1}, 100001), Error);
}

TEST_CASE("sumset iteration step") {
  const auto g = Group::cyclic(509);
  const BohrSetZ b(g, {{1}, {1.0}});
  REQUIRE(is_regular(b).regular);
  const auto full = itsa_step(b.members(), b.members(), b, 0.01);
  CHECK(full.which == 1);
  CHECK(full.coverage == doctest::Approx(1.0));

  // Sparse structured sets: two short progressions of difference 7.
  ElementSet a1, a2;
  for (Element k = 0; k < 6; ++k) {
    a1.push_back(g.scale(7, k));
    a2.push_back(g.neg(g.scale(7, k)));
  }
  a1 = make_set(a1);
  a2 = make_set(a2);
  const auto vacuous = itsa_step(a1, a2, b, 1.0);
  CHECK(vacuous.which == 1);

  const auto r = itsa_step(a1, a2, b, 0.1);
  CHECK(r.which == 2);
  CHECK(r.product >= r.target);
  CHECK(r.rank - b.rank() <= static_cast<int>(r.lambda_size));
  CHECK(is_subset(r.b_dprime_members, b.dilate(r.rho).members()));
  for (const auto& c : r.checks) CHECK(c.holds);

  ItsaParams p4;
  p4.exponent = 4;
  const auto it = itsa_iterate(a1, a2, b, 0.1, 6, p4);
  REQUIRE_FALSE(it.steps.empty());
  CHECK(it.steps.front().exponent == 4);
  for (const auto& s : it.steps)
    if (s.which == 2) CHECK(s.product >= s.target);
  CHECK_THROWS_AS(itsa_step(a1, a2, b, 0.0), Error);
}
