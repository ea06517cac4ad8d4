#include <doctest.h>

#include <cmath>

#include "spectral/bohr.hpp"
#include "spectral/rng.hpp"

using namespace spectral;

namespace {

BohrSetZ random_bohr(const Group& g, Rng& rng, int rank, double lo, double hi) {
  BohrWidth w;
  while (static_cast<int>(w.freqs.size()) < rank) {
    const auto f = static_cast<Character>(1 + rng.below(g.order() - 1));
    if (contains(make_set(w.freqs), f)) continue;
    w.freqs.push_back(f);
    w.widths.push_back(lo + (hi - lo) * rng.uniform());
  }
  return BohrSetZ(g, w);
}

}  // namespace

TEST_CASE("Bohr set membership") {
  const auto g = Group::cyclic(101);
  CHECK(BohrSetZ(g, {}).size() == 101);
  CHECK(BohrSetZ(g, {{1}, {2.0}}).size() == 101);
  const BohrSetZ b(g, {{1}, {0.5}});
  CHECK(b.size() == 17);
  for (Element x = 0; x < 101; ++x)
    CHECK(b.contains(x) == (2 * std::abs(std::sin(M_PI * x / 101.0)) < 0.5));
  CHECK_THROWS_AS(BohrSetZ(g, {{1}, {2.5}}), Error);
  CHECK_THROWS_AS(BohrSetZ(g, {{1}, {-0.1}}), Error);
  CHECK(b.dilate(5.0).size() == 101);
}

TEST_CASE("Bohr sets contain 0, are symmetric and nested") {
  Rng rng(3);
  const auto g = Group::cyclic(211);
  for (int trial = 0; trial < 30; ++trial) {
    const auto b = random_bohr(g, rng, 1 + static_cast<int>(rng.below(2)), 0.2, 1.5);
    CHECK(b.contains(0));
    CHECK(is_symmetric(g, b.members()));
    CHECK(is_subset(b.dilate(0.7).members(), b.members()));
    CHECK(b.dilate(0.7).size() == b.size_at(0.7));
    const auto s = sumset(g, b.dilate(0.4).members(), b.dilate(0.5).members());
    CHECK(is_subset(s, b.dilate(0.9 + 1e-9).members()));
  }
}

TEST_CASE("regularity") {
  const auto g = Group::cyclic(101);
  CHECK(is_regular(BohrSetZ(g, {})).regular);
  const BohrSetZ b(g, {{1}, {0.5}});
  const auto r = is_regular(b);
  // 17 members at distances 2 sin(pi k/101), k <= 8; the next breakpoint k = 9 sits at ratio ~0.557/0.5.
  CHECK(r.regular);
  const double atom = 2 * std::sin(M_PI * 5 / 101.0) + kBohrGuard;
  const BohrSetZ bad(g, {{1}, {atom}});
  const auto rb = is_regular(bad);
  CHECK_FALSE(rb.regular);
  CHECK(rb.worst_ratio > 1);
}

TEST_CASE("regular dilates exist") {
  const auto g = Group::cyclic(101);
  CHECK(find_regular_dilate(BohrSetZ(g, {})) == 1.0);
  const BohrSetZ b(g, {{1, 5}, {0.9, 0.9}});
  const double lambda = find_regular_dilate(b);
  CHECK(lambda >= 0.5);
  CHECK(lambda <= 1.0);
  CHECK(is_regular(b.dilate(lambda)).regular);

  Rng rng(8);
  const auto z211 = Group::cyclic(211);
  for (int trial = 0; trial < 30; ++trial) {
    const auto c = random_bohr(z211, rng, 1 + static_cast<int>(rng.below(3)), 0.1, 2.0);
    const double l = find_regular_dilate(c);
    CHECK(is_regular(c.dilate(l)).regular);
  }
}

TEST_CASE("meet of widths") {
  const BohrWidth a{{1, 3}, {0.3, 1.0}}, b{{3, 7}, {0.2, 0.5}};
  const auto m = meet_widths(a, b);
  CHECK(m.freqs == CharacterSet{1, 3, 7});
  CHECK(m.widths == std::vector<double>{0.3, 0.2, 0.5});
  const auto disjoint = meet_widths({{1}, {0.3}}, {{2}, {0.4}});
  CHECK(disjoint.freqs == CharacterSet{1, 2});
  CHECK(disjoint.widths == std::vector<double>{0.3, 0.4});
}

TEST_CASE("size lemma") {
  const auto g = Group::cyclic(211);
  const BohrSetZ b(g, {{1, 30}, {0.8, 1.1}});
  const auto empty = siz_check(b, {});
  CHECK(empty.lhs == empty.rhs);
  CHECK(empty.holds);
  CHECK(siz_check(b, {{77}, {0.6}}).holds);
  const auto one = dilate_siz_check(b, 1.0);
  CHECK(one.lhs == one.rhs);
  CHECK(one.holds);
  // With a very thin B and a near-antipodal extra frequency the first form fails:
  // B = {0, +-1, +-2, +-3}, and 105 * x lands near -1 for the odd members.
  const BohrSetZ thin(g, {{1}, {0.1}});
  const auto fail = siz_check(thin, {{105}, {1.9}});
  CHECK(fail.lhs < fail.rhs);
  CHECK_FALSE(fail.holds);
}

TEST_CASE("dilation by units commutes with width dilation") {
  const auto g = Group::cyclic(101);
  const BohrSetZ b(g, {{3, 10}, {0.9, 1.2}});
  CHECK(dilate_commutes(b, 1, 0.8));
  CHECK(dilate_commutes(b, 7, 0.8));
  CHECK(b.scaled(100).members() == b.members());
  Rng rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const auto c = random_bohr(g, rng, 2, 0.2, 2.0);
    CHECK(dilate_commutes(c, 1 + static_cast<std::int64_t>(rng.below(100)), 0.3 + 0.7 * rng.uniform()));
  }
}

TEST_CASE("Bohr spaces") {
  const auto g = Group::vector(3, 4);
  const BohrSpaceF all(g, {});
  CHECK(all.rank() == 0);
  CHECK(all.size() == 81);
  const int e1[] = {1, 0, 0, 0}, e2[] = {2, 0, 0, 0};
  const BohrSpaceF one(g, {g.from_coords(e1)});
  CHECK(one.rank() == 1);
  CHECK(one.size() == 27);
  const BohrSpaceF dep(g, {g.from_coords(e1), g.from_coords(e2)});
  CHECK(dep.rank() == 1);
  CHECK(dep.size() == 27);

  Rng rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    CharacterSet gamma;
    for (int i = 0; i < 3; ++i) gamma.push_back(static_cast<Character>(rng.below(81)));
    const BohrSpaceF b(g, make_set(gamma));
    CHECK(b.size() * b.annihilator().size() == 81);
    CHECK(sumset(g, b.members(), b.members()) == b.members());
    CHECK(b.scaled(2).rank() == b.rank());
    CHECK(b.scaled(2).members() == dilate(g, b.members(), 2));
    CHECK(b.rank() == f_rank(g, make_set(gamma)));
  }
}
