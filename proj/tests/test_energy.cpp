#include <doctest.h>

#include <cmath>

#include "spectral/dissociation.hpp"
#include "spectral/energy.hpp"
#include "spectral/rng.hpp"
#include "spectral/spectra.hpp"

using namespace spectral;

TEST_CASE("weight functions") {
  const auto g = Group::cyclic(11);
  const WeightFn w(g, {{3, 2.0}, {1, 0.0}, {5, 1.0}});
  CHECK(w.support() == CharacterSet{3, 5});
  CHECK(w.l1() == 3.0);
  CHECK(w.l2() == doctest::Approx(std::sqrt(5.0)));
  CHECK(w(3) == 2.0);
  CHECK(w(1) == 0.0);
  CHECK_THROWS_AS(WeightFn(g, {{3, -1.0}}), Error);
  CHECK_THROWS_AS(WeightFn(g, {{11, 1.0}}), Error);
}

TEST_CASE("additive energy small cases") {
  const auto z7 = Group::cyclic(7);
  const auto w = WeightFn::indicator(z7, {1, 2, 3});
  CHECK(additive_energy(w, {}, 0) == 1.0);
  CHECK(additive_energy(w, {0}, 1) == doctest::Approx(3.0));
  CHECK(additive_energy(w, {0}, 2) == doctest::Approx(19.0));
  CHECK(additive_energy(w, all_elements(z7), 2) == doctest::Approx(81.0));
  CHECK(additive_energy(w, {0}, 2, EnergyMethod::enumerate) ==
        doctest::Approx(additive_energy(w, {0}, 2, EnergyMethod::convolve)));
}

TEST_CASE("energy paths agree on random weights") {
  Rng rng(21);
  const auto g = Group::cyclic(29);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<std::pair<Character, double>> ws;
    for (Character c = 0; c < 29; ++c)
      if (rng.bernoulli(0.2)) ws.emplace_back(c, rng.uniform());
    const WeightFn w(g, ws);
    CharacterSet gamma;
    for (Character c = 0; c < 29; ++c)
      if (rng.bernoulli(0.15)) gamma.push_back(c);
    for (int m = 1; m <= 2; ++m) {
      const double a = additive_energy(w, gamma, m, EnergyMethod::enumerate);
      const double b = additive_energy(w, gamma, m, EnergyMethod::convolve);
      CHECK(std::abs(a - b) <= 1e-9 * std::max(1.0, std::pow(w.l1(), 2 * m)));
    }
  }
}

TEST_CASE("restricted energy") {
  const auto z7 = Group::cyclic(7);
  const auto w = WeightFn::indicator(z7, {1, 2, 3});
  CHECK(restricted_energy(w, {0}, 0, 0) == 1.0);
  CHECK(restricted_energy(w, {0}, 0, 0, Character{0}) == 1.0);
  CHECK(restricted_energy(w, {2}, 0, 0, Character{5}) == 1.0);
  CHECK(restricted_energy(w, {2}, 0, 0, Character{1}) == 0.0);
  CHECK(restricted_energy(w, {0}, 2, 1) == doctest::Approx(1.0));
  CHECK(restricted_energy(WeightFn::indicator(z7, {0}), {0}, 1, 0) == 1.0);
  CHECK(restricted_energy(WeightFn::indicator(z7, {4}), {0}, 1, 0) == 0.0);

  const auto z13 = Group::cyclic(13);
  const auto s = WeightFn::indicator(z13, {1, 2, 3});
  const double expected[3][3] = {{1, 0, 0}, {0, 0, 1}, {0, 1, 0}};
  for (int t1 = 0; t1 <= 2; ++t1)
    for (int t2 = 0; t2 <= 2; ++t2) CHECK(restricted_energy(s, {0}, t1, t2) == expected[t1][t2]);
}

TEST_CASE("en1 bound") {
  const auto z13 = Group::cyclic(13);
  const auto single = en1_bound_check(z13, {4}, {0}, 1, 0, 0);
  CHECK(single.rhs == 4.0);
  CHECK(single.holds);
  const auto r = en1_bound_check(z13, {1, 2, 3}, {0}, 2, 2, 2);
  CHECK(r.lhs == 0.0);
  CHECK(r.holds);

  Rng rng(7);
  const auto z31 = Group::cyclic(31);
  for (int trial = 0; trial < 40; ++trial) {
    CharacterSet s, gamma;
    const int size = 1 + static_cast<int>(rng.below(8));
    while (s.size() < static_cast<std::size_t>(size)) s = make_set([&] {
      auto v = s;
      v.push_back(static_cast<Character>(rng.below(31)));
      return v;
    }());
    for (Character c = 0; c < 31; ++c)
      if (rng.bernoulli(0.1)) gamma.push_back(c);
    for (int t1 = 0; t1 <= 2; ++t1)
      for (int t2 = 0; t2 <= 2; ++t2) CHECK(en1_bound_check(z31, s, gamma, 2, t1, t2).holds);
  }
}

TEST_CASE("en2 bound") {
  const auto z11 = Group::cyclic(11);
  CHECK(en2_bound_check(WeightFn::indicator(z11, {3}), {0}, 2).holds);
  Rng rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::pair<Character, double>> ws;
    const auto k = 1 + rng.below(5);
    CharacterSet used;
    while (used.size() < k) used = make_set([&] {
      auto v = used;
      v.push_back(static_cast<Character>(rng.below(11)));
      return v;
    }());
    for (Character c : used) ws.emplace_back(c, 0.1 + rng.uniform());
    const auto r = en2_bound_check(WeightFn(z11, ws), {0}, 2);
    CHECK(r.holds);
  }
}

TEST_CASE("shkredov lower bound") {
  const auto z13 = Group::cyclic(13);
  const auto f = DensityFn::indicator(z13, all_elements(z13));
  const auto r = shkredov_check(f, all_elements(z13), WeightFn::indicator(z13, {0}), 1.0, 1, 0.3);
  CHECK(r.energy == doctest::Approx(1.0));
  CHECK(r.lower == doctest::Approx(0.7));
  CHECK(r.holds);
  CHECK_THROWS_AS(shkredov_check(f, all_elements(z13), WeightFn::indicator(z13, {1}), 1.0, 1, 0.3), Error);

  Rng rng(5);
  for (auto n : {11u, 17u}) {
    const auto g = Group::cyclic(n);
    for (int trial = 0; trial < 10; ++trial) {
      ElementSet a;
      for (Element x = 0; x < n; ++x)
        if (rng.bernoulli(0.4)) a.push_back(x);
      if (a.empty()) continue;
      const auto fa = DensityFn::indicator(g, a);
      const auto w = WeightFn::indicator(g, spectrum(fa, 0.3).members);
      for (int m = 1; m <= 2; ++m) CHECK(shkredov_check(fa, all_elements(g), w, 0.3, m, 0.5).holds);
    }
  }
}

TEST_CASE("micro inequality") {
  for (int n = 0; n <= 60; ++n) CHECK(en2_micro_inequality(n));
  CHECK_THROWS_AS(en2_micro_inequality(61), Error);
}
