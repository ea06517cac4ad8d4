#include <doctest.h>

#include <cmath>

#include "spectral/rng.hpp"
#include "spectral/spectra.hpp"

using namespace spectral;

TEST_CASE("spectrum of simple functions") {
  const auto z13 = Group::cyclic(13);
  CHECK(spectrum(DensityFn::indicator(z13, all_elements(z13)), 0.5).members == CharacterSet{0});
  const auto z5 = Group::cyclic(5);
  CHECK(spectrum(DensityFn::indicator(z5, {0}), 1.0).members == all_elements(z5));

  const auto z7 = Group::cyclic(7);
  const auto f = DensityFn::indicator(z7, {0, 1, 2});
  CharacterSet expected;
  for (int a = 0; a < 7; ++a) {
    std::complex<double> acc = 0;
    for (int x = 0; x < 3; ++x) acc += std::polar(1.0, 2 * M_PI * a * x / 7.0);
    if (std::abs(acc) >= 0.9 * 3) expected.push_back(a);
  }
  CHECK(spectrum(f, 0.9).members == expected);
  CHECK_THROWS_AS(spectrum(DensityFn::indicator(z7, {}), 0.5), Error);
}

TEST_CASE("level spectra") {
  const auto z13 = Group::cyclic(13);
  const auto full = DensityFn::indicator(z13, all_elements(z13));
  CHECK(level_spectrum(full, 0.6).members == CharacterSet{0});
  CHECK(level_spectrum(full, 0.4).members.empty());

  const auto z11 = Group::cyclic(11);
  const auto f = DensityFn::indicator(z11, {0, 1, 2, 5});
  const auto t = f.transform();
  CharacterSet expected;
  for (int a = 0; a < 11; ++a)
    if (std::abs(t(a)) >= 0.3 * 4 && std::abs(t(a)) < 0.6 * 4) expected.push_back(a);
  CHECK(level_spectrum(f, 0.3).members == expected);
}

TEST_CASE("dyadic level spectra partition the spectrum") {
  const auto g = Group::cyclic(101);
  Rng rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    ElementSet a;
    for (Element x = 0; x < 101; ++x)
      if (rng.bernoulli(0.3)) a.push_back(x);
    if (a.empty()) continue;
    const auto f = DensityFn::indicator(g, a);
    const double eta = 0.05;
    CharacterSet uni;
    std::size_t total = 0;
    for (double e = eta; e <= 1.0; e *= 2) {
      const auto lv = level_spectrum(f, e).members;
      total += lv.size();
      uni = set_union(uni, lv);
    }
    CHECK(uni == spectrum(f, eta).members);
    CHECK(total == uni.size());
  }
}

TEST_CASE("spectrum properties on random sets") {
  const auto g = Group::cyclic(31);
  Rng rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    ElementSet a;
    for (Element x = 0; x < 31; ++x)
      if (rng.bernoulli(0.4)) a.push_back(x);
    if (a.empty()) continue;
    const auto f = DensityFn::indicator(g, a);
    const double alpha = static_cast<double>(a.size()) / 31;
    CharacterSet prev = all_elements(g);
    for (int i = 1; i <= 10; ++i) {
      const double eta = i / 10.0;
      const auto s = spectrum(f, eta).members;
      CHECK(contains(s, 0));
      CHECK(is_symmetric(g, s));
      CHECK(is_subset(s, prev));
      CHECK(static_cast<double>(s.size()) <= std::ceil(1.0 / (eta * eta * alpha)));
      prev = s;
    }
  }
}

TEST_CASE("control and cal_L") {
  const auto z5 = Group::cyclic(5);
  CHECK(has_control(z5, {0}, {1, 2, 3}, 0.0).holds);
  CHECK(has_control(z5, {}, {1}, 0.0).holds);
  const auto r = has_control(z5, all_elements(z5), {1}, 0.1);
  CHECK_FALSE(r.holds);
  REQUIRE(r.worst_pair);
  CHECK(r.worst_pair->first == 2);
  CHECK(r.worst == doctest::Approx(2 * std::sin(2 * M_PI / 5)).epsilon(1e-12));

  CHECK(cal_L(1.0) == 2);
  CHECK(cal_L(std::exp(-1.0)) == 3);
  CHECK(cal_L(0.05) == 5);
  CHECK_THROWS_AS(cal_L(0.0), Error);
}

TEST_CASE("set spectrum of the whole group") {
  const auto g = Group::cyclic(17);
  CHECK(set_spectrum(g, all_elements(g), 1e-40) == CharacterSet{0});
  CHECK(set_spectrum(g, {0}, 0.5) == all_elements(g));
}
