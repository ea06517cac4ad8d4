#include <doctest.h>

#include <cmath>

#include "spectral/fourier.hpp"
#include "spectral/group.hpp"
#include "spectral/rng.hpp"
#include "spectral/spectra.hpp"

using namespace spectral;

TEST_CASE("group construction") {
  CHECK(Group::cyclic(13).order() == 13);
  CHECK(Group::vector(3, 4).order() == 81);
  CHECK_THROWS_AS(Group::cyclic(12), Error);
  try {
    Group::cyclic(12);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonPrimeModulus);
  }
  try {
    Group::vector(3, 0);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DimensionZero);
  }
}

TEST_CASE("vector group arithmetic is coordinatewise") {
  const auto g = Group::vector(3, 3);
  const int a[] = {1, 2, 0}, b[] = {2, 2, 1};
  const Element x = g.from_coords(a), y = g.from_coords(b);
  CHECK(g.coords(g.add(x, y)) == std::vector<int>{0, 1, 1});
  CHECK(g.coords(g.neg(x)) == std::vector<int>{2, 1, 0});
  CHECK(g.coords(g.scale(2, x)) == std::vector<int>{2, 1, 0});
  CHECK(g.pairing(x, y) == (2 + 4 + 0) % 3);
}

TEST_CASE("fourier transform of small indicators") {
  const auto z5 = Group::cyclic(5);
  const auto delta = DensityFn::indicator(z5, {0}).transform();
  for (int i = 0; i < 5; ++i) CHECK(std::abs(delta(i) - 1.0) < 1e-12);

  const auto z7 = Group::cyclic(7);
  const auto full = DensityFn::indicator(z7, all_elements(z7)).transform();
  CHECK(std::abs(full(0) - 7.0) < 1e-12);
  for (int i = 1; i < 7; ++i) CHECK(std::abs(full(i)) < 1e-12);

  // Literal oracle: sum_x exp(2 pi i a x / 7) over x in {0,1,2}.
  const auto t = DensityFn::indicator(z7, {0, 1, 2}).transform();
  for (int a = 0; a < 7; ++a) {
    std::complex<double> acc = 0;
    for (int x = 0; x < 3; ++x) acc += std::polar(1.0, 2 * M_PI * a * x / 7.0);
    CHECK(std::abs(t(a) - acc) < 1e-12);
  }
}

TEST_CASE("direct and fast transforms agree") {
  Rng rng(11);
  for (auto g : {Group::cyclic(61), Group::cyclic(67), Group::cyclic(71), Group::vector(3, 4),
                 Group::vector(5, 3)}) {
    for (int trial = 0; trial < 100; ++trial) {
      VectorXc f(g.order());
      for (Eigen::Index i = 0; i < f.size(); ++i) f(i) = {rng.uniform() - 0.5, rng.uniform() - 0.5};
      const VectorXc a = fourier_direct(g, f), b = fourier_fast(g, f);
      CHECK((a - b).norm() <= 1e-9 * a.norm());
    }
  }
}

TEST_CASE("inverse transform and convolution") {
  const auto g = Group::cyclic(101);
  Rng rng(3);
  VectorXc f(101), h(101);
  for (int i = 0; i < 101; ++i) {
    f(i) = rng.uniform();
    h(i) = rng.uniform();
  }
  CHECK((inverse_fourier(g, fourier_transform(g, f)) - f).norm() < 1e-10);
  const VectorXc c = convolve(g, f, h);
  for (int x = 0; x < 101; x += 17) {
    std::complex<double> acc = 0;
    for (int y = 0; y < 101; ++y) acc += f(y) * h((x - y + 101) % 101);
    CHECK(std::abs(c(x) - acc) < 1e-9);
  }
}

TEST_CASE("parseval identity") {
  const auto z5 = Group::cyclic(5);
  const auto d = DensityFn::indicator(z5, {0});
  CHECK(parseval_gap(d, d) < 1e-12);
  const auto z13 = Group::cyclic(13);
  const auto full = DensityFn::indicator(z13, all_elements(z13));
  CHECK(parseval_gap(full, full) < 1e-12);

  const auto g = Group::cyclic(101);
  Rng rng(5);
  VectorXr a(101), b(101);
  for (int i = 0; i < 101; ++i) {
    a(i) = rng.bernoulli(0.5) ? 1 : -1;
    b(i) = rng.bernoulli(0.5) ? 1 : -1;
  }
  const auto fa = DensityFn::real(g, a), fb = DensityFn::real(g, b);
  CHECK(parseval_gap(fa, fb) <= 1e-9 * fa.l2() * fb.l2());
  CHECK_THROWS_AS(parseval_gap(fa, d), Error);
}

TEST_CASE("translation and dilation act on transforms as expected") {
  const auto g = Group::cyclic(31);
  const ElementSet a = {1, 4, 9, 10, 22};
  const auto fa = DensityFn::indicator(g, a).transform();
  const auto ft = DensityFn::indicator(g, translate(g, a, 7)).transform();
  const std::int64_t c = 5;
  const auto fd = DensityFn::indicator(g, dilate(g, a, c)).transform();
  for (Element gamma = 0; gamma < 31; ++gamma) {
    CHECK(std::abs(std::abs(fa(gamma)) - std::abs(ft(gamma))) < 1e-9);
    CHECK(std::abs(fd(gamma) - fa(g.scale(c, gamma))) < 1e-9);
  }
}

TEST_CASE("checked sets reject bad input") {
  const auto g = Group::cyclic(7);
  CHECK(checked_set(g, {3, 1}) == ElementSet{1, 3});
  CHECK_THROWS_AS(checked_set(g, {1, 1}), Error);
  CHECK_THROWS_AS(checked_set(g, {7}), Error);
}
