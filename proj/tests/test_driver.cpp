#include <doctest.h>

#include "spectral/driver.hpp"
#include "spectral/progression.hpp"
#include "spectral/rng.hpp"

using namespace spectral;

namespace {

ElementSet random_subset(const Group& g, Rng& rng, double density) {
  ElementSet s;
  for (Element x = 0; x < g.order(); ++x)
    if (rng.bernoulli(density)) s.push_back(x);
  if (s.empty()) s.push_back(1);
  return s;
}

// A maximum cap in F_3^4 (no three distinct points on a line), found by search.
const ElementSet kCap{6, 26, 27, 28, 32, 35, 36, 48, 50, 51, 53, 54, 56, 60, 62, 68, 72, 76, 77, 78};

void check_trace(const Group& g, const IncrementTrace& t) {
  const auto v = verify_trace(g, t);
  for (const auto& msg : v.violations) MESSAGE(msg);
  CHECK(v.ok);
  CHECK(t.steps.size() <= t.step_limit);
  CHECK(t.steps.back().kind == StepKind::terminal_count);
}

}  // namespace

TEST_CASE("dilate selection") {
  const auto g = Group::cyclic(211);
  const BohrSetZ b(g, {{1, 7}, {1.0, 1.5}});
  const double alpha = 0.3;
  const double delta = select_delta(b, alpha, 1.0 / 256);
  CHECK(delta <= alpha / 256 / 2 + 1e-15);
  CHECK(is_regular(b.dilate(delta)).regular);
  // Rank zero: every dilate is the whole group.
  const BohrSetZ whole(g, {});
  CHECK(select_delta(whole, alpha, 1.0 / 256) == doctest::Approx(alpha / 256));
}

TEST_CASE("driver in Z_N") {
  const EquationCoeffs c{1, 1, -2};
  const auto z101 = Group::cyclic(101);
  const auto full = driver_zn(z101, all_elements(z101), c);
  REQUIRE(full.steps.size() == 1);
  CHECK(full.steps[0].upsilon == 101u * 101u);
  check_trace(z101, full);

  const auto g = embedding_group(101, c);
  CHECK(g.order() == 509);
  const auto behrend = embed(g, behrend_construct(101).set);
  const auto t = driver_zn(g, behrend, c);
  check_trace(g, t);
  CHECK(t.steps.back().upsilon == behrend.size());
  CHECK(t.steps.back().certified <= t.steps.back().upsilon);

  Rng rng(4);
  const auto dense = random_subset(z101, rng, 0.7);
  REQUIRE(dense.size() * 3 > 2 * 101);
  const auto td = driver_zn(z101, dense, c);
  check_trace(z101, td);
  CHECK(td.steps.back().upsilon > td.steps.back().set.size());

  for (int k = 0; k < 5; ++k) {
    const auto a = random_subset(z101, rng, 0.05 + 0.1 * k);
    check_trace(z101, driver_zn(z101, a, {2, 3, -5}));
  }
  CHECK_THROWS_AS(driver_zn(Group::cyclic(1031), {1}, c), Error);
}

TEST_CASE("driver in F_p^n") {
  const auto f34 = Group::vector(3, 4);
  const EquationCoeffs c{1, 1, 1};
  CHECK(count_solutions(f34, kCap, c).count == kCap.size());
  const auto full = driver_fpn(f34, all_elements(f34), c);
  REQUIRE(full.steps.size() == 1);
  CHECK(full.steps[0].upsilon == 81u * 81u);

  const auto t = driver_fpn(f34, kCap, c);
  check_trace(f34, t);
  // The cap falls below the trilinear bound, so the first move is an increment.
  CHECK(t.steps.size() >= 2);
  CHECK(t.steps[0].kind != StepKind::terminal_count);
  for (std::size_t k = 0; k + 1 < t.steps.size(); ++k) CHECK(t.steps[k + 1].alpha > t.steps[k].alpha);

  Rng rng(9);
  const auto f53 = Group::vector(5, 3);
  check_trace(f53, driver_fpn(f53, random_subset(f53, rng, 0.6), {1, 2, 2}));
  check_trace(f53, driver_fpn(f53, random_subset(f53, rng, 0.1), {1, 2, 2}));
  CHECK_THROWS_AS(driver_fpn(Group::cyclic(7), {1}, {1, 1, -2}), Error);
}

TEST_CASE("trace verification catches tampering") {
  const auto f34 = Group::vector(3, 4);
  auto t = driver_fpn(f34, kCap, {1, 1, 1});
  REQUIRE(t.steps.size() >= 2);
  auto bad = t;
  bad.steps[0].u = 0;
  CHECK_FALSE(verify_trace(f34, bad).ok);
  bad = t;
  bad.steps.back().upsilon += 1;
  CHECK_FALSE(verify_trace(f34, bad).ok);
  bad = t;
  bad.steps[0].lambda_size = 0;
  CHECK_FALSE(verify_trace(f34, bad).ok);
  bad = t;
  bad.c_impl = 10;
  CHECK_FALSE(verify_trace(f34, bad).ok);
}
