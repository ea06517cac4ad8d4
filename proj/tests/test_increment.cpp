#include <doctest.h>

#include <cmath>

#include "spectral/bohr.hpp"
#include "spectral/increment.hpp"
#include "spectral/rng.hpp"

using namespace spectral;

namespace {

std::uint64_t literal_count(const Group& g, const ElementSet& a, const EquationCoeffs& c) {
  std::uint64_t n = 0;
  for (const Element x : a)
    for (const Element y : a)
      for (const Element z : a)
        n += g.add(g.add(g.scale(c.c1, x), g.scale(c.c2, y)), g.scale(c.c3, z)) == 0;
  return n;
}

ElementSet random_subset(const Group& g, Rng& rng, double density) {
  ElementSet s;
  for (Element x = 0; x < g.order(); ++x)
    if (rng.bernoulli(density)) s.push_back(x);
  if (s.empty()) s.push_back(static_cast<Element>(rng.below(g.order())));
  return s;
}

ElementSet interval(const Group& g, std::uint32_t lo, std::uint32_t hi) {
  ElementSet s;
  for (std::uint32_t x = lo; x <= hi; ++x) s.push_back(x % g.order());
  return make_set(s);
}

// Largest symmetric interval {|x| <= r} meeting the B'' hypotheses.
BohrFactory largest_interval(const Group& g, const ElementSet& b, const ElementSet& b_prime) {
  return [g, b, b_prime](const ThdeSpectrum& spec) {
    ElementSet best{0};
    for (std::uint32_t r = 1; 2 * r < g.order(); ++r) {
      ElementSet cand = make_set([&] {
        std::vector<Element> v;
        for (std::uint32_t x = 0; x <= r; ++x) {
          v.push_back(x);
          v.push_back(g.neg(x));
        }
        return v;
      }());
      if (!all_hold(thde_hypotheses(g, b, b_prime, spec, cand))) break;
      best = cand;
    }
    return best;
  };
}

BohrFactory control_factory(const Group& g) {
  return [g](const ThdeSpectrum& spec) {
    const double d = static_cast<double>(std::max<std::size_t>(1, spec.lambda.size()));
    return control_set(g, spec.lambda, 1.0 / (4 * d));
  };
}

}  // namespace

TEST_CASE("solution counts") {
  const auto z7 = Group::cyclic(7);
  const EquationCoeffs c{1, 1, -2};
  CHECK(count_solutions(z7, {0, 1, 2}, c).count == 5);
  CHECK(count_solutions(z7, all_elements(z7), c).count == 49);
  CHECK(count_solutions(z7, {4}, c).count == 1);
  // {0,1,3,4,9,10,12,13} + 1 has no 3AP and no wraparound in Z_101.
  const auto z101 = Group::cyclic(101);
  const ElementSet salem{1, 2, 4, 5, 10, 11, 13, 14};
  CHECK(count_solutions(z101, salem, c).count == salem.size());

  Rng rng(11);
  const auto z31 = Group::cyclic(31);
  for (int t = 0; t < 30; ++t) {
    const auto a = random_subset(z31, rng, 0.3);
    const EquationCoeffs cc{3, 5, -8};
    const auto s = count_solutions(z31, a, cc);
    CHECK(s.count == literal_count(z31, a, cc));
    CHECK(s.count >= a.size());
  }
  const auto f33 = Group::vector(3, 3);
  const auto f52 = Group::vector(5, 2);
  for (int t = 0; t < 10; ++t) {
    const auto a = random_subset(f33, rng, 0.3);
    CHECK(count_solutions(f33, a, {1, 1, 1}).count == literal_count(f33, a, {1, 1, 1}));
    const auto b = random_subset(f52, rng, 0.4);
    CHECK(count_solutions(f52, b, {1, 2, 2}).count == literal_count(f52, b, {1, 2, 2}));
  }
}

TEST_CASE("coefficient validation") {
  CHECK_THROWS_AS(count_solutions(Group::cyclic(2), {0}, {1, 1, -2}), Error);
  try {
    count_solutions(Group::cyclic(7), {0}, {1, 1, 1});
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidInput);
  }
  try {
    count_solutions(Group::cyclic(5), {0}, {5, 1, -6});
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::CoefficientNotUnit);
  }
  CHECK_NOTHROW(validate_coeffs(Group::vector(3, 2), {1, 1, 1}));
}

TEST_CASE("solution counts are translation and dilation invariant") {
  Rng rng(5);
  const auto z101 = Group::cyclic(101);
  CHECK(upsilon_invariance(z101, {1, 5, 9}, {1, 1, -2}, 0, 1));
  for (int t = 0; t < 100; ++t) {
    const auto a = random_subset(z101, rng, 0.1);
    const auto shift_by = static_cast<Element>(rng.below(101));
    const auto u = static_cast<std::int64_t>(1 + rng.below(100));
    CHECK(upsilon_invariance(z101, a, {2, 3, -5}, shift_by, u));
  }
  const auto f33 = Group::vector(3, 3);
  for (int t = 0; t < 10; ++t)
    CHECK(upsilon_invariance(f33, random_subset(f33, rng, 0.3), {1, 1, 1}, static_cast<Element>(rng.below(27)), 2));
}

TEST_CASE("balanced functions and trilinear counts") {
  const auto g = Group::cyclic(31);
  const auto b = interval(g, 0, 19);
  const auto bal = balanced_function(g, {1, 4, 7}, b);
  CHECK(std::abs(bal.sum()) < 1e-9);
  for (Element x = 20; x < 31; ++x) CHECK(bal(x) == 0);
  // x + y in {2} with x, y in {0, 1, 2}: (0,2), (1,1), (2,0).
  CHECK(trilinear_count(g, {0, 1, 2}, {0, 1, 2}, {2}) == 3);
}

TEST_CASE("L2 to L-infinity increment") {
  const auto g = Group::cyclic(101);
  const auto all = all_elements(g);
  Rng rng(2);
  // nu = 0: the mean is alpha |B'| and the maximum reaches it.
  const auto a = random_subset(g, rng, 0.4);
  const VectorXr fa = indicator_vector(g, a);
  const ElementSet bp{0, 1, 100};
  const auto zero = de1_l2_increment(g, fa, all, {}, 0.0, bp);
  CHECK(zero.hypotheses_hold);
  CHECK(zero.conclusion_holds);
  CHECK(zero.sup >= static_cast<double>(a.size()) / 101 * 3 - 1e-9);

  // f = (1 + cos(2 pi x / 101)) / 2 has f_bal^(+-1) = N / 4.
  VectorXr f(101);
  for (int x = 0; x < 101; ++x) f(x) = 0.5 * (1 + std::cos(2 * M_PI * x / 101));
  const auto small = interval(g, 96, 106);
  const auto r = de1_l2_increment(g, f, all, {1, 100}, 0.4, small);
  CHECK(r.hypotheses[0].holds);
  CHECK(r.hypotheses[1].holds);
  CHECK_FALSE(r.hypotheses[2].holds);
  CHECK(r.size_convention_matters);
  CHECK(r.hypotheses[3].holds);
  CHECK(r.witness == 0);
  CHECK(r.conclusion_holds);

  const auto bad = de1_l2_increment(g, f, all, {1, 100}, 0.4, {0, 1});
  CHECK_FALSE(bad.hypotheses_hold);
  CHECK(bad.hypotheses[1].name == "B' symmetric");
  CHECK_FALSE(bad.hypotheses[1].holds);
}

TEST_CASE("control from a cover") {
  const auto g = Group::cyclic(211);
  const CoverCertificate cert = make_certificate(g, {0, 1, 5, 6, 206, 210}, {0, 1, 210}, {5}, 1);
  const auto trivial = de2_control_from_cover(g, cert, {0});
  CHECK(trivial.precondition);
  CHECK(trivial.conclusion_holds);
  CHECK(trivial.worst_ratio == doctest::Approx(1.0));

  const BohrSetZ b(g, {{1, 5}, {0.125, 0.25}});
  const auto r = de2_control_from_cover(g, cert, b.members());
  CHECK(r.precondition);
  CHECK(r.conclusion_holds);
  CHECK(r.worst_ratio >= 0.5);

  const auto wide = de2_control_from_cover(g, cert, all_elements(g));
  CHECK_FALSE(wide.precondition);
}

TEST_CASE("control from approximate closure") {
  const auto g = Group::cyclic(211);
  const BohrSetZ b(g, {{1}, {0.5}});
  const auto trivial = de3_control_from_addition(g, b.members(), {0}, 0.01, 0.3);
  CHECK(trivial.precondition);
  CHECK(trivial.conclusion_holds);

  const auto narrow = b.dilate(0.14).members();
  REQUIRE(narrow.size() == 5);
  const double excess = static_cast<double>(sumset_excess(g, b.members(), narrow, b.members()));
  const double c = 0.25;
  const double eps = excess / (c * static_cast<double>(b.size()));
  const auto r = de3_control_from_addition(g, b.members(), narrow, c, eps);
  CHECK(r.precondition);
  CHECK(r.conclusion_holds);

  Rng rng(8);
  const auto scattered = random_subset(g, rng, 0.2);
  CHECK_FALSE(de3_control_from_addition(g, b.members(), scattered, 0.25, 0.1).precondition);
}

TEST_CASE("weighted spectrum increment") {
  const auto g = Group::cyclic(101);
  const auto all = all_elements(g);
  // A = B forces nu = 0; any translate attains the mean.
  const auto deg = thde_increment(g, all, all, indicator_vector(g, {3, 4}), all,
                                  [](const ThdeSpectrum&) { return ElementSet{0, 1, 100}; }, 1);
  CHECK(deg.spectrum.nu == doctest::Approx(0.0));
  CHECK(deg.spectrum.lambda.empty());
  CHECK(deg.status == ThdeResult::Status::increment);

  // A concentrated on a Bohr set inside Z_211, f the indicator of a smaller one.
  const auto z211 = Group::cyclic(211);
  const auto b211 = all_elements(z211);
  const auto a = BohrSetZ(z211, {{1}, {1.0}}).members();
  const auto bp = BohrSetZ(z211, {{1}, {0.1}}).members();
  const auto eng = thde_increment(z211, a, b211, indicator_vector(z211, bp), bp, largest_interval(z211, b211, bp), 4);
  CHECK(eng.spectrum.nu > 0);
  CHECK(all_hold(eng.spectrum.checks));
  CHECK(eng.status == ThdeResult::Status::increment);
  CHECK(eng.new_density >= eng.target);
  CHECK(eng.hits == static_cast<std::size_t>(std::llround(eng.new_density * eng.b_dprime.size())));

  // Random instances with B' = G: the control set of Lambda meets every hypothesis.
  Rng rng(21);
  int ran = 0;
  for (int t = 0; t < 8; ++t) {
    const auto at = random_subset(g, rng, 0.3);
    const auto ft = random_subset(g, rng, 0.3);
    const auto res = thde_increment(g, at, all, indicator_vector(g, ft), all, control_factory(g), 100 + t);
    if (res.status == ThdeResult::Status::hypothesis_unmet) continue;
    ++ran;
    CHECK(res.status == ThdeResult::Status::increment);
    CHECK(res.spectrum.lambda.size() <= res.spectrum.lambda_bound);
  }
  CHECK(ran > 0);
}

TEST_CASE("main dichotomy step") {
  const auto g = Group::cyclic(101);
  const auto all = all_elements(g);
  const auto full = maindi_step(g, all, all, all, all, all, control_factory(g), 1);
  CHECK(full.hypothesis_holds);
  CHECK(full.many_solutions);
  CHECK(full.count == 101u * 101u);
  CHECK(full.bound == doctest::Approx(101.0 * 101.0 / 4));

  // The middle third is sum-free, so the trilinear count vanishes.
  const auto mid = interval(g, 34, 67);
  const auto r = maindi_step(g, mid, mid, mid, all, all, control_factory(g), 3);
  CHECK(r.hypothesis_holds);
  CHECK(r.count == 0);
  CHECK_FALSE(r.many_solutions);
  REQUIRE(r.increment.has_value());
  CHECK((r.role == 2 || r.role == 3));
  CHECK(r.increment->status == ThdeResult::Status::increment);
  CHECK(all_hold(r.checks));

  const ElementSet salem{1, 2, 4, 5, 10, 11, 13, 14};
  const auto s = maindi_step(g, salem, salem, salem, all, all, control_factory(g), 5);
  CHECK(s.many_solutions);
  CHECK(s.count == trilinear_count(g, salem, salem, salem));

  const auto bad = maindi_step(g, {0}, interval(g, 20, 40), interval(g, 20, 40), interval(g, 0, 60), interval(g, 0, 60), control_factory(g), 1);
  CHECK_FALSE(bad.hypothesis_holds);
}
