#include <doctest.h>

#include <cmath>

#include "spectral/cover.hpp"
#include "spectral/rng.hpp"
#include "spectral/spectra.hpp"

using namespace spectral;

namespace {

CharacterSet random_subset(Rng& rng, Element n, double p) {
  CharacterSet s;
  for (Element x = 0; x < n; ++x)
    if (rng.bernoulli(p)) s.push_back(x);
  return s;
}

}  // namespace

TEST_CASE("certificates are checked independently") {
  const auto g = Group::cyclic(13);
  auto cert = make_certificate(g, {1, 2, 4}, {0}, {1, 3}, 2);
  CHECK(verify_certificate(g, cert).ok);
  cert.witnesses[1].signs[0] = -cert.witnesses[1].signs[0];
  CHECK_FALSE(verify_certificate(g, cert).ok);
  cert = make_certificate(g, {1, 2, 4}, {0}, {1, 3}, 1);
  CHECK_FALSE(verify_certificate(g, cert).ok);
  CHECK_THROWS_AS(make_certificate(g, {5}, {0}, {1, 3}, 2), Error);
}

TEST_CASE("dichotomy on a point mass") {
  const auto g = Group::cyclic(101);
  const WeightFn omega(g, {{17, 2.5}});
  CHECK_THROWS_AS(energy_or_cover(omega, {0}, 2, 2, 8, 1), Error);
  DichotomyOptions relaxed;
  relaxed.enforce_hypotheses = false;
  const auto out = energy_or_cover(omega, {0}, 2, 2, 8, 1, relaxed);
  CHECK(out.branch == DichotomyOutcome::Branch::cover);
  CHECK(out.delta == CharacterSet{17});
  CHECK(out.certificate.lambda == CharacterList{17});
  CHECK(out.mass == doctest::Approx(2.5));
}

TEST_CASE("dichotomy on a dissociated set, both branches") {
  const auto g = Group::cyclic(101);
  const CharacterSet base = {1, 2, 4, 8, 16, 32, 64, 27, 54, 7};
  const auto delta = greedy_dissociated(g, base, {0});
  const auto omega = WeightFn::indicator(g, delta);
  DichotomyOptions relaxed;
  relaxed.enforce_hypotheses = false;
  const auto cover = energy_or_cover(omega, {0}, 2, 2, 8, 3, relaxed);
  CHECK(cover.branch == DichotomyOutcome::Branch::cover);
  CHECK(cover.mass >= cover.mass_bound);
  CHECK(verify_certificate(g, cover.certificate).ok);

  relaxed.cover_rounds = 0;
  const auto energy = energy_or_cover(omega, {0}, 2, 2, 8, 3, relaxed);
  CHECK(energy.branch == DichotomyOutcome::Branch::small_energy);
  CHECK(energy.energy <= energy.energy_bound);
  CHECK(energy.energy == doctest::Approx(additive_energy(omega, {0}, 2, EnergyMethod::enumerate)));
}

TEST_CASE("dichotomy on admissible random instances") {
  Rng rng(31);
  int done = 0;
  while (done < 25) {
    const auto g = Group::cyclic(rng.bernoulli(0.5) ? 101 : 211);
    const int d = 8 + static_cast<int>(rng.below(5));
    const int n = 2 + static_cast<int>(rng.below(static_cast<std::uint64_t>(d - 1)));
    std::vector<std::pair<Character, double>> ws;
    for (Character c : random_subset(rng, g.order(), 0.7)) ws.emplace_back(c, 0.5 + 0.5 * rng.uniform());
    const WeightFn omega(g, ws);
    if (omega.l2() > std::sqrt(2.0) / d * omega.l1()) continue;
    const Character a = static_cast<Character>(rng.below(g.order()));
    const CharacterSet gamma = make_set({0, a, g.neg(a)});
    const auto out = energy_or_cover(omega, gamma, 2, n, d, rng.next());
    if (out.branch == DichotomyOutcome::Branch::cover) {
      CHECK(out.mass >= out.mass_bound * (1 - 1e-12));
      CHECK(out.certificate.lambda.size() <= 2u * d);
      CHECK(verify_certificate(g, out.certificate).ok);
    } else {
      CHECK(out.energy <= out.energy_bound);
    }
    ++done;
  }
}

TEST_CASE("spectral cover") {
  Rng rng(41);
  const auto g = Group::cyclic(101);
  for (int trial = 0; trial < 10; ++trial) {
    const auto a = random_subset(rng, 101, 0.3);
    const auto f = DensityFn::indicator(g, a);
    const double eta = 0.3;
    const auto omega = WeightFn::indicator(g, spectrum(f, eta).members);
    const double alpha = static_cast<double>(a.size()) / 101;
    const double eps = std::exp(-8.0 * cal_L(eta) * cal_L(alpha));
    CHECK_THROWS_AS(spectral_cover(f, all_elements(g), omega, eta, 1e-6, 1), Error);
    for (auto branch : {SpectralCoverOptions::Branch::automatic, SpectralCoverOptions::Branch::energy}) {
      SpectralCoverOptions opts;
      opts.branch = branch;
      const auto r = spectral_cover(f, all_elements(g), omega, eta, eps, 7, opts);
      CHECK(r.mass >= std::ldexp(eta, -12) * omega.l1());
      CHECK(static_cast<double>(r.certificate.lambda.size()) <= r.cover_budget);
      CHECK(is_subset(r.delta_prime, omega.support()));
      CHECK(r.certificate.gamma == CharacterSet{0});
      const auto check = is_covered(g, r.delta_prime, r.certificate.gamma, r.certificate.lambda);
      CHECK(check.covered);
      CHECK(verify_certificate(g, r.certificate).ok);
      // Only 0 lies in Gamma - Gamma = {0}.
      CHECK(r.certificate.lambda.size() + (contains(r.delta_prime, 0) ? 1 : 0) >= r.delta_prime.size());
    }
  }
}

TEST_CASE("spectral cover of the full group") {
  const auto g = Group::cyclic(31);
  const auto f = DensityFn::indicator(g, all_elements(g));
  const auto omega = WeightFn::indicator(g, spectrum(f, 0.5).members);
  const auto r = spectral_cover(f, all_elements(g), omega, 0.5, 0.0, 3);
  CHECK(r.delta_prime == CharacterSet{0});
  CHECK(r.certificate.lambda.empty());
}
