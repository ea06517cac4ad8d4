#include "spectral/cover.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "spectral/rng.hpp"
#include "spectral/spectra.hpp"

namespace spectral {

CoverCertificate make_certificate(const Group& g, const CharacterSet& covered, const CharacterSet& gamma,
                                  const CharacterList& lambda, std::size_t d) {
  const CoverResult r = is_covered(g, covered, gamma, lambda);
  if (!r.covered) throw Error(ErrorKind::SupportViolation, "certificate does not cover the set");
  return {lambda, gamma, d, covered, r.witnesses};
}

CertificateCheck verify_certificate(const Group& g, const CoverCertificate& cert) {
  if (cert.lambda.size() > cert.d) return {false, "|Lambda| exceeds d"};
  if (cert.witnesses.size() != cert.covered.size()) return {false, "witness count mismatch"};
  for (std::size_t i = 0; i < cert.covered.size(); ++i) {
    if (cert.witnesses[i].element != cert.covered[i]) return {false, "witness out of order"};
    if (!check_witness(g, cert.witnesses[i], cert.gamma, cert.lambda))
      return {false, "witness fails for element " + std::to_string(cert.covered[i])};
  }
  return {};
}

namespace {

double mass_of(const WeightFn& omega, const CharacterSet& s) {
  long double total = 0;
  for (Character c : s) total += omega(c);
  return static_cast<double>(total);
}

CharacterList top_weight(const WeightFn& omega, std::size_t count) {
  std::vector<std::size_t> idx(omega.support().size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return omega.weights()[a] > omega.weights()[b]; });
  CharacterList out;
  for (std::size_t i = 0; i < std::min(count, idx.size()); ++i) out.push_back(omega.support()[idx[i]]);
  return out;
}

/// d draws with replacement, each character with probability omega / ||omega||_1,
/// collapsed to first occurrences.
CharacterList weighted_sample(const WeightFn& omega, int d, Rng& rng) {
  std::vector<double> cumulative(omega.weights().size());
  std::partial_sum(omega.weights().begin(), omega.weights().end(), cumulative.begin());
  CharacterList out;
  std::vector<std::uint8_t> seen(omega.group().order(), 0);
  for (int i = 0; i < d; ++i) {
    const double u = rng.uniform() * cumulative.back();
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    if (it == cumulative.end()) --it;
    const Character c = omega.support()[static_cast<std::size_t>(it - cumulative.begin())];
    if (!seen[c]) out.push_back(c);
    seen[c] = 1;
  }
  return out;
}

}  // namespace

DichotomyOutcome energy_or_cover(const WeightFn& omega, const CharacterSet& gamma, int m, int n, int d,
                                 std::uint64_t seed, const DichotomyOptions& options) {
  const Group& g = omega.group();
  if (omega.support().empty()) throw Error(ErrorKind::EmptyFunction, "omega vanishes");
  if (m < 2 || n < 2 || d < n || 4 * m > d)
    throw Error(ErrorKind::HypothesisViolated, "need m >= 2, d >= n >= 2, m <= d/4");
  if (!is_symmetric(g, gamma)) throw Error(ErrorKind::HypothesisViolated, "Gamma must be symmetric");
  if (options.enforce_hypotheses && omega.l2() > std::sqrt(static_cast<double>(m)) / d * omega.l1() * (1 + 1e-12))
    throw Error(ErrorKind::HypothesisViolated, "||omega||_2 exceeds m^{1/2} d^{-1} ||omega||_1");

  DichotomyOutcome out;
  out.mass_bound = static_cast<double>(n) / d * omega.l1();
  const std::size_t cover_d = 2 * static_cast<std::size_t>(d);
  for (int round = 0; round < options.cover_rounds; ++round) {
    CharacterList lambda;
    if (round == 0) {
      lambda = top_weight(omega, cover_d);
    } else {
      Rng rng(trial_seed(seed, static_cast<std::uint64_t>(round)));
      const CharacterSet delta0 = greedy_dissociated(g, weighted_sample(omega, d, rng), gamma);
      lambda = delta0;
      lambda.insert(lambda.end(), delta0.begin(), delta0.end());
    }
    const CoverResult r = is_covered(g, omega.support(), gamma, lambda);
    CharacterSet delta;
    for (const auto& w : r.witnesses) delta.push_back(w.element);
    const double mass = mass_of(omega, delta);
    if (mass < out.mass_bound * (1 - 1e-12)) continue;
    out.branch = DichotomyOutcome::Branch::cover;
    out.delta = delta;
    out.mass = mass;
    out.certificate = {lambda, gamma, cover_d, delta, r.witnesses};
    out.round = round;
    const auto check = verify_certificate(g, out.certificate);
    if (!check.ok) throw Error(ErrorKind::Inconclusive, "cover certificate failed: " + check.reason);
    if (mass_of(omega, out.certificate.covered) < out.mass_bound * (1 - 1e-12))
      throw Error(ErrorKind::Inconclusive, "cover mass failed re-verification");
    return out;
  }
  out.branch = DichotomyOutcome::Branch::small_energy;
  out.energy = additive_energy(omega, gamma, m);
  const double log_bound = (13.0 * m + 6.0 * n) * std::log(2.0) + 2.0 * m * std::log(static_cast<double>(m)) -
                           2.0 * m * std::log(static_cast<double>(d)) + 2.0 * m * std::log(omega.l1());
  out.energy_bound = std::exp(log_bound);
  if (!(out.energy <= out.energy_bound * (1 + 1e-9)))
    throw Error(ErrorKind::Inconclusive, "no verified cover and the energy bound fails");
  return out;
}

SpectralCoverResult spectral_cover(const DensityFn& f, const ElementSet& b, const WeightFn& omega, double eta,
                                   double eps, std::uint64_t seed, const SpectralCoverOptions& options) {
  const Group& g = f.group();
  require_same_group(g, omega.group());
  if (omega.support().empty()) throw Error(ErrorKind::EmptyFunction, "omega vanishes");
  if (!is_subset(f.support(), b)) throw Error(ErrorKind::HypothesisViolated, "f must be supported on B");
  if (!is_subset(omega.support(), spectrum(f, eta).members))
    throw Error(ErrorKind::HypothesisViolated, "omega is positive outside Delta_eta(f)");
  SpectralCoverResult out;
  out.alpha = f.l1() / (f.linf() * static_cast<double>(b.size()));
  const int l_alpha = cal_L(std::min(1.0, out.alpha));
  const double eps_max = std::exp(-8.0 * cal_L(eta) * l_alpha);
  if (!(eps >= 0.0) || (options.enforce_eps_bound && eps > eps_max)) throw Error(ErrorKind::HypothesisViolated, "eps exceeds exp(-8 L(eta) L(alpha))");
  out.mass_bound = std::ldexp(eta, -12) * omega.l1();
  out.cover_budget = std::ldexp(static_cast<double>(l_alpha), 14) / eta;
  const auto budget = static_cast<std::size_t>(std::floor(out.cover_budget));
  const CharacterSet gamma = set_spectrum(g, b, eps);

  const bool chernoff =
      options.branch == SpectralCoverOptions::Branch::chernoff ||
      (options.branch == SpectralCoverOptions::Branch::automatic &&
       omega.l2() >= std::ldexp(eta, -12) / std::sqrt(static_cast<double>(l_alpha)) * omega.l1());
  out.chernoff_branch = chernoff;

  CharacterSet chosen;
  CharacterList fallback_lambda;
  if (chernoff) {
    const double scale = std::ldexp(static_cast<double>(l_alpha), 13) / eta / omega.l1();
    bool found = false;
    for (int attempt = 0; attempt < options.retries && !found; ++attempt) {
      out.attempts = attempt + 1;
      Rng rng(trial_seed(seed, static_cast<std::uint64_t>(attempt)));
      CharacterSet pick;
      for (std::size_t i = 0; i < omega.support().size(); ++i)
        if (rng.bernoulli(std::min(1.0, scale * omega.weights()[i]))) pick.push_back(omega.support()[i]);
      if (pick.size() <= budget && mass_of(omega, pick) >= out.mass_bound) {
        chosen = pick;
        found = true;
      }
    }
    if (!found) throw Error(ErrorKind::Exhausted, "no admissible random selection within the retry budget");
    fallback_lambda = chosen;
  } else {
    const int m = l_alpha;
    const int d = static_cast<int>(std::floor(std::ldexp(static_cast<double>(m), 12) / eta));
    DichotomyOptions opts;
    opts.enforce_hypotheses = false;
    const auto outcome = energy_or_cover(omega, gamma, m, m, d, seed, opts);
    if (outcome.branch != DichotomyOutcome::Branch::cover)
      throw Error(ErrorKind::Inconclusive, "energy branch returned small energy against the lower bound");
    out.attempts = outcome.round + 1;
    chosen = outcome.delta;
    fallback_lambda = outcome.certificate.lambda;
  }
  // Elements already in Gamma - Gamma need no generator.
  const CoverResult plain = is_covered(g, chosen, gamma, {});
  CharacterList lambda = plain.uncovered;
  if (fallback_lambda.size() < lambda.size()) lambda = fallback_lambda;
  out.delta_prime = chosen;
  out.mass = mass_of(omega, chosen);
  out.certificate = make_certificate(g, chosen, gamma, lambda, budget);
  const auto check = verify_certificate(g, out.certificate);
  if (!check.ok) throw Error(ErrorKind::Inconclusive, "spectral cover certificate failed: " + check.reason);
  if (out.mass < out.mass_bound) throw Error(ErrorKind::Inconclusive, "spectral cover mass below bound");
  return out;
}

}  // namespace spectral
