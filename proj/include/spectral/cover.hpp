#pragma once

#include <cstdint>
#include <string>

#include "spectral/dissociation.hpp"
#include "spectral/energy.hpp"

namespace spectral {

/// A witness that `covered` lies in Gamma - Gamma + <Lambda> with |Lambda| <= d.
struct CoverCertificate {
  CharacterList lambda;
  CharacterSet gamma;
  std::size_t d = 0;
  CharacterSet covered;
  /// Aligned with covered.
  std::vector<CoverWitness> witnesses;
};

/// Builds the witnesses; throws SupportViolation when some element is not covered.
CoverCertificate make_certificate(const Group& g, const CharacterSet& covered, const CharacterSet& gamma,
                                  const CharacterList& lambda, std::size_t d);

struct CertificateCheck {
  bool ok = true;
  std::string reason;
};

/// Re-derives every witness by group arithmetic; independent of the search.
CertificateCheck verify_certificate(const Group& g, const CoverCertificate& cert);

struct DichotomyOptions {
  /// Reject inputs violating ||omega||_2 <= m^{1/2} d^{-1} ||omega||_1.
  bool enforce_hypotheses = true;
  /// Candidate rounds for the cover search; round 0 is the top-weight candidate.
  int cover_rounds = 65;
};

struct DichotomyOutcome {
  enum class Branch { cover, small_energy };
  Branch branch = Branch::cover;
  CharacterSet delta;
  double mass = 0;
  double mass_bound = 0;
  CoverCertificate certificate;
  double energy = 0;
  double energy_bound = 0;
  int round = -1;
};

/// Either a 2d-covered Delta with omega(Delta) >= (n/d)||omega||_1, or
/// E_{2m}(omega, Gamma) <= 2^{13m+6n} m^{2m} d^{-2m} ||omega||_1^{2m}. The
/// returned inequality is re-verified; Inconclusive if neither verifies.
DichotomyOutcome energy_or_cover(const WeightFn& omega, const CharacterSet& gamma, int m, int n, int d,
                                 std::uint64_t seed, const DichotomyOptions& options = {});

struct SpectralCoverOptions {
  enum class Branch { automatic, chernoff, energy };
  Branch branch = Branch::automatic;
  int retries = 64;
  /// Reject eps above exp(-8 L(eta) L(alpha)). Callers with their own eps rule
  /// may turn this off; the certificate is verified either way.
  bool enforce_eps_bound = true;
};

struct SpectralCoverResult {
  CharacterSet delta_prime;
  CoverCertificate certificate;
  double mass = 0;
  double mass_bound = 0;
  /// 2^14 L(alpha) / eta.
  double cover_budget = 0;
  double alpha = 0;
  bool chernoff_branch = true;
  int attempts = 0;
};

/// A heavy part of Delta_eta(f) covered by Delta_eps(B) with few generators.
SpectralCoverResult spectral_cover(const DensityFn& f, const ElementSet& b, const WeightFn& omega, double eta,
                                   double eps, std::uint64_t seed, const SpectralCoverOptions& options = {});

}  // namespace spectral
