#include "spectral/increment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "spectral/error.hpp"
#include "spectral/rng.hpp"

namespace spectral {

namespace {

double sum_abs_times_sq(const VectorXc& a, const VectorXc& b) {
  double s = 0;
  for (Eigen::Index i = 0; i < a.size(); ++i) s += std::abs(a(i)) * std::norm(b(i));
  return s;
}

NamedInequality at_most(std::string name, double lhs, double rhs) {
  return {std::move(name), lhs, rhs, lhs <= rhs + 1e-9 * std::max(1.0, std::abs(rhs))};
}

NamedInequality at_least(std::string name, double lhs, double rhs) {
  return {std::move(name), lhs, rhs, lhs >= rhs - 1e-9 * std::max(1.0, std::abs(rhs))};
}

void require_subset(const ElementSet& a, const ElementSet& b, const char* what) {
  if (!is_subset(a, b)) throw Error(ErrorKind::InvalidInput, what);
}

}  // namespace

void validate_coeffs(const Group& g, const EquationCoeffs& c) {
  const std::int64_t sum = c.c1 + c.c2 + c.c3;
  const bool zero = g.is_cyclic() ? sum == 0 : g.reduce_scalar(sum) == 0;
  if (!zero) throw Error(ErrorKind::InvalidInput, "coefficients must sum to zero");
  for (const std::int64_t ci : {c.c1, c.c2, c.c3})
    if (!g.is_unit(ci)) throw Error(ErrorKind::CoefficientNotUnit, "coefficient " + std::to_string(ci) + " is not a unit");
}

std::uint64_t trilinear_count(const Group& g, const ElementSet& a1, const ElementSet& a2, const ElementSet& a3) {
  const auto in3 = indicator_mask(g, a3);
  std::uint64_t count = 0;
  for (const Element x : a1)
    for (const Element y : a2) count += in3[g.add(x, y)];
  return count;
}

SolutionCount count_solutions(const Group& g, const ElementSet& a, const EquationCoeffs& c) {
  validate_coeffs(g, c);
  SolutionCount out;
  const auto in = indicator_mask(g, a);
  // x3 = -c3^{-1} (c1 x1 + c2 x2) is determined by the pair.
  const std::int64_t back = -static_cast<std::int64_t>(g.inverse_scalar(c.c3));
  for (const Element x1 : a) {
    const Element s1 = g.scale(c.c1, x1);
    for (const Element x2 : a) out.direct += in[g.scale(back, g.add(s1, g.scale(c.c2, x2)))];
  }
  const VectorXc hat = fourier_transform(g, indicator_vector(g, a));
  double acc = 0;
  for (Element gamma = 0; gamma < g.order(); ++gamma)
    acc += (hat(g.scale(c.c1, gamma)) * hat(g.scale(c.c2, gamma)) * hat(g.scale(c.c3, gamma))).real();
  out.fourier = acc / g.order();
  const double rounded = std::round(out.fourier);
  if (std::abs(out.fourier - rounded) > 1e-6 * std::max(1.0, std::abs(out.fourier)) ||
      rounded != static_cast<double>(out.direct))
    throw Error(ErrorKind::Inconclusive, "Fourier and direct solution counts disagree");
  out.count = out.direct;
  return out;
}

bool upsilon_invariance(const Group& g, const ElementSet& a, const EquationCoeffs& c, Element t, std::int64_t u) {
  if (!g.is_unit(u)) throw Error(ErrorKind::CoefficientNotUnit, "dilation must be a unit");
  const auto moved = translate(g, dilate(g, a, u), t);
  return count_solutions(g, a, c).count == count_solutions(g, moved, c).count;
}

VectorXr balanced_function(const Group& g, const ElementSet& a, const ElementSet& b) {
  if (b.empty()) throw Error(ErrorKind::EmptyFunction, "B is empty");
  const double alpha = static_cast<double>(a.size()) / static_cast<double>(b.size());
  VectorXr out = indicator_vector(g, a);
  for (const Element x : b) out(x) -= alpha;
  return out;
}

bool all_hold(const std::vector<NamedInequality>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.holds; });
}

De1Result de1_l2_increment(const Group& g, const VectorXr& f, const ElementSet& b, const CharacterSet& gamma,
                           double nu, const ElementSet& b_prime) {
  if (static_cast<std::uint32_t>(f.size()) != g.order())
    throw Error(ErrorKind::GroupMismatch, "function length does not match group order");
  if (b.empty() || b_prime.empty()) throw Error(ErrorKind::EmptyFunction, "B and B' must be nonempty");
  const auto in_b = indicator_mask(g, b);
  for (Element x = 0; x < g.order(); ++x) {
    if (f(x) < 0 || f(x) > 1) throw Error(ErrorKind::InvalidInput, "f must take values in [0, 1]");
    if (f(x) != 0 && !in_b[x]) throw Error(ErrorKind::SupportViolation, "f must be supported on B");
  }
  De1Result out;
  const double nb = static_cast<double>(b.size());
  const double l1 = f.sum();
  const double alpha = l1 / nb;
  VectorXr bal = f;
  for (const Element x : b) bal(x) -= alpha;
  const VectorXc bal_hat = fourier_transform(g, bal);
  double energy = 0;
  for (const Character c : gamma) energy += std::norm(bal_hat(c));
  out.hypotheses.push_back(at_least("sum_Gamma |f_bal^|^2 >= nu alpha ||f||_1 N", energy, nu * alpha * l1 * g.order()));
  out.hypotheses.push_back({"B' symmetric", is_symmetric(g, b_prime) ? 1.0 : 0.0, 1.0, is_symmetric(g, b_prime)});
  const VectorXc bp_hat = fourier_transform(g, indicator_vector(g, b_prime));
  double low = std::numeric_limits<double>::infinity();
  for (const Character c : gamma) low = std::min(low, std::abs(bp_hat(c)));
  if (gamma.empty()) low = nb;
  out.hypotheses.push_back(at_least("|B'^(gamma)| >= |B|/2 on Gamma", low, nb / 2));
  const bool with_bp = low >= static_cast<double>(b_prime.size()) / 2 - 1e-9;
  out.size_convention_matters = with_bp != out.hypotheses.back().holds;
  const double over = static_cast<double>(sumset_excess(g, sumset(g, b_prime, b_prime), b, b));
  out.hypotheses.push_back(at_most("|(2B'+B) \\ B| <= 2^-4 nu alpha |B|", over, std::ldexp(nu * alpha * nb, -4)));
  out.hypotheses_hold = all_hold(out.hypotheses);

  std::vector<double> conv(g.order(), 0.0);
  for (const Element y : b)
    if (f(y) != 0)
      for (const Element z : b_prime) conv[g.add(y, z)] += f(y);
  out.sup = *std::max_element(conv.begin(), conv.end());
  for (Element x = 0; x < g.order(); ++x)
    if (conv[x] >= out.sup - 1e-12) {
      out.witness = x;
      break;
    }
  out.target = (1 + nu / 8) * alpha * static_cast<double>(b_prime.size());
  out.conclusion_holds = out.sup >= out.target - 1e-9;
  return out;
}

De2Result de2_control_from_cover(const Group& g, const CoverCertificate& cert, const ElementSet& b) {
  if (b.empty()) throw Error(ErrorKind::EmptyFunction, "B is empty");
  De2Result out;
  const double lambda_eps =
      cert.d == 0 ? std::numeric_limits<double>::infinity() : 1.0 / (4.0 * static_cast<double>(cert.d));
  out.lambda_control = has_control(g, b, make_set(cert.lambda), lambda_eps);
  out.gamma_control = has_control(g, b, cert.gamma, 0.125);
  out.precondition = out.lambda_control.holds && out.gamma_control.holds;
  const double nb = static_cast<double>(b.size());
  for (const Character c : cert.covered) {
    std::complex<double> acc(0);
    for (const Element x : b) acc += g.character(c, x);
    const double ratio = std::abs(acc) / nb;
    if (ratio < out.worst_ratio) {
      out.worst_ratio = ratio;
      out.worst_gamma = c;
    }
  }
  out.conclusion_holds = out.worst_ratio >= 0.5 - 1e-12;
  return out;
}

De3Result de3_control_from_addition(const Group& g, const ElementSet& b, const ElementSet& b_prime, double c,
                                    double eps) {
  if (b.empty()) throw Error(ErrorKind::EmptyFunction, "B is empty");
  De3Result out;
  out.excess = static_cast<double>(sumset_excess(g, b, b_prime, b));
  out.allowed = c * eps * static_cast<double>(b.size());
  out.precondition = out.excess <= out.allowed + 1e-9;
  out.control = has_control(g, b_prime, set_spectrum(g, b, eps), 2 * c);
  out.conclusion_holds = out.control.holds;
  return out;
}

ThdeSpectrum thde_spectrum(const Group& g, const ElementSet& a, const ElementSet& b, const VectorXr& f,
                           const ElementSet& b_prime, std::uint64_t seed) {
  if (static_cast<std::uint32_t>(f.size()) != g.order())
    throw Error(ErrorKind::GroupMismatch, "function length does not match group order");
  if (b.empty() || b_prime.empty() || a.empty()) throw Error(ErrorKind::EmptyFunction, "A, B, B' must be nonempty");
  require_subset(a, b, "A must lie in B");
  const auto in_bp = indicator_mask(g, b_prime);
  for (Element x = 0; x < g.order(); ++x) {
    if (std::abs(f(x)) > 1) throw Error(ErrorKind::InvalidInput, "f must take values in [-1, 1]");
    if (f(x) != 0 && !in_bp[x]) throw Error(ErrorKind::SupportViolation, "f must be supported on B'");
  }
  const double l1 = f.cwiseAbs().sum();
  if (l1 == 0) throw Error(ErrorKind::EmptyFunction, "f vanishes");
  ThdeSpectrum out;
  const double na = static_cast<double>(a.size());
  out.alpha = na / static_cast<double>(b.size());
  out.tau = l1 / static_cast<double>(b.size());
  const VectorXc f_hat = fourier_transform(g, f);
  const VectorXc a_hat = fourier_transform(g, balanced_function(g, a, b));
  out.nu = sum_abs_times_sq(f_hat, a_hat) / (out.alpha * l1 * na * g.order());
  const double na_prod = out.nu * out.alpha;
  out.eta = na_prod / 2;
  out.eps = na_prod > 0 ? std::exp(-16.0 * cal_L(std::min(1.0, na_prod)) * cal_L(std::min(1.0, out.tau))) : 0.0;
  // An underflowed eps still means "every nonzero coefficient"; keep it positive
  // so the spectrum stays Delta_eps rather than the whole dual group.
  const double eps_eff = std::max(out.eps, std::numeric_limits<double>::denorm_min());
  out.gamma = set_spectrum(g, b_prime, eps_eff);
  if (out.eta <= 0) {
    out.lambda_bound = std::numeric_limits<double>::infinity();
    return out;
  }
  out.lambda_bound = std::ldexp(static_cast<double>(cal_L(std::min(1.0, out.tau))), 16) / na_prod;

  const DensityFn fd = DensityFn::real(g, f);
  const double alpha_f = l1 / (fd.linf() * static_cast<double>(b_prime.size()));
  SpectralCoverOptions opts;
  opts.enforce_eps_bound = false;
  CharacterList lambda;
  bool all_levels = true;
  for (int i = 0; std::ldexp(out.eta, i) <= 1.0; ++i) {
    const double eta_i = std::ldexp(out.eta, i);
    const auto level = level_spectrum(f_hat, l1, eta_i);
    std::vector<std::pair<Character, double>> w;
    for (const Character c : level.members) {
      const double v = std::abs(f_hat(c)) * std::norm(a_hat(c));
      if (v > 0) w.emplace_back(c, v);
    }
    if (w.empty()) continue;
    ++out.levels;
    const std::string tag = "level " + std::to_string(i);
    out.checks.push_back(at_most(tag + ": eps <= exp(-8 L(eta_i) L(alpha_f))", out.eps,
                                 std::exp(-8.0 * cal_L(eta_i) * cal_L(std::min(1.0, alpha_f)))));
    try {
      const auto cover =
          spectral_cover(fd, b_prime, WeightFn(g, std::move(w)), eta_i, eps_eff, trial_seed(seed, i), opts);
      out.delta_prime = set_union(out.delta_prime, cover.delta_prime);
      lambda.insert(lambda.end(), cover.certificate.lambda.begin(), cover.certificate.lambda.end());
    } catch (const Error& e) {
      all_levels = false;
      out.checks.push_back({tag + ": cover failed (" + std::string(e.what()) + ")", 0, 1, false});
    }
  }
  out.lambda = make_set(std::move(lambda));
  out.checks.push_back({"every level covered", all_levels ? 1.0 : 0.0, 1.0, all_levels});
  out.checks.push_back(at_most("|Lambda| <= 2^16 L(tau) / (nu alpha)", static_cast<double>(out.lambda.size()),
                               out.lambda_bound));
  return out;
}

std::vector<NamedInequality> thde_hypotheses(const Group& g, const ElementSet& b, const ElementSet& b_prime,
                                             const ThdeSpectrum& spec, const ElementSet& b_dprime) {
  std::vector<NamedInequality> out;
  const bool sym = is_symmetric(g, b_dprime);
  out.push_back({"B'' symmetric", sym ? 1.0 : 0.0, 1.0, sym});
  const double d = static_cast<double>(spec.lambda.size());
  const auto ctl = has_control(g, b_dprime, spec.lambda, 1.0);
  const double rhs = d == 0 ? std::numeric_limits<double>::infinity() : 1.0 / (4.0 * d);
  out.push_back({"B'' has (4d)^-1-control of Lambda", ctl.worst, rhs, ctl.worst <= rhs + kGuardBand});
  const double nb = static_cast<double>(b.size());
  out.push_back(at_most("|(2B''+B) \\ B| <= 2^-17 nu alpha |B|",
                        static_cast<double>(sumset_excess(g, sumset(g, b_dprime, b_dprime), b, b)),
                        std::ldexp(spec.nu * spec.alpha * nb, -17)));
  out.push_back(at_most("|(B''+B') \\ B'| <= 2^-4 eps |B'|",
                        static_cast<double>(sumset_excess(g, b_dprime, b_prime, b_prime)),
                        std::ldexp(spec.eps * static_cast<double>(b_prime.size()), -4)));
  return out;
}

std::pair<Element, std::size_t> best_translate(const Group& g, const ElementSet& a, const ElementSet& b_dprime) {
  // hits[x] = |(A - x) ∩ B''|.
  std::vector<std::size_t> hits(g.order(), 0);
  for (const Element y : a)
    for (const Element z : b_dprime) ++hits[g.sub(y, z)];
  const auto it = std::max_element(hits.begin(), hits.end());
  return {static_cast<Element>(it - hits.begin()), *it};
}

ThdeResult thde_conclude(const Group& g, const ElementSet& a, const ElementSet& b, const ElementSet& b_prime,
                         const ThdeSpectrum& spec, const ElementSet& b_dprime) {
  if (b_dprime.empty()) throw Error(ErrorKind::EmptyFunction, "B'' is empty");
  ThdeResult out;
  out.spectrum = spec;
  out.b_dprime = b_dprime;
  out.hypotheses = thde_hypotheses(g, b, b_prime, spec, b_dprime);
  const auto [x, hits] = best_translate(g, a, b_dprime);
  out.witness = x;
  out.hits = hits;
  out.new_density = static_cast<double>(hits) / static_cast<double>(b_dprime.size());
  out.target = (1 + std::ldexp(spec.nu, -16)) * spec.alpha;
  if (!all_hold(out.hypotheses))
    out.status = ThdeResult::Status::hypothesis_unmet;
  else if (out.new_density >= out.target - 1e-12)
    out.status = ThdeResult::Status::increment;
  else
    out.status = ThdeResult::Status::increment_not_found;
  return out;
}

ThdeResult thde_increment(const Group& g, const ElementSet& a, const ElementSet& b, const VectorXr& f,
                          const ElementSet& b_prime, const BohrFactory& make_b_dprime, std::uint64_t seed) {
  const ThdeSpectrum spec = thde_spectrum(g, a, b, f, b_prime, seed);
  return thde_conclude(g, a, b, b_prime, spec, make_b_dprime(spec));
}

MaindiResult maindi_step(const Group& g, const ElementSet& a1, const ElementSet& a2, const ElementSet& a3,
                         const ElementSet& b_prime, const ElementSet& b, const BohrFactory& make_b_dprime,
                         std::uint64_t seed) {
  if (b.empty() || b_prime.empty()) throw Error(ErrorKind::EmptyFunction, "B and B' must be nonempty");
  require_subset(a1, b_prime, "A1 must lie in B'");
  require_subset(a2, b, "A2 must lie in B");
  require_subset(a3, b, "A3 must lie in B");
  MaindiResult out;
  const double nb = static_cast<double>(b.size());
  const double nbp = static_cast<double>(b_prime.size());
  out.alpha1 = static_cast<double>(a1.size()) / nbp;
  out.alpha2 = static_cast<double>(a2.size()) / nb;
  out.alpha3 = static_cast<double>(a3.size()) / nb;
  out.alpha = 0.5 * std::min({1.0 / 32, out.alpha1, out.alpha2, out.alpha3});
  out.hypothesis = at_most("|(B'+B) \\ B| <= 2^-2 alpha |B|",
                           static_cast<double>(sumset_excess(g, b_prime, b, b)), out.alpha * nb / 4);
  out.hypothesis_holds = out.hypothesis.holds;
  out.count = trilinear_count(g, a1, a2, a3);
  out.bound = out.alpha1 * out.alpha2 * out.alpha3 * nb * nbp / 4;
  out.many_solutions = static_cast<double>(out.count) >= out.bound;
  if (!out.hypothesis_holds || out.many_solutions || a2.empty() || a3.empty() || a1.empty()) return out;

  const VectorXr f = indicator_vector(g, a1);
  const VectorXc a1_hat = fourier_transform(g, f);
  const double n = g.order();
  const double s2 = sum_abs_times_sq(a1_hat, fourier_transform(g, balanced_function(g, a2, b)));
  const double s3 = sum_abs_times_sq(a1_hat, fourier_transform(g, balanced_function(g, a3, b)));
  const double r2 = static_cast<double>(a1.size()) * out.alpha2 * out.alpha2 * nb * n / 4;
  const double r3 = static_cast<double>(a1.size()) * out.alpha3 * out.alpha3 * nb * n / 4;
  if (s2 >= r2)
    out.role = 2;
  else if (s3 >= r3)
    out.role = 3;
  else
    out.role = s2 / r2 >= s3 / r3 ? 2 : 3;
  out.split_lhs = out.role == 2 ? s2 : s3;
  out.split_rhs = out.role == 2 ? r2 : r3;
  out.checks.push_back(at_least("sum |A1^| |A_i,bal^|^2 >= 2^-2 |A1| alpha_i^2 |B| N", out.split_lhs, out.split_rhs));
  const ElementSet& ai = out.role == 2 ? a2 : a3;
  const double alpha_i = out.role == 2 ? out.alpha2 : out.alpha3;
  out.increment = thde_increment(g, ai, b, f, b_prime, make_b_dprime, seed);
  const auto& inc = *out.increment;
  out.checks.push_back(at_most("|Lambda| <= 2^19 L(alpha) / alpha", static_cast<double>(inc.spectrum.lambda.size()),
                               std::ldexp(static_cast<double>(cal_L(out.alpha)), 19) / out.alpha));
  out.checks.push_back(at_least("new density >= (1 + 2^-18) alpha_i", inc.new_density, (1 + std::ldexp(1.0, -18)) * alpha_i));
  return out;
}

}  // namespace spectral

namespace spectral {

ElementSet control_set(const Group& g, const CharacterSet& lambda, double eps) {
  ElementSet out;
  for (Element x = 0; x < g.order(); ++x) {
    bool ok = true;
    for (const Character c : lambda)
      if (g.distance_from_one(c, x) > eps + kGuardBand) {
        ok = false;
        break;
      }
    if (ok) out.push_back(x);
  }
  return out;
}

}  // namespace spectral
