#include "spectral/sumset.hpp"

#include <algorithm>
#include <cmath>

#include "spectral/error.hpp"
#include "spectral/rng.hpp"

namespace spectral {

IntSet integer_sumset(const IntSet& a, const IntSet& b) {
  if (a.empty() || b.empty()) return {};
  const std::int64_t top = a.back() + b.back();
  const std::size_t words = static_cast<std::size_t>(top / 64 + 2);
  std::vector<std::uint64_t> bb(words, 0), out(words, 0);
  for (const auto y : b) bb[static_cast<std::size_t>(y / 64)] |= std::uint64_t{1} << (y % 64);
  // out |= bb << x for every x in A.
  for (const auto x : a) {
    const std::size_t w = static_cast<std::size_t>(x / 64);
    const unsigned s = static_cast<unsigned>(x % 64);
    for (std::size_t k = 0; k + w < words; ++k) {
      out[k + w] |= bb[k] << s;
      if (s != 0 && k + w + 1 < words) out[k + w + 1] |= bb[k] >> (64 - s);
    }
  }
  IntSet s;
  for (std::size_t k = 0; k < words; ++k)
    for (std::uint64_t m = out[k]; m != 0; m &= m - 1)
      s.push_back(static_cast<std::int64_t>(k * 64 + static_cast<std::size_t>(__builtin_ctzll(m))));
  return s;
}

APWitness longest_ap(const IntSet& s) {
  APWitness best;
  if (s.empty()) return best;
  best = {s.front(), 1, 1};
  const std::int64_t lo = s.front();
  const std::int64_t span = s.back() - lo;
  std::vector<std::uint8_t> in(static_cast<std::size_t>(span + 1), 0);
  for (const auto x : s) in[static_cast<std::size_t>(x - lo)] = 1;
  std::vector<std::int64_t> len(static_cast<std::size_t>(span + 1), 0);
  // With difference d no AP is longer than span / d + 1.
  for (std::int64_t d = 1; d <= span && span / d + 1 > best.length; ++d) {
    for (const auto x : s) {
      const std::int64_t i = x - lo;
      const std::int64_t l = (i >= d && in[static_cast<std::size_t>(i - d)]) ? len[static_cast<std::size_t>(i - d)] + 1 : 1;
      len[static_cast<std::size_t>(i)] = l;
      if (l > best.length) best = {x - (l - 1) * d, d, l};
    }
  }
  return best;
}

APWitness longest_ap_in_sumset(const IntSet& a, const IntSet& b, std::int64_t n) {
  if (n > 100000) throw Error(ErrorKind::TooLarge, "exact scan is limited to N <= 10^5");
  if (a.empty() || b.empty()) throw Error(ErrorKind::EmptyFunction, "A and B must be nonempty");
  for (const IntSet* s : {&a, &b})
    if (s->front() < 1 || s->back() > n || !std::is_sorted(s->begin(), s->end()))
      throw Error(ErrorKind::OutOfRange, "sets must be sorted inside {1..N}");
  return longest_ap(integer_sumset(a, b));
}

namespace {

std::vector<double> ratio_midpoints(const BohrSetZ& b) {
  std::vector<double> r(b.group().order());
  for (Element x = 0; x < b.group().order(); ++x) r[x] = b.critical_ratio(x);
  std::sort(r.begin(), r.end());
  r.erase(std::unique(r.begin(), r.end()), r.end());
  std::vector<double> out;
  for (std::size_t k = 0; k + 1 < r.size(); ++k) out.push_back(r[k] > 0 ? std::sqrt(r[k] * r[k + 1]) : 0.5 * r[k + 1]);
  out.push_back(r.back() > 0 ? 2 * r.back() : 1.0);
  return out;
}

double sup_density(const Group& g, const ElementSet& a, const ElementSet& c, Element& at) {
  const auto [x, n] = best_translate(g, a, c);
  at = x;
  return static_cast<double>(n) / static_cast<double>(c.size());
}

}  // namespace

ItsaResult itsa_step(const ElementSet& a1, const ElementSet& a2, const BohrSetZ& b, double sigma,
                     const ItsaParams& params) {
  const Group& g = b.group();
  if (!g.is_cyclic() || g.order() > 1021) throw Error(ErrorKind::TooLarge, "itsa_step is limited to Z_N, N <= 1021");
  if (!(sigma > 0 && sigma <= 1)) throw Error(ErrorKind::InvalidInput, "sigma must lie in (0, 1]");
  if (params.exponent != 2 && params.exponent != 4) throw Error(ErrorKind::ConfigInvalid, "exponent must be 2 or 4");
  if (a1.empty() || a2.empty()) throw Error(ErrorKind::EmptyFunction, "A1 and A2 must be nonempty");
  if (!is_subset(a1, b.members()) || !is_subset(a2, b.members()))
    throw Error(ErrorKind::InvalidInput, "A1 and A2 must lie in B");
  if (!is_regular(b).regular) throw Error(ErrorKind::HypothesisUnmet, "B must be regular");

  ItsaResult out;
  out.sigma = sigma;
  out.exponent = params.exponent;
  const double nb = static_cast<double>(b.size());
  out.alpha1 = static_cast<double>(a1.size()) / nb;
  out.alpha2 = static_cast<double>(a2.size()) / nb;
  const double alpha = std::min(out.alpha1, out.alpha2);
  const double d = std::max(1, b.rank());
  out.rho_floor = params.c_impl * std::pow(alpha, params.exponent) / d;

  // Case 1: the largest regular B(rho), rho in [floor, 1], mostly covered by A1 + A2.
  const auto sum = indicator_mask(g, sumset(g, a1, a2));
  std::vector<double> cand{1.0};
  for (const double v : ratio_midpoints(b))
    if (v >= out.rho_floor && v < 1.0) cand.push_back(v);
  std::sort(cand.rbegin(), cand.rend());
  std::optional<BohrSetZ> smallest_regular;
  double smallest_rho = 0;
  for (const double rho : cand) {
    const BohrSetZ bp = b.dilate(rho);
    if (bp.members().empty() || !is_regular(bp).regular) continue;
    std::size_t hit = 0;
    for (const Element x : bp.members()) hit += sum[x];
    const double cov = static_cast<double>(hit) / static_cast<double>(bp.size());
    if (cov >= 1 - sigma - 1e-12) {
      out.which = 1;
      out.rho = rho;
      out.b_prime = bp.width();
      out.b_prime_size = bp.size();
      out.coverage = cov;
      out.checks.push_back({"|(A1+A2) ∩ B'| >= (1 - sigma)|B'|", cov, 1 - sigma, true});
      out.checks.push_back({"rho >= c_impl alpha^e / d", rho, out.rho_floor, rho >= out.rho_floor});
      return out;
    }
    smallest_regular = bp;
    smallest_rho = rho;
  }
  if (!smallest_regular) throw Error(ErrorKind::StepFailure, "no regular dilate above the rho floor");

  // Case 2: S = B' \ (A1 + A2) is a deficient piece; thde on the better A_i.
  out.which = 2;
  const BohrSetZ& bp = *smallest_regular;
  out.rho = smallest_rho;
  out.b_prime = bp.width();
  out.b_prime_size = bp.size();
  ElementSet s;
  for (const Element x : bp.members())
    if (!sum[x]) s.push_back(x);
  out.coverage = 1 - static_cast<double>(s.size()) / static_cast<double>(bp.size());
  const VectorXr fs = indicator_vector(g, s);
  const VectorXc s_hat = fourier_transform(g, fs);
  double best_ratio = -1;
  for (int i = 1; i <= 2; ++i) {
    const ElementSet& ai = i == 1 ? a1 : a2;
    const VectorXc ah = fourier_transform(g, balanced_function(g, ai, b.members()));
    double w = 0;
    for (Eigen::Index k = 0; k < ah.size(); ++k) w += std::norm(ah(k)) * std::abs(s_hat(k));
    const double ai_density = i == 1 ? out.alpha1 : out.alpha2;
    const double ratio = w / (ai_density * static_cast<double>(ai.size()) * static_cast<double>(s.size()) * g.order());
    if (ratio > best_ratio) {
      best_ratio = ratio;
      out.role = i;
    }
  }
  out.checks.push_back({"sum |A_i,bal^|^2 |S^| / (alpha_i |A_i||S| N)", best_ratio, 0, best_ratio > 0});
  const ElementSet& ai = out.role == 1 ? a1 : a2;
  const double alpha_i = out.role == 1 ? out.alpha1 : out.alpha2;
  const ThdeSpectrum spec = thde_spectrum(g, ai, b.members(), fs, bp.members(), trial_seed(params.seed, 0));
  const std::size_t l = spec.lambda.size();
  BohrWidth lam{spec.lambda, std::vector<double>(l, 1.0 / (4.0 * static_cast<double>(std::max<std::size_t>(1, l))))};
  BohrWidth w = meet_widths(bp.width(), lam);
  for (double& x : w.widths) x = std::min(x, 2.0);
  const BohrSetZ star(g, w);
  const double allowed =
      std::exp(-static_cast<double>(cal_L(sigma)) * cal_L(std::min(1.0, alpha_i))) * static_cast<double>(bp.size());
  const auto mids = ratio_midpoints(star);
  std::vector<double> grid;
  for (const double v : mids)
    if (v <= 1.0) grid.push_back(v);
  const auto closed = [&](double v) {
    return static_cast<double>(sumset_excess(g, star.dilate(v).members(), bp.members(), bp.members())) <= allowed;
  };
  std::size_t lo = 0, hi = grid.size();
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    if (closed(grid[mid])) lo = mid;
    else hi = mid;
  }
  out.target = out.alpha1 * out.alpha2 * (1 + params.c_impl);
  const auto try_set = [&](const BohrSetZ& c, std::size_t lambda_size) {
    if (c.members().empty() || !is_regular(c).regular) return false;
    Element x1 = 0, x2 = 0;
    const double s1 = sup_density(g, a1, c.members(), x1);
    const double s2 = sup_density(g, a2, c.members(), x2);
    if (s1 * s2 < out.target - 1e-12) return false;
    out.b_dprime = c.width();
    out.b_dprime_members = c.members();
    out.rank = c.rank();
    out.lambda_size = lambda_size;
    out.sup1 = s1;
    out.sup2 = s2;
    out.x1 = x1;
    out.x2 = x2;
    out.product = s1 * s2;
    return true;
  };
  bool done = false;
  for (std::size_t k = lo + 1; k-- > 0 && !done;)
    if (closed(grid[k])) done = try_set(star.dilate(grid[k]), l);
  if (!done) {
    // Empirical fallback: the largest regular candidate meeting the product bound.
    out.empirical = true;
    std::vector<std::pair<std::size_t, std::pair<BohrSetZ, std::size_t>>> pool;
    for (const double v : grid) pool.push_back({star.size_at(v), {star.dilate(v), l}});
    for (const double v : ratio_midpoints(bp))
      if (v <= 1.0) pool.push_back({bp.size_at(v), {bp.dilate(v), 0}});
    std::stable_sort(pool.begin(), pool.end(), [](const auto& x, const auto& y) { return x.first > y.first; });
    for (const auto& [size, entry] : pool)
      if (try_set(entry.first, entry.second)) {
        done = true;
        break;
      }
  }
  if (!done) throw Error(ErrorKind::StepFailure, "no Bohr set reaches the product bound");
  out.checks.push_back({"||A1 * b''||_inf ||A2 * b''||_inf >= a1 a2 (1 + c)", out.product, out.target, true});
  out.checks.push_back({"rk(B'') - rk(B) <= |Lambda|", static_cast<double>(out.rank - b.rank()),
                        static_cast<double>(out.lambda_size), out.rank - b.rank() <= static_cast<int>(out.lambda_size)});
  out.checks.push_back({"B'' inside B'", is_subset(out.b_dprime_members, bp.members()) ? 1.0 : 0.0, 1.0,
                        is_subset(out.b_dprime_members, bp.members())});
  return out;
}

ItsaIteration itsa_iterate(const ElementSet& a1, const ElementSet& a2, const BohrSetZ& b, double sigma, int budget,
                           const ItsaParams& params) {
  ItsaIteration out;
  ElementSet x = a1, y = a2;
  BohrSetZ host = b;
  for (int k = 0; k < budget; ++k) {
    ItsaParams p = params;
    p.seed = trial_seed(params.seed, static_cast<std::uint64_t>(k));
    const ItsaResult r = itsa_step(x, y, host, sigma, p);
    out.steps.push_back(r);
    if (r.which == 1) {
      out.case1_reached = true;
      break;
    }
    const Group& g = host.group();
    host = BohrSetZ(g, r.b_dprime);
    x = set_intersection(translate(g, x, g.neg(r.x1)), host.members());
    y = set_intersection(translate(g, y, g.neg(r.x2)), host.members());
  }
  return out;
}

}  // namespace spectral
