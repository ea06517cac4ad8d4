#include "spectral/driver.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "spectral/error.hpp"
#include "spectral/rng.hpp"

namespace spectral {

std::string to_string(StepKind kind) {
  switch (kind) {
    case StepKind::linf_increment: return "linf-increment";
    case StepKind::thde_increment: return "thde-increment";
    case StepKind::empirical_increment: return "empirical-increment";
    case StepKind::terminal_count: return "terminal-count";
  }
  return "unknown";
}

namespace {

constexpr double kDensitySlack = 1e-12;

std::vector<double> distinct_ratios(const BohrSetZ& b) {
  std::vector<double> r(b.group().order());
  for (Element x = 0; x < b.group().order(); ++x) r[x] = b.critical_ratio(x);
  std::sort(r.begin(), r.end());
  r.erase(std::unique(r.begin(), r.end()), r.end());
  return r;
}

/// One value strictly between each pair of consecutive breakpoints, ascending.
/// The k-th value selects the elements with ratio <= r_k.
std::vector<double> breakpoint_midpoints(const std::vector<double>& r) {
  std::vector<double> out;
  for (std::size_t k = 0; k + 1 < r.size(); ++k)
    out.push_back(r[k] > 0 ? std::sqrt(r[k] * r[k + 1]) : 0.5 * r[k + 1]);
  out.push_back(r.back() > 0 ? 2 * r.back() : 1.0);
  return out;
}

std::size_t step_limit(double alpha0, double c_impl) {
  return static_cast<std::size_t>(std::ceil(std::log(1 / alpha0) / std::log1p(c_impl))) + 1;
}

std::int64_t mod_product(const Group& g, std::int64_t a, std::int64_t b) {
  return static_cast<std::int64_t>((static_cast<std::uint64_t>(g.reduce_scalar(a)) * g.reduce_scalar(b)) %
                                   g.exponent());
}

/// |(A - x) ∩ C| for every x.
std::vector<std::size_t> translate_hits(const Group& g, const ElementSet& a, const ElementSet& c) {
  std::vector<std::size_t> hits(g.order(), 0);
  for (const Element y : a)
    for (const Element z : c) ++hits[g.sub(y, z)];
  return hits;
}

ElementSet shifted_meet(const Group& g, const ElementSet& a, Element x, const ElementSet& c) {
  return set_intersection(translate(g, a, g.neg(x)), c);
}

double density(const ElementSet& a, const ElementSet& b) {
  return static_cast<double>(a.size()) / static_cast<double>(b.size());
}

TraceStep state_record(int k, const BohrWidth& w, const ElementSet& members, int rank, const ElementSet& a) {
  TraceStep st;
  st.index = k;
  st.bohr = w;
  st.bohr_members = members;
  st.rank = rank;
  st.set = a;
  st.alpha = density(a, members);
  return st;
}

void finish_terminal(const Group& g, const EquationCoeffs& c, TraceStep& st, const MaindiResult* md) {
  st.kind = StepKind::terminal_count;
  st.upsilon = count_solutions(g, st.set, c).count;
  if (md != nullptr) {
    st.certified = md->count;
    st.bound = md->bound;
    st.many_solutions = md->hypothesis_holds && md->many_solutions;
  }
  if (st.certified > st.upsilon)
    throw Error(ErrorKind::StepFailure, "certified count exceeds the direct count at step " + std::to_string(st.index));
}

/// Searches B*(delta') for the largest delta' <= 1/2 meeting the B'' hypotheses
/// with B*(delta') regular. Hypotheses are monotone in delta', regularity is not.
struct SharpFactory {
  Group g;
  ElementSet h;
  BohrSetZ h_prime;
  std::shared_ptr<std::optional<BohrSetZ>> chosen = std::make_shared<std::optional<BohrSetZ>>();
  std::shared_ptr<double> delta = std::make_shared<double>(0);

  ElementSet operator()(const ThdeSpectrum& spec) const {
    BohrWidth lam;
    lam.freqs = spec.lambda;
    lam.widths.assign(spec.lambda.size(), 1.0 / (4.0 * static_cast<double>(std::max<std::size_t>(1, spec.lambda.size()))));
    BohrWidth w = meet_widths(h_prime.width(), lam);
    for (double& x : w.widths) x = std::min(x, 2.0);
    const BohrSetZ star(g, w);
    std::vector<double> cand;
    for (const double v : breakpoint_midpoints(distinct_ratios(star)))
      if (v <= 0.5) cand.push_back(v);
    if (cand.empty()) throw Error(ErrorKind::StepFailure, "no candidate dilate below 1/2");
    const auto ok = [&](double v) {
      return all_hold(thde_hypotheses(g, h, h_prime.members(), spec, star.dilate(v).members()));
    };
    // Largest index whose dilate meets the hypotheses; index 0 is {0}, which always does.
    std::size_t lo = 0, hi = cand.size();
    while (hi - lo > 1) {
      const std::size_t mid = (lo + hi) / 2;
      if (ok(cand[mid])) lo = mid;
      else hi = mid;
    }
    for (std::size_t k = lo + 1; k-- > 0;) {
      const BohrSetZ b = star.dilate(cand[k]);
      if (is_regular(b).regular) {
        *chosen = b;
        *delta = cand[k];
        return b.members();
      }
    }
    const BohrSetZ b = star.dilate(cand[0]);
    *chosen = b;
    *delta = cand[0];
    return b.members();
  }
};

}  // namespace

double select_delta(const BohrSetZ& b, double alpha, double c) {
  const double d = std::max(1, b.rank());
  const double hi = c * alpha / d;
  const double lo = hi / 4;
  const auto r = distinct_ratios(b);
  std::vector<double> cand{hi};
  const auto mids = breakpoint_midpoints(r);
  for (auto it = mids.rbegin(); it != mids.rend(); ++it)
    if (*it < hi) cand.push_back(*it);
  // Values in the window come first, then the window floor, then everything below.
  std::stable_partition(cand.begin(), cand.end(), [&](double v) { return v >= lo; });
  for (const double v : cand) {
    if (std::binary_search(r.begin(), r.end(), v)) continue;
    if (is_regular(b.dilate(v)).regular) return v;
  }
  throw Error(ErrorKind::NotFound, "no regular dilate at or below the window");
}

TraceCheck verify_trace(const Group& g, const IncrementTrace& trace) {
  TraceCheck out;
  const auto fail = [&](int k, const std::string& what) {
    out.ok = false;
    out.violations.push_back("step " + std::to_string(k) + ": " + what);
  };
  if (trace.steps.empty()) {
    fail(-1, "empty trace");
    return out;
  }
  if (trace.steps.size() > trace.step_limit) fail(-1, "trace exceeds the step limit");
  std::vector<std::uint64_t> counts;
  for (std::size_t k = 0; k < trace.steps.size(); ++k) {
    const TraceStep& st = trace.steps[k];
    const int i = static_cast<int>(k);
    const bool last = k + 1 == trace.steps.size();
    if ((st.kind == StepKind::terminal_count) != last) fail(i, "terminal step must be exactly the last");
    ElementSet members;
    int rank = 0;
    if (g.is_cyclic()) {
      const BohrSetZ b(g, st.bohr);
      members = b.members();
      rank = b.rank();
      if (!is_regular(b).regular) fail(i, "Bohr set is not regular");
    } else {
      const BohrSpaceF b(g, st.bohr.freqs);
      members = b.members();
      rank = b.rank();
    }
    if (members != st.bohr_members) fail(i, "recorded Bohr set does not match its description");
    if (rank != st.rank) fail(i, "recorded rank is wrong");
    if (!is_subset(st.set, members)) fail(i, "A_i is not inside B_i");
    if (st.set.empty() || std::abs(density(st.set, members) - st.alpha) > 1e-12) fail(i, "recorded density is wrong");
    counts.push_back(count_solutions(g, st.set, trace.coeffs).count);
    if (k == 0 && st.set.size() != 0 && std::abs(st.alpha - trace.alpha0) > 1e-12) fail(i, "alpha0 mismatch");
    if (last) {
      if (counts.back() != st.upsilon) fail(i, "terminal count differs from direct count");
      if (st.certified > st.upsilon) fail(i, "certified count exceeds direct count");
      if (st.many_solutions && static_cast<double>(st.certified) < st.bound) fail(i, "certified count below its bound");
      continue;
    }
    const TraceStep& next = trace.steps[k + 1];
    if (next.alpha < (1 + trace.c_impl) * st.alpha - kDensitySlack) fail(i, "density growth below 1 + c_impl");
    if (next.rank - st.rank > static_cast<int>(st.lambda_size)) fail(i, "rank grew by more than |Lambda|");
    if (!g.is_unit(st.u)) fail(i, "dilation is not a unit");
    if (!is_subset(next.set, translate(g, dilate(g, st.set, st.u), st.t))) fail(i, "A_{i+1} is not inside u A_i + t");
  }
  for (std::size_t k = 1; k < counts.size(); ++k)
    if (counts[k] > counts[k - 1]) fail(static_cast<int>(k), "solution count increased");
  return out;
}

IncrementTrace driver_zn(const Group& g, const ElementSet& a, const EquationCoeffs& c, const DriverParams& params) {
  if (!g.is_cyclic()) throw Error(ErrorKind::InvalidInput, "driver_zn needs a cyclic group");
  if (g.order() > 1021) throw Error(ErrorKind::TooLarge, "driver_zn is limited to N <= 1021");
  if (a.empty()) throw Error(ErrorKind::EmptyFunction, "A is empty");
  validate_coeffs(g, c);
  IncrementTrace trace;
  trace.coeffs = c;
  trace.c_impl = params.c_impl;
  trace.alpha0 = density(a, all_elements(g));
  trace.step_limit = step_limit(trace.alpha0, params.c_impl);
  const std::int64_t c123 = mod_product(g, mod_product(g, c.c1, c.c2), c.c3);

  BohrSetZ bk(g, {});
  ElementSet ak = a;
  for (int k = 0;; ++k) {
    if (static_cast<std::size_t>(k) >= trace.step_limit)
      throw Error(ErrorKind::StepFailure, "step limit reached without termination");
    TraceStep st = state_record(k, bk.width(), bk.members(), bk.rank(), ak);
    const double alpha = st.alpha;
    const double target = (1 + params.c_impl) * alpha;

    const double d2 = select_delta(bk, alpha, params.delta_c);
    const BohrSetZ b2 = bk.dilate(d2);
    const double d3 = select_delta(b2, alpha, params.delta_c);
    const BohrSetZ b3 = b2.dilate(d3);
    st.delta = d2;
    const BohrSetZ bi[3] = {b2.scaled(mod_product(g, c.c2, c.c3)), b2.scaled(mod_product(g, c.c1, c.c3)),
                            b3.scaled(mod_product(g, c.c1, c.c2))};

    // L-infinity increment on some B^(i).
    std::vector<std::vector<std::size_t>> hits;
    int best_i = -1;
    Element best_x = 0;
    double best_density = 0;
    for (int i = 0; i < 3; ++i) {
      hits.push_back(translate_hits(g, ak, bi[i].members()));
      const auto it = std::max_element(hits[i].begin(), hits[i].end());
      const double dens = static_cast<double>(*it) / static_cast<double>(bi[i].size());
      if (dens > best_density) {
        best_density = dens;
        best_i = i;
        best_x = static_cast<Element>(it - hits[i].begin());
      }
    }
    st.checks.push_back({"max_i ||A * beta^(i)||_inf >= (1 + c_impl) alpha", best_density, target,
                         best_density >= target - kDensitySlack});
    if (best_i >= 0 && best_density >= target - kDensitySlack) {
      st.kind = StepKind::linf_increment;
      st.u = 1;
      st.t = g.neg(best_x);
      st.note = "B^(" + std::to_string(best_i + 1) + ")";
      trace.steps.push_back(st);
      ak = shifted_meet(g, ak, best_x, bi[best_i].members());
      bk = bi[best_i];
      continue;
    }

    // Common translate for the three pieces.
    Element x0 = 0;
    double best_min = -1;
    for (Element x = 0; x < g.order(); ++x) {
      double m = 1;
      for (int i = 0; i < 3; ++i) m = std::min(m, static_cast<double>(hits[i][x]) / static_cast<double>(bi[i].size()));
      if (m > best_min) {
        best_min = m;
        x0 = x;
      }
    }
    std::optional<MaindiResult> md;
    if (best_min > 0) {
      const ElementSet s1 = shifted_meet(g, ak, x0, bi[0].members());
      const ElementSet s2 = shifted_meet(g, ak, x0, bi[1].members());
      const ElementSet s3 = shifted_meet(g, ak, x0, bi[2].members());
      const BohrSetZ h = b2.scaled(c123);
      const BohrSetZ hp = b3.scaled(c123);
      SharpFactory factory{g, h.members(), hp};
      md = maindi_step(g, dilate(g, s3, c.c3), dilate(g, s1, c.c1), dilate(g, s2, -c.c2), hp.members(), h.members(),
                       factory, trial_seed(params.seed, static_cast<std::uint64_t>(k)));
      st.checks.push_back(md->hypothesis);
      st.checks.push_back({"<A1 * A2, A3> >= 2^-2 a1 a2 a3 |B||B'|", static_cast<double>(md->count), md->bound,
                           md->many_solutions});
      if (md->hypothesis_holds && md->many_solutions) {
        finish_terminal(g, c, st, &*md);
        trace.steps.push_back(st);
        return trace;
      }
      if (md->increment && md->increment->status == ThdeResult::Status::increment && factory.chosen->has_value()) {
        const ThdeResult& inc = *md->increment;
        const std::int64_t u = md->role == 2 ? c.c1 : -c.c2;
        const ElementSet& ai = md->role == 2 ? dilate(g, s1, c.c1) : dilate(g, s2, -c.c2);
        const BohrSetZ& sharp = **factory.chosen;
        const ElementSet next = shifted_meet(g, ai, inc.witness, sharp.members());
        st.nu = inc.spectrum.nu;
        st.tau = inc.spectrum.tau;
        st.checks.insert(st.checks.end(), inc.hypotheses.begin(), inc.hypotheses.end());
        if (!next.empty() && density(next, sharp.members()) >= target - kDensitySlack) {
          st.kind = StepKind::thde_increment;
          st.u = g.reduce_scalar(u);
          st.t = g.neg(g.add(g.scale(u, x0), inc.witness));
          st.lambda_size = inc.spectrum.lambda.size();
          st.note = "role A" + std::to_string(md->role) + ", delta' = " + std::to_string(*factory.delta);
          trace.steps.push_back(st);
          ak = next;
          bk = sharp;
          continue;
        }
        st.note = "thde increment below 1 + c_impl";
      } else if (md->increment) {
        st.note = md->increment->status == ThdeResult::Status::hypothesis_unmet ? "thde hypotheses unmet"
                                                                                : "thde increment not found";
      } else if (!md->hypothesis_holds) {
        st.note = "maindi hypothesis unmet";
      }
    } else {
      st.note = "no common translate meets all three pieces";
    }

    // Empirical fallback: the largest regular dilate of B_K carrying a dense translate.
    const auto mids = breakpoint_midpoints(distinct_ratios(bk));
    std::vector<double> cand;
    const std::size_t stride = std::max<std::size_t>(1, mids.size() / 48);
    for (std::size_t j = 0; j < mids.size(); j += stride)
      if (mids[j] <= 1.0) cand.push_back(mids[j]);
    if (mids.size() > 1 && mids[1] <= 1.0) cand.push_back(mids[1]);
    cand.push_back(1.0);
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
    bool moved = false;
    for (auto it = cand.rbegin(); it != cand.rend() && !moved; ++it) {
      const BohrSetZ cb = bk.dilate(*it);
      if (cb.members().empty()) continue;
      const auto [x, n] = best_translate(g, ak, cb.members());
      if (static_cast<double>(n) / static_cast<double>(cb.size()) < target - kDensitySlack) continue;
      if (!is_regular(cb).regular) continue;
      st.kind = StepKind::empirical_increment;
      st.u = 1;
      st.t = g.neg(x);
      st.delta = *it;
      st.note += st.note.empty() ? "empirical" : "; empirical";
      trace.steps.push_back(st);
      ak = shifted_meet(g, ak, x, cb.members());
      bk = cb;
      moved = true;
    }
    if (moved) continue;
    finish_terminal(g, c, st, md ? &*md : nullptr);
    trace.steps.push_back(st);
    return trace;
  }
}

IncrementTrace driver_fpn(const Group& g, const ElementSet& a, const EquationCoeffs& c, const DriverParams& params) {
  if (g.is_cyclic() || g.exponent() == 2) throw Error(ErrorKind::InvalidInput, "driver_fpn needs F_p^n with p odd");
  if (g.order() > 6561) throw Error(ErrorKind::TooLarge, "driver_fpn is limited to p^n <= 3^8");
  if (a.empty()) throw Error(ErrorKind::EmptyFunction, "A is empty");
  validate_coeffs(g, c);
  IncrementTrace trace;
  trace.coeffs = c;
  trace.c_impl = params.c_impl;
  trace.alpha0 = density(a, all_elements(g));
  trace.step_limit = step_limit(trace.alpha0, params.c_impl);

  BohrSpaceF bk(g, {});
  ElementSet ak = a;
  for (int k = 0;; ++k) {
    if (static_cast<std::size_t>(k) >= trace.step_limit)
      throw Error(ErrorKind::StepFailure, "step limit reached without termination");
    TraceStep st = state_record(k, {bk.generators(), {}}, bk.members(), bk.rank(), ak);
    const double alpha = st.alpha;
    const double target = (1 + params.c_impl) * alpha;
    // Every c_i . B_K equals B_K, so all three pieces live on B_K itself.
    const auto [lx, ln] = best_translate(g, ak, bk.members());
    const double linf = static_cast<double>(ln) / static_cast<double>(bk.size());
    st.checks.push_back({"||A * beta||_inf >= (1 + c_impl) alpha", linf, target, linf >= target - kDensitySlack});
    if (linf >= target - kDensitySlack) {
      st.kind = StepKind::linf_increment;
      st.t = g.neg(lx);
      trace.steps.push_back(st);
      ak = shifted_meet(g, ak, lx, bk.members());
      continue;
    }

    auto refined = std::make_shared<std::optional<BohrSpaceF>>();
    const BohrFactory factory = [&bk, refined](const ThdeSpectrum& spec) {
      *refined = bk.refine(spec.lambda);
      return (*refined)->members();
    };
    const MaindiResult md = maindi_step(g, dilate(g, ak, c.c3), dilate(g, ak, c.c1), dilate(g, ak, -c.c2),
                                        bk.members(), bk.members(), factory,
                                        trial_seed(params.seed, static_cast<std::uint64_t>(k)));
    st.checks.push_back(md.hypothesis);
    st.checks.push_back({"<A1 * A2, A3> >= 2^-2 a1 a2 a3 |B|^2", static_cast<double>(md.count), md.bound,
                         md.many_solutions});
    if (md.hypothesis_holds && md.many_solutions) {
      finish_terminal(g, c, st, &md);
      trace.steps.push_back(st);
      return trace;
    }
    if (md.increment && md.increment->status == ThdeResult::Status::increment && refined->has_value()) {
      const ThdeResult& inc = *md.increment;
      const std::int64_t u = md.role == 2 ? c.c1 : -c.c2;
      const ElementSet next = shifted_meet(g, dilate(g, ak, u), inc.witness, (*refined)->members());
      st.nu = inc.spectrum.nu;
      st.tau = inc.spectrum.tau;
      st.checks.insert(st.checks.end(), inc.hypotheses.begin(), inc.hypotheses.end());
      if (!next.empty() && density(next, (*refined)->members()) >= target - kDensitySlack) {
        st.kind = StepKind::thde_increment;
        st.u = g.reduce_scalar(u);
        st.t = g.neg(inc.witness);
        st.lambda_size = inc.spectrum.lambda.size();
        st.note = "role A" + std::to_string(md.role);
        trace.steps.push_back(st);
        ak = next;
        bk = **refined;
        continue;
      }
      st.note = "thde increment below 1 + c_impl";
    } else if (md.increment) {
      st.note = md.increment->status == ThdeResult::Status::hypothesis_unmet ? "thde hypotheses unmet"
                                                                             : "thde increment not found";
    }

    // Empirical fallback: the densest coset of a hyperplane section of B_K.
    const auto in_span = indicator_mask(g, bk.annihilator());
    const double sub_size = static_cast<double>(bk.size()) / g.exponent();
    double best = 0;
    Character best_gamma = 0;
    std::uint32_t best_level = 0;
    std::vector<std::size_t> level(g.exponent());
    for (Character gamma = 1; gamma < g.order(); ++gamma) {
      if (in_span[gamma]) continue;
      std::fill(level.begin(), level.end(), 0);
      for (const Element x : ak) ++level[g.pairing(gamma, x)];
      for (std::uint32_t j = 0; j < g.exponent(); ++j)
        if (static_cast<double>(level[j]) / sub_size > best + kDensitySlack) {
          best = static_cast<double>(level[j]) / sub_size;
          best_gamma = gamma;
          best_level = j;
        }
    }
    if (best >= target - kDensitySlack && best_gamma != 0) {
      Element shift_to = 0;
      for (const Element x : bk.members())
        if (g.pairing(best_gamma, x) == best_level) {
          shift_to = x;
          break;
        }
      const BohrSpaceF sub = bk.refine({best_gamma});
      st.kind = StepKind::empirical_increment;
      st.t = g.neg(shift_to);
      st.lambda_size = 1;
      st.note += st.note.empty() ? "empirical hyperplane" : "; empirical hyperplane";
      trace.steps.push_back(st);
      ak = shifted_meet(g, ak, shift_to, sub.members());
      bk = sub;
      continue;
    }
    finish_terminal(g, c, st, &md);
    trace.steps.push_back(st);
    return trace;
  }
}

}  // namespace spectral
