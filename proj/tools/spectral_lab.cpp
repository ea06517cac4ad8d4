// spectral-lab: command-line front end for the spectral library.
// Exit codes: 0 success, 1 violation found, 2 configuration error, 3 resource cap exceeded.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <iostream>
#include <sstream>

#include "spectral/bohr.hpp"
#include "spectral/cover.hpp"
#include "spectral/driver.hpp"
#include "spectral/energy.hpp"
#include "spectral/io.hpp"
#include "spectral/lab.hpp"
#include "spectral/progression.hpp"
#include "spectral/sumset.hpp"

using namespace spectral;
using io::Json;

namespace {

constexpr int kOk = 0, kViolation = 1, kConfig = 2, kResource = 3;

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::TooLarge:
      return kResource;
    case ErrorKind::Inconclusive:
    case ErrorKind::Exhausted:
    case ErrorKind::NotFound:
    case ErrorKind::IncrementNotFound:
    case ErrorKind::StepFailure:
    case ErrorKind::HypothesisUnmet:
      return kViolation;
    default:
      return kConfig;
  }
}

std::vector<std::int64_t> parse_ints(const std::string& s) {
  std::vector<std::int64_t> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');) {
    std::size_t used = 0;
    try {
      out.push_back(std::stoll(item, &used));
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size() || item.empty()) throw Error(ErrorKind::ConfigInvalid, "not an integer list: " + s);
  }
  return out;
}

std::vector<double> parse_doubles(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');) {
    std::size_t used = 0;
    try {
      out.push_back(std::stod(item, &used));
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size() || item.empty()) throw Error(ErrorKind::ConfigInvalid, "not a number list: " + s);
  }
  return out;
}

/// "cyclic:N" or "vector:p:n".
Group parse_group(const std::string& s) {
  const auto colon = s.find(':');
  const std::string kind = s.substr(0, colon);
  const auto rest = colon == std::string::npos ? std::vector<std::int64_t>{} : parse_ints([&] {
    std::string r = s.substr(colon + 1);
    std::replace(r.begin(), r.end(), ':', ',');
    return r;
  }());
  if (kind == "cyclic" && rest.size() == 1 && rest[0] >= 2) return Group::cyclic(static_cast<std::uint64_t>(rest[0]));
  if (kind == "vector" && rest.size() == 2 && rest[0] >= 2 && rest[1] >= 0 && rest[1] <= 64)
    return Group::vector(static_cast<std::uint64_t>(rest[0]), static_cast<int>(rest[1]));
  throw Error(ErrorKind::ConfigInvalid, "group must be cyclic:N or vector:p:n, got " + s);
}

/// An element as an index, or as comma-separated coordinates in a vector group.
Element parse_element(const Group& g, const std::string& s) {
  const auto v = parse_ints(s);
  if (v.size() == 1 && (g.is_cyclic() || g.dim() == 1 || s.find(',') == std::string::npos)) {
    if (!g.contains(v[0])) throw Error(ErrorKind::OutOfRange, "element " + s + " outside " + g.describe());
    return static_cast<Element>(v[0]);
  }
  return io::element_from_json(g, Json(v));
}

void emit(const std::string& out, const Json& j) { io::write_json(out.empty() ? "-" : out, j); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fourier-analytic toolkit for finite abelian groups: spectra, energies, covers, Bohr sets, "
               "density increments and progression experiments."};
  app.require_subcommand(1);
  app.set_version_flag("--version", "spectral-lab 1.0");

  std::string in, in2, gamma_path, group_spec, freqs, widths, coeffs = "1,1,-2", lambda_arg;
  std::string out;
  double eta = 0.3, eps = -1, sigma = 0.1;
  std::uint64_t seed = 1;
  int m = 2;
  std::vector<int> restricted;
  std::int64_t n = 0;
  bool check_regular = false, find_dilate = false, no_timestamp = false;
  long trials = -1;
  double tolerance = -1;
  unsigned threads = 0;
  std::vector<std::string> grids;
  std::string suite, kind, b_path;
  int exponent = 2;

  auto* spec = app.add_subcommand("spectrum", "Large spectrum of a set");
  spec->add_option("--in", in, "Set file")->required();
  spec->add_option("--eta", eta, "Threshold in (0, 1]")->check(CLI::Range(0.0, 1.0));
  spec->add_option("--out", out, "Report file (default stdout)");

  auto* energy = app.add_subcommand("energy", "Additive or restricted energy of a weight function");
  energy->add_option("--in", in, "Weights file")->required();
  energy->add_option("--gamma", gamma_path, "Set file for Gamma")->required();
  energy->add_option("--m", m, "Order m")->check(CLI::Range(1, 8));
  energy->add_option("--restricted", restricted, "t1 t2 for the restricted energy")->expected(2);
  energy->add_option("--lambda", lambda_arg, "Shift for the restricted energy");
  energy->add_option("--out", out, "Report file");

  auto* cover = app.add_subcommand("cover", "Spectral cover certificate for a set");
  cover->add_option("--in", in, "Set file")->required();
  cover->add_option("--b", b_path, "Set file for B (default: the whole group)");
  cover->add_option("--eta", eta, "Threshold")->check(CLI::Range(0.0, 1.0));
  cover->add_option("--eps", eps, "Control parameter (default exp(-8 L(eta) L(alpha)))");
  cover->add_option("--seed", seed);
  cover->add_option("--out", out, "Certificate file");

  auto* bohr = app.add_subcommand("bohr", "Bohr set size and regularity");
  bohr->add_option("--in", in, "Bohr set file");
  bohr->add_option("--group", group_spec, "cyclic:N or vector:p:n (with --freqs)");
  bohr->add_option("--freqs", freqs, "Comma-separated frequency indices");
  bohr->add_option("--widths", widths, "Comma-separated widths (cyclic groups)");
  bohr->add_flag("--check-regular", check_regular, "Exact breakpoint regularity test");
  bohr->add_flag("--find-regular-dilate", find_dilate, "Largest regular dilate in [1/2, 1]");
  bohr->add_option("--out", out, "Report file");

  auto* increment = app.add_subcommand("increment", "Run the density-increment driver");
  increment->add_option("--in", in, "Set file")->required();
  increment->add_option("--coeffs", coeffs, "c1,c2,c3");
  increment->add_option("--seed", seed);
  increment->add_option("--trace", out, "Trace file (default stdout)");

  auto* behrend = app.add_subcommand("behrend", "Behrend progression-free set in {1..n}");
  behrend->add_option("--n", n, "Upper end")->required();
  behrend->add_option("--out", out, "Set file");

  auto* rexact = app.add_subcommand("rexact", "Largest progression-free subset of {1..n}");
  rexact->add_option("--n", n, "Upper end")->required();
  rexact->add_option("--out", out, "Report file");

  auto* sumset_ap = app.add_subcommand("sumset-ap", "Longest progression in A + B");
  sumset_ap->add_option("--a", in, "Integer set file")->required();
  sumset_ap->add_option("--b", in2, "Integer set file")->required();
  sumset_ap->add_option("--out", out, "Report file");

  auto* itsa = app.add_subcommand("itsa", "One step of the sumset dichotomy in a Bohr set");
  itsa->add_option("--a1", in, "Set file")->required();
  itsa->add_option("--a2", in2, "Set file")->required();
  itsa->add_option("--bohr", b_path, "Bohr set file (default: the whole group)");
  itsa->add_option("--sigma", sigma, "Uncovered proportion")->check(CLI::Range(0.0, 1.0));
  itsa->add_option("--exponent", exponent, "Exponent of alpha in the width floor")->check(CLI::IsMember({2, 4}));
  itsa->add_option("--seed", seed);
  itsa->add_option("--out", out, "Report file");

  const auto lab_options = [&](CLI::App* sub) {
    sub->add_option("--seed", seed);
    sub->add_option("--trials", trials, "Trial count (default: the documented grid)");
    sub->add_option("--tolerance", tolerance, "Relative tolerance for floating comparisons");
    sub->add_option("--threads", threads, "Worker threads (0: all cores)");
    sub->add_option("--grid", grids, "Grid override name=v1,v2,... (eta, eps, m, nu, sigma, n, alpha)");
    sub->add_option("--out", out, "Report file (default stdout)");
    sub->add_flag("--no-timestamp", no_timestamp, "Omit the timestamp header line");
  };
  auto* verify = app.add_subcommand("verify", "Run a verification suite");
  verify->add_option("suite", suite, "Suite name or all")->required();
  lab_options(verify);
  auto* experiment = app.add_subcommand("experiment", "Run an experiment");
  experiment->add_option("kind", kind, "chang-vs-bloom, increment-trace, behrend-scale, sumset-scale")->required();
  experiment->add_option("--in", in, "Set file (increment-trace)");
  lab_options(experiment);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (*spec) {
      const auto f = io::set_from_json(io::read_json(in));
      const auto r = spectrum(DensityFn::indicator(f.group, f.elements), eta);
      emit(out, io::spectrum_to_json(f.group, r));
      return kOk;
    }
    if (*energy) {
      const auto w = io::weights_from_json(io::read_json(in));
      const auto gm = io::set_from_json(io::read_json(gamma_path));
      require_same_group(w.group(), gm.group);
      Json j{{"m", m}};
      if (!restricted.empty()) {
        std::optional<Character> shift;
        if (!lambda_arg.empty()) shift = parse_element(w.group(), lambda_arg);
        j["t1"] = restricted[0];
        j["t2"] = restricted[1];
        if (shift) j["lambda"] = io::element_to_json(w.group(), *shift);
        j["restricted_energy"] = io::round12(restricted_energy(w, gm.elements, restricted[0], restricted[1], shift));
      } else {
        if (!lambda_arg.empty()) throw Error(ErrorKind::ConfigInvalid, "--lambda needs --restricted");
        j["energy"] = io::round12(additive_energy(w, gm.elements, m));
        const auto b = en2_bound_check(w, gm.elements, m);
        j["restricted_expansion_bound"] = io::round12(b.rhs);
        j["bound_holds"] = b.holds;
      }
      emit(out, j);
      return kOk;
    }
    if (*cover) {
      const auto f = io::set_from_json(io::read_json(in));
      ElementSet b = all_elements(f.group);
      if (!b_path.empty()) {
        auto bf = io::set_from_json(io::read_json(b_path));
        require_same_group(bf.group, f.group);
        b = std::move(bf.elements);
      }
      const auto fn = DensityFn::indicator(f.group, f.elements);
      const auto omega = WeightFn::indicator(f.group, spectrum(fn, eta).members);
      const double alpha = static_cast<double>(f.elements.size()) / static_cast<double>(b.size());
      if (eps < 0) eps = std::exp(-8.0 * cal_L(eta) * cal_L(alpha));
      const auto r = spectral_cover(fn, b, omega, eta, eps, seed);
      const auto check = verify_certificate(f.group, r.certificate);
      Json j{{"eta", io::round12(eta)},
             {"eps", io::round12(eps)},
             {"alpha", io::round12(r.alpha)},
             {"branch", r.chernoff_branch ? "chernoff" : "energy"},
             {"mass", io::round12(r.mass)},
             {"mass_bound", io::round12(r.mass_bound)},
             {"cover_budget", io::round12(r.cover_budget)},
             {"delta_prime", Json::array()},
             {"certificate", io::certificate_to_json(f.group, r.certificate)},
             {"certificate_verified", check.ok}};
      for (Character x : r.delta_prime) j["delta_prime"].push_back(io::element_to_json(f.group, x));
      emit(out, j);
      return check.ok ? kOk : kViolation;
    }
    if (*bohr) {
      io::BohrFile file{Group::cyclic(2), {}};
      if (!in.empty()) {
        file = io::bohr_from_json(io::read_json(in));
      } else {
        if (group_spec.empty()) throw Error(ErrorKind::ConfigInvalid, "bohr needs --in or --group");
        file.group = parse_group(group_spec);
        Json j{{"group", io::group_to_json(file.group)}, {"freqs", Json::array()}};
        for (auto f : parse_ints(freqs)) {
          if (!file.group.contains(f)) throw Error(ErrorKind::OutOfRange, "frequency outside the group");
          j["freqs"].push_back(io::element_to_json(file.group, static_cast<Element>(f)));
        }
        if (!widths.empty()) j["widths"] = parse_doubles(widths);
        file = io::bohr_from_json(j);
      }
      const Group& g = file.group;
      Json j = io::bohr_to_json(g, file.width);
      if (g.is_cyclic()) {
        const BohrSetZ b(g, file.width);
        j["rank"] = b.rank();
        j["size"] = b.size();
        bool ok = true;
        if (check_regular) {
          const auto reg = is_regular(b);
          j["regular"] = reg.regular;
          j["worst_kappa"] = io::round12(reg.worst_kappa);
          j["worst_ratio"] = io::round12(reg.worst_ratio);
        }
        if (find_dilate) {
          const double l = find_regular_dilate(b);
          const auto d = b.dilate(l);
          j["regular_dilate"] = io::round12(l);
          j["dilate_size"] = d.size();
          ok = is_regular(d).regular;
          j["dilate_regular"] = ok;
        }
        emit(out, j);
        return ok ? kOk : kViolation;
      }
      const BohrSpaceF b(g, file.width.freqs);
      j["rank"] = b.rank();
      j["size"] = b.size();
      j["annihilator_size"] = b.annihilator().size();
      j["regular"] = true;
      emit(out, j);
      return kOk;
    }
    if (*increment) {
      const auto f = io::set_from_json(io::read_json(in));
      const auto c = parse_ints(coeffs);
      if (c.size() != 3) throw Error(ErrorKind::ConfigInvalid, "--coeffs needs three integers");
      DriverParams p;
      p.seed = seed;
      const EquationCoeffs ec{c[0], c[1], c[2]};
      const auto trace = f.group.is_cyclic() ? driver_zn(f.group, f.elements, ec, p) : driver_fpn(f.group, f.elements, ec, p);
      const auto check = verify_trace(f.group, trace);
      Json j = io::trace_to_json(f.group, trace);
      j["verified"] = check.ok;
      j["violations"] = check.violations;
      emit(out, j);
      return check.ok ? kOk : kViolation;
    }
    if (*behrend) {
      const auto b = behrend_construct(n);
      Json j = io::intset_to_json(n, b.set);
      j["size"] = b.set.size();
      j["params"] = {{"digits_below", b.params.digits_below}, {"length", b.params.length}, {"radius", b.params.radius}};
      emit(out, j);
      return is_3ap_free(b.set) ? kOk : kViolation;
    }
    if (*rexact) {
      if (n < 1) throw Error(ErrorKind::ConfigInvalid, "--n must be positive");
      const auto r = exact_R(static_cast<int>(n));
      emit(out, Json{{"n", n}, {"value", r.value}, {"witness", r.witness}, {"three_ap_free", is_3ap_free(r.witness)}});
      return kOk;
    }
    if (*sumset_ap) {
      const auto a = io::intset_from_json(io::read_json(in));
      const auto b = io::intset_from_json(io::read_json(in2));
      emit(out, io::ap_to_json(longest_ap_in_sumset(a.elements, b.elements, std::max(a.n, b.n))));
      return kOk;
    }
    if (*itsa) {
      const auto a1 = io::set_from_json(io::read_json(in));
      const auto a2 = io::set_from_json(io::read_json(in2));
      require_same_group(a1.group, a2.group);
      BohrWidth w;
      if (!b_path.empty()) {
        const auto bf = io::bohr_from_json(io::read_json(b_path));
        require_same_group(bf.group, a1.group);
        w = bf.width;
      }
      if (!a1.group.is_cyclic()) throw Error(ErrorKind::InvalidInput, "itsa runs in cyclic groups");
      ItsaParams p;
      p.seed = seed;
      p.exponent = exponent;
      const auto r = itsa_step(a1.elements, a2.elements, BohrSetZ(a1.group, w), sigma, p);
      emit(out, io::itsa_to_json(a1.group, r));
      return all_hold(r.checks) ? kOk : kViolation;
    }

    lab::LabConfig cfg;
    cfg.seed = seed;
    cfg.trials = trials;
    cfg.tolerance = tolerance;
    cfg.threads = threads;
    for (const auto& spec_str : grids) {
      const auto eq = spec_str.find('=');
      if (eq == std::string::npos || eq == 0) throw Error(ErrorKind::ConfigInvalid, "--grid expects name=v1,v2");
      cfg.grids[spec_str.substr(0, eq)] = parse_doubles(spec_str.substr(eq + 1));
    }
    const std::string dest = out.empty() ? "-" : out;
    if (*verify) {
      const auto report = lab::run_verify(suite, cfg);
      io::write_text(dest, lab::to_csv(report, !no_timestamp));
      std::cerr << suite << ": " << report.rows.size() << " rows, " << report.violations << " violations\n";
      if (report.resource_exceeded) return kResource;
      return report.violations ? kViolation : kOk;
    }
    if (*experiment) {
      const auto report = lab::run_experiment(kind, cfg, in);
      if (report.is_json)
        io::write_json(dest, lab::to_json(report, !no_timestamp));
      else
        io::write_text(dest, lab::to_csv(report, !no_timestamp));
      return report.violations ? kViolation : kOk;
    }
  } catch (const Error& e) {
    std::cerr << "spectral-lab: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::bad_alloc&) {
    std::cerr << "spectral-lab: out of memory\n";
    return kResource;
  }
  return kOk;
}
