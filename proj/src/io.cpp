#include "spectral/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace spectral::io {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::InvalidInput, what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

std::int64_t as_int(const Json& j, const char* what) {
  if (!j.is_number_integer()) bad(std::string(what) + " must be an integer");
  return j.get<std::int64_t>();
}

double as_double(const Json& j, const char* what) {
  if (!j.is_number()) bad(std::string(what) + " must be a number");
  return j.get<double>();
}

const Json& as_array(const Json& j, const char* what) {
  if (!j.is_array()) bad(std::string(what) + " must be an array");
  return j;
}

/// The group object, nested or inlined at the top level.
const Json& group_node(const Json& j) { return j.is_object() && j.contains("group") ? j.at("group") : j; }

std::vector<std::int64_t> raw_elements(const Group& g, const Json& arr) {
  std::vector<std::int64_t> out;
  out.reserve(arr.size());
  for (const auto& e : as_array(arr, "elements")) out.push_back(element_from_json(g, e));
  return out;
}

Json element_list(const Group& g, const ElementSet& s) {
  Json arr = Json::array();
  for (Element x : s) arr.push_back(element_to_json(g, x));
  return arr;
}

Json doubles(const std::vector<double>& v) {
  Json arr = Json::array();
  for (double x : v) arr.push_back(round12(x));
  return arr;
}

}  // namespace

double round12(double x) {
  if (!std::isfinite(x) || x == 0) return x;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

std::string format12(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

Json group_to_json(const Group& g) {
  if (g.is_cyclic()) return Json{{"kind", "cyclic"}, {"modulus", g.order()}};
  return Json{{"kind", "vector"}, {"base", g.base()}, {"dim", g.dim()}};
}

Group group_from_json(const Json& raw) {
  const Json& j = group_node(raw);
  const Json& kind = field(j, "kind");
  if (!kind.is_string()) bad("group kind must be a string");
  const auto k = kind.get<std::string>();
  if (k == "cyclic") {
    const auto n = as_int(field(j, "modulus"), "modulus");
    if (n < 2) bad("modulus must be at least 2");
    return Group::cyclic(static_cast<std::uint64_t>(n));
  }
  if (k == "vector") {
    const auto p = as_int(field(j, "base"), "base");
    const auto n = as_int(field(j, "dim"), "dim");
    if (p < 2) bad("base must be at least 2");
    if (n < 0 || n > 64) bad("dim out of range");
    return Group::vector(static_cast<std::uint64_t>(p), static_cast<int>(n));
  }
  bad("unknown group kind \"" + k + "\"");
}

Json element_to_json(const Group& g, Element x) {
  if (g.is_cyclic()) return x;
  Json arr = Json::array();
  for (int c : g.coords(x)) arr.push_back(c);
  return arr;
}

Element element_from_json(const Group& g, const Json& j) {
  if (g.is_cyclic()) {
    const auto v = as_int(j, "element");
    if (!g.contains(v)) throw Error(ErrorKind::OutOfRange, "element " + std::to_string(v) + " outside " + g.describe());
    return static_cast<Element>(v);
  }
  if (!j.is_array() || static_cast<int>(j.size()) != g.dim()) bad("vector element must have dim coordinates");
  std::vector<int> coords;
  for (const auto& c : j) {
    const auto v = as_int(c, "coordinate");
    if (v < 0 || v >= static_cast<std::int64_t>(g.base()))
      throw Error(ErrorKind::OutOfRange, "coordinate " + std::to_string(v) + " outside [0, p)");
    coords.push_back(static_cast<int>(v));
  }
  return g.from_coords(coords);
}

SetFile set_from_json(const Json& j) {
  Group g = group_from_json(j);
  return {g, checked_set(g, raw_elements(g, field(j, "elements")))};
}

Json set_to_json(const Group& g, const ElementSet& s) {
  return Json{{"group", group_to_json(g)}, {"elements", element_list(g, s)}};
}

WeightFn weights_from_json(const Json& j) {
  Group g = group_from_json(j);
  const auto elems = raw_elements(g, field(j, "elements"));
  const Json& ws = as_array(field(j, "weights"), "weights");
  if (ws.size() != elems.size()) bad("weights must align with elements");
  checked_set(g, elems);
  std::vector<std::pair<Character, double>> pairs;
  for (std::size_t i = 0; i < elems.size(); ++i) {
    const double w = as_double(ws[i], "weight");
    if (!(w >= 0) || !std::isfinite(w)) bad("weights must be finite and nonnegative");
    pairs.emplace_back(static_cast<Character>(elems[i]), w);
  }
  return WeightFn(g, std::move(pairs));
}

Json weights_to_json(const WeightFn& w) {
  return Json{{"group", group_to_json(w.group())},
              {"elements", element_list(w.group(), w.support())},
              {"weights", doubles(w.weights())}};
}

BohrFile bohr_from_json(const Json& j) {
  Group g = group_from_json(j);
  const auto freqs = raw_elements(g, field(j, "freqs"));
  BohrFile out{g, {}};
  std::vector<std::pair<Character, double>> pairs;
  if (j.contains("widths")) {
    const Json& ws = as_array(j.at("widths"), "widths");
    if (ws.size() != freqs.size()) bad("widths must align with freqs");
    for (std::size_t i = 0; i < freqs.size(); ++i)
      pairs.emplace_back(static_cast<Character>(freqs[i]), as_double(ws[i], "width"));
  } else {
    if (g.is_cyclic()) bad("cyclic Bohr sets need widths");
    for (auto f : freqs) pairs.emplace_back(static_cast<Character>(f), 0.0);
  }
  std::sort(pairs.begin(), pairs.end());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (i > 0 && pairs[i].first == pairs[i - 1].first) bad("duplicate frequency");
    out.width.freqs.push_back(pairs[i].first);
    out.width.widths.push_back(pairs[i].second);
  }
  if (!g.is_cyclic()) out.width.widths.clear();
  return out;
}

Json bohr_to_json(const Group& g, const BohrWidth& w) {
  Json j{{"group", group_to_json(g)}, {"freqs", element_list(g, w.freqs)}};
  if (g.is_cyclic()) j["widths"] = doubles(w.widths);
  return j;
}

IntSetFile intset_from_json(const Json& j) {
  IntSetFile out;
  out.n = as_int(field(j, "n"), "n");
  if (out.n < 1) bad("n must be positive");
  for (const auto& e : as_array(field(j, "elements"), "elements")) {
    const auto v = as_int(e, "element");
    if (v < 1 || v > out.n) throw Error(ErrorKind::OutOfRange, "element " + std::to_string(v) + " outside [1, n]");
    out.elements.push_back(v);
  }
  std::sort(out.elements.begin(), out.elements.end());
  if (std::adjacent_find(out.elements.begin(), out.elements.end()) != out.elements.end())
    bad("duplicate element in set");
  return out;
}

Json intset_to_json(std::int64_t n, const IntSet& s) { return Json{{"n", n}, {"elements", s}}; }

Json spectrum_to_json(const Group& g, const SpectrumReport& r) {
  return Json{{"group", group_to_json(g)},
              {"eta", round12(r.eta)},
              {"threshold", round12(r.threshold)},
              {"size", r.members.size()},
              {"members", element_list(g, r.members)},
              {"moduli", doubles(r.moduli)}};
}

Json certificate_to_json(const Group& g, const CoverCertificate& c) {
  Json lambda = Json::array();
  for (Character l : c.lambda) lambda.push_back(element_to_json(g, l));
  Json witnesses = Json::array();
  for (const auto& w : c.witnesses) {
    Json signs = Json::array();
    for (auto s : w.signs) signs.push_back(static_cast<int>(s));
    witnesses.push_back(Json{{"element", element_to_json(g, w.element)},
                             {"gamma1", element_to_json(g, w.gamma1)},
                             {"gamma2", element_to_json(g, w.gamma2)},
                             {"signs", signs}});
  }
  return Json{{"group", group_to_json(g)}, {"d", c.d},
              {"lambda", lambda},          {"gamma", element_list(g, c.gamma)},
              {"covered", element_list(g, c.covered)}, {"witnesses", witnesses}};
}

Json checks_to_json(const std::vector<NamedInequality>& checks) {
  Json arr = Json::array();
  for (const auto& c : checks)
    arr.push_back(Json{{"name", c.name}, {"lhs", round12(c.lhs)}, {"rhs", round12(c.rhs)}, {"holds", c.holds}});
  return arr;
}

Json trace_to_json(const Group& g, const IncrementTrace& t) {
  Json steps = Json::array();
  for (const auto& s : t.steps) {
    Json step{{"index", s.index},
              {"kind", to_string(s.kind)},
              {"bohr", bohr_to_json(g, s.bohr)},
              {"bohr_size", s.bohr_members.size()},
              {"rank", s.rank},
              {"set", element_list(g, s.set)},
              {"alpha", round12(s.alpha)}};
    if (s.kind == StepKind::terminal_count) {
      step["upsilon"] = s.upsilon;
      step["certified"] = s.certified;
      step["bound"] = round12(s.bound);
      step["many_solutions"] = s.many_solutions;
    } else {
      step["u"] = s.u;
      step["t"] = element_to_json(g, s.t);
      step["lambda_size"] = s.lambda_size;
      step["delta"] = round12(s.delta);
      step["nu"] = round12(s.nu);
      step["tau"] = round12(s.tau);
    }
    if (!s.note.empty()) step["note"] = s.note;
    step["checks"] = checks_to_json(s.checks);
    steps.push_back(std::move(step));
  }
  return Json{{"group", group_to_json(g)},
              {"coeffs", {t.coeffs.c1, t.coeffs.c2, t.coeffs.c3}},
              {"c_impl", round12(t.c_impl)},
              {"alpha0", round12(t.alpha0)},
              {"step_limit", t.step_limit},
              {"steps", steps}};
}

Json ap_to_json(const APWitness& w) {
  return Json{{"start", w.start}, {"diff", w.diff}, {"length", w.length}};
}

Json itsa_to_json(const Group& g, const ItsaResult& r) {
  Json j{{"case", r.which},       {"sigma", round12(r.sigma)},   {"alpha1", round12(r.alpha1)},
         {"alpha2", round12(r.alpha2)}, {"exponent", r.exponent}, {"rho_floor", round12(r.rho_floor)}};
  if (r.which == 1) {
    j["rho"] = round12(r.rho);
    j["b_prime"] = bohr_to_json(g, r.b_prime);
    j["b_prime_size"] = r.b_prime_size;
    j["coverage"] = round12(r.coverage);
  } else {
    j["b_dprime"] = bohr_to_json(g, r.b_dprime);
    j["b_dprime_size"] = r.b_dprime_members.size();
    j["rank"] = r.rank;
    j["lambda_size"] = r.lambda_size;
    j["role"] = r.role;
    j["x1"] = r.x1;
    j["x2"] = r.x2;
    j["sup1"] = round12(r.sup1);
    j["sup2"] = round12(r.sup2);
    j["product"] = round12(r.product);
    j["target"] = round12(r.target);
    j["empirical"] = r.empirical;
  }
  j["checks"] = checks_to_json(r.checks);
  return j;
}

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    bad(path + ": " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) bad("cannot write " + path);
  out << text;
}

void write_json(const std::string& path, const Json& j) { write_text(path, j.dump(2) + "\n"); }

}  // namespace spectral::io
