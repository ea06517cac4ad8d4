#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "spectral/bohr.hpp"
#include "spectral/cover.hpp"
#include "spectral/driver.hpp"
#include "spectral/energy.hpp"
#include "spectral/group.hpp"
#include "spectral/progression.hpp"
#include "spectral/spectra.hpp"
#include "spectral/sumset.hpp"

namespace spectral::io {

using Json = nlohmann::ordered_json;

/// Rounds to 12 significant digits so the shortest round-trip form printed by
/// the JSON writer never carries more.
double round12(double x);
/// printf("%.12g") with a fixed spelling for non-finite values.
std::string format12(double x);

Json group_to_json(const Group& g);
/// {"kind":"cyclic","modulus":N} or {"kind":"vector","base":p,"dim":n}.
Group group_from_json(const Json& j);

/// Cyclic elements are integers, vector elements coordinate arrays.
Json element_to_json(const Group& g, Element x);
Element element_from_json(const Group& g, const Json& j);

struct SetFile {
  Group group;
  ElementSet elements;
};

/// {"group":{...},"elements":[...]}. The group fields may also sit at the top
/// level. Out-of-range elements and duplicates raise InvalidInput.
SetFile set_from_json(const Json& j);
Json set_to_json(const Group& g, const ElementSet& s);

/// {"group":{...},"elements":[...],"weights":[...]}, weights aligned with elements.
WeightFn weights_from_json(const Json& j);
Json weights_to_json(const WeightFn& w);

/// {"group":{...},"freqs":[...],"widths":[...]}.
struct BohrFile {
  Group group;
  BohrWidth width;
};
BohrFile bohr_from_json(const Json& j);
Json bohr_to_json(const Group& g, const BohrWidth& w);

/// {"n":N,"elements":[...]} for subsets of {1..N}.
struct IntSetFile {
  std::int64_t n = 0;
  IntSet elements;
};
IntSetFile intset_from_json(const Json& j);
Json intset_to_json(std::int64_t n, const IntSet& s);

Json spectrum_to_json(const Group& g, const SpectrumReport& r);
Json certificate_to_json(const Group& g, const CoverCertificate& c);
Json checks_to_json(const std::vector<NamedInequality>& checks);
Json trace_to_json(const Group& g, const IncrementTrace& t);
Json ap_to_json(const APWitness& w);
Json itsa_to_json(const Group& g, const ItsaResult& r);

/// Reads and parses a file; InvalidInput on I/O or syntax errors.
Json read_json(const std::string& path);
/// Writes with two-space indentation and a trailing newline; "-" is stdout.
void write_json(const std::string& path, const Json& j);
void write_text(const std::string& path, const std::string& text);

}  // namespace spectral::io
