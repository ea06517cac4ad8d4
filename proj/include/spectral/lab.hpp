#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "spectral/io.hpp"

namespace spectral::lab {

struct LabConfig {
  std::uint64_t seed = 1;
  /// Negative: the suite's documented default.
  long trials = -1;
  /// Relative tolerance for floating comparisons; negative: 1e-9.
  double tolerance = -1;
  /// Worker threads; 0 uses the hardware concurrency. Never affects the report.
  unsigned threads = 0;
  /// Grid overrides by name (eta, eps, m, nu, sigma, n, alpha).
  std::map<std::string, std::vector<double>> grids;
};

/// One checked relation. slack >= 0 exactly when the relation holds before tolerance.
struct Row {
  std::string suite;
  std::uint64_t trial = 0;
  std::string instance;
  std::string branch;
  std::string relation;
  double lhs = 0;
  double rhs = 0;
  double slack = 0;
  bool holds = false;
  std::string note;
};

struct SuiteReport {
  std::string suite;
  LabConfig config;
  std::vector<Row> rows;
  std::size_t violations = 0;
  /// Some trial hit a size cap (TooLarge).
  bool resource_exceeded = false;
  double seconds = 0;
};

const std::vector<std::string>& suite_names();
const std::vector<std::string>& experiment_names();

/// Runs one suite (or "all") at its default grid; UnknownSuite / ConfigInvalid on bad input.
SuiteReport run_verify(const std::string& suite, const LabConfig& config);

/// Tabular or JSON result of an experiment; violations counts rows breaking a stated bound.
struct ExperimentReport {
  std::string kind;
  LabConfig config;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  io::Json json;
  bool is_json = false;
  std::size_t violations = 0;
  double seconds = 0;
};

/// kind in chang-vs-bloom, increment-trace, behrend-scale, sumset-scale.
/// increment-trace reads `input` (a set file) when nonempty.
ExperimentReport run_experiment(const std::string& kind, const LabConfig& config, const std::string& input = {});

/// Config line, optional timestamp line, header, rows.
std::string to_csv(const SuiteReport& report, bool timestamp);
std::string to_csv(const ExperimentReport& report, bool timestamp);
/// JSON reports carry the config and, unless suppressed, a "generated" field.
io::Json to_json(const ExperimentReport& report, bool timestamp);

std::string describe(const LabConfig& config);
/// RFC 4180 quoting when needed.
std::string csv_field(const std::string& s);

/// Worst-case independent longest AP in A + B (quadratic in |A + B|); the oracle for ap-dp.
APWitness brute_longest_ap_in_sumset(const IntSet& a, const IntSet& b);
/// Largest 3AP-free subset of {1..n} by exhaustive bitmask search, n <= 24.
int bitmask_R(int n);

}  // namespace spectral::lab
