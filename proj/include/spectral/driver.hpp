#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spectral/bohr.hpp"
#include "spectral/increment.hpp"

namespace spectral {

struct DriverParams {
  /// Required growth factor 1 + c_impl per non-terminal step.
  double c_impl = 1.0 / 65536;
  /// The constant c in the dilate rule c d^{-1} alpha / 4 <= delta <= c d^{-1} alpha.
  double delta_c = 1.0 / 256;
  std::uint64_t seed = 0;
};

enum class StepKind { linf_increment, thde_increment, empirical_increment, terminal_count };

std::string to_string(StepKind kind);

/// State (B_i, A_i) plus the move to step i + 1. A_{i+1} lies in u . A_i + t.
struct TraceStep {
  int index = 0;
  StepKind kind = StepKind::terminal_count;
  /// Z_N: frequencies with widths. F_p^n: generators of the annihilator, widths empty.
  BohrWidth bohr;
  ElementSet bohr_members;
  int rank = 0;
  ElementSet set;
  double alpha = 0;

  std::int64_t u = 1;
  Element t = 0;
  std::size_t lambda_size = 0;
  /// Dilation parameter of the step (delta'' for Z_N, 0 for subspaces).
  double delta = 0;
  double nu = 0;
  double tau = 0;

  /// Terminal records: direct count, the certified trilinear count and its bound.
  std::uint64_t upsilon = 0;
  std::uint64_t certified = 0;
  double bound = 0;
  bool many_solutions = false;

  std::string note;
  std::vector<NamedInequality> checks;
};

struct IncrementTrace {
  EquationCoeffs coeffs;
  double c_impl = 0;
  double alpha0 = 0;
  /// ceil(log(1/alpha0) / log(1 + c_impl)) + 1.
  std::size_t step_limit = 0;
  std::vector<TraceStep> steps;
};

struct TraceCheck {
  bool ok = true;
  std::vector<std::string> violations;
};

/// Recomputes every recorded quantity: Bohr membership, densities, growth,
/// rank bookkeeping, the subset-of-dilate chain, monotone counts, the terminal count.
TraceCheck verify_trace(const Group& g, const IncrementTrace& trace);

/// Desk-scale iteration in Z_N, N prime <= 1021. Throws StepFailure on an
/// internal inconsistency.
IncrementTrace driver_zn(const Group& g, const ElementSet& a, const EquationCoeffs& c, const DriverParams& params = {});

/// Same contract with Bohr spaces in F_p^n, p odd, p^n <= 3^8.
IncrementTrace driver_fpn(const Group& g, const ElementSet& a, const EquationCoeffs& c, const DriverParams& params = {});

/// The largest non-breakpoint delta in [c alpha / 4d, c alpha / d] with B(delta)
/// regular, else the largest regular value below the window.
double select_delta(const BohrSetZ& b, double alpha, double c);

}  // namespace spectral
