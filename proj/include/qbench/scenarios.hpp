#pragma once

// The three benchmark scenarios and single-point evaluation.

#include <optional>
#include <string>
#include <string_view>

#include "qbench/negativity.hpp"

namespace qbench {

enum class Scenario { TwoCoherent, ThreeCoherentRing, SqueezedPair };

const char* to_string(Scenario s);
/// Accepts the names printed by to_string, case-insensitively, plus the
/// short forms "two", "ring" and "squeezed". Throws ParseError listing the
/// valid names, positioned at (line, column).
Scenario parse_scenario(std::string_view name, int line = 1, int column = 1);

/// How Bob's records are produced from the test states.
enum class Device {
  /// Loss T and excess noise Vex on both quadratures.
  Channel,
  /// Heterodyne the input and re-prepare a coherent state (entanglement
  /// breaking); T acts as the re-preparation gain sqrt(T).
  InterceptResend,
};

const char* to_string(Device d);
Device parse_device(std::string_view name, int line = 1, int column = 1);

/// Parameters of one evaluation. Unset optionals take scenario defaults.
struct PointParams {
  Scenario scenario = Scenario::TwoCoherent;
  Device device = Device::Channel;
  double T = 1.0;
  double Vex = 0.0;
  /// 0 selects 20 for two-state scenarios and 15 for the ring.
  int N = 0;
  /// TwoCoherent: <alpha|-alpha>. Derived from alpha when only that is set.
  std::optional<double> overlap;
  /// TwoCoherent or ring amplitude |alpha|.
  std::optional<double> alpha;
  /// SqueezedPair squeezing magnitude (default 0.35).
  std::optional<double> r;
  /// SqueezedPair output variances of the x-squeezed state; the p-squeezed
  /// state gets them swapped. Override the channel when set.
  std::optional<double> var_x;
  std::optional<double> var_p;
  HybridEnergy hybrid_energy = HybridEnergy::Bounded;
};

int default_cutoff(Scenario s);

/// Fills in defaults and validates ranges (RangeError naming the field).
PointParams resolve(PointParams p);

BenchmarkProblem make_problem(const PointParams& resolved);

struct PointResult {
  PointParams params;
  /// False when the requested output variances violate the uncertainty
  /// relation; no program is solved then.
  bool physical = true;
  BoundResult lower;
  BoundResult upper;

  bool quantum_flag() const { return upper.optimal() && upper.value > kZeroThreshold; }
  /// All programs that were run reached Optimal.
  bool ok() const { return !physical || (lower.optimal() && upper.optimal()); }
};

PointResult run_point(const PointParams& params, const SolverBackend& backend = *default_backend());

/// Solves an already assembled problem (e.g. ingested records).
PointResult run_problem(const BenchmarkProblem& problem, HybridEnergy energy = HybridEnergy::Bounded,
                        const SolverBackend& backend = *default_backend());

}  // namespace qbench
