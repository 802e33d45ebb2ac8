#pragma once

// Parameter sweeps over a two-axis grid, CSV output and the config format.

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "qbench/scenarios.hpp"

namespace qbench {

struct Axis {
  double min = 0.0;
  double max = 0.0;
  int steps = 1;

  /// Evenly spaced, inclusive of both ends; a single step sits at min.
  double at(int k) const { return steps == 1 ? min : min + (max - min) * k / (steps - 1); }
};

// Axis meaning per scenario:
//   TwoCoherent        x = overlap <alpha|-alpha>, y = output variance (both quadratures)
//   ThreeCoherentRing  x = |alpha|,                y = output variance (both quadratures)
//   SqueezedPair       x = Var0(x),                y = Var0(p) of the x-squeezed state
struct SweepSpec {
  PointParams base;
  Axis x;
  Axis y;
  std::filesystem::path csv;
  std::filesystem::path svg;
  int jobs = 1;

  /// Throws RangeError naming the invalid field.
  void validate() const;
};

/// Default grids for a scenario (see the table in the README).
SweepSpec default_sweep(Scenario s);

const char* x_axis_name(Scenario s);
const char* y_axis_name(Scenario s);

/// Grid point (row over y, col over x) as point parameters.
PointParams grid_point(const SweepSpec& spec, int row, int col);

struct SweepRow {
  int row = 0;
  int col = 0;
  PointResult result;
};

/// Evaluates every grid point, row-major over (y, x), on `spec.jobs`
/// workers. Results come back in grid order regardless of completion order.
/// `progress` (optional) is called from the calling thread after each row
/// is finalized.
std::vector<SweepRow> run_sweep(const SweepSpec& spec, const SolverBackend& backend = *default_backend(),
                                const std::function<void(const SweepRow&)>& progress = {});

inline constexpr const char* kCsvSchema = "qbench-sweep/1";

void write_csv_header(std::ostream& out);
void write_csv_row(std::ostream& out, const SweepRow& row);
void write_csv(std::ostream& out, const std::vector<SweepRow>& rows);

/// Status column text: the solver status, or "Unphysical".
std::string status_text(const PointResult& r, bool lower);

/// `key = value` lines, `#` comments. Keys:
///   scenario, device, T, Vex, N, r, alpha, hybrid_energy,
///   x_min, x_max, x_steps, y_min, y_max, y_steps, csv, svg, jobs
/// Unset keys take default_sweep(scenario).
SweepSpec parse_config(std::istream& in);
SweepSpec parse_config(const std::filesystem::path& path);

}  // namespace qbench
