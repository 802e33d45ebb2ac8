#pragma once

#include <iosfwd>
#include <vector>

#include "qbench/sweep.hpp"

namespace qbench {

/// Level curves of a scalar field sampled on a regular grid, by marching
/// squares. `values` is row-major with `rows` rows; NaN cells are skipped.
/// Segments are in grid coordinates (col, row).
struct Segment {
  double x0, y0, x1, y1;
};
std::vector<Segment> contour_segments(const std::vector<double>& values, int rows, int cols, double level);

/// Static SVG 1.1 plot of a sweep. Two-dimensional grids are drawn as a
/// heatmap of the lower bound with level curves; the two-coherent and ring
/// scenarios put both axes in decreasing order. A grid with a single row or
/// column becomes a line plot of both bounds along the varying axis.
void write_svg(std::ostream& out, const SweepSpec& spec, const std::vector<SweepRow>& rows);

}  // namespace qbench
