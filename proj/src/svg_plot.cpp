#include "qbench/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>

namespace qbench {

std::vector<Segment> contour_segments(const std::vector<double>& values, int rows, int cols, double level) {
  std::vector<Segment> out;
  auto v = [&](int r, int c) { return values[static_cast<size_t>(r * cols + c)]; };
  // Interpolated crossing on the edge between two corners.
  auto cross = [level](double a, double b) { return (level - a) / (b - a); };
  for (int r = 0; r + 1 < rows; ++r) {
    for (int c = 0; c + 1 < cols; ++c) {
      const double a = v(r, c), b = v(r, c + 1), d = v(r + 1, c), e = v(r + 1, c + 1);
      if (std::isnan(a) || std::isnan(b) || std::isnan(d) || std::isnan(e)) continue;
      // Edges: bottom (a-b), right (b-e), top (d-e), left (a-d).
      struct P {
        double x, y;
      };
      std::vector<P> pts;
      if ((a > level) != (b > level)) pts.push_back({c + cross(a, b), double(r)});
      if ((b > level) != (e > level)) pts.push_back({c + 1.0, r + cross(b, e)});
      if ((d > level) != (e > level)) pts.push_back({c + cross(d, e), r + 1.0});
      if ((a > level) != (d > level)) pts.push_back({double(c), r + cross(a, d)});
      if (pts.size() == 2) {
        out.push_back({pts[0].x, pts[0].y, pts[1].x, pts[1].y});
      } else if (pts.size() == 4) {
        // Saddle: resolve with the cell average.
        const bool centre = (a + b + d + e) / 4.0 > level;
        if (centre == (a > level)) {
          out.push_back({pts[0].x, pts[0].y, pts[1].x, pts[1].y});
          out.push_back({pts[2].x, pts[2].y, pts[3].x, pts[3].y});
        } else {
          out.push_back({pts[0].x, pts[0].y, pts[3].x, pts[3].y});
          out.push_back({pts[1].x, pts[1].y, pts[2].x, pts[2].y});
        }
      }
    }
  }
  return out;
}

namespace {

constexpr double kWidth = 640, kHeight = 520;
constexpr double kLeft = 80, kRight = 110, kTop = 40, kBottom = 60;
constexpr double kPlotW = kWidth - kLeft - kRight, kPlotH = kHeight - kTop - kBottom;

std::string fmt(double v, const char* f = "%.2f") {
  char buf[32];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// Piecewise-linear ramp from dark blue through teal to yellow.
std::string colour(double t) {
  static const double stops[][3] = {{68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}};
  t = std::clamp(t, 0.0, 1.0) * 4.0;
  const int k = std::min(3, static_cast<int>(t));
  const double f = t - k;
  char buf[16];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", static_cast<int>(stops[k][0] + f * (stops[k + 1][0] - stops[k][0])),
                static_cast<int>(stops[k][1] + f * (stops[k + 1][1] - stops[k][1])),
                static_cast<int>(stops[k][2] + f * (stops[k + 1][2] - stops[k][2])));
  return buf;
}

double value_of(const BoundResult& b) {
  return b.optimal() ? b.value : std::numeric_limits<double>::quiet_NaN();
}

void header(std::ostream& out, const std::string& title) {
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << title << "</text>\n";
}

// Axis with ticks; `lo` maps to pixel p0 and `hi` to p1.
void axis(std::ostream& out, bool horizontal, double lo, double hi, double p0, double p1, const std::string& label) {
  const double fixed = horizontal ? kTop + kPlotH : kLeft;
  if (horizontal) {
    out << "<line x1=\"" << kLeft << "\" y1=\"" << fixed << "\" x2=\"" << kLeft + kPlotW << "\" y2=\"" << fixed
        << "\" stroke=\"black\"/>\n";
  } else {
    out << "<line x1=\"" << fixed << "\" y1=\"" << kTop << "\" x2=\"" << fixed << "\" y2=\"" << kTop + kPlotH
        << "\" stroke=\"black\"/>\n";
  }
  for (int k = 0; k <= 4; ++k) {
    const double v = lo + (hi - lo) * k / 4.0;
    const double p = p0 + (p1 - p0) * k / 4.0;
    if (horizontal) {
      out << "<line x1=\"" << p << "\" y1=\"" << fixed << "\" x2=\"" << p << "\" y2=\"" << fixed + 5
          << "\" stroke=\"black\"/><text x=\"" << p << "\" y=\"" << fixed + 18 << "\" text-anchor=\"middle\">"
          << fmt(v) << "</text>\n";
    } else {
      out << "<line x1=\"" << fixed - 5 << "\" y1=\"" << p << "\" x2=\"" << fixed << "\" y2=\"" << p
          << "\" stroke=\"black\"/><text x=\"" << fixed - 8 << "\" y=\"" << p + 4 << "\" text-anchor=\"end\">"
          << fmt(v) << "</text>\n";
    }
  }
  if (horizontal) {
    out << "<text x=\"" << kLeft + kPlotW / 2 << "\" y=\"" << kHeight - 15 << "\" text-anchor=\"middle\">" << label
        << "</text>\n";
  } else {
    out << "<text transform=\"translate(20," << kTop + kPlotH / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
        << label << "</text>\n";
  }
}

void line_plot(std::ostream& out, const SweepSpec& spec, const std::vector<SweepRow>& rows) {
  const bool along_x = spec.x.steps > 1 || spec.y.steps == 1;
  const Axis& ax = along_x ? spec.x : spec.y;
  const std::string label = along_x ? x_axis_name(spec.base.scenario) : y_axis_name(spec.base.scenario);
  double vmax = 0.0;
  for (const auto& r : rows) {
    for (double v : {value_of(r.result.lower), value_of(r.result.upper)})
      if (std::isfinite(v)) vmax = std::max(vmax, v);
  }
  if (vmax <= 0.0) vmax = 1e-3;
  vmax *= 1.1;
  const double lo = ax.min, hi = ax.steps > 1 ? ax.max : ax.min + 1.0;
  auto px = [&](double v) { return kLeft + (v - lo) / (hi - lo) * kPlotW; };
  auto py = [&](double v) { return kTop + kPlotH - v / vmax * kPlotH; };

  header(out, std::string(to_string(spec.base.scenario)) + ": negativity bounds, N=" +
                  std::to_string(rows.empty() ? spec.base.N : rows.front().result.params.N));
  axis(out, true, lo, hi, px(lo), px(hi), label);
  axis(out, false, 0.0, vmax, py(0.0), py(vmax), "negativity");
  const struct {
    bool lower;
    const char* colour;
    const char* name;
  } series[] = {{true, "#1f4e9c", "lower bound"}, {false, "#c0392b", "hybrid upper bound"}};
  int legend = 0;
  for (const auto& s : series) {
    std::string path;
    for (size_t k = 0; k < rows.size(); ++k) {
      const double v = value_of(s.lower ? rows[k].result.lower : rows[k].result.upper);
      if (!std::isfinite(v)) continue;
      path += (path.empty() ? "M" : " L") + fmt(px(ax.at(static_cast<int>(k)))) + ',' + fmt(py(v));
      out << "<circle cx=\"" << fmt(px(ax.at(static_cast<int>(k)))) << "\" cy=\"" << fmt(py(v))
          << "\" r=\"2.5\" fill=\"" << s.colour << "\"/>\n";
    }
    if (!path.empty()) {
      out << "<path d=\"" << path << "\" fill=\"none\" stroke=\"" << s.colour << "\" stroke-width=\"1.5\"/>\n";
    }
    const double ly = kTop + 10 + 18 * legend++;
    out << "<line x1=\"" << kLeft + kPlotW + 10 << "\" y1=\"" << ly << "\" x2=\"" << kLeft + kPlotW + 30
        << "\" y2=\"" << ly << "\" stroke=\"" << s.colour << "\" stroke-width=\"2\"/><text x=\""
        << kLeft + kPlotW + 34 << "\" y=\"" << ly + 4 << "\" font-size=\"10\">" << s.name << "</text>\n";
  }
  out << "</svg>\n";
}

void heatmap(std::ostream& out, const SweepSpec& spec, const std::vector<SweepRow>& rows) {
  const int R = spec.y.steps, C = spec.x.steps;
  std::vector<double> values(static_cast<size_t>(R * C), std::numeric_limits<double>::quiet_NaN());
  double vmax = 0.0;
  for (const auto& r : rows) {
    const double v = r.result.physical ? value_of(r.result.lower) : std::numeric_limits<double>::quiet_NaN();
    values[static_cast<size_t>(r.row * C + r.col)] = v;
    if (std::isfinite(v)) vmax = std::max(vmax, v);
  }
  if (vmax <= 0.0) vmax = 1e-3;
  const bool inverted = spec.base.scenario != Scenario::SqueezedPair;
  // Grid coordinates to pixels; inverted axes run from max to min.
  auto gx = [&](double c) {
    const double t = c / (C - 1);
    return kLeft + (inverted ? 1.0 - t : t) * kPlotW;
  };
  auto gy = [&](double r) {
    const double t = r / (R - 1);
    return kTop + (inverted ? t : 1.0 - t) * kPlotH;
  };
  header(out, std::string(to_string(spec.base.scenario)) + ": negativity lower bound, N=" +
                  std::to_string(rows.empty() ? spec.base.N : rows.front().result.params.N));

  const double cw = kPlotW / (C - 1), ch = kPlotH / (R - 1);
  for (int r = 0; r < R; ++r) {
    for (int c = 0; c < C; ++c) {
      const double v = values[static_cast<size_t>(r * C + c)];
      const double x = std::clamp(gx(c) - cw / 2, kLeft, kLeft + kPlotW);
      const double y = std::clamp(gy(r) - ch / 2, kTop, kTop + kPlotH);
      const double w = std::min(gx(c) + cw / 2, kLeft + kPlotW) - x;
      const double h = std::min(gy(r) + ch / 2, kTop + kPlotH) - y;
      out << "<rect x=\"" << fmt(x) << "\" y=\"" << fmt(y) << "\" width=\"" << fmt(w) << "\" height=\"" << fmt(h)
          << "\" fill=\"" << (std::isfinite(v) ? colour(v / vmax) : std::string("#d0d0d0")) << "\"/>\n";
    }
  }
  std::vector<double> levels = {kZeroThreshold};
  for (int k = 1; k <= 4; ++k) levels.push_back(vmax * k / 5.0);
  for (size_t k = 0; k < levels.size(); ++k) {
    const auto segs = contour_segments(values, R, C, levels[k]);
    if (segs.empty()) continue;
    std::string path;
    for (const auto& s : segs) {
      path += "M" + fmt(gx(s.x0)) + ',' + fmt(gy(s.y0)) + " L" + fmt(gx(s.x1)) + ',' + fmt(gy(s.y1)) + ' ';
    }
    out << "<path d=\"" << path << "\" fill=\"none\" stroke=\"" << (k == 0 ? "white" : "black")
        << "\" stroke-width=\"" << (k == 0 ? 2 : 1) << "\"/>\n";
  }
  const double xlo = spec.x.min, xhi = spec.x.max, ylo = spec.y.min, yhi = spec.y.max;
  axis(out, true, inverted ? xhi : xlo, inverted ? xlo : xhi, kLeft, kLeft + kPlotW, x_axis_name(spec.base.scenario));
  axis(out, false, inverted ? yhi : ylo, inverted ? ylo : yhi, kTop + kPlotH, kTop, y_axis_name(spec.base.scenario));
  // Colour bar.
  const double bx = kLeft + kPlotW + 25;
  for (int k = 0; k < 50; ++k) {
    out << "<rect x=\"" << bx << "\" y=\"" << fmt(kTop + kPlotH * (1.0 - (k + 1) / 50.0)) << "\" width=\"18\" height=\""
        << fmt(kPlotH / 50.0 + 0.5) << "\" fill=\"" << colour((k + 0.5) / 50.0) << "\"/>\n";
  }
  out << "<text x=\"" << bx + 22 << "\" y=\"" << kTop + 4 << "\" font-size=\"10\">" << fmt(vmax, "%.3g")
      << "</text>\n<text x=\"" << bx + 22 << "\" y=\"" << kTop + kPlotH << "\" font-size=\"10\">0</text>\n";
  out << "</svg>\n";
}

}  // namespace

void write_svg(std::ostream& out, const SweepSpec& spec, const std::vector<SweepRow>& rows) {
  if (spec.x.steps == 1 || spec.y.steps == 1) {
    line_plot(out, spec, rows);
  } else {
    heatmap(out, spec, rows);
  }
}

}  // namespace qbench
