#pragma once

#include <string>
#include <utility>
#include <vector>

namespace sesop {

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> points;
  std::string color;  // empty: palette color by index
  bool dashed = false;
};

struct ChartSpec {
  std::string title;
  std::string x_label = "k";
  std::string y_label = "f(x_k) - f*";
  bool log_x = false;
  bool log_y = false;
  int width = 960;
  int height = 640;
};

/// Renders a self-contained SVG line chart. Non-finite points are dropped;
/// non-positive coordinates are dropped on log axes. Long series are
/// downsampled to keep the file small. Throws std::invalid_argument when
/// nothing is plottable.
std::string render_line_chart(const ChartSpec& spec, const std::vector<Series>& series);

void write_svg(const std::string& svg, const std::string& path);

}  // namespace sesop
