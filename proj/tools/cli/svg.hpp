#pragma once

#include <string>
#include <utility>
#include <vector>

namespace zqft::cli {

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> points;
  bool markers = false;  // scatter instead of a polyline
};

// Line/scatter plot written as a standalone SVG file. Non-positive values are
// dropped on a log axis.
void write_svg_plot(const std::string& path, const std::string& title, const std::string& xlabel,
                    const std::string& ylabel, const std::vector<Series>& series, bool log_x, bool log_y);

}  // namespace zqft::cli
