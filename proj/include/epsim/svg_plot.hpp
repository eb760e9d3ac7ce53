#pragma once

#include <span>
#include <string>
#include <vector>

namespace epsim {

/// One polyline of an SVG line plot.
struct PlotSeries {
  std::string label;
  std::span<const double> x;
  std::span<const double> y;
  std::string color = "#1f77b4";
};

/// Writes a standalone SVG line chart with auto-scaled linear axes, ticks
/// and a legend. Long series are decimated to keep files small.
void write_svg_plot(const std::string& path, const std::string& title,
                    const std::string& x_label, const std::string& y_label,
                    const std::vector<PlotSeries>& series);

}  // namespace epsim
