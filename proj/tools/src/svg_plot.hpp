#pragma once

#include <string>
#include <vector>

namespace qagarch::cli {

struct PlotSeries {
  enum class Style { Line, Points };
  std::vector<double> xs;
  std::vector<double> ys;
  Style style = Style::Line;
  std::string color = "#1f77b4";
  std::string label;
};

struct VerticalMarker {
  double x = 0.0;
  std::string label;
  std::string color = "#d62728";
};

struct Plot {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<PlotSeries> series;
  std::vector<VerticalMarker> markers;
  int width = 720;
  int height = 440;
};

/// Renders a plot as a standalone SVG document. Output depends only on the
/// input, so identical plots produce byte-identical files.
/// Throws InvalidInput when there is nothing finite to draw.
[[nodiscard]] std::string render_svg(const Plot& plot);

}  // namespace qagarch::cli
