#pragma once

#include <string>
#include <vector>

namespace darkstate {

enum class MarkerStyle { kLine, kDashedLine, kDots, kCrosses };

struct PlotSeries {
  std::string label;
  std::string color = "#1f77b4";
  MarkerStyle style = MarkerStyle::kLine;
  std::vector<double> x;
  std::vector<double> y;
};

/// Dashed horizontal (or vertical) annotation across a panel.
struct ReferenceLine {
  double value = 0.0;
  std::string label;
  bool vertical = false;
  std::string color = "#d62728";
};

struct PlotPanel {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<PlotSeries> series;
  std::vector<ReferenceLine> lines;
};

/// Lays panels out on a grid with `columns` columns and returns a standalone SVG document.
std::string render_svg(const std::vector<PlotPanel>& panels, int columns = 1);

}  // namespace darkstate
