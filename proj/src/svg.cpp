#include "darkstate/svg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace darkstate {

namespace {

constexpr double kPanelWidth = 520.0;
constexpr double kPanelHeight = 340.0;
constexpr double kMarginLeft = 70.0;
constexpr double kMarginRight = 20.0;
constexpr double kMarginTop = 36.0;
constexpr double kMarginBottom = 50.0;

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void include(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void finish() {
    if (!std::isfinite(lo)) {
      lo = 0.0;
      hi = 1.0;
    }
    if (hi - lo < 1e-12) {
      lo -= 0.5;
      hi += 0.5;
    }
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;
  }
};

double nice_step(double span) {
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (m * mag >= raw) return m * mag;
  }
  return 10.0 * mag;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string render_panel(const PlotPanel& panel, double ox, double oy) {
  Range xr;
  Range yr;
  for (const auto& s : panel.series) {
    for (double v : s.x) xr.include(v);
    for (double v : s.y) yr.include(v);
  }
  for (const auto& l : panel.lines) (l.vertical ? xr : yr).include(l.value);
  xr.finish();
  yr.finish();

  const double pw = kPanelWidth - kMarginLeft - kMarginRight;
  const double ph = kPanelHeight - kMarginTop - kMarginBottom;
  const double left = ox + kMarginLeft;
  const double top = oy + kMarginTop;
  auto sx = [&](double x) { return left + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
  auto sy = [&](double y) { return top + ph - (y - yr.lo) / (yr.hi - yr.lo) * ph; };

  std::string out;
  out += fmt::format("<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"none\" stroke=\"#000\"/>\n",
                     left, top, pw, ph);
  out += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"14\" text-anchor=\"middle\">{}</text>\n",
                     left + pw / 2, oy + 22, escape(panel.title));
  out += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"12\" text-anchor=\"middle\">{}</text>\n",
                     left + pw / 2, top + ph + 40, escape(panel.x_label));
  out += fmt::format(
      "<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 {:.2f} {:.2f})\">{}</text>\n",
      ox + 18, top + ph / 2, ox + 18, top + ph / 2, escape(panel.y_label));

  const double xs = nice_step(xr.hi - xr.lo);
  for (double t = std::ceil(xr.lo / xs) * xs; t <= xr.hi; t += xs) {
    out += fmt::format("<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\" stroke=\"#000\"/>\n", sx(t),
                       top + ph, top + ph + 5);
    out += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"10\" text-anchor=\"middle\">{:.4g}</text>\n", sx(t),
                       top + ph + 18, std::abs(t) < 1e-12 * xs ? 0.0 : t);
  }
  const double ys = nice_step(yr.hi - yr.lo);
  for (double t = std::ceil(yr.lo / ys) * ys; t <= yr.hi; t += ys) {
    out += fmt::format("<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{2:.2f}\" y2=\"{1:.2f}\" stroke=\"#000\"/>\n", left - 5,
                       sy(t), left);
    out += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"10\" text-anchor=\"end\">{:.4g}</text>\n", left - 8,
                       sy(t) + 3, std::abs(t) < 1e-12 * ys ? 0.0 : t);
  }

  for (const auto& l : panel.lines) {
    if (l.vertical) {
      out += fmt::format(
          "<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\" stroke=\"{3}\" stroke-dasharray=\"6,4\"/>\n",
          sx(l.value), top, top + ph, l.color);
      out += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"10\" fill=\"{}\">{}</text>\n", sx(l.value) + 3,
                         top + ph - 6, l.color, escape(l.label));
    } else {
      out += fmt::format(
          "<line x1=\"{1:.2f}\" y1=\"{0:.2f}\" x2=\"{2:.2f}\" y2=\"{0:.2f}\" stroke=\"{3}\" stroke-dasharray=\"6,4\"/>\n",
          sy(l.value), left, left + pw, l.color);
      out += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"10\" fill=\"{}\">{}</text>\n", left + 4,
                         sy(l.value) - 4, l.color, escape(l.label));
    }
  }

  for (const auto& s : panel.series) {
    const std::size_t n = std::min(s.x.size(), s.y.size());
    if (s.style == MarkerStyle::kLine || s.style == MarkerStyle::kDashedLine) {
      std::string points;
      for (std::size_t i = 0; i < n; ++i) points += fmt::format("{:.2f},{:.2f} ", sx(s.x[i]), sy(s.y[i]));
      out += fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\"{} points=\"{}\"/>\n", s.color,
                         s.style == MarkerStyle::kDashedLine ? " stroke-dasharray=\"4,3\"" : "", points);
    } else if (s.style == MarkerStyle::kDots) {
      for (std::size_t i = 0; i < n; ++i) {
        out += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"2.5\" fill=\"{}\"/>\n", sx(s.x[i]), sy(s.y[i]),
                           s.color);
      }
    } else {
      for (std::size_t i = 0; i < n; ++i) {
        const double cx = sx(s.x[i]);
        const double cy = sy(s.y[i]);
        out += fmt::format(
            "<path d=\"M{:.2f},{:.2f}L{:.2f},{:.2f}M{:.2f},{:.2f}L{:.2f},{:.2f}\" stroke=\"{}\" stroke-width=\"1.2\"/>\n",
            cx - 3, cy - 3, cx + 3, cy + 3, cx - 3, cy + 3, cx + 3, cy - 3, s.color);
      }
    }
  }

  // Legend, one entry per labelled series.
  double ly = top + 14;
  for (const auto& s : panel.series) {
    if (s.label.empty()) continue;
    out += fmt::format("<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"10\" height=\"10\" fill=\"{}\"/>\n", left + pw - 130,
                       ly - 9, s.color);
    out += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"10\">{}</text>\n", left + pw - 115, ly,
                       escape(s.label));
    ly += 14;
  }
  return out;
}

}  // namespace

std::string render_svg(const std::vector<PlotPanel>& panels, int columns) {
  columns = std::max(1, columns);
  const int count = static_cast<int>(panels.size());
  const int rows = std::max(1, (count + columns - 1) / columns);
  const double width = kPanelWidth * std::min(columns, std::max(1, count));
  const double height = kPanelHeight * rows;

  std::string out = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0:.0f}\" height=\"{1:.0f}\" viewBox=\"0 0 {0:.0f} {1:.0f}\" "
      "font-family=\"sans-serif\">\n<rect width=\"100%\" height=\"100%\" fill=\"#fff\"/>\n",
      width, height);
  for (int i = 0; i < count; ++i) {
    out += render_panel(panels[static_cast<std::size_t>(i)], kPanelWidth * (i % columns), kPanelHeight * (i / columns));
  }
  out += "</svg>\n";
  return out;
}

}  // namespace darkstate
