#include "svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include "qagarch/errors.hpp"

namespace qagarch::cli {
namespace {

constexpr double kMarginLeft = 70.0;
constexpr double kMarginRight = 20.0;
constexpr double kMarginTop = 40.0;
constexpr double kMarginBottom = 50.0;

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string num(double v) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(2) << v;
  return s.str();
}

std::string tick(double v) {
  std::ostringstream s;
  s << std::setprecision(4) << v;
  return s.str();
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void pad() {
    if (hi - lo < 1e-12) {
      lo -= 0.5;
      hi += 0.5;
    } else {
      const double margin = 0.05 * (hi - lo);
      lo -= margin;
      hi += margin;
    }
  }
  [[nodiscard]] bool empty() const { return lo > hi; }
};

}  // namespace

std::string render_svg(const Plot& plot) {
  Range xr, yr;
  for (const auto& s : plot.series) {
    if (s.xs.size() != s.ys.size()) throw InvalidInput("plot series '" + s.label + "' has mismatched columns");
    for (std::size_t k = 0; k < s.xs.size(); ++k) {
      if (std::isfinite(s.xs[k]) && std::isfinite(s.ys[k])) {
        xr.add(s.xs[k]);
        yr.add(s.ys[k]);
      }
    }
  }
  if (xr.empty()) throw InvalidInput("plot has no finite points");
  for (const auto& m : plot.markers) xr.add(m.x);
  xr.pad();
  yr.pad();

  const double w = plot.width, h = plot.height;
  const double pw = w - kMarginLeft - kMarginRight;
  const double ph = h - kMarginTop - kMarginBottom;
  const auto px = [&](double x) { return kMarginLeft + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
  const auto py = [&](double y) { return kMarginTop + (yr.hi - y) / (yr.hi - yr.lo) * ph; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << plot.width << "\" height=\""
      << plot.height << "\" viewBox=\"0 0 " << plot.width << ' ' << plot.height << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << num(w / 2) << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"15\">"
      << escape(plot.title) << "</text>\n";
  svg << "<rect x=\"" << num(kMarginLeft) << "\" y=\"" << num(kMarginTop) << "\" width=\"" << num(pw)
      << "\" height=\"" << num(ph) << "\" fill=\"none\" stroke=\"#333\"/>\n";

  for (int i = 0; i <= 4; ++i) {
    const double xv = xr.lo + (xr.hi - xr.lo) * i / 4.0;
    const double yv = yr.lo + (yr.hi - yr.lo) * i / 4.0;
    svg << "<text x=\"" << num(px(xv)) << "\" y=\"" << num(kMarginTop + ph + 18)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << tick(xv)
        << "</text>\n";
    svg << "<text x=\"" << num(kMarginLeft - 6) << "\" y=\"" << num(py(yv) + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << tick(yv)
        << "</text>\n";
  }
  svg << "<text x=\"" << num(kMarginLeft + pw / 2) << "\" y=\"" << num(h - 10)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
      << escape(plot.x_label) << "</text>\n";
  svg << "<text x=\"16\" y=\"" << num(kMarginTop + ph / 2) << "\" transform=\"rotate(-90 16 "
      << num(kMarginTop + ph / 2) << ")\" text-anchor=\"middle\" font-family=\"sans-serif\" "
      << "font-size=\"12\">" << escape(plot.y_label) << "</text>\n";

  for (const auto& s : plot.series) {
    if (s.style == PlotSeries::Style::Line) {
      svg << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
      bool first = true;
      for (std::size_t k = 0; k < s.xs.size(); ++k) {
        if (!std::isfinite(s.xs[k]) || !std::isfinite(s.ys[k])) continue;
        svg << (first ? "" : " ") << num(px(s.xs[k])) << ',' << num(py(s.ys[k]));
        first = false;
      }
      svg << "\"/>\n";
    } else {
      for (std::size_t k = 0; k < s.xs.size(); ++k) {
        if (!std::isfinite(s.xs[k]) || !std::isfinite(s.ys[k])) continue;
        svg << "<circle cx=\"" << num(px(s.xs[k])) << "\" cy=\"" << num(py(s.ys[k]))
            << "\" r=\"2.5\" fill=\"" << s.color << "\"/>\n";
      }
    }
  }
  for (const auto& m : plot.markers) {
    svg << "<line x1=\"" << num(px(m.x)) << "\" y1=\"" << num(kMarginTop) << "\" x2=\"" << num(px(m.x))
        << "\" y2=\"" << num(kMarginTop + ph) << "\" stroke=\"" << m.color
        << "\" stroke-dasharray=\"4 3\"/>\n";
    svg << "<text x=\"" << num(px(m.x) + 4) << "\" y=\"" << num(kMarginTop + 14) << "\" fill=\"" << m.color
        << "\" font-family=\"sans-serif\" font-size=\"11\">" << escape(m.label) << "</text>\n";
  }

  double legend_y = kMarginTop + 16;
  for (const auto& s : plot.series) {
    if (s.label.empty()) continue;
    svg << "<text x=\"" << num(kMarginLeft + pw - 8) << "\" y=\"" << num(legend_y)
        << "\" text-anchor=\"end\" fill=\"" << s.color << "\" font-family=\"sans-serif\" font-size=\"11\">"
        << escape(s.label) << "</text>\n";
    legend_y += 14;
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace qagarch::cli
