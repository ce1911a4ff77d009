#include "imlab/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace imlab {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 360.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 20.0;
constexpr double kTop = 36.0;
constexpr double kBottom = 40.0;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_series_svg(const MetricSeries& series, PlotStyle style) {
  const auto& pts = series.points();
  double x0 = pts.empty() ? 0.0 : static_cast<double>(pts.front().step);
  double x1 = pts.empty() ? 1.0 : static_cast<double>(pts.back().step);
  double y0 = 0.0;
  double y1 = 1.0;
  if (!pts.empty()) {
    y0 = y1 = pts.front().value;
    for (const auto& p : pts) {
      y0 = std::min(y0, p.value);
      y1 = std::max(y1, p.value);
    }
  }
  if (x1 <= x0) x1 = x0 + 1.0;
  if (y1 <= y0) {
    const double pad = std::max(0.5, std::abs(y0) * 0.1);
    y0 -= pad;
    y1 += pad;
  }
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto sx = [&](double x) { return kLeft + (x - x0) / (x1 - x0) * plot_w; };
  auto sy = [&](double y) { return kTop + (y1 - y) / (y1 - y0) * plot_h; };

  std::string path;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double x = sx(static_cast<double>(pts[i].step));
    const double y = sy(pts[i].value);
    if (i == 0) {
      path += "M " + fmt(x) + " " + fmt(y);
    } else if (style == PlotStyle::step) {
      path += " H " + fmt(x) + " V " + fmt(y);
    } else {
      path += " L " + fmt(x) + " " + fmt(y);
    }
  }

  const std::string name = escape(series.name());
  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(kWidth) + "\" height=\"" + fmt(kHeight) +
         "\" viewBox=\"0 0 " + fmt(kWidth) + " " + fmt(kHeight) + "\">\n";
  svg += "<title>" + name + "</title>\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"" + fmt(kWidth) + "\" height=\"" + fmt(kHeight) + "\" fill=\"white\"/>\n";
  svg += "<text x=\"" + fmt(kWidth / 2) + "\" y=\"22\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">" +
         name + "</text>\n";
  svg += "<g stroke=\"#444\" stroke-width=\"1\">\n";
  svg += "<line x1=\"" + fmt(kLeft) + "\" y1=\"" + fmt(kTop + plot_h) + "\" x2=\"" + fmt(kLeft + plot_w) + "\" y2=\"" +
         fmt(kTop + plot_h) + "\"/>\n";
  svg += "<line x1=\"" + fmt(kLeft) + "\" y1=\"" + fmt(kTop) + "\" x2=\"" + fmt(kLeft) + "\" y2=\"" + fmt(kTop + plot_h) +
         "\"/>\n</g>\n";
  svg += "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#222\">\n";
  svg += "<text x=\"" + fmt(kLeft - 6) + "\" y=\"" + fmt(sy(y1) + 4) + "\" text-anchor=\"end\">" + label(y1) + "</text>\n";
  svg += "<text x=\"" + fmt(kLeft - 6) + "\" y=\"" + fmt(sy(y0) + 4) + "\" text-anchor=\"end\">" + label(y0) + "</text>\n";
  svg += "<text x=\"" + fmt(kLeft) + "\" y=\"" + fmt(kHeight - 14) + "\" text-anchor=\"start\">" + label(x0) + "</text>\n";
  svg += "<text x=\"" + fmt(kLeft + plot_w) + "\" y=\"" + fmt(kHeight - 14) + "\" text-anchor=\"end\">" + label(x1) +
         "</text>\n";
  svg += "<text x=\"" + fmt(kLeft + plot_w / 2) + "\" y=\"" + fmt(kHeight - 4) + "\" text-anchor=\"middle\">step</text>\n";
  svg += "</g>\n";
  if (!path.empty()) {
    svg += "<path class=\"series\" d=\"" + path + "\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\"/>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace imlab
