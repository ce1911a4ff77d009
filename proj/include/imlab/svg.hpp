#pragma once

#include <string>

#include "imlab/metrics.hpp"

namespace imlab {

enum class PlotStyle { line, step };

// Self-contained SVG line chart of one series. Output depends only on the
// series and style.
std::string render_series_svg(const MetricSeries& series, PlotStyle style);

}  // namespace imlab
