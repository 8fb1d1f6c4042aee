#pragma once

#include <span>
#include <string>
#include <vector>

#include "dlr/dataset.hpp"
#include "dlr/forecaster.hpp"

namespace dlr::plot {

struct PlotSeries {
    std::string label;
    std::vector<double> values;
};

/// Static SVG line chart: one polyline per series over a shared time axis.
/// Output depends only on the inputs (fixed-precision coordinates).
std::string render_svg(std::span<const data::Timestamp> timestamps,
                       std::span<const PlotSeries> series);

struct LabeledForecast {
    std::string label;
    std::vector<forecast::Forecast> points;
};

struct AlignedSeries {
    std::vector<data::Timestamp> timestamps;
    std::vector<PlotSeries> series;  // actual first
};

/// Actual DLR at each forecast timestamp followed by every forecast series.
/// Throws DataError if a forecast timestamp is absent from `actual` or the
/// forecast series are not stamped identically.
AlignedSeries align_series(const data::TimeSeries& actual,
                           std::span<const LabeledForecast> forecasts);

}  // namespace dlr::plot
