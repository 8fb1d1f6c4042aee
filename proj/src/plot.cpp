#include "dlr/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <unordered_map>

#include "dlr/errors.hpp"

namespace dlr::plot {

namespace {

constexpr double kWidth = 960.0;
constexpr double kHeight = 440.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 20.0;
constexpr double kTop = 50.0;
constexpr double kBottom = 60.0;
constexpr const char* kColors[] = {"#222222", "#1f77b4", "#d62728", "#2ca02c"};

std::string fixed(double v, int digits = 2) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::string short_time(data::Timestamp t) {
    // YYYY-MM-DDTHH:MM:SSZ -> MM-DD HH:MM
    const std::string iso = data::format_timestamp(t);
    return iso.substr(5, 5) + " " + iso.substr(11, 5);
}

std::string xml_escape(const std::string& s) {
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

std::string render_svg(std::span<const data::Timestamp> timestamps,
                       std::span<const PlotSeries> series) {
    if (timestamps.empty() || series.empty()) {
        throw DataError("plot: nothing to draw");
    }
    for (const auto& s : series) {
        if (s.values.size() != timestamps.size()) {
            throw DataError("plot: series '" + s.label + "' has " +
                            std::to_string(s.values.size()) + " points, expected " +
                            std::to_string(timestamps.size()));
        }
    }

    double lo = series.front().values.front();
    double hi = lo;
    for (const auto& s : series) {
        for (double v : s.values) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    const double pad = hi > lo ? 0.05 * (hi - lo) : 1.0;
    lo -= pad;
    hi += pad;

    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;
    const double t0 = static_cast<double>(timestamps.front());
    const double t_span = std::max(1.0, static_cast<double>(timestamps.back()) - t0);
    auto x_of = [&](data::Timestamp t) {
        return kLeft + plot_w * (static_cast<double>(t) - t0) / t_span;
    };
    auto y_of = [&](double v) { return kTop + plot_h * (hi - v) / (hi - lo); };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed(kWidth, 0)
        << "\" height=\"" << fixed(kHeight, 0) << "\" viewBox=\"0 0 " << fixed(kWidth, 0) << ' '
        << fixed(kHeight, 0) << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg << "<rect x=\"0\" y=\"0\" width=\"" << fixed(kWidth, 0) << "\" height=\""
        << fixed(kHeight, 0) << "\" fill=\"white\"/>\n";
    svg << "<text x=\"" << fixed(kWidth / 2) << "\" y=\"24\" text-anchor=\"middle\" "
        << "font-size=\"15\">Actual vs forecast DLR (15-minute ahead)</text>\n";

    // Axes
    svg << "<g stroke=\"#444444\" stroke-width=\"1\">\n"
        << "<line x1=\"" << fixed(kLeft) << "\" y1=\"" << fixed(kTop) << "\" x2=\""
        << fixed(kLeft) << "\" y2=\"" << fixed(kTop + plot_h) << "\"/>\n"
        << "<line x1=\"" << fixed(kLeft) << "\" y1=\"" << fixed(kTop + plot_h) << "\" x2=\""
        << fixed(kLeft + plot_w) << "\" y2=\"" << fixed(kTop + plot_h) << "\"/>\n"
        << "</g>\n";

    constexpr int kTicks = 5;
    svg << "<g fill=\"#444444\">\n";
    for (int i = 0; i <= kTicks; ++i) {
        const double v = lo + (hi - lo) * i / kTicks;
        svg << "<text x=\"" << fixed(kLeft - 6) << "\" y=\"" << fixed(y_of(v) + 4)
            << "\" text-anchor=\"end\">" << fixed(v, 1) << "</text>\n";
        const std::size_t idx = (timestamps.size() - 1) * static_cast<std::size_t>(i) / kTicks;
        svg << "<text x=\"" << fixed(x_of(timestamps[idx])) << "\" y=\""
            << fixed(kTop + plot_h + 18) << "\" text-anchor=\"middle\">"
            << short_time(timestamps[idx]) << "</text>\n";
    }
    svg << "</g>\n";
    svg << "<text x=\"" << fixed(kLeft + plot_w / 2) << "\" y=\"" << fixed(kHeight - 14)
        << "\" text-anchor=\"middle\">Time (UTC)</text>\n";
    svg << "<text x=\"18\" y=\"" << fixed(kTop + plot_h / 2)
        << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " << fixed(kTop + plot_h / 2)
        << ")\">DLR (A)</text>\n";

    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* color = kColors[s % std::size(kColors)];
        svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < timestamps.size(); ++i) {
            if (i > 0) svg << ' ';
            svg << fixed(x_of(timestamps[i])) << ',' << fixed(y_of(series[s].values[i]));
        }
        svg << "\"/>\n";
    }

    // Legend
    for (std::size_t s = 0; s < series.size(); ++s) {
        const double ly = kTop + 8 + 18.0 * static_cast<double>(s);
        const double lx = kLeft + plot_w - 190;
        svg << "<line x1=\"" << fixed(lx) << "\" y1=\"" << fixed(ly) << "\" x2=\""
            << fixed(lx + 24) << "\" y2=\"" << fixed(ly) << "\" stroke=\""
            << kColors[s % std::size(kColors)] << "\" stroke-width=\"2\"/>\n";
        svg << "<text x=\"" << fixed(lx + 30) << "\" y=\"" << fixed(ly + 4) << "\">"
            << xml_escape(series[s].label) << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

AlignedSeries align_series(const data::TimeSeries& actual,
                           std::span<const LabeledForecast> forecasts) {
    if (forecasts.empty() || forecasts.front().points.empty()) {
        throw DataError("plot: prediction series is empty");
    }
    std::unordered_map<data::Timestamp, double> by_time;
    for (const auto& m : actual) by_time.emplace(m.timestamp, m.dlr_a);

    const auto& first = forecasts.front().points;
    AlignedSeries out;
    PlotSeries act{"actual", {}};
    for (const auto& f : first) {
        const auto it = by_time.find(f.timestamp);
        if (it == by_time.end()) {
            throw DataError("plot: forecast timestamp " + data::format_timestamp(f.timestamp) +
                            " has no actual value");
        }
        out.timestamps.push_back(f.timestamp);
        act.values.push_back(it->second);
    }
    out.series.push_back(std::move(act));

    for (const auto& lf : forecasts) {
        if (lf.points.size() != first.size()) {
            throw DataError("plot: forecast '" + lf.label + "' has " +
                            std::to_string(lf.points.size()) + " points, expected " +
                            std::to_string(first.size()));
        }
        PlotSeries s{lf.label, {}};
        for (std::size_t i = 0; i < first.size(); ++i) {
            if (lf.points[i].timestamp != first[i].timestamp) {
                throw DataError("plot: forecast '" + lf.label + "' row " + std::to_string(i + 1) +
                                " is stamped " + data::format_timestamp(lf.points[i].timestamp) +
                                ", expected " + data::format_timestamp(first[i].timestamp));
            }
            s.values.push_back(lf.points[i].dlr_a);
        }
        out.series.push_back(std::move(s));
    }
    return out;
}

}  // namespace dlr::plot
