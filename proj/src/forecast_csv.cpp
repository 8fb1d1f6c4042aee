#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "dlr/errors.hpp"
#include "dlr/forecaster.hpp"
#include "dlr/text.hpp"

namespace dlr::forecast {

void write_forecast_csv(std::span<const Forecast> forecasts, std::ostream& out) {
    out << kForecastCsvHeader << '\n';
    for (const Forecast& f : forecasts) {
        out << data::format_timestamp(f.timestamp) << ',' << text::format_double(f.dlr_a) << '\n';
    }
}

void write_forecast_csv(std::span<const Forecast> forecasts, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    write_forecast_csv(forecasts, out);
    if (!out) throw DataError("write failed for " + path.string());
}

std::vector<Forecast> parse_forecast_csv(std::istream& in, const std::string& source) {
    std::string line;
    if (!std::getline(in, line)) throw DataError(source + ": empty file, missing header");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kForecastCsvHeader) {
        throw DataError(source + ":1: header must be exactly '" + std::string(kForecastCsvHeader) +
                        "'");
    }
    std::vector<Forecast> out;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto fields = text::split(line, ',');
        const std::string where = source + ":" + std::to_string(line_no) + ": ";
        if (fields.size() != 2) throw DataError(where + "expected 2 fields");
        const auto ts = data::parse_timestamp(fields[0]);
        if (!ts) throw DataError(where + "unparsable timestamp");
        const auto v = text::parse_double(fields[1]);
        if (!v || !std::isfinite(*v)) throw DataError(where + "unparsable forecast value");
        if (!out.empty() && *ts <= out.back().timestamp) {
            throw DataError(where + "timestamps must be strictly increasing");
        }
        out.push_back({*ts, *v});
    }
    return out;
}

std::vector<Forecast> read_forecast_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    return parse_forecast_csv(in, path.string());
}

}  // namespace dlr::forecast
