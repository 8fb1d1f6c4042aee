#include "dlr/dataset.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "dlr/errors.hpp"
#include "dlr/text.hpp"

namespace dlr::data {

namespace {

constexpr double kMinStd = 1e-12;

bool parse_fixed_int(std::string_view s, int& out) {
    out = 0;
    if (s.empty()) return false;
    for (char c : s) {
        if (c < '0' || c > '9') return false;
        out = out * 10 + (c - '0');
    }
    return true;
}

std::string line_prefix(const std::string& source, std::size_t line) {
    return source + ":" + std::to_string(line) + ": ";
}

}  // namespace

std::string format_timestamp(Timestamp t) {
    using namespace std::chrono;
    const sys_seconds tp{seconds{t}};
    const auto day = floor<days>(tp);
    const year_month_day ymd{day};
    const hh_mm_ss hms{tp - day};
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                  static_cast<int>(hms.seconds().count()));
    return buf;
}

std::optional<Timestamp> parse_timestamp(std::string_view s) {
    // YYYY-MM-DDTHH:MM:SSZ
    if (s.size() != 20 || s[4] != '-' || s[7] != '-' || s[10] != 'T' || s[13] != ':' ||
        s[16] != ':' || s[19] != 'Z') {
        return std::nullopt;
    }
    int y = 0, mo = 0, d = 0, h = 0, mi = 0, se = 0;
    if (!parse_fixed_int(s.substr(0, 4), y) || !parse_fixed_int(s.substr(5, 2), mo) ||
        !parse_fixed_int(s.substr(8, 2), d) || !parse_fixed_int(s.substr(11, 2), h) ||
        !parse_fixed_int(s.substr(14, 2), mi) || !parse_fixed_int(s.substr(17, 2), se)) {
        return std::nullopt;
    }
    using namespace std::chrono;
    const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)},
                             day{static_cast<unsigned>(d)}};
    if (!ymd.ok() || h > 23 || mi > 59 || se > 59) return std::nullopt;
    const auto tp = sys_days{ymd} + hours{h} + minutes{mi} + seconds{se};
    return duration_cast<seconds>(tp.time_since_epoch()).count();
}

void validate_measurement(const Measurement& m) {
    const double values[] = {m.ambient_temp_c, m.cable_temp_c,   m.wind_speed_ms, m.humidity_pct,
                             m.irradiance_wm2, m.current_a,      m.dlr_a};
    for (double v : values) {
        if (!std::isfinite(v)) throw DataError("non-finite value");
    }
    if (m.dlr_a < 0.0) throw DataError("dlr_a must be >= 0");
    if (m.wind_speed_ms < 0.0) throw DataError("wind_speed_ms must be >= 0");
    if (m.irradiance_wm2 < 0.0) throw DataError("irradiance_wm2 must be >= 0");
    if (m.humidity_pct < 0.0 || m.humidity_pct > 100.0) {
        throw DataError("humidity_pct must lie in [0, 100]");
    }
}

std::string_view feature_name(Feature f) {
    switch (f) {
        case Feature::Dlr: return "dlr_a";
        case Feature::AmbientTemp: return "ambient_temp_c";
        case Feature::WindSpeed: return "wind_speed_ms";
        case Feature::Humidity: return "humidity_pct";
        case Feature::CableTemp: return "cable_temp_c";
        case Feature::Irradiance: return "irradiance_wm2";
    }
    return "?";
}

std::optional<Feature> feature_from_name(std::string_view name) {
    for (Feature f : kAllFeatures) {
        if (feature_name(f) == name) return f;
    }
    return std::nullopt;
}

double feature_value(const Measurement& m, Feature f) {
    switch (f) {
        case Feature::Dlr: return m.dlr_a;
        case Feature::AmbientTemp: return m.ambient_temp_c;
        case Feature::WindSpeed: return m.wind_speed_ms;
        case Feature::Humidity: return m.humidity_pct;
        case Feature::CableTemp: return m.cable_temp_c;
        case Feature::Irradiance: return m.irradiance_wm2;
    }
    return 0.0;
}

std::span<const Feature> case_features(Case c) {
    if (c == Case::Univariate) return std::span<const Feature>(kAllFeatures).first(1);
    return kAllFeatures;
}

std::optional<Case> case_from_int(int v) {
    if (v == 1) return Case::Univariate;
    if (v == 2) return Case::Multivariate;
    return std::nullopt;
}

TimeSeries::TimeSeries(std::vector<Measurement> records) : records_(std::move(records)) {
    if (records_.size() < 2) {
        throw DataError("time series needs at least 2 records, got " +
                        std::to_string(records_.size()));
    }
    step_seconds_ = records_[1].timestamp - records_[0].timestamp;
    if (step_seconds_ <= 0) {
        throw DataError("time series timestamps must be strictly increasing (record 1)");
    }
    for (std::size_t i = 0; i < records_.size(); ++i) {
        try {
            validate_measurement(records_[i]);
        } catch (const DataError& e) {
            throw DataError("record " + std::to_string(i) + ": " + e.what());
        }
        if (i == 0) continue;
        const auto dt = records_[i].timestamp - records_[i - 1].timestamp;
        if (dt <= 0) {
            throw DataError("record " + std::to_string(i) +
                            ": timestamps must be strictly increasing");
        }
        if (dt != step_seconds_) {
            throw DataError("record " + std::to_string(i) + ": spacing " + std::to_string(dt) +
                            " s breaks the " + std::to_string(step_seconds_) + " s grid");
        }
    }
}

TimeSeries parse_csv(std::istream& in, const std::string& source) {
    std::string line;
    if (!std::getline(in, line)) throw DataError(source + ": empty file, missing header");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kCsvHeader) {
        throw DataError(source + ":1: header must be exactly '" + std::string(kCsvHeader) +
                        "', got '" + line + "'");
    }

    std::vector<Measurement> records;
    std::vector<std::size_t> line_numbers;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto fields = text::split(line, ',');
        if (fields.size() != 8) {
            throw DataError(line_prefix(source, line_no) + "expected 8 fields, got " +
                            std::to_string(fields.size()));
        }
        Measurement m;
        const auto ts = parse_timestamp(fields[0]);
        if (!ts) {
            throw DataError(line_prefix(source, line_no) + "unparsable timestamp '" +
                            std::string(fields[0]) + "'");
        }
        m.timestamp = *ts;
        double* targets[] = {&m.ambient_temp_c, &m.cable_temp_c,   &m.wind_speed_ms,
                             &m.humidity_pct,   &m.irradiance_wm2, &m.current_a,
                             &m.dlr_a};
        for (std::size_t k = 0; k < 7; ++k) {
            const auto v = text::parse_double(fields[k + 1]);
            if (!v) {
                throw DataError(line_prefix(source, line_no) + "unparsable number '" +
                                std::string(fields[k + 1]) + "' in column " +
                                std::string(text::split(kCsvHeader, ',')[k + 1]));
            }
            *targets[k] = *v;
        }
        try {
            validate_measurement(m);
        } catch (const DataError& e) {
            throw DataError(line_prefix(source, line_no) + e.what());
        }
        records.push_back(m);
        line_numbers.push_back(line_no);
    }

    // Ordering first so a swapped pair is reported as such rather than as a gap.
    for (std::size_t i = 1; i < records.size(); ++i) {
        if (records[i].timestamp == records[i - 1].timestamp) {
            throw DataError(line_prefix(source, line_numbers[i]) + "duplicate timestamp " +
                            format_timestamp(records[i].timestamp));
        }
        if (records[i].timestamp < records[i - 1].timestamp) {
            throw DataError(line_prefix(source, line_numbers[i]) + "timestamp " +
                            format_timestamp(records[i].timestamp) + " is out of order");
        }
    }
    for (std::size_t i = 2; i < records.size(); ++i) {
        const auto step = records[1].timestamp - records[0].timestamp;
        const auto dt = records[i].timestamp - records[i - 1].timestamp;
        if (dt != step) {
            throw DataError(line_prefix(source, line_numbers[i]) + "spacing of " +
                            std::to_string(dt) + " s breaks the " + std::to_string(step) +
                            " s grid");
        }
    }
    if (records.size() < 2) {
        throw DataError(source + ": need at least 2 records, got " +
                        std::to_string(records.size()));
    }
    return TimeSeries(std::move(records));
}

TimeSeries read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    return parse_csv(in, path.string());
}

void write_csv(const TimeSeries& ts, std::ostream& out) {
    out << kCsvHeader << '\n';
    for (const Measurement& m : ts) {
        out << format_timestamp(m.timestamp) << ',' << text::format_double(m.ambient_temp_c)
            << ',' << text::format_double(m.cable_temp_c) << ','
            << text::format_double(m.wind_speed_ms) << ','
            << text::format_double(m.humidity_pct) << ','
            << text::format_double(m.irradiance_wm2) << ','
            << text::format_double(m.current_a) << ',' << text::format_double(m.dlr_a) << '\n';
    }
}

void write_csv(const TimeSeries& ts, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    write_csv(ts, out);
    if (!out) throw DataError("write failed for " + path.string());
}

std::pair<TimeSeries, TimeSeries> chronological_split(const TimeSeries& ts, double train_frac) {
    if (!(train_frac > 0.0 && train_frac < 1.0)) {
        throw std::invalid_argument("chronological_split: train fraction must lie in (0, 1)");
    }
    const std::size_t n = ts.size();
    if (n < 10) {
        throw DataError("chronological_split: need at least 10 records, got " +
                        std::to_string(n));
    }
    const auto n_train = static_cast<std::size_t>(std::floor(train_frac * static_cast<double>(n)));
    if (n_train < 2 || n - n_train < 2) {
        throw DataError("chronological_split: fraction leaves fewer than 2 records on one side");
    }
    const auto& r = ts.records();
    return {TimeSeries({r.begin(), r.begin() + static_cast<std::ptrdiff_t>(n_train)}),
            TimeSeries({r.begin() + static_cast<std::ptrdiff_t>(n_train), r.end()})};
}

Normalizer::Normalizer(std::vector<FeatureStats> stats, std::size_t fitted_count)
    : stats_(std::move(stats)), fitted_count_(fitted_count) {
    for (const auto& s : stats_) {
        if (!std::isfinite(s.mean) || !std::isfinite(s.std) || !(s.std > 0.0)) {
            throw DataError("normalizer: invalid statistics for " +
                            std::string(feature_name(s.feature)));
        }
    }
}

bool Normalizer::has(Feature f) const {
    return std::any_of(stats_.begin(), stats_.end(),
                       [f](const FeatureStats& s) { return s.feature == f; });
}

const FeatureStats& Normalizer::stats(Feature f) const {
    for (const auto& s : stats_) {
        if (s.feature == f) return s;
    }
    throw std::invalid_argument("normalizer has no statistics for " +
                                std::string(feature_name(f)));
}

double Normalizer::normalize(Feature f, double x) const {
    const auto& s = stats(f);
    return (x - s.mean) / s.std;
}

double Normalizer::denormalize(Feature f, double z) const {
    const auto& s = stats(f);
    return z * s.std + s.mean;
}

Normalizer fit_normalizer(const TimeSeries& train, std::span<const Feature> features) {
    const auto n = static_cast<double>(train.size());
    std::vector<FeatureStats> stats;
    for (Feature f : features) {
        double sum = 0.0;
        for (const auto& m : train) sum += feature_value(m, f);
        const double mean = sum / n;
        double ss = 0.0;
        for (const auto& m : train) {
            const double d = feature_value(m, f) - mean;
            ss += d * d;
        }
        const double sd = std::sqrt(ss / n);
        if (!(sd >= kMinStd)) {
            throw DataError("feature " + std::string(feature_name(f)) +
                            " is constant over the training rows");
        }
        stats.push_back({f, mean, sd});
    }
    return Normalizer(std::move(stats), train.size());
}

WindowedDataset make_windows(const TimeSeries& ts, const Normalizer& norm, Case case_tag,
                             std::size_t window_len) {
    if (window_len < 1) throw std::invalid_argument("make_windows: window length must be >= 1");
    if (ts.size() < window_len + 1) {
        throw DataError("make_windows: series of " + std::to_string(ts.size()) +
                        " records is too short for window length " + std::to_string(window_len));
    }
    const auto features = case_features(case_tag);
    for (Feature f : features) {
        if (!norm.has(f)) {
            throw std::invalid_argument("make_windows: normalizer lacks feature " +
                                        std::string(feature_name(f)));
        }
    }

    // Normalize every record once, then slice.
    const std::size_t d = features.size();
    Matrix z(ts.size(), d);
    for (std::size_t i = 0; i < ts.size(); ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            z(i, j) = norm.normalize(features[j], feature_value(ts[i], features[j]));
        }
    }

    WindowedDataset ds;
    ds.case_tag = case_tag;
    ds.window_len = window_len;
    ds.normalizer = norm;
    const std::size_t count = ts.size() - window_len;
    ds.inputs.reserve(count);
    ds.targets.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        std::vector<double> window(z.data().begin() + static_cast<std::ptrdiff_t>(k * d),
                                   z.data().begin() + static_cast<std::ptrdiff_t>((k + window_len) * d));
        ds.inputs.emplace_back(window_len, d, std::move(window));
        ds.targets.push_back(z(k + window_len, 0));
    }
    return ds;
}

}  // namespace dlr::data
