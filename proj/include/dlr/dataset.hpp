#pragma once

// Sensor time series, CSV ingestion, normalization and windowing.
//
// Canonical CSV (UTF-8, LF, no quoting):
//   timestamp,ambient_temp_c,cable_temp_c,wind_speed_ms,humidity_pct,irradiance_wm2,current_a,dlr_a
//   2024-01-01T00:15:00Z,...
//
// Window inputs always use the feature order
//   [dlr_a, ambient_temp_c, wind_speed_ms, humidity_pct, cable_temp_c, irradiance_wm2]
// truncated to the first column for the univariate case.

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dlr/matrix.hpp"

namespace dlr::data {

inline constexpr std::string_view kCsvHeader =
    "timestamp,ambient_temp_c,cable_temp_c,wind_speed_ms,humidity_pct,irradiance_wm2,current_a,"
    "dlr_a";

/// Seconds since 1970-01-01T00:00:00Z.
using Timestamp = std::int64_t;

std::string format_timestamp(Timestamp t);
/// Accepts exactly YYYY-MM-DDTHH:MM:SSZ.
std::optional<Timestamp> parse_timestamp(std::string_view s);

struct Measurement {
    Timestamp timestamp = 0;
    double ambient_temp_c = 0.0;
    double cable_temp_c = 0.0;
    double wind_speed_ms = 0.0;
    double humidity_pct = 0.0;
    double irradiance_wm2 = 0.0;
    double current_a = 0.0;
    double dlr_a = 0.0;

    friend bool operator==(const Measurement&, const Measurement&) = default;
};

/// Throws DataError if any field is non-finite or out of its physical range.
void validate_measurement(const Measurement& m);

enum class Feature { Dlr, AmbientTemp, WindSpeed, Humidity, CableTemp, Irradiance };

inline constexpr std::array<Feature, 6> kAllFeatures = {
    Feature::Dlr,      Feature::AmbientTemp, Feature::WindSpeed,
    Feature::Humidity, Feature::CableTemp,   Feature::Irradiance,
};

std::string_view feature_name(Feature f);
std::optional<Feature> feature_from_name(std::string_view name);
double feature_value(const Measurement& m, Feature f);

enum class Case : int { Univariate = 1, Multivariate = 2 };

/// Input features seen by a model of the given case, in window column order.
std::span<const Feature> case_features(Case c);
std::optional<Case> case_from_int(int v);

/// Ordered, regularly spaced series of at least two measurements.
class TimeSeries {
public:
    /// Throws DataError on fewer than two records, non-increasing timestamps,
    /// irregular spacing, or invalid measurements.
    explicit TimeSeries(std::vector<Measurement> records);

    std::size_t size() const { return records_.size(); }
    std::int64_t step_seconds() const { return step_seconds_; }
    const Measurement& operator[](std::size_t i) const { return records_[i]; }
    const std::vector<Measurement>& records() const { return records_; }
    auto begin() const { return records_.begin(); }
    auto end() const { return records_.end(); }

    friend bool operator==(const TimeSeries&, const TimeSeries&) = default;

private:
    std::vector<Measurement> records_;
    std::int64_t step_seconds_ = 0;
};

TimeSeries read_csv(const std::filesystem::path& path);
/// `source` names the input in error messages.
TimeSeries parse_csv(std::istream& in, const std::string& source = "<input>");
void write_csv(const TimeSeries& ts, std::ostream& out);
void write_csv(const TimeSeries& ts, const std::filesystem::path& path);

/// First floor(train_frac * N) records train, the rest test. Requires N >= 10
/// and both sides to hold at least two records.
std::pair<TimeSeries, TimeSeries> chronological_split(const TimeSeries& ts, double train_frac);

struct FeatureStats {
    Feature feature;
    double mean;
    double std;

    friend bool operator==(const FeatureStats&, const FeatureStats&) = default;
};

/// Per-feature z-score statistics.
class Normalizer {
public:
    Normalizer() = default;
    Normalizer(std::vector<FeatureStats> stats, std::size_t fitted_count);

    bool has(Feature f) const;
    const FeatureStats& stats(Feature f) const;
    const std::vector<FeatureStats>& all() const { return stats_; }
    std::size_t fitted_count() const { return fitted_count_; }

    double normalize(Feature f, double x) const;
    double denormalize(Feature f, double z) const;

    friend bool operator==(const Normalizer&, const Normalizer&) = default;

private:
    std::vector<FeatureStats> stats_;
    std::size_t fitted_count_ = 0;
};

/// Mean and population standard deviation of each requested feature.
/// Throws DataError for any feature with std < 1e-12.
Normalizer fit_normalizer(const TimeSeries& train,
                          std::span<const Feature> features = kAllFeatures);

struct WindowedDataset {
    Case case_tag = Case::Univariate;
    std::size_t window_len = 0;
    std::vector<Matrix> inputs;   // window_len x d, normalized
    std::vector<double> targets;  // normalized dlr_a of the record after each window
    Normalizer normalizer;

    std::size_t size() const { return inputs.size(); }
    std::size_t feature_dim() const { return case_features(case_tag).size(); }
};

/// Window k covers records [k, k + n); its target is record k + n.
/// Produces ts.size() - n pairs.
WindowedDataset make_windows(const TimeSeries& ts, const Normalizer& norm, Case case_tag,
                             std::size_t window_len);

}  // namespace dlr::data
