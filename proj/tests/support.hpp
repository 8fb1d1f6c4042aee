#pragma once

// Helpers shared by the unit tests and the acceptance runner.

#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "dlr/dataset.hpp"
#include "dlr/rng.hpp"

namespace dlr::testkit {

inline std::filesystem::path scratch_dir(const std::string& name) {
    auto dir = std::filesystem::path(DLR_TEST_TMP) / "scratch" / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

/// Smooth seeded series on a 15-minute grid; every column varies.
inline data::TimeSeries toy_series(std::size_t n, std::uint64_t seed = 7) {
    SplitMix64 rng(seed);
    std::vector<data::Measurement> recs;
    recs.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i);
        data::Measurement m;
        m.timestamp = 1704067200 + static_cast<data::Timestamp>(i) * 900;
        m.ambient_temp_c = 25.0 + 4.0 * std::sin(t / 15.0) + 0.2 * rng.normal();
        m.cable_temp_c = m.ambient_temp_c + 3.0 + 0.5 * rng.uniform();
        m.wind_speed_ms = 2.0 + std::cos(t / 9.0) + 0.1 * rng.uniform();
        m.humidity_pct = 60.0 + 10.0 * std::cos(t / 15.0) + rng.normal();
        m.irradiance_wm2 = std::max(0.0, 600.0 * std::sin(t / 15.0));
        m.current_a = 100.0 + 5.0 * rng.normal();
        m.dlr_a = 600.0 + 80.0 * std::sin(t / 11.0) + 40.0 * std::cos(t / 9.0) + 3.0 * rng.normal();
        recs.push_back(m);
    }
    return data::TimeSeries(std::move(recs));
}

inline Matrix random_matrix(std::size_t rows, std::size_t cols, SplitMix64& rng, double scale = 1.0) {
    Matrix m(rows, cols);
    for (double& v : m.data()) v = rng.uniform(-scale, scale);
    return m;
}

inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

}  // namespace dlr::testkit
