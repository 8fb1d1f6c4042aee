#pragma once

// Seeded synthetic sensor series with a diurnal structure:
//
//   solar profile  s(t) = sin(2 pi (t_day - 1/4))        (> 0 between 06:00 and 18:00)
//   irradiance     = max(0, s) * peak * (1 - cloud_noise * u),  u ~ U[0, 1)
//   ambient        = base + swing * sin(2 pi (t_day - 1/4 - 2h)) + noise
//   humidity       = clamp(80 - 45 * max(0, s) + noise, 20, 100)
//   wind           = max(0, AR(1) around wind_mean_ms + wind_diurnal_ms * max(0, sin(2 pi (t_day - 1/4 - 2h))))
//   current        = max(0, load_base + load_swing * sin(2 pi (t_day - 1/4 - 1h)) + noise)
//   cable_temp     = steady conductor temperature at that current and weather
//   dlr            = ampacity at that weather
//
// Timestamps start at 2024-01-01T00:00:00Z. All randomness comes from one
// SplitMix64 stream seeded with `seed`, drawn in a fixed order per step.

#include <cstdint>

#include "dlr/dataset.hpp"
#include "dlr/thermal.hpp"

namespace dlr::synth {

inline constexpr data::Timestamp kEpochStart = 1704067200;  // 2024-01-01T00:00:00Z

struct GenConfig {
    int days = 30;
    std::uint64_t seed = 42;
    int step_minutes = 15;
    double base_ambient_c = 28.0;
    double ambient_swing_c = 10.0;
    double irradiance_peak_wm2 = 950.0;
    double cloud_noise = 0.3;
    double wind_mean_ms = 3.0;
    double wind_ar_coeff = 0.98;
    /// Stationary standard deviation of the wind process before clamping.
    double wind_std_ms = 0.8;
    /// Afternoon wind added on top of the AR(1) state, peaking with ambient.
    double wind_diurnal_ms = 2.5;
    double load_base_a = 100.0;
    double load_swing_a = 40.0;
    double noise_scale = 1.0;

    /// Throws std::invalid_argument naming the violated invariant.
    void validate() const;
};

/// Solar elevation proxy in [-1, 1] at `minute_of_day`.
double solar_profile(double minute_of_day);

data::TimeSeries generate(const GenConfig& cfg, const thermal::ConductorSpec& spec);

}  // namespace dlr::synth
