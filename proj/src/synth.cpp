#include "dlr/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "dlr/errors.hpp"
#include "dlr/rng.hpp"

namespace dlr::synth {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kMinutesPerDay = 1440.0;
constexpr double kAmbientLagDays = 2.0 / 24.0;
constexpr double kLoadLagDays = 1.0 / 24.0;
constexpr double kAmbientNoiseC = 0.8;
constexpr double kHumidityNoisePct = 2.0;
constexpr double kLoadNoiseA = 3.0;

}  // namespace

void GenConfig::validate() const {
    if (days < 1) throw std::invalid_argument("days must be >= 1");
    if (step_minutes < 1 || 1440 % step_minutes != 0) {
        throw std::invalid_argument("step_minutes must divide 1440");
    }
    if (!(cloud_noise >= 0.0 && cloud_noise <= 1.0)) {
        throw std::invalid_argument("cloud_noise must lie in [0, 1]");
    }
    if (!(wind_ar_coeff >= 0.0 && wind_ar_coeff < 1.0)) {
        throw std::invalid_argument("wind_ar_coeff must lie in [0, 1)");
    }
    if (!(noise_scale >= 0.0 && noise_scale <= 1.0)) {
        throw std::invalid_argument("noise_scale must lie in [0, 1]");
    }
    if (!(irradiance_peak_wm2 >= 0.0)) {
        throw std::invalid_argument("irradiance_peak_wm2 must be >= 0");
    }
    if (!(wind_std_ms >= 0.0)) throw std::invalid_argument("wind_std_ms must be >= 0");
    if (!(wind_diurnal_ms >= 0.0)) throw std::invalid_argument("wind_diurnal_ms must be >= 0");
    const double finite_fields[] = {base_ambient_c, ambient_swing_c, wind_mean_ms, load_base_a,
                                    load_swing_a};
    for (double v : finite_fields) {
        if (!std::isfinite(v)) throw std::invalid_argument("generator parameters must be finite");
    }
}

double solar_profile(double minute_of_day) {
    return std::sin(kTwoPi * (minute_of_day / kMinutesPerDay - 0.25));
}

data::TimeSeries generate(const GenConfig& cfg, const thermal::ConductorSpec& spec) {
    cfg.validate();
    spec.validate();

    SplitMix64 rng(cfg.seed);
    const std::size_t steps_per_day = static_cast<std::size_t>(1440 / cfg.step_minutes);
    const std::size_t total = steps_per_day * static_cast<std::size_t>(cfg.days);
    const double innovation_std =
        cfg.wind_std_ms * std::sqrt(1.0 - cfg.wind_ar_coeff * cfg.wind_ar_coeff);

    std::vector<data::Measurement> records;
    records.reserve(total);
    double wind_state = cfg.wind_mean_ms;

    for (std::size_t i = 0; i < total; ++i) {
        const double minute = static_cast<double>((i % steps_per_day) *
                                                  static_cast<std::size_t>(cfg.step_minutes));
        const double day_frac = minute / kMinutesPerDay;
        const double sun = solar_profile(minute);
        // sin(pi) is not exactly zero, so sunrise and sunset are decided on the clock.
        const bool is_day = minute > 360.0 && minute < 1080.0;
        const double daylight = is_day ? std::max(0.0, sun) : 0.0;
        const double warm = std::sin(kTwoPi * (day_frac - 0.25 - kAmbientLagDays));

        // Fixed draw order: cloud, ambient, humidity, wind, load.
        const double cloud_u = rng.uniform();
        const double ambient_n = rng.normal();
        const double humidity_n = rng.normal();
        const double wind_n = rng.normal();
        const double load_n = rng.normal();

        thermal::WeatherPoint w;
        w.irradiance_wm2 =
            daylight * cfg.irradiance_peak_wm2 * (1.0 - cfg.cloud_noise * cloud_u);
        w.ambient_temp_c = cfg.base_ambient_c +
                           cfg.ambient_swing_c * warm +
                           cfg.noise_scale * kAmbientNoiseC * ambient_n;
        w.humidity_pct = std::clamp(80.0 - 45.0 * daylight + cfg.noise_scale * kHumidityNoisePct * humidity_n,
                                    20.0, 100.0);
        wind_state = cfg.wind_mean_ms + cfg.wind_ar_coeff * (wind_state - cfg.wind_mean_ms) +
                     cfg.noise_scale * innovation_std * wind_n;
        w.wind_speed_ms = std::max(0.0, wind_state + cfg.wind_diurnal_ms * std::max(0.0, warm));

        const double current = std::max(
            0.0, cfg.load_base_a +
                     cfg.load_swing_a * std::sin(kTwoPi * (day_frac - 0.25 - kLoadLagDays)) +
                     cfg.noise_scale * kLoadNoiseA * load_n);

        data::Measurement m;
        m.timestamp = kEpochStart + static_cast<data::Timestamp>(i) * cfg.step_minutes * 60;
        m.ambient_temp_c = w.ambient_temp_c;
        m.wind_speed_ms = w.wind_speed_ms;
        m.humidity_pct = w.humidity_pct;
        m.irradiance_wm2 = w.irradiance_wm2;
        m.current_a = current;
        try {
            m.cable_temp_c = thermal::solve_conductor_temp(spec, w, current);
        } catch (const NumericalError& e) {
            throw NumericalError("generate: timestep " + std::to_string(i) + ": " + e.what());
        }
        m.dlr_a = thermal::solve_ampacity(spec, w);
        records.push_back(m);
    }
    return data::TimeSeries(std::move(records));
}

}  // namespace dlr::synth
