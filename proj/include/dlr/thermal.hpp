#pragma once

// Steady-state conductor heat balance.
//
//   I^2 R(Tc) + q_sun = q_conv + q_rad
//
//   q_conv = (lambda_nat + lambda_forced * sqrt(V)) * (Tc - Ta)
//   q_rad  = pi * D * emissivity * sigma * ((Tc + 273.15)^4 - (Ta + 273.15)^4)
//   q_sun  = absorptivity * D * irradiance
//
// All heat terms are per meter of conductor (W/m). Humidity is carried by
// WeatherPoint for the forecasting features but never enters the balance.

#include <filesystem>
#include <string>

namespace dlr::thermal {

inline constexpr double kStefanBoltzmann = 5.670374419e-8;  // W/(m^2 K^4)
inline constexpr double kAbsoluteZeroC = -273.15;

/// Overhead conductor parameters. Defaults describe a ~35 mm^2 ACSR conductor.
struct ConductorSpec {
    double diameter_m = 0.0075;
    double resistance_ref_ohm_per_m = 8.5e-4;
    double ref_temp_c = 20.0;
    double alpha_per_c = 0.00403;
    double emissivity = 0.8;
    double absorptivity = 0.8;
    double max_conductor_temp_c = 75.0;
    /// Natural-convection coefficient, W/(m K).
    double lambda_nat = 2.0;
    /// Forced-convection coefficient, W/(m K (m/s)^0.5).
    double lambda_forced = 6.0;

    /// Throws std::invalid_argument naming the first violated invariant.
    void validate() const;
};

struct WeatherPoint {
    double ambient_temp_c = 25.0;
    double wind_speed_ms = 0.0;
    double humidity_pct = 50.0;
    double irradiance_wm2 = 0.0;

    void validate() const;
};

struct HeatTerms {
    double q_conv = 0.0;
    double q_rad = 0.0;
    double q_sun = 0.0;
};

/// AC resistance per meter at `t_c`, floored at 10% of the reference value.
/// Throws std::invalid_argument for temperatures at or below absolute zero.
double resistance_at(const ConductorSpec& spec, double t_c);

/// Convective and radiative losses and solar gain at conductor temperature
/// `t_cond_c`. Losses go negative when the conductor is colder than ambient.
HeatTerms heat_losses(const ConductorSpec& spec, const WeatherPoint& w, double t_cond_c);

/// Net cooling minus heating at (t_cond_c, current_a), W/m. Zero on the balance.
double heat_balance_residual(const ConductorSpec& spec, const WeatherPoint& w, double t_cond_c,
                             double current_a);

/// Maximum steady current that keeps the conductor at max_conductor_temp_c.
/// Returns 0 when solar gain alone meets or exceeds the available cooling.
double solve_ampacity(const ConductorSpec& spec, const WeatherPoint& w);

/// Steady conductor temperature carrying `current_a`. Bisection on
/// [Ta - 5, Ta + 250] until |residual| < 1e-9 W/m or 200 iterations.
/// Throws NumericalError when the bracket does not contain a root.
double solve_conductor_temp(const ConductorSpec& spec, const WeatherPoint& w, double current_a);

/// Reads a key=value conductor file. Missing keys keep their defaults;
/// unknown or repeated keys are DataErrors. '#' starts a comment.
ConductorSpec read_conductor_spec(const std::filesystem::path& path);
ConductorSpec parse_conductor_spec(const std::string& text);

}  // namespace dlr::thermal
