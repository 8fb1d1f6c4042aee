#include "dlr/thermal.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>

#include "dlr/errors.hpp"
#include "dlr/text.hpp"

namespace dlr::thermal {

namespace {

constexpr double kKelvinOffset = 273.15;
constexpr double kResidualTol = 1e-9;  // W/m
constexpr int kMaxBisections = 200;

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}

}  // namespace

void ConductorSpec::validate() const {
    require(std::isfinite(diameter_m) && diameter_m > 0.0, "conductor diameter_m must be > 0");
    require(std::isfinite(resistance_ref_ohm_per_m) && resistance_ref_ohm_per_m > 0.0,
            "conductor resistance_ref_ohm_per_m must be > 0");
    require(std::isfinite(ref_temp_c) && ref_temp_c > kAbsoluteZeroC,
            "conductor ref_temp_c must be above absolute zero");
    require(std::isfinite(alpha_per_c), "conductor alpha_per_c must be finite");
    require(emissivity >= 0.0 && emissivity <= 1.0, "conductor emissivity must lie in [0, 1]");
    require(absorptivity >= 0.0 && absorptivity <= 1.0,
            "conductor absorptivity must lie in [0, 1]");
    require(std::isfinite(max_conductor_temp_c) && max_conductor_temp_c > kAbsoluteZeroC,
            "conductor max_conductor_temp_c must be above absolute zero");
    require(std::isfinite(lambda_nat) && lambda_nat >= 0.0, "lambda_nat must be >= 0");
    require(std::isfinite(lambda_forced) && lambda_forced >= 0.0, "lambda_forced must be >= 0");
}

void WeatherPoint::validate() const {
    require(std::isfinite(ambient_temp_c) && ambient_temp_c > kAbsoluteZeroC,
            "ambient_temp_c must be finite and above absolute zero");
    require(std::isfinite(wind_speed_ms) && wind_speed_ms >= 0.0, "wind_speed_ms must be >= 0");
    require(std::isfinite(humidity_pct) && humidity_pct >= 0.0 && humidity_pct <= 100.0,
            "humidity_pct must lie in [0, 100]");
    require(std::isfinite(irradiance_wm2) && irradiance_wm2 >= 0.0,
            "irradiance_wm2 must be >= 0");
}

double resistance_at(const ConductorSpec& spec, double t_c) {
    if (!(t_c > kAbsoluteZeroC)) {
        throw std::invalid_argument("resistance_at: temperature " + text::format_double(t_c) +
                                    " C is at or below absolute zero");
    }
    const double r = spec.resistance_ref_ohm_per_m * (1.0 + spec.alpha_per_c * (t_c - spec.ref_temp_c));
    return std::max(r, 0.1 * spec.resistance_ref_ohm_per_m);
}

HeatTerms heat_losses(const ConductorSpec& spec, const WeatherPoint& w, double t_cond_c) {
    HeatTerms q;
    q.q_conv = (spec.lambda_nat + spec.lambda_forced * std::sqrt(w.wind_speed_ms)) *
               (t_cond_c - w.ambient_temp_c);
    const double tc_k = t_cond_c + kKelvinOffset;
    const double ta_k = w.ambient_temp_c + kKelvinOffset;
    q.q_rad = std::numbers::pi * spec.diameter_m * spec.emissivity * kStefanBoltzmann *
              (tc_k * tc_k * tc_k * tc_k - ta_k * ta_k * ta_k * ta_k);
    q.q_sun = spec.absorptivity * spec.diameter_m * w.irradiance_wm2;
    return q;
}

double heat_balance_residual(const ConductorSpec& spec, const WeatherPoint& w, double t_cond_c,
                             double current_a) {
    const HeatTerms q = heat_losses(spec, w, t_cond_c);
    const double joule = current_a * current_a * resistance_at(spec, t_cond_c);
    return q.q_conv + q.q_rad - q.q_sun - joule;
}

double solve_ampacity(const ConductorSpec& spec, const WeatherPoint& w) {
    spec.validate();
    w.validate();
    // At fixed conductor temperature the balance is explicit in I^2.
    const HeatTerms q = heat_losses(spec, w, spec.max_conductor_temp_c);
    const double net_cooling = q.q_conv + q.q_rad - q.q_sun;
    if (!(net_cooling > 0.0)) return 0.0;
    return std::sqrt(net_cooling / resistance_at(spec, spec.max_conductor_temp_c));
}

double solve_conductor_temp(const ConductorSpec& spec, const WeatherPoint& w, double current_a) {
    spec.validate();
    w.validate();
    if (!std::isfinite(current_a) || current_a < 0.0) {
        throw std::invalid_argument("solve_conductor_temp: current must be finite and >= 0");
    }

    double lo = w.ambient_temp_c - 5.0;
    double hi = w.ambient_temp_c + 250.0;
    double f_lo = heat_balance_residual(spec, w, lo, current_a);
    double f_hi = heat_balance_residual(spec, w, hi, current_a);
    if (std::abs(f_lo) < kResidualTol) return lo;
    if (std::abs(f_hi) < kResidualTol) return hi;
    if (f_lo > 0.0 || f_hi < 0.0) {
        std::ostringstream msg;
        msg << "solve_conductor_temp: no root in [" << lo << ", " << hi << "] C for current "
            << current_a << " A, ambient " << w.ambient_temp_c << " C, wind " << w.wind_speed_ms
            << " m/s, irradiance " << w.irradiance_wm2 << " W/m2 (residual " << f_lo << " .. "
            << f_hi << " W/m)";
        throw NumericalError(msg.str());
    }

    double mid = 0.5 * (lo + hi);
    for (int iter = 0; iter < kMaxBisections; ++iter) {
        mid = 0.5 * (lo + hi);
        const double f_mid = heat_balance_residual(spec, w, mid, current_a);
        if (std::abs(f_mid) < kResidualTol) return mid;
        if (f_mid < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
        if (mid == lo && mid == hi) break;
    }
    return mid;
}

ConductorSpec parse_conductor_spec(const std::string& content) {
    ConductorSpec spec;
    const std::pair<const char*, double ConductorSpec::*> keys[] = {
        {"diameter_m", &ConductorSpec::diameter_m},
        {"resistance_ref_ohm_per_m", &ConductorSpec::resistance_ref_ohm_per_m},
        {"ref_temp_c", &ConductorSpec::ref_temp_c},
        {"alpha_per_c", &ConductorSpec::alpha_per_c},
        {"emissivity", &ConductorSpec::emissivity},
        {"absorptivity", &ConductorSpec::absorptivity},
        {"max_conductor_temp_c", &ConductorSpec::max_conductor_temp_c},
        {"lambda_nat", &ConductorSpec::lambda_nat},
        {"lambda_forced", &ConductorSpec::lambda_forced},
    };

    std::set<std::string, std::less<>> seen;
    std::istringstream in(content);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = text::trim(line);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw DataError("conductor spec line " + std::to_string(line_no) +
                            ": expected key=value");
        }
        const auto key = text::trim(line.substr(0, eq));
        const auto value = text::parse_double(text::trim(line.substr(eq + 1)));
        if (!value || !std::isfinite(*value)) {
            throw DataError("conductor spec line " + std::to_string(line_no) +
                            ": value for '" + std::string(key) + "' is not a finite number");
        }
        double ConductorSpec::*field = nullptr;
        for (const auto& [name, member] : keys) {
            if (key == name) field = member;
        }
        if (field == nullptr) {
            throw DataError("conductor spec line " + std::to_string(line_no) + ": unknown key '" +
                            std::string(key) + "'");
        }
        if (!seen.emplace(key).second) {
            throw DataError("conductor spec line " + std::to_string(line_no) + ": duplicate key '" +
                            std::string(key) + "'");
        }
        spec.*field = *value;
    }

    try {
        spec.validate();
    } catch (const std::invalid_argument& e) {
        throw DataError(std::string("conductor spec: ") + e.what());
    }
    return spec;
}

ConductorSpec read_conductor_spec(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open conductor spec " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_conductor_spec(ss.str());
}

}  // namespace dlr::thermal
