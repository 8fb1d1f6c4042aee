// Acceptance runner: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "../support.hpp"
#include "dlr/cli.hpp"
#include "dlr/dataset.hpp"
#include "dlr/evaluation.hpp"
#include "dlr/forecaster.hpp"
#include "dlr/nn.hpp"
#include "dlr/synth.hpp"
#include "dlr/thermal.hpp"

using namespace dlr;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

// Criterion 1
constexpr double kMinCase2RSquared = 0.90;
constexpr double kPipelineBudgetS = 300.0;
// Criterion 2
constexpr double kGradEps = 1e-5;
constexpr double kGradTolerance = 1e-4;
constexpr double kMutationFloor = 5e-3;
constexpr int kGradSeeds = 20;
constexpr double kGradBudgetS = 30.0;
// Criterion 3
constexpr int kThermalCases = 1000;
constexpr double kResidualTolWPerM = 1e-6;
constexpr double kRoundTripTolC = 1e-6;
constexpr double kThermalBudgetS = 5.0;
// Criterion 4
constexpr std::size_t kMetricSamples = 100000;
constexpr double kMetricRelTol = 1e-12;
constexpr double kMetricAbsTol = 1e-12;
// Criterion 7
constexpr double kCorrelationFloor = 0.3;

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail += (detail.empty() ? "" : "; ") + ("failed: " + what);
        }
    }
    void note(const std::string& s) { detail += (detail.empty() ? "" : "; ") + s; }
};

std::string fmt(double v, int prec = 4) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    return buf;
}

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int dlr_cli(std::vector<std::string> args, std::string* err_out = nullptr) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    if (err_out) *err_out = err.str();
    if (code != 0) std::cerr << "dlr " << args.front() << " exited " << code << ":\n" << err.str();
    return code;
}

// ---------------------------------------------------------------------------

Outcome directional_reproduction() {
    Outcome o;
    const auto t0 = Clock::now();
    const auto dir = testkit::scratch_dir("acceptance_pipeline");
    auto p = [&](const char* name) { return (dir / name).string(); };

    bool ok = dlr_cli({"gen", "--days", "30", "--seed", "42", "--out", p("data.csv")}) == 0;
    for (const std::string c : {"1", "2"}) {
        if (!ok) break;
        ok = dlr_cli({"train", "--data", p("data.csv"), "--case", c, "--out",
                      p(("case" + c + ".json").c_str())}) == 0 &&
             dlr_cli({"eval", "--model", p(("case" + c + ".json").c_str()), "--data", p("data.csv"),
                      "--report", p(("case" + c + ".txt").c_str())}) == 0;
    }
    ok = ok && dlr_cli({"compare", "--case1", p("case1.txt"), "--case2", p("case2.txt"), "--out",
                        p("comparison.txt")}) == 0;
    o.require(ok, "pipeline commands");
    if (!ok) return o;

    const auto r1 = eval::parse_report(slurp(dir / "case1.txt"));
    const auto r2 = eval::parse_report(slurp(dir / "case2.txt"));
    const double elapsed = seconds_since(t0);
    o.note("case1 R2=" + fmt(r1.r_squared) + " MSE=" + fmt(r1.mse) + " MAE=" + fmt(r1.mae));
    o.note("case2 R2=" + fmt(r2.r_squared) + " MSE=" + fmt(r2.mse) + " MAE=" + fmt(r2.mae));
    o.note("n_test=" + std::to_string(r2.n_samples) + ", " + fmt(elapsed, 3) + " s");
    o.require(r2.r_squared >= r1.r_squared, "case2 R2 >= case1 R2");
    o.require(r2.mse <= r1.mse, "case2 MSE <= case1 MSE");
    o.require(r2.r_squared >= kMinCase2RSquared, "case2 R2 >= " + fmt(kMinCase2RSquared));
    o.require(elapsed < kPipelineBudgetS, "runtime < " + fmt(kPipelineBudgetS) + " s");
    return o;
}

// ---------------------------------------------------------------------------

double project(const Matrix& m, const Matrix& r) {
    double s = 0;
    for (std::size_t i = 0; i < m.size(); ++i) s += m.data()[i] * r.data()[i];
    return s;
}

Outcome gradient_correctness() {
    Outcome o;
    const auto t0 = Clock::now();
    double worst_lstm = 0, worst_attn = 0, worst_model = 0, weakest_mutation = 1e300;

    for (int seed = 1; seed <= kGradSeeds; ++seed) {
        // LSTM BPTT, including the input gradient.
        {
            SplitMix64 rng(seed);
            const std::size_t n = 2 + rng.below(4), d = 1 + rng.below(6), h = 1 + rng.below(4);
            auto prm = nn::LstmParams::zeros(d, h);
            for (Matrix* m : prm.tensors()) *m = testkit::random_matrix(m->rows(), m->cols(), rng, 0.6);
            auto x = testkit::random_matrix(n, d, rng);
            const auto r_seq = testkit::random_matrix(n, h, rng);
            const auto r_last = testkit::random_matrix(1, h, rng);
            auto loss = [&] {
                const auto out = nn::lstm_forward(x, prm);
                return project(out.h_seq, r_seq) + project(out.h_last, r_last);
            };
            const auto out = nn::lstm_forward(x, prm);
            const auto g = nn::lstm_backward(r_seq, r_last, out.tape, prm);
            std::vector<Matrix*> params(prm.tensors().begin(), prm.tensors().end());
            params.push_back(&x);
            std::vector<const Matrix*> an(g.d_params.tensors().begin(), g.d_params.tensors().end());
            an.push_back(&g.d_x_seq);
            worst_lstm = std::max(worst_lstm, nn::gradient_check(loss, params, an, kGradEps).max_rel_error);
        }
        // Attention: softmax Jacobian and 1/sqrt(d_k) scale.
        {
            SplitMix64 rng(100 + seed);
            const std::size_t n = 2 + rng.below(4), h = 1 + rng.below(4);
            auto prm = nn::AttentionParams::zeros(h, h, h);
            for (Matrix* m : prm.tensors()) *m = testkit::random_matrix(m->rows(), m->cols(), rng, 0.8);
            auto hs = testkit::random_matrix(n, h, rng);
            auto hl = testkit::random_matrix(1, h, rng);
            const auto r = testkit::random_matrix(1, h, rng);
            auto loss = [&] { return project(nn::attention_forward(hs, hl, prm).context, r); };
            const auto out = nn::attention_forward(hs, hl, prm);
            const auto g = nn::attention_backward(r, out.tape, prm);
            std::vector<Matrix*> params = {&prm.w_q, &prm.w_k, &prm.w_v, &hs, &hl};
            std::vector<const Matrix*> an = {&g.d_params.w_q, &g.d_params.w_k, &g.d_params.w_v,
                                             &g.d_h_seq, &g.d_h_last};
            worst_attn = std::max(worst_attn, nn::gradient_check(loss, params, an, kGradEps).max_rel_error);
        }
        // Whole model: LSTM, attention, dense head and MSE loss together.
        for (int c = 1; c <= 2; ++c) {
            SplitMix64 rng(1000 * c + seed);
            forecast::ModelConfig cfg;
            cfg.case_tag = *data::case_from_int(c);
            cfg.window_len = 2 + rng.below(4);
            cfg.hidden_dim = 1 + rng.below(4);
            cfg.seed = static_cast<std::uint64_t>(seed);
            auto model = forecast::build_model(cfg);
            for (Matrix* m : model.parameters()) *m = testkit::random_matrix(m->rows(), m->cols(), rng, 0.8);
            std::vector<Matrix> inputs;
            std::vector<double> targets;
            for (int b = 0; b < 3; ++b) {
                inputs.push_back(testkit::random_matrix(cfg.window_len, cfg.input_dim(), rng, 1.5));
                targets.push_back(rng.uniform(-2.0, 2.0));
            }
            auto loss = [&] { return forecast::loss_and_gradients(model, inputs, targets).loss; };
            auto res = forecast::loss_and_gradients(model, inputs, targets);
            worst_model = std::max(
                worst_model,
                nn::gradient_check(loss, model.parameters(), std::as_const(res.grads).tensors(), kGradEps)
                    .max_rel_error);
            for (Matrix* g : res.grads.tensors()) *g *= 1.01;
            weakest_mutation = std::min(
                weakest_mutation,
                nn::gradient_check(loss, model.parameters(), std::as_const(res.grads).tensors(), kGradEps)
                    .max_rel_error);
        }
    }
    const double elapsed = seconds_since(t0);
    o.note("max rel err lstm=" + fmt(worst_lstm, 3) + " attention=" + fmt(worst_attn, 3) +
           " model=" + fmt(worst_model, 3));
    o.note("min mutation err=" + fmt(weakest_mutation, 3) + ", " + fmt(elapsed, 3) + " s");
    o.require(worst_lstm < kGradTolerance, "LSTM gradients");
    o.require(worst_attn < kGradTolerance, "attention gradients");
    o.require(worst_model < kGradTolerance, "model gradients");
    o.require(weakest_mutation > kMutationFloor, "x1.01 corruption detected");
    o.require(elapsed < kGradBudgetS, "runtime < " + fmt(kGradBudgetS) + " s");
    return o;
}

// ---------------------------------------------------------------------------

thermal::WeatherPoint random_weather(SplitMix64& rng) {
    thermal::WeatherPoint w;
    w.ambient_temp_c = rng.uniform(-20.0, 45.0);
    w.wind_speed_ms = rng.uniform(0.0, 20.0);
    w.humidity_pct = rng.uniform(0.0, 100.0);
    w.irradiance_wm2 = rng.uniform(0.0, 1200.0);
    return w;
}

thermal::ConductorSpec random_spec(SplitMix64& rng) {
    thermal::ConductorSpec s;
    s.diameter_m = rng.uniform(0.005, 0.04);
    s.resistance_ref_ohm_per_m = rng.uniform(2e-5, 2e-3);
    s.alpha_per_c = rng.uniform(0.003, 0.0045);
    s.emissivity = rng.uniform(0.2, 0.95);
    s.absorptivity = rng.uniform(0.2, 0.95);
    s.max_conductor_temp_c = rng.uniform(60.0, 150.0);
    return s;
}

Outcome thermal_soundness() {
    Outcome o;
    const auto t0 = Clock::now();
    SplitMix64 rng(738);
    double worst_residual = 0, worst_roundtrip = 0;
    int monotone_violations = 0, humidity_changes = 0, zero_ratings = 0;

    for (int k = 0; k < kThermalCases; ++k) {
        const auto s = random_spec(rng);
        const auto w = random_weather(rng);
        const double amps = thermal::solve_ampacity(s, w);
        if (amps > 0.0) {
            worst_residual = std::max(
                worst_residual, std::abs(thermal::heat_balance_residual(s, w, s.max_conductor_temp_c, amps)));
            worst_roundtrip = std::max(
                worst_roundtrip, std::abs(thermal::solve_conductor_temp(s, w, amps) - s.max_conductor_temp_c));
        } else {
            ++zero_ratings;
        }

        auto more_wind = w, hotter = w, sunnier = w, humid = w;
        more_wind.wind_speed_ms += rng.uniform(0.0, 5.0);
        hotter.ambient_temp_c = std::min(hotter.ambient_temp_c + rng.uniform(0.0, 10.0),
                                         s.max_conductor_temp_c);
        sunnier.irradiance_wm2 += rng.uniform(0.0, 300.0);
        humid.humidity_pct = rng.uniform(0.0, 100.0);
        monotone_violations += thermal::solve_ampacity(s, more_wind) < amps;
        monotone_violations += thermal::solve_ampacity(s, hotter) > amps;
        monotone_violations += thermal::solve_ampacity(s, sunnier) > amps;
        humidity_changes += thermal::solve_ampacity(s, humid) != amps;
    }
    const double elapsed = seconds_since(t0);
    o.note("max residual=" + fmt(worst_residual, 3) + " W/m, max round-trip=" + fmt(worst_roundtrip, 3) +
           " C, zero ratings=" + std::to_string(zero_ratings) + ", " + fmt(elapsed, 3) + " s");
    o.require(worst_residual < kResidualTolWPerM, "heat-balance residual");
    o.require(worst_roundtrip < kRoundTripTolC, "temperature round trip");
    o.require(monotone_violations == 0, std::to_string(monotone_violations) + " monotonicity violations");
    o.require(humidity_changes == 0, "humidity independence");
    o.require(zero_ratings < kThermalCases / 10, "enough non-zero ratings exercised");
    o.require(elapsed < kThermalBudgetS, "runtime < " + fmt(kThermalBudgetS) + " s");
    return o;
}

// ---------------------------------------------------------------------------

Outcome metric_oracles() {
    Outcome o;
    SplitMix64 rng(4);
    std::vector<double> actual(kMetricSamples), pred(kMetricSamples);
    for (std::size_t i = 0; i < kMetricSamples; ++i) {
        actual[i] = rng.uniform(200.0, 900.0);
        pred[i] = actual[i] + 30.0 * rng.normal();
    }
    // Brute force in long double, straight from the definitions.
    long double se = 0, ae = 0, mean = 0;
    for (std::size_t i = 0; i < kMetricSamples; ++i) mean += actual[i];
    mean /= kMetricSamples;
    long double tot = 0;
    for (std::size_t i = 0; i < kMetricSamples; ++i) {
        const long double e = static_cast<long double>(pred[i]) - actual[i];
        se += e * e;
        ae += std::fabs(e);
        tot += (actual[i] - mean) * (actual[i] - mean);
    }
    const double ref_mse = static_cast<double>(se / kMetricSamples);
    const double ref_mae = static_cast<double>(ae / kMetricSamples);
    const double ref_r2 = static_cast<double>(1.0L - se / tot);
    auto rel = [](double a, double b) { return std::abs(a - b) / std::abs(b); };
    const double e_mse = rel(eval::mse(pred, actual), ref_mse);
    const double e_mae = rel(eval::mae(pred, actual), ref_mae);
    const double e_r2 = rel(eval::r_squared(pred, actual), ref_r2);
    o.note("rel err mse=" + fmt(e_mse, 2) + " mae=" + fmt(e_mae, 2) + " r2=" + fmt(e_r2, 2));
    o.require(e_mse < kMetricRelTol && e_mae < kMetricRelTol && e_r2 < kMetricRelTol, "brute-force agreement");

    const double perfect = eval::r_squared(actual, actual);
    const std::vector<double> mean_pred(kMetricSamples, static_cast<double>(mean));
    const double mean_r2 = eval::r_squared(mean_pred, actual);
    o.require(std::abs(perfect - 1.0) <= kMetricAbsTol, "r2(perfect) = 1");
    o.require(std::abs(mean_r2) <= kMetricAbsTol, "r2(mean predictor) = 0 (got " + fmt(mean_r2, 3) + ")");

    int cs_violations = 0;
    for (int k = 0; k < 1000; ++k) {
        const auto n = static_cast<std::size_t>(2 + rng.below(200));
        std::vector<double> a(n), b(n);
        for (std::size_t i = 0; i < n; ++i) {
            a[i] = rng.uniform(-1e3, 1e3);
            b[i] = rng.uniform(-1e3, 1e3);
        }
        const double m = eval::mae(a, b);
        cs_violations += m * m > eval::mse(a, b) * (1.0 + 1e-12);
    }
    o.require(cs_violations == 0, "mae^2 <= mse");

    const auto report = eval::compute_report(data::Case::Multivariate, pred, actual);
    o.require(report.accuracy_pct == 100.0 * report.r_squared, "accuracy_pct = 100 r2");
    return o;
}

// ---------------------------------------------------------------------------

Outcome protocol_fidelity() {
    Outcome o;
    synth::GenConfig g;
    g.days = 2;
    g.seed = 42;
    const auto full = synth::generate(g, {});
    const data::TimeSeries hundred(std::vector<data::Measurement>(full.begin(), full.begin() + 100));
    const auto [train, test] = data::chronological_split(hundred, 0.8);
    o.require(train.size() == 80 && test.size() == 20, "N=100 splits (80, 20)");
    bool ordered = true;
    for (const auto& a : train) {
        for (const auto& b : test) ordered = ordered && a.timestamp < b.timestamp;
    }
    o.require(ordered, "every train timestamp precedes every test timestamp");

    const auto norm = data::fit_normalizer(train);
    const auto c1 = data::make_windows(train, norm, data::Case::Univariate, 16);
    const auto c2 = data::make_windows(train, norm, data::Case::Multivariate, 16);
    bool shapes = c1.size() == 64 && c2.size() == 64;
    for (const auto& w : c1.inputs) shapes = shapes && w.rows() == 16 && w.cols() == 1;
    for (const auto& w : c2.inputs) shapes = shapes && w.rows() == 16 && w.cols() == 6;
    o.require(shapes, "window shapes n x 1 and n x 6");

    const std::vector<std::string> order = {"dlr_a",        "ambient_temp_c", "wind_speed_ms",
                                            "humidity_pct", "cable_temp_c",   "irradiance_wm2"};
    const auto features = data::case_features(data::Case::Multivariate);
    bool feature_order = features.size() == order.size();
    for (std::size_t j = 0; feature_order && j < order.size(); ++j) {
        feature_order = data::feature_name(features[j]) == order[j];
        for (std::size_t r = 0; r < 16; ++r) {
            feature_order = feature_order &&
                            c2.inputs[3](r, j) == norm.normalize(features[j], data::feature_value(train[3 + r], features[j]));
        }
    }
    o.require(feature_order, "fixed feature order");

    // Train-only statistics: wild edits to the test rows leave the normalizer unchanged.
    auto edited = full.records();
    for (std::size_t i = 160; i < edited.size(); ++i) {
        edited[i].dlr_a *= 3.0;
        edited[i].ambient_temp_c += 40.0;
        edited[i].wind_speed_ms += 10.0;
        edited[i].humidity_pct = 100.0;
        edited[i].cable_temp_c -= 15.0;
        edited[i].irradiance_wm2 += 500.0;
    }
    const auto n_a = data::fit_normalizer(data::chronological_split(full, 0.8).first);
    const auto n_b = data::fit_normalizer(data::chronological_split(data::TimeSeries(edited), 0.8).first);
    const auto n_c = data::fit_normalizer(
        data::TimeSeries(std::vector<data::Measurement>(full.begin(), full.begin() + 153)));
    o.require(n_a == n_b && n_a == n_c, "normalizer depends on training rows only");
    return o;
}

// ---------------------------------------------------------------------------

Outcome determinism_and_persistence() {
    Outcome o;
    const auto root = testkit::scratch_dir("acceptance_determinism");
    const std::string data = (root / "data.csv").string();
    bool ok = dlr_cli({"gen", "--days", "4", "--seed", "42", "--out", data}) == 0;

    for (const char* sub : {"a", "b"}) {
        fs::create_directories(root / sub);
        auto p = [&](const char* name) { return (root / sub / name).string(); };
        for (const std::string c : {"1", "2"}) {
            ok = ok &&
                 dlr_cli({"train", "--data", data, "--case", c, "--out", p(("m" + c + ".json").c_str()),
                          "--epochs", "6", "--hidden", "12", "--shuffle"}) == 0 &&
                 dlr_cli({"eval", "--model", p(("m" + c + ".json").c_str()), "--data", data, "--report",
                          p(("r" + c + ".txt").c_str())}) == 0 &&
                 dlr_cli({"forecast", "--model", p(("m" + c + ".json").c_str()), "--data", data, "--out",
                          p(("f" + c + ".csv").c_str())}) == 0;
        }
        ok = ok && dlr_cli({"plot", "--actual", data, "--pred", p("f1.csv"), "--pred2", p("f2.csv"),
                            "--out", p("plot.svg")}) == 0;
    }
    o.require(ok, "pipeline commands");
    if (!ok) return o;

    int mismatched = 0;
    for (const char* name : {"r1.txt", "r2.txt", "f1.csv", "f2.csv", "plot.svg"}) {
        mismatched += slurp(root / "a" / name) != slurp(root / "b" / name);
    }
    for (const char* name : {"m1.json", "m2.json"}) {
        auto a = forecast::load_model(root / "a" / name);
        auto b = forecast::load_model(root / "b" / name);
        a.metadata.wall_time_s = b.metadata.wall_time_s = 0.0;
        mismatched += !(a == b);
    }
    o.require(mismatched == 0, std::to_string(mismatched) + " artifacts differ between identical runs");

    // Save/load round trip on 100 random windows.
    int differing_predictions = 0;
    for (const char* name : {"m1.json", "m2.json"}) {
        const auto model = forecast::load_model(root / "a" / name);
        forecast::save_model(model, root / "resaved.json");
        const auto again = forecast::load_model(root / "resaved.json");
        SplitMix64 rng(100);
        for (int k = 0; k < 100; ++k) {
            const auto w = testkit::random_matrix(model.config.window_len, model.config.input_dim(), rng, 3.0);
            differing_predictions += forecast::predict(model, w) != forecast::predict(again, w);
        }
    }
    o.require(differing_predictions == 0, "bitwise predictions after save/load");

    // Case 1 ignores every weather column.
    const auto ts = data::read_csv(data);
    auto recs = ts.records();
    SplitMix64 rng(6);
    for (auto& m : recs) {
        m.ambient_temp_c = rng.uniform(-30, 50);
        m.wind_speed_ms = rng.uniform(0, 30);
        m.humidity_pct = rng.uniform(0, 100);
        m.cable_temp_c = rng.uniform(-30, 150);
        m.irradiance_wm2 = rng.uniform(0, 1400);
    }
    const auto m1 = forecast::load_model(root / "a" / "m1.json");
    const auto fa = forecast::forecast_series(m1, ts);
    const auto fb = forecast::forecast_series(m1, data::TimeSeries(recs));
    bool invariant = fa.size() == fb.size();
    for (std::size_t i = 0; invariant && i < fa.size(); ++i) invariant = fa[i].dlr_a == fb[i].dlr_a;
    o.require(invariant, "case 1 forecasts invariant to weather edits");
    o.note(std::to_string(fa.size()) + " forecasts compared per model");
    return o;
}

// ---------------------------------------------------------------------------

Outcome synthetic_structure() {
    Outcome o;
    synth::GenConfig g;
    g.days = 7;
    g.seed = 42;
    const auto ts = synth::generate(g, {});
    std::vector<double> irr, cable, amb, hum;
    int night_nonzero = 0;
    bool spacing = true;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const auto& m = ts[i];
        irr.push_back(m.irradiance_wm2);
        cable.push_back(m.cable_temp_c);
        amb.push_back(m.ambient_temp_c);
        hum.push_back(m.humidity_pct);
        const double minute = static_cast<double>((m.timestamp - synth::kEpochStart) % 86400) / 60.0;
        if (synth::solar_profile(minute) <= 0.0) night_nonzero += m.irradiance_wm2 != 0.0;
        if (i > 0) spacing = spacing && m.timestamp - ts[i - 1].timestamp == 900;
    }
    const double c_cable = testkit::pearson(irr, cable);
    const double c_amb = testkit::pearson(irr, amb);
    const double c_hum = testkit::pearson(irr, hum);
    o.note("corr(irr, cable)=" + fmt(c_cable) + " corr(irr, ambient)=" + fmt(c_amb) +
           " corr(irr, humidity)=" + fmt(c_hum));
    o.require(c_cable > kCorrelationFloor, "corr(irradiance, cable_temp)");
    o.require(c_amb > kCorrelationFloor, "corr(irradiance, ambient_temp)");
    o.require(c_hum < -kCorrelationFloor, "corr(irradiance, humidity)");
    o.require(night_nonzero == 0, "nighttime irradiance exactly 0");
    o.require(ts.size() == 7u * 96u && spacing, "7 x 96 records at 15-minute steps");
    for (int days : {1, 3}) {
        g.days = days;
        o.require(synth::generate(g, {}).size() == static_cast<std::size_t>(days) * 96u,
                  std::to_string(days) + "-day record count");
    }
    return o;
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria = {
        {1, "directional reproduction (case 2 beats case 1, R2 >= 0.90)", directional_reproduction},
        {2, "gradient correctness", gradient_correctness},
        {3, "thermal solver soundness", thermal_soundness},
        {4, "metric oracles", metric_oracles},
        {5, "protocol fidelity", protocol_fidelity},
        {6, "determinism and persistence", determinism_and_persistence},
        {7, "synthetic-data structure", synthetic_structure},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        failures += !o.pass;
        std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << c.id << ": " << c.name << "  ["
                  << o.detail << "]" << std::endl;
    }
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed")
              << std::endl;
    return failures == 0 ? 0 : 1;
}
