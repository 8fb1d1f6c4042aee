#include "dlr/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "dlr/dataset.hpp"
#include "dlr/errors.hpp"
#include "dlr/evaluation.hpp"
#include "dlr/forecaster.hpp"
#include "dlr/plot.hpp"
#include "dlr/synth.hpp"
#include "dlr/text.hpp"
#include "dlr/thermal.hpp"

namespace dlr::cli {

namespace {

using Settings = std::vector<std::pair<std::string, std::string>>;

void print_config(std::ostream& err, const std::string& command, const Settings& settings) {
    err << "dlr " << command << ": resolved config\n";
    for (const auto& [key, value] : settings) err << "  " << key << " = " << value << '\n';
}

std::string fmt(double v) { return text::format_double(v); }

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path);
    out << content;
    if (!out) throw DataError("write failed for " + path);
}

thermal::ConductorSpec load_spec(const std::string& path) {
    return path.empty() ? thermal::ConductorSpec{} : thermal::read_conductor_spec(path);
}

Settings spec_settings(const std::string& path, const thermal::ConductorSpec& s) {
    return {
        {"spec", path.empty() ? "<defaults>" : path},
        {"diameter_m", fmt(s.diameter_m)},
        {"resistance_ref_ohm_per_m", fmt(s.resistance_ref_ohm_per_m)},
        {"ref_temp_c", fmt(s.ref_temp_c)},
        {"alpha_per_c", fmt(s.alpha_per_c)},
        {"emissivity", fmt(s.emissivity)},
        {"absorptivity", fmt(s.absorptivity)},
        {"max_conductor_temp_c", fmt(s.max_conductor_temp_c)},
        {"lambda_nat", fmt(s.lambda_nat)},
        {"lambda_forced", fmt(s.lambda_forced)},
    };
}

// Fills (or appends) a dlr_a column for any CSV carrying the four weather
// columns. Other columns pass through untouched.
std::string rate_csv(const std::string& content, const std::string& source,
                     const thermal::ConductorSpec& spec, std::size_t& rows_out) {
    std::istringstream in(content);
    std::string line;
    if (!std::getline(in, line)) throw DataError(source + ": empty file, missing header");
    if (!line.empty() && line.back() == '\r') line.pop_back();

    const auto header = text::split(line, ',');
    std::map<std::string, std::size_t, std::less<>> col;
    for (std::size_t i = 0; i < header.size(); ++i) col[std::string(header[i])] = i;
    for (const char* required :
         {"timestamp", "ambient_temp_c", "wind_speed_ms", "humidity_pct", "irradiance_wm2"}) {
        if (!col.contains(required)) {
            throw DataError(source + ":1: header lacks column " + std::string(required));
        }
    }
    const bool has_dlr = col.contains("dlr_a");
    std::ostringstream out;
    out << line << (has_dlr ? "" : ",dlr_a") << '\n';

    std::size_t line_no = 1;
    rows_out = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::string where = source + ":" + std::to_string(line_no) + ": ";
        auto fields = text::split(line, ',');
        if (fields.size() != header.size()) {
            throw DataError(where + "expected " + std::to_string(header.size()) + " fields");
        }
        if (!data::parse_timestamp(fields[col.at("timestamp")])) {
            throw DataError(where + "unparsable timestamp");
        }
        auto number = [&](const char* name) {
            const auto v = text::parse_double(fields[col.at(name)]);
            if (!v) throw DataError(where + "unparsable number in column " + name);
            return *v;
        };
        thermal::WeatherPoint w;
        w.ambient_temp_c = number("ambient_temp_c");
        w.wind_speed_ms = number("wind_speed_ms");
        w.humidity_pct = number("humidity_pct");
        w.irradiance_wm2 = number("irradiance_wm2");
        double amps = 0.0;
        try {
            amps = thermal::solve_ampacity(spec, w);
        } catch (const std::invalid_argument& e) {
            throw DataError(where + e.what());
        }
        const std::string rated = text::format_double(amps);
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i > 0) out << ',';
            out << (has_dlr && i == col.at("dlr_a") ? std::string_view(rated) : fields[i]);
        }
        if (!has_dlr) out << ',' << rated;
        out << '\n';
        ++rows_out;
    }
    return out.str();
}

std::string forecast_label(const std::string& path) {
    return "forecast (" + std::filesystem::path(path).stem().string() + ")";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Dynamic line rating: thermal rating, synthetic data and LSTM forecasting"};
    app.name("dlr");
    app.require_subcommand(1);

    // gen
    synth::GenConfig gen_cfg;
    std::string gen_out, gen_spec;
    auto* gen = app.add_subcommand("gen", "Generate a synthetic sensor CSV");
    gen->add_option("--days", gen_cfg.days, "Number of days")->required()->check(CLI::PositiveNumber);
    gen->add_option("--seed", gen_cfg.seed, "Generator seed")->required();
    gen->add_option("--out", gen_out, "Output CSV")->required();
    gen->add_option("--spec", gen_spec, "Conductor key=value file");
    gen->add_option("--step-min", gen_cfg.step_minutes, "Sampling step in minutes")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);

    // rate
    std::string rate_in, rate_out, rate_spec;
    auto* rate = app.add_subcommand("rate", "Fill dlr_a from weather via the heat balance");
    rate->add_option("--in", rate_in, "Weather CSV")->required();
    rate->add_option("--out", rate_out, "Rated CSV")->required();
    rate->add_option("--spec", rate_spec, "Conductor key=value file");

    // train
    forecast::ModelConfig mcfg;
    int case_int = 1;
    std::string train_data, train_out;
    auto* trn = app.add_subcommand("train", "Train a case 1 or case 2 forecaster");
    trn->add_option("--data", train_data, "Canonical CSV")->required();
    trn->add_option("--case", case_int, "1 = univariate LSTM, 2 = multivariate attention LSTM")
        ->required()
        ->check(CLI::IsMember({1, 2}));
    trn->add_option("--out", train_out, "Model file")->required();
    trn->add_option("--window", mcfg.window_len, "Window length")->capture_default_str()->check(CLI::Range(2, 100000));
    trn->add_option("--hidden", mcfg.hidden_dim, "LSTM hidden size")->capture_default_str()->check(CLI::PositiveNumber);
    trn->add_option("--epochs", mcfg.epochs, "Maximum epochs")->capture_default_str()->check(CLI::PositiveNumber);
    trn->add_option("--lr", mcfg.learning_rate, "Adam learning rate")->capture_default_str()->check(CLI::PositiveNumber);
    trn->add_option("--batch", mcfg.batch_size, "Mini-batch size")->capture_default_str()->check(CLI::PositiveNumber);
    trn->add_option("--seed", mcfg.seed, "Initialization seed")->capture_default_str();
    trn->add_option("--patience", mcfg.early_stop_patience, "Early-stopping patience (epochs)")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    trn->add_option("--train-frac", mcfg.train_frac, "Chronological training fraction")
        ->capture_default_str()
        ->check(CLI::Range(0.0, 1.0));
    trn->add_flag("--shuffle", mcfg.shuffle, "Shuffle batch order each epoch (seeded)");

    // eval
    std::string eval_model, eval_data, eval_report;
    auto* evl = app.add_subcommand("eval", "Score a model on the chronological test tail");
    evl->add_option("--model", eval_model, "Model file")->required();
    evl->add_option("--data", eval_data, "Canonical CSV")->required();
    evl->add_option("--report", eval_report, "Report output")->required();

    // forecast
    std::string fc_model, fc_data, fc_out;
    auto* fc = app.add_subcommand("forecast", "One 15-minute-ahead forecast per window");
    fc->add_option("--model", fc_model, "Model file")->required();
    fc->add_option("--data", fc_data, "Canonical CSV")->required();
    fc->add_option("--out", fc_out, "Forecast CSV")->required();

    // plot
    std::string plot_actual, plot_pred, plot_pred2, plot_out;
    auto* plt = app.add_subcommand("plot", "Actual vs forecast SVG");
    plt->add_option("--actual", plot_actual, "Canonical CSV with actual dlr_a")->required();
    plt->add_option("--pred", plot_pred, "Forecast CSV")->required();
    plt->add_option("--pred2", plot_pred2, "Second forecast CSV");
    plt->add_option("--out", plot_out, "SVG output")->required();

    // compare
    std::string cmp_1, cmp_2, cmp_out;
    auto* cmp = app.add_subcommand("compare", "Pair a case 1 and a case 2 report");
    cmp->add_option("--case1", cmp_1, "Case 1 report")->required();
    cmp->add_option("--case2", cmp_2, "Case 2 report")->required();
    cmp->add_option("--out", cmp_out, "Comparison output")->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(std::move(reversed));
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << (app.get_subcommands().empty() ? app.help()
                                                  : app.get_subcommands().front()->help());
            return 0;
        }
        err << "dlr: " << e.what() << '\n';
        return 1;
    }

    try {
        if (*gen) {
            const auto spec = load_spec(gen_spec);
            Settings s = {{"days", std::to_string(gen_cfg.days)},
                          {"seed", std::to_string(gen_cfg.seed)},
                          {"step_minutes", std::to_string(gen_cfg.step_minutes)},
                          {"base_ambient_c", fmt(gen_cfg.base_ambient_c)},
                          {"ambient_swing_c", fmt(gen_cfg.ambient_swing_c)},
                          {"irradiance_peak_wm2", fmt(gen_cfg.irradiance_peak_wm2)},
                          {"cloud_noise", fmt(gen_cfg.cloud_noise)},
                          {"wind_mean_ms", fmt(gen_cfg.wind_mean_ms)},
                          {"wind_ar_coeff", fmt(gen_cfg.wind_ar_coeff)},
                          {"wind_std_ms", fmt(gen_cfg.wind_std_ms)},
                          {"wind_diurnal_ms", fmt(gen_cfg.wind_diurnal_ms)},
                          {"load_base_a", fmt(gen_cfg.load_base_a)},
                          {"load_swing_a", fmt(gen_cfg.load_swing_a)},
                          {"noise_scale", fmt(gen_cfg.noise_scale)},
                          {"out", gen_out}};
            const auto ss = spec_settings(gen_spec, spec);
            s.insert(s.end(), ss.begin(), ss.end());
            print_config(err, "gen", s);
            try {
                gen_cfg.validate();
            } catch (const std::invalid_argument& e) {
                err << "dlr gen: " << e.what() << '\n';
                return 1;
            }
            const auto ts = synth::generate(gen_cfg, spec);
            data::write_csv(ts, std::filesystem::path(gen_out));
            out << "wrote " << ts.size() << " records to " << gen_out << '\n';
        } else if (*rate) {
            const auto spec = load_spec(rate_spec);
            Settings s = {{"in", rate_in}, {"out", rate_out}};
            const auto ss = spec_settings(rate_spec, spec);
            s.insert(s.end(), ss.begin(), ss.end());
            print_config(err, "rate", s);
            std::size_t rows = 0;
            write_file(rate_out, rate_csv(read_file(rate_in), rate_in, spec, rows));
            out << "rated " << rows << " rows into " << rate_out << '\n';
        } else if (*trn) {
            mcfg.case_tag = *data::case_from_int(case_int);
            print_config(err, "train",
                         {{"data", train_data},
                          {"case", std::to_string(case_int)},
                          {"out", train_out},
                          {"window", std::to_string(mcfg.window_len)},
                          {"hidden", std::to_string(mcfg.hidden_dim)},
                          {"key_dim", std::to_string(mcfg.hidden_dim)},
                          {"value_dim", std::to_string(mcfg.hidden_dim)},
                          {"epochs", std::to_string(mcfg.epochs)},
                          {"lr", fmt(mcfg.learning_rate)},
                          {"batch", std::to_string(mcfg.batch_size)},
                          {"seed", std::to_string(mcfg.seed)},
                          {"patience", std::to_string(mcfg.early_stop_patience)},
                          {"train_frac", fmt(mcfg.train_frac)},
                          {"shuffle", mcfg.shuffle ? "true" : "false"},
                          {"validation_frac", "0.1"}});
            try {
                mcfg.validate();
            } catch (const std::invalid_argument& e) {
                err << "dlr train: " << e.what() << '\n';
                return 1;
            }
            const auto ts = data::read_csv(train_data);
            const auto [train_ts, test_ts] = data::chronological_split(ts, mcfg.train_frac);
            const auto norm = data::fit_normalizer(train_ts, data::case_features(mcfg.case_tag));
            const auto ds = data::make_windows(train_ts, norm, mcfg.case_tag, mcfg.window_len);
            auto result = forecast::train(forecast::build_model(mcfg, norm), ds,
                                          [&err](const forecast::EpochStats& st) {
                                              if (st.epoch == 1 || st.epoch % 10 == 0) {
                                                  err << "epoch " << st.epoch
                                                      << " train_mse=" << st.train_mse
                                                      << " val_mse=" << st.val_mse << '\n';
                                              }
                                          });
            forecast::save_model(result.model, train_out);
            out << "trained case " << case_int << " on " << ds.size() << " windows: "
                << result.report.epochs_run << " epochs, best epoch "
                << result.report.best_epoch << ", best val_mse "
                << text::format_double(result.report.best_val_mse) << " -> " << train_out << '\n';
        } else if (*evl) {
            print_config(err, "eval",
                         {{"model", eval_model}, {"data", eval_data}, {"report", eval_report}});
            const auto model = forecast::load_model(eval_model);
            const auto ts = data::read_csv(eval_data);
            const auto [train_ts, test_ts] = data::chronological_split(ts, model.config.train_frac);
            const auto report = eval::evaluate(model, test_ts);
            const std::string text = eval::format_report(report);
            write_file(eval_report, text);
            out << text;
        } else if (*fc) {
            print_config(err, "forecast", {{"model", fc_model}, {"data", fc_data}, {"out", fc_out}});
            const auto model = forecast::load_model(fc_model);
            const auto ts = data::read_csv(fc_data);
            const auto forecasts = forecast::forecast_series(model, ts);
            forecast::write_forecast_csv(forecasts, std::filesystem::path(fc_out));
            out << "wrote " << forecasts.size() << " forecasts to " << fc_out << '\n';
        } else if (*plt) {
            print_config(err, "plot",
                         {{"actual", plot_actual},
                          {"pred", plot_pred},
                          {"pred2", plot_pred2.empty() ? "<none>" : plot_pred2},
                          {"out", plot_out}});
            const auto actual = data::read_csv(plot_actual);
            std::vector<plot::LabeledForecast> series;
            series.push_back({forecast_label(plot_pred), forecast::read_forecast_csv(plot_pred)});
            if (!plot_pred2.empty()) {
                series.push_back(
                    {forecast_label(plot_pred2), forecast::read_forecast_csv(plot_pred2)});
            }
            const auto aligned = plot::align_series(actual, series);
            write_file(plot_out, plot::render_svg(aligned.timestamps, aligned.series));
            out << "wrote " << aligned.series.size() << " series to " << plot_out << '\n';
        } else if (*cmp) {
            print_config(err, "compare", {{"case1", cmp_1}, {"case2", cmp_2}, {"out", cmp_out}});
            const auto r1 = eval::parse_report(read_file(cmp_1));
            const auto r2 = eval::parse_report(read_file(cmp_2));
            const std::string text = eval::format_comparison(r1, r2);
            write_file(cmp_out, text);
            out << text;
        }
    } catch (const NumericalError& e) {
        err << "dlr: numerical failure: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        err << "dlr: " << e.what() << '\n';
        return 2;
    }
    return 0;
}

}  // namespace dlr::cli
