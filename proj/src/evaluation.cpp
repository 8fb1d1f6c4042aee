#include "dlr/evaluation.hpp"

#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include "dlr/errors.hpp"
#include "dlr/text.hpp"

namespace dlr::eval {

namespace {

void check_lengths(std::span<const double> pred, std::span<const double> actual,
                   std::size_t min_len, const char* what) {
    if (pred.size() != actual.size()) {
        throw std::invalid_argument(std::string(what) + ": length mismatch " +
                                    std::to_string(pred.size()) + " vs " +
                                    std::to_string(actual.size()));
    }
    if (pred.size() < min_len) {
        throw std::invalid_argument(std::string(what) + ": need at least " +
                                    std::to_string(min_len) + " values");
    }
}

}  // namespace

double mse(std::span<const double> pred, std::span<const double> actual) {
    check_lengths(pred, actual, 1, "mse");
    double sum = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double d = pred[i] - actual[i];
        sum += d * d;
    }
    return sum / static_cast<double>(pred.size());
}

double mae(std::span<const double> pred, std::span<const double> actual) {
    check_lengths(pred, actual, 1, "mae");
    double sum = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) sum += std::abs(pred[i] - actual[i]);
    return sum / static_cast<double>(pred.size());
}

double r_squared(std::span<const double> pred, std::span<const double> actual) {
    check_lengths(pred, actual, 2, "r_squared");
    double mean = 0.0;
    for (double a : actual) mean += a;
    mean /= static_cast<double>(actual.size());

    double ss_tot = 0.0;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < actual.size(); ++i) {
        const double dev = actual[i] - mean;
        const double res = actual[i] - pred[i];
        ss_tot += dev * dev;
        ss_res += res * res;
    }
    if (!(ss_tot > 0.0)) throw DataError("r_squared: actual values have zero variance");
    return 1.0 - ss_res / ss_tot;
}

MetricsReport compute_report(data::Case case_tag, std::span<const double> pred,
                             std::span<const double> actual) {
    MetricsReport r;
    r.case_tag = case_tag;
    r.n_samples = pred.size();
    r.mse = mse(pred, actual);
    r.mae = mae(pred, actual);
    r.r_squared = r_squared(pred, actual);
    r.accuracy_pct = 100.0 * r.r_squared;
    return r;
}

MetricsReport evaluate(const forecast::Model& model, const data::TimeSeries& test) {
    const auto forecasts = forecast::forecast_series(model, test);
    std::vector<double> pred;
    std::vector<double> actual;
    pred.reserve(forecasts.size());
    actual.reserve(forecasts.size());
    for (std::size_t k = 0; k < forecasts.size(); ++k) {
        pred.push_back(forecasts[k].dlr_a);
        actual.push_back(test[k + model.config.window_len].dlr_a);
    }
    return compute_report(model.config.case_tag, pred, actual);
}

std::string format_report(const MetricsReport& r) {
    std::ostringstream out;
    out << "case=" << static_cast<int>(r.case_tag) << '\n'
        << "n_samples=" << r.n_samples << '\n'
        << "mse=" << text::format_double(r.mse) << '\n'
        << "mae=" << text::format_double(r.mae) << '\n'
        << "r_squared=" << text::format_double(r.r_squared) << '\n'
        << "accuracy_pct=" << text::format_double(r.accuracy_pct) << '\n';
    return out.str();
}

MetricsReport parse_report(const std::string& content) {
    std::map<std::string, std::string, std::less<>> kv;
    std::istringstream in(content);
    std::string line;
    while (std::getline(in, line)) {
        const auto trimmed = text::trim(line);
        if (trimmed.empty()) continue;
        const auto eq = trimmed.find('=');
        if (eq == std::string_view::npos) throw DataError("report line without '=': " + line);
        kv[std::string(trimmed.substr(0, eq))] = std::string(trimmed.substr(eq + 1));
    }
    auto number = [&kv](const char* key) {
        const auto it = kv.find(key);
        if (it == kv.end()) throw DataError(std::string("report lacks field ") + key);
        const auto v = text::parse_double(it->second);
        if (!v) throw DataError(std::string("report field ") + key + " is not a number");
        return *v;
    };
    MetricsReport r;
    const auto c = data::case_from_int(static_cast<int>(number("case")));
    if (!c) throw DataError("report case must be 1 or 2");
    r.case_tag = *c;
    r.n_samples = static_cast<std::size_t>(number("n_samples"));
    r.mse = number("mse");
    r.mae = number("mae");
    r.r_squared = number("r_squared");
    r.accuracy_pct = number("accuracy_pct");
    return r;
}

std::string format_comparison(const MetricsReport& case1, const MetricsReport& case2) {
    if (case1.case_tag != data::Case::Univariate || case2.case_tag != data::Case::Multivariate) {
        throw DataError("comparison expects a case 1 report and a case 2 report");
    }
    std::ostringstream out;
    const std::pair<const char*, const MetricsReport*> sides[] = {{"case1", &case1},
                                                                  {"case2", &case2}};
    for (const auto& [prefix, r] : sides) {
        out << prefix << ".n_samples=" << r->n_samples << '\n'
            << prefix << ".mse=" << text::format_double(r->mse) << '\n'
            << prefix << ".mae=" << text::format_double(r->mae) << '\n'
            << prefix << ".r_squared=" << text::format_double(r->r_squared) << '\n'
            << prefix << ".accuracy_pct=" << text::format_double(r->accuracy_pct) << '\n';
    }
    out << "case2_mse_le_case1=" << (case2.mse <= case1.mse ? "true" : "false") << '\n'
        << "case2_mae_le_case1=" << (case2.mae <= case1.mae ? "true" : "false") << '\n'
        << "case2_r_squared_ge_case1=" << (case2.r_squared >= case1.r_squared ? "true" : "false")
        << '\n';
    return out.str();
}

}  // namespace dlr::eval
