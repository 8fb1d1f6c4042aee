#pragma once

// Test-set metrics on denormalized amps.
//
//   mse = mean((pred - actual)^2)
//   mae = mean(|pred - actual|)
//   r^2 = 1 - SS_res / SS_tot,  SS_tot taken about mean(actual)
//   accuracy_pct = 100 * r^2

#include <iosfwd>
#include <span>
#include <string>

#include "dlr/dataset.hpp"
#include "dlr/forecaster.hpp"

namespace dlr::eval {

double mse(std::span<const double> pred, std::span<const double> actual);
double mae(std::span<const double> pred, std::span<const double> actual);
/// Throws DataError when `actual` has zero variance.
double r_squared(std::span<const double> pred, std::span<const double> actual);

struct MetricsReport {
    data::Case case_tag = data::Case::Univariate;
    std::size_t n_samples = 0;
    double mse = 0.0;
    double mae = 0.0;
    double r_squared = 0.0;
    double accuracy_pct = 0.0;

    friend bool operator==(const MetricsReport&, const MetricsReport&) = default;
};

MetricsReport compute_report(data::Case case_tag, std::span<const double> pred,
                             std::span<const double> actual);

/// Windows `test` with the model's normalizer and window length and scores
/// every one-step forecast against the recorded dlr_a.
MetricsReport evaluate(const forecast::Model& model, const data::TimeSeries& test);

/// key=value lines: case, n_samples, mse, mae, r_squared, accuracy_pct.
std::string format_report(const MetricsReport& r);
MetricsReport parse_report(const std::string& content);

/// Pairs a univariate and a multivariate report, with case1./case2. prefixes
/// and the direction of each difference.
std::string format_comparison(const MetricsReport& case1, const MetricsReport& case2);

}  // namespace dlr::eval
