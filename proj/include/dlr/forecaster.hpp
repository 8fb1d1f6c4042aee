#pragma once

// One-step-ahead DLR forecasters.
//
//   Univariate:   window (n x 1)  -> LSTM -> h_last                      -> dense -> y
//   Multivariate: window (n x 6)  -> LSTM -> [h_last; attention(h_seq)]  -> dense -> y
//
// y is a normalized dlr_a value; predict() maps it back to amps with the
// model's stored normalizer.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dlr/dataset.hpp"
#include "dlr/matrix.hpp"
#include "dlr/nn.hpp"

namespace dlr::forecast {

inline constexpr int kModelFormatVersion = 1;

struct ModelConfig {
    data::Case case_tag = data::Case::Univariate;
    std::size_t window_len = 16;
    std::size_t hidden_dim = 32;
    int epochs = 200;
    double learning_rate = 1e-3;
    std::size_t batch_size = 32;
    std::uint64_t seed = 42;
    int early_stop_patience = 20;
    /// Shuffle batch order each epoch with a generator seeded from `seed`.
    bool shuffle = false;
    /// Fraction of the series used for training; the tail is the test set.
    double train_frac = 0.8;

    std::size_t input_dim() const { return data::case_features(case_tag).size(); }

    /// Throws std::invalid_argument naming the violated invariant.
    void validate() const;

    friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

struct TrainingMetadata {
    int epochs_run = 0;
    int best_epoch = 0;
    double final_train_mse = 0.0;
    double best_val_mse = 0.0;
    std::string data_fingerprint;
    /// Excluded from determinism comparisons.
    double wall_time_s = 0.0;

    friend bool operator==(const TrainingMetadata&, const TrainingMetadata&) = default;
};

struct Model {
    ModelConfig config;
    nn::LstmParams lstm;
    std::optional<nn::AttentionParams> attention;  // multivariate only
    Matrix head_w;                                  // head_width() x 1
    Matrix head_b;                                  // 1 x 1
    data::Normalizer normalizer;
    TrainingMetadata metadata;

    /// H for the univariate model, 2H when the context vector is appended.
    std::size_t head_width() const;

    std::vector<Matrix*> parameters();
    std::vector<const Matrix*> parameters() const;

    /// Throws std::invalid_argument on any shape or case inconsistency.
    void validate() const;

    friend bool operator==(const Model&, const Model&) = default;
};

/// Gradients laid out like Model::parameters().
struct ModelGrads {
    nn::LstmParams lstm;
    std::optional<nn::AttentionParams> attention;
    Matrix head_w;
    Matrix head_b;

    std::vector<Matrix*> tensors();
    std::vector<const Matrix*> tensors() const;
};

/// Seeded initialization: U(-1/sqrt(fan_in), 1/sqrt(fan_in)) weights, forget
/// bias 1, other biases 0. Draw order: W_i, W_f, W_o, W_g, W_q, W_k, W_v, head.
Model build_model(const ModelConfig& cfg, data::Normalizer normalizer = {});

/// Normalized forecast for one normalized window.
double forward_normalized(const Model& model, const Matrix& window);

/// Forecast in amps for one normalized window.
double predict(const Model& model, const Matrix& window);

struct BatchResult {
    double loss = 0.0;
    ModelGrads grads;
};

/// MSE over the batch and its exact gradient with respect to every parameter.
BatchResult loss_and_gradients(const Model& model, std::span<const Matrix> inputs,
                               std::span<const double> targets);

struct EpochStats {
    int epoch = 0;  // 1-based
    double train_mse = 0.0;
    double val_mse = 0.0;
};

struct TrainReport {
    std::vector<double> train_mse;  // mean batch loss per epoch
    std::vector<double> val_mse;    // after each epoch
    int epochs_run = 0;
    int best_epoch = 0;
    double best_val_mse = 0.0;
    double wall_time_s = 0.0;
};

struct TrainResult {
    Model model;
    TrainReport report;
};

/// Mini-batch Adam on normalized targets. The chronologically last 10% of
/// windows are held out for early stopping; the best-validation parameters
/// are returned. Throws NumericalError on a non-finite loss.
TrainResult train(Model model, const data::WindowedDataset& ds,
                  const std::function<void(const EpochStats&)>& on_epoch = {});

/// FNV-1a over the windows and targets, as 16 hex digits.
std::string fingerprint(const data::WindowedDataset& ds);

struct Forecast {
    data::Timestamp timestamp;
    double dlr_a;
};

/// One forecast per window of `ts`, stamped with the target record's time.
std::vector<Forecast> forecast_series(const Model& model, const data::TimeSeries& ts);

inline constexpr std::string_view kForecastCsvHeader = "timestamp,dlr_a_forecast";

void write_forecast_csv(std::span<const Forecast> forecasts, std::ostream& out);
void write_forecast_csv(std::span<const Forecast> forecasts, const std::filesystem::path& path);
std::vector<Forecast> parse_forecast_csv(std::istream& in, const std::string& source);
std::vector<Forecast> read_forecast_csv(const std::filesystem::path& path);

void save_model(const Model& model, const std::filesystem::path& path);
std::string serialize_model(const Model& model);
/// Throws DataError on version mismatch, parse failure, or inconsistent shapes.
Model load_model(const std::filesystem::path& path);
Model deserialize_model(const std::string& text);

}  // namespace dlr::forecast
