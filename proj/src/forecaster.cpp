#include "dlr/forecaster.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <utility>

#include "dlr/errors.hpp"
#include "dlr/rng.hpp"

namespace dlr::forecast {

namespace {

constexpr double kValidationFraction = 0.1;

struct SampleTape {
    nn::LstmOutput lstm;
    std::optional<nn::AttentionOutput> attention;
    std::vector<double> features;  // [h_last; context]
};

SampleTape forward_sample(const Model& model, const Matrix& window) {
    SampleTape s;
    s.lstm = nn::lstm_forward(window, model.lstm);
    const auto h_last = s.lstm.h_last.row(0);
    s.features.assign(h_last.begin(), h_last.end());
    if (model.attention) {
        s.attention = nn::attention_forward(s.lstm.h_seq, s.lstm.h_last, *model.attention);
        const auto ctx = s.attention->context.row(0);
        s.features.insert(s.features.end(), ctx.begin(), ctx.end());
    }
    return s;
}

double head_output(const Model& model, std::span<const double> features) {
    double y = model.head_b(0, 0);
    for (std::size_t j = 0; j < features.size(); ++j) y += features[j] * model.head_w(j, 0);
    return y;
}

void check_window(const Model& model, const Matrix& window) {
    const auto& cfg = model.config;
    if (window.rows() != cfg.window_len || window.cols() != cfg.input_dim()) {
        throw std::invalid_argument(
            "window is " + std::to_string(window.rows()) + "x" + std::to_string(window.cols()) +
            " but the case " + std::to_string(static_cast<int>(cfg.case_tag)) + " model expects " +
            std::to_string(cfg.window_len) + "x" + std::to_string(cfg.input_dim()));
    }
}

ModelGrads zero_grads(const Model& model) {
    ModelGrads g;
    g.lstm = nn::LstmParams::zeros(model.lstm.input_dim, model.lstm.hidden_dim);
    if (model.attention) {
        g.attention = nn::AttentionParams::zeros(model.attention->hidden_dim,
                                                 model.attention->key_dim,
                                                 model.attention->value_dim);
    }
    g.head_w = Matrix(model.head_w.rows(), 1);
    g.head_b = Matrix(1, 1);
    return g;
}

void add_params(nn::LstmParams& acc, const nn::LstmParams& g) {
    auto a = acc.tensors();
    const auto b = g.tensors();
    for (std::size_t k = 0; k < a.size(); ++k) *a[k] += *b[k];
}

void add_params(nn::AttentionParams& acc, const nn::AttentionParams& g) {
    auto a = acc.tensors();
    const auto b = g.tensors();
    for (std::size_t k = 0; k < a.size(); ++k) *a[k] += *b[k];
}

double mean_squared_error(const Model& model, std::span<const Matrix> inputs,
                          std::span<const double> targets) {
    double sum = 0.0;
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        const double diff = forward_normalized(model, inputs[i]) - targets[i];
        sum += diff * diff;
    }
    return sum / static_cast<double>(inputs.size());
}

}  // namespace

void ModelConfig::validate() const {
    if (case_tag != data::Case::Univariate && case_tag != data::Case::Multivariate) {
        throw std::invalid_argument("case must be 1 or 2");
    }
    if (window_len < 2) throw std::invalid_argument("window length must be >= 2");
    if (hidden_dim < 1) throw std::invalid_argument("hidden dimension must be >= 1");
    if (epochs < 1) throw std::invalid_argument("epochs must be >= 1");
    if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
        throw std::invalid_argument("learning rate must be > 0");
    }
    if (batch_size < 1) throw std::invalid_argument("batch size must be >= 1");
    if (early_stop_patience < 1) throw std::invalid_argument("patience must be >= 1");
    if (!(train_frac > 0.0 && train_frac < 1.0)) {
        throw std::invalid_argument("train fraction must lie in (0, 1)");
    }
}

std::size_t Model::head_width() const {
    return config.hidden_dim * (config.case_tag == data::Case::Multivariate ? 2 : 1);
}

std::vector<Matrix*> Model::parameters() {
    std::vector<Matrix*> out;
    for (Matrix* m : lstm.tensors()) out.push_back(m);
    if (attention) {
        for (Matrix* m : attention->tensors()) out.push_back(m);
    }
    out.push_back(&head_w);
    out.push_back(&head_b);
    return out;
}

std::vector<const Matrix*> Model::parameters() const {
    std::vector<const Matrix*> out;
    for (const Matrix* m : lstm.tensors()) out.push_back(m);
    if (attention) {
        for (const Matrix* m : attention->tensors()) out.push_back(m);
    }
    out.push_back(&head_w);
    out.push_back(&head_b);
    return out;
}

void Model::validate() const {
    config.validate();
    lstm.validate();
    if (lstm.input_dim != config.input_dim() || lstm.hidden_dim != config.hidden_dim) {
        throw std::invalid_argument("LSTM dimensions do not match the model config");
    }
    const bool multivariate = config.case_tag == data::Case::Multivariate;
    if (multivariate != attention.has_value()) {
        throw std::invalid_argument(multivariate ? "multivariate model lacks attention weights"
                                                 : "univariate model must not carry attention");
    }
    if (attention) {
        attention->validate();
        if (attention->hidden_dim != config.hidden_dim ||
            attention->key_dim != config.hidden_dim ||
            attention->value_dim != config.hidden_dim) {
            throw std::invalid_argument("attention dimensions must all equal the hidden size");
        }
    }
    if (head_w.rows() != head_width() || head_w.cols() != 1 || head_b.rows() != 1 ||
        head_b.cols() != 1) {
        throw std::invalid_argument("output head has the wrong shape");
    }
    for (const Matrix* m : parameters()) {
        if (!m->all_finite()) throw std::invalid_argument("model holds non-finite weights");
    }
}

std::vector<Matrix*> ModelGrads::tensors() {
    std::vector<Matrix*> out;
    for (Matrix* m : lstm.tensors()) out.push_back(m);
    if (attention) {
        for (Matrix* m : attention->tensors()) out.push_back(m);
    }
    out.push_back(&head_w);
    out.push_back(&head_b);
    return out;
}

std::vector<const Matrix*> ModelGrads::tensors() const {
    std::vector<const Matrix*> out;
    for (const Matrix* m : lstm.tensors()) out.push_back(m);
    if (attention) {
        for (const Matrix* m : attention->tensors()) out.push_back(m);
    }
    out.push_back(&head_w);
    out.push_back(&head_b);
    return out;
}

Model build_model(const ModelConfig& cfg, data::Normalizer normalizer) {
    cfg.validate();
    Model model;
    model.config = cfg;
    model.normalizer = std::move(normalizer);

    const std::size_t d = cfg.input_dim();
    const std::size_t hd = cfg.hidden_dim;
    SplitMix64 rng(cfg.seed);

    model.lstm = nn::LstmParams::zeros(d, hd);
    for (Matrix* w : {&model.lstm.w_i, &model.lstm.w_f, &model.lstm.w_o, &model.lstm.w_g}) {
        nn::init_uniform(*w, rng, d + hd);
    }
    model.lstm.b_f.fill(1.0);

    if (cfg.case_tag == data::Case::Multivariate) {
        model.attention = nn::AttentionParams::zeros(hd, hd, hd);
        for (Matrix* w : model.attention->tensors()) nn::init_uniform(*w, rng, hd);
    }
    model.head_w = Matrix(model.head_width(), 1);
    nn::init_uniform(model.head_w, rng, model.head_width());
    model.head_b = Matrix(1, 1);
    return model;
}

double forward_normalized(const Model& model, const Matrix& window) {
    check_window(model, window);
    const SampleTape s = forward_sample(model, window);
    return head_output(model, s.features);
}

double predict(const Model& model, const Matrix& window) {
    return model.normalizer.denormalize(data::Feature::Dlr, forward_normalized(model, window));
}

BatchResult loss_and_gradients(const Model& model, std::span<const Matrix> inputs,
                               std::span<const double> targets) {
    if (inputs.size() != targets.size() || inputs.empty()) {
        throw std::invalid_argument("loss_and_gradients: need equal, non-zero counts of inputs "
                                    "and targets");
    }
    std::vector<SampleTape> tapes;
    tapes.reserve(inputs.size());
    std::vector<double> preds;
    preds.reserve(inputs.size());
    for (const Matrix& x : inputs) {
        check_window(model, x);
        tapes.push_back(forward_sample(model, x));
        preds.push_back(head_output(model, tapes.back().features));
    }
    const nn::LossResult loss = nn::mse_loss(preds, targets);

    BatchResult out;
    out.loss = loss.loss;
    out.grads = zero_grads(model);
    ModelGrads& g = out.grads;
    const std::size_t hd = model.config.hidden_dim;

    for (std::size_t s = 0; s < tapes.size(); ++s) {
        const SampleTape& tape = tapes[s];
        const double dy = loss.d_pred[s];
        g.head_b(0, 0) += dy;
        for (std::size_t j = 0; j < tape.features.size(); ++j) {
            g.head_w(j, 0) += tape.features[j] * dy;
        }

        Matrix d_h_last(1, hd);
        for (std::size_t j = 0; j < hd; ++j) d_h_last(0, j) = dy * model.head_w(j, 0);

        Matrix d_h_seq;
        if (model.attention) {
            Matrix d_context(1, hd);
            for (std::size_t j = 0; j < hd; ++j) d_context(0, j) = dy * model.head_w(hd + j, 0);
            nn::AttentionGrads ag =
                nn::attention_backward(d_context, tape.attention->tape, *model.attention);
            add_params(*g.attention, ag.d_params);
            d_h_last += ag.d_h_last;
            d_h_seq = std::move(ag.d_h_seq);
        }
        const nn::LstmGrads lg = nn::lstm_backward(d_h_seq, d_h_last, tape.lstm.tape, model.lstm);
        add_params(g.lstm, lg.d_params);
    }
    return out;
}

std::string fingerprint(const data::WindowedDataset& ds) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](double v) {
        unsigned char bytes[sizeof(double)];
        std::memcpy(bytes, &v, sizeof v);
        for (unsigned char b : bytes) {
            h ^= b;
            h *= 0x100000001b3ULL;
        }
    };
    for (const Matrix& x : ds.inputs) {
        for (double v : x.data()) mix(v);
    }
    for (double t : ds.targets) mix(t);
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

TrainResult train(Model model, const data::WindowedDataset& ds,
                  const std::function<void(const EpochStats&)>& on_epoch) {
    const auto started = std::chrono::steady_clock::now();
    model.validate();
    const ModelConfig& cfg = model.config;
    if (ds.case_tag != cfg.case_tag) {
        throw std::invalid_argument("training data is windowed for case " +
                                    std::to_string(static_cast<int>(ds.case_tag)) +
                                    " but the model is case " +
                                    std::to_string(static_cast<int>(cfg.case_tag)));
    }
    if (ds.window_len != cfg.window_len) {
        throw std::invalid_argument("training windows have length " +
                                    std::to_string(ds.window_len) + ", model expects " +
                                    std::to_string(cfg.window_len));
    }
    if (ds.size() < 2) throw DataError("training needs at least 2 windows");
    model.normalizer = ds.normalizer;

    const std::size_t n_total = ds.size();
    const std::size_t n_val = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::floor(kValidationFraction * static_cast<double>(n_total))));
    const std::size_t n_train = n_total - n_val;
    const std::span<const Matrix> val_inputs(ds.inputs.data() + n_train, n_val);
    const std::span<const double> val_targets(ds.targets.data() + n_train, n_val);

    std::vector<std::size_t> order(n_train);
    std::iota(order.begin(), order.end(), std::size_t{0});
    SplitMix64 shuffle_rng(cfg.seed ^ 0x5DEECE66DULL);

    nn::AdamConfig adam;
    adam.learning_rate = cfg.learning_rate;
    const auto params_view = std::as_const(model).parameters();
    nn::AdamState state = nn::adam_init(params_view);
    std::int64_t step = 0;

    TrainReport report;
    Model best = model;
    double best_val = std::numeric_limits<double>::infinity();

    std::vector<Matrix> batch_inputs;
    std::vector<double> batch_targets;
    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        if (cfg.shuffle) {
            for (std::size_t i = n_train; i > 1; --i) {
                std::swap(order[i - 1], order[shuffle_rng.below(i)]);
            }
        }
        double loss_sum = 0.0;
        std::size_t batches = 0;
        for (std::size_t start = 0; start < n_train; start += cfg.batch_size) {
            const std::size_t end = std::min(n_train, start + cfg.batch_size);
            batch_inputs.clear();
            batch_targets.clear();
            for (std::size_t i = start; i < end; ++i) {
                batch_inputs.push_back(ds.inputs[order[i]]);
                batch_targets.push_back(ds.targets[order[i]]);
            }
            BatchResult br = loss_and_gradients(model, batch_inputs, batch_targets);
            if (!std::isfinite(br.loss)) {
                throw NumericalError("training diverged: non-finite loss at epoch " +
                                     std::to_string(epoch) + ", batch " +
                                     std::to_string(batches + 1));
            }
            const auto grads = std::as_const(br.grads).tensors();
            nn::adam_step(model.parameters(), grads, state, ++step, adam);
            loss_sum += br.loss;
            ++batches;
        }

        const double train_mse = loss_sum / static_cast<double>(batches);
        const double val_mse = mean_squared_error(model, val_inputs, val_targets);
        if (!std::isfinite(val_mse)) {
            throw NumericalError("training diverged: non-finite validation loss at epoch " +
                                 std::to_string(epoch));
        }
        report.train_mse.push_back(train_mse);
        report.val_mse.push_back(val_mse);
        report.epochs_run = epoch;
        if (on_epoch) on_epoch({epoch, train_mse, val_mse});

        if (val_mse < best_val) {
            best_val = val_mse;
            best = model;
            report.best_epoch = epoch;
        } else if (epoch - report.best_epoch >= cfg.early_stop_patience) {
            break;
        }
    }

    report.best_val_mse = best_val;
    report.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

    best.metadata.epochs_run = report.epochs_run;
    best.metadata.best_epoch = report.best_epoch;
    best.metadata.final_train_mse = report.train_mse.back();
    best.metadata.best_val_mse = best_val;
    best.metadata.data_fingerprint = fingerprint(ds);
    best.metadata.wall_time_s = report.wall_time_s;
    return {std::move(best), std::move(report)};
}

std::vector<Forecast> forecast_series(const Model& model, const data::TimeSeries& ts) {
    const data::WindowedDataset ds =
        data::make_windows(ts, model.normalizer, model.config.case_tag, model.config.window_len);
    std::vector<Forecast> out;
    out.reserve(ds.size());
    for (std::size_t k = 0; k < ds.size(); ++k) {
        out.push_back({ts[k + ds.window_len].timestamp, predict(model, ds.inputs[k])});
    }
    return out;
}

}  // namespace dlr::forecast
