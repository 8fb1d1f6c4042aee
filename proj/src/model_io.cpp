#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "dlr/errors.hpp"
#include "dlr/forecaster.hpp"

namespace dlr::forecast {

using nlohmann::json;

namespace {

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        const auto row = m.row(r);
        rows.push_back(json(std::vector<double>(row.begin(), row.end())));
    }
    return rows;
}

json vector_to_json(const Matrix& m) { return json(m.data()); }

Matrix matrix_from_json(const json& j, std::size_t rows, std::size_t cols, const char* name) {
    if (!j.is_array() || j.size() != rows) {
        throw DataError(std::string("model weights '") + name + "': expected " +
                        std::to_string(rows) + " rows");
    }
    Matrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        const json& row = j[r];
        if (!row.is_array() || row.size() != cols) {
            throw DataError(std::string("model weights '") + name + "': row " +
                            std::to_string(r) + " must have " + std::to_string(cols) + " values");
        }
        for (std::size_t c = 0; c < cols; ++c) {
            if (!row[c].is_number()) {
                throw DataError(std::string("model weights '") + name + "': non-numeric entry");
            }
            m(r, c) = row[c].get<double>();
        }
    }
    if (!m.all_finite()) throw DataError(std::string("model weights '") + name + "' not finite");
    return m;
}

Matrix vector_from_json(const json& j, std::size_t cols, const char* name) {
    if (!j.is_array() || j.size() != cols) {
        throw DataError(std::string("model weights '") + name + "': expected " +
                        std::to_string(cols) + " values");
    }
    Matrix m(1, cols);
    for (std::size_t c = 0; c < cols; ++c) {
        if (!j[c].is_number()) {
            throw DataError(std::string("model weights '") + name + "': non-numeric entry");
        }
        m(0, c) = j[c].get<double>();
    }
    if (!m.all_finite()) throw DataError(std::string("model weights '") + name + "' not finite");
    return m;
}

}  // namespace

std::string serialize_model(const Model& model) {
    model.validate();
    const ModelConfig& cfg = model.config;
    json doc;
    doc["version"] = kModelFormatVersion;
    doc["case"] = static_cast<int>(cfg.case_tag);
    doc["config"] = {
        {"window_len", cfg.window_len},
        {"hidden_dim", cfg.hidden_dim},
        {"key_dim", cfg.hidden_dim},
        {"value_dim", cfg.hidden_dim},
        {"epochs", cfg.epochs},
        {"learning_rate", cfg.learning_rate},
        {"batch_size", cfg.batch_size},
        {"seed", cfg.seed},
        {"early_stop_patience", cfg.early_stop_patience},
        {"shuffle", cfg.shuffle},
        {"train_frac", cfg.train_frac},
    };

    json names = json::array();
    for (data::Feature f : data::case_features(cfg.case_tag)) {
        names.push_back(std::string(data::feature_name(f)));
    }
    doc["feature_names"] = names;

    json stats = json::array();
    for (const auto& s : model.normalizer.all()) {
        stats.push_back({{"name", std::string(data::feature_name(s.feature))},
                         {"mean", s.mean},
                         {"std", s.std}});
    }
    doc["normalizer"] = {{"fitted_count", model.normalizer.fitted_count()}, {"features", stats}};

    json weights;
    weights["lstm"] = {
        {"W_i", matrix_to_json(model.lstm.w_i)}, {"W_f", matrix_to_json(model.lstm.w_f)},
        {"W_o", matrix_to_json(model.lstm.w_o)}, {"W_g", matrix_to_json(model.lstm.w_g)},
        {"b_i", vector_to_json(model.lstm.b_i)}, {"b_f", vector_to_json(model.lstm.b_f)},
        {"b_o", vector_to_json(model.lstm.b_o)}, {"b_g", vector_to_json(model.lstm.b_g)},
    };
    if (model.attention) {
        weights["attention"] = {
            {"W_q", matrix_to_json(model.attention->w_q)},
            {"W_k", matrix_to_json(model.attention->w_k)},
            {"W_v", matrix_to_json(model.attention->w_v)},
        };
    }
    weights["head"] = {{"W", matrix_to_json(model.head_w)}, {"b", model.head_b(0, 0)}};
    doc["weights"] = weights;

    const TrainingMetadata& md = model.metadata;
    doc["metadata"] = {
        {"epochs_run", md.epochs_run},
        {"best_epoch", md.best_epoch},
        {"final_train_mse", md.final_train_mse},
        {"best_val_mse", md.best_val_mse},
        {"data_fingerprint", md.data_fingerprint},
        {"wall_time_s", md.wall_time_s},
    };
    return doc.dump(1) + "\n";
}

Model deserialize_model(const std::string& content) {
    json doc;
    try {
        doc = json::parse(content);
    } catch (const json::exception& e) {
        throw DataError(std::string("model file does not parse: ") + e.what());
    }

    try {
        if (!doc.is_object() || !doc.contains("version")) {
            throw DataError("model file has no version field");
        }
        const int version = doc.at("version").get<int>();
        if (version != kModelFormatVersion) {
            throw DataError("unsupported model file version " + std::to_string(version) +
                            " (expected " + std::to_string(kModelFormatVersion) + ")");
        }

        Model model;
        ModelConfig& cfg = model.config;
        const auto case_tag = data::case_from_int(doc.at("case").get<int>());
        if (!case_tag) throw DataError("model file case must be 1 or 2");
        cfg.case_tag = *case_tag;
        const json& c = doc.at("config");
        cfg.window_len = c.at("window_len").get<std::size_t>();
        cfg.hidden_dim = c.at("hidden_dim").get<std::size_t>();
        if (c.at("key_dim").get<std::size_t>() != cfg.hidden_dim ||
            c.at("value_dim").get<std::size_t>() != cfg.hidden_dim) {
            throw DataError("model file key_dim and value_dim must equal hidden_dim");
        }
        cfg.epochs = c.at("epochs").get<int>();
        cfg.learning_rate = c.at("learning_rate").get<double>();
        cfg.batch_size = c.at("batch_size").get<std::size_t>();
        cfg.seed = c.at("seed").get<std::uint64_t>();
        cfg.early_stop_patience = c.at("early_stop_patience").get<int>();
        cfg.shuffle = c.at("shuffle").get<bool>();
        cfg.train_frac = c.at("train_frac").get<double>();
        cfg.validate();

        const auto expected = data::case_features(cfg.case_tag);
        const json& names = doc.at("feature_names");
        if (!names.is_array() || names.size() != expected.size()) {
            throw DataError("model file feature_names do not match case " +
                            std::to_string(static_cast<int>(cfg.case_tag)));
        }
        for (std::size_t i = 0; i < expected.size(); ++i) {
            if (names[i].get<std::string>() != data::feature_name(expected[i])) {
                throw DataError("model file feature_names out of order at index " +
                                std::to_string(i));
            }
        }

        std::vector<data::FeatureStats> stats;
        const json& norm = doc.at("normalizer");
        for (const json& s : norm.at("features")) {
            const auto feature = data::feature_from_name(s.at("name").get<std::string>());
            if (!feature) throw DataError("model normalizer names an unknown feature");
            stats.push_back({*feature, s.at("mean").get<double>(), s.at("std").get<double>()});
        }
        model.normalizer =
            data::Normalizer(std::move(stats), norm.at("fitted_count").get<std::size_t>());
        for (data::Feature f : expected) {
            if (!model.normalizer.has(f)) {
                throw DataError("model normalizer lacks " + std::string(data::feature_name(f)));
            }
        }

        const std::size_t d = cfg.input_dim();
        const std::size_t hd = cfg.hidden_dim;
        const json& w = doc.at("weights");
        const json& l = w.at("lstm");
        model.lstm.input_dim = d;
        model.lstm.hidden_dim = hd;
        model.lstm.w_i = matrix_from_json(l.at("W_i"), d + hd, hd, "W_i");
        model.lstm.w_f = matrix_from_json(l.at("W_f"), d + hd, hd, "W_f");
        model.lstm.w_o = matrix_from_json(l.at("W_o"), d + hd, hd, "W_o");
        model.lstm.w_g = matrix_from_json(l.at("W_g"), d + hd, hd, "W_g");
        model.lstm.b_i = vector_from_json(l.at("b_i"), hd, "b_i");
        model.lstm.b_f = vector_from_json(l.at("b_f"), hd, "b_f");
        model.lstm.b_o = vector_from_json(l.at("b_o"), hd, "b_o");
        model.lstm.b_g = vector_from_json(l.at("b_g"), hd, "b_g");

        if (cfg.case_tag == data::Case::Multivariate) {
            const json& a = w.at("attention");
            nn::AttentionParams ap;
            ap.hidden_dim = ap.key_dim = ap.value_dim = hd;
            ap.w_q = matrix_from_json(a.at("W_q"), hd, hd, "W_q");
            ap.w_k = matrix_from_json(a.at("W_k"), hd, hd, "W_k");
            ap.w_v = matrix_from_json(a.at("W_v"), hd, hd, "W_v");
            model.attention = std::move(ap);
        } else if (w.contains("attention")) {
            throw DataError("univariate model file must not contain attention weights");
        }

        const json& head = w.at("head");
        model.head_w = matrix_from_json(head.at("W"), model.head_width(), 1, "head.W");
        const double b = head.at("b").get<double>();
        if (!std::isfinite(b)) throw DataError("model head bias is not finite");
        model.head_b = Matrix(1, 1, b);

        const json& md = doc.at("metadata");
        model.metadata.epochs_run = md.at("epochs_run").get<int>();
        model.metadata.best_epoch = md.at("best_epoch").get<int>();
        model.metadata.final_train_mse = md.at("final_train_mse").get<double>();
        model.metadata.best_val_mse = md.at("best_val_mse").get<double>();
        model.metadata.data_fingerprint = md.at("data_fingerprint").get<std::string>();
        model.metadata.wall_time_s = md.at("wall_time_s").get<double>();

        model.validate();
        return model;
    } catch (const json::exception& e) {
        throw DataError(std::string("malformed model file: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw DataError(std::string("inconsistent model file: ") + e.what());
    }
}

void save_model(const Model& model, const std::filesystem::path& path) {
    const std::string content = serialize_model(model);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write model file " + path.string());
    out << content;
    if (!out) throw DataError("write failed for model file " + path.string());
}

Model load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open model file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return deserialize_model(ss.str());
}

}  // namespace dlr::forecast
