#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "dlr/nn.hpp"

namespace dlr::nn {

LossResult mse_loss(std::span<const double> pred, std::span<const double> target) {
    if (pred.size() != target.size()) {
        throw std::invalid_argument("mse_loss: length mismatch " + std::to_string(pred.size()) +
                                    " vs " + std::to_string(target.size()));
    }
    if (pred.empty()) throw std::invalid_argument("mse_loss: empty input");
    const auto n = static_cast<double>(pred.size());
    LossResult r;
    r.d_pred.resize(pred.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double diff = pred[i] - target[i];
        sum += diff * diff;
        r.d_pred[i] = 2.0 * diff / n;
    }
    r.loss = sum / n;
    return r;
}

AdamState adam_init(std::span<const Matrix* const> params) {
    AdamState s;
    for (const Matrix* p : params) {
        s.m.emplace_back(p->rows(), p->cols());
        s.v.emplace_back(p->rows(), p->cols());
    }
    return s;
}

void adam_step(std::span<Matrix* const> params, std::span<const Matrix* const> grads,
               AdamState& state, std::int64_t t, const AdamConfig& cfg) {
    if (params.size() != grads.size() || params.size() != state.m.size() ||
        params.size() != state.v.size()) {
        throw std::invalid_argument("adam_step: parameter, gradient and state counts differ");
    }
    if (t < 1) throw std::invalid_argument("adam_step: step index must be >= 1");
    for (std::size_t k = 0; k < params.size(); ++k) {
        if (!params[k]->same_shape(*grads[k]) || !params[k]->same_shape(state.m[k]) ||
            !params[k]->same_shape(state.v[k])) {
            throw std::invalid_argument("adam_step: shape mismatch in tensor " + std::to_string(k));
        }
    }

    const double td = static_cast<double>(t);
    const double bc1 = 1.0 - std::pow(cfg.beta1, td);
    const double bc2 = 1.0 - std::pow(cfg.beta2, td);
    for (std::size_t k = 0; k < params.size(); ++k) {
        auto& w = params[k]->data();
        const auto& g = grads[k]->data();
        auto& m = state.m[k].data();
        auto& v = state.v[k].data();
        for (std::size_t i = 0; i < w.size(); ++i) {
            m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * g[i];
            v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * g[i] * g[i];
            const double m_hat = m[i] / bc1;
            const double v_hat = v[i] / bc2;
            w[i] -= cfg.learning_rate * m_hat / (std::sqrt(v_hat) + cfg.epsilon);
        }
    }
}

GradCheckResult gradient_check(const std::function<double()>& loss,
                               std::span<Matrix* const> params,
                               std::span<const Matrix* const> analytic, double eps) {
    if (params.size() != analytic.size()) {
        throw std::invalid_argument("gradient_check: parameter/gradient count mismatch");
    }
    GradCheckResult result;
    for (std::size_t k = 0; k < params.size(); ++k) {
        if (!params[k]->same_shape(*analytic[k])) {
            throw std::invalid_argument("gradient_check: shape mismatch in tensor " +
                                        std::to_string(k));
        }
        auto& w = params[k]->data();
        for (std::size_t i = 0; i < w.size(); ++i) {
            const double saved = w[i];
            w[i] = saved + eps;
            const double up = loss();
            w[i] = saved - eps;
            const double down = loss();
            w[i] = saved;

            const double numeric = (up - down) / (2.0 * eps);
            const double a = analytic[k]->data()[i];
            const double denom = std::max({std::abs(a), std::abs(numeric), 1e-8});
            const double rel = std::abs(a - numeric) / denom;
            ++result.coordinates;
            if (rel > result.max_rel_error) {
                result.max_rel_error = rel;
                result.tensor = k;
                result.index = i;
            }
        }
    }
    return result;
}

}  // namespace dlr::nn
