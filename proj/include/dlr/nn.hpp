#pragma once

// Hand-written forward/backward passes for a single-layer LSTM, a single
// scaled dot-product attention head, MSE loss and Adam.
//
// LSTM (per step, z = [x_t, h_{t-1}]):
//   i = sigmoid(z W_i + b_i)   f = sigmoid(z W_f + b_f)
//   o = sigmoid(z W_o + b_o)   g = tanh(z W_g + b_g)
//   c_t = f * c_{t-1} + i * g  h_t = o * tanh(c_t)        h_0 = c_0 = 0
//
// Attention over the LSTM's own hidden states:
//   Q = h_last W_q,  K = H W_k,  V = H W_v
//   a = softmax(Q K^T / sqrt(d_k)),  context = a V

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "dlr/matrix.hpp"
#include "dlr/rng.hpp"

namespace dlr::nn {

double sigmoid(double x);

/// Row-wise numerically stable softmax.
Matrix softmax_rows(const Matrix& m);

/// Fills `m` with U(-s, s), s = 1/sqrt(fan_in), drawing row-major from `rng`.
void init_uniform(Matrix& m, SplitMix64& rng, std::size_t fan_in);

// ---------------------------------------------------------------------------
// LSTM

struct LstmParams {
    std::size_t input_dim = 0;
    std::size_t hidden_dim = 0;
    // (input_dim + hidden_dim) x hidden_dim, rows ordered [x; h].
    Matrix w_i, w_f, w_o, w_g;
    // 1 x hidden_dim
    Matrix b_i, b_f, b_o, b_g;

    static LstmParams zeros(std::size_t input_dim, std::size_t hidden_dim);

    /// Throws std::invalid_argument on inconsistent shapes.
    void validate() const;

    std::array<Matrix*, 8> tensors();
    std::array<const Matrix*, 8> tensors() const;

    friend bool operator==(const LstmParams&, const LstmParams&) = default;
};

/// Forward intermediates for one lstm_forward call.
struct LstmTape {
    std::size_t input_dim = 0;
    std::size_t hidden_dim = 0;
    Matrix concat;  // n x (d + H): [x_t, h_{t-1}]
    Matrix gate_i, gate_f, gate_o, gate_g;
    Matrix cell;       // c_t
    Matrix tanh_cell;  // tanh(c_t)

    std::size_t steps() const { return cell.rows(); }
};

struct LstmOutput {
    Matrix h_seq;   // n x H
    Matrix h_last;  // 1 x H
    LstmTape tape;
};

LstmOutput lstm_forward(const Matrix& x_seq, const LstmParams& p);

struct LstmGrads {
    Matrix d_x_seq;
    LstmParams d_params;
};

/// BPTT. `d_h_last` is added to the last row of `d_h_seq`; either may be
/// empty (treated as zero).
LstmGrads lstm_backward(const Matrix& d_h_seq, const Matrix& d_h_last, const LstmTape& tape,
                        const LstmParams& p);

// ---------------------------------------------------------------------------
// Attention

struct AttentionParams {
    std::size_t hidden_dim = 0;
    std::size_t key_dim = 0;
    std::size_t value_dim = 0;
    Matrix w_q;  // H x d_k
    Matrix w_k;  // H x d_k
    Matrix w_v;  // H x d_v

    static AttentionParams zeros(std::size_t hidden_dim, std::size_t key_dim,
                                 std::size_t value_dim);
    void validate() const;

    std::array<Matrix*, 3> tensors();
    std::array<const Matrix*, 3> tensors() const;

    friend bool operator==(const AttentionParams&, const AttentionParams&) = default;
};

struct AttentionTape {
    Matrix h_seq;
    Matrix h_last;
    Matrix q;        // 1 x d_k
    Matrix k;        // n x d_k
    Matrix v;        // n x d_v
    Matrix weights;  // 1 x n
};

struct AttentionOutput {
    Matrix context;  // 1 x d_v
    AttentionTape tape;
};

AttentionOutput attention_forward(const Matrix& h_seq, const Matrix& h_last,
                                  const AttentionParams& p);

struct AttentionGrads {
    Matrix d_h_seq;
    Matrix d_h_last;
    AttentionParams d_params;
};

AttentionGrads attention_backward(const Matrix& d_context, const AttentionTape& tape,
                                  const AttentionParams& p);

// ---------------------------------------------------------------------------
// Loss and optimizer

struct LossResult {
    double loss = 0.0;
    std::vector<double> d_pred;
};

/// mean((pred - target)^2) and its gradient 2 (pred - target) / n.
LossResult mse_loss(std::span<const double> pred, std::span<const double> target);

struct AdamConfig {
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

struct AdamState {
    std::vector<Matrix> m;
    std::vector<Matrix> v;

    friend bool operator==(const AdamState&, const AdamState&) = default;
};

/// Zero moments shaped like `params`.
AdamState adam_init(std::span<const Matrix* const> params);

/// One bias-corrected Adam update at step `t` (1-based), in place.
void adam_step(std::span<Matrix* const> params, std::span<const Matrix* const> grads,
               AdamState& state, std::int64_t t, const AdamConfig& cfg = {});

// ---------------------------------------------------------------------------
// Finite-difference verification

struct GradCheckResult {
    double max_rel_error = 0.0;
    std::size_t tensor = 0;  // location of the worst coordinate
    std::size_t index = 0;
    std::size_t coordinates = 0;
};

/// Central differences of `loss` with respect to every coordinate of
/// `params`, compared with `analytic`. Relative error per coordinate is
/// |a - n| / max(|a|, |n|, 1e-8). Parameters are restored on return.
GradCheckResult gradient_check(const std::function<double()>& loss,
                               std::span<Matrix* const> params,
                               std::span<const Matrix* const> analytic, double eps = 1e-5);

}  // namespace dlr::nn
