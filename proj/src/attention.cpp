#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "dlr/nn.hpp"

namespace dlr::nn {

Matrix softmax_rows(const Matrix& m) {
    Matrix out(m.rows(), m.cols());
    for (std::size_t r = 0; r < m.rows(); ++r) {
        const auto in = m.row(r);
        auto o = out.row(r);
        const double mx = *std::max_element(in.begin(), in.end());
        double sum = 0.0;
        for (std::size_t c = 0; c < in.size(); ++c) {
            o[c] = std::exp(in[c] - mx);
            sum += o[c];
        }
        for (double& v : o) v /= sum;
    }
    return out;
}

AttentionParams AttentionParams::zeros(std::size_t hidden_dim, std::size_t key_dim,
                                       std::size_t value_dim) {
    AttentionParams p;
    p.hidden_dim = hidden_dim;
    p.key_dim = key_dim;
    p.value_dim = value_dim;
    p.w_q = Matrix(hidden_dim, key_dim);
    p.w_k = Matrix(hidden_dim, key_dim);
    p.w_v = Matrix(hidden_dim, value_dim);
    return p;
}

void AttentionParams::validate() const {
    if (hidden_dim < 1 || key_dim < 1 || value_dim < 1) {
        throw std::invalid_argument("attention: dimensions must be >= 1");
    }
    if (w_q.rows() != hidden_dim || w_q.cols() != key_dim || w_k.rows() != hidden_dim ||
        w_k.cols() != key_dim || w_v.rows() != hidden_dim || w_v.cols() != value_dim) {
        throw std::invalid_argument("attention: projection shapes do not match dimensions");
    }
}

std::array<Matrix*, 3> AttentionParams::tensors() { return {&w_q, &w_k, &w_v}; }

std::array<const Matrix*, 3> AttentionParams::tensors() const { return {&w_q, &w_k, &w_v}; }

AttentionOutput attention_forward(const Matrix& h_seq, const Matrix& h_last,
                                  const AttentionParams& p) {
    p.validate();
    if (h_seq.rows() < 1 || h_seq.cols() != p.hidden_dim) {
        throw std::invalid_argument("attention_forward: h_seq must be n x " +
                                    std::to_string(p.hidden_dim));
    }
    if (h_last.rows() != 1 || h_last.cols() != p.hidden_dim) {
        throw std::invalid_argument("attention_forward: h_last must be 1 x " +
                                    std::to_string(p.hidden_dim));
    }

    AttentionOutput out;
    AttentionTape& tape = out.tape;
    tape.h_seq = h_seq;
    tape.h_last = h_last;
    tape.q = matmul(h_last, p.w_q);
    tape.k = matmul(h_seq, p.w_k);
    tape.v = matmul(h_seq, p.w_v);

    Matrix scores = matmul_nt(tape.q, tape.k);
    scores *= 1.0 / std::sqrt(static_cast<double>(p.key_dim));
    tape.weights = softmax_rows(scores);
    out.context = matmul(tape.weights, tape.v);
    return out;
}

AttentionGrads attention_backward(const Matrix& d_context, const AttentionTape& tape,
                                  const AttentionParams& p) {
    p.validate();
    const std::size_t n = tape.h_seq.rows();
    if (tape.h_seq.cols() != p.hidden_dim || tape.q.cols() != p.key_dim ||
        tape.k.rows() != n || tape.k.cols() != p.key_dim || tape.v.rows() != n ||
        tape.v.cols() != p.value_dim || tape.weights.rows() != 1 || tape.weights.cols() != n) {
        throw std::invalid_argument("attention_backward: tape does not match the parameters");
    }
    if (d_context.rows() != 1 || d_context.cols() != p.value_dim) {
        throw std::invalid_argument("attention_backward: d_context must be 1 x d_v");
    }

    const double scale = 1.0 / std::sqrt(static_cast<double>(p.key_dim));
    const Matrix& a = tape.weights;

    // context = a V
    const Matrix d_a = matmul_nt(d_context, tape.v);  // 1 x n
    const Matrix d_v = matmul_tn(a, d_context);       // n x d_v

    // Softmax Jacobian: ds_j = a_j (da_j - sum_k a_k da_k)
    double dot = 0.0;
    for (std::size_t j = 0; j < n; ++j) dot += a(0, j) * d_a(0, j);
    Matrix d_scores(1, n);
    for (std::size_t j = 0; j < n; ++j) d_scores(0, j) = a(0, j) * (d_a(0, j) - dot) * scale;

    // scores = Q K^T (scale folded into d_scores)
    const Matrix d_q = matmul(d_scores, tape.k);     // 1 x d_k
    const Matrix d_k = matmul_tn(d_scores, tape.q);  // n x d_k

    AttentionGrads g;
    g.d_params.hidden_dim = p.hidden_dim;
    g.d_params.key_dim = p.key_dim;
    g.d_params.value_dim = p.value_dim;
    g.d_params.w_q = matmul_tn(tape.h_last, d_q);
    g.d_params.w_k = matmul_tn(tape.h_seq, d_k);
    g.d_params.w_v = matmul_tn(tape.h_seq, d_v);
    g.d_h_last = matmul_nt(d_q, p.w_q);
    g.d_h_seq = matmul_nt(d_k, p.w_k);
    g.d_h_seq += matmul_nt(d_v, p.w_v);
    return g;
}

}  // namespace dlr::nn
