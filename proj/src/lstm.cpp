#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "dlr/errors.hpp"
#include "dlr/nn.hpp"

namespace dlr::nn {

namespace {

void expect_shape(const Matrix& m, std::size_t rows, std::size_t cols, const char* name) {
    if (m.rows() != rows || m.cols() != cols) {
        throw std::invalid_argument(std::string("LSTM: ") + name + " is " +
                                    std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                                    ", expected " + std::to_string(rows) + "x" +
                                    std::to_string(cols));
    }
}

}  // namespace

double sigmoid(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

void init_uniform(Matrix& m, SplitMix64& rng, std::size_t fan_in) {
    const double s = 1.0 / std::sqrt(static_cast<double>(fan_in));
    for (double& v : m.data()) v = rng.uniform(-s, s);
}

LstmParams LstmParams::zeros(std::size_t input_dim, std::size_t hidden_dim) {
    LstmParams p;
    p.input_dim = input_dim;
    p.hidden_dim = hidden_dim;
    const std::size_t rows = input_dim + hidden_dim;
    for (Matrix* w : {&p.w_i, &p.w_f, &p.w_o, &p.w_g}) *w = Matrix(rows, hidden_dim);
    for (Matrix* b : {&p.b_i, &p.b_f, &p.b_o, &p.b_g}) *b = Matrix(1, hidden_dim);
    return p;
}

void LstmParams::validate() const {
    if (input_dim < 1 || hidden_dim < 1) {
        throw std::invalid_argument("LSTM: input and hidden dimensions must be >= 1");
    }
    const std::size_t rows = input_dim + hidden_dim;
    expect_shape(w_i, rows, hidden_dim, "W_i");
    expect_shape(w_f, rows, hidden_dim, "W_f");
    expect_shape(w_o, rows, hidden_dim, "W_o");
    expect_shape(w_g, rows, hidden_dim, "W_g");
    expect_shape(b_i, 1, hidden_dim, "b_i");
    expect_shape(b_f, 1, hidden_dim, "b_f");
    expect_shape(b_o, 1, hidden_dim, "b_o");
    expect_shape(b_g, 1, hidden_dim, "b_g");
}

std::array<Matrix*, 8> LstmParams::tensors() {
    return {&w_i, &w_f, &w_o, &w_g, &b_i, &b_f, &b_o, &b_g};
}

std::array<const Matrix*, 8> LstmParams::tensors() const {
    return {&w_i, &w_f, &w_o, &w_g, &b_i, &b_f, &b_o, &b_g};
}

LstmOutput lstm_forward(const Matrix& x_seq, const LstmParams& p) {
    p.validate();
    if (x_seq.cols() != p.input_dim || x_seq.rows() < 1) {
        throw std::invalid_argument("lstm_forward: input is " + std::to_string(x_seq.rows()) +
                                    "x" + std::to_string(x_seq.cols()) +
                                    ", expected n x " + std::to_string(p.input_dim));
    }
    const std::size_t n = x_seq.rows();
    const std::size_t d = p.input_dim;
    const std::size_t hd = p.hidden_dim;

    LstmOutput out;
    LstmTape& tape = out.tape;
    tape.input_dim = d;
    tape.hidden_dim = hd;
    tape.concat = Matrix(n, d + hd);
    for (Matrix* m : {&tape.gate_i, &tape.gate_f, &tape.gate_o, &tape.gate_g, &tape.cell,
                      &tape.tanh_cell, &out.h_seq}) {
        *m = Matrix(n, hd);
    }

    std::vector<double> a_i(hd), a_f(hd), a_o(hd), a_g(hd);
    for (std::size_t t = 0; t < n; ++t) {
        auto z = tape.concat.row(t);
        for (std::size_t j = 0; j < d; ++j) z[j] = x_seq(t, j);
        for (std::size_t j = 0; j < hd; ++j) z[d + j] = t > 0 ? out.h_seq(t - 1, j) : 0.0;

        for (std::size_t j = 0; j < hd; ++j) {
            a_i[j] = p.b_i(0, j);
            a_f[j] = p.b_f(0, j);
            a_o[j] = p.b_o(0, j);
            a_g[j] = p.b_g(0, j);
        }
        accumulate_vec_mat(z, p.w_i, a_i);
        accumulate_vec_mat(z, p.w_f, a_f);
        accumulate_vec_mat(z, p.w_o, a_o);
        accumulate_vec_mat(z, p.w_g, a_g);

        for (std::size_t j = 0; j < hd; ++j) {
            const double i = sigmoid(a_i[j]);
            const double f = sigmoid(a_f[j]);
            const double o = sigmoid(a_o[j]);
            const double g = std::tanh(a_g[j]);
            const double c_prev = t > 0 ? tape.cell(t - 1, j) : 0.0;
            const double c = f * c_prev + i * g;
            const double tc = std::tanh(c);
            tape.gate_i(t, j) = i;
            tape.gate_f(t, j) = f;
            tape.gate_o(t, j) = o;
            tape.gate_g(t, j) = g;
            tape.cell(t, j) = c;
            tape.tanh_cell(t, j) = tc;
            out.h_seq(t, j) = o * tc;
        }
    }
    if (!out.h_seq.all_finite() || !tape.cell.all_finite()) {
        throw NumericalError("lstm_forward: non-finite hidden or cell state (check inputs and "
                             "weights for NaN/Inf)");
    }
    out.h_last = Matrix(1, hd, {out.h_seq.row(n - 1).begin(), out.h_seq.row(n - 1).end()});
    return out;
}

LstmGrads lstm_backward(const Matrix& d_h_seq, const Matrix& d_h_last, const LstmTape& tape,
                        const LstmParams& p) {
    p.validate();
    const std::size_t n = tape.steps();
    const std::size_t d = p.input_dim;
    const std::size_t hd = p.hidden_dim;
    if (tape.input_dim != d || tape.hidden_dim != hd || n == 0 ||
        tape.concat.rows() != n || tape.concat.cols() != d + hd) {
        throw std::invalid_argument("lstm_backward: tape does not match the parameters");
    }
    if (!d_h_seq.empty() && (d_h_seq.rows() != n || d_h_seq.cols() != hd)) {
        throw std::invalid_argument("lstm_backward: d_h_seq shape does not match the tape");
    }
    if (!d_h_last.empty() && (d_h_last.rows() != 1 || d_h_last.cols() != hd)) {
        throw std::invalid_argument("lstm_backward: d_h_last must be 1 x H");
    }

    LstmGrads grads;
    grads.d_x_seq = Matrix(n, d);
    grads.d_params = LstmParams::zeros(d, hd);
    LstmParams& g = grads.d_params;

    std::vector<double> dh_next(hd, 0.0), dc_next(hd, 0.0);
    std::vector<double> da_i(hd), da_f(hd), da_o(hd), da_g(hd);
    std::vector<double> d_concat(d + hd);

    for (std::size_t step = n; step-- > 0;) {
        for (std::size_t j = 0; j < hd; ++j) {
            double dh = dh_next[j];
            if (!d_h_seq.empty()) dh += d_h_seq(step, j);
            if (step == n - 1 && !d_h_last.empty()) dh += d_h_last(0, j);

            const double i = tape.gate_i(step, j);
            const double f = tape.gate_f(step, j);
            const double o = tape.gate_o(step, j);
            const double gg = tape.gate_g(step, j);
            const double tc = tape.tanh_cell(step, j);
            const double c_prev = step > 0 ? tape.cell(step - 1, j) : 0.0;

            const double dc = dh * o * (1.0 - tc * tc) + dc_next[j];
            da_o[j] = dh * tc * o * (1.0 - o);
            da_i[j] = dc * gg * i * (1.0 - i);
            da_f[j] = dc * c_prev * f * (1.0 - f);
            da_g[j] = dc * i * (1.0 - gg * gg);
            dc_next[j] = dc * f;
        }

        const auto z = tape.concat.row(step);
        accumulate_outer(z, da_i, g.w_i);
        accumulate_outer(z, da_f, g.w_f);
        accumulate_outer(z, da_o, g.w_o);
        accumulate_outer(z, da_g, g.w_g);
        for (std::size_t j = 0; j < hd; ++j) {
            g.b_i(0, j) += da_i[j];
            g.b_f(0, j) += da_f[j];
            g.b_o(0, j) += da_o[j];
            g.b_g(0, j) += da_g[j];
        }

        std::fill(d_concat.begin(), d_concat.end(), 0.0);
        accumulate_mat_vec(p.w_i, da_i, d_concat);
        accumulate_mat_vec(p.w_f, da_f, d_concat);
        accumulate_mat_vec(p.w_o, da_o, d_concat);
        accumulate_mat_vec(p.w_g, da_g, d_concat);
        for (std::size_t j = 0; j < d; ++j) grads.d_x_seq(step, j) = d_concat[j];
        for (std::size_t j = 0; j < hd; ++j) dh_next[j] = d_concat[d + j];
    }
    return grads;
}

}  // namespace dlr::nn
