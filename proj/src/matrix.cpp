#include "dlr/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace dlr {

namespace {

[[noreturn]] void shape_error(const char* op, const Matrix& a, const Matrix& b) {
    throw std::invalid_argument(std::string(op) + ": shape mismatch " + std::to_string(a.rows()) +
                                "x" + std::to_string(a.cols()) + " vs " +
                                std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows * cols) {
        throw std::invalid_argument("Matrix: data length " + std::to_string(data_.size()) +
                                    " does not match " + std::to_string(rows) + "x" +
                                    std::to_string(cols));
    }
}

void Matrix::fill(double value) { std::fill(data_.begin(), data_.end(), value); }

bool Matrix::all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

Matrix& Matrix::operator+=(const Matrix& other) {
    if (!same_shape(other)) shape_error("operator+=", *this, other);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
    return *this;
}

Matrix& Matrix::operator*=(double s) {
    for (double& v : data_) v *= s;
    return *this;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) shape_error("matmul", a, b);
    Matrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        accumulate_vec_mat(a.row(i), b, out.row(i));
    }
    return out;
}

Matrix matmul_tn(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows()) shape_error("matmul_tn", a, b);
    Matrix out(a.cols(), b.cols());
    for (std::size_t k = 0; k < a.rows(); ++k) {
        accumulate_outer(a.row(k), b.row(k), out);
    }
    return out;
}

Matrix matmul_nt(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.cols()) shape_error("matmul_nt", a, b);
    Matrix out(a.rows(), b.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        accumulate_mat_vec(b, a.row(i), out.row(i));
    }
    return out;
}

Matrix transpose(const Matrix& a) {
    Matrix out(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
    }
    return out;
}

void accumulate_vec_mat(std::span<const double> x, const Matrix& w, std::span<double> out) {
    const std::size_t cols = w.cols();
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double xk = x[k];
        const double* wk = w.data().data() + k * cols;
        for (std::size_t j = 0; j < cols; ++j) out[j] += xk * wk[j];
    }
}

void accumulate_mat_vec(const Matrix& w, std::span<const double> y, std::span<double> out) {
    const std::size_t cols = w.cols();
    for (std::size_t k = 0; k < w.rows(); ++k) {
        const double* wk = w.data().data() + k * cols;
        double acc = 0.0;
        for (std::size_t j = 0; j < cols; ++j) acc += wk[j] * y[j];
        out[k] += acc;
    }
}

void accumulate_outer(std::span<const double> x, std::span<const double> y, Matrix& w) {
    const std::size_t cols = w.cols();
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double xk = x[k];
        double* wk = w.data().data() + k * cols;
        for (std::size_t j = 0; j < cols; ++j) wk[j] += xk * y[j];
    }
}

}  // namespace dlr
