#include "cogl/matrix.hpp"

#include "cogl/errors.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>

namespace cogl {

namespace {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstMap = Eigen::Map<const RowMajor>;
using MutMap = Eigen::Map<RowMajor>;

ConstMap view(const Matrix& m) { return {m.data().data(), Eigen::Index(m.rows()), Eigen::Index(m.cols())}; }
MutMap view(Matrix& m) { return {m.data().data(), Eigen::Index(m.rows()), Eigen::Index(m.cols())}; }

[[noreturn]] void shape_mismatch(const char* op, const Matrix& a, const Matrix& b) {
    throw dimension_error(std::string(op) + ": incompatible shapes " + a.shape_str() + " and " + b.shape_str());
}

} // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows * cols) {
        throw dimension_error("Matrix: data length " + std::to_string(data_.size()) + " does not match " +
                              shape_str());
    }
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) {
            throw dimension_error("Matrix: ragged initializer list");
        }
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

double Matrix::item() const {
    if (rows_ != 1 || cols_ != 1) {
        throw dimension_error("item: expected 1x1, got " + shape_str());
    }
    return data_[0];
}

bool Matrix::all_finite() const noexcept {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

std::string Matrix::shape_str() const { return cogl::shape_str(rows_, cols_); }

std::string shape_str(std::size_t rows, std::size_t cols) {
    return std::to_string(rows) + "x" + std::to_string(cols);
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) {
        shape_mismatch("matmul", a, b);
    }
    Matrix c(a.rows(), b.cols());
    if (c.empty() || a.cols() == 0) {
        return c;
    }
    view(c).noalias() = view(a) * view(b);
    return c;
}

Matrix matmul_tn(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows()) {
        shape_mismatch("matmul_tn", a, b);
    }
    Matrix c(a.cols(), b.cols());
    if (c.empty() || a.rows() == 0) {
        return c;
    }
    view(c).noalias() = view(a).transpose() * view(b);
    return c;
}

Matrix matmul_nt(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.cols()) {
        shape_mismatch("matmul_nt", a, b);
    }
    Matrix c(a.rows(), b.rows());
    if (c.empty() || a.cols() == 0) {
        return c;
    }
    view(c).noalias() = view(a) * view(b).transpose();
    return c;
}

Matrix transpose(const Matrix& a) {
    Matrix t(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            t(j, i) = a(i, j);
        }
    }
    return t;
}

Matrix row_softmax(const Matrix& a) {
    Matrix out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        auto in = a.row(i);
        auto o = out.row(i);
        if (in.empty()) {
            continue;
        }
        const double mx = *std::max_element(in.begin(), in.end());
        double sum = 0.0;
        for (std::size_t j = 0; j < in.size(); ++j) {
            o[j] = std::exp(in[j] - mx);
            sum += o[j];
        }
        for (double& v : o) {
            v /= sum;
        }
    }
    return out;
}

double frobenius_sq(const Matrix& a) {
    double s = 0.0;
    for (double v : a.data()) {
        s += v * v;
    }
    return s;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
    if (!a.same_shape(b)) {
        shape_mismatch("max_abs_diff", a, b);
    }
    double m = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        m = std::max(m, std::abs(a.data()[k] - b.data()[k]));
    }
    return m;
}

void axpy(double s, const Matrix& x, Matrix& y) {
    if (!x.same_shape(y)) {
        shape_mismatch("axpy", x, y);
    }
    auto& yd = y.data();
    const auto& xd = x.data();
    for (std::size_t k = 0; k < yd.size(); ++k) {
        yd[k] += s * xd[k];
    }
}

} // namespace cogl
