#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "clic/error.hpp"

namespace clic {

// Dense row-major double matrix. Batches here are tiny (m <= a few hundred,
// d <= a few hundred) so explicit loops with a fixed summation order beat a
// BLAS dependency; reductions must be reproducible bit-for-bit.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return data_.empty(); }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
    std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

    bool same_shape(const Matrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

    bool all_finite() const {
        for (double v : data_)
            if (!std::isfinite(v)) return false;
        return true;
    }

    void add_scaled(const Matrix& o, double s) {
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += s * o.data_[k];
    }

    bool operator==(const Matrix& o) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

inline double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
}

inline double row_norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

// Normalizes every row to unit L2 norm in place. Zero rows are left as-is.
inline void normalize_rows(Matrix& m) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
        auto r = m.row(i);
        const double n = row_norm(r);
        if (n > 0.0)
            for (double& v : r) v /= n;
    }
}

inline void require_same_shape(const Matrix& a, const Matrix& b, const char* what) {
    if (!a.same_shape(b)) throw ShapeMismatch(std::string(what) + ": shapes differ");
}

} // namespace clic
