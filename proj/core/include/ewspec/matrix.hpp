// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 ewspec Project Contributors
#pragma once

#include <cstddef>
#include <vector>

namespace ewspec {

// Dense row-major matrix. Deliberately minimal: storage, element access,
// and the one factorization this library needs (small-matrix inversion).
// `data` is public so bulk passes (scaling, squaring, reductions) can walk
// the flat storage directly.
class Matrix {
public:
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : data(rows * cols, fill), rows_(rows), cols_(cols) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return data.empty(); }

    double& operator()(std::size_t r, std::size_t c) { return data[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data[r * cols_ + c]; }

    double* row(std::size_t r) { return data.data() + r * cols_; }
    const double* row(std::size_t r) const { return data.data() + r * cols_; }

    bool same_shape(const Matrix& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
};

// Gauss-Jordan inverse with partial pivoting. Throws std::runtime_error on a
// vanishing pivot.
Matrix invert(const Matrix& a);

// Maximum absolute column sum.
double norm_1(const Matrix& a);

// y = a x for a square matrix and x of matching length.
void matvec(const Matrix& a, const double* x, double* y);

}  // namespace ewspec
