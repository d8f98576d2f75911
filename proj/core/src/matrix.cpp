// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 ewspec Project Contributors
#include "ewspec/matrix.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace ewspec {

Matrix invert(const Matrix& a) {
    if (a.rows() != a.cols()) {
        throw std::invalid_argument("invert: matrix is not square");
    }
    const std::size_t n = a.rows();
    Matrix work = a;
    Matrix inv(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        inv(i, i) = 1.0;
    }
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::fabs(work(r, col)) > std::fabs(work(pivot, col))) {
                pivot = r;
            }
        }
        if (work(pivot, col) == 0.0) {
            throw std::runtime_error("invert: singular matrix");
        }
        if (pivot != col) {
            for (std::size_t c = 0; c < n; ++c) {
                std::swap(work(pivot, c), work(col, c));
                std::swap(inv(pivot, c), inv(col, c));
            }
        }
        const double d = work(col, col);
        for (std::size_t c = 0; c < n; ++c) {
            work(col, c) /= d;
            inv(col, c) /= d;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const double m = work(r, col);
            if (m == 0.0) continue;
            for (std::size_t c = 0; c < n; ++c) {
                work(r, c) -= m * work(col, c);
                inv(r, c) -= m * inv(col, c);
            }
        }
    }
    return inv;
}

double norm_1(const Matrix& a) {
    double best = 0.0;
    for (std::size_t c = 0; c < a.cols(); ++c) {
        double sum = 0.0;
        for (std::size_t r = 0; r < a.rows(); ++r) {
            sum += std::fabs(a(r, c));
        }
        if (sum > best) best = sum;
    }
    return best;
}

void matvec(const Matrix& a, const double* x, double* y) {
    for (std::size_t r = 0; r < a.rows(); ++r) {
        const double* row = a.row(r);
        double sum = 0.0;
        for (std::size_t c = 0; c < a.cols(); ++c) {
            sum += row[c] * x[c];
        }
        y[r] = sum;
    }
}

}  // namespace ewspec
