// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 ewspec Project Contributors
#include "ewspec/haar_fisz.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace ewspec {

namespace {

constexpr double kQuotientTol = 1e-12;

bool is_power_of_two(std::size_t n) {
    return n != 0 && (n & (n - 1)) == 0;
}

int log2_exact(std::size_t n) {
    int j = 0;
    while ((std::size_t{1} << j) < n) ++j;
    return j;
}

enum class InverseMode { kStrict, kTry, kProject };

// Shared inverse core. On success fills `out` and returns true. On a range
// violation: kStrict throws, kTry returns false, kProject clamps the
// offending quotient (and floors the root smooth), making the inverse total.
bool inverse_impl(std::span<const double> f, std::vector<double>& out, InverseMode mode) {
    if (!is_power_of_two(f.size())) {
        throw std::invalid_argument("haar_fisz_inverse requires a power-of-two length");
    }
    const int J = log2_exact(f.size());

    // Additive pyramid downwards: quotients[l] holds the 2^l recovered
    // quotients at level l, root[0] the recovered root smooth.
    std::vector<std::vector<double>> quotients(static_cast<std::size_t>(J));
    std::vector<double> c(f.begin(), f.end());
    for (int l = J - 1; l >= 0; --l) {
        const std::size_t half = std::size_t{1} << l;
        std::vector<double> q(half);
        std::vector<double> next(half);
        for (std::size_t m = 0; m < half; ++m) {
            const double a = c[2 * m];
            const double b = c[2 * m + 1];
            double fq = 0.5 * (a - b);
            if (std::fabs(fq) > 1.0) {
                if (mode != InverseMode::kProject && std::fabs(fq) > 1.0 + kQuotientTol) {
                    if (mode == InverseMode::kTry) return false;
                    throw std::domain_error(
                        "haar_fisz_inverse: quotient out of [-1, 1] at level " +
                        std::to_string(l));
                }
                fq = fq > 0.0 ? 1.0 : -1.0;
            }
            q[m] = fq;
            next[m] = 0.5 * (a + b);
        }
        quotients[static_cast<std::size_t>(l)] = std::move(q);
        c = std::move(next);
    }
    if (c[0] < 0.0) {
        if (mode == InverseMode::kProject) {
            c[0] = 0.0;
        } else if (mode == InverseMode::kTry) {
            return false;
        } else {
            throw std::domain_error("haar_fisz_inverse: negative root smooth at level 0");
        }
    }

    // Multiplicative rebuild upwards: d = f * c, children c + d and c - d.
    for (int l = 0; l < J; ++l) {
        const auto& q = quotients[static_cast<std::size_t>(l)];
        std::vector<double> next(c.size() * 2);
        for (std::size_t m = 0; m < c.size(); ++m) {
            const double d = q[m] * c[m];
            next[2 * m] = c[m] + d;
            next[2 * m + 1] = c[m] - d;
        }
        c = std::move(next);
    }
    out = std::move(c);
    return true;
}

}  // namespace

std::vector<double> haar_fisz_forward(std::span<const double> x) {
    if (!is_power_of_two(x.size())) {
        throw std::invalid_argument("haar_fisz_forward requires a power-of-two length");
    }
    for (double v : x) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw std::invalid_argument("haar_fisz_forward requires nonnegative finite input");
        }
    }
    const int J = log2_exact(x.size());

    // Mean-convention Haar pyramid, keeping the Fisz quotient per node.
    std::vector<std::vector<double>> quotients(static_cast<std::size_t>(J));
    std::vector<double> c(x.begin(), x.end());
    for (int l = J - 1; l >= 0; --l) {
        const std::size_t half = std::size_t{1} << l;
        std::vector<double> q(half);
        std::vector<double> next(half);
        for (std::size_t m = 0; m < half; ++m) {
            const double a = c[2 * m];
            const double b = c[2 * m + 1];
            const double d = 0.5 * (a - b);
            const double s = 0.5 * (a + b);
            q[m] = s == 0.0 ? 0.0 : d / s;
            next[m] = s;
        }
        quotients[static_cast<std::size_t>(l)] = std::move(q);
        c = std::move(next);
    }

    // Additive rebuild from the root: child pair (c + f, c - f).
    for (int l = 0; l < J; ++l) {
        const auto& q = quotients[static_cast<std::size_t>(l)];
        std::vector<double> next(c.size() * 2);
        for (std::size_t m = 0; m < c.size(); ++m) {
            next[2 * m] = c[m] + q[m];
            next[2 * m + 1] = c[m] - q[m];
        }
        c = std::move(next);
    }
    return c;
}

std::vector<double> haar_fisz_inverse(std::span<const double> f) {
    std::vector<double> out;
    inverse_impl(f, out, InverseMode::kStrict);
    return out;
}

bool try_haar_fisz_inverse(std::span<const double> f, std::vector<double>& out) {
    return inverse_impl(f, out, InverseMode::kTry);
}

std::vector<double> haar_fisz_inverse_clamped(std::span<const double> f) {
    std::vector<double> out;
    inverse_impl(f, out, InverseMode::kProject);
    return out;
}

}  // namespace ewspec
