// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 ewspec Project Contributors
#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

namespace ewspec {

inline double mean(std::span<const double> v) {
    if (v.empty()) return 0.0;
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

// Unbiased sample variance (n - 1 denominator), 0 for n < 2.
inline double sample_variance(std::span<const double> v) {
    const std::size_t n = v.size();
    if (n < 2) return 0.0;
    const double m = mean(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return s / static_cast<double>(n - 1);
}

inline double sample_stddev(std::span<const double> v) {
    return std::sqrt(sample_variance(v));
}

inline double median_inplace(std::vector<double>& v) {
    if (v.empty()) return 0.0;
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + mid, v.end());
    double hi = v[mid];
    if (v.size() % 2 == 1) return hi;
    std::nth_element(v.begin(), v.begin() + mid - 1, v.begin() + mid);
    return 0.5 * (v[mid - 1] + hi);
}

inline double median(std::span<const double> v) {
    std::vector<double> tmp(v.begin(), v.end());
    return median_inplace(tmp);
}

// Median absolute deviation about the median (unscaled).
inline double mad(std::span<const double> v) {
    if (v.empty()) return 0.0;
    const double m = median(v);
    std::vector<double> dev(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) dev[i] = std::fabs(v[i] - m);
    return median_inplace(dev);
}

// MAD rescaled to be consistent for the Gaussian (divide by qnorm(0.75)).
inline double mad_stddev(std::span<const double> v) {
    return mad(v) / 0.6744897501960817;
}

// Linear-interpolation quantile of sorted data, q in [0, 1].
inline double quantile_sorted(std::span<const double> sorted, double q) {
    const std::size_t n = sorted.size();
    if (n == 0) return 0.0;
    if (n == 1) return sorted[0];
    double pos = q * static_cast<double>(n - 1);
    if (pos <= 0.0) return sorted[0];
    if (pos >= static_cast<double>(n - 1)) return sorted[n - 1];
    const std::size_t lo = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] * (1.0 - frac) + sorted[lo + 1] * frac;
}

inline double quantile(std::span<const double> v, double q) {
    std::vector<double> tmp(v.begin(), v.end());
    std::sort(tmp.begin(), tmp.end());
    return quantile_sorted(tmp, q);
}

}  // namespace ewspec
