// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 ewspec Project Contributors
#include "ewspec/lsw.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "ewspec/rng.hpp"

namespace ewspec {

namespace {

bool is_power_of_two(std::size_t n) {
    return n != 0 && (n & (n - 1)) == 0;
}

int log2_exact(std::size_t n) {
    int j = 0;
    while ((std::size_t{1} << j) < n) ++j;
    return j;
}

void check_scales(const InnerProductMatrix& ipm, std::size_t n_scales, const char* who) {
    if (ipm.a.rows() != n_scales) {
        throw std::invalid_argument(std::string(who) +
                                    ": inner-product matrix has wrong scale count");
    }
}

}  // namespace

Ews::Ews(Matrix s) : spectrum(std::move(s)) {
    if (spectrum.empty() || !is_power_of_two(spectrum.cols()) || spectrum.cols() < 2) {
        throw std::invalid_argument("spectrum length must be a power of two >= 2");
    }
    if (static_cast<int>(spectrum.rows()) != log2_exact(spectrum.cols())) {
        throw std::invalid_argument("spectrum must have log2(length) scale rows");
    }
    for (double v : spectrum.data) {
        if (!std::isfinite(v) || v < 0.0) {
            throw std::invalid_argument("spectrum entries must be finite and nonnegative");
        }
    }
}

Ews test_spectrum(std::size_t length) {
    if (!is_power_of_two(length) || length < 128) {
        throw std::invalid_argument("test_spectrum requires a power-of-two length >= 128");
    }
    const int J = log2_exact(length);
    Matrix s(static_cast<std::size_t>(J), length);
    const double pi = std::numbers::pi;
    for (std::size_t k = 0; k < length; ++k) {
        const double z = static_cast<double>(k) / static_cast<double>(length);
        const double s6 = std::sin(pi * z);
        s(5, k) = s6 * s6;
        if (std::fabs(z - 0.6) <= 0.1) {
            const double c = std::cos(5.0 * pi * (z - 0.6));
            s(0, k) = c * c;
        }
    }
    return Ews(std::move(s));
}

std::vector<double> synthesize_lsw(const Ews& ews, const WaveletFilter& filter,
                                   const Matrix& xi) {
    const std::size_t T = ews.length();
    const int J = ews.n_scales();
    if (xi.rows() != ews.spectrum.rows() || xi.cols() != T) {
        throw std::invalid_argument("synthesize_lsw: innovation matrix shape mismatch");
    }
    std::vector<double> x(T, 0.0);
    std::vector<double> amp(T);
    std::vector<double> fold(T);
    for (int j = 1; j <= J; ++j) {
        const double* srow = ews.spectrum.row(static_cast<std::size_t>(j - 1));
        bool active = false;
        for (std::size_t k = 0; k < T; ++k) {
            if (srow[k] != 0.0) {
                active = true;
                break;
            }
        }
        if (!active) continue;

        const double* xrow = xi.row(static_cast<std::size_t>(j - 1));
        for (std::size_t k = 0; k < T; ++k) amp[k] = std::sqrt(srow[k]) * xrow[k];

        // Wavelet vector folded periodically onto one period.
        const auto psi = discrete_wavelet(filter, j);
        std::fill(fold.begin(), fold.end(), 0.0);
        for (std::size_t u = 0; u < psi.size(); ++u) fold[u % T] += psi[u];
        const std::size_t ulen = std::min(psi.size(), T);

        for (std::size_t t = 0; t < T; ++t) {
            double s = 0.0;
            for (std::size_t u = 0; u < ulen; ++u) {
                std::size_t idx = t + u;
                if (idx >= T) idx -= T;
                s += fold[u] * amp[idx];
            }
            x[t] += s;
        }
    }
    return x;
}

std::vector<double> simulate_lsw(const Ews& ews, const WaveletFilter& filter,
                                 std::uint64_t seed) {
    Matrix xi(ews.spectrum.rows(), ews.spectrum.cols());
    auto engine = make_engine(seed);
    for (double& v : xi.data) v = standard_normal(engine);
    return synthesize_lsw(ews, filter, xi);
}

Matrix raw_wavelet_periodogram(std::span<const double> x, const WaveletFilter& filter) {
    if (!is_power_of_two(x.size()) || x.size() < 2) {
        throw std::invalid_argument(
            "raw_wavelet_periodogram requires a power-of-two length >= 2");
    }
    const int J = log2_exact(x.size());
    Matrix d = ndwt(x, filter, J);
    for (double& v : d.data) v = v * v;
    return d;
}

Matrix expected_periodogram(const Ews& ews, const InnerProductMatrix& ipm) {
    check_scales(ipm, ews.spectrum.rows(), "expected_periodogram");
    const std::size_t J = ews.spectrum.rows();
    const std::size_t T = ews.length();
    Matrix out(J, T);
    std::vector<double> col(J);
    std::vector<double> res(J);
    for (std::size_t k = 0; k < T; ++k) {
        for (std::size_t j = 0; j < J; ++j) col[j] = ews.spectrum(j, k);
        matvec(ipm.a, col.data(), res.data());
        for (std::size_t j = 0; j < J; ++j) out(j, k) = res[j];
    }
    return out;
}

Matrix periodogram_variance(const Ews& ews, const InnerProductMatrix& ipm) {
    Matrix out = expected_periodogram(ews, ipm);
    for (double& v : out.data) v = 2.0 * v * v;
    return out;
}

Matrix correct_spectrum(const Matrix& periodogram, const InnerProductMatrix& ipm) {
    check_scales(ipm, periodogram.rows(), "correct_spectrum");
    const std::size_t J = periodogram.rows();
    const std::size_t T = periodogram.cols();
    Matrix out(J, T);
    std::vector<double> col(J);
    std::vector<double> res(J);
    for (std::size_t k = 0; k < T; ++k) {
        for (std::size_t j = 0; j < J; ++j) col[j] = periodogram(j, k);
        matvec(ipm.inverse, col.data(), res.data());
        for (std::size_t j = 0; j < J; ++j) out(j, k) = res[j];
    }
    return out;
}

}  // namespace ewspec
