// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 ewspec Project Contributors
#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ewspec/matrix.hpp"

// Conventions used throughout this library
// -----------------------------------------
// Scale index j runs 1..J with j = 1 the FINEST scale; J = log2(T) for a
// length-T signal. Non-decimated transforms, autocorrelation wavelets,
// spectra, and periodograms are all indexed this way (matrix row j-1 holds
// scale j).
//
// Decimated transforms use level index l = 0..J-1 with l = 0 the COARSEST
// level (a single coefficient). Level l holds 2^l coefficients, so the two
// indexings meet via l = J - j.
//
// All transforms are periodic. The non-decimated coefficient at scale j,
// location k is the circular convolution sum_u psi_j[u] x[(k - u) mod T],
// where psi_j is the discrete wavelet vector built by the filter cascade
// (high-pass at the top, upsampled low-pass below). The decimated transform
// subsamples the same convolutions at stride 2^j, so ndwt row j decimated at
// stride 2^j reproduces the dwt detail coefficients exactly.
//
// Low-pass filters h are normalized to sum = sqrt(2); the quadrature mirror
// high-pass is g[n] = (-1)^n h[L-1-n]. For Haar this gives
// psi_1 = (1/sqrt(2), -1/sqrt(2)).

namespace ewspec {

enum class WaveletFamily { ExtremalPhase, LeastAsymmetric };

// Daubechies compactly supported wavelet filter. Coefficients come from an
// embedded table and are re-verified against the orthonormality conditions
// on every construction; a corrupted table fails loudly.
class WaveletFilter {
public:
    WaveletFilter(WaveletFamily family, int vanishing_moments);

    // Accepts "haar", "ep1".."ep10", "la4".."la10" (case-insensitive).
    static WaveletFilter parse(std::string_view spec);

    WaveletFamily family() const { return family_; }
    int vanishing_moments() const { return vanishing_moments_; }
    int length() const { return static_cast<int>(lowpass_.size()); }
    const std::vector<double>& lowpass() const { return lowpass_; }
    const std::vector<double>& highpass() const { return highpass_; }

    // Canonical spec string ("ep1", "la6", ...).
    std::string spec() const;

    bool operator==(const WaveletFilter& other) const {
        return family_ == other.family_ && vanishing_moments_ == other.vanishing_moments_;
    }

private:
    WaveletFamily family_;
    int vanishing_moments_;
    std::vector<double> lowpass_;
    std::vector<double> highpass_;
};

// Every spec string accepted by WaveletFilter::parse, in canonical order.
std::vector<std::string> supported_filter_specs();

// Support length of the discrete wavelet at scale j: (2^j - 1)(L - 1) + 1.
long wavelet_support(const WaveletFilter& filter, int scale);

// Discrete wavelet / scaling vectors by the cascade construction.
std::vector<double> discrete_wavelet(const WaveletFilter& filter, int scale);
std::vector<double> discrete_scaling(const WaveletFilter& filter, int scale);

// Full-depth decimated transform of a dyadic-length signal.
struct DwtCoefficients {
    std::vector<std::vector<double>> details;  // details[l], 2^l entries, l=0 coarsest
    double scaling = 0.0;                      // single coarsest scaling coefficient

    int levels() const { return static_cast<int>(details.size()); }
    std::size_t signal_length() const { return std::size_t{1} << details.size(); }
};

DwtCoefficients dwt(std::span<const double> x, const WaveletFilter& filter);
std::vector<double> idwt(const DwtCoefficients& coeffs, const WaveletFilter& filter);

// Non-decimated transform: rows are scales j = 1..n_scales, columns are
// locations. Requires dyadic length and n_scales <= log2(T).
Matrix ndwt(std::span<const double> x, const WaveletFilter& filter, int n_scales);

// Non-decimated transform including the final smooth, plus its average-basis
// inverse (exact for orthonormal filters).
struct NdwtCoefficients {
    Matrix details;              // n_scales x T
    std::vector<double> smooth;  // approximation at the deepest scale
};

NdwtCoefficients ndwt_full(std::span<const double> x, const WaveletFilter& filter,
                           int n_scales);
std::vector<double> ndwt_inverse(const NdwtCoefficients& coeffs,
                                 const WaveletFilter& filter);

// Autocorrelation wavelet Psi_j(tau) = sum_k psi_j[k] psi_j[k - tau],
// supported on |tau| <= L_j - 1.
struct AutocorrelationWavelet {
    int scale = 0;
    std::vector<double> values;  // lag -(L_j - 1) .. L_j - 1

    long max_lag() const { return (static_cast<long>(values.size()) - 1) / 2; }
    double at(long lag) const {
        const long m = max_lag();
        if (lag < -m || lag > m) return 0.0;
        return values[static_cast<std::size_t>(lag + m)];
    }
};

AutocorrelationWavelet autocorrelation_wavelet(const WaveletFilter& filter, int scale);

// Gram matrix of the autocorrelation wavelets, A[j][l] = <Psi_j, Psi_l>,
// with its inverse and a 1-norm condition estimate. Throws if the system is
// numerically singular (condition > 1e12).
struct InnerProductMatrix {
    Matrix a;        // n_scales x n_scales, rows/cols indexed by scale - 1
    Matrix inverse;
    double condition = 0.0;
};

InnerProductMatrix inner_product_matrix(const WaveletFilter& filter, int n_scales);

namespace detail {
std::span<const double> daubechies_lowpass(WaveletFamily family, int vanishing_moments);
}

}  // namespace ewspec
