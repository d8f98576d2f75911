// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 ewspec Project Contributors
#pragma once

// Locally stationary wavelet processes: simulation from an evolutionary
// wavelet spectrum, the raw wavelet periodogram, its expectation and
// variance under the model, and the inner-product-matrix correction.
//
// Spectra and periodograms are J x T matrices with row j - 1 holding
// scale j (finest first) at rescaled times z = k / T, k = 0..T-1, with
// J = log2(T).  All operators are periodic in time.

#include <cstdint>
#include <span>
#include <vector>

#include "ewspec/matrix.hpp"
#include "ewspec/wavelet.hpp"

namespace ewspec {

// An evolutionary wavelet spectrum: nonnegative power S_j(k / T) per
// scale and rescaled time. Construction validates the shape (J = log2 T,
// T a power of two) and that every entry is finite and nonnegative.
struct Ews {
    Matrix spectrum;

    Ews() = default;
    explicit Ews(Matrix s);

    int n_scales() const { return static_cast<int>(spectrum.rows()); }
    std::size_t length() const { return spectrum.cols(); }
};

// Built-in target spectrum used by the simulation studies: a smooth
// sin^2 profile at scale 6 plus a compactly supported cos^2 burst at
// scale 1 centred at z = 0.6, all other scales zero. Requires a
// power-of-two length >= 128.
Ews test_spectrum(std::size_t length = 1024);

// X_t = sum_j sum_k sqrt(S_j(k / T)) xi(j, k) psi_j[(k - t) mod T] for a
// given innovation matrix xi (same shape as the spectrum). Wavelet
// vectors longer than T wrap periodically.
std::vector<double> synthesize_lsw(const Ews& ews, const WaveletFilter& filter,
                                   const Matrix& xi);

// synthesize_lsw with xi drawn i.i.d. standard normal from `seed`. All
// J x T innovations are always drawn, in a fixed order, so the result
// depends only on (ews, filter, seed) and not on which rows are zero.
std::vector<double> simulate_lsw(const Ews& ews, const WaveletFilter& filter,
                                 std::uint64_t seed);

// I(j, k) = |sum_u psi_j[u] x[(k - u) mod T]|^2 for scales j = 1..log2(T),
// i.e. the squared non-decimated wavelet coefficients.
Matrix raw_wavelet_periodogram(std::span<const double> x, const WaveletFilter& filter);

// E I(j, z) = sum_l A(j, l) S_l(z), up to O(1/T) boundary terms.
Matrix expected_periodogram(const Ews& ews, const InnerProductMatrix& ipm);

// Var I(j, z) = 2 { sum_l A(j, l) S_l(z) }^2 to leading order.
Matrix periodogram_variance(const Ews& ews, const InnerProductMatrix& ipm);

// Applies A^{-1} column-by-column to a (possibly smoothed) periodogram,
// yielding an asymptotically unbiased spectrum estimate. Unclipped: rows
// may go negative.
Matrix correct_spectrum(const Matrix& periodogram, const InnerProductMatrix& ipm);

}  // namespace ewspec
