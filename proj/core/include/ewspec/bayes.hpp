// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 ewspec Project Contributors
#pragma once

// Empirical-Bayes shrinkage for noisy wavelet coefficients.
//
// Model per coefficient: h = d + eps with eps ~ N(0, nu^2) and a
// spike-and-slab prior on d
//
//     d ~ alpha delta_0 + (1 - alpha) Laplace(tau),
//
// where Laplace(tau) has density (tau / 2) exp(-tau |d|) and alpha is the
// prior mass at zero. Everything downstream reduces to the exponentially
// tilted Gaussian tail integrals
//
//     Q^r(h) = (tau / 2) int d^r exp(-tau |d|) N(h - d; 0, nu^2) dd,
//
// r = 0, 1, 2, which have closed forms. The implementation evaluates them
// through scaled complementary error functions so they stay accurate for
// |h| / nu up to the hundreds, where the naive exp * Phi product has long
// since over- or underflowed.
//
// Hyperparameters are fitted per decomposition level by marginal maximum
// likelihood (Nelder-Mead on a box-constrained, log/logit-transformed
// parameterization), with the sparse shallow levels tied to their
// neighbours rather than fitted free.

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "ewspec/wavelet.hpp"

namespace ewspec {

// The three tilted-Gaussian integrals Q^0, Q^1, Q^2 defined above.
struct QIntegrals {
    double q0 = 0.0;
    double q1 = 0.0;
    double q2 = 0.0;
};

// Closed-form evaluation; requires tau > 0, nu > 0.
QIntegrals q_integrals(double h, double tau, double nu);

// Per-level prior and noise hyperparameters.
struct HyperParams {
    double alpha = 0.5;  // prior spike mass P(d = 0)
    double tau = 1.0;    // Laplace slab rate
    double nu = 1.0;     // noise standard deviation
    bool boundary = false;   // some fitted parameter landed on its box edge
    bool converged = true;   // optimizer met its tolerance

    // Spike-to-slab prior odds alpha / (1 - alpha).
    double theta() const { return alpha / (1.0 - alpha); }
};

struct PosteriorMoments {
    double mean = 0.0;
    double variance = 0.0;
    double spike_weight = 0.0;  // posterior P(d = 0 | h)
};

// Posterior mean, variance and spike mass of d given observation h.
PosteriorMoments posterior_moments(double h, const HyperParams& hp);

// Sum of log marginal densities log m(h_i) under the mixture model.
// Throws std::runtime_error (naming the coefficient index) if any term is
// non-finite.
double marginal_loglik(std::span<const double> h, double alpha, double tau, double nu);

// One exact draw from the posterior of d given h: spike with its posterior
// mass, otherwise a one-sided truncated normal on the matching side.
double sample_posterior(double h, const HyperParams& hp, std::mt19937_64& engine);

struct MmleOptions {
    int max_iterations = 200;     // Nelder-Mead iteration cap per level
    double tolerance = 1e-7;      // relative simplex f-spread at convergence
    int tied_levels = 4;          // levels 0..tied_levels-1 share one fit
};

// Fit hyperparameters for every level of a wavelet decomposition by
// marginal maximum likelihood. Levels are indexed as in DwtCoefficients
// (0 coarsest); levels below `tied_levels` are pooled into a single fit
// anchored at level tied_levels - 1, with tau halved, spike odds doubled
// and nu shared as the level coarsens.
std::vector<HyperParams> fit_mmle(const DwtCoefficients& coeffs,
                                  const MmleOptions& options = {});

}  // namespace ewspec
