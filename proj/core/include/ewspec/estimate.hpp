// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 ewspec Project Contributors
#pragma once

// Spectrum estimation pipelines.
//
// The main estimator runs, per circular spin and per periodogram scale:
// variance stabilization (Haar-Fisz) -> DWT with the smoothing wavelet ->
// empirical-Bayes shrinkage -> inverse DWT -> inverse Haar-Fisz; point
// estimates are averaged over spins and bias-corrected with the
// inner-product matrix inverse, applied per location after averaging.
// Credible bands come from posterior draws of the wavelet coefficients
// pushed through the same inverse pipeline and the same correction, so
// they reflect the full nonlinear propagation (posteriors on the spectrum
// scale are skewed; bands need not be centred on the point estimate).
//
// Spinning shifts the periodogram rows, not the input series; with
// spins = T the point estimate is exactly shift-invariant.
//
// A translation-invariant soft-threshold baseline and the AMSE benchmark
// harness used for method comparison live here too.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ewspec/bayes.hpp"
#include "ewspec/lsw.hpp"
#include "ewspec/matrix.hpp"
#include "ewspec/wavelet.hpp"

namespace ewspec {

struct EstimateOptions {
    int spins = 20;
    int n_samples = 1000;           // posterior realizations pooled over spins
    std::uint64_t seed = 0;
    std::vector<double> credible_levels = {0.5, 0.9};
    int threads = 0;                // 0 = all hardware threads
    bool identity_shrink = false;   // diagnostic: skip shrinkage and sampling
    MmleOptions mmle;
};

struct CredibleBand {
    double level = 0.0;
    Matrix lower;
    Matrix upper;
};

struct EwsEstimate {
    std::string analysis_spec;
    std::string smoothing_spec;
    int spins = 0;
    int n_samples = 0;
    std::uint64_t seed = 0;

    Matrix mean;          // bias-corrected point estimate, clipped at 0
    Matrix mean_preclip;  // same before clipping
    Matrix sample_mean;   // mean of the posterior realizations
    std::vector<CredibleBand> bands;  // sorted by level, ascending

    std::uint64_t rejected_draws = 0;
    std::uint64_t total_draws = 0;
};

// Full pipeline on a time series of dyadic length T >= 32. Requires
// spins >= 1 and n_samples >= 100 (unless identity_shrink is set, which
// produces a point estimate only). The point path inverts the stabilizer
// by projection; posterior draws use the strict inverse and are redrawn
// on failure. Throws std::runtime_error, annotated with spin and scale,
// if a single draw is rejected 200 times in a row or the overall
// rejection rate exceeds 50%.
EwsEstimate estimate_ews(std::span<const double> x, const WaveletFilter& analysis,
                         const WaveletFilter& smoothing,
                         const EstimateOptions& options = {});

// Translation-invariant soft-threshold baseline: per periodogram level,
// a full-depth non-decimated transform with the smoothing filter, every
// detail coefficient soft-thresholded at sigma_hat sqrt(2 log T) with
// sigma_hat = MAD(finest level) / 0.6745, average-basis reconstruction,
// then the bias correction. Unclipped.
Matrix ti_denoise_baseline(std::span<const double> x, const WaveletFilter& analysis,
                           const WaveletFilter& smoothing);

// Mean over replicates of the mean squared cell error against the truth.
double amse(const std::vector<Matrix>& estimates, const Ews& truth);

struct BenchmarkOptions {
    int replicates = 100;
    std::vector<std::string> filters =  // smoothing grid
        {"ep1", "ep3", "ep10", "la4", "la6", "la10"};
    std::uint64_t seed = 0;
    int spins = 20;
    int threads = 0;
    MmleOptions mmle;
};

struct BenchmarkRow {
    std::string method;  // "hf", "tid", or "raw"
    std::string filter;  // smoothing spec; "none" for the raw method
    double amse = 0.0;
    double se = 0.0;     // standard error of the AMSE over replicates
    int replicates = 0;  // replicates that completed for this row
    int failures = 0;
    double runtime_s = 0.0;  // reported on stdout only, never in artifacts
};

struct BenchmarkReport {
    std::string analysis_spec;
    std::uint64_t seed = 0;
    int replicates = 0;
    std::vector<BenchmarkRow> rows;
    std::vector<std::string> failure_messages;  // "replicate <r>: <why>"
};

// One shared simulation per replicate (synthesis = analysis filter), then
// for every smoothing filter both the Bayesian estimate (point only) and
// the soft-threshold baseline, plus the corrected raw periodogram as the
// no-smoothing reference. Deterministic given the seed.
BenchmarkReport run_benchmark(const Ews& truth, const WaveletFilter& analysis,
                              const BenchmarkOptions& options = {});

struct CoverageOptions {
    int replicates = 50;
    double level = 0.9;
    int spins = 20;
    int n_samples = 400;
    std::uint64_t seed = 0;
    int threads = 0;
    MmleOptions mmle;
};

struct CoverageReport {
    double level = 0.0;
    int replicates = 0;                  // requested
    int completed = 0;                   // replicates that produced bands
    std::vector<double> coverage;        // per scale, fraction of covered cells
    std::vector<std::uint64_t> cells;    // cells counted per scale
    std::vector<std::string> failure_messages;  // "replicate <r>: <why>"
};

// Empirical credible-band coverage: the fraction of (replicate, location)
// cells whose band at `level` contains the true spectrum, per scale.
// Replicates whose estimate aborts (posterior-draw rejection) are skipped
// and recorded in failure_messages; coverage is taken over the completed
// ones and is NaN per scale when none complete.
CoverageReport coverage_check(const Ews& truth, const WaveletFilter& analysis,
                              const WaveletFilter& smoothing,
                              const CoverageOptions& options = {});

}  // namespace ewspec
