// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 ewspec Project Contributors
//
// Microbenchmarks for the shrinkage layer: the closed-form integrals on
// the hot path of every coefficient, the posterior sampler, and a whole
// per-level hyperparameter fit.

#include <benchmark/benchmark.h>

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "ewspec/bayes.hpp"
#include "ewspec/rng.hpp"
#include "ewspec/wavelet.hpp"

namespace {

void BM_QIntegrals(benchmark::State& state) {
    double h = -8.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(ewspec::q_integrals(h, 2.0, 0.7));
        h += 0.37;
        if (h > 8.0) h = -8.0;
    }
}
BENCHMARK(BM_QIntegrals);

void BM_PosteriorMoments(benchmark::State& state) {
    ewspec::HyperParams hp;
    hp.alpha = 0.6;
    hp.tau = 1.3;
    hp.nu = 0.8;
    double h = -8.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(ewspec::posterior_moments(h, hp));
        h += 0.37;
        if (h > 8.0) h = -8.0;
    }
}
BENCHMARK(BM_PosteriorMoments);

void BM_SamplePosterior(benchmark::State& state) {
    ewspec::HyperParams hp;
    hp.alpha = 0.6;
    hp.tau = 1.3;
    hp.nu = 0.8;
    std::mt19937_64 eng = ewspec::make_engine(21);
    for (auto _ : state) {
        benchmark::DoNotOptimize(ewspec::sample_posterior(1.1, hp, eng));
    }
}
BENCHMARK(BM_SamplePosterior);

void BM_MarginalLoglik(benchmark::State& state) {
    std::mt19937_64 eng = ewspec::make_engine(22);
    std::vector<double> h(static_cast<std::size_t>(state.range(0)));
    for (auto& v : h) v = 2.0 * ewspec::standard_normal(eng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(ewspec::marginal_loglik(h, 0.6, 1.3, 0.8));
    }
}
BENCHMARK(BM_MarginalLoglik)->Arg(64)->Arg(512);

// A full decomposition fit: sparse planted signal plus unit noise on every
// level, matching what one spin of the estimation pipeline hands the
// optimizer per smoothing level.
void BM_FitMmle(benchmark::State& state) {
    const int levels = static_cast<int>(state.range(0));
    std::mt19937_64 eng = ewspec::make_engine(23);
    ewspec::DwtCoefficients coeffs;
    coeffs.details.resize(static_cast<std::size_t>(levels));
    for (int l = 0; l < levels; ++l) {
        auto& row = coeffs.details[static_cast<std::size_t>(l)];
        row.resize(std::size_t{1} << l);
        for (std::size_t i = 0; i < row.size(); ++i) {
            row[i] = ewspec::standard_normal(eng);
            if (i % 8 == 0) row[i] += 3.0;
        }
    }
    coeffs.scaling = 1.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(ewspec::fit_mmle(coeffs));
    }
}
BENCHMARK(BM_FitMmle)->Arg(8)->Arg(10);

}  // namespace

BENCHMARK_MAIN();
