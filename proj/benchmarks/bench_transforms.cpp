// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 ewspec Project Contributors
//
// Microbenchmarks for the transform layer: wavelet transforms, the
// variance stabilizer, and the de-biasing matrix.

#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "ewspec/haar_fisz.hpp"
#include "ewspec/lsw.hpp"
#include "ewspec/rng.hpp"
#include "ewspec/wavelet.hpp"

namespace {

std::vector<double> random_series(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 eng = ewspec::make_engine(seed);
    std::vector<double> x(n);
    for (auto& v : x) v = ewspec::standard_normal(eng);
    return x;
}

std::vector<double> random_nonnegative(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 eng = ewspec::make_engine(seed);
    std::vector<double> x(n);
    for (auto& v : x) {
        const double z = ewspec::standard_normal(eng);
        v = z * z;
    }
    return x;
}

void BM_Dwt(benchmark::State& state) {
    const auto filter = ewspec::WaveletFilter::parse(state.range(1) ? "la8" : "haar");
    const auto x = random_series(static_cast<std::size_t>(state.range(0)), 17);
    for (auto _ : state) {
        benchmark::DoNotOptimize(ewspec::dwt(x, filter));
    }
}
BENCHMARK(BM_Dwt)->Args({1024, 0})->Args({1024, 1})->Args({16384, 0})->Args({16384, 1});

void BM_Ndwt(benchmark::State& state) {
    const auto filter = ewspec::WaveletFilter::parse(state.range(1) ? "la8" : "haar");
    const auto x = random_series(static_cast<std::size_t>(state.range(0)), 18);
    for (auto _ : state) {
        benchmark::DoNotOptimize(ewspec::ndwt(x, filter, -1));
    }
}
BENCHMARK(BM_Ndwt)->Args({256, 0})->Args({256, 1})->Args({1024, 0})->Args({1024, 1});

void BM_RawPeriodogram(benchmark::State& state) {
    const auto filter = ewspec::WaveletFilter::parse("haar");
    const auto x = random_series(static_cast<std::size_t>(state.range(0)), 19);
    for (auto _ : state) {
        benchmark::DoNotOptimize(ewspec::raw_wavelet_periodogram(x, filter));
    }
}
BENCHMARK(BM_RawPeriodogram)->Arg(256)->Arg(1024)->Arg(4096);

void BM_HaarFiszRoundTrip(benchmark::State& state) {
    const auto v = random_nonnegative(static_cast<std::size_t>(state.range(0)), 20);
    for (auto _ : state) {
        benchmark::DoNotOptimize(ewspec::haar_fisz_inverse(ewspec::haar_fisz_forward(v)));
    }
}
BENCHMARK(BM_HaarFiszRoundTrip)->Arg(256)->Arg(1024)->Arg(16384);

void BM_InnerProductMatrix(benchmark::State& state) {
    const auto filter = ewspec::WaveletFilter::parse(state.range(1) ? "la8" : "haar");
    const int n_scales = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(ewspec::inner_product_matrix(filter, n_scales));
    }
}
BENCHMARK(BM_InnerProductMatrix)->Args({8, 0})->Args({8, 1})->Args({12, 0})->Args({12, 1});

void BM_SimulateLsw(benchmark::State& state) {
    const std::size_t T = static_cast<std::size_t>(state.range(0));
    const auto truth = ewspec::test_spectrum(T);
    const auto filter = ewspec::WaveletFilter::parse("haar");
    std::uint64_t seed = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(ewspec::simulate_lsw(truth, filter, seed++));
    }
}
BENCHMARK(BM_SimulateLsw)->Arg(256)->Arg(1024);

}  // namespace

BENCHMARK_MAIN();
