// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 ewspec Project Contributors
#pragma once

#include <cstdint>
#include <random>

#include "ewspec/special.hpp"

namespace ewspec {

// splitmix64 finalizer; good avalanche, cheap, stable across platforms.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Independent stream seed for a work unit. Units are identified by up to two
// indices so parallel loops get stable streams regardless of scheduling.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t unit,
                                 std::uint64_t subunit = 0) {
    std::uint64_t s = mix64(master ^ 0x6a09e667f3bcc909ULL);
    s = mix64(s ^ (unit + 0x3c6ef372fe94f82bULL));
    s = mix64(s ^ (subunit + 0xa54ff53a5f1d36f1ULL));
    return s;
}

inline std::mt19937_64 make_engine(std::uint64_t seed) {
    return std::mt19937_64(seed);
}

// Uniform draw strictly inside (0, 1): 53 mantissa bits, offset half an ulp.
inline double uniform_open(std::mt19937_64& engine) {
    return (static_cast<double>(engine() >> 11) + 0.5) * 0x1.0p-53;
}

// Standard normal via inverse CDF, so streams are identical across standard
// library implementations (std::normal_distribution is not portable).
inline double standard_normal(std::mt19937_64& engine) {
    return normal_quantile(uniform_open(engine));
}

}  // namespace ewspec
