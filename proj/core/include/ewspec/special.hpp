// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 ewspec Project Contributors
#pragma once

namespace ewspec {

inline constexpr double kSqrt2 = 1.4142135623730951;
inline constexpr double kInvSqrt2 = 0.7071067811865476;
inline constexpr double kSqrt2Pi = 2.5066282746310002;
inline constexpr double kLogSqrt2Pi = 0.9189385332046727;

// Scaled complementary error function exp(x^2) erfc(x). Stays O(1/x) for
// large positive x where erfc alone underflows and exp(x^2) alone overflows.
double erfcx(double x);

double normal_pdf(double x);
double normal_cdf(double x);

// log Phi(x), accurate far into the lower tail (x ~ -40 and beyond).
double log_normal_cdf(double x);

// Inverse of normal_cdf for p in (0, 1); accurate to full double precision
// down to the smallest normal p via Halley-refined tail expansion.
double normal_quantile(double p);

// Inverse of log_normal_cdf for log_p <= 0. Equivalent to
// normal_quantile(exp(log_p)) but stays accurate when the probability
// itself underflows a double (log_p down to about -1e8), which happens for
// tail conditioning hundreds of sigmas out.
double normal_quantile_logp(double log_p);

}  // namespace ewspec
