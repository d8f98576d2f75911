// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 ewspec Project Contributors
#include "ewspec/special.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ewspec {

namespace {
constexpr double kSqrtPi = 1.7724538509055159;
}

double erfcx(double x) {
    if (std::isnan(x)) return x;
    if (x < 0.0) {
        // erfcx(-x) = 2 exp(x^2) - erfcx(x); overflows for x < -26.6 as the
        // true value does.
        const double e = std::exp(x * x);
        return 2.0 * e - erfcx(-x);
    }
    if (x <= 25.0) {
        // exp(x^2) stays below overflow and libm erfc keeps full relative
        // accuracy on this range.
        return std::exp(x * x) * std::erfc(x);
    }
    // Asymptotic series erfcx(x) ~ (1/(x sqrt(pi))) sum (-1)^k (2k-1)!!/(2x^2)^k.
    const double inv2x2 = 1.0 / (2.0 * x * x);
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k <= 12; ++k) {
        term *= -static_cast<double>(2 * k - 1) * inv2x2;
        sum += term;
        if (std::fabs(term) < 1e-18 * sum) break;
    }
    return sum / (x * kSqrtPi);
}

double normal_pdf(double x) {
    return std::exp(-0.5 * x * x) / kSqrt2Pi;
}

double normal_cdf(double x) {
    return 0.5 * std::erfc(-x * kInvSqrt2);
}

double log_normal_cdf(double x) {
    if (x >= -1.0) {
        return std::log(normal_cdf(x));
    }
    // Phi(x) = 0.5 erfcx(-x/sqrt(2)) exp(-x^2/2) for x < 0.
    return std::log(0.5 * erfcx(-x * kInvSqrt2)) - 0.5 * x * x;
}

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        if (p == 0.0) return -std::numeric_limits<double>::infinity();
        if (p == 1.0) return std::numeric_limits<double>::infinity();
        throw std::invalid_argument("normal_quantile: p outside [0, 1]");
    }
    const bool upper = p > 0.5;
    const double pl = upper ? 1.0 - p : p;

    // Initial guess: rational tail approximation in t = sqrt(-2 log pl)
    // (Abramowitz & Stegun 26.2.23, |error| < 4.5e-4).
    const double t = std::sqrt(-2.0 * std::log(pl));
    double x = -(t - (2.515517 + t * (0.802853 + t * 0.010328)) /
                         (1.0 + t * (1.432788 + t * (0.189269 + t * 0.001308))));

    // Halley refinement on Phi(x) - pl = 0; two steps reach ~1e-15 relative.
    for (int i = 0; i < 3; ++i) {
        const double err = normal_cdf(x) - pl;
        const double d = normal_pdf(x);
        if (d <= 0.0) break;
        const double u = err / d;
        const double step = u / (1.0 + 0.5 * u * x);
        x -= step;
        if (std::fabs(step) < 1e-14 * (1.0 + std::fabs(x))) break;
    }
    return upper ? -x : x;
}

double normal_quantile_logp(double log_p) {
    if (!(log_p <= 0.0)) {
        if (log_p == 0.0) return std::numeric_limits<double>::infinity();
        throw std::invalid_argument("normal_quantile_logp: log_p must be <= 0");
    }
    // exp(log_p) is still a healthy normal double: reuse the direct inverse.
    if (log_p > -690.0) return normal_quantile(std::exp(log_p));

    // Deep lower tail. Same rational initial guess as normal_quantile, with
    // t computed from log_p directly so nothing underflows.
    const double t = std::sqrt(-2.0 * log_p);
    double x = -(t - (2.515517 + t * (0.802853 + t * 0.010328)) /
                         (1.0 + t * (1.432788 + t * (0.189269 + t * 0.001308))));

    // Newton on log Phi(x) - log_p = 0. The derivative is phi/Phi, whose
    // reciprocal (the Mills ratio) is erfcx in disguise and stays finite
    // however far out the tail.
    for (int i = 0; i < 6; ++i) {
        const double mills = 0.5 * kSqrt2Pi * erfcx(-x * kInvSqrt2);
        const double step = (log_normal_cdf(x) - log_p) * mills;
        x -= step;
        if (std::fabs(step) < 1e-14 * std::fabs(x)) break;
    }
    return x;
}

}  // namespace ewspec
