// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 ewspec Project Contributors
#pragma once

// Reference quadrature for the tilted-Gaussian integrals
//
//     Q^r(h) = (tau / 2) int x^r exp(-tau |x|) N(h - x; 0, nu^2) dx,
//
// used to cross-check the closed-form evaluation in the library. The
// oracle deliberately takes a different route: adaptive Simpson on the
// peak-scaled integrand. The log of the integrand is evaluated directly
// (never exp'd before the peak value is subtracted), the integration
// range is capped by the Gaussian factor at +-45 nu around {0, h}, and
// the panel is pre-split at the kink x = 0 and at the stationary points
// h -+ nu^2 tau of the two exponential branches so the recursion never
// starts blind to a narrow interior peak. Results carry both a linear
// value and a (sign, log|value|) pair so comparisons stay meaningful
// when the linear value is denormal or zero.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace quad_oracle {

inline double log_integrand(double x, double h, double tau, double nu) {
    constexpr double kLogSqrt2Pi = 0.91893853320467274178;  // log sqrt(2 pi)
    const double z = (x - h) / nu;
    return std::log(0.5 * tau) - tau * std::abs(x) - 0.5 * z * z - std::log(nu) -
           kLogSqrt2Pi;
}

struct ScaledIntegral {
    double value = 0.0;     // exp(log peak) * scaled sum; may underflow to 0
    double log_abs = -std::numeric_limits<double>::infinity();
    int sign = 0;
};

namespace detail {

template <class F>
double adapt(F&& f, double a, double m, double b, double fa, double fm, double fb,
             double whole, double eps, int depth) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (fa + 4.0 * flm + fm) * (m - a) / 6.0;
    const double right = (fm + 4.0 * frm + fb) * (b - m) / 6.0;
    const double delta = left + right - whole;
    // Second condition: delta has reached the rounding floor of the
    // subtraction; past that point refinement only chases noise, and the
    // halved tolerance can never catch a noise floor that shrinks at the
    // same rate.
    const double noise =
        3e-15 * (std::abs(left) + std::abs(right) + std::abs(whole));
    if (depth <= 0 || std::abs(delta) <= 15.0 * eps || std::abs(delta) <= noise) {
        return left + right + delta / 15.0;
    }
    return adapt(f, a, lm, m, fa, flm, fm, left, 0.5 * eps, depth - 1) +
           adapt(f, m, rm, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
}

template <class F>
double integrate_segment(F&& f, double a, double b, double eps, int depth) {
    if (!(b > a)) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a);
    const double fm = f(m);
    const double fb = f(b);
    const double whole = (fa + 4.0 * fm + fb) * (b - a) / 6.0;
    return adapt(f, a, m, b, fa, fm, fb, whole, eps, depth);
}

}  // namespace detail

// Integral of w(x) * (tau/2) e^{-tau|x|} N(h - x; 0, nu^2) over the real
// line, for a caller-supplied weight w (1, x, x^2, |x|, ...).
template <class W>
ScaledIntegral integrate_weighted(W&& w, double h, double tau, double nu) {
    const double lo = std::min(0.0, h) - 45.0 * nu;
    const double hi = std::max(0.0, h) + 45.0 * nu;

    std::vector<double> knots = {lo, hi, 0.0, h, h - nu * nu * tau, h + nu * nu * tau};
    double log_peak = -std::numeric_limits<double>::infinity();
    for (double x : knots) {
        const double xc = std::clamp(x, lo, hi);
        log_peak = std::max(log_peak, log_integrand(xc, h, tau, nu));
    }

    // Flank every peak candidate at its own width. Without these the
    // first Simpson probe of a peak-adjacent segment can be blind: a
    // weight with a zero at the shared knot kills the one node where the
    // integrand is alive, and every other node sits in the Gaussian dead
    // zone.
    const double width = std::min(nu, 1.0 / tau);
    const std::vector<double> peaks = {0.0, h, h - nu * nu * tau, h + nu * nu * tau};
    for (double p : peaks) {
        for (double d : {1.0, 0.125}) {
            knots.push_back(p - d * width);
            knots.push_back(p + d * width);
        }
    }

    std::sort(knots.begin(), knots.end());
    knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
    std::vector<double> cuts;
    cuts.push_back(lo);
    for (double x : knots) {
        if (x > lo && x < hi) cuts.push_back(x);
    }
    cuts.push_back(hi);

    auto f = [&](double x) {
        return w(x) * std::exp(log_integrand(x, h, tau, nu) - log_peak);
    };

    // Coarse pass fixes the absolute tolerance; |.| per segment so an
    // antisymmetric weight cannot cancel the error budget away.
    double coarse = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        coarse += std::abs(detail::integrate_segment(f, cuts[i], cuts[i + 1], 1.0, 0));
    }
    const double eps_total = std::max(1e-13 * coarse, 1e-280);
    const double span = hi - lo;

    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double frac = (cuts[i + 1] - cuts[i]) / span;
        total += detail::integrate_segment(f, cuts[i], cuts[i + 1],
                                           std::max(eps_total * frac, 1e-300), 60);
    }

    ScaledIntegral out;
    if (total != 0.0) {
        out.sign = total > 0.0 ? 1 : -1;
        out.log_abs = log_peak + std::log(std::abs(total));
        out.value = out.sign * std::exp(out.log_abs);
    }
    return out;
}

struct QReference {
    ScaledIntegral q0;
    ScaledIntegral q1;
    ScaledIntegral q2;
    ScaledIntegral abs1;  // int |x| * integrand, the natural error scale for q1
};

inline QReference q_reference(double h, double tau, double nu) {
    QReference r;
    r.q0 = integrate_weighted([](double) { return 1.0; }, h, tau, nu);
    r.q1 = integrate_weighted([](double x) { return x; }, h, tau, nu);
    r.q2 = integrate_weighted([](double x) { return x * x; }, h, tau, nu);
    r.abs1 = integrate_weighted([](double x) { return std::abs(x); }, h, tau, nu);
    return r;
}

// log of the marginal mixture density alpha N(h; 0, nu^2) + (1-alpha) Q^0(h),
// assembled in log space from the quadrature Q^0.
inline double log_marginal(double h, double alpha, double nu,
                           const ScaledIntegral& q0) {
    constexpr double kLogSqrt2Pi = 0.91893853320467274178;
    const double z = h / nu;
    const double log_spike =
        std::log(alpha) - 0.5 * z * z - std::log(nu) - kLogSqrt2Pi;
    const double log_slab = std::log1p(-alpha) + q0.log_abs;
    const double m = std::max(log_spike, log_slab);
    return m + std::log(std::exp(log_spike - m) + std::exp(log_slab - m));
}

}  // namespace quad_oracle
