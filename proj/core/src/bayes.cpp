// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 ewspec Project Contributors
#include "ewspec/bayes.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>

#include "ewspec/rng.hpp"
#include "ewspec/special.hpp"
#include "ewspec/stats.hpp"

namespace ewspec {

namespace {

double logsumexp2(double a, double b) {
    if (a < b) std::swap(a, b);
    if (std::isinf(a) && a < 0.0) return a;
    return a + std::log1p(std::exp(b - a));
}

// Per-(tau, nu) constants and the stable evaluation of the two tilted
// Gaussian tails
//
//   E1 = e^{h tau + nu^2 tau^2 / 2} Phi(-mu1 / nu),   mu1 = h + nu^2 tau,
//   E2 = e^{-h tau + nu^2 tau^2 / 2} Phi(mu2 / nu),   mu2 = h - nu^2 tau.
//
// When the Phi argument is nonnegative the exponent is <= -nu^2 tau^2 / 2
// and the product is evaluated directly; otherwise the identity
// b_i - mu_i^2 / (2 nu^2) = -h^2 / (2 nu^2) turns the product into
// (1/2) e^{-h^2 / 2 nu^2} erfcx(|mu_i| / (nu sqrt 2)), which neither
// over- nor underflows prematurely.
struct TiltKernel {
    double tau, nu, inv_nu, nu_tau, half_nt2, log_tau_half;

    TiltKernel(double tau_, double nu_)
        : tau(tau_),
          nu(nu_),
          inv_nu(1.0 / nu_),
          nu_tau(nu_ * tau_),
          half_nt2(0.5 * nu_ * tau_ * nu_ * tau_),
          log_tau_half(std::log(0.5 * tau_)) {}

    struct Eval {
        double mu1, mu2;      // tilted means
        double m1, m2;        // mu / nu
        double log_e1, log_e2;
        double log_g;         // log of e^{-h^2/2nu^2} / sqrt(2 pi)
    };

    Eval operator()(double h) const {
        Eval e;
        const double hn = h * inv_nu;
        const double half_hn2 = 0.5 * hn * hn;
        e.log_g = -half_hn2 - kLogSqrt2Pi;
        e.mu1 = h + nu * nu_tau;
        e.mu2 = h - nu * nu_tau;
        e.m1 = e.mu1 * inv_nu;
        e.m2 = e.mu2 * inv_nu;
        if (e.m1 <= 0.0) {
            e.log_e1 = h * tau + half_nt2 + log_normal_cdf(-e.m1);
        } else {
            e.log_e1 = -half_hn2 + std::log(0.5 * erfcx(e.m1 * kInvSqrt2));
        }
        if (e.m2 >= 0.0) {
            e.log_e2 = -h * tau + half_nt2 + log_normal_cdf(e.m2);
        } else {
            e.log_e2 = -half_hn2 + std::log(0.5 * erfcx(-e.m2 * kInvSqrt2));
        }
        return e;
    }
};

// R(m) = (sqrt(2 pi) / 2) (1 + m^2) erfcx(m / sqrt 2) - m for m >= 0.
// This is the residual of the second-moment tail term after its leading
// linear part is cancelled analytically against the Gaussian cross term;
// assembling Q^2 from R avoids an 8-digit cancellation at large nu tau.
// R(m) ~ 2/m^3 for large m, so the direct formula (which subtracts two
// nearly equal O(m) quantities) is swapped for the asymptotic series
// R(m) = sum_{j>=1} (-1)^{j+1} 2j (2j-1)!! m^{-(2j+1)} once that series
// is the more accurate of the two.
double tilted_r(double m) {
    if (m < 20.0) {
        return 0.5 * kSqrt2Pi * (1.0 + m * m) * erfcx(m * kInvSqrt2) - m;
    }
    const double inv_m2 = 1.0 / (m * m);
    double coeff = 2.0;  // 2j (2j-1)!! with alternating sign, j = 1
    double power = inv_m2 / m;
    double sum = 0.0;
    for (int j = 1; j <= 12; ++j) {
        sum += coeff * power;
        power *= inv_m2;
        const double dj = static_cast<double>(j);
        coeff *= -(2.0 * dj + 2.0) * (2.0 * dj + 1.0) / (2.0 * dj);
    }
    return sum;
}

void check_params(double tau, double nu, const char* who) {
    if (!std::isfinite(tau) || !std::isfinite(nu) || tau <= 0.0 || nu <= 0.0) {
        throw std::invalid_argument(std::string(who) + ": tau and nu must be finite and positive");
    }
}

// Second-moment numerator (nu^2 + mu1^2) E1 + (nu^2 + mu2^2) E2
// - 2 tau nu^3 G, assembled per regime through tilted_r, in units where
// E_i and G carry a common scale factor exp(-shift). `s1`, `s2`, `gs`
// are the scaled values of (tau/2) E1, (tau/2) E2, (tau/2) G.
double second_moment_num(const TiltKernel& k, const TiltKernel::Eval& e, double s1,
                         double s2, double gs) {
    const double nu2 = k.nu * k.nu;
    if (e.m2 >= 0.0) {  // h >= nu^2 tau: E2 is bulk, E1 tail
        return (nu2 + e.mu2 * e.mu2) * s2 + nu2 * gs * (tilted_r(e.m1) + e.m2);
    }
    if (e.m1 <= 0.0) {  // h <= -nu^2 tau: mirrored
        return (nu2 + e.mu1 * e.mu1) * s1 + nu2 * gs * (tilted_r(-e.m2) - e.m1);
    }
    // |h| < nu^2 tau: both tails; the linear parts cancel exactly.
    return nu2 * gs * (tilted_r(e.m1) + tilted_r(-e.m2));
}

}  // namespace

QIntegrals q_integrals(double h, double tau, double nu) {
    if (!std::isfinite(h)) throw std::invalid_argument("q_integrals: h must be finite");
    check_params(tau, nu, "q_integrals");
    const TiltKernel k(tau, nu);
    const auto e = k(h);
    const double th = 0.5 * tau;
    const double s1 = th * std::exp(e.log_e1);
    const double s2 = th * std::exp(e.log_e2);
    const double gs = th * std::exp(e.log_g);
    QIntegrals q;
    q.q0 = s1 + s2;
    q.q1 = e.mu1 * s1 + e.mu2 * s2;
    q.q2 = second_moment_num(k, e, s1, s2, gs);
    return q;
}

PosteriorMoments posterior_moments(double h, const HyperParams& hp) {
    if (!std::isfinite(h)) throw std::invalid_argument("posterior_moments: h must be finite");
    check_params(hp.tau, hp.nu, "posterior_moments");
    if (!(hp.alpha > 0.0 && hp.alpha < 1.0)) {
        throw std::invalid_argument("posterior_moments: alpha must lie in (0, 1)");
    }
    const TiltKernel k(hp.tau, hp.nu);
    const auto e = k(h);

    // Everything in a common exponential scale so the weights stay
    // representable out to |h| / nu in the hundreds.
    const double lw0 = std::log(hp.theta()) + e.log_g - std::log(hp.nu);
    const double lt1 = k.log_tau_half + e.log_e1;
    const double lt2 = k.log_tau_half + e.log_e2;
    const double shift = std::max(lw0, std::max(lt1, lt2));
    const double p = std::exp(lw0 - shift);
    const double s1 = std::exp(lt1 - shift);
    const double s2 = std::exp(lt2 - shift);
    const double gs = std::exp(k.log_tau_half + e.log_g - shift);
    const double denom = p + s1 + s2;

    PosteriorMoments out;
    out.spike_weight = p / denom;
    out.mean = (e.mu1 * s1 + e.mu2 * s2) / denom;
    const double ex2 = second_moment_num(k, e, s1, s2, gs) / denom;
    out.variance = std::max(0.0, ex2 - out.mean * out.mean);
    return out;
}

namespace {

// Non-throwing log-likelihood; returns NaN and sets *bad on a non-finite
// term so the optimizer can treat it as an infeasible point.
double loglik_impl(std::span<const double> h, double alpha, double tau, double nu,
                   std::size_t* bad) {
    const TiltKernel k(tau, nu);
    const double log_alpha = std::log(alpha);
    const double log1m_alpha = std::log1p(-alpha);
    const double log_nu = std::log(nu);
    double sum = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i) {
        const auto e = k(h[i]);
        const double lspike = log_alpha + e.log_g - log_nu;
        const double lslab = log1m_alpha + k.log_tau_half + logsumexp2(e.log_e1, e.log_e2);
        const double term = logsumexp2(lspike, lslab);
        if (!std::isfinite(term)) {
            if (bad != nullptr) *bad = i;
            return std::numeric_limits<double>::quiet_NaN();
        }
        sum += term;
    }
    return sum;
}

}  // namespace

double marginal_loglik(std::span<const double> h, double alpha, double tau, double nu) {
    check_params(tau, nu, "marginal_loglik");
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("marginal_loglik: alpha must lie in (0, 1)");
    }
    std::size_t bad = 0;
    const double ll = loglik_impl(h, alpha, tau, nu, &bad);
    if (std::isnan(ll)) {
        throw std::runtime_error("marginal_loglik: non-finite term at coefficient " +
                                 std::to_string(bad));
    }
    return ll;
}

namespace {

// One draw from N(mu, nu^2) conditioned on the draw being <= 0, by inverse
// CDF on the truncated region; u is uniform on (0, 1). Composed in the log
// domain: when the tilted mean sits far on the wrong side of zero the
// region probability Phi(a) underflows a double, yet the conditional draw
// is perfectly well defined.
double truncated_below_zero(double mu, double nu, double u) {
    const double a = -mu / nu;
    const double lp = std::log(u) + log_normal_cdf(a);
    double z = normal_quantile_logp(lp);
    if (z > a) z = a;  // guard the truncation boundary against rounding
    return mu + nu * z;
}

}  // namespace

double sample_posterior(double h, const HyperParams& hp, std::mt19937_64& engine) {
    if (!std::isfinite(h)) throw std::invalid_argument("sample_posterior: h must be finite");
    check_params(hp.tau, hp.nu, "sample_posterior");
    if (!(hp.alpha > 0.0 && hp.alpha < 1.0)) {
        throw std::invalid_argument("sample_posterior: alpha must lie in (0, 1)");
    }
    const TiltKernel k(hp.tau, hp.nu);
    const auto e = k(h);
    const double lw0 = std::log(hp.theta()) + e.log_g - std::log(hp.nu);
    const double lt1 = k.log_tau_half + e.log_e1;
    const double lt2 = k.log_tau_half + e.log_e2;
    const double shift = std::max(lw0, std::max(lt1, lt2));
    const double p = std::exp(lw0 - shift);
    const double s1 = std::exp(lt1 - shift);
    const double s2 = std::exp(lt2 - shift);

    if (uniform_open(engine) * (p + s1 + s2) < p) return 0.0;
    const double side = uniform_open(engine) * (s1 + s2);
    const double u = uniform_open(engine);
    if (side < s1) return truncated_below_zero(e.mu1, hp.nu, u);
    return -truncated_below_zero(-e.mu2, hp.nu, u);
}

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double logit(double f) { return std::log(f / (1.0 - f)); }

// Box-constrained 3-parameter space mapped to unconstrained coordinates:
// alpha linear in its box, tau and nu log-scaled in theirs.
struct ParamBox {
    double alpha_lo, alpha_hi;
    double log_tau_lo, log_tau_hi;
    double log_nu_lo, log_nu_hi;

    void decode(const std::array<double, 3>& p, double& alpha, double& tau,
                double& nu) const {
        alpha = alpha_lo + (alpha_hi - alpha_lo) * sigmoid(p[0]);
        tau = std::exp(log_tau_lo + (log_tau_hi - log_tau_lo) * sigmoid(p[1]));
        nu = std::exp(log_nu_lo + (log_nu_hi - log_nu_lo) * sigmoid(p[2]));
    }

    std::array<double, 3> encode(double alpha, double tau, double nu) const {
        auto frac = [](double v, double lo, double hi) {
            const double f = (v - lo) / (hi - lo);
            return std::clamp(f, 1e-9, 1.0 - 1e-9);
        };
        return {logit(frac(alpha, alpha_lo, alpha_hi)),
                logit(frac(std::log(tau), log_tau_lo, log_tau_hi)),
                logit(frac(std::log(nu), log_nu_lo, log_nu_hi))};
    }

    bool near_edge(const std::array<double, 3>& p) const {
        for (double c : p) {
            const double f = sigmoid(c);
            if (f <= 1e-3 || f >= 1.0 - 1e-3) return true;
        }
        return false;
    }
};

struct NelderMeadResult {
    std::array<double, 3> x{};
    double fx = 0.0;
    bool converged = false;
};

template <typename F>
NelderMeadResult nelder_mead3(F&& f, const std::array<double, 3>& x0, double step,
                              double tol, int max_iterations) {
    constexpr int n = 3;
    std::array<std::array<double, 3>, n + 1> v;
    std::array<double, n + 1> fv;
    v[0] = x0;
    for (int i = 1; i <= n; ++i) {
        v[i] = x0;
        v[i][i - 1] += step;
    }
    for (int i = 0; i <= n; ++i) fv[i] = f(v[i]);

    auto order = [&] {
        for (int i = 1; i <= n; ++i) {
            for (int j = i; j > 0 && fv[j] < fv[j - 1]; --j) {
                std::swap(fv[j], fv[j - 1]);
                std::swap(v[j], v[j - 1]);
            }
        }
    };

    bool converged = false;
    for (int it = 0; it < max_iterations; ++it) {
        order();
        if (fv[n] - fv[0] <= tol * (1.0 + std::fabs(fv[0]))) {
            converged = true;
            break;
        }
        std::array<double, 3> centroid{};
        for (int i = 0; i < n; ++i) {
            for (int d = 0; d < n; ++d) centroid[d] += v[i][d] / n;
        }
        auto along = [&](double t) {
            std::array<double, 3> x;
            for (int d = 0; d < n; ++d) x[d] = centroid[d] + t * (centroid[d] - v[n][d]);
            return x;
        };
        const auto xr = along(1.0);
        const double fr = f(xr);
        if (fr < fv[0]) {
            const auto xe = along(2.0);
            const double fe = f(xe);
            if (fe < fr) {
                v[n] = xe;
                fv[n] = fe;
            } else {
                v[n] = xr;
                fv[n] = fr;
            }
            continue;
        }
        if (fr < fv[n - 1]) {
            v[n] = xr;
            fv[n] = fr;
            continue;
        }
        const bool outside = fr < fv[n];
        const auto xc = along(outside ? 0.5 : -0.5);
        const double fc = f(xc);
        if ((outside && fc <= fr) || (!outside && fc < fv[n])) {
            v[n] = xc;
            fv[n] = fc;
            continue;
        }
        for (int i = 1; i <= n; ++i) {  // shrink toward the best vertex
            for (int d = 0; d < n; ++d) v[i][d] = v[0][d] + 0.5 * (v[i][d] - v[0][d]);
            fv[i] = f(v[i]);
        }
    }
    order();
    return {v[0], fv[0], converged};
}

HyperParams fit_one_level(std::span<const double> h, double nu0,
                          const MmleOptions& options) {
    std::vector<double> work(h.begin(), h.end());
    double scale = mad_stddev(work);
    if (scale < 1e-12) scale = 1e-12;
    double nu_ref = nu0;
    if (nu_ref < 1e-12) nu_ref = 1e-12;

    ParamBox box;
    box.alpha_lo = 0.01;
    box.alpha_hi = 0.999;
    box.log_tau_lo = std::log(1e-3 * scale);
    box.log_tau_hi = std::log(1e3 * scale);
    box.log_nu_lo = std::log(1e-3 * nu_ref);
    box.log_nu_hi = std::log(1e3 * nu_ref);

    const double sd = h.size() > 1 ? sample_stddev(h) : 0.0;
    double tau0 = sd > 0.0 ? 1.0 / sd : 1e3 * scale;
    tau0 = std::clamp(tau0, 1e-3 * scale, 1e3 * scale);

    const auto x0 = box.encode(0.9, tau0, nu_ref);
    auto objective = [&](const std::array<double, 3>& p) {
        double alpha;
        double tau;
        double nu;
        box.decode(p, alpha, tau, nu);
        const double ll = loglik_impl(h, alpha, tau, nu, nullptr);
        return std::isfinite(ll) ? -ll : std::numeric_limits<double>::infinity();
    };
    const auto res = nelder_mead3(objective, x0, 0.5, options.tolerance,
                                  options.max_iterations);

    HyperParams hp;
    box.decode(res.x, hp.alpha, hp.tau, hp.nu);
    hp.converged = res.converged;
    hp.boundary = box.near_edge(res.x);
    return hp;
}

}  // namespace

std::vector<HyperParams> fit_mmle(const DwtCoefficients& coeffs,
                                  const MmleOptions& options) {
    const int levels = coeffs.levels();
    if (levels < 5) {
        throw std::invalid_argument("fit_mmle requires at least 5 decomposition levels");
    }
    const int tied = std::clamp(options.tied_levels, 1, levels - 1);

    std::vector<double> finest(coeffs.details.back());
    double nu0 = mad_stddev(finest);
    if (nu0 < 1e-12) nu0 = 1e-12;

    std::vector<HyperParams> out(static_cast<std::size_t>(levels));

    // Pooled fit over the sparse coarse levels, anchored at the finest of
    // them; the remaining coarse levels inherit by halving tau and
    // doubling the spike odds per step toward the root, clipped back into
    // the pooled box.
    std::vector<double> pooled;
    for (int l = 0; l < tied; ++l) {
        const auto& d = coeffs.details[static_cast<std::size_t>(l)];
        pooled.insert(pooled.end(), d.begin(), d.end());
    }
    const HyperParams anchor = fit_one_level(pooled, nu0, options);
    out[static_cast<std::size_t>(tied - 1)] = anchor;

    std::vector<double> pooled_copy = pooled;
    double pool_scale = mad_stddev(pooled_copy);
    if (pool_scale < 1e-12) pool_scale = 1e-12;
    for (int l = tied - 2; l >= 0; --l) {
        HyperParams hp = out[static_cast<std::size_t>(l + 1)];
        const double theta = 2.0 * hp.theta();
        hp.alpha = std::clamp(theta / (1.0 + theta), 0.01, 0.999);
        hp.tau = std::clamp(0.5 * hp.tau, 1e-3 * pool_scale, 1e3 * pool_scale);
        out[static_cast<std::size_t>(l)] = hp;
    }

    for (int l = tied; l < levels; ++l) {
        out[static_cast<std::size_t>(l)] =
            fit_one_level(coeffs.details[static_cast<std::size_t>(l)], nu0, options);
    }
    return out;
}

}  // namespace ewspec
