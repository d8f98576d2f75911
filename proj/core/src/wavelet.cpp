// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 ewspec Project Contributors
#include "ewspec/wavelet.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <stdexcept>

#include "ewspec/special.hpp"

namespace ewspec {

namespace {

bool is_power_of_two(std::size_t n) {
    return n != 0 && (n & (n - 1)) == 0;
}

int log2_exact(std::size_t n) {
    int j = 0;
    while ((std::size_t{1} << j) < n) ++j;
    return j;
}

std::size_t imod(long a, std::size_t n) {
    const long m = static_cast<long>(n);
    long r = a % m;
    if (r < 0) r += m;
    return static_cast<std::size_t>(r);
}

void validate_lowpass(std::span<const double> h, WaveletFamily family, int vm) {
    const std::size_t L = h.size();
    double sum = 0.0;
    for (double c : h) sum += c;
    if (std::fabs(sum - kSqrt2) > 1e-12) {
        throw std::runtime_error("wavelet filter table failed sum(h) = sqrt(2) check: " +
                                 std::to_string(vm) + (family == WaveletFamily::ExtremalPhase ? " ep" : " la"));
    }
    for (std::size_t m = 0; 2 * m < L; ++m) {
        double dot = 0.0;
        for (std::size_t n = 0; n + 2 * m < L; ++n) dot += h[n] * h[n + 2 * m];
        const double target = m == 0 ? 1.0 : 0.0;
        if (std::fabs(dot - target) > 1e-12) {
            throw std::runtime_error("wavelet filter table failed orthonormality check");
        }
    }
}

// Convolve acc with kernel upsampled by `stride` (stride-1 zeros between taps).
std::vector<double> conv_upsampled(const std::vector<double>& acc,
                                   std::span<const double> kernel, long stride) {
    const long nk = static_cast<long>(kernel.size());
    std::vector<double> out(acc.size() + static_cast<std::size_t>((nk - 1) * stride), 0.0);
    for (std::size_t i = 0; i < acc.size(); ++i) {
        const double a = acc[i];
        if (a == 0.0) continue;
        for (long n = 0; n < nk; ++n) {
            out[i + static_cast<std::size_t>(n * stride)] += a * kernel[static_cast<std::size_t>(n)];
        }
    }
    return out;
}

std::vector<double> autocorrelate(std::span<const double> v) {
    const long L = static_cast<long>(v.size());
    std::vector<double> out(static_cast<std::size_t>(2 * L - 1), 0.0);
    for (long tau = -(L - 1); tau <= L - 1; ++tau) {
        double s = 0.0;
        for (long k = std::max(0L, tau); k < std::min(L, L + tau); ++k) {
            s += v[static_cast<std::size_t>(k)] * v[static_cast<std::size_t>(k - tau)];
        }
        out[static_cast<std::size_t>(tau + L - 1)] = s;
    }
    return out;
}

}  // namespace

WaveletFilter::WaveletFilter(WaveletFamily family, int vanishing_moments)
    : family_(family), vanishing_moments_(vanishing_moments) {
    if (family == WaveletFamily::ExtremalPhase) {
        if (vanishing_moments < 1 || vanishing_moments > 10) {
            throw std::invalid_argument(
                "extremal-phase filters support 1..10 vanishing moments");
        }
    } else {
        if (vanishing_moments < 4 || vanishing_moments > 10) {
            throw std::invalid_argument(
                "least-asymmetric filters support only 4..10 vanishing moments");
        }
    }
    const auto h = detail::daubechies_lowpass(family, vanishing_moments);
    validate_lowpass(h, family, vanishing_moments);
    lowpass_.assign(h.begin(), h.end());
    const std::size_t L = lowpass_.size();
    highpass_.resize(L);
    for (std::size_t n = 0; n < L; ++n) {
        const double sign = (n % 2 == 0) ? 1.0 : -1.0;
        highpass_[n] = sign * lowpass_[L - 1 - n];
    }
}

WaveletFilter WaveletFilter::parse(std::string_view spec) {
    std::string s;
    s.reserve(spec.size());
    for (char c : spec) s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (s == "haar") return WaveletFilter(WaveletFamily::ExtremalPhase, 1);
    auto fail = [&] {
        std::string msg = "unknown wavelet spec '" + std::string(spec) + "'; supported:";
        for (const auto& name : supported_filter_specs()) msg += " " + name;
        return std::invalid_argument(msg);
    };
    if (s.size() < 3 || s.size() > 4) throw fail();
    WaveletFamily family;
    if (s.rfind("ep", 0) == 0) {
        family = WaveletFamily::ExtremalPhase;
    } else if (s.rfind("la", 0) == 0) {
        family = WaveletFamily::LeastAsymmetric;
    } else {
        throw fail();
    }
    int vm = 0;
    for (std::size_t i = 2; i < s.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) throw fail();
        vm = vm * 10 + (s[i] - '0');
    }
    const int lo = family == WaveletFamily::ExtremalPhase ? 1 : 4;
    if (vm < lo || vm > 10) throw fail();
    return WaveletFilter(family, vm);
}

std::string WaveletFilter::spec() const {
    const char* prefix = family_ == WaveletFamily::ExtremalPhase ? "ep" : "la";
    return prefix + std::to_string(vanishing_moments_);
}

std::vector<std::string> supported_filter_specs() {
    std::vector<std::string> out;
    out.emplace_back("haar");
    for (int vm = 1; vm <= 10; ++vm) out.push_back("ep" + std::to_string(vm));
    for (int vm = 4; vm <= 10; ++vm) out.push_back("la" + std::to_string(vm));
    return out;
}

long wavelet_support(const WaveletFilter& filter, int scale) {
    if (scale < 1) throw std::invalid_argument("wavelet scale must be >= 1");
    const long L = filter.length();
    return ((1L << scale) - 1) * (L - 1) + 1;
}

namespace {

std::vector<double> cascade(const WaveletFilter& filter, int scale, bool wavelet) {
    if (scale < 1) throw std::invalid_argument("wavelet scale must be >= 1");
    std::vector<double> acc{1.0};
    for (int s = 0; s < scale - 1; ++s) {
        acc = conv_upsampled(acc, filter.lowpass(), 1L << s);
    }
    const auto& top = wavelet ? filter.highpass() : filter.lowpass();
    return conv_upsampled(acc, top, 1L << (scale - 1));
}

}  // namespace

std::vector<double> discrete_wavelet(const WaveletFilter& filter, int scale) {
    return cascade(filter, scale, true);
}

std::vector<double> discrete_scaling(const WaveletFilter& filter, int scale) {
    return cascade(filter, scale, false);
}

DwtCoefficients dwt(std::span<const double> x, const WaveletFilter& filter) {
    if (!is_power_of_two(x.size())) {
        throw std::invalid_argument("dwt requires a power-of-two signal length");
    }
    const int J = log2_exact(x.size());
    DwtCoefficients out;
    out.details.resize(static_cast<std::size_t>(J));
    const auto& h = filter.lowpass();
    const auto& g = filter.highpass();
    const long L = filter.length();

    std::vector<double> approx(x.begin(), x.end());
    for (int stage = 1; stage <= J; ++stage) {
        const std::size_t n = approx.size();
        const std::size_t half = n / 2;
        std::vector<double> next(half, 0.0);
        std::vector<double> det(half, 0.0);
        for (std::size_t k = 0; k < half; ++k) {
            double sa = 0.0;
            double sd = 0.0;
            for (long nn = 0; nn < L; ++nn) {
                const double v = approx[imod(2 * static_cast<long>(k) - nn, n)];
                sa += h[static_cast<std::size_t>(nn)] * v;
                sd += g[static_cast<std::size_t>(nn)] * v;
            }
            next[k] = sa;
            det[k] = sd;
        }
        out.details[static_cast<std::size_t>(J - stage)] = std::move(det);
        approx = std::move(next);
    }
    out.scaling = approx[0];
    return out;
}

std::vector<double> idwt(const DwtCoefficients& coeffs, const WaveletFilter& filter) {
    const int J = coeffs.levels();
    const auto& h = filter.lowpass();
    const auto& g = filter.highpass();
    const long L = filter.length();

    std::vector<double> approx{coeffs.scaling};
    for (int l = 0; l < J; ++l) {
        const auto& det = coeffs.details[static_cast<std::size_t>(l)];
        const std::size_t half = approx.size();
        if (det.size() != half) {
            throw std::invalid_argument("idwt: level " + std::to_string(l) +
                                        " has inconsistent coefficient count");
        }
        const std::size_t n = 2 * half;
        std::vector<double> next(n, 0.0);
        for (std::size_t k = 0; k < half; ++k) {
            const double a = approx[k];
            const double d = det[k];
            for (long nn = 0; nn < L; ++nn) {
                next[imod(2 * static_cast<long>(k) - nn, n)] +=
                    h[static_cast<std::size_t>(nn)] * a + g[static_cast<std::size_t>(nn)] * d;
            }
        }
        approx = std::move(next);
    }
    return approx;
}

namespace {

NdwtCoefficients ndwt_impl(std::span<const double> x, const WaveletFilter& filter,
                           int n_scales) {
    if (!is_power_of_two(x.size())) {
        throw std::invalid_argument("ndwt requires a power-of-two signal length");
    }
    const int J = log2_exact(x.size());
    if (n_scales < 1 || n_scales > J) {
        throw std::invalid_argument("ndwt: n_scales must be in 1..log2(T)");
    }
    const std::size_t T = x.size();
    const auto& h = filter.lowpass();
    const auto& g = filter.highpass();
    const long L = filter.length();

    NdwtCoefficients out;
    out.details = Matrix(static_cast<std::size_t>(n_scales), T);
    std::vector<double> c(x.begin(), x.end());
    std::vector<double> next(T, 0.0);
    for (int j = 1; j <= n_scales; ++j) {
        const long stride = 1L << (j - 1);
        double* row = out.details.row(static_cast<std::size_t>(j - 1));
        for (std::size_t k = 0; k < T; ++k) {
            double sd = 0.0;
            double sa = 0.0;
            for (long nn = 0; nn < L; ++nn) {
                const double v = c[imod(static_cast<long>(k) - stride * nn, T)];
                sd += g[static_cast<std::size_t>(nn)] * v;
                sa += h[static_cast<std::size_t>(nn)] * v;
            }
            row[k] = sd;
            next[k] = sa;
        }
        std::swap(c, next);
    }
    out.smooth = std::move(c);
    return out;
}

}  // namespace

Matrix ndwt(std::span<const double> x, const WaveletFilter& filter, int n_scales) {
    return ndwt_impl(x, filter, n_scales).details;
}

NdwtCoefficients ndwt_full(std::span<const double> x, const WaveletFilter& filter,
                           int n_scales) {
    return ndwt_impl(x, filter, n_scales);
}

std::vector<double> ndwt_inverse(const NdwtCoefficients& coeffs,
                                 const WaveletFilter& filter) {
    const std::size_t T = coeffs.smooth.size();
    const int n_scales = static_cast<int>(coeffs.details.rows());
    if (coeffs.details.cols() != T) {
        throw std::invalid_argument("ndwt_inverse: inconsistent coefficient shapes");
    }
    const auto& h = filter.lowpass();
    const auto& g = filter.highpass();
    const long L = filter.length();

    std::vector<double> c = coeffs.smooth;
    std::vector<double> prev(T, 0.0);
    for (int j = n_scales; j >= 1; --j) {
        const long stride = 1L << (j - 1);
        const double* row = coeffs.details.row(static_cast<std::size_t>(j - 1));
        for (std::size_t m = 0; m < T; ++m) {
            double s = 0.0;
            for (long nn = 0; nn < L; ++nn) {
                const std::size_t idx = imod(static_cast<long>(m) + stride * nn, T);
                s += h[static_cast<std::size_t>(nn)] * c[idx] +
                     g[static_cast<std::size_t>(nn)] * row[idx];
            }
            prev[m] = 0.5 * s;
        }
        std::swap(c, prev);
    }
    return c;
}

AutocorrelationWavelet autocorrelation_wavelet(const WaveletFilter& filter, int scale) {
    if (scale < 1) throw std::invalid_argument("autocorrelation_wavelet: scale must be >= 1");
    // acorr(a * b) = acorr(a) * acorr(b), and upsampling commutes with
    // autocorrelation, so the cascade can be run on the (short) filter
    // autocorrelations instead of the full wavelet vector.
    const auto ah = autocorrelate(filter.lowpass());
    const auto ag = autocorrelate(filter.highpass());
    std::vector<double> acc{1.0};
    for (int s = 0; s < scale - 1; ++s) {
        acc = conv_upsampled(acc, ah, 1L << s);
    }
    acc = conv_upsampled(acc, ag, 1L << (scale - 1));

    AutocorrelationWavelet out;
    out.scale = scale;
    out.values = std::move(acc);
    // enforce exact evenness in tau (true analytically; symmetrize rounding)
    const std::size_t n = out.values.size();
    for (std::size_t i = 0; i < n / 2; ++i) {
        const double v = 0.5 * (out.values[i] + out.values[n - 1 - i]);
        out.values[i] = v;
        out.values[n - 1 - i] = v;
    }
    return out;
}

InnerProductMatrix inner_product_matrix(const WaveletFilter& filter, int n_scales) {
    if (n_scales < 1) {
        throw std::invalid_argument("inner_product_matrix: n_scales must be >= 1");
    }
    std::vector<AutocorrelationWavelet> acw;
    acw.reserve(static_cast<std::size_t>(n_scales));
    for (int j = 1; j <= n_scales; ++j) {
        acw.push_back(autocorrelation_wavelet(filter, j));
    }
    InnerProductMatrix out;
    out.a = Matrix(static_cast<std::size_t>(n_scales), static_cast<std::size_t>(n_scales));
    for (int j = 0; j < n_scales; ++j) {
        for (int l = j; l < n_scales; ++l) {
            const long m = std::min(acw[static_cast<std::size_t>(j)].max_lag(),
                                    acw[static_cast<std::size_t>(l)].max_lag());
            double s = 0.0;
            for (long tau = -m; tau <= m; ++tau) {
                s += acw[static_cast<std::size_t>(j)].at(tau) *
                     acw[static_cast<std::size_t>(l)].at(tau);
            }
            out.a(static_cast<std::size_t>(j), static_cast<std::size_t>(l)) = s;
            out.a(static_cast<std::size_t>(l), static_cast<std::size_t>(j)) = s;
        }
    }
    out.inverse = invert(out.a);
    out.condition = norm_1(out.a) * norm_1(out.inverse);
    if (!(out.condition <= 1e12)) {
        throw std::runtime_error("inner_product_matrix: numerically singular at " +
                                 std::to_string(n_scales) + " scales for filter " +
                                 filter.spec() + " (condition " +
                                 std::to_string(out.condition) + ")");
    }
    return out;
}

}  // namespace ewspec
