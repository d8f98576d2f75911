// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 ewspec Project Contributors
#include "ewspec/estimate.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

#include "ewspec/haar_fisz.hpp"
#include "ewspec/parallel.hpp"
#include "ewspec/rng.hpp"
#include "ewspec/stats.hpp"

namespace ewspec {

namespace {

bool is_power_of_two(std::size_t n) {
    return n != 0 && (n & (n - 1)) == 0;
}

std::size_t imod(long a, std::size_t n) {
    const long m = static_cast<long>(n);
    long r = a % m;
    if (r < 0) r += m;
    return static_cast<std::size_t>(r);
}

double mse_cells(const Matrix& estimate, const Matrix& truth) {
    double sum = 0.0;
    for (std::size_t i = 0; i < truth.data.size(); ++i) {
        const double d = estimate.data[i] - truth.data[i];
        sum += d * d;
    }
    return sum / static_cast<double>(truth.data.size());
}

// Shared core of estimate_ews and the benchmark's point-only path.
// n_samples == 0 produces the point estimate without any RNG use.
EwsEstimate estimate_impl(const Matrix& periodogram, const InnerProductMatrix& ipm,
                          const WaveletFilter& analysis, const WaveletFilter& smoothing,
                          const EstimateOptions& opts) {
    const std::size_t T = periodogram.cols();
    const int J = static_cast<int>(periodogram.rows());
    const int spins = opts.spins;
    const int n_samples = opts.identity_shrink ? 0 : opts.n_samples;
    const int threads = resolve_threads(opts.threads);

    // Evenly spaced circular shifts applied to the periodogram rows.
    std::vector<std::size_t> shift(static_cast<std::size_t>(spins));
    for (int s = 0; s < spins; ++s) {
        shift[static_cast<std::size_t>(s)] =
            (static_cast<std::size_t>(s) * T) / static_cast<std::size_t>(spins);
    }
    // Posterior realizations are pooled over spins: spin s contributes the
    // realizations [base[s], base[s+1]).
    std::vector<int> base(static_cast<std::size_t>(spins) + 1, 0);
    for (int s = 0; s < spins; ++s) {
        const int share = n_samples / spins + (s < n_samples % spins ? 1 : 0);
        base[static_cast<std::size_t>(s) + 1] = base[static_cast<std::size_t>(s)] + share;
    }

    std::vector<Matrix> spin_point(static_cast<std::size_t>(spins), Matrix(periodogram.rows(), T));
    std::vector<Matrix> realizations(static_cast<std::size_t>(n_samples),
                                     Matrix(periodogram.rows(), T));
    const std::size_t n_units = static_cast<std::size_t>(spins) * static_cast<std::size_t>(J);
    std::vector<std::uint64_t> unit_rejected(n_units, 0);
    std::vector<std::uint64_t> unit_attempts(n_units, 0);

    parallel_for(n_units, threads, [&](std::size_t u) {
        const int s = static_cast<int>(u) / J;
        const int j = static_cast<int>(u) % J + 1;
        const std::size_t sigma = shift[static_cast<std::size_t>(s)];
        const double* irow = periodogram.row(static_cast<std::size_t>(j - 1));

        std::vector<double> row(T);
        for (std::size_t k = 0; k < T; ++k) {
            row[k] = irow[(k + sigma) % T];
        }
        const std::vector<double> stabilized = haar_fisz_forward(row);
        const DwtCoefficients coeffs = dwt(stabilized, smoothing);

        std::vector<HyperParams> fits;
        if (!opts.identity_shrink) fits = fit_mmle(coeffs, opts.mmle);

        // Point estimate: posterior-mean shrinkage of every detail
        // coefficient; the scaling coefficient passes through. Shrinkage can
        // push the stabilized sequence marginally outside the inverse's
        // domain (quotients at +-1 mark zero cells in the input), so the
        // point path uses the projection inverse.
        DwtCoefficients shrunk = coeffs;
        if (!opts.identity_shrink) {
            for (std::size_t l = 0; l < shrunk.details.size(); ++l) {
                for (double& v : shrunk.details[l]) {
                    v = posterior_moments(v, fits[l]).mean;
                }
            }
        }
        const std::vector<double> rebuilt = haar_fisz_inverse_clamped(idwt(shrunk, smoothing));
        double* prow = spin_point[static_cast<std::size_t>(s)].row(static_cast<std::size_t>(j - 1));
        for (std::size_t k = 0; k < T; ++k) {
            prow[k] = rebuilt[imod(static_cast<long>(k) - static_cast<long>(sigma), T)];
        }

        // Posterior realizations for this spin's share, redrawing any draw
        // whose reconstruction falls outside the stabilizer's range.
        const int draws = base[static_cast<std::size_t>(s) + 1] - base[static_cast<std::size_t>(s)];
        if (draws == 0) return;
        auto engine = make_engine(derive_seed(opts.seed, static_cast<std::uint64_t>(s),
                                              static_cast<std::uint64_t>(j)));
        DwtCoefficients draw = coeffs;
        std::vector<double> inverted;
        for (int d = 0; d < draws; ++d) {
            for (int attempt = 0;; ++attempt) {
                if (attempt >= 200) {
                    throw std::runtime_error(
                        "estimate: 200 consecutive posterior draws rejected at spin " +
                        std::to_string(s) + ", scale " + std::to_string(j));
                }
                ++unit_attempts[u];
                for (std::size_t l = 0; l < coeffs.details.size(); ++l) {
                    for (std::size_t m = 0; m < coeffs.details[l].size(); ++m) {
                        draw.details[l][m] =
                            sample_posterior(coeffs.details[l][m], fits[l], engine);
                    }
                }
                if (try_haar_fisz_inverse(idwt(draw, smoothing), inverted)) break;
                ++unit_rejected[u];
            }
            double* rrow = realizations[static_cast<std::size_t>(base[static_cast<std::size_t>(s)] + d)]
                               .row(static_cast<std::size_t>(j - 1));
            for (std::size_t k = 0; k < T; ++k) {
                rrow[k] = inverted[imod(static_cast<long>(k) - static_cast<long>(sigma), T)];
            }
        }
    });

    EwsEstimate out;
    out.analysis_spec = analysis.spec();
    out.smoothing_spec = smoothing.spec();
    out.spins = spins;
    out.n_samples = n_samples;
    out.seed = opts.seed;
    for (std::uint64_t v : unit_rejected) out.rejected_draws += v;
    for (std::uint64_t v : unit_attempts) out.total_draws += v;
    if (out.total_draws > 0 && 2 * out.rejected_draws > out.total_draws) {
        throw std::runtime_error("estimate: posterior draw rejection rate above 50% (" +
                                 std::to_string(out.rejected_draws) + " of " +
                                 std::to_string(out.total_draws) + ")");
    }

    // Average the per-spin point estimates in spin order, then apply the
    // bias correction per location.
    Matrix avg(periodogram.rows(), T);
    for (int s = 0; s < spins; ++s) {
        for (std::size_t i = 0; i < avg.data.size(); ++i) {
            avg.data[i] += spin_point[static_cast<std::size_t>(s)].data[i];
        }
    }
    for (double& v : avg.data) v /= static_cast<double>(spins);
    out.mean_preclip = correct_spectrum(avg, ipm);
    out.mean = out.mean_preclip;
    for (double& v : out.mean.data) v = std::max(0.0, v);

    if (n_samples == 0) return out;

    parallel_for(realizations.size(), threads, [&](std::size_t r) {
        realizations[r] = correct_spectrum(realizations[r], ipm);
    });

    out.sample_mean = Matrix(periodogram.rows(), T);
    for (std::size_t r = 0; r < realizations.size(); ++r) {
        for (std::size_t i = 0; i < out.sample_mean.data.size(); ++i) {
            out.sample_mean.data[i] += realizations[r].data[i];
        }
    }
    for (double& v : out.sample_mean.data) v /= static_cast<double>(n_samples);

    std::vector<double> levels = opts.credible_levels;
    std::sort(levels.begin(), levels.end());
    out.bands.resize(levels.size());
    for (std::size_t b = 0; b < levels.size(); ++b) {
        out.bands[b].level = levels[b];
        out.bands[b].lower = Matrix(periodogram.rows(), T);
        out.bands[b].upper = Matrix(periodogram.rows(), T);
    }
    parallel_for(periodogram.rows(), threads, [&](std::size_t jr) {
        std::vector<double> cell(realizations.size());
        for (std::size_t k = 0; k < T; ++k) {
            for (std::size_t r = 0; r < realizations.size(); ++r) {
                cell[r] = realizations[r](jr, k);
            }
            std::sort(cell.begin(), cell.end());
            for (std::size_t b = 0; b < levels.size(); ++b) {
                out.bands[b].lower(jr, k) = quantile_sorted(cell, 0.5 * (1.0 - levels[b]));
                out.bands[b].upper(jr, k) = quantile_sorted(cell, 0.5 * (1.0 + levels[b]));
            }
        }
    });
    return out;
}

void validate_series(std::span<const double> x, const char* who) {
    if (!is_power_of_two(x.size()) || x.size() < 32) {
        throw std::invalid_argument(std::string(who) +
                                    " requires a power-of-two length >= 32");
    }
    for (double v : x) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument(std::string(who) + ": input must be finite");
        }
    }
}

Matrix ti_denoise_from_periodogram(const Matrix& periodogram, const InnerProductMatrix& ipm,
                                   const WaveletFilter& smoothing) {
    const std::size_t T = periodogram.cols();
    const int J = static_cast<int>(periodogram.rows());
    const double universal = std::sqrt(2.0 * std::log(static_cast<double>(T)));
    Matrix smoothed(periodogram.rows(), T);
    std::vector<double> row(T);
    for (int j = 0; j < J; ++j) {
        const double* irow = periodogram.row(static_cast<std::size_t>(j));
        row.assign(irow, irow + T);
        NdwtCoefficients nd = ndwt_full(row, smoothing, J);
        std::vector<double> finest(nd.details.row(0), nd.details.row(0) + T);
        const double threshold = mad_stddev(finest) * universal;
        for (double& v : nd.details.data) {
            const double mag = std::fabs(v) - threshold;
            v = mag > 0.0 ? (v > 0.0 ? mag : -mag) : 0.0;
        }
        const std::vector<double> rec = ndwt_inverse(nd, smoothing);
        std::copy(rec.begin(), rec.end(), smoothed.row(static_cast<std::size_t>(j)));
    }
    return correct_spectrum(smoothed, ipm);
}

}  // namespace

EwsEstimate estimate_ews(std::span<const double> x, const WaveletFilter& analysis,
                         const WaveletFilter& smoothing, const EstimateOptions& options) {
    validate_series(x, "estimate_ews");
    if (options.spins < 1) throw std::invalid_argument("estimate_ews: spins must be >= 1");
    if (!options.identity_shrink && options.n_samples < 100) {
        throw std::invalid_argument("estimate_ews: n_samples must be >= 100");
    }
    for (double level : options.credible_levels) {
        if (!(level > 0.0 && level < 1.0)) {
            throw std::invalid_argument("estimate_ews: credible levels must lie in (0, 1)");
        }
    }
    const Matrix periodogram = raw_wavelet_periodogram(x, analysis);
    const InnerProductMatrix ipm =
        inner_product_matrix(analysis, static_cast<int>(periodogram.rows()));
    return estimate_impl(periodogram, ipm, analysis, smoothing, options);
}

Matrix ti_denoise_baseline(std::span<const double> x, const WaveletFilter& analysis,
                           const WaveletFilter& smoothing) {
    validate_series(x, "ti_denoise_baseline");
    const Matrix periodogram = raw_wavelet_periodogram(x, analysis);
    const InnerProductMatrix ipm =
        inner_product_matrix(analysis, static_cast<int>(periodogram.rows()));
    return ti_denoise_from_periodogram(periodogram, ipm, smoothing);
}

double amse(const std::vector<Matrix>& estimates, const Ews& truth) {
    if (estimates.empty()) throw std::invalid_argument("amse: no estimates given");
    double sum = 0.0;
    for (const auto& est : estimates) {
        if (!est.same_shape(truth.spectrum)) {
            throw std::invalid_argument("amse: estimate shape does not match the truth");
        }
        sum += mse_cells(est, truth.spectrum);
    }
    return sum / static_cast<double>(estimates.size());
}

BenchmarkReport run_benchmark(const Ews& truth, const WaveletFilter& analysis,
                              const BenchmarkOptions& options) {
    if (options.replicates < 10) {
        throw std::invalid_argument("run_benchmark requires at least 10 replicates");
    }
    std::vector<WaveletFilter> smoothers;
    smoothers.reserve(options.filters.size());
    for (const auto& spec : options.filters) {
        smoothers.push_back(WaveletFilter::parse(spec));
    }
    if (smoothers.empty()) {
        throw std::invalid_argument("run_benchmark: empty smoothing filter grid");
    }
    const int J = truth.n_scales();
    const InnerProductMatrix ipm = inner_product_matrix(analysis, J);
    const std::size_t n_rep = static_cast<std::size_t>(options.replicates);
    const std::size_t n_fil = smoothers.size();
    const double nan = std::numeric_limits<double>::quiet_NaN();

    std::vector<double> raw_mse(n_rep, nan);
    std::vector<std::vector<double>> hf_mse(n_fil, std::vector<double>(n_rep, nan));
    std::vector<std::vector<double>> tid_mse(n_fil, std::vector<double>(n_rep, nan));
    std::vector<double> raw_time(n_rep, 0.0);
    std::vector<std::vector<double>> hf_time(n_fil, std::vector<double>(n_rep, 0.0));
    std::vector<std::vector<double>> tid_time(n_fil, std::vector<double>(n_rep, 0.0));
    std::vector<std::string> rep_error(n_rep);

    const int threads = resolve_threads(options.threads);
    parallel_for(n_rep, threads, [&](std::size_t r) {
        using clock = std::chrono::steady_clock;
        try {
            const std::vector<double> x =
                simulate_lsw(truth, analysis, derive_seed(options.seed, r));
            auto t0 = clock::now();
            const Matrix periodogram = raw_wavelet_periodogram(x, analysis);
            const Matrix raw_est = correct_spectrum(periodogram, ipm);
            raw_time[r] = std::chrono::duration<double>(clock::now() - t0).count();
            raw_mse[r] = mse_cells(raw_est, truth.spectrum);

            for (std::size_t f = 0; f < n_fil; ++f) {
                t0 = clock::now();
                const Matrix tid = ti_denoise_from_periodogram(periodogram, ipm, smoothers[f]);
                tid_time[f][r] = std::chrono::duration<double>(clock::now() - t0).count();
                tid_mse[f][r] = mse_cells(tid, truth.spectrum);

                EstimateOptions eo;
                eo.spins = options.spins;
                eo.n_samples = 0;  // point estimate only; AMSE needs no bands
                eo.threads = 1;
                eo.mmle = options.mmle;
                t0 = clock::now();
                const EwsEstimate est =
                    estimate_impl(periodogram, ipm, analysis, smoothers[f], eo);
                hf_time[f][r] = std::chrono::duration<double>(clock::now() - t0).count();
                hf_mse[f][r] = mse_cells(est.mean, truth.spectrum);
            }
        } catch (const std::exception& ex) {
            rep_error[r] = ex.what();
        }
    });

    BenchmarkReport report;
    report.analysis_spec = analysis.spec();
    report.seed = options.seed;
    report.replicates = options.replicates;
    for (std::size_t r = 0; r < n_rep; ++r) {
        if (!rep_error[r].empty()) {
            report.failure_messages.push_back("replicate " + std::to_string(r) + ": " +
                                              rep_error[r]);
        }
    }

    auto make_row = [&](const std::string& method, const std::string& filter,
                        const std::vector<double>& mse, const std::vector<double>& time) {
        BenchmarkRow row;
        row.method = method;
        row.filter = filter;
        std::vector<double> ok;
        for (double v : mse) {
            if (std::isfinite(v)) ok.push_back(v);
        }
        row.replicates = static_cast<int>(ok.size());
        row.failures = static_cast<int>(n_rep - ok.size());
        if (!ok.empty()) {
            row.amse = mean(ok);
            row.se = ok.size() > 1
                         ? sample_stddev(ok) / std::sqrt(static_cast<double>(ok.size()))
                         : 0.0;
        } else {
            row.amse = nan;
            row.se = nan;
        }
        for (double t : time) row.runtime_s += t;
        return row;
    };

    report.rows.push_back(make_row("raw", "none", raw_mse, raw_time));
    for (std::size_t f = 0; f < n_fil; ++f) {
        report.rows.push_back(
            make_row("tid", smoothers[f].spec(), tid_mse[f], tid_time[f]));
        report.rows.push_back(make_row("hf", smoothers[f].spec(), hf_mse[f], hf_time[f]));
    }
    return report;
}

CoverageReport coverage_check(const Ews& truth, const WaveletFilter& analysis,
                              const WaveletFilter& smoothing,
                              const CoverageOptions& options) {
    if (options.replicates < 1) {
        throw std::invalid_argument("coverage_check requires at least one replicate");
    }
    if (!(options.level > 0.0 && options.level < 1.0)) {
        throw std::invalid_argument("coverage_check: level must lie in (0, 1)");
    }
    const int J = truth.n_scales();
    const std::size_t T = truth.length();
    const InnerProductMatrix ipm = inner_product_matrix(analysis, J);
    const std::size_t n_rep = static_cast<std::size_t>(options.replicates);

    std::vector<std::uint64_t> hits(n_rep * static_cast<std::size_t>(J), 0);
    std::vector<char> ok(n_rep, 0);
    std::vector<std::string> errors(n_rep);
    const int threads = resolve_threads(options.threads);
    parallel_for(n_rep, threads, [&](std::size_t r) {
        const std::vector<double> x =
            simulate_lsw(truth, analysis, derive_seed(options.seed, r, 1));
        EstimateOptions eo;
        eo.spins = options.spins;
        eo.n_samples = options.n_samples;
        eo.seed = derive_seed(options.seed, r, 2);
        eo.credible_levels = {options.level};
        eo.threads = 1;
        eo.mmle = options.mmle;
        const Matrix periodogram = raw_wavelet_periodogram(x, analysis);
        EwsEstimate est;
        try {
            est = estimate_impl(periodogram, ipm, analysis, smoothing, eo);
        } catch (const std::exception& e) {
            errors[r] = e.what();
            return;
        }
        const CredibleBand& band = est.bands.front();
        for (int j = 0; j < J; ++j) {
            std::uint64_t h = 0;
            for (std::size_t k = 0; k < T; ++k) {
                const double t = truth.spectrum(static_cast<std::size_t>(j), k);
                if (band.lower(static_cast<std::size_t>(j), k) <= t &&
                    t <= band.upper(static_cast<std::size_t>(j), k)) {
                    ++h;
                }
            }
            hits[r * static_cast<std::size_t>(J) + static_cast<std::size_t>(j)] = h;
        }
        ok[r] = 1;
    });

    CoverageReport report;
    report.level = options.level;
    report.replicates = options.replicates;
    report.coverage.resize(static_cast<std::size_t>(J), 0.0);
    for (std::size_t r = 0; r < n_rep; ++r) {
        if (!ok[r]) {
            report.failure_messages.push_back("replicate " + std::to_string(r) +
                                              ": " + errors[r]);
            continue;
        }
        ++report.completed;
        for (int j = 0; j < J; ++j) {
            report.coverage[static_cast<std::size_t>(j)] +=
                static_cast<double>(hits[r * static_cast<std::size_t>(J) +
                                         static_cast<std::size_t>(j)]);
        }
    }
    const std::size_t n_ok = static_cast<std::size_t>(report.completed);
    report.cells.assign(static_cast<std::size_t>(J), n_ok * T);
    for (double& c : report.coverage) {
        c = n_ok == 0 ? std::numeric_limits<double>::quiet_NaN()
                      : c / static_cast<double>(n_ok * T);
    }
    return report;
}

}  // namespace ewspec
