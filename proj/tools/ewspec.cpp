// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 ewspec Project Contributors
//
// Command-line front end. Thin single-threaded driver: it reads inputs,
// calls into the library (which owns all parallelism), and writes artifacts
// that embed the full configuration and seed. Reruns with the same flags
// produce byte-identical files; worker counts and runtimes are deliberately
// kept out of every artifact and reported on stdout only.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ewspec/estimate.hpp"
#include "ewspec/io.hpp"
#include "ewspec/lsw.hpp"
#include "ewspec/wavelet.hpp"

namespace {

using ewspec::MetaLines;

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

std::size_t prev_pow2(std::size_t n) {
    std::size_t p = 1;
    while ((p << 1) <= n) p <<= 1;
    return p;
}

// Whole-sample reflection: continue past the last sample by bouncing,
// x[n-2], x[n-3], ..., with period 2(n-1).
double reflect_at(const std::vector<double>& x, std::size_t i) {
    const std::size_t n = x.size();
    if (i < n) return x[i];
    if (n == 1) return x[0];
    const std::size_t period = 2 * (n - 1);
    std::size_t m = i % period;
    if (m >= n) m = period - m;
    return x[m];
}

struct SeriesFlags {
    std::string in;
    std::string pad;       // "", "reflect", or "zero"
    bool truncate = false;
    bool diff = false;
};

void add_series_flags(CLI::App* cmd, SeriesFlags& sf) {
    cmd->add_option("--in", sf.in, "input series CSV (one value per line)")->required();
    cmd->add_option("--pad", sf.pad,
                    "pad a non-dyadic series up to the next power of two")
        ->check(CLI::IsMember({"reflect", "zero"}));
    cmd->add_flag("--truncate", sf.truncate,
                  "truncate a non-dyadic series down to a power of two");
    cmd->add_flag("--diff", sf.diff, "take circular first differences before analysis");
}

// Reads the input series, applies differencing, and resolves non-dyadic
// lengths. Never silently modifies the data: padding/truncation happens only
// on request and is recorded in the artifact metadata.
std::vector<double> load_series(const SeriesFlags& sf, std::size_t min_len, MetaLines& meta) {
    std::vector<double> x = ewspec::read_series_csv(sf.in);
    meta.emplace_back("input", sf.in);
    meta.emplace_back("input_length", std::to_string(x.size()));
    if (!sf.pad.empty() && sf.truncate) {
        throw std::runtime_error("--pad and --truncate are mutually exclusive");
    }
    if (sf.diff) {
        std::vector<double> d(x.size());
        for (std::size_t t = 0; t < x.size(); ++t) d[t] = x[(t + 1) % x.size()] - x[t];
        x = std::move(d);
        meta.emplace_back("diff", "circular first differences");
    }
    const bool ok = x.size() >= min_len && (x.size() & (x.size() - 1)) == 0;
    if (!ok) {
        if (sf.truncate) {
            const std::size_t target = prev_pow2(x.size());
            if (target < min_len) {
                throw std::runtime_error(sf.in + ": only " + std::to_string(x.size()) +
                                         " samples; this command needs at least " +
                                         std::to_string(min_len));
            }
            x.resize(target);
            meta.emplace_back("truncated_to", std::to_string(target));
        } else if (!sf.pad.empty()) {
            const std::size_t target = std::max(next_pow2(x.size()), min_len);
            std::vector<double> padded(target);
            for (std::size_t i = 0; i < target; ++i) {
                padded[i] = (i < x.size() || sf.pad == "reflect") ? reflect_at(x, i) : 0.0;
            }
            x = std::move(padded);
            meta.emplace_back("padding", sf.pad);
            meta.emplace_back("padded_to", std::to_string(target));
        } else {
            throw std::runtime_error(
                sf.in + ": length " + std::to_string(x.size()) +
                " is not a power of two >= " + std::to_string(min_len) +
                "; rerun with --pad reflect, --pad zero, or --truncate");
        }
    }
    return x;
}

std::string swap_ext(const std::string& path, const std::string& suffix) {
    const std::size_t slash = path.find_last_of('/');
    const std::size_t dot = path.find_last_of('.');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) {
        return path + suffix;
    }
    return path.substr(0, dot) + suffix;
}

std::string join(const std::vector<std::string>& parts, char sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

ewspec::Ews load_spectrum(const std::string& spec, std::size_t length, MetaLines& meta) {
    meta.emplace_back("spectrum", spec);
    if (spec == "test") {
        meta.emplace_back("length", std::to_string(length));
        return ewspec::test_spectrum(length);
    }
    return ewspec::read_ews_csv(spec);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ewspec: locally stationary wavelet spectrum estimation"};
    app.require_subcommand(1);

    // Shared knobs; each subcommand registers the ones it uses.
    std::string analysis = "haar";
    std::string smoothing = "la6";
    std::string out;
    std::uint64_t seed = 0;
    int threads = 0;
    int spins = 20;

    int exit_code = 0;

    // --- simulate ----------------------------------------------------------
    auto* sim = app.add_subcommand("simulate", "draw a Gaussian series from a spectrum file");
    std::string sim_ews;
    sim->add_option("--ews", sim_ews, "spectrum CSV (dense J x T, or scale,location,value)")
        ->required();
    sim->add_option("--analysis", analysis, "synthesis wavelet (haar, ep1..ep10, la4..la10)");
    sim->add_option("--seed", seed, "master seed");
    sim->add_option("--out", out, "output series CSV")->required();
    sim->callback([&] {
        const ewspec::Ews ews = ewspec::read_ews_csv(sim_ews);
        const ewspec::WaveletFilter filter = ewspec::WaveletFilter::parse(analysis);
        const std::vector<double> x = ewspec::simulate_lsw(ews, filter, seed);
        const MetaLines meta = {{"command", "simulate"},
                                {"ews", sim_ews},
                                {"analysis", filter.spec()},
                                {"seed", std::to_string(seed)},
                                {"length", std::to_string(x.size())}};
        ewspec::write_series_csv(out, x, meta);
        std::cout << "wrote " << out << " (" << x.size() << " samples)\n";
    });

    // --- periodogram -------------------------------------------------------
    auto* per = app.add_subcommand("periodogram", "raw wavelet periodogram of a series");
    SeriesFlags per_sf;
    add_series_flags(per, per_sf);
    per->add_option("--analysis", analysis, "analysis wavelet");
    per->add_option("--out", out, "output J x T CSV")->required();
    per->callback([&] {
        MetaLines meta = {{"command", "periodogram"}};
        const ewspec::WaveletFilter filter = ewspec::WaveletFilter::parse(analysis);
        meta.emplace_back("analysis", filter.spec());
        const std::vector<double> x = load_series(per_sf, 2, meta);
        meta.emplace_back("length", std::to_string(x.size()));
        const ewspec::Matrix pgram = ewspec::raw_wavelet_periodogram(x, filter);
        ewspec::write_matrix_csv(out, pgram, meta);
        std::cout << "wrote " << out << " (" << pgram.rows() << " x " << pgram.cols() << ")\n";
    });

    // --- estimate ----------------------------------------------------------
    auto* est = app.add_subcommand("estimate", "Bayesian wavelet spectrum estimate with bands");
    SeriesFlags est_sf;
    add_series_flags(est, est_sf);
    int samples = 1000;
    std::vector<double> levels = {0.5, 0.9};
    std::string est_csv;
    est->add_option("--analysis", analysis, "analysis wavelet");
    est->add_option("--smooth", smoothing, "smoothing wavelet for shrinkage");
    est->add_option("--spins", spins, "circular spins to average over");
    est->add_option("--samples", samples, "posterior realizations (>= 100)");
    est->add_option("--seed", seed, "master seed");
    est->add_option("--levels", levels, "credible band levels in (0,1)")->delimiter(',');
    est->add_option("--threads", threads, "worker threads (0 = all cores)")
        ->envname("EWSPEC_THREADS");
    est->add_option("--out", out, "output JSON document")->required();
    est->add_option("--csv", est_csv, "flat CSV for plotting (default: --out with .csv)");
    est->callback([&] {
        MetaLines meta = {{"command", "estimate"}};
        const ewspec::WaveletFilter fa = ewspec::WaveletFilter::parse(analysis);
        const ewspec::WaveletFilter fs = ewspec::WaveletFilter::parse(smoothing);
        const std::vector<double> x = load_series(est_sf, 32, meta);
        meta.emplace_back("length", std::to_string(x.size()));
        ewspec::EstimateOptions opts;
        opts.spins = spins;
        opts.n_samples = samples;
        opts.seed = seed;
        opts.credible_levels = levels;
        opts.threads = threads;
        const ewspec::EwsEstimate result = ewspec::estimate_ews(x, fa, fs, opts);
        if (est_csv.empty()) {
            est_csv = swap_ext(out, ".csv");
            if (est_csv == out) est_csv = out + ".flat.csv";
        }
        ewspec::write_estimate_json(out, result, meta);
        ewspec::write_estimate_csv(est_csv, result, meta);
        std::cout << "wrote " << out << " and " << est_csv << '\n'
                  << "posterior draws: " << result.total_draws << " total, "
                  << result.rejected_draws << " rejected\n";
    });

    // --- benchmark ---------------------------------------------------------
    auto* ben = app.add_subcommand("benchmark", "AMSE comparison against baselines");
    std::string spectrum = "test";
    std::size_t length = 1024;
    int replicates = 100;
    std::vector<std::string> filters = ewspec::BenchmarkOptions{}.filters;
    std::string detail;
    ben->add_option("--spectrum", spectrum, "'test' or a spectrum CSV path");
    ben->add_option("--length", length, "length of the built-in test spectrum");
    ben->add_option("--analysis", analysis, "analysis (= synthesis) wavelet");
    ben->add_option("--replicates", replicates, "simulation replicates (>= 10)");
    ben->add_option("--filters", filters, "smoothing filters to compare")->delimiter(',');
    ben->add_option("--spins", spins, "circular spins for the Bayesian method");
    ben->add_option("--seed", seed, "master seed");
    ben->add_option("--threads", threads, "worker threads (0 = all cores)")
        ->envname("EWSPEC_THREADS");
    ben->add_option("--out", out, "summary table CSV")->required();
    ben->add_option("--detail", detail, "per-method detail CSV (default: --out with -detail)");
    ben->callback([&] {
        MetaLines meta = {{"command", "benchmark"}};
        const ewspec::WaveletFilter fa = ewspec::WaveletFilter::parse(analysis);
        const ewspec::Ews truth = load_spectrum(spectrum, length, meta);
        meta.emplace_back("filters", join(filters, ' '));
        meta.emplace_back("spins", std::to_string(spins));
        // analysis/seed/replicates: the detail writer embeds these itself.
        MetaLines table_meta = meta;
        table_meta.emplace_back("analysis", fa.spec());
        table_meta.emplace_back("replicates", std::to_string(replicates));
        table_meta.emplace_back("seed", std::to_string(seed));
        ewspec::BenchmarkOptions opts;
        opts.replicates = replicates;
        opts.filters = filters;
        opts.seed = seed;
        opts.spins = spins;
        opts.threads = threads;
        const ewspec::BenchmarkReport report = ewspec::run_benchmark(truth, fa, opts);
        if (detail.empty()) detail = swap_ext(out, "-detail.csv");
        ewspec::write_benchmark_table_csv(out, ewspec::benchmark_table(report), table_meta);
        ewspec::write_benchmark_detail_csv(detail, report, meta);
        std::cout << "method  filter  amse          se            runtime_s\n";
        for (const auto& row : report.rows) {
            std::cout << row.method << '\t' << row.filter << '\t'
                      << ewspec::format_double(row.amse) << '\t'
                      << ewspec::format_double(row.se) << '\t' << row.runtime_s << '\n';
        }
        std::cout << "wrote " << out << " and " << detail << '\n';
        for (const auto& f : report.failure_messages) std::cerr << "failure: " << f << '\n';
        if (!report.failure_messages.empty()) exit_code = 2;
    });

    // --- coverage ----------------------------------------------------------
    auto* cov = app.add_subcommand("coverage", "empirical credible-band coverage");
    double level = 0.9;
    int cov_replicates = 50;
    int cov_samples = 400;
    cov->add_option("--spectrum", spectrum, "'test' or a spectrum CSV path");
    cov->add_option("--length", length, "length of the built-in test spectrum");
    cov->add_option("--analysis", analysis, "analysis (= synthesis) wavelet");
    cov->add_option("--smooth", smoothing, "smoothing wavelet for shrinkage");
    cov->add_option("--level", level, "credible band level in (0,1)");
    cov->add_option("--replicates", cov_replicates, "simulation replicates");
    cov->add_option("--samples", cov_samples, "posterior realizations per replicate");
    cov->add_option("--spins", spins, "circular spins");
    cov->add_option("--seed", seed, "master seed");
    cov->add_option("--threads", threads, "worker threads (0 = all cores)")
        ->envname("EWSPEC_THREADS");
    cov->add_option("--out", out, "per-scale coverage CSV")->required();
    cov->callback([&] {
        MetaLines meta = {{"command", "coverage"}};
        const ewspec::WaveletFilter fa = ewspec::WaveletFilter::parse(analysis);
        const ewspec::WaveletFilter fs = ewspec::WaveletFilter::parse(smoothing);
        const ewspec::Ews truth = load_spectrum(spectrum, length, meta);
        meta.emplace_back("analysis", fa.spec());
        meta.emplace_back("smoothing", fs.spec());
        meta.emplace_back("samples", std::to_string(cov_samples));
        meta.emplace_back("spins", std::to_string(spins));
        meta.emplace_back("seed", std::to_string(seed));
        ewspec::CoverageOptions opts;
        opts.replicates = cov_replicates;
        opts.level = level;
        opts.spins = spins;
        opts.n_samples = cov_samples;
        opts.seed = seed;
        opts.threads = threads;
        const ewspec::CoverageReport report = ewspec::coverage_check(truth, fa, fs, opts);
        ewspec::write_coverage_csv(out, report, meta);
        for (std::size_t j = 0; j < report.coverage.size(); ++j) {
            std::cout << "scale " << (j + 1) << ": coverage "
                      << ewspec::format_double(report.coverage[j]) << '\n';
        }
        std::cout << "completed " << report.completed << " of "
                  << report.replicates << " replicates\n";
        for (const std::string& f : report.failure_messages) {
            std::cerr << "failure: " << f << '\n';
        }
        if (report.completed < report.replicates) exit_code = 2;
        std::cout << "wrote " << out << '\n';
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << '\n';
        return 1;
    }
    return exit_code;
}
