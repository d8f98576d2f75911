// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 ewspec Project Contributors
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "ewspec/estimate.hpp"
#include "ewspec/io.hpp"
#include "ewspec/lsw.hpp"
#include "ewspec/rng.hpp"

using namespace ewspec;

namespace {

std::filesystem::path scratch_file(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "ewspec_io_tests";
    std::filesystem::create_directories(dir);
    return dir / name;
}

void write_text(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p);
    out << text;
}

double parse_back(const std::string& s) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    REQUIRE(res.ec == std::errc());
    return v;
}

EwsEstimate make_estimate() {
    std::mt19937_64 eng(make_engine(derive_seed(70, 0, 0)));
    EwsEstimate est;
    est.analysis_spec = "ep1";
    est.smoothing_spec = "la4";
    est.spins = 4;
    est.n_samples = 120;
    est.seed = 9;
    est.mean = Matrix(3, 8);
    est.mean_preclip = Matrix(3, 8);
    est.sample_mean = Matrix(3, 8);
    for (std::size_t i = 0; i < est.mean.data.size(); ++i) {
        est.mean_preclip.data[i] = standard_normal(eng);
        est.mean.data[i] = std::max(est.mean_preclip.data[i], 0.0);
        est.sample_mean.data[i] = est.mean.data[i] + 0.1 * standard_normal(eng);
    }
    for (double level : {0.5, 0.9}) {
        CredibleBand band;
        band.level = level;
        band.lower = Matrix(3, 8);
        band.upper = Matrix(3, 8);
        for (std::size_t i = 0; i < band.lower.data.size(); ++i) {
            const double half = (0.2 + level) * std::abs(standard_normal(eng));
            band.lower.data[i] = est.mean.data[i] - half;
            band.upper.data[i] = est.mean.data[i] + half;
        }
        est.bands.push_back(std::move(band));
    }
    est.rejected_draws = 7;
    est.total_draws = 100;
    return est;
}

}  // namespace

TEST_CASE("shortest round-trip double formatting") {
    CHECK(format_double(2.0) == "2");
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(-0.0) == "-0");
    CHECK(parse_back(format_double(0.1)) == 0.1);

    std::mt19937_64 eng(make_engine(derive_seed(71, 0, 0)));
    for (int i = 0; i < 20000; ++i) {
        double v;
        const std::uint64_t bits = eng();
        static_assert(sizeof bits == sizeof v);
        std::memcpy(&v, &bits, sizeof v);
        if (!std::isfinite(v)) continue;
        const double back = parse_back(format_double(v));
        CHECK(back == v);
    }
    for (double v : {1e-300, 1e300, 4.9406564584124654e-324,
                     1.7976931348623157e308, 3.141592653589793}) {
        CHECK(parse_back(format_double(v)) == v);
        CHECK(parse_back(format_double(-v)) == -v);
    }
}

TEST_CASE("series files round trip exactly") {
    const auto p = scratch_file("series.csv");
    std::vector<double> values = {0.0, -1.5, 1e-300, -1e300, 0.1, 17.0};
    std::mt19937_64 eng(make_engine(derive_seed(72, 0, 0)));
    for (int i = 0; i < 100; ++i) values.push_back(3.0 * standard_normal(eng));

    write_series_csv(p.string(), values, {{"seed", "12"}, {"note", "a: b: c"}});
    const std::vector<double> back = read_series_csv(p.string());
    CHECK(back == values);

    // metadata and header lines are tolerated on input
    write_text(scratch_file("series_hdr.csv"),
               "# anything: goes\nvalue\n1.5\n-2\n");
    const auto with_header = read_series_csv(scratch_file("series_hdr.csv").string());
    CHECK(with_header == std::vector<double>{1.5, -2.0});
}

TEST_CASE("series reader errors cite file and line") {
    const auto p = scratch_file("series_bad.csv");
    write_text(p, "1.0\n2.0\n3.0,4.0\n");
    try {
        read_series_csv(p.string());
        CHECK(false);
    } catch (const std::exception& e) {
        const std::string msg = e.what();
        CHECK(msg.find("series_bad.csv") != std::string::npos);
        CHECK(msg.find(":3") != std::string::npos);
    }

    write_text(p, "1.0\n2.0\noops\n");
    try {
        read_series_csv(p.string());
        CHECK(false);
    } catch (const std::exception& e) {
        CHECK(std::string(e.what()).find(":3") != std::string::npos);
    }

    CHECK_THROWS(read_series_csv(scratch_file("does_not_exist.csv").string()));
}

TEST_CASE("matrix files round trip exactly") {
    const auto p = scratch_file("matrix.csv");
    Matrix m(5, 7);
    std::mt19937_64 eng(make_engine(derive_seed(73, 0, 0)));
    for (auto& v : m.data) v = standard_normal(eng) * 1e3;
    write_matrix_csv(p.string(), m, {{"kind", "test"}});
    const Matrix back = read_matrix_csv(p.string());
    CHECK(back.rows() == 5);
    CHECK(back.cols() == 7);
    CHECK(back.data == m.data);

    write_text(scratch_file("matrix_ragged.csv"), "1,2,3\n4,5\n");
    try {
        read_matrix_csv(scratch_file("matrix_ragged.csv").string());
        CHECK(false);
    } catch (const std::exception& e) {
        CHECK(std::string(e.what()).find(":2") != std::string::npos);
    }

    write_text(scratch_file("matrix_empty.csv"), "# only: meta\n");
    CHECK_THROWS(read_matrix_csv(scratch_file("matrix_empty.csv").string()));
}

TEST_CASE("spectra round trip in dense form and parse in long form") {
    const Ews e = test_spectrum(128);
    const auto p = scratch_file("ews.csv");
    write_ews_csv(p.string(), e, {{"length", "128"}});
    const Ews dense = read_ews_csv(p.string());
    CHECK(dense.spectrum.data == e.spectrum.data);

    // long form, integer locations
    std::string long_form = "scale,location,value\n";
    for (int j = 1; j <= 3; ++j) {
        for (int k = 0; k < 8; ++k) {
            long_form += std::to_string(j) + "," + std::to_string(k) + "," +
                         format_double(j == 1 ? 0.25 * k : 0.0) + "\n";
        }
    }
    const auto pl = scratch_file("ews_long.csv");
    write_text(pl, long_form);
    const Ews from_long = read_ews_csv(pl.string());
    CHECK(from_long.n_scales() == 3);
    CHECK(from_long.length() == 8);
    for (int k = 0; k < 8; ++k) {
        CHECK(from_long.spectrum(0, static_cast<std::size_t>(k)) ==
              doctest::Approx(0.25 * k));
    }

    // long form, rescaled-time locations
    std::string rescaled = "scale,location,value\n";
    for (int j = 1; j <= 3; ++j) {
        for (int k = 0; k < 8; ++k) {
            rescaled += std::to_string(j) + "," + format_double(k / 8.0) + "," +
                        format_double(j == 1 ? 0.25 * k : 0.0) + "\n";
        }
    }
    const auto pr = scratch_file("ews_rescaled.csv");
    write_text(pr, rescaled);
    const Ews from_rescaled = read_ews_csv(pr.string());
    CHECK(from_rescaled.spectrum.data == from_long.spectrum.data);

    // a negative power must be rejected by the container's validation
    write_text(scratch_file("ews_neg.csv"), "scale,location,value\n1,0,-1\n1,1,0\n"
                                            "2,0,0\n2,1,0\n");
    CHECK_THROWS(read_ews_csv(scratch_file("ews_neg.csv").string()));
}

TEST_CASE("estimate JSON artifacts round trip") {
    const EwsEstimate est = make_estimate();
    const auto p = scratch_file("estimate.json");
    write_estimate_json(p.string(), est, {{"filter", "ep1"}});

    // the artifact is well-formed JSON with the documented surfaces
    std::ifstream in(p);
    const nlohmann::json doc = nlohmann::json::parse(in);
    CHECK(doc.contains("meta"));
    CHECK(doc.contains("mean"));
    CHECK(doc.contains("mean_preclip"));
    CHECK(doc.contains("bands"));

    const EwsEstimate back = read_estimate_json(p.string());
    CHECK(back.analysis_spec == est.analysis_spec);
    CHECK(back.smoothing_spec == est.smoothing_spec);
    CHECK(back.spins == est.spins);
    CHECK(back.n_samples == est.n_samples);
    CHECK(back.seed == est.seed);
    CHECK(back.mean.data == est.mean.data);
    CHECK(back.mean_preclip.data == est.mean_preclip.data);
    // the realization mean is a runtime diagnostic, not an artifact surface
    CHECK(back.sample_mean.data.empty());
    REQUIRE(back.bands.size() == est.bands.size());
    for (std::size_t b = 0; b < est.bands.size(); ++b) {
        CHECK(back.bands[b].level == est.bands[b].level);
        CHECK(back.bands[b].lower.data == est.bands[b].lower.data);
        CHECK(back.bands[b].upper.data == est.bands[b].upper.data);
    }
    CHECK(back.rejected_draws == est.rejected_draws);
    CHECK(back.total_draws == est.total_draws);
}

TEST_CASE("estimate CSV artifacts round trip the plotting surfaces") {
    const EwsEstimate est = make_estimate();
    const auto p = scratch_file("estimate.csv");
    write_estimate_csv(p.string(), est);
    const EwsEstimate back = read_estimate_csv(p.string());
    CHECK(back.mean.data == est.mean.data);
    REQUIRE(back.bands.size() == est.bands.size());
    for (std::size_t b = 0; b < est.bands.size(); ++b) {
        CHECK(back.bands[b].level == est.bands[b].level);
        CHECK(back.bands[b].lower.data == est.bands[b].lower.data);
        CHECK(back.bands[b].upper.data == est.bands[b].upper.data);
    }
    // the flat table intentionally drops the pre-clip surface
    CHECK(back.mean_preclip.data.empty());
}

TEST_CASE("benchmark detail files round trip including failures") {
    BenchmarkReport rep;
    rep.analysis_spec = "ep1";
    rep.seed = 42;
    rep.replicates = 10;
    rep.rows = {
        {"hf", "ep1", 0.125, 0.01, 10, 0, 3.5},
        {"tid", "ep1", 0.25, 0.02, 9, 1, 1.25},
        {"raw", "none", 1.5, 0.1, 10, 0, 0.0},
    };
    rep.failure_messages = {"replicate 3: estimate: posterior draw rejection rate "
                            "above 50% (10 of 12)"};
    const auto p = scratch_file("bench_detail.csv");
    write_benchmark_detail_csv(p.string(), rep, {{"spins", "4"}});
    const BenchmarkReport back = read_benchmark_detail_csv(p.string());
    CHECK(back.analysis_spec == rep.analysis_spec);
    CHECK(back.seed == rep.seed);
    CHECK(back.replicates == rep.replicates);
    REQUIRE(back.rows.size() == rep.rows.size());
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
        CHECK(back.rows[i].method == rep.rows[i].method);
        CHECK(back.rows[i].filter == rep.rows[i].filter);
        CHECK(back.rows[i].amse == rep.rows[i].amse);
        CHECK(back.rows[i].se == rep.rows[i].se);
        CHECK(back.rows[i].replicates == rep.rows[i].replicates);
        CHECK(back.rows[i].failures == rep.rows[i].failures);
        CHECK(back.rows[i].runtime_s == 0.0);  // never serialized
    }
    REQUIRE(back.failure_messages.size() == 1);
    CHECK(back.failure_messages[0] == rep.failure_messages[0]);

    // runtime must not leak into the artifact
    std::ifstream in(p);
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    CHECK(text.find("3.5") == std::string::npos);
    CHECK(text.find("runtime") == std::string::npos);
}

TEST_CASE("benchmark summary pivots by vanishing moments") {
    BenchmarkReport rep;
    rep.analysis_spec = "ep1";
    rep.replicates = 10;
    rep.rows = {
        {"hf", "ep1", 0.10, 0.01, 10, 0, 0.0},
        {"tid", "ep1", 0.20, 0.01, 10, 0, 0.0},
        {"hf", "la4", 0.15, 0.01, 10, 0, 0.0},
        {"tid", "la4", 0.30, 0.01, 10, 0, 0.0},
        {"raw", "none", 2.0, 0.1, 10, 0, 0.0},
    };
    const BenchmarkTable table = benchmark_table(rep);
    REQUIRE(table.columns.size() == 4);
    CHECK(table.columns[0] == "ep_tid");
    CHECK(table.columns[1] == "ep_hf");
    CHECK(table.columns[2] == "la_tid");
    CHECK(table.columns[3] == "la_hf");
    REQUIRE(table.vanishing_moments.size() == 2);  // ep1 -> 1, la4 -> 4
    CHECK(table.vanishing_moments[0] == 1);
    CHECK(table.vanishing_moments[1] == 4);

    // row for 1 vanishing moment: ep columns filled, la columns empty
    CHECK(table.amse(0, 0) == 0.20);
    CHECK(table.amse(0, 1) == 0.10);
    CHECK(std::isnan(table.amse(0, 2)));
    CHECK(std::isnan(table.amse(0, 3)));
    CHECK(std::isnan(table.amse(1, 0)));
    CHECK(table.amse(1, 2) == 0.30);
    CHECK(table.amse(1, 3) == 0.15);

    const auto p = scratch_file("bench_table.csv");
    write_benchmark_table_csv(p.string(), table);
    const BenchmarkTable back = read_benchmark_table_csv(p.string());
    CHECK(back.columns == table.columns);
    CHECK(back.vanishing_moments == table.vanishing_moments);
    REQUIRE(back.amse.rows() == table.amse.rows());
    for (std::size_t i = 0; i < table.amse.data.size(); ++i) {
        if (std::isnan(table.amse.data[i])) {
            CHECK(std::isnan(back.amse.data[i]));
        } else {
            CHECK(back.amse.data[i] == table.amse.data[i]);
        }
    }
}

TEST_CASE("coverage files round trip, including aborted replicates") {
    CoverageReport rep;
    rep.level = 0.9;
    rep.replicates = 5;
    rep.completed = 4;
    rep.coverage = {0.925, 0.8, 1.0};
    rep.cells = {256, 256, 256};
    rep.failure_messages = {"replicate 0: estimate: 200 consecutive posterior "
                            "draws rejected at spin 0, scale 6"};
    const auto p = scratch_file("coverage.csv");
    write_coverage_csv(p.string(), rep, {{"length", "64"}});
    const CoverageReport back = read_coverage_csv(p.string());
    CHECK(back.level == rep.level);
    CHECK(back.replicates == rep.replicates);
    CHECK(back.completed == rep.completed);
    CHECK(back.coverage == rep.coverage);
    CHECK(back.cells == rep.cells);
    REQUIRE(back.failure_messages.size() == 1);
    CHECK(back.failure_messages[0] == rep.failure_messages[0]);

    // nothing completed: per-scale coverage is NaN and must survive a trip
    CoverageReport empty;
    empty.level = 0.5;
    empty.replicates = 2;
    empty.completed = 0;
    empty.coverage = {std::numeric_limits<double>::quiet_NaN(),
                      std::numeric_limits<double>::quiet_NaN()};
    empty.cells = {0, 0};
    empty.failure_messages = {"replicate 0: x", "replicate 1: y"};
    const auto pe = scratch_file("coverage_empty.csv");
    write_coverage_csv(pe.string(), empty);
    const CoverageReport back_empty = read_coverage_csv(pe.string());
    CHECK(back_empty.completed == 0);
    REQUIRE(back_empty.coverage.size() == 2);
    CHECK(std::isnan(back_empty.coverage[0]));
    CHECK(std::isnan(back_empty.coverage[1]));
    CHECK(back_empty.failure_messages.size() == 2);
}
