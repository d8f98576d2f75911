// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 ewspec Project Contributors
#pragma once

// File formats. Every writer here has a matching reader so artifacts can be
// re-ingested and verified; doubles are printed shortest-round-trip, and no
// writer emits timestamps or other run-varying fields, so rerunning with the
// same seed reproduces files byte for byte.
//
// CSV conventions: lines starting with '#' carry "key: value" metadata (the
// CLI records its full configuration this way), an optional non-numeric
// first row is a header, and errors cite "<path>:<line>".

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ewspec/estimate.hpp"
#include "ewspec/lsw.hpp"
#include "ewspec/matrix.hpp"

namespace ewspec {

// Shortest decimal form that parses back to the same bits.
std::string format_double(double value);

// Key/value lines written as '# key: value' ahead of the data.
using MetaLines = std::vector<std::pair<std::string, std::string>>;

// Time series: one value per line.
std::vector<double> read_series_csv(const std::string& path);
void write_series_csv(const std::string& path, std::span<const double> values,
                      const MetaLines& meta = {});

// Dense numeric matrix, one comma-separated row per line.
Matrix read_matrix_csv(const std::string& path);
void write_matrix_csv(const std::string& path, const Matrix& matrix,
                      const MetaLines& meta = {});

// Spectra are accepted in two layouts: the dense J x T matrix (finest scale
// first, which is what the writer emits) or long form with a
// `scale,location,value` header, scales 1..J and locations either indices
// 0..T-1 or the rescaled grid k/T.
Ews read_ews_csv(const std::string& path);
void write_ews_csv(const std::string& path, const Ews& ews, const MetaLines& meta = {});

// Estimate artifacts: a JSON document
//   {meta, scales, locations, mean, mean_preclip, bands: {p50: {lo, hi}, ...}}
// and a flat CSV (scale, location, mean, lo50, hi50, lo90, hi90, ...) for
// plotting. Band keys are derived from the levels. The readers rebuild the
// matrices; the CSV carries no preclip surface, so its reader leaves that
// field empty.
void write_estimate_json(const std::string& path, const EwsEstimate& estimate,
                         const MetaLines& meta = {});
EwsEstimate read_estimate_json(const std::string& path);
void write_estimate_csv(const std::string& path, const EwsEstimate& estimate,
                        const MetaLines& meta = {});
EwsEstimate read_estimate_csv(const std::string& path);

// Benchmark summary pivoted into the comparison layout: one row per
// vanishing-moment count, one column per method x family, cells are AMSE
// (empty when that filter was not run).
struct BenchmarkTable {
    std::vector<int> vanishing_moments;
    std::vector<std::string> columns;  // "ep_tid", "ep_hf", "la_tid", "la_hf"
    Matrix amse;                       // NaN where a cell is empty
};
BenchmarkTable benchmark_table(const BenchmarkReport& report);
void write_benchmark_table_csv(const std::string& path, const BenchmarkTable& table,
                               const MetaLines& meta = {});
BenchmarkTable read_benchmark_table_csv(const std::string& path);

// Full benchmark rows (method,filter,amse,se,replicates,failures). Runtimes
// are intentionally absent: they go to stdout, keeping artifacts
// reproducible. Failure messages travel as '# failure:' comments.
void write_benchmark_detail_csv(const std::string& path, const BenchmarkReport& report,
                                const MetaLines& meta = {});
BenchmarkReport read_benchmark_detail_csv(const std::string& path);

// Per-scale coverage fractions (scale,coverage,cells).
void write_coverage_csv(const std::string& path, const CoverageReport& report,
                        const MetaLines& meta = {});
CoverageReport read_coverage_csv(const std::string& path);

}  // namespace ewspec
