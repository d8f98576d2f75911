// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 ewspec Project Contributors
#include "ewspec/io.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <stdexcept>
#include <string_view>

#include <json.hpp>

namespace ewspec {

namespace {

using nlohmann::json;

[[noreturn]] void fail_at(const std::string& path, std::size_t line, const std::string& msg) {
    throw std::runtime_error(path + ":" + std::to_string(line) + ": " + msg);
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

bool parse_double(std::string_view field, double& out) {
    field = trim(field);
    if (!field.empty() && field.front() == '+') field.remove_prefix(1);
    if (field.empty()) return false;
    const char* last = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(field.data(), last, out);
    return ec == std::errc{} && ptr == last;
}

bool parse_u64(std::string_view field, std::uint64_t& out) {
    field = trim(field);
    if (field.empty()) return false;
    const char* last = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(field.data(), last, out);
    return ec == std::errc{} && ptr == last;
}

bool parse_int(std::string_view field, int& out) {
    field = trim(field);
    if (field.empty()) return false;
    const char* last = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(field.data(), last, out);
    return ec == std::errc{} && ptr == last;
}

std::vector<std::string> split_fields(std::string_view line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == ',') {
            out.emplace_back(trim(line.substr(start, i - start)));
            start = i + 1;
        }
    }
    return out;
}

struct CsvDoc {
    std::string path;
    MetaLines meta;
    std::vector<std::string> header;  // empty when the file has none
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> lines;  // 1-based source line per row
};

bool all_numeric(const std::vector<std::string>& fields) {
    double v;
    for (const auto& f : fields) {
        if (!f.empty() && !parse_double(f, v)) return false;
    }
    return true;
}

CsvDoc read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
    CsvDoc doc;
    doc.path = path;
    std::string line;
    std::size_t lineno = 0;
    bool first_data = true;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string_view sv = trim(line);
        if (sv.empty()) continue;
        if (sv.front() == '#') {
            std::string_view body = trim(sv.substr(1));
            const std::size_t colon = body.find(':');
            if (colon != std::string_view::npos) {
                doc.meta.emplace_back(std::string(trim(body.substr(0, colon))),
                                      std::string(trim(body.substr(colon + 1))));
            }
            continue;
        }
        std::vector<std::string> fields = split_fields(sv);
        if (first_data) {
            first_data = false;
            if (!all_numeric(fields)) {
                doc.header = std::move(fields);
                continue;
            }
        }
        doc.rows.push_back(std::move(fields));
        doc.lines.push_back(lineno);
    }
    return doc;
}

std::string meta_value(const CsvDoc& doc, std::string_view key) {
    for (const auto& [k, v] : doc.meta) {
        if (k == key) return v;
    }
    return {};
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    return out;
}

void finish_out(std::ofstream& out, const std::string& path) {
    out.flush();
    if (!out) throw std::runtime_error("failed while writing '" + path + "'");
}

void write_meta(std::ofstream& out, const MetaLines& meta) {
    for (const auto& [k, v] : meta) {
        out << "# " << k << ": " << v << '\n';
    }
}

double field_double(const CsvDoc& doc, std::size_t row, std::size_t col) {
    double v;
    if (!parse_double(doc.rows[row][col], v)) {
        fail_at(doc.path, doc.lines[row],
                "cannot parse '" + doc.rows[row][col] + "' as a number");
    }
    return v;
}

Matrix parse_dense(const CsvDoc& doc) {
    if (doc.rows.empty()) throw std::runtime_error(doc.path + ": no data rows");
    const std::size_t cols = doc.rows.front().size();
    Matrix m(doc.rows.size(), cols);
    for (std::size_t r = 0; r < doc.rows.size(); ++r) {
        if (doc.rows[r].size() != cols) {
            fail_at(doc.path, doc.lines[r],
                    "expected " + std::to_string(cols) + " fields, got " +
                        std::to_string(doc.rows[r].size()));
        }
        for (std::size_t c = 0; c < cols; ++c) m(r, c) = field_double(doc, r, c);
    }
    return m;
}

void write_dense(std::ofstream& out, const Matrix& m) {
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
            if (c) out << ',';
            out << format_double(m(r, c));
        }
        out << '\n';
    }
}

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

// "p50" / "lo90" style labels from a credible level.
std::string level_label(double level) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", level * 100.0);
    return buf;
}

json matrix_json(const Matrix& m) {
    json rows = json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_from_json(const json& j, const std::string& path) {
    if (!j.is_array() || j.empty() || !j.front().is_array()) {
        throw std::runtime_error(path + ": expected an array of rows");
    }
    const std::size_t cols = j.front().size();
    Matrix m(j.size(), cols);
    for (std::size_t r = 0; r < j.size(); ++r) {
        if (!j[r].is_array() || j[r].size() != cols) {
            throw std::runtime_error(path + ": ragged matrix rows");
        }
        for (std::size_t c = 0; c < cols; ++c) m(r, c) = j[r][c].get<double>();
    }
    return m;
}

}  // namespace

std::string format_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

std::vector<double> read_series_csv(const std::string& path) {
    const CsvDoc doc = read_csv(path);
    std::vector<double> out;
    out.reserve(doc.rows.size());
    for (std::size_t r = 0; r < doc.rows.size(); ++r) {
        if (doc.rows[r].size() != 1) {
            fail_at(doc.path, doc.lines[r],
                    "expected one value per line, got " + std::to_string(doc.rows[r].size()) +
                        " fields");
        }
        out.push_back(field_double(doc, r, 0));
    }
    if (out.empty()) throw std::runtime_error(path + ": no data rows");
    return out;
}

void write_series_csv(const std::string& path, std::span<const double> values,
                      const MetaLines& meta) {
    std::ofstream out = open_out(path);
    write_meta(out, meta);
    for (double v : values) out << format_double(v) << '\n';
    finish_out(out, path);
}

Matrix read_matrix_csv(const std::string& path) {
    return parse_dense(read_csv(path));
}

void write_matrix_csv(const std::string& path, const Matrix& matrix, const MetaLines& meta) {
    std::ofstream out = open_out(path);
    write_meta(out, meta);
    write_dense(out, matrix);
    finish_out(out, path);
}

Ews read_ews_csv(const std::string& path) {
    const CsvDoc doc = read_csv(path);
    const bool long_form = doc.header.size() == 3 && lower(doc.header[0]) == "scale" &&
                           lower(doc.header[1]) == "location" && lower(doc.header[2]) == "value";
    try {
        if (!long_form) return Ews(parse_dense(doc));

        std::map<int, std::vector<std::pair<double, double>>> by_scale;
        for (std::size_t r = 0; r < doc.rows.size(); ++r) {
            if (doc.rows[r].size() != 3) {
                fail_at(doc.path, doc.lines[r], "expected scale,location,value");
            }
            const double js = field_double(doc, r, 0);
            const int j = static_cast<int>(std::lround(js));
            if (std::fabs(js - j) > 1e-9 || j < 1) {
                fail_at(doc.path, doc.lines[r], "scale must be a positive integer");
            }
            by_scale[j].emplace_back(field_double(doc, r, 1), field_double(doc, r, 2));
        }
        if (by_scale.empty()) throw std::runtime_error(path + ": no data rows");
        const int n_scales = by_scale.rbegin()->first;
        const std::size_t T = by_scale.begin()->second.size();
        Matrix m(static_cast<std::size_t>(n_scales), T);
        for (int j = 1; j <= n_scales; ++j) {
            auto it = by_scale.find(j);
            if (it == by_scale.end()) {
                throw std::runtime_error(path + ": missing scale " + std::to_string(j));
            }
            auto& cells = it->second;
            if (cells.size() != T) {
                throw std::runtime_error(path + ": scale " + std::to_string(j) + " has " +
                                         std::to_string(cells.size()) + " locations, expected " +
                                         std::to_string(T));
            }
            std::sort(cells.begin(), cells.end());
            for (std::size_t k = 0; k < T; ++k) {
                const double loc = cells[k].first;
                const double as_index = static_cast<double>(k);
                const double as_grid = static_cast<double>(k) / static_cast<double>(T);
                if (std::fabs(loc - as_index) > 1e-9 && std::fabs(loc - as_grid) > 1e-9) {
                    throw std::runtime_error(path + ": scale " + std::to_string(j) +
                                             ": locations are neither indices 0..T-1 nor a k/T grid");
                }
                m(static_cast<std::size_t>(j - 1), k) = cells[k].second;
            }
        }
        return Ews(std::move(m));
    } catch (const std::invalid_argument& ex) {
        throw std::runtime_error(path + ": " + ex.what());
    }
}

void write_ews_csv(const std::string& path, const Ews& ews, const MetaLines& meta) {
    write_matrix_csv(path, ews.spectrum, meta);
}

void write_estimate_json(const std::string& path, const EwsEstimate& estimate,
                         const MetaLines& meta) {
    const std::size_t n_scales = estimate.mean.rows();
    const std::size_t T = estimate.mean.cols();

    json m;
    m["analysis"] = estimate.analysis_spec;
    m["smoothing"] = estimate.smoothing_spec;
    m["spins"] = estimate.spins;
    m["samples"] = estimate.n_samples;
    m["seed"] = estimate.seed;
    m["rejected_draws"] = estimate.rejected_draws;
    m["total_draws"] = estimate.total_draws;
    json levels = json::array();
    for (const auto& b : estimate.bands) levels.push_back(b.level);
    m["levels"] = std::move(levels);
    if (!meta.empty()) {
        json cfg;
        for (const auto& [k, v] : meta) cfg[k] = v;
        m["config"] = std::move(cfg);
    }

    json j;
    j["meta"] = std::move(m);
    json scales = json::array();
    for (std::size_t s = 1; s <= n_scales; ++s) scales.push_back(s);
    j["scales"] = std::move(scales);
    json locations = json::array();
    for (std::size_t k = 0; k < T; ++k) {
        locations.push_back(static_cast<double>(k) / static_cast<double>(T));
    }
    j["locations"] = std::move(locations);
    j["mean"] = matrix_json(estimate.mean);
    j["mean_preclip"] = matrix_json(estimate.mean_preclip);
    json bands = json::object();
    for (const auto& b : estimate.bands) {
        json one;
        one["lo"] = matrix_json(b.lower);
        one["hi"] = matrix_json(b.upper);
        bands["p" + level_label(b.level)] = std::move(one);
    }
    j["bands"] = std::move(bands);

    std::ofstream out = open_out(path);
    out << j.dump(1, '\t') << '\n';
    finish_out(out, path);
}

EwsEstimate read_estimate_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
    json j;
    try {
        in >> j;
    } catch (const json::exception& ex) {
        throw std::runtime_error(path + ": " + ex.what());
    }
    try {
        EwsEstimate est;
        const json& m = j.at("meta");
        est.analysis_spec = m.at("analysis").get<std::string>();
        est.smoothing_spec = m.at("smoothing").get<std::string>();
        est.spins = m.at("spins").get<int>();
        est.n_samples = m.at("samples").get<int>();
        est.seed = m.at("seed").get<std::uint64_t>();
        est.rejected_draws = m.at("rejected_draws").get<std::uint64_t>();
        est.total_draws = m.at("total_draws").get<std::uint64_t>();
        est.mean = matrix_from_json(j.at("mean"), path);
        est.mean_preclip = matrix_from_json(j.at("mean_preclip"), path);
        const json& bands = j.at("bands");
        for (const auto& lv : m.at("levels")) {
            CredibleBand b;
            b.level = lv.get<double>();
            const json& one = bands.at("p" + level_label(b.level));
            b.lower = matrix_from_json(one.at("lo"), path);
            b.upper = matrix_from_json(one.at("hi"), path);
            est.bands.push_back(std::move(b));
        }
        return est;
    } catch (const json::exception& ex) {
        throw std::runtime_error(path + ": malformed estimate document: " + ex.what());
    }
}

void write_estimate_csv(const std::string& path, const EwsEstimate& estimate,
                        const MetaLines& meta) {
    std::ofstream out = open_out(path);
    MetaLines all = {{"analysis", estimate.analysis_spec},
                     {"smoothing", estimate.smoothing_spec},
                     {"spins", std::to_string(estimate.spins)},
                     {"samples", std::to_string(estimate.n_samples)},
                     {"seed", std::to_string(estimate.seed)},
                     {"rejected_draws", std::to_string(estimate.rejected_draws)},
                     {"total_draws", std::to_string(estimate.total_draws)}};
    all.insert(all.end(), meta.begin(), meta.end());
    write_meta(out, all);

    out << "scale,location,mean";
    for (const auto& b : estimate.bands) {
        const std::string label = level_label(b.level);
        out << ",lo" << label << ",hi" << label;
    }
    out << '\n';
    const std::size_t T = estimate.mean.cols();
    for (std::size_t r = 0; r < estimate.mean.rows(); ++r) {
        for (std::size_t k = 0; k < T; ++k) {
            out << (r + 1) << ','
                << format_double(static_cast<double>(k) / static_cast<double>(T)) << ','
                << format_double(estimate.mean(r, k));
            for (const auto& b : estimate.bands) {
                out << ',' << format_double(b.lower(r, k)) << ','
                    << format_double(b.upper(r, k));
            }
            out << '\n';
        }
    }
    finish_out(out, path);
}

EwsEstimate read_estimate_csv(const std::string& path) {
    const CsvDoc doc = read_csv(path);
    if (doc.header.size() < 3 || lower(doc.header[0]) != "scale" ||
        lower(doc.header[1]) != "location" || lower(doc.header[2]) != "mean") {
        throw std::runtime_error(path + ": expected a scale,location,mean,... header");
    }
    if ((doc.header.size() - 3) % 2 != 0) {
        throw std::runtime_error(path + ": band columns must come in lo/hi pairs");
    }
    EwsEstimate est;
    est.analysis_spec = meta_value(doc, "analysis");
    est.smoothing_spec = meta_value(doc, "smoothing");
    parse_int(meta_value(doc, "spins"), est.spins);
    parse_int(meta_value(doc, "samples"), est.n_samples);
    parse_u64(meta_value(doc, "seed"), est.seed);
    parse_u64(meta_value(doc, "rejected_draws"), est.rejected_draws);
    parse_u64(meta_value(doc, "total_draws"), est.total_draws);

    std::vector<double> levels;
    for (std::size_t c = 3; c < doc.header.size(); c += 2) {
        const std::string lo = lower(doc.header[c]);
        const std::string hi = lower(doc.header[c + 1]);
        double pct;
        if (lo.rfind("lo", 0) != 0 || hi.rfind("hi", 0) != 0 ||
            !parse_double(lo.substr(2), pct) || lo.substr(2) != hi.substr(2)) {
            throw std::runtime_error(path + ": unrecognized band columns '" + doc.header[c] +
                                     "," + doc.header[c + 1] + "'");
        }
        levels.push_back(pct / 100.0);
    }

    if (doc.rows.empty()) throw std::runtime_error(path + ": no data rows");
    int n_scales = 0;
    for (std::size_t r = 0; r < doc.rows.size(); ++r) {
        int s;
        if (doc.rows[r].size() != doc.header.size() || !parse_int(doc.rows[r][0], s)) {
            fail_at(doc.path, doc.lines[r], "malformed estimate row");
        }
        n_scales = std::max(n_scales, s);
    }
    if (n_scales < 1 || doc.rows.size() % static_cast<std::size_t>(n_scales) != 0) {
        throw std::runtime_error(path + ": rows do not tile scales evenly");
    }
    const std::size_t T = doc.rows.size() / static_cast<std::size_t>(n_scales);
    est.mean = Matrix(static_cast<std::size_t>(n_scales), T);
    est.bands.resize(levels.size());
    for (std::size_t b = 0; b < levels.size(); ++b) {
        est.bands[b].level = levels[b];
        est.bands[b].lower = Matrix(static_cast<std::size_t>(n_scales), T);
        est.bands[b].upper = Matrix(static_cast<std::size_t>(n_scales), T);
    }
    for (std::size_t r = 0; r < doc.rows.size(); ++r) {
        const std::size_t jr = r / T;
        const std::size_t k = r % T;
        int s;
        parse_int(doc.rows[r][0], s);
        if (static_cast<std::size_t>(s - 1) != jr) {
            fail_at(doc.path, doc.lines[r], "rows out of scale-major order");
        }
        est.mean(jr, k) = field_double(doc, r, 2);
        for (std::size_t b = 0; b < levels.size(); ++b) {
            est.bands[b].lower(jr, k) = field_double(doc, r, 3 + 2 * b);
            est.bands[b].upper(jr, k) = field_double(doc, r, 4 + 2 * b);
        }
    }
    return est;
}

BenchmarkTable benchmark_table(const BenchmarkReport& report) {
    BenchmarkTable table;
    std::map<int, std::map<std::string, double>> cells;
    bool has_ep = false;
    bool has_la = false;
    for (const auto& row : report.rows) {
        if (row.method != "hf" && row.method != "tid") continue;
        const WaveletFilter f = WaveletFilter::parse(row.filter);
        const bool ep = f.family() == WaveletFamily::ExtremalPhase;
        (ep ? has_ep : has_la) = true;
        cells[f.vanishing_moments()][(ep ? "ep_" : "la_") + row.method] = row.amse;
    }
    if (has_ep) {
        table.columns.push_back("ep_tid");
        table.columns.push_back("ep_hf");
    }
    if (has_la) {
        table.columns.push_back("la_tid");
        table.columns.push_back("la_hf");
    }
    table.amse = Matrix(cells.size(), table.columns.size(),
                        std::numeric_limits<double>::quiet_NaN());
    std::size_t r = 0;
    for (const auto& [vm, row] : cells) {
        table.vanishing_moments.push_back(vm);
        for (std::size_t c = 0; c < table.columns.size(); ++c) {
            const auto it = row.find(table.columns[c]);
            if (it != row.end()) table.amse(r, c) = it->second;
        }
        ++r;
    }
    return table;
}

void write_benchmark_table_csv(const std::string& path, const BenchmarkTable& table,
                               const MetaLines& meta) {
    std::ofstream out = open_out(path);
    write_meta(out, meta);
    out << "vanishing_moments";
    for (const auto& c : table.columns) out << ',' << c;
    out << '\n';
    for (std::size_t r = 0; r < table.vanishing_moments.size(); ++r) {
        out << table.vanishing_moments[r];
        for (std::size_t c = 0; c < table.columns.size(); ++c) {
            out << ',';
            if (!std::isnan(table.amse(r, c))) out << format_double(table.amse(r, c));
        }
        out << '\n';
    }
    finish_out(out, path);
}

BenchmarkTable read_benchmark_table_csv(const std::string& path) {
    const CsvDoc doc = read_csv(path);
    if (doc.header.empty() || lower(doc.header[0]) != "vanishing_moments") {
        throw std::runtime_error(path + ": expected a vanishing_moments,... header");
    }
    BenchmarkTable table;
    table.columns.assign(doc.header.begin() + 1, doc.header.end());
    table.amse = Matrix(doc.rows.size(), table.columns.size(),
                        std::numeric_limits<double>::quiet_NaN());
    for (std::size_t r = 0; r < doc.rows.size(); ++r) {
        if (doc.rows[r].size() != doc.header.size()) {
            fail_at(doc.path, doc.lines[r], "field count does not match header");
        }
        int vm;
        if (!parse_int(doc.rows[r][0], vm)) {
            fail_at(doc.path, doc.lines[r], "vanishing_moments must be an integer");
        }
        table.vanishing_moments.push_back(vm);
        for (std::size_t c = 0; c < table.columns.size(); ++c) {
            if (!doc.rows[r][c + 1].empty()) table.amse(r, c) = field_double(doc, r, c + 1);
        }
    }
    return table;
}

void write_benchmark_detail_csv(const std::string& path, const BenchmarkReport& report,
                                const MetaLines& meta) {
    std::ofstream out = open_out(path);
    MetaLines all = {{"analysis", report.analysis_spec},
                     {"seed", std::to_string(report.seed)},
                     {"replicates", std::to_string(report.replicates)}};
    all.insert(all.end(), meta.begin(), meta.end());
    for (const auto& f : report.failure_messages) all.emplace_back("failure", f);
    write_meta(out, all);
    out << "method,filter,amse,se,replicates,failures\n";
    for (const auto& row : report.rows) {
        out << row.method << ',' << row.filter << ',' << format_double(row.amse) << ','
            << format_double(row.se) << ',' << row.replicates << ',' << row.failures << '\n';
    }
    finish_out(out, path);
}

BenchmarkReport read_benchmark_detail_csv(const std::string& path) {
    const CsvDoc doc = read_csv(path);
    const std::array<const char*, 6> expected = {"method", "filter",     "amse",
                                                 "se",     "replicates", "failures"};
    if (doc.header.size() != expected.size()) {
        throw std::runtime_error(path + ": expected a method,filter,... header");
    }
    for (std::size_t c = 0; c < expected.size(); ++c) {
        if (lower(doc.header[c]) != expected[c]) {
            throw std::runtime_error(path + ": unexpected column '" + doc.header[c] + "'");
        }
    }
    BenchmarkReport report;
    report.analysis_spec = meta_value(doc, "analysis");
    parse_u64(meta_value(doc, "seed"), report.seed);
    parse_int(meta_value(doc, "replicates"), report.replicates);
    for (const auto& [k, v] : doc.meta) {
        if (k == "failure") report.failure_messages.push_back(v);
    }
    for (std::size_t r = 0; r < doc.rows.size(); ++r) {
        if (doc.rows[r].size() != expected.size()) {
            fail_at(doc.path, doc.lines[r], "field count does not match header");
        }
        BenchmarkRow row;
        row.method = doc.rows[r][0];
        row.filter = doc.rows[r][1];
        row.amse = field_double(doc, r, 2);
        row.se = field_double(doc, r, 3);
        if (!parse_int(doc.rows[r][4], row.replicates) ||
            !parse_int(doc.rows[r][5], row.failures)) {
            fail_at(doc.path, doc.lines[r], "replicates and failures must be integers");
        }
        report.rows.push_back(std::move(row));
    }
    return report;
}

void write_coverage_csv(const std::string& path, const CoverageReport& report,
                        const MetaLines& meta) {
    std::ofstream out = open_out(path);
    MetaLines all = {{"level", format_double(report.level)},
                     {"replicates", std::to_string(report.replicates)},
                     {"completed", std::to_string(report.completed)}};
    all.insert(all.end(), meta.begin(), meta.end());
    write_meta(out, all);
    for (const std::string& f : report.failure_messages) {
        out << "# failure: " << f << '\n';
    }
    out << "scale,coverage,cells\n";
    for (std::size_t j = 0; j < report.coverage.size(); ++j) {
        out << (j + 1) << ',' << format_double(report.coverage[j]) << ','
            << report.cells[j] << '\n';
    }
    finish_out(out, path);
}

CoverageReport read_coverage_csv(const std::string& path) {
    const CsvDoc doc = read_csv(path);
    if (doc.header.size() != 3 || lower(doc.header[0]) != "scale" ||
        lower(doc.header[1]) != "coverage" || lower(doc.header[2]) != "cells") {
        throw std::runtime_error(path + ": expected a scale,coverage,cells header");
    }
    CoverageReport report;
    parse_double(meta_value(doc, "level"), report.level);
    parse_int(meta_value(doc, "replicates"), report.replicates);
    parse_int(meta_value(doc, "completed"), report.completed);
    for (const auto& [k, v] : doc.meta) {
        if (k == "failure") report.failure_messages.push_back(v);
    }
    report.coverage.resize(doc.rows.size());
    report.cells.resize(doc.rows.size());
    for (std::size_t r = 0; r < doc.rows.size(); ++r) {
        if (doc.rows[r].size() != 3) {
            fail_at(doc.path, doc.lines[r], "expected scale,coverage,cells");
        }
        int scale;
        if (!parse_int(doc.rows[r][0], scale) || static_cast<std::size_t>(scale) != r + 1) {
            fail_at(doc.path, doc.lines[r], "scales must run 1..J in order");
        }
        report.coverage[r] = field_double(doc, r, 1);
        if (!parse_u64(doc.rows[r][2], report.cells[r])) {
            fail_at(doc.path, doc.lines[r], "cells must be a nonnegative integer");
        }
    }
    return report;
}

}  // namespace ewspec
