#pragma once

// Report rows and their CSV/JSON serializations. The CSV contract is fixed:
// UTF-8, LF line ends, header exactly `experiment,quantity,value,error,meta,
// verdict`, rows sorted by quantity name so output is canonical no matter
// how the quantities were scheduled.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ergokit/common.hpp"

namespace ergokit {

struct ReportRow {
    std::string experiment;
    std::string quantity;
    double value = 0;
    double error = 0;   // standard error; ignored when exact
    bool exact = false;
    std::string meta;   // provenance: seed, horizon, samples, ... (no commas)
    bool gated = false;
    double target = 0;
    double tolerance = 0;
    bool pass = true;
};

inline ReportRow info_row(std::string experiment, std::string quantity, double value,
                          double error, std::string meta, bool exact = false) {
    ReportRow r;
    r.experiment = std::move(experiment);
    r.quantity = std::move(quantity);
    r.value = value;
    r.error = error;
    r.exact = exact;
    r.meta = std::move(meta);
    return r;
}

inline ReportRow gated_row(std::string experiment, std::string quantity, double value,
                           double error, std::string meta, double target, double tolerance,
                           bool exact = false) {
    ReportRow r = info_row(std::move(experiment), std::move(quantity), value, error,
                           std::move(meta), exact);
    r.gated = true;
    r.target = target;
    r.tolerance = tolerance;
    r.pass = std::fabs(value - target) <= tolerance;
    return r;
}

// booleans gate exactly: value must be 1
inline ReportRow bool_row(std::string experiment, std::string quantity, bool value,
                          std::string meta) {
    return gated_row(std::move(experiment), std::move(quantity), value ? 1.0 : 0.0, 0.0,
                     std::move(meta), 1.0, 0.0, true);
}

inline void regate(ReportRow& r, double tolerance) {
    require(r.gated, "report: cannot override tolerance of an info row");
    r.tolerance = tolerance;
    r.pass = std::fabs(r.value - r.target) <= tolerance;
}

inline std::string fmt_g(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

inline std::string csv_field(const std::string& s) {
    require(s.find_first_of(",\"\n\r") == std::string::npos,
            "report: field would need CSV quoting: " + s);
    return s;
}

inline std::string verdict_of(const ReportRow& r) {
    return r.gated ? (r.pass ? "PASS" : "FAIL") : "INFO";
}

inline void sort_rows(std::vector<ReportRow>& rows) {
    std::stable_sort(rows.begin(), rows.end(), [](const ReportRow& a, const ReportRow& b) {
        if (a.quantity != b.quantity) return a.quantity < b.quantity;
        return a.meta < b.meta;
    });
}

inline u64 failure_count(const std::vector<ReportRow>& rows) {
    u64 n = 0;
    for (const auto& r : rows) n += (r.gated && !r.pass) ? 1 : 0;
    return n;
}

inline std::string render_csv(std::vector<ReportRow> rows) {
    sort_rows(rows);
    std::string out = "experiment,quantity,value,error,meta,verdict\n";
    for (const auto& r : rows) {
        out += csv_field(r.experiment) + ',' + csv_field(r.quantity) + ',' + fmt_g(r.value) +
               ',' + (r.exact ? "exact" : fmt_g(r.error)) + ',' + csv_field(r.meta) + ',' +
               verdict_of(r) + '\n';
    }
    return out;
}

inline nlohmann::json summary_json(const std::string& experiment, u64 seed, int threads,
                                   std::vector<ReportRow> rows) {
    sort_rows(rows);
    nlohmann::json j;
    j["schema"] = "ergokit/1";
    j["experiment"] = experiment;
    j["seed"] = seed;
    j["threads"] = threads;
    j["failures"] = failure_count(rows);
    j["rows"] = nlohmann::json::array();
    for (const auto& r : rows) {
        nlohmann::json row;
        row["quantity"] = r.quantity;
        row["value"] = r.value;
        if (r.exact)
            row["exact"] = true;
        else
            row["error"] = r.error;
        row["meta"] = r.meta;
        row["verdict"] = verdict_of(r);
        if (r.gated) {
            row["target"] = r.target;
            row["tolerance"] = r.tolerance;
        }
        j["rows"].push_back(row);
    }
    return j;
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);  // binary keeps LF on any host
    if (!out) throw error("report: cannot write " + path.string());
    out << text;
    if (!out) throw error("report: short write to " + path.string());
}

struct ReportPaths {
    std::filesystem::path csv;
    std::filesystem::path json;
};

inline ReportPaths write_report(const std::filesystem::path& dir, const std::string& experiment,
                                u64 seed, int threads, const std::vector<ReportRow>& rows) {
    std::filesystem::create_directories(dir);
    ReportPaths paths{dir / (experiment + ".csv"), dir / (experiment + ".json")};
    write_text_file(paths.csv, render_csv(rows));
    write_text_file(paths.json, summary_json(experiment, seed, threads, rows).dump(2) + "\n");
    return paths;
}

}  // namespace ergokit
