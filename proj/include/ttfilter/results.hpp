#pragma once

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "ttfilter/common.hpp"

namespace ttfilter {

using nlohmann::json;

struct ResultRow {
    std::string method;
    Index trial = 0;
    std::uint64_t seed = 0;
    double rmse = 0.0;
    double wall_time_s = 0.0;
    bool failed = false;
    bool escaped = false;
    std::map<std::string, double> extra;
};

struct ResultRecord {
    std::string kind;
    std::vector<ResultRow> rows;
    json extras;  ///< experiment-specific aggregate entries

    void sort_rows() {
        std::sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
            return a.method != b.method ? a.method < b.method : a.trial < b.trial;
        });
    }
};

namespace detail {

inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace detail

/// Per-method aggregates, always recomputable from the rows. Failed trials
/// are excluded from the error average but counted.
inline json aggregate_from_rows(const ResultRecord& record) {
    std::map<std::string, std::vector<const ResultRow*>> by_method;
    for (const ResultRow& row : record.rows) by_method[row.method].push_back(&row);
    json out;
    out["kind"] = record.kind;
    json methods = json::object();
    for (const auto& [method, rows] : by_method) {
        double rmse_sum = 0.0, time_sum = 0.0;
        int ok = 0, failures = 0, escaped = 0;
        for (const ResultRow* row : rows) {
            if (row->failed) {
                ++failures;
            } else {
                rmse_sum += row->rmse;
                time_sum += row->wall_time_s;
                ++ok;
            }
            if (row->escaped) ++escaped;
        }
        json m;
        m["trials"] = rows.size();
        m["failures"] = failures;
        m["escaped"] = escaped;
        m["mean_rmse"] = ok > 0 ? rmse_sum / ok : 0.0;
        m["mean_time_s"] = ok > 0 ? time_sum / ok : 0.0;
        methods[method] = m;
    }
    out["methods"] = methods;
    if (!record.extras.is_null()) out["extras"] = record.extras;
    return out;
}

inline std::vector<std::string> extra_columns(const ResultRecord& record) {
    std::vector<std::string> cols;
    for (const ResultRow& row : record.rows)
        for (const auto& [key, value] : row.extra) {
            (void)value;
            if (std::find(cols.begin(), cols.end(), key) == cols.end()) cols.push_back(key);
        }
    std::sort(cols.begin(), cols.end());
    return cols;
}

inline void write_results(const ResultRecord& record, const std::string& dir) {
    std::filesystem::create_directories(dir);
    const std::vector<std::string> cols = extra_columns(record);
    std::ofstream os(dir + "/results.csv");
    if (!os) throw std::runtime_error("write_results: cannot open " + dir + "/results.csv");
    os << "method,trial,seed,rmse,wall_time_s,failed,escaped";
    for (const std::string& c : cols) os << "," << c;
    os << "\n";
    for (const ResultRow& row : record.rows) {
        os << row.method << "," << row.trial << "," << row.seed << ","
           << detail::fmt_double(row.rmse) << "," << detail::fmt_double(row.wall_time_s) << ","
           << (row.failed ? 1 : 0) << "," << (row.escaped ? 1 : 0);
        for (const std::string& c : cols) {
            const auto it = row.extra.find(c);
            os << ",";
            if (it != row.extra.end()) os << detail::fmt_double(it->second);
        }
        os << "\n";
    }
    std::ofstream agg(dir + "/aggregate.json");
    agg << aggregate_from_rows(record).dump(2) << "\n";
}

/// Load a results directory and verify the stored aggregate matches a fresh
/// recomputation from the rows.
inline ResultRecord load_and_verify_results(const std::string& dir) {
    std::ifstream is(dir + "/results.csv");
    if (!is) throw std::runtime_error("load_results: cannot open " + dir + "/results.csv");
    std::string header;
    std::getline(is, header);
    std::vector<std::string> cols;
    {
        std::istringstream hs(header);
        std::string c;
        while (std::getline(hs, c, ',')) cols.push_back(c);
    }
    ResultRecord record;
    for (std::string line; std::getline(is, line);) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::vector<std::string> fields;
        std::string f;
        while (std::getline(ls, f, ',')) fields.push_back(f);
        while (fields.size() < cols.size()) fields.push_back("");
        ResultRow row;
        row.method = fields[0];
        row.trial = std::stoll(fields[1]);
        row.seed = std::stoull(fields[2]);
        row.rmse = std::stod(fields[3]);
        row.wall_time_s = std::stod(fields[4]);
        row.failed = fields[5] == "1";
        row.escaped = fields[6] == "1";
        for (std::size_t c = 7; c < cols.size(); ++c)
            if (!fields[c].empty()) row.extra[cols[c]] = std::stod(fields[c]);
        record.rows.push_back(std::move(row));
    }
    std::ifstream agg_file(dir + "/aggregate.json");
    if (!agg_file) throw std::runtime_error("load_results: missing aggregate.json in " + dir);
    json stored = json::parse(agg_file);
    record.kind = stored.value("kind", "");
    if (stored.contains("extras")) record.extras = stored["extras"];
    const json recomputed = aggregate_from_rows(record);
    if (stored != recomputed)
        throw std::runtime_error("load_results: aggregate.json does not match its rows in " + dir);
    return record;
}

}  // namespace ttfilter
