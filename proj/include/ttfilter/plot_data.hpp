#pragma once

#include <filesystem>
#include <fstream>

#include "ttfilter/results.hpp"

namespace ttfilter {

namespace detail {

struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    Index column(const std::string& name) const {
        for (std::size_t c = 0; c < columns.size(); ++c)
            if (columns[c] == name) return static_cast<Index>(c);
        throw std::runtime_error("csv column not found: " + name);
    }
};

inline CsvTable read_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open csv: " + path);
    CsvTable table;
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("empty csv: " + path);
    {
        std::istringstream hs(line);
        std::string c;
        while (std::getline(hs, c, ',')) table.columns.push_back(c);
    }
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::istringstream ls(line);
        std::string f;
        while (std::getline(ls, f, ',')) row.push_back(f.empty() ? 0.0 : std::stod(f));
        table.rows.push_back(std::move(row));
    }
    return table;
}

}  // namespace detail

/// Emit plot-ready CSVs from a completed results directory:
///  - trajectory overlays per dimension (truth vs every method's mean),
///  - marginal heatmap stacks (x, t, density) when snapshots exist,
///  - a summary.json listing what was produced.
/// Fails without writing anything when the record is empty or inputs are
/// missing.
inline std::vector<std::string> emit_plot_data(const std::string& results_dir, Index trial = 0) {
    namespace fs = std::filesystem;
    const ResultRecord record = load_and_verify_results(results_dir);
    if (record.rows.empty()) throw std::runtime_error("emit_plot_data: empty result record");

    // Locate the per-trial series files for the requested trial.
    std::string truth_path;
    std::map<std::string, std::string> method_paths;
    const std::string trial_tag = "_trial" + std::to_string(trial) + ".csv";
    for (const auto& entry : fs::directory_iterator(results_dir)) {
        const std::string name = entry.path().filename().string();
        if (name.size() < trial_tag.size() ||
            name.compare(name.size() - trial_tag.size(), trial_tag.size(), trial_tag) != 0)
            continue;
        const auto seed_pos = name.find("_seed");
        if (seed_pos == std::string::npos) continue;
        const std::string stem = name.substr(0, seed_pos);
        if (stem == "truth")
            truth_path = entry.path().string();
        else
            method_paths[stem] = entry.path().string();
    }
    if (truth_path.empty())
        throw std::runtime_error("emit_plot_data: no truth series for trial " +
                                 std::to_string(trial) + " in " + results_dir);
    if (method_paths.empty())
        throw std::runtime_error("emit_plot_data: no method series for trial " +
                                 std::to_string(trial) + " in " + results_dir);

    const detail::CsvTable truth = detail::read_csv(truth_path);
    Index dim = 0;
    while (std::find(truth.columns.begin(), truth.columns.end(),
                     "x_" + std::to_string(dim + 1)) != truth.columns.end())
        ++dim;

    std::map<std::string, detail::CsvTable> methods;
    for (const auto& [stem, path] : method_paths) methods[stem] = detail::read_csv(path);

    std::vector<std::string> written;
    for (Index k = 1; k <= dim; ++k) {
        const std::string out_path =
            results_dir + "/overlay_dim" + std::to_string(k) + ".csv";
        std::ofstream os(out_path);
        if (!os) throw std::runtime_error("emit_plot_data: cannot write " + out_path);
        os << "t,truth";
        for (const auto& [stem, table] : methods) {
            (void)table;
            os << "," << stem;
        }
        os << "\n";
        const Index tcol = truth.column("t");
        const Index xcol = truth.column("x_" + std::to_string(k));
        for (std::size_t r = 0; r < truth.rows.size(); ++r) {
            os << truth.rows[r][tcol] << "," << truth.rows[r][xcol];
            for (const auto& [stem, table] : methods) {
                (void)stem;
                const Index mcol = table.column("mean_" + std::to_string(k));
                os << "," << (r < table.rows.size() ? table.rows[r][mcol] : 0.0);
            }
            os << "\n";
        }
        written.push_back(out_path);
    }

    // Marginal snapshots (if the run produced them) stack into heatmaps.
    for (Index k = 1; k <= dim; ++k) {
        std::vector<std::pair<double, std::string>> snaps;
        const std::string prefix = "marginal_dim" + std::to_string(k) + "_t";
        for (const auto& entry : fs::directory_iterator(results_dir)) {
            const std::string name = entry.path().filename().string();
            if (name.rfind(prefix, 0) == 0 && name.size() > prefix.size() + 4)
                snaps.emplace_back(std::stod(name.substr(prefix.size(),
                                                         name.size() - prefix.size() - 4)),
                                   entry.path().string());
        }
        if (snaps.empty()) continue;
        std::sort(snaps.begin(), snaps.end());
        const std::string out_path = results_dir + "/heatmap_dim" + std::to_string(k) + ".csv";
        std::ofstream os(out_path);
        os << "x,t,density\n";
        for (const auto& [time, path] : snaps) {
            const detail::CsvTable snap = detail::read_csv(path);
            const Index xc = snap.column("x"), dc = snap.column("density");
            for (const auto& row : snap.rows)
                os << row[xc] << "," << time << "," << row[dc] << "\n";
        }
        written.push_back(out_path);
    }

    nlohmann::json summary;
    summary["kind"] = record.kind;
    summary["trial"] = trial;
    summary["dimension"] = dim;
    summary["files"] = written;
    std::ofstream ss(results_dir + "/plot_summary.json");
    ss << summary.dump(2) << "\n";
    written.push_back(results_dir + "/plot_summary.json");
    return written;
}

}  // namespace ttfilter
