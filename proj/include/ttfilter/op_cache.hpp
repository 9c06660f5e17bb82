#pragma once

#include <filesystem>
#include <fstream>
#include <optional>

#include <json.hpp>

#include "ttfilter/operators.hpp"
#include "ttfilter/tt_io.hpp"

namespace ttfilter {

/// Cache manifest for an assembled operator set. A cache hit requires full
/// manifest equality; anything else re-assembles.
inline nlohmann::json cache_manifest(const SignalModel& model, const GridSpec& grid,
                                     const AssemblyOptions& opt, bool mixed) {
    nlohmann::json m;
    m["format"] = 1;
    m["dim"] = grid.dim;
    m["points"] = grid.points;
    m["half_width"] = grid.half_width;
    m["eps"] = opt.eps;
    m["delta"] = opt.delta;
    m["ns_tol"] = opt.newton_schulz.tol;
    m["ns_round"] = opt.newton_schulz.eps_round;
    m["lij_round_eps"] = opt.lij_round_eps;
    m["mixed"] = mixed;
    m["model_hash"] = model.hash();
    return m;
}

inline void save_operators(const DiscretizedOperators& ops, const nlohmann::json& manifest,
                           const std::string& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    std::ofstream mf(dir + "/manifest.json");
    mf << manifest.dump(2) << "\n";
    tt_save_matrix_file(ops.delta_g, dir + "/delta_g.tt");
    tt_save_matrix_file(ops.delta_rho, dir + "/delta_rho.tt");
    tt_save_matrix_file(ops.c_d, dir + "/c_d.tt");
    tt_save_matrix_file(ops.m0, dir + "/m0.tt");
    tt_save_matrix_file(ops.l0, dir + "/l0.tt");
    tt_save_matrix_file(ops.sum_lii, dir + "/sum_lii.tt");
    tt_save_matrix_file(ops.m_left, dir + "/m_left.tt");
    tt_save_matrix_file(ops.m_right, dir + "/m_right.tt");
    for (std::size_t k = 0; k < ops.lk.size(); ++k)
        tt_save_matrix_file(ops.lk[k], dir + "/l_" + std::to_string(k) + ".tt");
    for (std::size_t i = 0; i < ops.lij.size(); ++i)
        for (std::size_t j = 0; j < ops.lij[i].size(); ++j)
            tt_save_matrix_file(ops.lij[i][j], dir + "/l_" + std::to_string(i) + "_" +
                                                   std::to_string(j) + ".tt");
    nlohmann::json meta;
    meta["ns_residual"] = ops.ns_residual;
    meta["ns_iterations"] = ops.ns_iterations;
    std::ofstream ms(dir + "/ns_meta.json");
    ms << meta.dump(2) << "\n";
}

inline std::optional<DiscretizedOperators> load_operators(const nlohmann::json& manifest,
                                                          const GridSpec& grid,
                                                          const AssemblyOptions& opt,
                                                          const std::string& dir) {
    namespace fs = std::filesystem;
    std::ifstream mf(dir + "/manifest.json");
    if (!mf) return std::nullopt;
    nlohmann::json stored;
    try {
        stored = nlohmann::json::parse(mf);
    } catch (const std::exception&) {
        return std::nullopt;
    }
    if (stored != manifest) return std::nullopt;
    try {
        DiscretizedOperators ops;
        ops.grid = grid;
        ops.eps = opt.eps;
        ops.delta = opt.delta;
        ops.mixed = manifest.value("mixed", false);
        ops.delta_g = tt_load_matrix_file(dir + "/delta_g.tt");
        ops.delta_rho = tt_load_matrix_file(dir + "/delta_rho.tt");
        ops.c_d = tt_load_matrix_file(dir + "/c_d.tt");
        ops.m0 = tt_load_matrix_file(dir + "/m0.tt");
        ops.l0 = tt_load_matrix_file(dir + "/l0.tt");
        ops.sum_lii = tt_load_matrix_file(dir + "/sum_lii.tt");
        ops.m_left = tt_load_matrix_file(dir + "/m_left.tt");
        ops.m_right = tt_load_matrix_file(dir + "/m_right.tt");
        for (Index k = 0; k < grid.dim; ++k)
            ops.lk.push_back(tt_load_matrix_file(dir + "/l_" + std::to_string(k) + ".tt"));
        ops.lij.assign(grid.dim, std::vector<TtMatrix>(grid.dim));
        for (Index i = 0; i < grid.dim; ++i)
            for (Index j = 0; j < grid.dim; ++j)
                ops.lij[i][j] = tt_load_matrix_file(dir + "/l_" + std::to_string(i) + "_" +
                                                    std::to_string(j) + ".tt");
        std::ifstream ms(dir + "/ns_meta.json");
        if (ms) {
            const nlohmann::json meta = nlohmann::json::parse(ms);
            ops.ns_residual = meta.value("ns_residual", 0.0);
            ops.ns_iterations = meta.value("ns_iterations", 0);
        }
        return ops;
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

/// Assemble with optional directory caching (empty dir: no caching).
inline DiscretizedOperators assemble_cached(const SignalModel& model, const GridSpec& grid,
                                            const AssemblyOptions& opt, const std::string& cache_dir,
                                            bool mixed = false) {
    if (cache_dir.empty())
        return mixed ? assemble_mixed_operators(model, grid, opt)
                     : assemble_operators(model, grid, opt);
    const nlohmann::json manifest = cache_manifest(model, grid, opt, mixed);
    if (auto cached = load_operators(manifest, grid, opt, cache_dir)) return *cached;
    DiscretizedOperators ops = mixed ? assemble_mixed_operators(model, grid, opt)
                                     : assemble_operators(model, grid, opt);
    save_operators(ops, manifest, cache_dir);
    return ops;
}

}  // namespace ttfilter
