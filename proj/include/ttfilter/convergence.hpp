#pragma once

#include "ttfilter/experiments.hpp"

namespace ttfilter {

namespace detail {

inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

/// Scaled-L2 distance between two unit-normalized densities on one grid.
inline double density_distance(const TtVector& a, const TtVector& b, const GridSpec& grid) {
    return std::sqrt(grid.cell_volume()) * tt_norm_f(tt_add(a, tt_scale(b, -1.0)));
}

}  // namespace detail

/// Self-convergence in the mesh size: d = 1, nested grids, a tiny time step
/// with refined iterated integrals, error measured against the finest grid
/// restricted to the coarse points. The fitted slope targets 2.
inline ResultRecord run_spatial_order(const ExperimentSpec& spec) {
    spec.config.validate_schema(detail::experiment_schema(ExperimentKind::spatial_order));
    const Config& c = spec.config;
    const SignalModel model = models::smooth_1d();
    const double L = c.get_double("grid", "half_width", 2.5);
    const Index level_count = static_cast<Index>(c.get_int("convergence", "levels", 4));
    if (level_count < 3) throw ConfigError("spatial_order: need at least 3 levels");
    std::vector<Index> level_points;
    for (Index j = 0; j < level_count; ++j) level_points.push_back(12 * (Index(1) << j) - 1);
    const Index ref_points = static_cast<Index>(
        c.get_int("convergence", "ref_points", 12 * (Index(1) << level_count) * 2 - 1));
    for (Index n : level_points)
        if ((ref_points + 1) % (n + 1) != 0)
            throw ConfigError("spatial_order: reference grid is not nested with every level");

    const double dt = c.get_double("filter", "dt", 0.002);
    const double horizon = c.get_double("filter", "horizon", 0.4);
    const Index paths = static_cast<Index>(c.get_int("convergence", "paths", 20));

    auto make_ops = [&](Index n) {
        const GridSpec grid(L, n, 1);
        AssemblyOptions opt;
        opt.eps = c.get_double("filter", "eps_tt", 1e-9);
        opt.delta = dt;
        opt.newton_schulz.tol = c.get_double("offline", "ns_tol", 1e-10);
        opt.newton_schulz.eps_round = c.get_double("offline", "ns_round", 1e-10);
        return assemble_operators(model, grid, opt);
    };
    std::vector<DiscretizedOperators> level_ops;
    for (Index n : level_points) level_ops.push_back(make_ops(n));
    const DiscretizedOperators ref_ops = make_ops(ref_points);

    auto make_cfg = [&](const DiscretizedOperators& ops) {
        FilterConfig cfg;
        cfg.grid = ops.grid;
        cfg.eps_tt = ops.eps;
        cfg.eps_round = c.get_double("filter", "eps_round", 1e-10);
        cfg.delta = dt;
        cfg.integral_mode = IntegralMode::refined;
        cfg.init_mean = Vec::Zero(1);
        cfg.init_std = c.get_double("filter", "init_std", 0.45);
        cfg.rank_cap = 1 << 20;  // d = 1: ranks are trivially 1
        return cfg;
    };

    ResultRecord record;
    record.kind = "spatial_order";
    std::vector<std::vector<double>> errors(level_points.size(),
                                            std::vector<double>(paths, 0.0));
    std::vector<ResultRow> rows;
    std::mutex rows_mutex;
    parallel_for(static_cast<std::size_t>(paths), spec.effective_workers(), [&](std::size_t p) {
        PathConfig pc;
        pc.horizon = horizon;
        pc.delta = dt;
        pc.substeps = static_cast<Index>(c.get_int("path", "substeps", 8));
        pc.seed = CounterRng(spec.seed).split(3000 + p).next_u64();
        pc.x0 = Vec::Zero(1);
        pc.x0_std = c.get_double("path", "x0_std", 0.0);
        const TrajectoryRecord traj = simulate_truth(model, pc);

        const Vec ref = tt_to_dense(
            run_filter_density(make_cfg(ref_ops), ref_ops, traj).density);
        for (std::size_t lvl = 0; lvl < level_points.size(); ++lvl) {
            const Index n = level_points[lvl];
            const Vec u = tt_to_dense(
                run_filter_density(make_cfg(level_ops[lvl]), level_ops[lvl], traj).density);
            const Index ratio = (ref_points + 1) / (n + 1);
            Vec restricted(n);
            for (Index r = 0; r < n; ++r) restricted(r) = ref((r + 1) * ratio - 1);
            const double dx = level_ops[lvl].grid.dx();
            restricted /= restricted.norm() * std::sqrt(dx);
            const double err = std::sqrt(dx) * (u - restricted).norm();
            errors[lvl][p] = err;
            ResultRow row;
            row.method = "n" + std::to_string(n);
            row.trial = static_cast<Index>(p);
            row.seed = pc.seed;
            row.rmse = err;
            row.extra["points"] = static_cast<double>(n);
            row.extra["dx"] = dx;
            std::lock_guard<std::mutex> lock(rows_mutex);
            rows.push_back(std::move(row));
        }
    });
    record.rows = std::move(rows);
    record.sort_rows();

    std::vector<double> dxs, means;
    nlohmann::json levels = nlohmann::json::array();
    for (std::size_t lvl = 0; lvl < level_points.size(); ++lvl) {
        double acc = 0.0;
        for (double e : errors[lvl]) acc += e;
        const double mean = acc / static_cast<double>(paths);
        dxs.push_back(level_ops[lvl].grid.dx());
        means.push_back(mean);
        nlohmann::json entry;
        entry["points"] = level_points[lvl];
        entry["dx"] = dxs.back();
        entry["mean_error"] = mean;
        levels.push_back(entry);
    }
    record.extras["levels"] = levels;
    record.extras["slope"] = detail::loglog_slope(dxs, means);
    if (!spec.out_dir.empty()) write_results(record, spec.out_dir);
    return record;
}

/// Strong temporal order: one fine path per trial, every step size consumes
/// the same noise through coarsening, error against the delta/2^levels
/// reference at the terminal time. Refined integrals target slope 1; the
/// product approximation is tracked alongside.
inline ResultRecord run_temporal_order(const ExperimentSpec& spec) {
    spec.config.validate_schema(detail::experiment_schema(ExperimentKind::temporal_order));
    const Config& c = spec.config;
    const SignalModel model = models::smooth_1d();
    const double L = c.get_double("grid", "half_width", 2.5);
    const Index n = static_cast<Index>(c.get_int("grid", "points", 31));
    const double base_dt = c.get_double("convergence", "base_dt", 0.02);
    const Index level_count = static_cast<Index>(c.get_int("convergence", "levels", 5));
    if (level_count < 3) throw ConfigError("temporal_order: need at least 3 levels");
    const double horizon = c.get_double("filter", "horizon", 1.0);
    const Index paths = static_cast<Index>(c.get_int("convergence", "paths", 100));
    const double ref_dt = base_dt / static_cast<double>(Index(1) << level_count);

    const GridSpec grid(L, n, 1);
    auto make_ops = [&](double dt) {
        AssemblyOptions opt;
        opt.eps = c.get_double("filter", "eps_tt", 1e-9);
        opt.delta = dt;
        opt.newton_schulz.tol = c.get_double("offline", "ns_tol", 1e-10);
        opt.newton_schulz.eps_round = c.get_double("offline", "ns_round", 1e-10);
        return assemble_operators(model, grid, opt);
    };
    std::vector<DiscretizedOperators> level_ops;
    std::vector<double> level_dts;
    for (Index k = 0; k < level_count; ++k) {
        level_dts.push_back(base_dt / static_cast<double>(Index(1) << k));
        level_ops.push_back(make_ops(level_dts.back()));
    }
    const DiscretizedOperators ref_ops = make_ops(ref_dt);

    auto make_cfg = [&](double dt, IntegralMode mode) {
        FilterConfig cfg;
        cfg.grid = grid;
        cfg.eps_tt = 1e-9;
        cfg.eps_round = c.get_double("filter", "eps_round", 1e-10);
        cfg.delta = dt;
        cfg.integral_mode = mode;
        cfg.init_mean = Vec::Zero(1);
        cfg.init_std = c.get_double("filter", "init_std", 0.45);
        cfg.rank_cap = 1 << 20;
        return cfg;
    };

    std::vector<std::vector<double>> err_refined(level_count, std::vector<double>(paths, 0.0));
    std::vector<std::vector<double>> err_product(level_count, std::vector<double>(paths, 0.0));
    parallel_for(static_cast<std::size_t>(paths), spec.effective_workers(), [&](std::size_t p) {
        PathConfig pc;
        pc.horizon = horizon;
        pc.delta = ref_dt;
        pc.substeps = static_cast<Index>(c.get_int("path", "substeps", 32));
        pc.seed = CounterRng(spec.seed).split(4000 + p).next_u64();
        pc.x0 = Vec::Zero(1);
        pc.keep_fine_noise = true;
        const TrajectoryRecord fine = simulate_truth(model, pc);
        const TtVector ref =
            run_filter_density(make_cfg(ref_dt, IntegralMode::refined), ref_ops, fine).density;
        for (Index k = 0; k < level_count; ++k) {
            const Index factor = Index(1) << (level_count - k);
            const TrajectoryRecord coarse = coarsen_trajectory(fine, factor);
            const TtVector ur =
                run_filter_density(make_cfg(level_dts[k], IntegralMode::refined), level_ops[k],
                                   coarse)
                    .density;
            const TtVector up =
                run_filter_density(make_cfg(level_dts[k], IntegralMode::product), level_ops[k],
                                   coarse)
                    .density;
            err_refined[k][p] = detail::density_distance(ur, ref, grid);
            err_product[k][p] = detail::density_distance(up, ref, grid);
        }
    });

    ResultRecord record;
    record.kind = "temporal_order";
    std::vector<double> dts, mean_ref, mean_prod;
    nlohmann::json levels = nlohmann::json::array();
    for (Index k = 0; k < level_count; ++k) {
        double ar = 0.0, ap = 0.0;
        for (Index p = 0; p < paths; ++p) {
            ar += err_refined[k][p] * err_refined[k][p];
            ap += err_product[k][p] * err_product[k][p];
            ResultRow row;
            row.method = "refined_l" + std::to_string(k);
            row.trial = p;
            row.seed = spec.seed;
            row.rmse = err_refined[k][p];
            row.extra["dt"] = level_dts[k];
            record.rows.push_back(row);
            row.method = "product_l" + std::to_string(k);
            row.rmse = err_product[k][p];
            record.rows.push_back(row);
        }
        // strong (L2-in-probability) error
        dts.push_back(level_dts[k]);
        mean_ref.push_back(std::sqrt(ar / paths));
        mean_prod.push_back(std::sqrt(ap / paths));
        nlohmann::json entry;
        entry["dt"] = level_dts[k];
        entry["strong_error_refined"] = mean_ref.back();
        entry["strong_error_product"] = mean_prod.back();
        levels.push_back(entry);
    }
    record.sort_rows();
    record.extras["levels"] = levels;
    record.extras["slope_refined"] = detail::loglog_slope(dts, mean_ref);
    record.extras["slope_product"] = detail::loglog_slope(dts, mean_prod);
    if (!spec.out_dir.empty()) write_results(record, spec.out_dir);
    return record;
}

/// Error against a near-exact (eps = ref_eps) run as the prescribed TT
/// accuracy is swept at a fixed grid; the slope in eps targets 1.
inline ResultRecord run_tt_accuracy(const ExperimentSpec& spec) {
    spec.config.validate_schema(detail::experiment_schema(ExperimentKind::tt_accuracy));
    const Config& c = spec.config;
    const SignalModel model = models::smooth_2d();
    const double L = c.get_double("grid", "half_width", 2.5);
    const Index n = static_cast<Index>(c.get_int("grid", "points", 23));
    const double dt = c.get_double("filter", "dt", 0.01);
    const double horizon = c.get_double("filter", "horizon", 0.5);
    const Index paths = static_cast<Index>(c.get_int("convergence", "paths", 10));
    const std::vector<double> eps_list =
        c.get_double_list("convergence", "eps_list", {1e-2, 3e-3, 1e-3, 3e-4, 1e-4});
    if (eps_list.size() < 3) throw ConfigError("tt_accuracy: need at least 3 eps levels");
    const double ref_eps = c.get_double("convergence", "ref_eps", 1e-9);

    const GridSpec grid(L, n, 2);
    auto make_ops = [&](double eps) {
        AssemblyOptions opt;
        opt.eps = eps;
        opt.delta = dt;
        opt.newton_schulz.tol = c.get_double("offline", "ns_tol", 1e-10);
        opt.newton_schulz.eps_round = c.get_double("offline", "ns_round", 1e-10);
        return assemble_operators(model, grid, opt);
    };
    std::vector<DiscretizedOperators> eps_ops;
    for (double eps : eps_list) eps_ops.push_back(make_ops(eps));
    const DiscretizedOperators ref_ops = make_ops(ref_eps);

    auto make_cfg = [&](double eps) {
        FilterConfig cfg;
        cfg.grid = grid;
        cfg.eps_tt = eps;
        cfg.eps_round = eps;  // online rounding follows the offline accuracy
        cfg.delta = dt;
        cfg.integral_mode = IntegralMode::product;
        cfg.init_mean = Vec::Zero(2);
        cfg.init_std = c.get_double("filter", "init_std", 0.45);
        cfg.rank_cap = 1 << 20;
        return cfg;
    };

    std::vector<std::vector<double>> errors(eps_list.size(), std::vector<double>(paths, 0.0));
    parallel_for(static_cast<std::size_t>(paths), spec.effective_workers(), [&](std::size_t p) {
        PathConfig pc;
        pc.horizon = horizon;
        pc.delta = dt;
        pc.substeps = static_cast<Index>(c.get_int("path", "substeps", 16));
        pc.seed = CounterRng(spec.seed).split(5000 + p).next_u64();
        pc.x0 = Vec::Zero(2);
        const TrajectoryRecord traj = simulate_truth(model, pc);
        const TtVector ref = run_filter_density(make_cfg(ref_eps), ref_ops, traj).density;
        for (std::size_t e = 0; e < eps_list.size(); ++e) {
            const TtVector u =
                run_filter_density(make_cfg(eps_list[e]), eps_ops[e], traj).density;
            errors[e][p] = detail::density_distance(u, ref, grid);
        }
    });

    ResultRecord record;
    record.kind = "tt_accuracy";
    std::vector<double> means;
    nlohmann::json levels = nlohmann::json::array();
    for (std::size_t e = 0; e < eps_list.size(); ++e) {
        double acc = 0.0;
        for (Index p = 0; p < paths; ++p) {
            acc += errors[e][p];
            ResultRow row;
            row.method = "eps" + std::to_string(e);
            row.trial = p;
            row.seed = spec.seed;
            row.rmse = errors[e][p];
            row.extra["eps"] = eps_list[e];
            record.rows.push_back(row);
        }
        means.push_back(acc / static_cast<double>(paths));
        nlohmann::json entry;
        entry["eps"] = eps_list[e];
        entry["mean_error"] = means.back();
        levels.push_back(entry);
    }
    record.sort_rows();
    record.extras["levels"] = levels;
    record.extras["slope"] = detail::loglog_slope(eps_list, means);
    if (!spec.out_dir.empty()) write_results(record, spec.out_dir);
    return record;
}

inline ResultRecord run_convergence(const ExperimentSpec& spec) {
    switch (spec.kind) {
        case ExperimentKind::spatial_order: return run_spatial_order(spec);
        case ExperimentKind::temporal_order: return run_temporal_order(spec);
        case ExperimentKind::tt_accuracy: return run_tt_accuracy(spec);
        default: throw ConfigError("run_convergence: not a convergence experiment kind");
    }
}

}  // namespace ttfilter
