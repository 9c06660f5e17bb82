#pragma once

#include <chrono>
#include <filesystem>
#include <numeric>
#include <set>

#include "ttfilter/config.hpp"
#include "ttfilter/ekf.hpp"
#include "ttfilter/filter.hpp"
#include "ttfilter/models.hpp"
#include "ttfilter/op_cache.hpp"
#include "ttfilter/parallel.hpp"
#include "ttfilter/particle_filter.hpp"
#include "ttfilter/results.hpp"

namespace ttfilter {

enum class ExperimentKind { table1, cubic, multimode, spatial_order, temporal_order, tt_accuracy };

inline std::string kind_name(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::table1: return "table1";
        case ExperimentKind::cubic: return "cubic";
        case ExperimentKind::multimode: return "multimode";
        case ExperimentKind::spatial_order: return "spatial_order";
        case ExperimentKind::temporal_order: return "temporal_order";
        case ExperimentKind::tt_accuracy: return "tt_accuracy";
    }
    return "?";
}

struct ExperimentSpec {
    ExperimentKind kind = ExperimentKind::cubic;
    Config config;
    Index trials = 20;
    std::uint64_t seed = 42;
    std::string out_dir;  ///< empty: no files written
    bool paper_scale = false;
    std::size_t workers = 0;  ///< 0: hardware concurrency

    std::size_t effective_workers() const { return workers == 0 ? default_workers() : workers; }
};

namespace detail {

inline const std::map<std::string, std::set<std::string>>& experiment_schema(ExperimentKind kind) {
    static const std::map<std::string, std::set<std::string>> common = {
        {"experiment", {"trials", "seed", "workers", "methods", "out", "paper_scale"}},
        {"model", {"dimension"}},
        {"grid", {"half_width", "points"}},
        {"filter",
         {"eps_tt", "eps_round", "dt", "horizon", "init_std", "integral_mode", "rank_cap"}},
        {"offline", {"ns_tol", "ns_round", "cache_dir", "lij_round_eps"}},
        {"path", {"substeps", "x0_std", "sim_bound_frac"}},
        {"pf", {"particles"}},
    };
    static const std::map<std::string, std::set<std::string>> table1 = {
        {"experiment", {"seed", "workers", "out"}},
        {"table1", {"dims", "dofs", "half_width", "delta", "eps", "ns_tol", "ns_round", "rank_cap"}},
    };
    static std::map<std::string, std::set<std::string>> multimode = [] {
        auto m = common;
        m["multimode"] = {"snapshot_dt", "bimodal_after"};
        return m;
    }();
    static std::map<std::string, std::set<std::string>> convergence = [] {
        auto m = common;
        m["convergence"] = {"paths", "levels", "ref_points", "base_dt", "eps_list", "ref_eps"};
        return m;
    }();
    switch (kind) {
        case ExperimentKind::table1: return table1;
        case ExperimentKind::multimode: return multimode;
        case ExperimentKind::spatial_order:
        case ExperimentKind::temporal_order:
        case ExperimentKind::tt_accuracy: return convergence;
        default: return common;
    }
}

inline std::vector<std::string> split_csv_names(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string item;
    while (std::getline(is, item, ',')) {
        const auto b = item.find_first_not_of(" \t");
        const auto e = item.find_last_not_of(" \t");
        if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
    }
    return out;
}

inline double elapsed_s(const std::chrono::steady_clock::time_point& start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

/// L1 distance between a marginal and its grid reflection.
inline double reflection_asymmetry(const Vec& marginal) {
    double s = 0.0;
    const Index n = marginal.size();
    for (Index i = 0; i < n; ++i) s += std::abs(marginal(i) - marginal(n - 1 - i));
    return s;
}

inline int local_maxima_count(const Vec& m) {
    int count = 0;
    const Index n = m.size();
    for (Index i = 0; i < n; ++i) {
        const double left = i > 0 ? m(i - 1) : -1.0;
        const double right = i + 1 < n ? m(i + 1) : -1.0;
        if (m(i) > left && m(i) > right) ++count;
    }
    return count;
}

/// Weighted per-direction histogram of a particle ensemble on the grid
/// cells, normalized to unit mass (out-of-domain mass is clipped to the
/// boundary cells).
inline std::vector<Vec> particle_marginals(const ParticleEnsemble& ens, const GridSpec& grid) {
    std::vector<Vec> out(grid.dim, Vec::Zero(grid.points));
    const double dx = grid.dx();
    for (Index p = 0; p < ens.count(); ++p)
        for (Index k = 0; k < grid.dim; ++k) {
            const double pos = (ens.particles(p, k) + grid.half_width) / dx - 0.5;
            const Index cell = std::clamp<Index>(static_cast<Index>(std::floor(pos)), 0,
                                                 grid.points - 1);
            out[k](cell) += ens.weights(p);
        }
    for (Vec& m : out) {
        const double total = m.sum();
        if (total > 0.0) m /= total;
    }
    return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// table1: TT-rank of the implicit-step inverse across dimensions and grids
// ---------------------------------------------------------------------------

/// Invert I - delta/2 (Delta_G + Delta_rho) for G orthogonal and
/// rho(x) = diag(x) over a (dimension, points-per-direction) sweep at the
/// 5e-5 relative residual stopping rule, recording the inverse's max
/// TT-rank.
inline ResultRecord run_table1(const ExperimentSpec& spec) {
    spec.config.validate_schema(detail::experiment_schema(ExperimentKind::table1));
    const Config& c = spec.config;
    const std::vector<long long> dims = c.get_int_list("table1", "dims", {2, 4, 6, 8});
    const std::vector<long long> dofs = c.get_int_list("table1", "dofs", {10, 20, 40});
    const double half_width = c.get_double("table1", "half_width", 1.0);
    const double delta = c.get_double("table1", "delta", 0.01);
    const double eps = c.get_double("table1", "eps", 1e-8);

    ResultRecord record;
    record.kind = "table1";
    nlohmann::json ranks = nlohmann::json::array();

    struct Combo {
        Index d, dof;
    };
    std::vector<Combo> combos;
    for (long long d : dims)
        for (long long dof : dofs) combos.push_back({static_cast<Index>(d), static_cast<Index>(dof)});

    std::vector<ResultRow> rows(combos.size());
    std::vector<nlohmann::json> entries(combos.size());
    parallel_for(combos.size(), spec.effective_workers(), [&](std::size_t idx) {
        const auto [d, dof] = combos[idx];
        const GridSpec grid(half_width, dof, d);
        const SignalModel model = models::orthogonal_diffusion(d);
        AssemblyOptions opt;
        opt.eps = eps;
        opt.delta = delta;
        // Rounding tolerance calibrated so the recovered ranks track the
        // reference values across the whole (d, DOF) sweep; exposed in config.
        opt.newton_schulz.tol = c.get_double("table1", "ns_tol", 5e-5);
        opt.newton_schulz.eps_round = c.get_double("table1", "ns_round", 1e-7);
        opt.newton_schulz.rank_cap =
            static_cast<Index>(c.get_int("table1", "rank_cap", 96));
        opt.newton_schulz.max_iter = 80;

        ResultRow row;
        row.method = "newton_schulz";
        row.trial = static_cast<Index>(idx);
        row.seed = spec.seed;
        const auto start = std::chrono::steady_clock::now();
        try {
            const DiscretizedOperators ops = assemble_operators(model, grid, opt);
            row.wall_time_s = detail::elapsed_s(start);
            row.extra["d"] = static_cast<double>(d);
            row.extra["dof"] = static_cast<double>(dof);
            row.extra["rank"] = static_cast<double>(ops.m_left.max_rank());
            row.extra["residual"] = ops.ns_residual;
            row.extra["iterations"] = static_cast<double>(ops.ns_iterations);
            nlohmann::json e;
            e["d"] = d;
            e["dof"] = dof;
            e["rank"] = ops.m_left.max_rank();
            e["residual"] = ops.ns_residual;
            entries[idx] = e;
        } catch (const NumericalError& err) {
            row.failed = true;
            row.wall_time_s = detail::elapsed_s(start);
            row.extra["d"] = static_cast<double>(d);
            row.extra["dof"] = static_cast<double>(dof);
            nlohmann::json e;
            e["d"] = d;
            e["dof"] = dof;
            e["error"] = err.what();
            entries[idx] = e;
        }
        rows[idx] = std::move(row);
    });
    record.rows = std::move(rows);
    for (auto& e : entries) ranks.push_back(std::move(e));
    record.extras["ranks"] = ranks;
    record.sort_rows();
    if (!spec.out_dir.empty()) write_results(record, spec.out_dir);
    return record;
}

// ---------------------------------------------------------------------------
// Shared benchmark driver for the cubic-sensor and multi-mode experiments
// ---------------------------------------------------------------------------

namespace detail {

struct BenchmarkSetup {
    SignalModel model;
    GridSpec grid;
    AssemblyOptions assembly;
    FilterConfig filter;
    PathConfig path_template;
    std::vector<std::string> methods;
    std::vector<Index> pf_counts;
    std::string cache_dir;
};

inline BenchmarkSetup benchmark_setup(const ExperimentSpec& spec, const SignalModel& model,
                                      double default_L, Index default_N, double default_T) {
    const Config& c = spec.config;
    BenchmarkSetup s;
    s.model = model;
    const double L = c.get_double("grid", "half_width", default_L);
    const Index n = static_cast<Index>(c.get_int("grid", "points", default_N));
    s.grid = GridSpec(L, n, model.dim);

    const double eps_tt = c.get_double("filter", "eps_tt", 1e-3);
    s.assembly.eps = eps_tt;
    s.assembly.delta = c.get_double("filter", "dt", 0.01);
    s.assembly.newton_schulz.tol = c.get_double("offline", "ns_tol", 1e-8);
    s.assembly.newton_schulz.eps_round = c.get_double("offline", "ns_round", 1e-8);
    s.assembly.lij_round_eps = c.get_double("offline", "lij_round_eps", -1.0);
    s.cache_dir = c.get_string("offline", "cache_dir", "");

    s.filter.grid = s.grid;
    s.filter.eps_tt = eps_tt;
    s.filter.eps_round = c.get_double("filter", "eps_round", eps_tt);
    s.filter.delta = s.assembly.delta;
    s.filter.init_mean = Vec::Zero(model.dim);
    s.filter.init_std = c.get_double("filter", "init_std", 0.5);
    s.filter.rank_cap = static_cast<Index>(c.get_int("filter", "rank_cap", 0));
    const std::string mode = c.get_string("filter", "integral_mode", "product");
    if (mode == "product")
        s.filter.integral_mode = IntegralMode::product;
    else if (mode == "refined")
        s.filter.integral_mode = IntegralMode::refined;
    else
        throw ConfigError("filter.integral_mode must be 'product' or 'refined'");

    s.path_template.horizon = c.get_double("filter", "horizon", default_T);
    s.path_template.delta = s.assembly.delta;
    s.path_template.substeps = static_cast<Index>(c.get_int("path", "substeps", 64));
    s.path_template.x0 = Vec::Zero(model.dim);
    s.path_template.x0_std = c.get_double("path", "x0_std", s.filter.init_std);
    s.path_template.sim_bound = c.get_double("path", "sim_bound_frac", 0.95) * L;

    s.methods = split_csv_names(c.get_string("experiment", "methods", "tt,pf,ekf"));
    for (long long p : c.get_int_list("pf", "particles", {3000}))
        s.pf_counts.push_back(static_cast<Index>(p));
    return s;
}

inline std::string trial_file(const std::string& dir, const std::string& stem, std::uint64_t seed,
                              Index trial) {
    return dir + "/" + stem + "_seed" + std::to_string(seed) + "_trial" + std::to_string(trial) +
           ".csv";
}

inline void write_means_csv(const std::vector<Vec>& means, const Vec& times,
                            const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("write_means_csv: cannot open " + path);
    const Index d = means.front().size();
    os << "t";
    for (Index k = 1; k <= d; ++k) os << ",mean_" << k;
    os << ",mass,max_rank,neg_frac,step_ms\n";
    char buf[32];
    for (std::size_t n = 0; n < means.size(); ++n) {
        std::snprintf(buf, sizeof buf, "%.17g", times(static_cast<Index>(n)));
        os << buf;
        for (Index k = 0; k < d; ++k) {
            std::snprintf(buf, sizeof buf, "%.17g", means[n](k));
            os << "," << buf;
        }
        os << ",1,0,0,0\n";
    }
}

}  // namespace detail

/// Cubic-sensor benchmark: shared trajectories per trial, every configured
/// method run on the same data, RMSE and online wall time per trial.
inline ResultRecord run_cubic(const ExperimentSpec& spec) {
    spec.config.validate_schema(detail::experiment_schema(ExperimentKind::cubic));
    const Index d = static_cast<Index>(spec.config.get_int("model", "dimension", 5));
    SignalModel model = models::cubic_sensor(d);
    double default_T = 20.0;
    if (spec.paper_scale && d >= 9) default_T = 10.0;
    detail::BenchmarkSetup setup = detail::benchmark_setup(spec, model, 2.2, 8, default_T);
    if (spec.paper_scale && setup.pf_counts.size() == 1 && setup.pf_counts[0] == 3000) {
        if (d <= 5)
            setup.pf_counts = {2000, 3000, 4000};
        else if (d <= 7)
            setup.pf_counts = {5000, 7000, 9000, 11000};
        else
            setup.pf_counts = {5000, 7000, 9000};
    }

    const DiscretizedOperators ops =
        assemble_cached(setup.model, setup.grid, setup.assembly, setup.cache_dir);

    const Index trials = spec.paper_scale ? std::max<Index>(spec.trials, 100) : spec.trials;
    std::vector<std::vector<ResultRow>> trial_rows(trials);
    if (!spec.out_dir.empty()) std::filesystem::create_directories(spec.out_dir);

    parallel_for(static_cast<std::size_t>(trials), spec.effective_workers(), [&](std::size_t t) {
        const Index trial = static_cast<Index>(t);
        PathConfig pc = setup.path_template;
        pc.seed = CounterRng(spec.seed).split(1000 + trial).next_u64();
        const TrajectoryRecord traj = simulate_truth(setup.model, pc);
        if (!spec.out_dir.empty())
            write_trajectory_csv(traj, detail::trial_file(spec.out_dir, "truth", spec.seed, trial));

        auto& rows = trial_rows[t];
        for (const std::string& method : setup.methods) {
            if (method == "tt") {
                ResultRow row{"tt", trial, pc.seed, 0.0, 0.0, false, traj.escaped, {}};
                const auto start = std::chrono::steady_clock::now();
                try {
                    const FilterRun run = run_filter(setup.filter, ops, traj);
                    row.wall_time_s = detail::elapsed_s(start);
                    row.rmse = rmse(estimate_means(run), traj);
                    row.extra["max_rank"] = static_cast<double>(run.diagnostics.max_rank);
                    if (!spec.out_dir.empty())
                        write_filter_csv(run, traj,
                                         detail::trial_file(spec.out_dir, "tt", spec.seed, trial));
                } catch (const NumericalError&) {
                    row.failed = true;
                    row.wall_time_s = detail::elapsed_s(start);
                }
                rows.push_back(std::move(row));
            } else if (method == "pf") {
                for (Index count : setup.pf_counts) {
                    const std::string name = "pf" + std::to_string(count);
                    ResultRow row{name, trial, pc.seed, 0.0, 0.0, false, traj.escaped, {}};
                    const auto start = std::chrono::steady_clock::now();
                    PfConfig pf;
                    pf.particles = count;
                    const BaselineRun run =
                        run_pf(setup.model, pf, setup.filter.init_mean, setup.filter.init_std,
                               traj, CounterRng(pc.seed).split(0x9f + count));
                    row.wall_time_s = detail::elapsed_s(start);
                    row.failed = run.flagged;
                    if (!run.flagged) row.rmse = rmse(run.means, traj);
                    if (!spec.out_dir.empty())
                        detail::write_means_csv(run.means, traj.times,
                                                detail::trial_file(spec.out_dir, name, spec.seed,
                                                                   trial));
                    rows.push_back(std::move(row));
                }
            } else if (method == "ekf") {
                ResultRow row{"ekf", trial, pc.seed, 0.0, 0.0, false, traj.escaped, {}};
                const auto start = std::chrono::steady_clock::now();
                const EkfRun run =
                    run_ekf(setup.model, setup.filter.init_mean, setup.filter.init_std, traj);
                row.wall_time_s = detail::elapsed_s(start);
                row.failed = run.diverged;
                row.extra["divergence_step"] = static_cast<double>(run.divergence_step);
                if (!run.diverged) row.rmse = rmse(run.means, traj);
                if (!spec.out_dir.empty())
                    detail::write_means_csv(run.means, traj.times,
                                            detail::trial_file(spec.out_dir, "ekf", spec.seed,
                                                               trial));
                rows.push_back(std::move(row));
            } else {
                throw ConfigError("unknown method '" + method + "' (expected tt, pf, ekf)");
            }
        }
    });

    ResultRecord record;
    record.kind = "cubic";
    for (auto& rows : trial_rows)
        for (auto& row : rows) record.rows.push_back(std::move(row));
    record.sort_rows();
    record.extras["dimension"] = d;
    record.extras["grid_points"] = setup.grid.points;
    record.extras["horizon"] = setup.path_template.horizon;
    record.extras["dt"] = setup.assembly.delta;
    if (!spec.out_dir.empty()) write_results(record, spec.out_dir);
    return record;
}

/// Multi-mode benchmark: tracks RMSE like run_cubic and additionally exports
/// per-direction marginal snapshots, their reflection-asymmetry scores, and
/// a bimodality census.
inline ResultRecord run_multimode(const ExperimentSpec& spec) {
    spec.config.validate_schema(detail::experiment_schema(ExperimentKind::multimode));
    SignalModel model = models::multimode();
    detail::BenchmarkSetup setup = detail::benchmark_setup(spec, model, 4.5, 25, 20.0);
    const double snapshot_dt = spec.config.get_double("multimode", "snapshot_dt", 0.5);
    const double bimodal_after = spec.config.get_double("multimode", "bimodal_after", 2.0);
    const Index snap_every =
        std::max<Index>(1, static_cast<Index>(std::llround(snapshot_dt / setup.assembly.delta)));

    const DiscretizedOperators ops =
        assemble_cached(setup.model, setup.grid, setup.assembly, setup.cache_dir);

    const Index trials = spec.trials;
    std::vector<std::vector<ResultRow>> trial_rows(trials);
    std::vector<double> tt_max_asym(trials, 0.0);
    std::vector<double> tt_bimodal_frac(trials, 0.0);
    std::vector<double> pf_mean_asym(trials, 0.0);
    if (!spec.out_dir.empty()) std::filesystem::create_directories(spec.out_dir);

    parallel_for(static_cast<std::size_t>(trials), spec.effective_workers(), [&](std::size_t t) {
        const Index trial = static_cast<Index>(t);
        PathConfig pc = setup.path_template;
        pc.seed = CounterRng(spec.seed).split(2000 + trial).next_u64();
        const TrajectoryRecord traj = simulate_truth(setup.model, pc);
        if (!spec.out_dir.empty())
            write_trajectory_csv(traj, detail::trial_file(spec.out_dir, "truth", spec.seed, trial));
        auto& rows = trial_rows[t];
        const Index d = setup.model.dim;

        for (const std::string& method : setup.methods) {
            if (method == "tt") {
                ResultRow row{"tt", trial, pc.seed, 0.0, 0.0, false, traj.escaped, {}};
                const auto start = std::chrono::steady_clock::now();
                try {
                    const FilterRun run = run_filter(setup.filter, ops, traj);
                    row.wall_time_s = detail::elapsed_s(start);
                    row.rmse = rmse(estimate_means(run), traj);
                    row.extra["max_rank"] = static_cast<double>(run.diagnostics.max_rank);

                    double max_asym = 0.0;
                    Index bimodal_hits = 0, bimodal_total = 0;
                    for (std::size_t n = 0; n < run.estimates.size(); n += snap_every) {
                        const double time = traj.times(static_cast<Index>(n));
                        for (Index k = 0; k < d; ++k) {
                            const Vec& m = run.estimates[n].marginals[k];
                            max_asym = std::max(max_asym, detail::reflection_asymmetry(m));
                            if (time > bimodal_after) {
                                ++bimodal_total;
                                if (detail::local_maxima_count(m) >= 2) ++bimodal_hits;
                            }
                            if (!spec.out_dir.empty() && trial == 0) {
                                char name[96];
                                std::snprintf(name, sizeof name, "%s/marginal_dim%lld_t%07.3f.csv",
                                              spec.out_dir.c_str(),
                                              static_cast<long long>(k + 1), time);
                                std::ofstream ms(name);
                                ms << "x,density\n";
                                const Vec x = setup.grid.interior_points();
                                for (Index i = 0; i < setup.grid.points; ++i)
                                    ms << x(i) << "," << m(i) << "\n";
                            }
                        }
                    }
                    tt_max_asym[t] = max_asym;
                    tt_bimodal_frac[t] =
                        bimodal_total > 0 ? static_cast<double>(bimodal_hits) / bimodal_total : 0.0;
                    row.extra["max_asymmetry"] = max_asym;
                    row.extra["bimodal_fraction"] = tt_bimodal_frac[t];
                    if (!spec.out_dir.empty())
                        write_filter_csv(run, traj,
                                         detail::trial_file(spec.out_dir, "tt", spec.seed, trial));
                } catch (const NumericalError&) {
                    row.failed = true;
                    row.wall_time_s = detail::elapsed_s(start);
                }
                rows.push_back(std::move(row));
            } else if (method == "pf") {
                for (Index count : setup.pf_counts) {
                    const std::string name = "pf" + std::to_string(count);
                    ResultRow row{name, trial, pc.seed, 0.0, 0.0, false, traj.escaped, {}};
                    const auto start = std::chrono::steady_clock::now();
                    CounterRng rng = CounterRng(pc.seed).split(0x9f + count);
                    ParticleEnsemble ens = init_ensemble(setup.model, count,
                                                         setup.filter.init_mean,
                                                         setup.filter.init_std, rng);
                    std::vector<Vec> means{ens.mean()};
                    double asym_acc = 0.0;
                    Index asym_count = 0;
                    bool flagged = false;
                    for (Index n = 0; n < static_cast<Index>(traj.obs_increments.size()); ++n) {
                        try {
                            ens = pf_step(ens, setup.model, traj.obs_increments[n], traj.delta,
                                          rng);
                        } catch (const NumericalError&) {
                            flagged = true;
                            break;
                        }
                        means.push_back(ens.mean());
                        if ((n + 1) % snap_every == 0) {
                            for (const Vec& m : detail::particle_marginals(ens, setup.grid)) {
                                asym_acc += detail::reflection_asymmetry(m);
                                ++asym_count;
                            }
                        }
                    }
                    row.wall_time_s = detail::elapsed_s(start);
                    row.failed = flagged;
                    if (!flagged) {
                        while (means.size() < traj.states.size()) means.push_back(means.back());
                        row.rmse = rmse(means, traj);
                        row.extra["mean_asymmetry"] =
                            asym_count > 0 ? asym_acc / asym_count : 0.0;
                        pf_mean_asym[t] = row.extra["mean_asymmetry"];
                    }
                    rows.push_back(std::move(row));
                }
            } else if (method == "ekf") {
                ResultRow row{"ekf", trial, pc.seed, 0.0, 0.0, false, traj.escaped, {}};
                const auto start = std::chrono::steady_clock::now();
                const EkfRun run =
                    run_ekf(setup.model, setup.filter.init_mean, setup.filter.init_std, traj);
                row.wall_time_s = detail::elapsed_s(start);
                row.failed = run.diverged;
                if (!run.diverged) row.rmse = rmse(run.means, traj);
                rows.push_back(std::move(row));
            } else {
                throw ConfigError("unknown method '" + method + "' (expected tt, pf, ekf)");
            }
        }
    });

    ResultRecord record;
    record.kind = "multimode";
    for (auto& rows : trial_rows)
        for (auto& row : rows) record.rows.push_back(std::move(row));
    record.sort_rows();
    record.extras["snapshot_dt"] = snapshot_dt;
    record.extras["bimodal_after"] = bimodal_after;
    record.extras["tt_max_asymmetry"] =
        *std::max_element(tt_max_asym.begin(), tt_max_asym.end());
    record.extras["tt_min_bimodal_fraction"] =
        *std::min_element(tt_bimodal_frac.begin(), tt_bimodal_frac.end());
    record.extras["pf_mean_asymmetry"] =
        pf_mean_asym.empty()
            ? 0.0
            : std::accumulate(pf_mean_asym.begin(), pf_mean_asym.end(), 0.0) / pf_mean_asym.size();
    if (!spec.out_dir.empty()) write_results(record, spec.out_dir);
    return record;
}

}  // namespace ttfilter
