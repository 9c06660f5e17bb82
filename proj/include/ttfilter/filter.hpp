#pragma once

#include <algorithm>
#include <chrono>
#include <fstream>
#include <vector>

#include "ttfilter/operators.hpp"
#include "ttfilter/sde.hpp"

namespace ttfilter {

enum class IntegralMode { product, refined };

struct FilterConfig {
    GridSpec grid;
    double eps_tt = 1e-6;     ///< offline TT accuracy (informational here)
    double eps_round = 1e-6;  ///< per-step rounding tolerance
    double delta = 0.01;
    IntegralMode integral_mode = IntegralMode::product;

    Vec init_mean;               ///< Gaussian initial density, the default
    double init_std = 0.5;
    SeparableField init_density; ///< used instead when explicit_init is set
    bool explicit_init = false;

    Index rank_cap = 0;  ///< 0: six times the offline operator max rank

    Index effective_rank_cap(const DiscretizedOperators& ops) const {
        return rank_cap > 0 ? rank_cap : 6 * ops.max_operator_rank();
    }
};

/// Unnormalized conditional density on the grid plus the accumulated scale.
/// The density is kept at unit scaled-L2 norm; log_normalizer absorbs the
/// discarded factors so the true unnormalized density is recoverable.
struct FilterState {
    TtVector density;
    double log_normalizer = 0.0;
    Index step = 0;
};

struct Estimate {
    Vec mean;
    std::vector<Vec> marginals;  ///< per-direction probability mass per cell
    double mass = 0.0;
};

struct StepDiagnostics {
    Index max_rank = 0;
    double step_ms = 0.0;
    double log_normalizer = 0.0;
    double neg_frac = 0.0;  ///< sampled min(u)/max(u)
};

struct FilterDiagnostics {
    std::vector<StepDiagnostics> per_step;
    Index max_rank = 0;
    bool flagged = false;
    std::string flag_reason;
};

/// Sample a separable field on the grid as a TT train (rank <= #terms).
inline TtVector sample_field_tt(const SeparableField& g, const GridSpec& grid) {
    const Vec pts = grid.interior_points();
    TtVector sum;
    bool first = true;
    for (const SeparableTerm& term : g.terms()) {
        std::vector<Vec> factors(grid.dim);
        for (Index j = 0; j < grid.dim; ++j) factors[j] = term.axis_values(j, pts);
        TtVector t = tt_rank1_vector(factors);
        sum = first ? t : tt_add(sum, t);
        first = false;
    }
    if (first) {
        std::vector<Vec> factors(grid.dim, Vec::Zero(grid.points));
        return tt_rank1_vector(factors);
    }
    return sum;
}

/// Rank-1 train sampling the coordinate x_k.
inline TtVector coordinate_train(const GridSpec& grid, Index k) {
    std::vector<Vec> factors(grid.dim, Vec::Ones(grid.points));
    factors[k] = grid.interior_points();
    return tt_rank1_vector(factors);
}

inline FilterState init_filter(const FilterConfig& cfg, const DiscretizedOperators& ops) {
    const GridSpec& grid = ops.grid;
    TtVector u;
    if (cfg.explicit_init) {
        u = sample_field_tt(cfg.init_density, grid);
    } else {
        if (cfg.init_mean.size() != grid.dim)
            throw std::invalid_argument("init_filter: init_mean has wrong dimension");
        SeparableField g(grid.dim);
        std::vector<std::pair<Index, Univariate>> factors;
        for (Index k = 0; k < grid.dim; ++k)
            factors.emplace_back(k, Univariate::gaussian(cfg.init_mean(k), cfg.init_std));
        g.add_term(1.0, std::move(factors));
        u = sample_field_tt(g, grid);
    }
    const double scale = std::sqrt(grid.cell_volume()) * tt_norm_f(u);
    if (!(scale > 1e-300))
        throw NumericalError("init_filter: initial density is numerically zero on the grid");
    FilterState state;
    state.density = tt_scale(u, 1.0 / (tt_norm_f(u) * std::sqrt(grid.cell_volume())));
    state.log_normalizer = std::log(scale);
    state.step = 0;
    return state;
}

namespace detail {

/// Sampled negativity diagnostic: min/max of the density over axis lines
/// through the cell of peak marginal mass plus a pseudo-random probe set.
inline double sampled_neg_fraction(const TtVector& u, const GridSpec& grid,
                                   const std::vector<Vec>& marginals) {
    std::vector<Index> center(grid.dim, grid.points / 2);
    for (Index k = 0; k < grid.dim; ++k) {
        Index arg = 0;
        marginals[k].maxCoeff(&arg);
        center[k] = arg;
    }
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    std::vector<Index> idx = center;
    for (Index k = 0; k < grid.dim; ++k) {
        idx = center;
        for (Index i = 0; i < grid.points; ++i) {
            idx[k] = i;
            const double v = tt_entry(u, idx);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    CounterRng rng(0xfeedULL);
    for (int s = 0; s < 128; ++s) {
        for (Index k = 0; k < grid.dim; ++k)
            idx[k] = static_cast<Index>(rng.next_u64() % static_cast<std::uint64_t>(grid.points));
        const double v = tt_entry(u, idx);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return hi > 0.0 ? lo / hi : 0.0;
}

inline void renormalize(FilterState& state, const GridSpec& grid, Index rank_cap, Index step) {
    const double fn = tt_norm_f(state.density);
    const double scale = fn * std::sqrt(grid.cell_volume());
    if (!(scale > 1e-300)) {
        throw NumericalError("milstein_step: density norm collapsed at step " +
                             std::to_string(step));
    }
    // The unnormalized density is positive; on coarse grids the discrete
    // update can drive the iterate through a zero crossing and flip its
    // global sign, which the sign-blind norm scaling would then keep.
    // Renormalization therefore pins the positive-mass gauge.
    const double mass = tt_inner(state.density, tt_ones(grid.mode_sizes()));
    const double sign = mass < 0.0 ? -1.0 : 1.0;
    state.density = tt_scale(state.density, sign / (fn * std::sqrt(grid.cell_volume())));
    state.log_normalizer += std::log(scale);
    if (state.density.max_rank() > rank_cap)
        throw NumericalError("milstein_step: rank cap " + std::to_string(rank_cap) +
                             " exceeded at step " + std::to_string(step));
}

}  // namespace detail

/// One semi-implicit Milstein update:
///   y = (M_R + sum_j L_j dy_j + sum_ij L^(i,j) I_(i,j)) u,   u' = M_L y,
/// followed by rounding at eps_round and renormalization to unit scaled-L2
/// norm. `iterated` may come from either integral approximation.
inline FilterState milstein_step(const FilterState& state, const Vec& dy, const Mat& iterated,
                                 const DiscretizedOperators& ops, const FilterConfig& cfg) {
    const Index d = ops.grid.dim;
    if (dy.size() != d || iterated.rows() != d || iterated.cols() != d)
        throw std::invalid_argument("milstein_step: bad increment dimensions");
    const double theta = cfg.eps_round / 8.0;
    const TtVector& u = state.density;

    TtVector y = tt_round(tt_matvec(ops.m_right, u), theta);
    for (Index j = 0; j < d; ++j)
        if (dy(j) != 0.0)
            y = tt_round(tt_add(y, tt_scale(tt_matvec(ops.lk[j], u), dy(j))), theta);
    for (Index i = 0; i < d; ++i)
        for (Index j = 0; j < d; ++j)
            if (iterated(i, j) != 0.0)
                y = tt_round(tt_add(y, tt_scale(tt_matvec(ops.lij[i][j], u), iterated(i, j))),
                             theta);

    FilterState next;
    next.density = tt_round(tt_matvec(ops.m_left, y), cfg.eps_round);
    next.log_normalizer = state.log_normalizer;
    next.step = state.step + 1;
    detail::renormalize(next, ops.grid, cfg.effective_rank_cap(ops), next.step);
    return next;
}

/// Product-mode fast path. With the product approximation the second-order
/// sum collapses exactly:
///   sum_ij I_(i,j) L_i L_j = 1/2 B^2 - delta/2 sum_i L_i^2,  B = sum_j dy_j L_j,
/// so the step needs two applications of B instead of d^2 operator products.
inline FilterState milstein_step_product(const FilterState& state, const Vec& dy,
                                         const DiscretizedOperators& ops,
                                         const FilterConfig& cfg) {
    const Index d = ops.grid.dim;
    if (dy.size() != d) throw std::invalid_argument("milstein_step_product: bad increment");
    const double theta = cfg.eps_round / 8.0;
    const TtVector& u = state.density;

    TtMatrix b = tt_scale(ops.lk[0], dy(0));
    for (Index j = 1; j < d; ++j) b = tt_add(b, tt_scale(ops.lk[j], dy(j)));
    b = tt_round(b, theta);

    const TtVector t1 = tt_round(tt_matvec(b, u), theta);
    const TtVector t2 = tt_round(tt_matvec(b, t1), theta);
    const TtVector t3 = tt_round(tt_matvec(ops.sum_lii, u), theta);

    TtVector y = tt_round(tt_matvec(ops.m_right, u), theta);
    y = tt_round(tt_add(y, t1), theta);
    y = tt_round(tt_add(y, tt_scale(t2, 0.5)), theta);
    y = tt_round(tt_add(y, tt_scale(t3, -0.5 * ops.delta)), theta);

    FilterState next;
    next.density = tt_round(tt_matvec(ops.m_left, y), cfg.eps_round);
    next.log_normalizer = state.log_normalizer;
    next.step = state.step + 1;
    detail::renormalize(next, ops.grid, cfg.effective_rank_cap(ops), next.step);
    return next;
}

/// Posterior statistics: total mass, mean (clamped to the domain), and
/// per-direction marginals clipped at zero and normalized to unit sum.
inline Estimate extract_estimate(const FilterState& state, const GridSpec& grid) {
    const TtVector& u = state.density;
    const double vol = grid.cell_volume();
    const TtVector ones = tt_ones(grid.mode_sizes());
    const double mass = tt_inner(u, ones) * vol;
    if (!(mass > 0.0))
        throw NumericalError("extract_estimate: nonpositive density mass");

    Estimate est;
    est.mass = mass;
    est.mean = Vec(grid.dim);
    for (Index k = 0; k < grid.dim; ++k) {
        const double mk = tt_inner(u, coordinate_train(grid, k)) * vol / mass;
        est.mean(k) = std::clamp(mk, -grid.half_width, grid.half_width);
    }

    // Marginals: contract every other direction with the all-ones vector.
    std::vector<Mat> summed(grid.dim);  // S_j = sum_i G_j[i]
    for (Index j = 0; j < grid.dim; ++j) {
        Mat s = Mat::Zero(u.rank(j), u.rank(j + 1));
        for (Index i = 0; i < grid.points; ++i)
            s += detail::core_slice(u.core(j), grid.points, i);
        summed[j] = s;
    }
    for (Index k = 0; k < grid.dim; ++k) {
        Mat left = Mat::Ones(1, 1);
        for (Index j = 0; j < k; ++j) left = left * summed[j];
        Mat right = Mat::Ones(1, 1);
        for (Index j = grid.dim - 1; j > k; --j) right = summed[j] * right;
        Vec m(grid.points);
        for (Index i = 0; i < grid.points; ++i)
            m(i) = (left * detail::core_slice(u.core(k), grid.points, i) * right)(0, 0);
        m = m.cwiseMax(0.0);
        const double total = m.sum();
        if (!(total > 0.0))
            throw NumericalError("extract_estimate: marginal collapsed to zero");
        est.marginals.push_back(m / total);
    }
    return est;
}

struct FilterRun {
    std::vector<Estimate> estimates;  ///< index 0 is the initial estimate
    FilterDiagnostics diagnostics;
    double log_normalizer = 0.0;
};

/// Online stage over a full trajectory. Estimates carry the initial state
/// estimate at index 0 and one entry per coarse step after it.
inline FilterRun run_filter(const FilterConfig& cfg, const DiscretizedOperators& ops,
                            const TrajectoryRecord& trajectory) {
    if (std::abs(trajectory.delta - ops.delta) > 1e-12 * std::max(1.0, ops.delta))
        throw std::invalid_argument("run_filter: trajectory step does not match the operators");
    if (cfg.integral_mode == IntegralMode::refined && trajectory.iterated.empty() &&
        !trajectory.obs_increments.empty())
        throw std::invalid_argument("run_filter: refined integrals requested but not recorded");

    FilterRun run;
    FilterState state = init_filter(cfg, ops);
    run.estimates.push_back(extract_estimate(state, ops.grid));
    const Index nt = static_cast<Index>(trajectory.obs_increments.size());
    for (Index n = 0; n < nt; ++n) {
        const auto start = std::chrono::steady_clock::now();
        if (cfg.integral_mode == IntegralMode::product)
            state = milstein_step_product(state, trajectory.obs_increments[n], ops, cfg);
        else
            state = milstein_step(state, trajectory.obs_increments[n], trajectory.iterated[n],
                                  ops, cfg);
        const auto stop = std::chrono::steady_clock::now();
        Estimate est = extract_estimate(state, ops.grid);
        StepDiagnostics diag;
        diag.max_rank = state.density.max_rank();
        diag.step_ms = std::chrono::duration<double, std::milli>(stop - start).count();
        diag.log_normalizer = state.log_normalizer;
        diag.neg_frac = detail::sampled_neg_fraction(state.density, ops.grid, est.marginals);
        run.diagnostics.per_step.push_back(diag);
        run.diagnostics.max_rank = std::max(run.diagnostics.max_rank, diag.max_rank);
        run.estimates.push_back(std::move(est));
    }
    run.log_normalizer = state.log_normalizer;
    return run;
}

/// Final state after stepping without estimate extraction; used by the
/// convergence studies that compare densities rather than means.
inline FilterState run_filter_density(const FilterConfig& cfg, const DiscretizedOperators& ops,
                                      const TrajectoryRecord& trajectory) {
    FilterState state = init_filter(cfg, ops);
    const Index nt = static_cast<Index>(trajectory.obs_increments.size());
    for (Index n = 0; n < nt; ++n) {
        if (cfg.integral_mode == IntegralMode::product)
            state = milstein_step_product(state, trajectory.obs_increments[n], ops, cfg);
        else
            state = milstein_step(state, trajectory.obs_increments[n], trajectory.iterated[n],
                                  ops, cfg);
    }
    return state;
}

/// Root mean squared tracking error over a trajectory:
/// (1/sqrt(d N_T)) * sqrt(sum_{k=1..N_T} |x(t_k) - xhat(t_k)|^2).
inline double rmse(const std::vector<Vec>& estimate_means, const TrajectoryRecord& truth) {
    if (estimate_means.size() != truth.states.size())
        throw std::invalid_argument("rmse: estimate/truth length mismatch");
    const std::size_t nt = truth.states.size() - 1;
    if (nt == 0) return 0.0;
    const double d = static_cast<double>(truth.states[0].size());
    double acc = 0.0;
    for (std::size_t k = 1; k <= nt; ++k) acc += (truth.states[k] - estimate_means[k]).squaredNorm();
    return std::sqrt(acc / (d * static_cast<double>(nt)));
}

inline std::vector<Vec> estimate_means(const FilterRun& run) {
    std::vector<Vec> means;
    means.reserve(run.estimates.size());
    for (const Estimate& e : run.estimates) means.push_back(e.mean);
    return means;
}

/// Per-trial output: t, mean_1..mean_d, mass, max_rank, neg_frac, step_ms.
inline void write_filter_csv(const FilterRun& run, const TrajectoryRecord& traj,
                             const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("write_filter_csv: cannot open " + path);
    const Index d = run.estimates.front().mean.size();
    os << "t";
    for (Index k = 1; k <= d; ++k) os << ",mean_" << k;
    os << ",mass,max_rank,neg_frac,step_ms\n";
    char buf[32];
    for (std::size_t n = 0; n < run.estimates.size(); ++n) {
        std::snprintf(buf, sizeof buf, "%.17g", traj.times(static_cast<Index>(n)));
        os << buf;
        for (Index k = 0; k < d; ++k) {
            std::snprintf(buf, sizeof buf, "%.17g", run.estimates[n].mean(k));
            os << "," << buf;
        }
        std::snprintf(buf, sizeof buf, "%.17g", run.estimates[n].mass);
        os << "," << buf;
        if (n == 0) {
            os << ",0,0,0\n";
        } else {
            const StepDiagnostics& sd = run.diagnostics.per_step[n - 1];
            os << "," << sd.max_rank;
            std::snprintf(buf, sizeof buf, "%.6g", sd.neg_frac);
            os << "," << buf;
            std::snprintf(buf, sizeof buf, "%.6g", sd.step_ms);
            os << "," << buf << "\n";
        }
    }
}

}  // namespace ttfilter
