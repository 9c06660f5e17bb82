#pragma once

#include <cstdio>
#include <fstream>
#include <limits>
#include <vector>

#include "ttfilter/model.hpp"
#include "ttfilter/rng.hpp"

namespace ttfilter {

struct PathConfig {
    double horizon = 1.0;   ///< T
    double delta = 0.01;    ///< coarse observation step
    Index substeps = 64;    ///< fine Euler-Maruyama steps per coarse step
    std::uint64_t seed = 0;
    Vec x0;                 ///< initial state (mean when x0_std > 0)
    double x0_std = 0.0;    ///< > 0 samples x0 from an isotropic Gaussian
    double sim_bound = std::numeric_limits<double>::infinity();  ///< escape threshold
    double obs_bound = 0.0;  ///< C_h; when > 0 enforces delta < 1/C_h^2
    bool keep_fine_noise = false;

    Index coarse_steps() const {
        const double ratio = horizon / delta;
        const Index n = static_cast<Index>(std::llround(ratio));
        if (n < 1 || std::abs(ratio - static_cast<double>(n)) > 1e-9 * std::max(1.0, ratio))
            throw std::invalid_argument("PathConfig: horizon must be an integer multiple of delta");
        return n;
    }

    void validate(Index dim) const {
        coarse_steps();
        if (substeps < 1) throw std::invalid_argument("PathConfig: substeps must be >= 1");
        if (x0.size() != dim) throw std::invalid_argument("PathConfig: x0 has wrong dimension");
        if (obs_bound > 0.0 && delta >= 1.0 / (obs_bound * obs_bound))
            throw std::invalid_argument("PathConfig: stability requires delta < 1/C_h^2");
    }
};

/// One realization of the signal/observation pair on the coarse grid, plus
/// the refined iterated integrals the Milstein stepper consumes.
struct TrajectoryRecord {
    Vec times;                        ///< tau_0 .. tau_{N_T}
    std::vector<Vec> states;          ///< x(tau_n), N_T + 1 entries
    std::vector<Vec> obs_increments;  ///< delta-y over (tau_n, tau_{n+1}], N_T entries
    std::vector<Mat> iterated;        ///< refined I_(i,j) per coarse step
    std::vector<Vec> fine_obs_increments;  ///< optional, substeps per coarse step
    Index substeps = 0;
    double delta = 0.0;
    bool escaped = false;
    Index escape_step = -1;
};

/// Riemann-Ito refinement of the iterated integrals over one block of fine
/// observation increments: I_(i,j) ~= sum_m (y^i_{t_m} - y^i_{tau}) dy^j_m.
inline Mat iterated_integrals_refined(const std::vector<Vec>& fine_dy, Index first, Index count) {
    if (count < 1) throw std::invalid_argument("iterated_integrals_refined: empty block");
    const Index d = fine_dy[first].size();
    Mat out = Mat::Zero(d, d);
    Vec prefix = Vec::Zero(d);
    for (Index m = 0; m < count; ++m) {
        const Vec& dy = fine_dy[first + m];
        out += prefix * dy.transpose();
        prefix += dy;
    }
    return out;
}

inline Mat iterated_integrals_refined(const std::vector<Vec>& fine_dy) {
    return iterated_integrals_refined(fine_dy, 0, static_cast<Index>(fine_dy.size()));
}

/// Product approximation: I_(i,j) = dy_i dy_j / 2 off the diagonal and
/// ((dy_i)^2 - delta)/2 on it.
inline Mat iterated_integrals_product(const Vec& dy, double delta) {
    if (delta <= 0.0) throw std::invalid_argument("iterated_integrals_product: delta must be > 0");
    Mat out = 0.5 * (dy * dy.transpose());
    out.diagonal().array() -= 0.5 * delta;
    return out;
}

/// Euler-Maruyama ground truth on the fine grid. The same Brownian increment
/// dw drives the state through rho and the observation; that is the noise
/// correlation. Coarse records are exact left-to-right sums of fine ones.
inline TrajectoryRecord simulate_truth(const SignalModel& model, const PathConfig& cfg) {
    cfg.validate(model.dim);
    const Index d = model.dim;
    const Index nt = cfg.coarse_steps();
    const double dt = cfg.delta / static_cast<double>(cfg.substeps);
    const double sq_dt = std::sqrt(dt);

    CounterRng root(cfg.seed);
    CounterRng init_stream = root.split(0);
    CounterRng v_stream = root.split(1);
    CounterRng w_stream = root.split(2);

    Vec x = cfg.x0;
    if (cfg.x0_std > 0.0)
        for (Index k = 0; k < d; ++k) x(k) += cfg.x0_std * init_stream.normal();

    TrajectoryRecord rec;
    rec.delta = cfg.delta;
    rec.substeps = cfg.substeps;
    rec.times = Vec::LinSpaced(nt + 1, 0.0, cfg.horizon);
    rec.states.reserve(nt + 1);
    rec.states.push_back(x);

    std::vector<Vec> block(cfg.substeps, Vec::Zero(d));
    for (Index n = 0; n < nt; ++n) {
        Vec coarse_dy = Vec::Zero(d);
        for (Index m = 0; m < cfg.substeps; ++m) {
            Vec dv(d), dw(d);
            for (Index k = 0; k < d; ++k) dv(k) = sq_dt * v_stream.normal();
            for (Index k = 0; k < d; ++k) dw(k) = sq_dt * w_stream.normal();
            const Vec dy = model.eval_h(x) * dt + dw;
            x = Vec(x + model.eval_f(x) * dt + model.eval_G(x) * dv + model.eval_rho(x) * dw);
            block[m] = dy;
            coarse_dy += dy;
            if (!rec.escaped && x.cwiseAbs().maxCoeff() > cfg.sim_bound) {
                rec.escaped = true;
                rec.escape_step = n;
            }
        }
        rec.states.push_back(x);
        rec.obs_increments.push_back(coarse_dy);
        rec.iterated.push_back(iterated_integrals_refined(block));
        if (cfg.keep_fine_noise)
            for (const Vec& dy : block) rec.fine_obs_increments.push_back(dy);
    }
    return rec;
}

/// Merge `factor` coarse steps into one, recomputing increments and refined
/// integrals from the retained fine noise. Used by the step-size sweeps so
/// every resolution consumes the same underlying path.
inline TrajectoryRecord coarsen_trajectory(const TrajectoryRecord& rec, Index factor) {
    const Index nt = static_cast<Index>(rec.obs_increments.size());
    if (factor < 1 || nt % factor != 0)
        throw std::invalid_argument("coarsen_trajectory: factor must divide the step count");
    if (rec.fine_obs_increments.empty())
        throw std::invalid_argument("coarsen_trajectory: fine noise was not retained");
    TrajectoryRecord out;
    out.delta = rec.delta * static_cast<double>(factor);
    out.substeps = rec.substeps * factor;
    const Index nt_out = nt / factor;
    out.times = Vec(nt_out + 1);
    for (Index n = 0; n <= nt_out; ++n) out.times(n) = rec.times(n * factor);
    for (Index n = 0; n <= nt_out; ++n) out.states.push_back(rec.states[n * factor]);
    const Index fine_per_out = rec.substeps * factor;
    for (Index n = 0; n < nt_out; ++n) {
        Vec dy = Vec::Zero(rec.states[0].size());
        for (Index j = 0; j < factor; ++j) dy += rec.obs_increments[n * factor + j];
        out.obs_increments.push_back(dy);
        out.iterated.push_back(
            iterated_integrals_refined(rec.fine_obs_increments, n * fine_per_out, fine_per_out));
    }
    out.fine_obs_increments = rec.fine_obs_increments;
    out.escaped = rec.escaped;
    out.escape_step = rec.escaped ? rec.escape_step / factor : -1;
    return out;
}

/// Trajectory dump: t, x_1..x_d, dy_1..dy_d. Row n carries the observation
/// increment over the step ending at t_n (zeros on the first row).
inline void write_trajectory_csv(const TrajectoryRecord& rec, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("write_trajectory_csv: cannot open " + path);
    const Index d = rec.states[0].size();
    os << "t";
    for (Index k = 1; k <= d; ++k) os << ",x_" << k;
    for (Index k = 1; k <= d; ++k) os << ",dy_" << k;
    os << "\n";
    char buf[32];
    for (std::size_t n = 0; n < rec.states.size(); ++n) {
        std::snprintf(buf, sizeof buf, "%.17g", rec.times(static_cast<Index>(n)));
        os << buf;
        for (Index k = 0; k < d; ++k) {
            std::snprintf(buf, sizeof buf, "%.17g", rec.states[n](k));
            os << "," << buf;
        }
        for (Index k = 0; k < d; ++k) {
            const double v = (n == 0) ? 0.0 : rec.obs_increments[n - 1](k);
            std::snprintf(buf, sizeof buf, "%.17g", v);
            os << "," << buf;
        }
        os << "\n";
    }
}

}  // namespace ttfilter
