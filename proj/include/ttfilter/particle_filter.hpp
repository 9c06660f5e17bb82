#pragma once

#include <vector>

#include "ttfilter/model.hpp"
#include "ttfilter/rng.hpp"
#include "ttfilter/sde.hpp"

namespace ttfilter {

struct ParticleEnsemble {
    Mat particles;  ///< M x d
    Vec weights;    ///< normalized, nonnegative
    double ess = 0.0;

    Index count() const { return particles.rows(); }

    Vec mean() const {
        Vec m = Vec::Zero(particles.cols());
        for (Index p = 0; p < particles.rows(); ++p) m += weights(p) * particles.row(p).transpose();
        return m;
    }
};

struct PfConfig {
    Index particles = 1000;
    double resample_fraction = 0.5;  ///< resample when ess < fraction * M
};

inline ParticleEnsemble init_ensemble(const SignalModel& model, Index count, const Vec& mean,
                                      double stddev, CounterRng& rng) {
    ParticleEnsemble ens;
    ens.particles = Mat(count, model.dim);
    for (Index p = 0; p < count; ++p)
        for (Index k = 0; k < model.dim; ++k) ens.particles(p, k) = mean(k) + stddev * rng.normal();
    ens.weights = Vec::Constant(count, 1.0 / static_cast<double>(count));
    ens.ess = static_cast<double>(count);
    return ens;
}

/// Systematic resampling: one uniform offset, M evenly spaced positions.
/// Preserves the weighted mean in expectation.
inline ParticleEnsemble systematic_resample(const ParticleEnsemble& ens, CounterRng& rng) {
    const Index m = ens.count();
    const double u0 = rng.uniform() / static_cast<double>(m);
    ParticleEnsemble out;
    out.particles = Mat(m, ens.particles.cols());
    out.weights = Vec::Constant(m, 1.0 / static_cast<double>(m));
    out.ess = static_cast<double>(m);
    double cum = ens.weights(0);
    Index src = 0;
    for (Index p = 0; p < m; ++p) {
        const double pos = u0 + static_cast<double>(p) / static_cast<double>(m);
        while (pos > cum && src + 1 < m) cum += ens.weights(++src);
        out.particles.row(p) = ens.particles.row(src);
    }
    return out;
}

/// One correlated-noise particle update. The observation increment is
/// substituted for the shared noise channel: the particle moves by
///   x' = x + f dt + G sqrt(dt) xi + rho(x) (dy - h(x) dt),
/// and the weight picks up the likelihood factor exp(h^T dy - |h|^2 dt / 2).
inline ParticleEnsemble pf_step(const ParticleEnsemble& ens, const SignalModel& model,
                                const Vec& dy, double delta, CounterRng& rng,
                                double resample_fraction = 0.5) {
    if (delta <= 0.0) throw std::invalid_argument("pf_step: delta must be positive");
    const Index m = ens.count();
    const Index d = model.dim;
    const double sq_dt = std::sqrt(delta);

    ParticleEnsemble out;
    out.particles = Mat(m, d);
    Vec logw(m);
    for (Index p = 0; p < m; ++p) {
        const Vec x = ens.particles.row(p).transpose();
        const Vec h = model.eval_h(x);
        Vec xi(d);
        for (Index k = 0; k < d; ++k) xi(k) = rng.normal();
        const Vec moved = x + model.eval_f(x) * delta + model.eval_G(x) * (sq_dt * xi) +
                          model.eval_rho(x) * (dy - h * delta);
        out.particles.row(p) = moved.transpose();
        logw(p) = std::log(ens.weights(p)) + h.dot(dy) - 0.5 * h.squaredNorm() * delta;
    }
    const double wmax = logw.maxCoeff();
    if (!std::isfinite(wmax)) throw NumericalError("pf_step: weight overflow");
    Vec w = (logw.array() - wmax).exp();
    const double total = w.sum();
    if (!(total > 0.0)) throw NumericalError("pf_step: all weights underflowed to zero");
    out.weights = w / total;
    out.ess = 1.0 / out.weights.squaredNorm();
    if (out.ess < resample_fraction * static_cast<double>(m))
        out = systematic_resample(out, rng);
    return out;
}

struct BaselineRun {
    std::vector<Vec> means;  ///< index 0 is the initial estimate
    bool flagged = false;
    std::string flag_reason;
};

inline BaselineRun run_pf(const SignalModel& model, const PfConfig& cfg, const Vec& init_mean,
                          double init_std, const TrajectoryRecord& traj, CounterRng rng) {
    BaselineRun run;
    ParticleEnsemble ens = init_ensemble(model, cfg.particles, init_mean, init_std, rng);
    run.means.push_back(ens.mean());
    for (const Vec& dy : traj.obs_increments) {
        try {
            ens = pf_step(ens, model, dy, traj.delta, rng, cfg.resample_fraction);
        } catch (const NumericalError& err) {
            run.flagged = true;
            run.flag_reason = err.what();
            while (run.means.size() < traj.states.size()) run.means.push_back(run.means.back());
            return run;
        }
        run.means.push_back(ens.mean());
    }
    return run;
}

}  // namespace ttfilter
