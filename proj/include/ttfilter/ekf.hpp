#pragma once

#include <Eigen/Eigenvalues>

#include "ttfilter/model.hpp"
#include "ttfilter/sde.hpp"

namespace ttfilter {

struct GaussianBelief {
    Vec mean;
    Mat cov;
};

namespace detail {

/// Central-difference Jacobian of a vector field.
template <typename F>
Mat numerical_jacobian(F&& fn, const Vec& x) {
    const Index d = x.size();
    Mat jac(d, d);
    for (Index k = 0; k < d; ++k) {
        const double h = 1e-5 * std::max(1.0, std::abs(x(k)));
        Vec xp = x, xm = x;
        xp(k) += h;
        xm(k) -= h;
        jac.col(k) = (fn(xp) - fn(xm)) / (2.0 * h);
    }
    return jac;
}

inline Mat symmetrize_floor(const Mat& p) {
    const Mat s = 0.5 * (p + p.transpose());
    Eigen::SelfAdjointEigenSolver<Mat> eig(s);
    Vec ev = eig.eigenvalues().cwiseMax(1e-12);
    return eig.eigenvectors() * ev.asDiagonal() * eig.eigenvectors().transpose();
}

}  // namespace detail

/// Extended Kalman step for the correlated-noise model. The predicted error
/// shares the increment dw with the measurement, which adds rho delta cross
/// terms to the gain and the innovation covariance:
///   innovation  nu = dy - h(m-) delta
///   S = H P- H^T delta^2 + I delta + (H rho + rho^T H^T) delta^2
///   K = (P- H^T delta + rho delta) S^{-1}.
/// Divergence (non-finite values, covariance blow-up, singular S) raises
/// NumericalError; callers flag and exclude the trial.
inline GaussianBelief ekf_step(const GaussianBelief& bel, const SignalModel& model, const Vec& dy,
                               double delta) {
    const Index d = model.dim;
    const Mat jf = detail::numerical_jacobian([&](const Vec& x) { return model.eval_f(x); },
                                              bel.mean);
    const Mat f = Mat::Identity(d, d) + jf * delta;
    const Vec m_pred = bel.mean + model.eval_f(bel.mean) * delta;
    const Mat g = model.eval_G(bel.mean);
    const Mat rho = model.eval_rho(bel.mean);
    Mat p_pred = f * bel.cov * f.transpose() + (g * g.transpose() + rho * rho.transpose()) * delta;
    p_pred = 0.5 * (p_pred + p_pred.transpose());

    const Mat jh = detail::numerical_jacobian([&](const Vec& x) { return model.eval_h(x); },
                                              m_pred);
    const Vec innovation = dy - model.eval_h(m_pred) * delta;
    const Mat cross = rho * delta;  // E[(x - m-) dw^T]
    const Mat s = jh * p_pred * jh.transpose() * delta * delta + Mat::Identity(d, d) * delta +
                  (jh * cross + cross.transpose() * jh.transpose()) * delta;
    Eigen::LLT<Mat> llt(0.5 * (s + s.transpose()));
    if (llt.info() != Eigen::Success)
        throw NumericalError("ekf_step: innovation covariance not invertible");
    const Mat gain = llt.solve((p_pred * jh.transpose() * delta + cross).transpose()).transpose();

    GaussianBelief out;
    out.mean = m_pred + gain * innovation;
    out.cov = detail::symmetrize_floor(p_pred - gain * s * gain.transpose());
    if (!out.mean.allFinite() || !out.cov.allFinite() || out.cov.trace() > 1e6)
        throw NumericalError("ekf_step: divergence detected");
    return out;
}

struct EkfRun {
    std::vector<Vec> means;
    bool diverged = false;
    Index divergence_step = -1;
};

inline EkfRun run_ekf(const SignalModel& model, const Vec& init_mean, double init_std,
                      const TrajectoryRecord& traj) {
    EkfRun run;
    GaussianBelief bel{init_mean, Mat::Identity(model.dim, model.dim) * init_std * init_std};
    run.means.push_back(bel.mean);
    Index n = 0;
    for (const Vec& dy : traj.obs_increments) {
        try {
            bel = ekf_step(bel, model, dy, traj.delta);
        } catch (const NumericalError&) {
            run.diverged = true;
            run.divergence_step = n;
            while (run.means.size() < traj.states.size()) run.means.push_back(run.means.back());
            return run;
        }
        run.means.push_back(bel.mean);
        ++n;
    }
    return run;
}

}  // namespace ttfilter
