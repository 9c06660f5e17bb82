#pragma once

#include <vector>

#include "ttfilter/sde.hpp"

// Closed-form reference for the scalar linear-Gaussian model with correlated
// noise: dx = a x dt + g dv + r dw, dy = c x dt + dw. The conditional mean
// and variance obey
//   dm = a m dt + (P c + r)(dy - c m dt),
//   dP = (2 a P + g^2 + r^2 - (P c + r)^2) dt,
// integrated here on the fine observation increments.

namespace ttfilter::testing {

struct KalmanBucyPath {
    std::vector<double> means;      ///< at the coarse nodes, size N_T + 1
    std::vector<double> variances;
};

inline KalmanBucyPath kalman_bucy_1d(double a, double g, double r, double c, double m0, double p0,
                                     const TrajectoryRecord& rec) {
    if (rec.fine_obs_increments.empty())
        throw std::invalid_argument("kalman_bucy_1d: fine noise required");
    const double dt = rec.delta / static_cast<double>(rec.substeps);
    KalmanBucyPath out;
    double m = m0, p = p0;
    out.means.push_back(m);
    out.variances.push_back(p);
    const Index nt = static_cast<Index>(rec.obs_increments.size());
    for (Index n = 0; n < nt; ++n) {
        for (Index s = 0; s < rec.substeps; ++s) {
            const double dy = rec.fine_obs_increments[n * rec.substeps + s](0);
            const double gain = p * c + r;
            const double m_new = m + a * m * dt + gain * (dy - c * m * dt);
            const double p_new = p + (2.0 * a * p + g * g + r * r - gain * gain) * dt;
            m = m_new;
            p = std::max(p_new, 1e-12);
        }
        out.means.push_back(m);
        out.variances.push_back(p);
    }
    return out;
}

}  // namespace ttfilter::testing
