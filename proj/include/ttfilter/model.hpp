#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "ttfilter/separable.hpp"

namespace ttfilter {

/// Signal model with correlated noise:
///
///   dx = f(x) dt + G(x) dv + rho(x) dw,   dy = h(x) dt + dw,
///
/// where the same Brownian motion w drives both the state (through rho) and
/// the observation. All coefficient functions enter as separable fields;
/// divergence fields are supplied analytically by the model constructors so
/// no numerical differentiation pollutes the discretization order.
struct SignalModel {
    Index dim = 0;
    std::vector<SeparableField> f;    ///< drift components, d of them
    std::vector<SeparableField> h;    ///< observation drift components
    std::vector<std::vector<SeparableField>> G;    ///< d x d diffusion
    std::vector<std::vector<SeparableField>> rho;  ///< d x d correlation
    std::vector<SeparableField> gg_diag;  ///< (G G^T)_kk
    std::vector<SeparableField> rr_diag;  ///< (rho rho^T)_kk
    SeparableField div_f;                       ///< sum_k d f_k / d x_k
    std::vector<SeparableField> div_rho_col;    ///< sum_i d rho_ik / d x_i, per k
    bool diagonal_noise = true;  ///< G G^T and rho rho^T diagonal

    /// Off-diagonal entries of G G^T + rho rho^T and their double divergence,
    /// only needed by the mixed-derivative discretization path.
    std::vector<std::vector<SeparableField>> noise_cov_offdiag;
    SeparableField noise_cov_div2;

    Vec eval_f(const Vec& x) const { return eval_vector(f, x); }
    Vec eval_h(const Vec& x) const { return eval_vector(h, x); }
    Mat eval_G(const Vec& x) const { return eval_matrix(G, x); }
    Mat eval_rho(const Vec& x) const { return eval_matrix(rho, x); }

    void validate() const {
        if (dim < 1) throw std::invalid_argument("SignalModel: dim must be positive");
        auto check_vec = [&](const std::vector<SeparableField>& v, const char* name) {
            if (static_cast<Index>(v.size()) != dim)
                throw std::invalid_argument(std::string("SignalModel: bad size of ") + name);
        };
        check_vec(f, "f");
        check_vec(h, "h");
        check_vec(gg_diag, "gg_diag");
        check_vec(rr_diag, "rr_diag");
        check_vec(div_rho_col, "div_rho_col");
        if (static_cast<Index>(G.size()) != dim || static_cast<Index>(rho.size()) != dim)
            throw std::invalid_argument("SignalModel: G/rho must be d x d");
    }

    std::string describe() const {
        std::ostringstream os;
        os << "d=" << dim << ";diag=" << diagonal_noise << ";f=";
        for (const auto& c : f) c.describe(os);
        os << ";h=";
        for (const auto& c : h) c.describe(os);
        os << ";gg=";
        for (const auto& c : gg_diag) c.describe(os);
        os << ";rr=";
        for (const auto& c : rr_diag) c.describe(os);
        os << ";rho=";
        for (const auto& row : rho)
            for (const auto& c : row) c.describe(os);
        os << ";divf=";
        div_f.describe(os);
        os << ";divrho=";
        for (const auto& c : div_rho_col) c.describe(os);
        return os.str();
    }

    std::uint64_t hash() const { return detail::fnv1a(describe()); }

private:
    static Vec eval_vector(const std::vector<SeparableField>& v, const Vec& x) {
        Vec out(v.size());
        for (std::size_t k = 0; k < v.size(); ++k) out(k) = v[k](x);
        return out;
    }
    static Mat eval_matrix(const std::vector<std::vector<SeparableField>>& m, const Vec& x) {
        Mat out(m.size(), m.size());
        for (std::size_t i = 0; i < m.size(); ++i)
            for (std::size_t j = 0; j < m.size(); ++j) out(i, j) = m[i][j](x);
        return out;
    }
};

}  // namespace ttfilter
