#pragma once

// Independent oracles for the space and the Galerkin module.
//
// rank: the first-order conditions written out by hand in patch coordinates,
//   f_a(0, v) = f_b(v, 0)
//   d_u f_a(0, v) + lambda d_v f_b(v, 0) = beta(v) d_u f_b(v, 0)
// with Bernstein values and derivatives from the explicit binomial formula.
//
// area: Green's theorem, half the boundary integral of x dy - y dx around
// each patch, with a hard-coded 5-point Gauss rule.

#include "isogk/gsmooth_space.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace oracle {

inline double choose(int n, int r) {
    if (r < 0 || r > n) return 0.0;
    double out = 1.0;
    for (int i = 1; i <= r; ++i) out = out * (n - r + i) / i;
    return out;
}

inline double bern(int p, int i, double t) {
    if (i < 0 || i > p) return 0.0;
    return choose(p, i) * std::pow(t, i) * std::pow(1.0 - t, p - i);
}

inline double bern_d(int p, int i, double t) { return p * (bern(p - 1, i - 1, t) - bern(p - 1, i, t)); }

/// Dimension of the G^1 space of a complex whose interior edges all run u0 -> v0.
inline int classical_g1_dimension(const isogk::PatchComplex& c) {
    const int p = c.degree_u;
    const int q = c.degree_v;
    const int nb = (p + 1) * (q + 1);
    const int samples = 2 * std::max(p, q) + 4;
    Eigen::MatrixXd rows = Eigen::MatrixXd::Zero(2 * samples * static_cast<int>(c.edges.size()), c.n * nb);
    int r = 0;
    for (const auto& e : c.edges) {
        if (e.edge_a != isogk::EdgeId::U0 || e.edge_b != isogk::EdgeId::V0)
            throw std::logic_error("oracle expects u0 -> v0 interfaces");
        const double lambda = e.rho.normal_scale;
        for (int sidx = 0; sidx < samples; ++sidx, r += 2) {
            const double v = (sidx + 0.5) / samples;
            double beta = 0.0;
            for (std::size_t m = 0; m < e.rho.shear_coeffs.size(); ++m) beta += e.rho.shear_coeffs[m] * std::pow(v, m);
            for (int i = 0; i <= p; ++i)
                for (int j = 0; j <= q; ++j) {
                    const int ca = e.patch_a * nb + i * (q + 1) + j;
                    const int cb = e.patch_b * nb + i * (q + 1) + j;
                    // Patch a at (0, v); patch b at (v, 0).
                    rows(r, ca) += bern(p, i, 0.0) * bern(q, j, v);
                    rows(r, cb) -= bern(p, i, v) * bern(q, j, 0.0);
                    rows(r + 1, ca) += bern_d(p, i, 0.0) * bern(q, j, v);
                    rows(r + 1, cb) += lambda * bern(p, i, v) * bern_d(q, j, 0.0);
                    rows(r + 1, cb) -= beta * bern_d(p, i, v) * bern(q, j, 0.0);
                }
        }
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(rows);
    lu.setThreshold(1e-10);
    return static_cast<int>(rows.cols() - lu.rank());
}

/// Signed area enclosed by the planar geometry, from boundary integrals only.
inline double green_area(const std::vector<isogk::TensorPatch>& geometry) {
    static const double nodes[5] = {0.04691007703066800, 0.23076534494715845, 0.5, 0.76923465505284155,
                                    0.95308992296933200};
    static const double weights[5] = {0.11846344252809454, 0.23931433524968324, 0.28444444444444444,
                                      0.23931433524968324, 0.11846344252809454};
    double area = 0.0;
    for (const auto& g : geometry) {
        const isogk::TensorPatch du = isogk::partial_derivative_patch(g, 1, 0);
        const isogk::TensorPatch dv = isogk::partial_derivative_patch(g, 0, 1);
        // Counterclockwise: v = 0, u = 1, v = 1 reversed, u = 0 reversed.
        for (int k = 0; k < 5; ++k) {
            const double t = nodes[k];
            auto term = [&](const Eigen::Vector2d& u, const isogk::TensorPatch& d, double sign) {
                const Eigen::VectorXd x = g.eval(u);
                const Eigen::VectorXd dx = d.eval(u);
                return sign * 0.5 * (x[0] * dx[1] - x[1] * dx[0]);
            };
            area += weights[k] * (term({t, 0.0}, du, 1.0) + term({1.0, t}, dv, 1.0) + term({t, 1.0}, du, -1.0) +
                                  term({0.0, t}, dv, -1.0));
        }
    }
    return area;
}

} // namespace oracle
