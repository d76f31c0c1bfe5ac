#include "isogk/bernstein.hpp"

#include "isogk/error.hpp"

#include <cmath>
#include <numbers>

namespace isogk::bernstein {

double binomial(int n, int r) {
    if (r < 0 || r > n) return 0.0;
    double out = 1.0;
    for (int i = 1; i <= r; ++i) out = out * (n - r + i) / i;
    return out;
}

double factorial(int n) {
    double out = 1.0;
    for (int i = 2; i <= n; ++i) out *= i;
    return out;
}

Eigen::VectorXd values(int p, double t) {
    Eigen::VectorXd b = Eigen::VectorXd::Zero(p + 1);
    b[0] = 1.0;
    const double s = 1.0 - t;
    for (int deg = 1; deg <= p; ++deg) {
        for (int i = deg; i >= 1; --i) b[i] = s * b[i] + t * b[i - 1];
        b[0] *= s;
    }
    return b;
}

Eigen::MatrixXd derivatives(int p, double t, int max_order) {
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(max_order + 1, p + 1);
    for (int a = 0; a <= std::min(max_order, p); ++a) {
        // d^a B^p_i = p!/(p-a)! * sum_l B^{p-a}_l * (forward difference weights).
        const Eigen::VectorXd low = values(p - a, t);
        const double scale = factorial(p) / factorial(p - a);
        for (int l = 0; l <= p - a; ++l) {
            for (int r = 0; r <= a; ++r) {
                const double sign = ((a - r) % 2 == 0) ? 1.0 : -1.0;
                out(a, l + r) += scale * low[l] * sign * binomial(a, r);
            }
        }
    }
    return out;
}

std::vector<double> chebyshev_sites(int count) {
    if (count < 1) throw ContractError("chebyshev_sites: count must be >= 1");
    std::vector<double> sites(static_cast<std::size_t>(count));
    for (int j = 0; j < count; ++j)
        sites[static_cast<std::size_t>(j)] =
            0.5 * (1.0 - std::cos((2.0 * j + 1.0) * std::numbers::pi / (2.0 * count)));
    return sites;
}

Eigen::MatrixXd interpolate(int p, const std::vector<double>& sites, const Eigen::MatrixXd& vals) {
    if (static_cast<int>(sites.size()) != p + 1 || vals.rows() != p + 1)
        throw ContractError("bernstein::interpolate: need exactly p+1 sites");
    Eigen::MatrixXd collocation(p + 1, p + 1);
    for (int j = 0; j <= p; ++j) collocation.row(j) = values(p, sites[static_cast<std::size_t>(j)]).transpose();
    Eigen::FullPivLU<Eigen::MatrixXd> lu(collocation);
    if (!lu.isInvertible()) throw NumericalError("bernstein::interpolate: repeated interpolation sites");
    return lu.solve(vals);
}

} // namespace isogk::bernstein
