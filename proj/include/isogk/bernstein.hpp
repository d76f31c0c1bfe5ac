#pragma once

#include <Eigen/Dense>

#include <vector>

namespace isogk::bernstein {

/// Values B^p_i(t), i = 0..p, by the triangular (convex-combination) recurrence.
Eigen::VectorXd values(int p, double t);

/// Row a holds d^a/dt^a B^p_i(t) for a = 0..max_order (rows beyond p are zero).
Eigen::MatrixXd derivatives(int p, double t, int max_order);

/// Chebyshev points on [0,1], count >= 1, increasing.
std::vector<double> chebyshev_sites(int count);

/// Bernstein coefficients of the degree-p polynomial through (sites[j], values.row(j)).
/// values has one row per site and one column per output component.
Eigen::MatrixXd interpolate(int p, const std::vector<double>& sites, const Eigen::MatrixXd& values);

double binomial(int n, int r);
double factorial(int n);

} // namespace isogk::bernstein
