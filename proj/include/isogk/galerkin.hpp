#pragma once

#include "isogk/gsmooth_space.hpp"

#include <Eigen/Dense>

#include <functional>
#include <vector>

namespace isogk {

/// Gauss-Legendre rule with the given number of points, mapped to [0,1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

GaussRule gauss_legendre(int points);

/// Where a callback is evaluated: the patch, its parameter and the physical point.
struct QuadraturePoint {
    int patch = 0;
    Point2 param;
    Eigen::Vector2d x;
};

using ScalarCallback = std::function<double(const QuadraturePoint&)>;

/// Galerkin matrices of the space's basis functions pulled back to the
/// physical domain, all of size dim x dim.
struct DiscreteProblem {
    GSmoothSpace space;
    int quadrature_order = 0;
    Eigen::MatrixXd mass;
    Eigen::MatrixXd stiffness;
    /// Integral over the outer boundary of b_i b_j.
    Eigen::MatrixXd boundary_mass;
    /// Integral over the outer boundary of (d b_j / dn) b_i.
    Eigen::MatrixXd boundary_flux;
    /// Right-hand side of the most recent projection or solve.
    Eigen::VectorXd load;
    /// Basis functions with a nonzero trace on the boundary; these carry the
    /// weakly imposed Dirichlet data.
    std::vector<int> dirichlet_dofs;
};

inline constexpr double kPenaltyWeight = 1e6;

/// Gauss points per direction: 3 * max(p, q) + 1.
int default_quadrature_order(const PatchComplex& complex);

/// Throws FoldError when |det J phi| vanishes or changes sign at a node.
DiscreteProblem assemble(const GSmoothSpace& space, int quadrature_order);

/// Solves M c = (integral of target * b_i).
Eigen::VectorXd l2_project(DiscreteProblem& problem, const ScalarCallback& target);

/// -div grad u + reaction * u = rhs with u = boundary on the outer boundary,
/// imposed weakly: penalty weight kPenaltyWeight plus the symmetric
/// consistency terms, so members of the space are reproduced exactly.
Eigen::VectorXd solve_poisson(DiscreteProblem& problem, const ScalarCallback& rhs, const ScalarCallback& boundary,
                              double reaction = 0.0);

/// Value of the field with basis coordinates coeffs at a point.
double evaluate_field(const GSmoothSpace& space, const Eigen::VectorXd& coeffs, int patch, const Point2& param);

/// Callback returning the field with basis coordinates coeffs.
ScalarCallback field_callback(const GSmoothSpace& space, const Eigen::VectorXd& coeffs);

/// -Laplace(u) + reaction * u for the member u of the space, from its exact
/// physical 2-jets.
ScalarCallback manufactured_rhs(const GSmoothSpace& space, const Eigen::VectorXd& coeffs, double reaction);

/// L2 norm of (field - exact) over the physical domain.
double l2_error(const DiscreteProblem& problem, const Eigen::VectorXd& coeffs, const ScalarCallback& exact);

/// L2 distance from exact to its mean value.
double best_constant_l2_error(const DiscreteProblem& problem, const ScalarCallback& exact);

/// Area of the physical domain by quadrature of det J phi.
double domain_area(const DiscreteProblem& problem);

} // namespace isogk
