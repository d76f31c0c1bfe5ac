#include "isogk/galerkin.hpp"

#include "isogk/bernstein.hpp"
#include "isogk/error.hpp"
#include "isogk/isogeo.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>

namespace isogk {

namespace {

constexpr double kFoldThreshold = 1e-12;

// Basis values and parametric gradients of one patch's Bernstein functions at u.
struct LocalBasis {
    Eigen::VectorXd value;
    Eigen::MatrixXd grad_param; // 2 x nb
};

LocalBasis local_basis(int p, int q, const Point2& u) {
    const Eigen::MatrixXd du = bernstein::derivatives(p, u[0], 1);
    const Eigen::MatrixXd dv = bernstein::derivatives(q, u[1], 1);
    LocalBasis b;
    const int nb = (p + 1) * (q + 1);
    b.value.resize(nb);
    b.grad_param.resize(2, nb);
    for (int i = 0; i <= p; ++i)
        for (int j = 0; j <= q; ++j) {
            const int c = i * (q + 1) + j;
            b.value[c] = du(0, i) * dv(0, j);
            b.grad_param(0, c) = du(1, i) * dv(0, j);
            b.grad_param(1, c) = du(0, i) * dv(1, j);
        }
    return b;
}

Eigen::Matrix2d geometry_jacobian(const TensorPatch& phi, const Point2& u) {
    return jet_extract(phi, u, 1).jacobian().topRows<2>();
}

Eigen::MatrixXd patch_block(const GSmoothSpace& space, int patch) {
    const int nb = space.complex.coeffs_per_patch();
    return space.basis.middleRows(patch * nb, nb);
}

// Visits every volume quadrature node: (patch, node, weight * |det J|, basis, J).
template <class F>
void for_each_volume_node(const DiscreteProblem& problem, F&& visit) {
    const auto& c = problem.space.complex;
    const GaussRule rule = gauss_legendre(problem.quadrature_order);
    for (int patch = 0; patch < c.n; ++patch) {
        const auto& phi = c.geometry[static_cast<std::size_t>(patch)];
        for (std::size_t a = 0; a < rule.nodes.size(); ++a)
            for (std::size_t b = 0; b < rule.nodes.size(); ++b) {
                const Point2 u(rule.nodes[a], rule.nodes[b]);
                const Eigen::Matrix2d jac = geometry_jacobian(phi, u);
                const double w = rule.weights[a] * rule.weights[b] * std::abs(jac.determinant());
                QuadraturePoint qp{patch, u, phi.eval(u).head<2>()};
                visit(qp, w, jac);
            }
    }
}

// Visits every outer-boundary node: (point, weight * ds, outward normal, J).
template <class F>
void for_each_boundary_node(const DiscreteProblem& problem, F&& visit) {
    const auto& c = problem.space.complex;
    const GaussRule rule = gauss_legendre(problem.quadrature_order);
    for (const auto& be : c.boundary_edges) {
        const auto& phi = c.geometry[static_cast<std::size_t>(be.patch)];
        const EdgeChart chart = edge_chart(be.edge);
        for (std::size_t a = 0; a < rule.nodes.size(); ++a) {
            const Point2 u = edge_point(be.edge, rule.nodes[a]);
            const Eigen::Matrix2d jac = geometry_jacobian(phi, u);
            const Eigen::Vector2d tangent = jac * chart.linear.col(1);
            const Eigen::Vector2d inward = jac * chart.linear.col(0);
            const double ds = tangent.norm();
            Eigen::Vector2d normal(tangent[1] / ds, -tangent[0] / ds);
            if (normal.dot(inward) > 0.0) normal = -normal;
            QuadraturePoint qp{be.patch, u, phi.eval(u).head<2>()};
            visit(qp, rule.weights[a] * ds, normal, jac);
        }
    }
}

Eigen::VectorXd solve_spd(const Eigen::MatrixXd& a, const Eigen::VectorXd& rhs, const char* what) {
    Eigen::LLT<Eigen::MatrixXd> llt(a);
    if (llt.info() != Eigen::Success) throw LinearAlgebraError(std::string(what) + ": system is not positive definite");
    Eigen::VectorXd x = llt.solve(rhs);
    if (!x.allFinite()) throw LinearAlgebraError(std::string(what) + ": solve produced non-finite values");
    return x;
}

} // namespace

GaussRule gauss_legendre(int points) {
    if (points < 1) throw ContractError("gauss_legendre: need at least one point");
    // Golub-Welsch: nodes are eigenvalues of the Jacobi matrix.
    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(points, points);
    for (int i = 1; i < points; ++i) {
        const double b = i / std::sqrt(4.0 * i * i - 1.0);
        jacobi(i, i - 1) = b;
        jacobi(i - 1, i) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jacobi);
    GaussRule rule;
    for (int i = 0; i < points; ++i) {
        rule.nodes.push_back(0.5 * (eig.eigenvalues()[i] + 1.0));
        const double v = eig.eigenvectors()(0, i);
        rule.weights.push_back(v * v); // 2 v^2 on [-1,1], halved for [0,1]
    }
    return rule;
}

int default_quadrature_order(const PatchComplex& complex) {
    // Stiffness and boundary integrands are rational in the parameters (J^-T, |phi'|),
    // so bidegree + 2 is not enough for 1e-10 stable entries on curved layouts.
    return 3 * std::max(complex.degree_u, complex.degree_v) + 1;
}

DiscreteProblem assemble(const GSmoothSpace& space, int quadrature_order) {
    const auto& c = space.complex;
    if (!c.has_geometry() || c.geometry.front().out_dim() != 2)
        throw ContractError("assemble: the space needs a planar geometry");
    if (quadrature_order < std::max(c.degree_u, c.degree_v) + 1)
        throw ContractError("assemble: quadrature order must be at least bidegree + 1");

    DiscreteProblem problem;
    problem.space = space;
    problem.quadrature_order = quadrature_order;
    const int nb = c.coeffs_per_patch();
    const int dim = space.dimension();
    problem.mass = Eigen::MatrixXd::Zero(dim, dim);
    problem.stiffness = Eigen::MatrixXd::Zero(dim, dim);
    problem.boundary_mass = Eigen::MatrixXd::Zero(dim, dim);
    problem.boundary_flux = Eigen::MatrixXd::Zero(dim, dim);

    // Local (Bernstein) matrices per patch, reduced to the space afterwards.
    std::vector<Eigen::MatrixXd> m_loc(static_cast<std::size_t>(c.n), Eigen::MatrixXd::Zero(nb, nb));
    std::vector<Eigen::MatrixXd> k_loc = m_loc;
    std::vector<Eigen::MatrixXd> p_loc = m_loc;
    std::vector<Eigen::MatrixXd> f_loc = m_loc;
    std::vector<int> orientation(static_cast<std::size_t>(c.n), 0);

    for_each_volume_node(problem, [&](const QuadraturePoint& qp, double w, const Eigen::Matrix2d& jac) {
        const double det = jac.determinant();
        const int sign = det > kFoldThreshold ? 1 : (det < -kFoldThreshold ? -1 : 0);
        int& orient = orientation[static_cast<std::size_t>(qp.patch)];
        if (sign == 0 || (orient != 0 && sign != orient))
            throw FoldError("assemble: nonpositive |det J phi| or orientation flip on patch " +
                            std::to_string(qp.patch));
        orient = sign;
        const LocalBasis b = local_basis(c.degree_u, c.degree_v, qp.param);
        const Eigen::MatrixXd grad = jac.transpose().inverse() * b.grad_param;
        m_loc[static_cast<std::size_t>(qp.patch)] += w * b.value * b.value.transpose();
        k_loc[static_cast<std::size_t>(qp.patch)] += w * grad.transpose() * grad;
    });

    for_each_boundary_node(problem, [&](const QuadraturePoint& qp, double w, const Eigen::Vector2d& normal,
                                        const Eigen::Matrix2d& jac) {
        const LocalBasis b = local_basis(c.degree_u, c.degree_v, qp.param);
        const Eigen::VectorXd dn = (jac.transpose().inverse() * b.grad_param).transpose() * normal;
        p_loc[static_cast<std::size_t>(qp.patch)] += w * b.value * b.value.transpose();
        f_loc[static_cast<std::size_t>(qp.patch)] += w * b.value * dn.transpose();
    });

    for (int patch = 0; patch < c.n; ++patch) {
        const Eigen::MatrixXd z = patch_block(space, patch);
        const auto i = static_cast<std::size_t>(patch);
        problem.mass += z.transpose() * m_loc[i] * z;
        problem.stiffness += z.transpose() * k_loc[i] * z;
        problem.boundary_mass += z.transpose() * p_loc[i] * z;
        problem.boundary_flux += z.transpose() * f_loc[i] * z;
    }
    // Quadrature sums are symmetric only up to rounding.
    problem.mass = 0.5 * (problem.mass + problem.mass.transpose()).eval();
    problem.stiffness = 0.5 * (problem.stiffness + problem.stiffness.transpose()).eval();
    problem.boundary_mass = 0.5 * (problem.boundary_mass + problem.boundary_mass.transpose()).eval();

    const double trace_scale = problem.boundary_mass.diagonal().cwiseAbs().maxCoeff();
    for (int i = 0; i < dim; ++i)
        if (problem.boundary_mass(i, i) > 1e-14 * trace_scale) problem.dirichlet_dofs.push_back(i);
    problem.load = Eigen::VectorXd::Zero(dim);
    return problem;
}

Eigen::VectorXd l2_project(DiscreteProblem& problem, const ScalarCallback& target) {
    const auto& c = problem.space.complex;
    Eigen::VectorXd full = Eigen::VectorXd::Zero(c.total_coeffs());
    const int nb = c.coeffs_per_patch();
    for_each_volume_node(problem, [&](const QuadraturePoint& qp, double w, const Eigen::Matrix2d&) {
        const LocalBasis b = local_basis(c.degree_u, c.degree_v, qp.param);
        full.segment(qp.patch * nb, nb) += w * target(qp) * b.value;
    });
    problem.load = problem.space.basis.transpose() * full;
    return solve_spd(problem.mass, problem.load, "l2_project");
}

Eigen::VectorXd solve_poisson(DiscreteProblem& problem, const ScalarCallback& rhs, const ScalarCallback& boundary,
                              double reaction) {
    const auto& c = problem.space.complex;
    const int nb = c.coeffs_per_patch();
    Eigen::VectorXd full = Eigen::VectorXd::Zero(c.total_coeffs());
    for_each_volume_node(problem, [&](const QuadraturePoint& qp, double w, const Eigen::Matrix2d&) {
        const LocalBasis b = local_basis(c.degree_u, c.degree_v, qp.param);
        full.segment(qp.patch * nb, nb) += w * rhs(qp) * b.value;
    });
    for_each_boundary_node(problem, [&](const QuadraturePoint& qp, double w, const Eigen::Vector2d& normal,
                                        const Eigen::Matrix2d& jac) {
        const LocalBasis b = local_basis(c.degree_u, c.degree_v, qp.param);
        const Eigen::VectorXd dn = (jac.transpose().inverse() * b.grad_param).transpose() * normal;
        const double g = boundary(qp);
        full.segment(qp.patch * nb, nb) += w * g * (kPenaltyWeight * b.value - dn);
    });
    problem.load = problem.space.basis.transpose() * full;
    const Eigen::MatrixXd system = problem.stiffness + reaction * problem.mass - problem.boundary_flux -
                                   problem.boundary_flux.transpose() + kPenaltyWeight * problem.boundary_mass;
    return solve_spd(system, problem.load, "solve_poisson");
}

double evaluate_field(const GSmoothSpace& space, const Eigen::VectorXd& coeffs, int patch, const Point2& param) {
    if (coeffs.size() != space.dimension()) throw ContractError("evaluate_field: coefficient count mismatch");
    const Eigen::VectorXd local = patch_block(space, patch) * coeffs;
    const LocalBasis b = local_basis(space.complex.degree_u, space.complex.degree_v, param);
    return b.value.dot(local);
}

ScalarCallback field_callback(const GSmoothSpace& space, const Eigen::VectorXd& coeffs) {
    auto patches = sample_field(space, coeffs);
    return [patches = std::move(patches)](const QuadraturePoint& qp) {
        return patches[static_cast<std::size_t>(qp.patch)].eval(qp.param)[0];
    };
}

ScalarCallback manufactured_rhs(const GSmoothSpace& space, const Eigen::VectorXd& coeffs, double reaction) {
    auto fields = sample_field(space, coeffs);
    auto geometry = space.complex.geometry;
    return [fields = std::move(fields), geometry = std::move(geometry), reaction](const QuadraturePoint& qp) {
        const auto i = static_cast<std::size_t>(qp.patch);
        const Jet j = physical_jet(geometry[i], fields[i], qp.param, 2);
        const double laplace = 2.0 * (j.coefficient(0, {2, 0}) + j.coefficient(0, {0, 2}));
        return -laplace + reaction * j.coefficient(0, {0, 0});
    };
}

double l2_error(const DiscreteProblem& problem, const Eigen::VectorXd& coeffs, const ScalarCallback& exact) {
    double sum = 0.0;
    for_each_volume_node(problem, [&](const QuadraturePoint& qp, double w, const Eigen::Matrix2d&) {
        const double e = evaluate_field(problem.space, coeffs, qp.patch, qp.param) - exact(qp);
        sum += w * e * e;
    });
    return std::sqrt(sum);
}

double best_constant_l2_error(const DiscreteProblem& problem, const ScalarCallback& exact) {
    double area = 0.0;
    double integral = 0.0;
    for_each_volume_node(problem, [&](const QuadraturePoint& qp, double w, const Eigen::Matrix2d&) {
        area += w;
        integral += w * exact(qp);
    });
    const double mean = integral / area;
    double sum = 0.0;
    for_each_volume_node(problem, [&](const QuadraturePoint& qp, double w, const Eigen::Matrix2d&) {
        const double e = exact(qp) - mean;
        sum += w * e * e;
    });
    return std::sqrt(sum);
}

double domain_area(const DiscreteProblem& problem) {
    double area = 0.0;
    for_each_volume_node(problem, [&](const QuadraturePoint&, double w, const Eigen::Matrix2d&) { area += w; });
    return area;
}

} // namespace isogk
