#include "isogk/error.hpp"
#include "isogk/galerkin.hpp"
#include "isogk/isogeo.hpp"
#include "isogk/random.hpp"
#include "oracle/classical_g1.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>

using namespace isogk;

namespace {

GSmoothSpace cap(int n, int degree = 3) {
    const GSmoothSpace bare = build_gsmooth_space(build_complex(n, degree, degree), 1);
    return with_geometry(bare, make_geometry(bare));
}

const ScalarCallback smooth = [](const QuadraturePoint& q) { return std::sin(2.0 * q.x[0]) * std::exp(q.x[1]); };
// -Laplace of smooth: (4 - 1) * smooth.
const ScalarCallback smooth_rhs = [](const QuadraturePoint& q) { return 3.0 * smooth(q); };

} // namespace

TEST_CASE("Gauss-Legendre rules integrate polynomials exactly") {
    for (int g = 1; g <= 12; ++g) {
        const GaussRule rule = gauss_legendre(g);
        double wsum = 0.0;
        for (double w : rule.weights) wsum += w;
        CHECK(wsum == doctest::Approx(1.0).epsilon(1e-14));
        for (int deg = 0; deg <= 2 * g - 1; ++deg) {
            double s = 0.0;
            for (int i = 0; i < g; ++i) s += rule.weights[static_cast<std::size_t>(i)] * std::pow(rule.nodes[static_cast<std::size_t>(i)], deg);
            CHECK(s == doctest::Approx(1.0 / (deg + 1)).epsilon(1e-13));
        }
    }
    CHECK_THROWS_AS(gauss_legendre(0), ContractError);
}

TEST_CASE("assembled matrices satisfy their invariants") {
    for (int n : {3, 5, 6}) {
        const GSmoothSpace s = cap(n);
        const DiscreteProblem p = assemble(s, default_quadrature_order(s.complex));
        const Eigen::VectorXd c = constant_coeffs(s);
        const double area = oracle::green_area(s.complex.geometry);
        CHECK(domain_area(p) == doctest::Approx(area).epsilon(1e-12));
        CHECK(std::abs(c.dot(p.mass * c) - area) < 1e-9);
        CHECK((p.stiffness * c).cwiseAbs().maxCoeff() < 1e-9);
        CHECK((p.mass - p.mass.transpose()).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((p.stiffness - p.stiffness.transpose()).cwiseAbs().maxCoeff() < 1e-12);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> m(p.mass);
        CHECK(m.eigenvalues().minCoeff() > 0.0);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> k(p.stiffness);
        CHECK(k.eigenvalues().minCoeff() > -1e-10);
        CHECK_FALSE(p.dirichlet_dofs.empty());
    }
}

TEST_CASE("raising the quadrature order by two barely moves the matrices") {
    const GSmoothSpace s = cap(5);
    const int g = default_quadrature_order(s.complex);
    const DiscreteProblem a = assemble(s, g);
    const DiscreteProblem b = assemble(s, g + 2);
    CHECK((a.mass - b.mass).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((a.stiffness - b.stiffness).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((a.boundary_mass - b.boundary_mass).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("assembly preconditions") {
    const GSmoothSpace s = cap(5);
    CHECK_THROWS_AS(assemble(s, 3), ContractError);
    CHECK_THROWS_AS(assemble(build_gsmooth_space(build_complex(5), 1), 6), ContractError);
    GSmoothSpace folded = s;
    folded.complex.geometry[1] = TensorPatch::zero(3, 3, 2);
    CHECK_THROWS_AS(assemble(folded, 6), FoldError);
}

TEST_CASE("projection reproduces members of the space") {
    Rng rng(1);
    const GSmoothSpace s = cap(5);
    DiscreteProblem p = assemble(s, default_quadrature_order(s.complex));
    const Eigen::VectorXd u = rng.vector(s.dimension());
    CHECK((l2_project(p, field_callback(s, u)) - u).cwiseAbs().maxCoeff() < 1e-9);
    const ScalarCallback zero = [](const QuadraturePoint&) { return 0.0; };
    CHECK(l2_project(p, zero).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("degree elevation improves the projection of a smooth function") {
    const GSmoothSpace s3 = cap(5, 3);
    const GSmoothSpace s4 = cap(5, 4);
    DiscreteProblem p3 = assemble(s3, default_quadrature_order(s3.complex));
    DiscreteProblem p4 = assemble(s4, default_quadrature_order(s4.complex));
    const double e3 = l2_error(p3, l2_project(p3, smooth), smooth);
    const double e4 = l2_error(p4, l2_project(p4, smooth), smooth);
    CHECK(e3 > 2.0 * e4);
}

TEST_CASE("manufactured reaction solve recovers the coefficients") {
    Rng rng(2);
    const GSmoothSpace s = cap(5);
    DiscreteProblem p = assemble(s, default_quadrature_order(s.complex));
    const Eigen::VectorXd u = rng.vector(s.dimension());
    const Eigen::VectorXd sol = solve_poisson(p, manufactured_rhs(s, u, 1.0), field_callback(s, u), 1.0);
    CHECK((sol - u).cwiseAbs().maxCoeff() < 1e-6);

    const auto elems = make_elements(s, sol);
    for (const auto& e : s.complex.edges)
        CHECK(lemma_check(elems[static_cast<std::size_t>(e.patch_a)], elems[static_cast<std::size_t>(e.patch_b)], e.rho,
                          1, 25, 1e-7)
                  .pass);
}

TEST_CASE("zero data gives the zero solution") {
    const GSmoothSpace s = cap(5);
    DiscreteProblem p = assemble(s, default_quadrature_order(s.complex));
    const ScalarCallback zero = [](const QuadraturePoint&) { return 0.0; };
    CHECK(solve_poisson(p, zero, zero).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("Poisson solve beats the best constant by a wide margin") {
    const GSmoothSpace s = cap(5);
    DiscreteProblem p = assemble(s, default_quadrature_order(s.complex));
    const Eigen::VectorXd sol = solve_poisson(p, smooth_rhs, smooth);
    CHECK(10.0 * l2_error(p, sol, smooth) < best_constant_l2_error(p, smooth));
}
