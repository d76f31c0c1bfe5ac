#include "isogk/error.hpp"
#include "isogk/gsmooth_space.hpp"
#include "isogk/random.hpp"
#include "oracle/classical_g1.hpp"

#include <doctest.h>

using namespace isogk;

TEST_CASE("complex construction and validation") {
    CHECK_THROWS_AS(build_complex(2), ContractError);
    CHECK_THROWS_AS(build_complex(5, 2, 3), ContractError);
    const PatchComplex c = build_complex(5);
    CHECK(c.edges.size() == 5);
    CHECK(c.boundary_edges.size() == 10);
    CHECK_NOTHROW(validate_complex(c));

    PatchComplex broken = c;
    broken.edges[2].patch_b = 4; // two edges now reach patch 4
    CHECK_THROWS_AS(validate_complex(broken), ContractError);

    PatchComplex self = c;
    self.edges[0].patch_b = 0;
    CHECK_THROWS_AS(validate_complex(self), ContractError);

    PatchComplex mislabeled = c;
    mislabeled.edges[1].rho.edge_to = EdgeId::V1;
    CHECK_THROWS_AS(validate_complex(mislabeled), ContractError);
}

TEST_CASE("dimension matches the independent rank oracle") {
    for (int n = 3; n <= 6; ++n)
        for (int deg : {3, 4}) {
            const PatchComplex c = build_complex(n, deg, deg);
            const GSmoothSpace s = build_gsmooth_space(c, 1);
            CHECK_MESSAGE(s.dimension() == oracle::classical_g1_dimension(c), "n=" << n << " degree=" << deg);
            CHECK(s.constraint_residual < 1e-10);
        }
}

TEST_CASE("basis is orthonormal, holds the constants and only G^k members") {
    Rng rng(1);
    for (int n = 3; n <= 6; ++n) {
        const GSmoothSpace s = build_gsmooth_space(build_complex(n), 1);
        const Eigen::MatrixXd gram = s.basis.transpose() * s.basis;
        CHECK((gram - Eigen::MatrixXd::Identity(s.dimension(), s.dimension())).cwiseAbs().maxCoeff() < 1e-12);

        const Eigen::VectorXd one = Eigen::VectorXd::Ones(s.complex.total_coeffs());
        CHECK((s.basis * (s.basis.transpose() * one) - one).norm() < 1e-10);

        for (int trial = 0; trial < 5; ++trial) {
            const auto patches = sample_field(s, rng.vector(s.dimension()));
            for (const auto& e : s.complex.edges) {
                const auto r = check_gk(patches[static_cast<std::size_t>(e.patch_a)],
                                        patches[static_cast<std::size_t>(e.patch_b)], e.rho, 1, 30, 1e-8);
                CHECK(r.pass);
            }
        }
    }
}

TEST_CASE("regular case has no shear and a larger G^2 space for more patches") {
    const GSmoothSpace s4 = build_gsmooth_space(build_complex(4), 2);
    CHECK(s4.complex.edges.front().rho.shear_degree() == 0);
    CHECK(s4.constraint_residual < 1e-10);
    CHECK(build_gsmooth_space(build_complex(6), 2).dimension() > build_gsmooth_space(build_complex(5), 2).dimension());
}

TEST_CASE("cyclic relabeling leaves the space dimension alone") {
    const PatchComplex c = build_complex(5);
    const PatchComplex r = relabel_cyclic(c, 2);
    CHECK_NOTHROW(validate_complex(r));
    CHECK(build_gsmooth_space(r, 1).dimension() == build_gsmooth_space(c, 1).dimension());
}

TEST_CASE("layout geometry is injective and G^1") {
    for (int n = 3; n <= 8; ++n) {
        const GSmoothSpace s = build_gsmooth_space(build_complex(n), 1);
        const PatchComplex g = make_geometry(s);
        REQUIRE(g.has_geometry());
        const auto audit = audit_injectivity(g.geometry);
        CHECK(audit.sign_consistent);
        CHECK_FALSE(audit.overlap);
        CHECK(audit.min_abs_det > 0.1);
        for (const auto& e : g.edges)
            CHECK(check_gk(g.geometry[static_cast<std::size_t>(e.patch_a)], g.geometry[static_cast<std::size_t>(e.patch_b)],
                           e.rho, 1, 30)
                      .pass);
        // The vertex sits at the origin.
        for (const auto& patch : g.geometry) CHECK(patch.eval({0, 0}).norm() < 1e-12);
    }
}

TEST_CASE("non-injective geometry is refused") {
    const GSmoothSpace s = build_gsmooth_space(build_complex(5), 1);
    const PatchComplex g = make_geometry(s);
    // Mirror x: every patch flips orientation, but consistently, so the
    // mirrored layout is still fine; collapsing y to zero folds everything.
    CHECK_THROWS_AS(set_geometry(s, {g.geometry_coeffs[0], 0.0 * g.geometry_coeffs[1]}), FoldError);
    CHECK_NOTHROW(set_geometry(s, {-g.geometry_coeffs[0], g.geometry_coeffs[1]}));
    // Two copies of one patch overlap.
    std::vector<TensorPatch> twice{g.geometry[0], g.geometry[0]};
    CHECK(audit_injectivity(twice).overlap);
    CHECK_THROWS_AS(set_geometry(s, {g.geometry_coeffs[0]}), ContractError);
}

TEST_CASE("G^2 at bicubic degree folds for three patches") {
    const GSmoothSpace s = build_gsmooth_space(build_complex(3), 2);
    CHECK_THROWS_AS(make_geometry(s), FoldError);
}

TEST_CASE("field sampling validates its coefficient count") {
    const GSmoothSpace s = build_gsmooth_space(build_complex(4), 1);
    CHECK_THROWS_AS(sample_field(s, Eigen::VectorXd::Zero(s.dimension() + 1)), ContractError);
    const auto ones = sample_field(s, constant_coeffs(s, 2.5));
    for (const auto& p : ones) CHECK(p.eval({0.3, 0.9})[0] == doctest::Approx(2.5).epsilon(1e-12));
}
