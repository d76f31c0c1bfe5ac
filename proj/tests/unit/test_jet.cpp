#include "isogk/error.hpp"
#include "isogk/jet.hpp"
#include "isogk/random.hpp"
#include "oracle/polynomial.hpp"

#include <doctest.h>

using namespace isogk;

TEST_CASE("multi-index order is graded, leading exponent descending") {
    const auto& t = MultiIndexTable::get(2, 2);
    const std::vector<MultiIndex> expected{{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}};
    REQUIRE(t.size() == expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i) {
        CHECK(t[i] == expected[i]);
        CHECK(t.position(expected[i]) == static_cast<int>(i));
    }
}

TEST_CASE("position inverts the table for three variables") {
    const auto& t = MultiIndexTable::get(3, 4);
    CHECK(t.size() == 35);
    for (std::size_t i = 0; i < t.size(); ++i) CHECK(t.position(t[i]) == static_cast<int>(i));
    CHECK(t.position({5, 0, 0}) == -1);
}

TEST_CASE("jet construction validates its input") {
    CHECK_THROWS_AS(MultiIndexTable::get(2, 5), UnsupportedOrderError);
    CHECK_THROWS_AS(Jet(1, Eigen::Vector2d(0, 0), Eigen::MatrixXd::Zero(1, 4)), ContractError);
    Eigen::MatrixXd bad = Eigen::MatrixXd::Zero(1, 3);
    bad(0, 1) = std::nan("");
    CHECK_THROWS_AS(Jet(1, Eigen::Vector2d(0, 0), bad), ContractError);
    CHECK_THROWS_AS(Jet::identity(0, Eigen::Vector2d(0, 0)).jacobian(), ContractError);
}

TEST_CASE("composition agrees with symbolic substitution") {
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const int k = trial % 5;
        const auto outer = oracle::random_map(rng, 1 + trial % 4);
        const auto inner = oracle::random_map(rng, 1 + (trial + 1) % 4);
        const double x0 = rng.uniform(-1, 1);
        const double y0 = rng.uniform(-1, 1);
        const Jet in = oracle::jet_at(inner, x0, y0, k);
        const Jet out = oracle::jet_at(outer, in.value()[0], in.value()[1], k);
        const Jet expected = oracle::jet_at(oracle::compose(outer, inner), x0, y0, k);
        CHECK(jet_distance(jet_compose(out, in), expected) < 1e-10);
    }
}

TEST_CASE("composition rejects mismatched base points and shapes") {
    const Jet a = Jet::identity(2, Eigen::Vector2d(0, 0));
    const Jet b = Jet::identity(2, Eigen::Vector2d(1, 0));
    CHECK_THROWS_AS(jet_compose(a, b), ContractError);
    CHECK_THROWS_AS(jet_compose(a, Jet::identity(1, Eigen::Vector2d(0, 0))), ContractError);
    CHECK_THROWS_AS(jet_distance(a, b), ContractError);
}

TEST_CASE("identity is neutral") {
    Rng rng(3);
    const auto map = oracle::random_map(rng, 3);
    const Jet j = oracle::jet_at(map, 0.2, -0.4, 3);
    CHECK(jet_distance(jet_compose(j, Jet::identity(3, j.base_point())), j) < 1e-15);
    CHECK(jet_distance(jet_compose(Jet::identity(3, j.value()), j), j) < 1e-15);
}

TEST_CASE("inversion round-trips on both sides") {
    Rng rng(5);
    int done = 0;
    while (done < 20) {
        const auto map = oracle::random_map(rng, 3);
        const Jet j = oracle::jet_at(map, rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5), 1 + done % 3);
        if (std::abs(j.jacobian().determinant()) < 0.2) continue;
        const Jet inv = jet_invert(j);
        CHECK(jet_distance(jet_compose(j, inv), Jet::identity(j.order(), j.value())) < 1e-9);
        CHECK(jet_distance(jet_compose(inv, j), Jet::identity(j.order(), j.base_point())) < 1e-9);
        ++done;
    }
}

TEST_CASE("order-4 inversion is accurate relative to the coefficient scale") {
    // Near-singular Jacobians blow fourth-order inverse coefficients up to 1e6 and more.
    Rng rng(5);
    for (int done = 0; done < 20;) {
        const auto map = oracle::random_map(rng, 3);
        const Jet j = oracle::jet_at(map, rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5), 4);
        if (std::abs(j.jacobian().determinant()) < 0.2) continue;
        const Jet inv = jet_invert(j);
        const double scale = std::max(1.0, inv.coefficients().cwiseAbs().maxCoeff());
        CHECK(jet_distance(jet_compose(j, inv), Jet::identity(4, j.value())) < 1e-12 * scale);
        CHECK(jet_distance(jet_compose(inv, j), Jet::identity(4, j.base_point())) < 1e-12 * scale);
        ++done;
    }
}

TEST_CASE("singular jets cannot be inverted") {
    Eigen::MatrixXd lin(2, 2);
    lin << 1, 2, 2, 4;
    const Jet j = Jet::affine(2, Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 1), lin);
    CHECK_THROWS_AS(jet_invert(j), SingularityError);
}

TEST_CASE("truncation keeps the low-order coefficients") {
    Rng rng(9);
    const Jet j = oracle::jet_at(oracle::random_map(rng, 4), 0.1, 0.3, 4);
    const Jet t = j.truncate(2);
    CHECK(t.order() == 2);
    CHECK(t.coefficients() == j.coefficients().leftCols(6));
    CHECK(t.coefficient(1, {1, 1}) == j.coefficient(1, {1, 1}));
}
