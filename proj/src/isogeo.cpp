#include "isogk/isogeo.hpp"

#include "isogk/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

namespace isogk {

namespace {

constexpr int kSeedGrid = 20;

Point2 clamp_unit(const Point2& u) {
    return u.cwiseMax(0.0).cwiseMin(1.0);
}

Eigen::Vector2d eval2(const TensorPatch& phi, const Point2& u) {
    return phi.eval(u).head<2>();
}

double base_gap(const Jet& a, const Jet& b) {
    return (a.base_point() - b.base_point()).lpNorm<Eigen::Infinity>();
}

// Jet distance, or the base-point gap when the two jets are not even based at
// the same physical point (a G^0 break).
double physical_mismatch(const Jet& a, const Jet& b) {
    const double gap = base_gap(a, b);
    if (gap > kBasePointTolerance) return std::max(gap, (a.coefficients() - b.coefficients()).cwiseAbs().maxCoeff());
    return jet_distance(a, b);
}

double abs_det(const TensorPatch& phi, const Point2& u) {
    return std::abs(jet_extract(phi, u, 1).jacobian().topRows<2>().determinant());
}

void require_planar(const IsoGeoElement& e) {
    if (e.geometry().out_dim() != 2) throw ContractError("iso-geometric element needs a planar geometry");
}

} // namespace

IsoGeoElement::IsoGeoElement(TensorPatch geometry, TensorPatch field, int patch_index, bool same_space)
    : geometry_(std::move(geometry)), field_(std::move(field)), patch_index_(patch_index), same_space_(same_space) {
    if (geometry_.out_dim() != 2) throw ContractError("IsoGeoElement: geometry must map into the plane");
    if (field_.out_dim() != 1) throw ContractError("IsoGeoElement: field must be scalar");
    for (int a = 0; a < kSeedGrid; ++a)
        for (int b = 0; b < kSeedGrid; ++b) {
            const Point2 u(static_cast<double>(a) / (kSeedGrid - 1), static_cast<double>(b) / (kSeedGrid - 1));
            seed_params_.push_back(u);
            seed_points_.push_back(eval2(geometry_, u));
        }
}

Point2 IsoGeoElement::seed(const Eigen::Vector2d& x) const {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < seed_points_.size(); ++i) {
        const double d = (seed_points_[i] - x).squaredNorm();
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return seed_params_[best];
}

std::vector<IsoGeoElement> make_elements(const PatchComplex& complex, const std::vector<TensorPatch>& fields,
                                         bool same_space) {
    if (!complex.has_geometry()) throw ContractError("make_elements: complex carries no geometry");
    if (static_cast<int>(fields.size()) != complex.n) throw ContractError("make_elements: need one field per patch");
    std::vector<IsoGeoElement> out;
    for (int i = 0; i < complex.n; ++i)
        out.emplace_back(complex.geometry[static_cast<std::size_t>(i)], fields[static_cast<std::size_t>(i)], i,
                         same_space);
    return out;
}

std::vector<IsoGeoElement> make_elements(const GSmoothSpace& space, const Eigen::VectorXd& field_coeffs) {
    return make_elements(space.complex, sample_field(space, field_coeffs), true);
}

Point2 invert_map(const TensorPatch& phi, const Eigen::Vector2d& x, const Point2& guess) {
    if (phi.out_dim() != 2) throw ContractError("invert_map: geometry must map into the plane");
    Point2 u = clamp_unit(guess);
    double residual = std::numeric_limits<double>::infinity();
    for (int it = 0; it < kInversionMaxIterations; ++it) {
        const Jet j = jet_extract(phi, u, 1);
        const Eigen::Vector2d r = j.value().head<2>() - x;
        residual = r.norm();
        const Eigen::Matrix2d jac = j.jacobian().topRows<2>();
        const double det = jac.determinant();
        if (residual < kInversionTolerance) {
            // One polishing step; keep it only if it helps.
            if (std::abs(det) > 0.0) {
                const Point2 polished = clamp_unit(u - jac.inverse() * r);
                if ((eval2(phi, polished) - x).norm() <= residual) return polished;
            }
            return u;
        }
        if (!(std::abs(det) > 1e-14))
            throw SingularityError("invert_map: singular Jacobian at (" + std::to_string(u[0]) + ", " +
                                       std::to_string(u[1]) + ")",
                                   std::abs(det));
        u = clamp_unit(u - jac.inverse() * r);
    }
    throw InversionError("invert_map: no convergence in " + std::to_string(kInversionMaxIterations) +
                             " iterations, residual " + std::to_string(residual),
                         residual);
}

double eval_element(const IsoGeoElement& elem, const Eigen::Vector2d& x) {
    const Point2 u = invert_map(elem.geometry(), x, elem.seed(x));
    return elem.field().eval(u)[0];
}

Jet physical_jet(const TensorPatch& geometry, const TensorPatch& field, const Point2& u, int k) {
    if (geometry.out_dim() != 2) throw ContractError("physical_jet: geometry must map into the plane");
    return jet_compose(jet_extract(field, u, k), jet_invert(jet_extract(geometry, u, k)));
}

SmoothnessReport lemma_check(const IsoGeoElement& elem1, const IsoGeoElement& elem2, const Reparameterization& rho,
                             int k, int n_samples, double tol) {
    require_planar(elem1);
    require_planar(elem2);
    auto params = uniform_samples(n_samples);
    std::vector<double> mismatch;
    double min_det = std::numeric_limits<double>::infinity();
    for (double s : params) {
        const Point2 u1 = edge_point(rho.edge_from, s);
        const Point2 u2 = edge_point(rho.edge_to, s);
        min_det = std::min({min_det, abs_det(elem1.geometry(), u1), abs_det(elem2.geometry(), u2)});
        const Jet j1 = physical_jet(elem1.geometry(), elem1.field(), u1, k);
        const Jet j2 = physical_jet(elem2.geometry(), elem2.field(), u2, k);
        mismatch.push_back(physical_mismatch(j1, j2));
    }
    auto report = SmoothnessReport::from_samples(k, std::move(params), std::move(mismatch), tol);
    report.min_abs_det_jacobian = min_det;
    const bool geometry_gk = check_gk(elem1.geometry(), elem2.geometry(), rho, k, n_samples, tol).pass;
    const bool field_gk = check_gk(elem1.field(), elem2.field(), rho, k, n_samples, tol).pass;
    report.premise_holds = geometry_gk && field_gk;
    return report;
}

SmoothnessReport proof_chain_check(const IsoGeoElement& elem1, const IsoGeoElement& elem2,
                                   const Reparameterization& rho, int k, int n_samples, double tol) {
    require_planar(elem1);
    auto params = uniform_samples(n_samples);
    std::vector<double> mismatch;
    for (double s : params) {
        const Point2 u1 = edge_point(rho.edge_from, s);
        const Jet phi_inv = jet_invert(jet_extract(elem1.geometry(), u1, k));
        const Jet direct = jet_compose(jet_extract(elem1.field(), u1, k), phi_inv);
        const Jet rho_jet = rho.jet(u1, k);
        const Jet routed =
            jet_compose(jet_compose(jet_extract(elem2.field(), Point2(rho_jet.value()), k), rho_jet), phi_inv);
        mismatch.push_back(jet_distance(direct, routed));
    }
    return SmoothnessReport::from_samples(k, std::move(params), std::move(mismatch), tol);
}

namespace {

double eval_or_throw(const IsoGeoElement& elem, const Eigen::Vector2d& x) {
    try {
        return eval_element(elem, x);
    } catch (const NumericalError& e) {
        throw SamplingError(std::string("crosscheck_fd: point left patch ") + std::to_string(elem.patch_index()) +
                            ": " + e.what());
    }
}

// Largest |D_1 - D_2| over the two directions at one interface point.
double fd_mismatch(const IsoGeoElement& side1, const IsoGeoElement& side2, const Eigen::Vector2d& x, double f0,
                   const std::array<Eigen::Vector2d, 2>& dirs, double h) {
    double worst = 0.0;
    for (const auto& d : dirs) {
        const double d1 =
            (-3.0 * f0 + 4.0 * eval_or_throw(side1, x + h * d) - eval_or_throw(side1, x + 2.0 * h * d)) / (2.0 * h);
        const double d2 =
            (3.0 * f0 - 4.0 * eval_or_throw(side2, x - h * d) + eval_or_throw(side2, x - 2.0 * h * d)) / (2.0 * h);
        worst = std::max(worst, std::abs(d1 - d2));
    }
    return worst;
}

} // namespace

SmoothnessReport crosscheck_fd(const IsoGeoElement& elem1, const IsoGeoElement& elem2, const Reparameterization& rho,
                               int n_samples, double h) {
    require_planar(elem1);
    require_planar(elem2);
    if (!(h > 0.0)) throw ContractError("crosscheck_fd: step must be positive");
    if (n_samples < 1) throw ContractError("crosscheck_fd: need at least one sample");

    const EdgeChart chart = edge_chart(rho.edge_from);
    const bool first_is_lower = elem1.patch_index() <= elem2.patch_index();
    std::vector<double> params;
    std::vector<double> coarse;
    std::vector<double> fine;
    for (int i = 0; i < n_samples; ++i) {
        // Stay clear of the central vertex and the outer boundary.
        const double s = n_samples == 1 ? 0.5 : 0.1 + 0.8 * i / (n_samples - 1);
        const Point2 u1 = edge_point(rho.edge_from, s);
        const Point2 u2 = edge_point(rho.edge_to, s);
        const Eigen::Vector2d x = first_is_lower ? eval2(elem1.geometry(), u1) : eval2(elem2.geometry(), u2);
        const double f0 = first_is_lower ? elem1.field().eval(u1)[0] : elem2.field().eval(u2)[0];

        const Eigen::Matrix2d jac = jet_extract(elem1.geometry(), u1, 1).jacobian().topRows<2>();
        const Eigen::Vector2d tangent = (jac * chart.linear.col(1)).normalized();
        const Eigen::Vector2d inward = jac * chart.linear.col(0);
        Eigen::Vector2d normal(-tangent[1], tangent[0]);
        if (normal.dot(inward) < 0.0) normal = -normal;
        const std::array<Eigen::Vector2d, 2> dirs{normal, (normal + 0.5 * tangent).normalized()};

        params.push_back(s);
        coarse.push_back(fd_mismatch(elem1, elem2, x, f0, dirs, h));
        fine.push_back(fd_mismatch(elem1, elem2, x, f0, dirs, 0.5 * h));
    }
    const double max_coarse = *std::max_element(coarse.begin(), coarse.end());
    const double max_fine = *std::max_element(fine.begin(), fine.end());
    auto report = SmoothnessReport::from_samples(1, std::move(params), std::move(coarse), kFdExactFloor);
    report.step = h;
    report.halving_ratio = max_fine > 0.0 ? max_coarse / max_fine : std::numeric_limits<double>::infinity();
    report.pass = max_coarse < kFdExactFloor ||
                  (*report.halving_ratio >= kHalvingRatioLow && *report.halving_ratio <= kHalvingRatioHigh);
    return report;
}

} // namespace isogk
