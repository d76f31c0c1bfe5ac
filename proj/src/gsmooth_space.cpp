#include "isogk/gsmooth_space.hpp"

#include "isogk/bernstein.hpp"
#include "isogk/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace isogk {

namespace {

constexpr int kResidualSamples = 50;
// |det J phi| at or below this counts as a fold.
constexpr double kFoldThreshold = 1e-12;

struct Polygon {
    std::vector<Eigen::Vector2d> vertices;
    Eigen::Vector2d lo;
    Eigen::Vector2d hi;
};

Polygon boundary_polygon(const TensorPatch& patch, int per_side) {
    Polygon poly;
    auto push = [&](double u, double v) { poly.vertices.push_back(patch.eval({u, v}).head<2>()); };
    for (int i = 0; i < per_side; ++i) push(static_cast<double>(i) / per_side, 0.0);
    for (int i = 0; i < per_side; ++i) push(1.0, static_cast<double>(i) / per_side);
    for (int i = 0; i < per_side; ++i) push(1.0 - static_cast<double>(i) / per_side, 1.0);
    for (int i = 0; i < per_side; ++i) push(0.0, 1.0 - static_cast<double>(i) / per_side);
    poly.lo = poly.hi = poly.vertices.front();
    for (const auto& p : poly.vertices) {
        poly.lo = poly.lo.cwiseMin(p);
        poly.hi = poly.hi.cwiseMax(p);
    }
    return poly;
}

bool inside(const Polygon& poly, const Eigen::Vector2d& x) {
    if ((x.array() < poly.lo.array()).any() || (x.array() > poly.hi.array()).any()) return false;
    bool in = false;
    const auto n = poly.vertices.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const auto& a = poly.vertices[i];
        const auto& b = poly.vertices[j];
        if ((a[1] > x[1]) != (b[1] > x[1]) && x[0] < (b[0] - a[0]) * (x[1] - a[1]) / (b[1] - a[1]) + a[0]) in = !in;
    }
    return in;
}

double max_residual(const PatchComplex& complex, const Eigen::VectorXd& full, int k) {
    const auto patches = materialize(complex, full);
    double worst = 0.0;
    for (const auto& e : complex.edges) {
        const auto report = check_gk(patches[static_cast<std::size_t>(e.patch_a)],
                                     patches[static_cast<std::size_t>(e.patch_b)], e.rho, k, kResidualSamples);
        worst = std::max(worst, report.max_mismatch);
    }
    return worst;
}

} // namespace

PatchComplex build_complex(int n, int degree_u, int degree_v) {
    if (n < 3) throw ContractError("build_complex: need n >= 3 patches, got " + std::to_string(n));
    if (degree_u < 3 || degree_v < 3) throw ContractError("build_complex: bidegree must be at least (3,3)");
    PatchComplex c;
    c.n = n;
    c.degree_u = degree_u;
    c.degree_v = degree_v;
    const Reparameterization rho = standard_repar(n);
    for (int i = 0; i < n; ++i) c.edges.push_back({i, EdgeId::U0, (i + 1) % n, EdgeId::V0, rho});
    for (int i = 0; i < n; ++i) {
        c.boundary_edges.push_back({i, EdgeId::U1});
        c.boundary_edges.push_back({i, EdgeId::V1});
    }
    return c;
}

void validate_complex(const PatchComplex& complex, double g0_tol) {
    const int n = complex.n;
    if (n < 3) throw ContractError("complex: need n >= 3 patches");
    if (complex.degree_u < 1 || complex.degree_v < 1) throw ContractError("complex: bidegree must be positive");
    std::vector<int> used(static_cast<std::size_t>(4 * n), 0);
    auto mark = [&](int patch, EdgeId e) {
        if (patch < 0 || patch >= n) throw ContractError("complex: patch index " + std::to_string(patch) + " out of range");
        ++used[static_cast<std::size_t>(4 * patch + static_cast<int>(e))];
    };
    for (const auto& e : complex.edges) {
        if (e.patch_a == e.patch_b) throw ContractError("complex: interior edge joins a patch to itself");
        if (e.rho.edge_from != e.edge_a || e.rho.edge_to != e.edge_b)
            throw ContractError("complex: reparameterization edges disagree with the edge record");
        e.rho.validate();
        mark(e.patch_a, e.edge_a);
        mark(e.patch_b, e.edge_b);
    }
    for (const auto& b : complex.boundary_edges) mark(b.patch, b.edge);
    for (int x : used)
        if (x > 1) throw ContractError("complex: a patch side is used by more than one edge record");

    // Cyclic order: the edges leaving patch i along u0 reach patch i+1.
    if (static_cast<int>(complex.edges.size()) != n) throw ContractError("complex: expected n interior edges");
    std::vector<int> next(static_cast<std::size_t>(n), -1);
    for (const auto& e : complex.edges) next[static_cast<std::size_t>(e.patch_a)] = e.patch_b;
    int cur = 0;
    for (int step = 0; step < n; ++step) {
        cur = next[static_cast<std::size_t>(cur)];
        if (cur < 0) throw ContractError("complex: cyclic order around the vertex is broken");
        if (step < n - 1 && cur == 0) throw ContractError("complex: patches do not form a single cycle");
    }
    if (cur != 0) throw ContractError("complex: patches do not form a single cycle");

    if (!complex.has_geometry()) return;
    if (static_cast<int>(complex.geometry.size()) != n) throw ContractError("complex: geometry needs one net per patch");
    for (const auto& e : complex.edges) {
        const auto& a = complex.geometry[static_cast<std::size_t>(e.patch_a)];
        const auto& b = complex.geometry[static_cast<std::size_t>(e.patch_b)];
        for (double s : uniform_samples(kResidualSamples)) {
            const double gap = (edge_trace(a, e.edge_a, s) - edge_trace(b, e.edge_b, s)).norm();
            if (gap > g0_tol)
                throw ContractError("complex: patches " + std::to_string(e.patch_a) + " and " +
                                    std::to_string(e.patch_b) + " do not share their interface curve (gap " +
                                    std::to_string(gap) + ")");
        }
    }
}

PatchComplex relabel_cyclic(const PatchComplex& complex, int shift) {
    const int n = complex.n;
    auto relabel = [&](int i) { return ((i + shift) % n + n) % n; };
    PatchComplex out = complex;
    out.geometry.clear();
    out.geometry_coeffs.clear();
    for (auto& e : out.edges) {
        e.patch_a = relabel(e.patch_a);
        e.patch_b = relabel(e.patch_b);
    }
    for (auto& b : out.boundary_edges) b.patch = relabel(b.patch);
    return out;
}

int constraint_sites(const PatchComplex& complex, const InterfaceEdge& edge, int k) {
    return std::max(complex.degree_u, complex.degree_v) + k * edge.rho.shear_degree() + 1;
}

Eigen::MatrixXd assemble_constraints(const PatchComplex& complex, int k) {
    const int nb = complex.coeffs_per_patch();
    const auto& table = MultiIndexTable::get(2, k);
    const auto jet_size = static_cast<Eigen::Index>(table.size());
    Eigen::Index rows = 0;
    for (const auto& e : complex.edges) rows += constraint_sites(complex, e, k) * jet_size;
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(rows, complex.total_coeffs());

    Eigen::Index row = 0;
    for (const auto& e : complex.edges) {
        for (double s : bernstein::chebyshev_sites(constraint_sites(complex, e, k))) {
            const Point2 ua = edge_point(e.edge_a, s);
            const Jet own = bernstein_basis_jet(complex.degree_u, complex.degree_v, ua, k);
            const Jet rho_jet = e.rho.jet(ua, k);
            const Jet other = jet_compose(
                bernstein_basis_jet(complex.degree_u, complex.degree_v, Point2(rho_jet.value()), k), rho_jet);
            for (Eigen::Index q = 0; q < jet_size; ++q, ++row) {
                c.block(row, e.patch_a * nb, 1, nb) += own.coefficients().col(q).transpose();
                c.block(row, e.patch_b * nb, 1, nb) -= other.coefficients().col(q).transpose();
            }
        }
    }
    return c;
}

GSmoothSpace build_gsmooth_space(const PatchComplex& complex, int k) {
    if (k < 0 || k > 2) throw UnsupportedOrderError("build_gsmooth_space: order must be 0, 1 or 2");
    validate_complex(PatchComplex{complex.n, complex.degree_u, complex.degree_v, complex.edges,
                                  complex.boundary_edges, {}, {}});
    const Eigen::MatrixXd c = assemble_constraints(complex, k);
    const Eigen::Index cols = c.cols();

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(c, Eigen::ComputeFullV);
    const auto& sigma = svd.singularValues();
    const double cutoff = kRankCutoff * (sigma.size() > 0 ? sigma[0] : 0.0);
    Eigen::Index rank = 0;
    while (rank < sigma.size() && sigma[rank] > cutoff) ++rank;
    if (rank == cols) throw DegenerateSpaceError("build_gsmooth_space: constraint system has an empty nullspace");

    GSmoothSpace space;
    space.complex = complex;
    space.k = k;
    space.basis = svd.matrixV().rightCols(cols - rank);
    double worst = 0.0;
    for (Eigen::Index j = 0; j < space.basis.cols(); ++j)
        worst = std::max(worst, max_residual(complex, space.basis.col(j), k));
    space.constraint_residual = worst;
    return space;
}

std::vector<TensorPatch> materialize(const PatchComplex& complex, const Eigen::VectorXd& full_coeffs) {
    if (full_coeffs.size() != complex.total_coeffs())
        throw ContractError("materialize: expected " + std::to_string(complex.total_coeffs()) + " coefficients");
    const int nb = complex.coeffs_per_patch();
    std::vector<TensorPatch> out;
    out.reserve(static_cast<std::size_t>(complex.n));
    for (int i = 0; i < complex.n; ++i) {
        std::vector<double> net(full_coeffs.data() + i * nb, full_coeffs.data() + (i + 1) * nb);
        out.emplace_back(complex.degree_u, complex.degree_v, 1, std::move(net));
    }
    return out;
}

std::vector<TensorPatch> sample_field(const GSmoothSpace& space, const Eigen::VectorXd& coeffs) {
    if (coeffs.size() != space.dimension())
        throw ContractError("sample_field: expected " + std::to_string(space.dimension()) + " coefficients, got " +
                            std::to_string(coeffs.size()));
    return materialize(space.complex, space.basis * coeffs);
}

Eigen::VectorXd constant_coeffs(const GSmoothSpace& space, double c) {
    return space.basis.transpose() * Eigen::VectorXd::Constant(space.complex.total_coeffs(), c);
}

InjectivityAudit audit_injectivity(const std::vector<TensorPatch>& geometry, int grid) {
    InjectivityAudit audit;
    audit.min_abs_det = std::numeric_limits<double>::infinity();
    for (std::size_t p = 0; p < geometry.size(); ++p) {
        int sign = 0;
        for (int a = 0; a < grid; ++a)
            for (int b = 0; b < grid; ++b) {
                const Point2 u(static_cast<double>(a) / (grid - 1), static_cast<double>(b) / (grid - 1));
                const double det = jet_extract(geometry[p], u, 1).jacobian().topRows<2>().determinant();
                audit.min_abs_det = std::min(audit.min_abs_det, std::abs(det));
                const int s = det > kFoldThreshold ? 1 : (det < -kFoldThreshold ? -1 : 0);
                if (s == 0 || (sign != 0 && s != sign)) {
                    if (audit.sign_consistent) audit.fold_patch = static_cast<int>(p);
                    audit.sign_consistent = false;
                }
                if (sign == 0) sign = s;
            }
    }

    std::vector<Polygon> polys;
    for (const auto& g : geometry) polys.push_back(boundary_polygon(g, 64));
    for (std::size_t i = 0; i < geometry.size() && !audit.overlap; ++i) {
        for (int a = 0; a < grid && !audit.overlap; ++a)
            for (int b = 0; b < grid && !audit.overlap; ++b) {
                const Point2 u((a + 0.5) / grid, (b + 0.5) / grid);
                const Eigen::Vector2d x = geometry[i].eval(u).head<2>();
                for (std::size_t j = 0; j < geometry.size(); ++j) {
                    if (j == i || !inside(polys[j], x)) continue;
                    audit.overlap = true;
                    audit.overlap_a = static_cast<int>(i);
                    audit.overlap_b = static_cast<int>(j);
                    break;
                }
            }
    }
    return audit;
}

PatchComplex set_geometry(const GSmoothSpace& space, std::vector<Eigen::VectorXd> coord_coeffs) {
    const int d = static_cast<int>(coord_coeffs.size());
    if (d < 2 || d > 3) throw ContractError("set_geometry: need 2 or 3 coordinate functions");
    const PatchComplex& c = space.complex;
    std::vector<std::vector<TensorPatch>> coords;
    for (const auto& g : coord_coeffs) coords.push_back(sample_field(space, g));

    PatchComplex out = c;
    out.geometry.clear();
    out.geometry_coeffs = std::move(coord_coeffs);
    for (int i = 0; i < c.n; ++i) {
        std::vector<double> net;
        for (int a = 0; a <= c.degree_u; ++a)
            for (int b = 0; b <= c.degree_v; ++b)
                for (int x = 0; x < d; ++x) net.push_back(coords[static_cast<std::size_t>(x)][static_cast<std::size_t>(i)].at(a, b, 0));
        out.geometry.emplace_back(c.degree_u, c.degree_v, d, std::move(net));
    }
    validate_complex(out);
    if (d == 2) {
        const auto audit = audit_injectivity(out.geometry);
        if (!audit.sign_consistent)
            throw FoldError("geometry folds: Jacobian determinant changes sign on patch " +
                            std::to_string(audit.fold_patch));
        if (audit.overlap)
            throw OverlapError("geometry overlaps: patches " + std::to_string(audit.overlap_a) + " and " +
                               std::to_string(audit.overlap_b));
    }
    return out;
}

PatchComplex make_geometry(const GSmoothSpace& space, const PlanarLayout& layout) {
    if (space.dimension() < 3) throw ContractError("make_geometry: space dimension below 3 cannot embed a plane");
    const PatchComplex& c = space.complex;
    const int nb = c.coeffs_per_patch();
    Eigen::VectorXd tx(c.total_coeffs());
    Eigen::VectorXd ty(c.total_coeffs());
    for (int i = 0; i < c.n; ++i) {
        const double a0 = layout.rotation + 2.0 * std::numbers::pi * i / c.n;
        const double a1 = layout.rotation + 2.0 * std::numbers::pi * (i + 1) / c.n;
        const Eigen::Vector2d spoke_u = layout.radius * Eigen::Vector2d(std::cos(a0), std::sin(a0));
        const Eigen::Vector2d spoke_v = layout.radius * Eigen::Vector2d(std::cos(a1), std::sin(a1));
        for (int a = 0; a <= c.degree_u; ++a)
            for (int b = 0; b <= c.degree_v; ++b) {
                const Eigen::Vector2d x = (static_cast<double>(a) / c.degree_u) * spoke_u +
                                          (static_cast<double>(b) / c.degree_v) * spoke_v;
                tx[i * nb + a * (c.degree_v + 1) + b] = x[0];
                ty[i * nb + a * (c.degree_v + 1) + b] = x[1];
            }
    }
    return set_geometry(space, {space.basis.transpose() * tx, space.basis.transpose() * ty});
}

GSmoothSpace with_geometry(GSmoothSpace space, PatchComplex complex) {
    if (complex.n != space.complex.n || complex.degree_u != space.complex.degree_u ||
        complex.degree_v != space.complex.degree_v)
        throw ContractError("with_geometry: complex does not match the space");
    space.complex = std::move(complex);
    return space;
}

} // namespace isogk
