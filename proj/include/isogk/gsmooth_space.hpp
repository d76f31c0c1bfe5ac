#pragma once

#include "isogk/gluing.hpp"
#include "isogk/tensor_patch.hpp"

#include <Eigen/Dense>

#include <vector>

namespace isogk {

struct InterfaceEdge {
    int patch_a = 0;
    EdgeId edge_a = EdgeId::U0;
    int patch_b = 0;
    EdgeId edge_b = EdgeId::V0;
    /// Maps a neighbourhood of edge_a on patch_a's square to patch_b's square.
    Reparameterization rho;

    bool operator==(const InterfaceEdge&) const = default;
};

struct BoundaryEdge {
    int patch = 0;
    EdgeId edge = EdgeId::U1;

    bool operator==(const BoundaryEdge&) const = default;
};

/// n unit squares glued around one central vertex. Each square's corner
/// (0,0) is the vertex; the u0 side of patch i meets the v0 side of patch i+1.
struct PatchComplex {
    int n = 0;
    int degree_u = 3;
    int degree_v = 3;
    std::vector<InterfaceEdge> edges;
    std::vector<BoundaryEdge> boundary_edges;
    /// Physical coordinates of the geometry, each a coefficient vector in the
    /// basis of the space the geometry was drawn from. Empty until set.
    std::vector<Eigen::VectorXd> geometry_coeffs;
    /// Materialized geometry nets, one per patch (empty until set).
    std::vector<TensorPatch> geometry;

    int coeffs_per_patch() const { return (degree_u + 1) * (degree_v + 1); }
    int total_coeffs() const { return n * coeffs_per_patch(); }
    bool has_geometry() const { return !geometry.empty(); }

    bool operator==(const PatchComplex&) const = default;
};

PatchComplex build_complex(int n, int degree_u = 3, int degree_v = 3);

/// Throws ContractError naming the first violated invariant. When geometry is
/// present, consecutive patches must agree along their interface to g0_tol.
void validate_complex(const PatchComplex& complex, double g0_tol = 1e-10);

/// Cyclic relabeling patch i -> (i + shift) mod n. Geometry is dropped.
PatchComplex relabel_cyclic(const PatchComplex& complex, int shift);

struct GSmoothSpace {
    PatchComplex complex;
    int k = 1;
    /// total_coeffs x dim, orthonormal columns.
    Eigen::MatrixXd basis;
    /// Largest check_gk mismatch over all basis vectors and interior edges.
    double constraint_residual = 0.0;

    int dimension() const { return static_cast<int>(basis.cols()); }
};

inline constexpr double kRankCutoff = 1e-9;

/// Stacked jet-matching conditions j^k f_a - j^k (f_b o rho) = 0 of every
/// interior edge, sampled at Chebyshev sites; columns index all per-patch
/// Bernstein coefficients (patch-major, then row-major control index).
Eigen::MatrixXd assemble_constraints(const PatchComplex& complex, int k);

/// Number of Chebyshev sites per edge that makes the sampled conditions exact.
int constraint_sites(const PatchComplex& complex, const InterfaceEdge& edge, int k);

GSmoothSpace build_gsmooth_space(const PatchComplex& complex, int k);

/// Per-patch scalar patches of the full coefficient vector.
std::vector<TensorPatch> materialize(const PatchComplex& complex, const Eigen::VectorXd& full_coeffs);

/// Linear combination of basis vectors as per-patch scalar patches.
std::vector<TensorPatch> sample_field(const GSmoothSpace& space, const Eigen::VectorXd& coeffs);

/// Basis coordinates of the constant function c.
Eigen::VectorXd constant_coeffs(const GSmoothSpace& space, double c = 1.0);

/// Regular n-gon sector layout: patch i is the parallelogram spanned by the
/// spokes at angles rotation + 2 pi i / n and rotation + 2 pi (i+1) / n.
struct PlanarLayout {
    double radius = 1.0;
    double rotation = 0.0;
};

struct InjectivityAudit {
    double min_abs_det = 0.0;
    bool sign_consistent = true;
    int fold_patch = -1;
    bool overlap = false;
    int overlap_a = -1;
    int overlap_b = -1;
};

/// Jacobian-sign audit on a 20x20 grid per patch plus a pairwise overlap test
/// of sampled patch interiors.
InjectivityAudit audit_injectivity(const std::vector<TensorPatch>& geometry, int grid = 20);

/// Geometry from coordinate coefficient vectors; audited, throws FoldError or
/// OverlapError when phi is not injective.
PatchComplex set_geometry(const GSmoothSpace& space, std::vector<Eigen::VectorXd> coord_coeffs);

/// Least-squares fit of the layout in the space, then the injectivity audit.
PatchComplex make_geometry(const GSmoothSpace& space, const PlanarLayout& layout = {});

/// The space with its complex replaced by one carrying geometry.
GSmoothSpace with_geometry(GSmoothSpace space, PatchComplex complex);

} // namespace isogk
