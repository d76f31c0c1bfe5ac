#pragma once

#include "isogk/jet.hpp"
#include "isogk/tensor_patch.hpp"

#include <optional>
#include <ostream>
#include <vector>

namespace isogk {

/// Change of coordinates across a shared edge. In the edge charts of the two
/// sides, rho(t, s) = (-lambda t, s + beta(s) t), so the edge t = 0 of the
/// first square is carried onto the edge of the second with the same s, and
/// the inside of the first square lands outside the second.
struct Reparameterization {
    EdgeId edge_from = EdgeId::U0;
    EdgeId edge_to = EdgeId::V0;
    /// beta(s) = sum_i shear_coeffs[i] s^i, at most three coefficients.
    std::vector<double> shear_coeffs;
    double normal_scale = 1.0;

    void validate() const;

    double shear(double s) const;
    /// Degree of beta after dropping exactly-zero leading terms (0 for beta == 0).
    int shear_degree() const;

    /// rho in patch coordinates of the two squares.
    Point2 map(const Point2& u) const;
    /// k-jet of rho (patch coordinates) at u.
    Jet jet(const Point2& u, int k) const;

    bool operator==(const Reparameterization&) const = default;
};

/// Symmetric linear-shear reparameterization for n patches around a vertex:
/// lambda = 1, beta(s) = 2 cos(2 pi / n) (1 - s), from edge u0 to edge v0.
Reparameterization standard_repar(int n);

struct ReparInvariants {
    double max_edge_deviation = 0.0; ///< max |rho(e_from(s)) - e_to(s)|
    double min_abs_det = 0.0;        ///< min |det D rho| on the edge
    bool orientation_ok = false;     ///< inside of square 1 maps outside square 2
};

ReparInvariants check_repar_invariants(const Reparameterization& rho, int n_samples = 50);

struct SmoothnessReport {
    int k = 0;
    std::vector<double> sample_params;
    std::vector<double> per_sample_mismatch;
    double max_mismatch = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    /// Smallest sampled |det J phi|, when geometry is involved.
    std::optional<double> min_abs_det_jacobian;
    /// Mismatch(h) / mismatch(h/2) for finite-difference reports.
    std::optional<double> halving_ratio;
    std::optional<double> step;
    /// Whether both inputs satisfied the G^k premise (lemma reports).
    std::optional<bool> premise_holds;

    static SmoothnessReport from_samples(int k, std::vector<double> params, std::vector<double> mismatch,
                                         double tolerance);
};

/// CSV with header "s,mismatch", one row per sample, then one "# ..." summary line.
void write_report_csv(std::ostream& out, const SmoothnessReport& report);
std::string report_summary(const SmoothnessReport& report);

/// Evenly spaced s in [0,1] including both ends.
std::vector<double> uniform_samples(int n_samples);

inline constexpr double kDefaultCheckTolerance = 1e-8;

/// Samples j^k f1 = j^k (f2 o rho) along rho.edge_from.
SmoothnessReport check_gk(const TensorPatch& f1, const TensorPatch& f2, const Reparameterization& rho, int k,
                          int n_samples, double tol = kDefaultCheckTolerance);

/// Builds f1 whose first k+1 control rows along rho.edge_from reproduce the
/// cross-boundary jets of f2 o rho; all other rows are copied from free_data.
/// free_data fixes the output bidegree, which must be at least
/// (p + k deg beta, q + k deg beta) for f2 of bidegree (p, q).
TensorPatch enforce_gk(const TensorPatch& f2, const Reparameterization& rho, int k, const TensorPatch& free_data);

/// Control-net indices (i, j) that enforce_gk overwrites for the given edge and order.
std::vector<std::pair<int, int>> constrained_control_points(EdgeId edge, int degree_u, int degree_v, int k);

} // namespace isogk
