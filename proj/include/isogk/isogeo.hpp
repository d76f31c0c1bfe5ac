#pragma once

#include "isogk/gluing.hpp"
#include "isogk/gsmooth_space.hpp"
#include "isogk/tensor_patch.hpp"

#include <Eigen/Dense>

#include <vector>

namespace isogk {

inline constexpr double kInversionTolerance = 1e-12;
inline constexpr int kInversionMaxIterations = 50;
inline constexpr double kLemmaTolerance = 1e-8;

/// The piece f o phi^{-1} of an iso-geometric function on one patch.
class IsoGeoElement {
public:
    /// phi must map into the plane; f must be scalar. same_space records that
    /// both came from one GSmoothSpace.
    IsoGeoElement(TensorPatch geometry, TensorPatch field, int patch_index, bool same_space = false);

    const TensorPatch& geometry() const { return geometry_; }
    const TensorPatch& field() const { return field_; }
    int patch_index() const { return patch_index_; }
    bool same_space() const { return same_space_; }

    /// Nearest point of the 20x20 parameter grid, by physical distance.
    Point2 seed(const Eigen::Vector2d& x) const;

private:
    TensorPatch geometry_;
    TensorPatch field_;
    int patch_index_;
    bool same_space_;
    std::vector<Point2> seed_params_;
    std::vector<Eigen::Vector2d> seed_points_;
};

/// One element per patch; the space must carry geometry.
std::vector<IsoGeoElement> make_elements(const GSmoothSpace& space, const Eigen::VectorXd& field_coeffs);

/// Same, from explicit per-patch field patches (e.g. perturbed ones).
std::vector<IsoGeoElement> make_elements(const PatchComplex& complex, const std::vector<TensorPatch>& fields,
                                         bool same_space);

/// Clamped Newton iteration for phi(u) = x; |phi(u) - x| < 1e-12 on return.
Point2 invert_map(const TensorPatch& phi, const Eigen::Vector2d& x, const Point2& guess);

/// f(phi^{-1}(x)).
double eval_element(const IsoGeoElement& elem, const Eigen::Vector2d& x);

/// k-jet of f o phi^{-1} at phi(u): jet(f) composed with the inverse of jet(phi).
Jet physical_jet(const TensorPatch& geometry, const TensorPatch& field, const Point2& u, int k);

/// Compares the physical k-jets of the two elements at the interface points
/// phi_1(e_1(s)) = phi_2(e_2(s)); pass iff max mismatch < tol.
SmoothnessReport lemma_check(const IsoGeoElement& elem1, const IsoGeoElement& elem2, const Reparameterization& rho,
                             int k, int n_samples, double tol = kLemmaTolerance);

/// Compares jet(f1) o jet(phi1)^{-1} with (jet(f2) o jet(rho)) o jet(phi1)^{-1}.
SmoothnessReport proof_chain_check(const IsoGeoElement& elem1, const IsoGeoElement& elem2,
                                   const Reparameterization& rho, int k, int n_samples,
                                   double tol = kLemmaTolerance);

inline constexpr double kHalvingRatioLow = 3.0;
inline constexpr double kHalvingRatioHigh = 5.0;
/// Below this the composed function is differenced exactly (affine case).
inline constexpr double kFdExactFloor = 1e-10;

/// Second-order one-sided finite-difference gradients of the composed
/// function from both sides of the interface along two transversal physical
/// directions, at steps h and h/2. Passes when the mismatch decays like h^2
/// (halving ratio in [3, 5]) or is below the exact-differencing floor.
SmoothnessReport crosscheck_fd(const IsoGeoElement& elem1, const IsoGeoElement& elem2, const Reparameterization& rho,
                               int n_samples, double h);

} // namespace isogk
