#pragma once

#include "isogk/jet.hpp"

#include <Eigen/Dense>

#include <array>
#include <span>
#include <string_view>
#include <vector>

namespace isogk {

using Point2 = Eigen::Vector2d;

/// One side of the unit parameter square.
enum class EdgeId { U0, U1, V0, V1 };

inline constexpr std::array<EdgeId, 4> kAllEdges{EdgeId::U0, EdgeId::U1, EdgeId::V0, EdgeId::V1};

std::string_view to_string(EdgeId edge);
EdgeId edge_from_string(std::string_view name);

/// Affine edge-adapted chart: (u, v) = origin + linear * (t, s), where s in
/// [0, 1] runs along the edge in the direction of the other parameter and t
/// is the inward normal distance. t = 0 is the edge itself.
struct EdgeChart {
    Point2 origin;
    Eigen::Matrix2d linear;

    Point2 operator()(double t, double s) const { return origin + linear * Eigen::Vector2d(t, s); }
};

EdgeChart edge_chart(EdgeId edge);

/// e(s) for the given side.
Point2 edge_point(EdgeId edge, double s);

/// Tensor-product Bezier patch of bidegree (p, q) from the unit square into R^d.
/// Control point (i, j), i along u and j along v, is stored row-major:
/// coordinate c sits at ((i * (q + 1)) + j) * d + c.
class TensorPatch {
public:
    TensorPatch(int degree_u, int degree_v, int out_dim, std::vector<double> control);

    static TensorPatch constant(int degree_u, int degree_v, const Eigen::VectorXd& value);
    static TensorPatch zero(int degree_u, int degree_v, int out_dim);
    /// The bilinear patch (u, v) -> (u, v).
    static TensorPatch identity();

    int degree_u() const { return p_; }
    int degree_v() const { return q_; }
    int out_dim() const { return d_; }
    int rows() const { return p_ + 1; }
    int cols() const { return q_ + 1; }

    std::span<const double> control() const { return control_; }
    Eigen::VectorXd control_point(int i, int j) const;
    void set_control_point(int i, int j, const Eigen::VectorXd& value);
    double& at(int i, int j, int c) { return control_[index(i, j, c)]; }
    double at(int i, int j, int c) const { return control_[index(i, j, c)]; }

    /// Tensor de Casteljau evaluation; throws DomainError outside [0,1]^2.
    Eigen::VectorXd eval(const Point2& u) const;

    /// Control net mapped through x -> a x + b.
    TensorPatch affine_image(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) const;

    bool operator==(const TensorPatch& other) const = default;

private:
    std::size_t index(int i, int j, int c) const {
        return static_cast<std::size_t>((i * (q_ + 1) + j) * d_ + c);
    }

    int p_;
    int q_;
    int d_;
    std::vector<double> control_;
};

void require_in_domain(const Point2& u, const char* op);

/// Exact derivative patch d^{du+dv}/du^du dv^dv of bidegree (p-du, q-dv);
/// the zero patch of bidegree (0,0) once either order exceeds the degree.
TensorPatch partial_derivative_patch(const TensorPatch& patch, int du, int dv);

/// Degree elevation to (p_new, q_new) >= (p, q); the map is unchanged.
TensorPatch elevate(const TensorPatch& patch, int p_new, int q_new);

/// patch(e(s)) on the named side.
Eigen::VectorXd edge_trace(const TensorPatch& patch, EdgeId edge, double s);

/// Exact k-jet (Taylor coefficients) of the patch at u, k <= kMaxJetOrder.
Jet jet_extract(const TensorPatch& patch, const Point2& u, int k);

/// k-jets of all (p+1)(q+1) scalar Bernstein basis functions at u, stacked as
/// output components in control-net order (i * (q+1) + j).
Jet bernstein_basis_jet(int degree_u, int degree_v, const Point2& u, int k);

} // namespace isogk
