#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace isogk {

inline constexpr int kMaxJetOrder = 4;
inline constexpr double kBasePointTolerance = 1e-9;

using MultiIndex = std::vector<int>;

/// Multi-indices of m variables with total degree <= k in graded-lexicographic
/// order: by total degree, then descending in the leading exponent.
/// For m = 2, k = 2: (0,0) (1,0) (0,1) (2,0) (1,1) (0,2).
class MultiIndexTable {
public:
    static const MultiIndexTable& get(int m, int k);

    int vars() const { return m_; }
    int order() const { return k_; }
    std::size_t size() const { return indices_.size(); }
    const MultiIndex& operator[](std::size_t i) const { return indices_[i]; }
    int degree(std::size_t i) const { return degrees_[i]; }

    /// Position of alpha, or -1 if |alpha| > k.
    int position(const MultiIndex& alpha) const;

    /// Position of alpha + beta, or -1 when the sum exceeds order k.
    int sum(std::size_t a, std::size_t b) const { return sum_[a * size() + b]; }

    /// For nonzero alpha: (position of alpha - e_j, j) for the first nonzero j.
    std::pair<int, int> predecessor(std::size_t i) const { return pred_[i]; }

private:
    MultiIndexTable(int m, int k);

    int m_;
    int k_;
    std::vector<MultiIndex> indices_;
    std::vector<int> degrees_;
    std::vector<int> sum_;
    std::vector<std::pair<int, int>> pred_;
};

/// Truncated Taylor expansion of order k of a map R^m -> R^d at a base point.
/// Row c of coefficients() holds, for output component c, the Taylor
/// coefficients (d^alpha f_c / alpha!) in MultiIndexTable order.
class Jet {
public:
    Jet(int order, Eigen::VectorXd base_point, Eigen::MatrixXd coefficients);

    /// All-zero jet.
    static Jet zero(int order, int in_dim, int out_dim, const Eigen::VectorXd& base_point);
    static Jet identity(int order, const Eigen::VectorXd& base_point);
    /// Jet of x -> value + A (x - base_point).
    static Jet affine(int order, const Eigen::VectorXd& base_point,
                      const Eigen::VectorXd& value, const Eigen::MatrixXd& linear);

    int order() const { return order_; }
    int in_dim() const { return static_cast<int>(base_.size()); }
    int out_dim() const { return static_cast<int>(coeffs_.rows()); }
    const Eigen::VectorXd& base_point() const { return base_; }
    const Eigen::MatrixXd& coefficients() const { return coeffs_; }
    const MultiIndexTable& table() const { return MultiIndexTable::get(in_dim(), order_); }

    double coefficient(int component, const MultiIndex& alpha) const;
    Eigen::VectorXd value() const { return coeffs_.col(0); }
    /// d x m matrix of first derivatives; requires order >= 1.
    Eigen::MatrixXd jacobian() const;

    /// Drop all terms of degree > new_order.
    Jet truncate(int new_order) const;

private:
    int order_;
    Eigen::VectorXd base_;
    Eigen::MatrixXd coeffs_;
};

/// k-jet of the composite outer(inner(x)) at inner's base point, by truncated
/// power-series substitution.
Jet jet_compose(const Jet& outer, const Jet& inner);

/// k-jet of the local inverse at the image point; order-by-order Newton on jets.
Jet jet_invert(const Jet& j);

/// Largest absolute coefficient difference.
double jet_distance(const Jet& a, const Jet& b);

} // namespace isogk
