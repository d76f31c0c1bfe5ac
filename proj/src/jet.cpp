#include "isogk/jet.hpp"

#include "isogk/error.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <string>

namespace isogk {

namespace {

void append_degree(int m, int remaining, MultiIndex& prefix, std::vector<MultiIndex>& out) {
    const int var = static_cast<int>(prefix.size());
    if (var == m - 1) {
        prefix.push_back(remaining);
        out.push_back(prefix);
        prefix.pop_back();
        return;
    }
    for (int e = remaining; e >= 0; --e) {
        prefix.push_back(e);
        append_degree(m, remaining - e, prefix, out);
        prefix.pop_back();
    }
}

std::size_t binomial(int n, int r) {
    std::size_t out = 1;
    for (int i = 1; i <= r; ++i) out = out * static_cast<std::size_t>(n - r + i) / static_cast<std::size_t>(i);
    return out;
}

// Truncated product of two polynomials stored in table order.
Eigen::RowVectorXd truncated_product(const Eigen::RowVectorXd& a, const Eigen::RowVectorXd& b,
                                     const MultiIndexTable& table) {
    const auto n = table.size();
    Eigen::RowVectorXd out = Eigen::RowVectorXd::Zero(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        if (a[i] == 0.0) continue;
        for (std::size_t j = 0; j < n; ++j) {
            const int s = table.sum(i, j);
            if (s >= 0) out[s] += a[i] * b[j];
        }
    }
    return out;
}

void require_same_shape(const Jet& a, const Jet& b, const char* op) {
    if (a.order() != b.order() || a.in_dim() != b.in_dim() || a.out_dim() != b.out_dim())
        throw ContractError(std::string(op) + ": jet shapes differ");
    const double gap = (a.base_point() - b.base_point()).lpNorm<Eigen::Infinity>();
    if (gap > kBasePointTolerance)
        throw ContractError(std::string(op) + ": base points differ by " + std::to_string(gap));
}

} // namespace

MultiIndexTable::MultiIndexTable(int m, int k) : m_(m), k_(k) {
    for (int t = 0; t <= k; ++t) {
        MultiIndex prefix;
        append_degree(m, t, prefix, indices_);
    }
    const auto n = indices_.size();
    degrees_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        int deg = 0;
        for (int e : indices_[i]) deg += e;
        degrees_[i] = deg;
    }
    sum_.assign(n * n, -1);
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            if (degrees_[a] + degrees_[b] > k) continue;
            MultiIndex s(indices_[a]);
            for (int v = 0; v < m; ++v) s[v] += indices_[b][v];
            sum_[a * n + b] = position(s);
        }
    }
    pred_.assign(n, {-1, -1});
    for (std::size_t i = 1; i < n; ++i) {
        MultiIndex p(indices_[i]);
        int j = 0;
        while (p[j] == 0) ++j;
        --p[j];
        pred_[i] = {position(p), j};
    }
}

const MultiIndexTable& MultiIndexTable::get(int m, int k) {
    if (m < 1) throw ContractError("jet: input dimension must be >= 1");
    if (k < 0 || k > kMaxJetOrder)
        throw UnsupportedOrderError("jet: order " + std::to_string(k) + " outside [0, " +
                                    std::to_string(kMaxJetOrder) + "]");
    static std::mutex mutex;
    static std::map<std::pair<int, int>, std::unique_ptr<MultiIndexTable>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[{m, k}];
    if (!slot) slot.reset(new MultiIndexTable(m, k));
    return *slot;
}

int MultiIndexTable::position(const MultiIndex& alpha) const {
    if (static_cast<int>(alpha.size()) != m_) return -1;
    int deg = 0;
    for (int e : alpha) {
        if (e < 0) return -1;
        deg += e;
    }
    if (deg > k_) return -1;
    // Offset of the degree block, then rank inside it.
    int pos = deg == 0 ? 0 : static_cast<int>(binomial(m_ + deg - 1, deg - 1));
    int remaining = deg;
    for (int v = 0; v < m_ - 1; ++v) {
        // Indices with a larger exponent in slot v come first.
        for (int e = remaining; e > alpha[v]; --e)
            pos += static_cast<int>(binomial(remaining - e + (m_ - v - 2), m_ - v - 2));
        remaining -= alpha[v];
    }
    return pos;
}

Jet::Jet(int order, Eigen::VectorXd base_point, Eigen::MatrixXd coefficients)
    : order_(order), base_(std::move(base_point)), coeffs_(std::move(coefficients)) {
    const auto& t = MultiIndexTable::get(static_cast<int>(base_.size()), order_);
    if (coeffs_.rows() < 1) throw ContractError("jet: output dimension must be >= 1");
    if (static_cast<std::size_t>(coeffs_.cols()) != t.size())
        throw ContractError("jet: expected " + std::to_string(t.size()) + " coefficients per component, got " +
                            std::to_string(coeffs_.cols()));
    if (!coeffs_.allFinite() || !base_.allFinite()) throw ContractError("jet: non-finite coefficient");
}

Jet Jet::zero(int order, int in_dim, int out_dim, const Eigen::VectorXd& base_point) {
    if (base_point.size() != in_dim) throw ContractError("jet: base point dimension mismatch");
    const auto n = static_cast<Eigen::Index>(MultiIndexTable::get(in_dim, order).size());
    return Jet(order, base_point, Eigen::MatrixXd::Zero(out_dim, n));
}

Jet Jet::identity(int order, const Eigen::VectorXd& base_point) {
    const auto m = base_point.size();
    return affine(order, base_point, base_point, Eigen::MatrixXd::Identity(m, m));
}

Jet Jet::affine(int order, const Eigen::VectorXd& base_point, const Eigen::VectorXd& value,
                const Eigen::MatrixXd& linear) {
    const int m = static_cast<int>(base_point.size());
    const int d = static_cast<int>(value.size());
    if (linear.rows() != d || linear.cols() != m) throw ContractError("jet: affine map shape mismatch");
    Jet j = zero(order, m, d, base_point);
    j.coeffs_.col(0) = value;
    // Degree-1 block sits at positions 1..m with e_0 first.
    if (order >= 1) j.coeffs_.middleCols(1, m) = linear;
    return j;
}

double Jet::coefficient(int component, const MultiIndex& alpha) const {
    const int pos = table().position(alpha);
    if (pos < 0 || component < 0 || component >= out_dim()) throw ContractError("jet: coefficient index out of range");
    return coeffs_(component, pos);
}

Eigen::MatrixXd Jet::jacobian() const {
    if (order_ < 1) throw ContractError("jet: order-0 jet carries no Jacobian");
    return coeffs_.middleCols(1, in_dim());
}

Jet Jet::truncate(int new_order) const {
    if (new_order > order_ || new_order < 0) throw ContractError("jet: truncation order out of range");
    const auto n = static_cast<Eigen::Index>(MultiIndexTable::get(in_dim(), new_order).size());
    return Jet(new_order, base_, coeffs_.leftCols(n));
}

Jet jet_compose(const Jet& outer, const Jet& inner) {
    if (inner.out_dim() != outer.in_dim())
        throw ContractError("jet_compose: inner output dimension " + std::to_string(inner.out_dim()) +
                            " != outer input dimension " + std::to_string(outer.in_dim()));
    if (inner.order() != outer.order()) throw ContractError("jet_compose: orders differ");
    const Eigen::VectorXd shift = inner.value() - outer.base_point();
    const double gap = shift.lpNorm<Eigen::Infinity>();
    if (gap > kBasePointTolerance)
        throw ContractError("jet_compose: outer base point differs from inner value by " + std::to_string(gap));

    const auto& in_table = inner.table();
    const auto& out_table = outer.table();
    const auto n_in = static_cast<Eigen::Index>(in_table.size());
    const auto n_out = static_cast<Eigen::Index>(out_table.size());

    // delta_j(x) = inner_j(x) - y0_j; its constant term is the (tiny) base gap.
    Eigen::MatrixXd delta = inner.coefficients();
    delta.col(0) = shift;

    // Row b of powers holds prod_j delta_j^{beta_j} for the b-th outer multi-index.
    Eigen::MatrixXd powers = Eigen::MatrixXd::Zero(n_out, n_in);
    powers(0, 0) = 1.0;
    for (Eigen::Index b = 1; b < n_out; ++b) {
        const auto [prev, var] = out_table.predecessor(static_cast<std::size_t>(b));
        powers.row(b) = truncated_product(powers.row(prev), delta.row(var), in_table);
    }
    return Jet(inner.order(), inner.base_point(), outer.coefficients() * powers);
}

Jet jet_invert(const Jet& j) {
    if (j.in_dim() != j.out_dim()) throw ContractError("jet_invert: map is not square");
    const Eigen::VectorXd image = j.value();
    if (j.order() == 0) return Jet(0, image, Eigen::MatrixXd(j.base_point()));

    const Eigen::MatrixXd a = j.jacobian();
    const double det = a.determinant();
    if (!(std::abs(det) > 1e-12))
        throw SingularityError("jet_invert: singular Jacobian, |det| = " + std::to_string(std::abs(det)),
                               std::abs(det));
    const Eigen::MatrixXd a_inv = a.inverse();

    Jet g = Jet::affine(j.order(), image, j.base_point(), a_inv);
    const Jet id = Jet::identity(j.order(), image);
    // Each Newton step at least doubles the number of correct orders.
    for (int it = 0; it <= j.order(); ++it) {
        const Jet residual = jet_compose(j, g);
        Eigen::MatrixXd coeffs = g.coefficients() - a_inv * (residual.coefficients() - id.coefficients());
        g = Jet(j.order(), image, std::move(coeffs));
    }
    return g;
}

double jet_distance(const Jet& a, const Jet& b) {
    require_same_shape(a, b, "jet_distance");
    return (a.coefficients() - b.coefficients()).cwiseAbs().maxCoeff();
}

} // namespace isogk
