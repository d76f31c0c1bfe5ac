#include "isogk/tensor_patch.hpp"

#include "isogk/bernstein.hpp"
#include "isogk/error.hpp"

#include <cmath>
#include <string>

namespace isogk {

std::string_view to_string(EdgeId edge) {
    switch (edge) {
    case EdgeId::U0: return "u0";
    case EdgeId::U1: return "u1";
    case EdgeId::V0: return "v0";
    case EdgeId::V1: return "v1";
    }
    return "?";
}

EdgeId edge_from_string(std::string_view name) {
    for (EdgeId e : kAllEdges)
        if (to_string(e) == name) return e;
    throw FormatError("unknown edge id '" + std::string(name) + "'");
}

EdgeChart edge_chart(EdgeId edge) {
    EdgeChart chart;
    switch (edge) {
    case EdgeId::U0:
        chart.origin = {0.0, 0.0};
        chart.linear << 1.0, 0.0, 0.0, 1.0;
        break;
    case EdgeId::U1:
        chart.origin = {1.0, 0.0};
        chart.linear << -1.0, 0.0, 0.0, 1.0;
        break;
    case EdgeId::V0:
        chart.origin = {0.0, 0.0};
        chart.linear << 0.0, 1.0, 1.0, 0.0;
        break;
    case EdgeId::V1:
        chart.origin = {0.0, 1.0};
        chart.linear << 0.0, 1.0, -1.0, 0.0;
        break;
    }
    return chart;
}

Point2 edge_point(EdgeId edge, double s) {
    return edge_chart(edge)(0.0, s);
}

void require_in_domain(const Point2& u, const char* op) {
    if (!(u[0] >= 0.0 && u[0] <= 1.0 && u[1] >= 0.0 && u[1] <= 1.0))
        throw DomainError(std::string(op) + ": parameter (" + std::to_string(u[0]) + ", " + std::to_string(u[1]) +
                          ") outside the unit square");
}

TensorPatch::TensorPatch(int degree_u, int degree_v, int out_dim, std::vector<double> control)
    : p_(degree_u), q_(degree_v), d_(out_dim), control_(std::move(control)) {
    if (p_ < 0 || q_ < 0) throw ContractError("TensorPatch: negative degree");
    if (d_ < 1 || d_ > 3) throw ContractError("TensorPatch: output dimension must be 1, 2 or 3");
    if (control_.size() != static_cast<std::size_t>((p_ + 1) * (q_ + 1) * d_))
        throw ContractError("TensorPatch: control net has " + std::to_string(control_.size()) +
                            " coordinates, expected " + std::to_string((p_ + 1) * (q_ + 1) * d_));
    for (double x : control_)
        if (!std::isfinite(x)) throw ContractError("TensorPatch: non-finite control coordinate");
}

TensorPatch TensorPatch::constant(int degree_u, int degree_v, const Eigen::VectorXd& value) {
    const int d = static_cast<int>(value.size());
    std::vector<double> net;
    net.reserve(static_cast<std::size_t>((degree_u + 1) * (degree_v + 1) * d));
    for (int i = 0; i < (degree_u + 1) * (degree_v + 1); ++i)
        for (int c = 0; c < d; ++c) net.push_back(value[c]);
    return TensorPatch(degree_u, degree_v, d, std::move(net));
}

TensorPatch TensorPatch::zero(int degree_u, int degree_v, int out_dim) {
    return constant(degree_u, degree_v, Eigen::VectorXd::Zero(out_dim));
}

TensorPatch TensorPatch::identity() {
    return TensorPatch(1, 1, 2, {0.0, 0.0, 0.0, 1.0, 1.0, 0.0, 1.0, 1.0});
}

Eigen::VectorXd TensorPatch::control_point(int i, int j) const {
    Eigen::VectorXd out(d_);
    for (int c = 0; c < d_; ++c) out[c] = at(i, j, c);
    return out;
}

void TensorPatch::set_control_point(int i, int j, const Eigen::VectorXd& value) {
    if (value.size() != d_) throw ContractError("TensorPatch: control point dimension mismatch");
    if (!value.allFinite()) throw ContractError("TensorPatch: non-finite control coordinate");
    for (int c = 0; c < d_; ++c) at(i, j, c) = value[c];
}

Eigen::VectorXd TensorPatch::eval(const Point2& u) const {
    require_in_domain(u, "eval");
    const double su = 1.0 - u[0];
    const double sv = 1.0 - u[1];
    Eigen::MatrixXd column(p_ + 1, d_);
    Eigen::MatrixXd row(q_ + 1, d_);
    for (int i = 0; i <= p_; ++i) {
        for (int j = 0; j <= q_; ++j)
            for (int c = 0; c < d_; ++c) row(j, c) = at(i, j, c);
        for (int level = q_; level > 0; --level)
            for (int j = 0; j < level; ++j) row.row(j) = sv * row.row(j) + u[1] * row.row(j + 1);
        column.row(i) = row.row(0);
    }
    for (int level = p_; level > 0; --level)
        for (int i = 0; i < level; ++i) column.row(i) = su * column.row(i) + u[0] * column.row(i + 1);
    return column.row(0).transpose();
}

TensorPatch TensorPatch::affine_image(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) const {
    if (a.cols() != d_ || a.rows() != b.size()) throw ContractError("affine_image: shape mismatch");
    const int d_new = static_cast<int>(b.size());
    std::vector<double> net;
    net.reserve(static_cast<std::size_t>(rows() * cols() * d_new));
    for (int i = 0; i <= p_; ++i)
        for (int j = 0; j <= q_; ++j) {
            const Eigen::VectorXd x = a * control_point(i, j) + b;
            for (int c = 0; c < d_new; ++c) net.push_back(x[c]);
        }
    return TensorPatch(p_, q_, d_new, std::move(net));
}

TensorPatch partial_derivative_patch(const TensorPatch& patch, int du, int dv) {
    if (du < 0 || dv < 0) throw ContractError("partial_derivative_patch: negative order");
    const int d = patch.out_dim();
    if (du > patch.degree_u() || dv > patch.degree_v()) return TensorPatch::zero(0, 0, d);

    TensorPatch cur = patch;
    for (int step = 0; step < du; ++step) {
        const int p = cur.degree_u();
        const int q = cur.degree_v();
        TensorPatch next = TensorPatch::zero(p - 1, q, d);
        for (int i = 0; i < p; ++i)
            for (int j = 0; j <= q; ++j)
                for (int c = 0; c < d; ++c) next.at(i, j, c) = p * (cur.at(i + 1, j, c) - cur.at(i, j, c));
        cur = std::move(next);
    }
    for (int step = 0; step < dv; ++step) {
        const int p = cur.degree_u();
        const int q = cur.degree_v();
        TensorPatch next = TensorPatch::zero(p, q - 1, d);
        for (int i = 0; i <= p; ++i)
            for (int j = 0; j < q; ++j)
                for (int c = 0; c < d; ++c) next.at(i, j, c) = q * (cur.at(i, j + 1, c) - cur.at(i, j, c));
        cur = std::move(next);
    }
    return cur;
}

TensorPatch elevate(const TensorPatch& patch, int p_new, int q_new) {
    if (p_new < patch.degree_u() || q_new < patch.degree_v())
        throw ContractError("elevate: degree reduction requested");
    const int d = patch.out_dim();
    TensorPatch cur = patch;
    while (cur.degree_u() < p_new) {
        const int p = cur.degree_u();
        const int q = cur.degree_v();
        TensorPatch next = TensorPatch::zero(p + 1, q, d);
        for (int i = 0; i <= p + 1; ++i) {
            const double w = static_cast<double>(i) / (p + 1);
            for (int j = 0; j <= q; ++j)
                for (int c = 0; c < d; ++c) {
                    const double left = i > 0 ? cur.at(i - 1, j, c) : 0.0;
                    const double right = i <= p ? cur.at(i, j, c) : 0.0;
                    next.at(i, j, c) = w * left + (1.0 - w) * right;
                }
        }
        cur = std::move(next);
    }
    while (cur.degree_v() < q_new) {
        const int p = cur.degree_u();
        const int q = cur.degree_v();
        TensorPatch next = TensorPatch::zero(p, q + 1, d);
        for (int j = 0; j <= q + 1; ++j) {
            const double w = static_cast<double>(j) / (q + 1);
            for (int i = 0; i <= p; ++i)
                for (int c = 0; c < d; ++c) {
                    const double left = j > 0 ? cur.at(i, j - 1, c) : 0.0;
                    const double right = j <= q ? cur.at(i, j, c) : 0.0;
                    next.at(i, j, c) = w * left + (1.0 - w) * right;
                }
        }
        cur = std::move(next);
    }
    return cur;
}

Eigen::VectorXd edge_trace(const TensorPatch& patch, EdgeId edge, double s) {
    if (!(s >= 0.0 && s <= 1.0)) throw DomainError("edge_trace: s outside [0, 1]");
    return patch.eval(edge_point(edge, s));
}

Jet jet_extract(const TensorPatch& patch, const Point2& u, int k) {
    require_in_domain(u, "jet_extract");
    const auto& table = MultiIndexTable::get(2, k);
    const Eigen::MatrixXd du = bernstein::derivatives(patch.degree_u(), u[0], k);
    const Eigen::MatrixXd dv = bernstein::derivatives(patch.degree_v(), u[1], k);
    const int d = patch.out_dim();
    Eigen::MatrixXd coeffs = Eigen::MatrixXd::Zero(d, static_cast<Eigen::Index>(table.size()));
    for (std::size_t n = 0; n < table.size(); ++n) {
        const int a = table[n][0];
        const int b = table[n][1];
        if (a > patch.degree_u() || b > patch.degree_v()) continue;
        const double inv_fact = 1.0 / (bernstein::factorial(a) * bernstein::factorial(b));
        for (int i = 0; i <= patch.degree_u(); ++i) {
            const double wu = du(a, i);
            if (wu == 0.0) continue;
            for (int j = 0; j <= patch.degree_v(); ++j) {
                const double w = wu * dv(b, j) * inv_fact;
                for (int c = 0; c < d; ++c) coeffs(c, static_cast<Eigen::Index>(n)) += w * patch.at(i, j, c);
            }
        }
    }
    return Jet(k, u, std::move(coeffs));
}

Jet bernstein_basis_jet(int degree_u, int degree_v, const Point2& u, int k) {
    require_in_domain(u, "bernstein_basis_jet");
    const auto& table = MultiIndexTable::get(2, k);
    const Eigen::MatrixXd du = bernstein::derivatives(degree_u, u[0], k);
    const Eigen::MatrixXd dv = bernstein::derivatives(degree_v, u[1], k);
    Eigen::MatrixXd coeffs((degree_u + 1) * (degree_v + 1), static_cast<Eigen::Index>(table.size()));
    for (std::size_t n = 0; n < table.size(); ++n) {
        const int a = table[n][0];
        const int b = table[n][1];
        const double inv_fact = 1.0 / (bernstein::factorial(a) * bernstein::factorial(b));
        for (int i = 0; i <= degree_u; ++i)
            for (int j = 0; j <= degree_v; ++j)
                coeffs(i * (degree_v + 1) + j, static_cast<Eigen::Index>(n)) = du(a, i) * dv(b, j) * inv_fact;
    }
    return Jet(k, u, std::move(coeffs));
}

} // namespace isogk
