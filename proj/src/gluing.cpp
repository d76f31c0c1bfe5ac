#include "isogk/gluing.hpp"

#include "isogk/bernstein.hpp"
#include "isogk/error.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

namespace isogk {

namespace {

Jet affine_chart_jet(const EdgeChart& chart, const Point2& local, int k) {
    return Jet::affine(k, local, chart(local[0], local[1]), chart.linear);
}

Jet inverse_chart_jet(const EdgeChart& chart, const Point2& u, int k) {
    const Eigen::Matrix2d inv = chart.linear.inverse();
    return Jet::affine(k, u, inv * (u - chart.origin), inv);
}

// The chart linear parts are signed permutations, so the inverse is exact.
Point2 to_local(const EdgeChart& chart, const Point2& u) {
    return chart.linear.transpose() * (u - chart.origin);
}

bool is_u_edge(EdgeId e) { return e == EdgeId::U0 || e == EdgeId::U1; }

// Control index (i, j) of local normal row r and along-edge position l.
std::pair<int, int> local_to_control(EdgeId edge, int degree_u, int degree_v, int r, int l) {
    switch (edge) {
    case EdgeId::U0: return {r, l};
    case EdgeId::U1: return {degree_u - r, l};
    case EdgeId::V0: return {l, r};
    case EdgeId::V1: return {l, degree_v - r};
    }
    return {0, 0};
}

} // namespace

void Reparameterization::validate() const {
    if (shear_coeffs.size() > 3) throw ContractError("Reparameterization: shear polynomial degree exceeds 2");
    for (double c : shear_coeffs)
        if (!std::isfinite(c)) throw ContractError("Reparameterization: non-finite shear coefficient");
    if (!std::isfinite(normal_scale) || normal_scale == 0.0)
        throw ContractError("Reparameterization: normal scale must be finite and nonzero");
}

double Reparameterization::shear(double s) const {
    double out = 0.0;
    for (auto it = shear_coeffs.rbegin(); it != shear_coeffs.rend(); ++it) out = out * s + *it;
    return out;
}

int Reparameterization::shear_degree() const {
    for (int i = static_cast<int>(shear_coeffs.size()) - 1; i > 0; --i)
        if (shear_coeffs[static_cast<std::size_t>(i)] != 0.0) return i;
    return 0;
}

Point2 Reparameterization::map(const Point2& u) const {
    const Point2 local = to_local(edge_chart(edge_from), u);
    const double t = local[0];
    const double s = local[1];
    return edge_chart(edge_to)(-normal_scale * t, s + shear(s) * t);
}

Jet Reparameterization::jet(const Point2& u, int k) const {
    validate();
    const EdgeChart from = edge_chart(edge_from);
    const EdgeChart to = edge_chart(edge_to);
    const Point2 local = to_local(from, u);
    const double t0 = local[0];
    const double s0 = local[1];

    // Taylor coefficients b_m = beta^(m)(s0) / m!.
    std::vector<double> b(static_cast<std::size_t>(k) + 1, 0.0);
    for (int m = 0; m <= k; ++m)
        for (std::size_t i = static_cast<std::size_t>(m); i < shear_coeffs.size(); ++i)
            b[static_cast<std::size_t>(m)] +=
                shear_coeffs[i] * bernstein::binomial(static_cast<int>(i), m) * std::pow(s0, static_cast<int>(i) - m);

    const auto& table = MultiIndexTable::get(2, k);
    Eigen::MatrixXd coeffs = Eigen::MatrixXd::Zero(2, static_cast<Eigen::Index>(table.size()));
    coeffs(0, 0) = -normal_scale * t0;
    if (k >= 1) coeffs(0, table.position({1, 0})) = -normal_scale;
    coeffs(1, 0) = s0 + t0 * b[0];
    for (int m = 1; m <= k; ++m) coeffs(1, table.position({0, m})) = (m == 1 ? 1.0 : 0.0) + t0 * b[static_cast<std::size_t>(m)];
    for (int m = 0; m + 1 <= k; ++m) coeffs(1, table.position({1, m})) = b[static_cast<std::size_t>(m)];
    const Jet local_rho(k, local, std::move(coeffs));

    const Jet inner = jet_compose(local_rho, inverse_chart_jet(from, u, k));
    return jet_compose(affine_chart_jet(to, Point2(local_rho.value()), k), inner);
}

Reparameterization standard_repar(int n) {
    if (n < 3) throw ContractError("standard_repar: need n >= 3 patches, got " + std::to_string(n));
    // cos(2 pi / 4) must be exactly zero so the regular case has no shear at all.
    const double c = (n == 4) ? 0.0 : std::cos(2.0 * std::numbers::pi / n);
    Reparameterization rho;
    rho.edge_from = EdgeId::U0;
    rho.edge_to = EdgeId::V0;
    rho.shear_coeffs = (n == 4) ? std::vector<double>{0.0, 0.0} : std::vector<double>{2.0 * c, -2.0 * c};
    rho.normal_scale = 1.0;
    return rho;
}

ReparInvariants check_repar_invariants(const Reparameterization& rho, int n_samples) {
    rho.validate();
    ReparInvariants out;
    out.min_abs_det = std::numeric_limits<double>::infinity();
    out.orientation_ok = true;
    const EdgeChart from = edge_chart(rho.edge_from);
    const EdgeChart to = edge_chart(rho.edge_to);
    for (double s : uniform_samples(n_samples)) {
        const Point2 u = edge_point(rho.edge_from, s);
        out.max_edge_deviation = std::max(out.max_edge_deviation, (rho.map(u) - edge_point(rho.edge_to, s)).norm());
        out.min_abs_det = std::min(out.min_abs_det, std::abs(rho.jet(u, 1).jacobian().determinant()));
        const Point2 inside = from(1e-3, s);
        const Point2 landed = to_local(to, rho.map(inside));
        if (!(landed[0] < 0.0)) out.orientation_ok = false;
    }
    return out;
}

SmoothnessReport SmoothnessReport::from_samples(int k, std::vector<double> params, std::vector<double> mismatch,
                                                double tolerance) {
    SmoothnessReport r;
    r.k = k;
    r.sample_params = std::move(params);
    r.per_sample_mismatch = std::move(mismatch);
    r.max_mismatch = r.per_sample_mismatch.empty()
                         ? 0.0
                         : *std::max_element(r.per_sample_mismatch.begin(), r.per_sample_mismatch.end());
    r.tolerance = tolerance;
    r.pass = r.max_mismatch < tolerance;
    return r;
}

std::string report_summary(const SmoothnessReport& report) {
    std::ostringstream os;
    os << std::setprecision(17);
    os << "k=" << report.k << " samples=" << report.sample_params.size() << " max_mismatch=" << report.max_mismatch
       << " tolerance=" << report.tolerance << " verdict=" << (report.pass ? "pass" : "fail");
    if (report.min_abs_det_jacobian) os << " min_abs_det_jacobian=" << *report.min_abs_det_jacobian;
    if (report.halving_ratio) os << " halving_ratio=" << *report.halving_ratio;
    if (report.step) os << " step=" << *report.step;
    if (report.premise_holds) os << " premise=" << (*report.premise_holds ? "holds" : "violated");
    return os.str();
}

void write_report_csv(std::ostream& out, const SmoothnessReport& report) {
    out << "s,mismatch\n" << std::setprecision(17);
    for (std::size_t i = 0; i < report.sample_params.size(); ++i)
        out << report.sample_params[i] << ',' << report.per_sample_mismatch[i] << '\n';
    out << "# " << report_summary(report) << '\n';
}

std::vector<double> uniform_samples(int n_samples) {
    if (n_samples < 1) throw ContractError("need at least one sample");
    if (n_samples == 1) return {0.5};
    std::vector<double> s(static_cast<std::size_t>(n_samples));
    for (int i = 0; i < n_samples; ++i) s[static_cast<std::size_t>(i)] = static_cast<double>(i) / (n_samples - 1);
    return s;
}

SmoothnessReport check_gk(const TensorPatch& f1, const TensorPatch& f2, const Reparameterization& rho, int k,
                          int n_samples, double tol) {
    if (f1.out_dim() != f2.out_dim())
        throw ContractError("check_gk: output dimensions differ (" + std::to_string(f1.out_dim()) + " vs " +
                            std::to_string(f2.out_dim()) + ")");
    rho.validate();
    auto params = uniform_samples(n_samples);
    std::vector<double> mismatch;
    mismatch.reserve(params.size());
    for (double s : params) {
        const Point2 u1 = edge_point(rho.edge_from, s);
        const Jet rho_jet = rho.jet(u1, k);
        const Jet pulled = jet_compose(jet_extract(f2, Point2(rho_jet.value()), k), rho_jet);
        mismatch.push_back(jet_distance(jet_extract(f1, u1, k), pulled));
    }
    return SmoothnessReport::from_samples(k, std::move(params), std::move(mismatch), tol);
}

std::vector<std::pair<int, int>> constrained_control_points(EdgeId edge, int degree_u, int degree_v, int k) {
    const int along = is_u_edge(edge) ? degree_v : degree_u;
    std::vector<std::pair<int, int>> out;
    for (int r = 0; r <= k; ++r)
        for (int l = 0; l <= along; ++l) out.push_back(local_to_control(edge, degree_u, degree_v, r, l));
    return out;
}

TensorPatch enforce_gk(const TensorPatch& f2, const Reparameterization& rho, int k, const TensorPatch& free_data) {
    rho.validate();
    if (free_data.out_dim() != f2.out_dim()) throw ContractError("enforce_gk: output dimensions differ");
    if (k < 0 || k > kMaxJetOrder) throw UnsupportedOrderError("enforce_gk: unsupported order");
    const int deg_beta = rho.shear_degree();
    const int pu = free_data.degree_u();
    const int pv = free_data.degree_v();
    if (pu < f2.degree_u() + k * deg_beta || pv < f2.degree_v() + k * deg_beta)
        throw ContractError("enforce_gk: output bidegree (" + std::to_string(pu) + "," + std::to_string(pv) +
                            ") below the required (" + std::to_string(f2.degree_u() + k * deg_beta) + "," +
                            std::to_string(f2.degree_v() + k * deg_beta) + ")");

    const bool u_edge = is_u_edge(rho.edge_from);
    const int normal_degree = u_edge ? pu : pv;
    const int along_degree = u_edge ? pv : pu;
    const int f2_along = is_u_edge(rho.edge_to) ? f2.degree_v() : f2.degree_u();
    if (normal_degree < k) throw ContractError("enforce_gk: too few control rows across the edge for order k");
    if (along_degree < f2_along + k * std::max(deg_beta - 1, 0))
        throw ContractError("enforce_gk: along-edge degree too low to represent the jet rows");

    const EdgeChart chart = edge_chart(rho.edge_from);
    const auto sites = bernstein::chebyshev_sites(along_degree + 1);
    const auto& table = MultiIndexTable::get(2, k);
    const int d = f2.out_dim();

    // Taylor rows g_r(s) of f2 o rho in the (t, s) chart, sampled at the sites.
    std::vector<Eigen::MatrixXd> rows(static_cast<std::size_t>(k) + 1, Eigen::MatrixXd(along_degree + 1, d));
    for (int js = 0; js <= along_degree; ++js) {
        const double s = sites[static_cast<std::size_t>(js)];
        const Point2 u1 = chart(0.0, s);
        const Jet rho_jet = rho.jet(u1, k);
        const Jet pulled = jet_compose(jet_extract(f2, Point2(rho_jet.value()), k), rho_jet);
        const Jet local = jet_compose(pulled, affine_chart_jet(chart, Point2(0.0, s), k));
        for (int r = 0; r <= k; ++r)
            rows[static_cast<std::size_t>(r)].row(js) = local.coefficients().col(table.position({r, 0})).transpose();
    }

    // [t^r] B^N_i(t) = C(N,i) C(N-i, r-i) (-1)^(r-i); triangular in (r, i).
    std::vector<Eigen::MatrixXd> solved;
    for (int r = 0; r <= k; ++r) {
        Eigen::MatrixXd rhs = bernstein::interpolate(along_degree, sites, rows[static_cast<std::size_t>(r)]);
        for (int i = 0; i < r; ++i) {
            const double w = bernstein::binomial(normal_degree, i) * bernstein::binomial(normal_degree - i, r - i) *
                             (((r - i) % 2 == 0) ? 1.0 : -1.0);
            rhs -= w * solved[static_cast<std::size_t>(i)];
        }
        solved.push_back(rhs / bernstein::binomial(normal_degree, r));
    }

    TensorPatch f1 = free_data;
    for (int r = 0; r <= k; ++r)
        for (int l = 0; l <= along_degree; ++l) {
            const auto [i, j] = local_to_control(rho.edge_from, pu, pv, r, l);
            f1.set_control_point(i, j, solved[static_cast<std::size_t>(r)].row(l).transpose());
        }
    return f1;
}

} // namespace isogk
