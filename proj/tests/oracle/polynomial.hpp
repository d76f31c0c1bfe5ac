#pragma once

// Symbolic bivariate polynomials in floating point. Test-only oracle for the
// jet engine: composition and Taylor shifts expand products term by term and
// never go through jets.

#include "isogk/jet.hpp"
#include "isogk/random.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>
#include <vector>

namespace oracle {

using Exponent = std::pair<int, int>;

struct Poly {
    std::map<Exponent, double> terms;

    static Poly constant(double c) {
        Poly p;
        p.terms[{0, 0}] = c;
        return p;
    }
    static Poly variable(int which, double shift = 0.0) {
        Poly p;
        p.terms[which == 0 ? Exponent{1, 0} : Exponent{0, 1}] = 1.0;
        if (shift != 0.0) p.terms[{0, 0}] = shift;
        return p;
    }

    int degree() const {
        int d = 0;
        for (const auto& [e, c] : terms) d = std::max(d, e.first + e.second);
        return d;
    }

    double eval(double x, double y) const {
        double out = 0.0;
        for (const auto& [e, c] : terms) out += c * std::pow(x, e.first) * std::pow(y, e.second);
        return out;
    }

    Poly operator+(const Poly& o) const {
        Poly r = *this;
        for (const auto& [e, c] : o.terms) r.terms[e] += c;
        return r;
    }
    Poly operator*(const Poly& o) const {
        Poly r;
        for (const auto& [a, ca] : terms)
            for (const auto& [b, cb] : o.terms) r.terms[{a.first + b.first, a.second + b.second}] += ca * cb;
        return r;
    }
    Poly scaled(double s) const {
        Poly r = *this;
        for (auto& [e, c] : r.terms) c *= s;
        return r;
    }
};

inline Poly power(const Poly& p, int n) {
    Poly r = Poly::constant(1.0);
    for (int i = 0; i < n; ++i) r = r * p;
    return r;
}

/// p(q0(x, y), q1(x, y)) by full expansion.
inline Poly compose(const Poly& p, const Poly& q0, const Poly& q1) {
    Poly r;
    for (const auto& [e, c] : p.terms) r = r + (power(q0, e.first) * power(q1, e.second)).scaled(c);
    return r;
}

using Map = std::vector<Poly>;

inline Map compose(const Map& outer, const Map& inner) {
    Map out;
    for (const auto& p : outer) out.push_back(compose(p, inner[0], inner[1]));
    return out;
}

/// k-jet of the polynomial map at (x0, y0): coefficients of p(x0 + a, y0 + b)
/// in a, b up to total degree k.
inline isogk::Jet jet_at(const Map& map, double x0, double y0, int k) {
    const auto& table = isogk::MultiIndexTable::get(2, k);
    Eigen::MatrixXd coeffs = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(map.size()),
                                                   static_cast<Eigen::Index>(table.size()));
    const Poly sx = Poly::variable(0, x0);
    const Poly sy = Poly::variable(1, y0);
    for (std::size_t c = 0; c < map.size(); ++c) {
        const Poly shifted = compose(map[c], sx, sy);
        for (const auto& [e, v] : shifted.terms) {
            if (e.first + e.second > k) continue;
            coeffs(static_cast<Eigen::Index>(c), table.position({e.first, e.second})) += v;
        }
    }
    return isogk::Jet(k, Eigen::Vector2d(x0, y0), coeffs);
}

inline Poly random_poly(isogk::Rng& rng, int degree) {
    Poly p;
    for (int i = 0; i <= degree; ++i)
        for (int j = 0; i + j <= degree; ++j) p.terms[{i, j}] = rng.uniform(-1.0, 1.0);
    return p;
}

inline Map random_map(isogk::Rng& rng, int degree) { return {random_poly(rng, degree), random_poly(rng, degree)}; }

} // namespace oracle
