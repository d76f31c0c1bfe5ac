#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>

namespace isogk {

/// Seeded draws that are bit-identical across standard libraries: the 64-bit
/// Mersenne Twister is fully specified, and doubles are formed from its top
/// 53 bits instead of going through std::uniform_real_distribution.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    int integer(int lo, int hi) { return lo + static_cast<int>(uniform() * (hi - lo + 1)); }

    Eigen::VectorXd vector(Eigen::Index n, double lo = -1.0, double hi = 1.0) {
        Eigen::VectorXd v(n);
        for (Eigen::Index i = 0; i < n; ++i) v[i] = uniform(lo, hi);
        return v;
    }

private:
    std::mt19937_64 engine_;
};

} // namespace isogk
