#pragma once

#include <cmath>
#include <random>

#include "bcspec/algebra.hpp"

namespace bcspec::testing {

// eta uniform in [0, pi), m uniform on S^3.
inline BoundaryParams random_params(std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    std::uniform_real_distribution<double> u(0.0, kPi);
    double m[4];
    double n = 0.0;
    for (double& v : m) {
        v = g(rng);
        n += v * v;
    }
    n = std::sqrt(n);
    return BoundaryParams::make(u(rng), m[0] / n, m[1] / n, m[2] / n, m[3] / n);
}

inline Unitary2 random_unitary(std::mt19937_64& rng) { return from_params(random_params(rng)); }

inline double max_entry_dev(const Mat2& a, const Mat2& b) {
    return std::max({std::abs(a.e11 - b.e11), std::abs(a.e12 - b.e12), std::abs(a.e21 - b.e21),
                     std::abs(a.e22 - b.e22)});
}

} // namespace bcspec::testing
