#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "slicebound/bodies.hpp"
#include "slicebound/decomp.hpp"

namespace testutil {

inline constexpr double kPi = 3.14159265358979323846;

/// Composite Simpson rule with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
    if (n % 2) ++n;
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return s * h / 3.0;
}

/// Simpson on consecutive panels of width w, each with n subpanels.
inline double simpson_panels(const std::function<double(double)>& f, double a, double b, double w, int n) {
    double s = 0.0;
    for (double x = a; x < b; x += w) s += simpson(f, x, std::min(x + w, b), n);
    return s;
}

/// Gram-Schmidt on the rows of a random Gaussian matrix, written out by hand.
inline slicebound::Matrix gaussian_orthonormal_rows(int k, int n, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    slicebound::Matrix m(k, n);
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < n; ++j) m(i, j) = g(rng);
        for (int l = 0; l < i; ++l) m.row(i) -= m.row(i).dot(m.row(l)) * m.row(l);
        m.row(i).normalize();
    }
    return m;
}

/// Orthogonal n x n matrix from Gram-Schmidt.
inline slicebound::Matrix gaussian_rotation(int n, std::mt19937_64& rng) { return gaussian_orthonormal_rows(n, n, rng); }

/// Distinct random coordinate indices.
inline std::vector<int> random_coordinates(int n, int k, std::mt19937_64& rng) {
    std::vector<int> idx(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i;
    std::shuffle(idx.begin(), idx.end(), rng);
    idx.resize(static_cast<std::size_t>(k));
    return idx;
}

}  // namespace testutil
