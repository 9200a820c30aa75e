#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Complex = std::complex<double>;

// Faddeev-LeVerrier: coefficients c[0..n] of det(lambda I - A), c[n] = 1.
inline std::vector<Complex> characteristic_polynomial(const Eigen::MatrixXcd& a) {
    const Eigen::Index n = a.rows();
    std::vector<Complex> c(static_cast<std::size_t>(n + 1));
    c[static_cast<std::size_t>(n)] = 1.0;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
    for (Eigen::Index k = 1; k <= n; ++k) {
        m = a * m + c[static_cast<std::size_t>(n - k + 1)] * id;
        c[static_cast<std::size_t>(n - k)] = -(a * m).trace() / static_cast<double>(k);
    }
    return c;
}

inline Complex horner(const std::vector<Complex>& c, Complex z) {
    Complex v = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * z + *it;
    return v;
}

// Aberth-Ehrlich simultaneous iteration on a monic polynomial.
inline std::vector<Complex> polynomial_roots(const std::vector<Complex>& c) {
    const std::size_t n = c.size() - 1;
    std::vector<Complex> d(n);
    for (std::size_t i = 1; i <= n; ++i) d[i - 1] = static_cast<double>(i) * c[i];
    double bound = 0.0;
    for (std::size_t i = 0; i < n; ++i) bound = std::max(bound, std::abs(c[i]));
    bound += 1.0;
    std::vector<Complex> z(n);
    for (std::size_t i = 0; i < n; ++i)
        z[i] = std::polar(0.5 * bound, 2.0 * M_PI * (static_cast<double>(i) + 0.25) / static_cast<double>(n) + 0.4);
    for (int it = 0; it < 2000; ++it) {
        double change = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const Complex ratio = horner(c, z[i]) / horner(d, z[i]);
            Complex sum = 0.0;
            for (std::size_t j = 0; j < n; ++j)
                if (j != i) sum += 1.0 / (z[i] - z[j]);
            const Complex step = ratio / (1.0 - ratio * sum);
            z[i] -= step;
            change = std::max(change, std::abs(step) / std::max(1.0, std::abs(z[i])));
        }
        if (change < 1e-15) break;
    }
    return z;
}

inline double root_spectral_radius(const Eigen::MatrixXcd& a) {
    double r = 0.0;
    for (const auto& z : polynomial_roots(characteristic_polynomial(a))) r = std::max(r, std::abs(z));
    return r;
}

inline std::vector<Complex> eigenvalues_2x2(const Eigen::MatrixXcd& a) {
    const Complex tr = a(0, 0) + a(1, 1);
    const Complex det = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
    const Complex disc = std::sqrt(tr * tr / 4.0 - det);
    return {tr / 2.0 + disc, tr / 2.0 - disc};
}

}  // namespace oracle
