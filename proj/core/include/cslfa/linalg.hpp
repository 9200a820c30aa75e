#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace cslfa {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

// Symbols with modulus below this are treated as poles.
inline constexpr double kResonanceThreshold = 1e-14;

struct Spectrum {
    std::vector<Complex> eigenvalues;
    double radius = 0.0;
};

// Throws DimensionError for non-square or oversized input, InputError for
// non-finite entries.
Spectrum eigenvalues(const CMatrix& m);
double spectral_radius(const CMatrix& m);

bool all_finite(const CMatrix& m);

// Integer matrix power by repeated squaring; p >= 0.
CMatrix matrix_power(const CMatrix& m, int p);

inline constexpr int kMaxEigenDimension = 256;

}  // namespace cslfa
