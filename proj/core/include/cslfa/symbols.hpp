#pragma once

#include <array>
#include <optional>

#include "cslfa/linalg.hpp"

namespace cslfa {

inline constexpr double kPi = 3.14159265358979323846;

// sigma_tilde = sigma * (1 + beta i); the real scaling of sigma is fixed at 1.
struct ShiftedWavenumber {
    double sigma = 0.0;
    double beta = 0.0;

    Complex tilde() const { return {sigma, sigma * beta}; }
    ShiftedWavenumber unshifted() const { return {sigma, 0.0}; }
};

struct Frequency {
    int dimension = 1;
    std::array<double, 2> theta{0.0, 0.0};

    static Frequency of(double t) { return {1, {t, 0.0}}; }
    static Frequency of(double t1, double t2) { return {2, {t1, t2}}; }
    double operator[](int i) const { return theta[static_cast<std::size_t>(i)]; }
};

// Maps an angle into (-pi, pi].
double wrap_angle(double t);

struct LevelGeometry {
    int level = 1;       // 1 = finest
    int intervals = 64;  // N on the finest level

    double mesh_width() const;  // 2^{level-1} / N
};

enum class SmootherKind { Jacobi, GaussSeidel };

struct SmootherSpec {
    SmootherKind kind = SmootherKind::Jacobi;
    double omega = 2.0 / 3.0;
};

struct SymbolSet {
    Complex a_tilde;
    Complex r_tilde;
    Complex p_tilde;
    std::optional<Complex> s_tilde;  // empty at a smoother resonance
};

Complex discretization_symbol(const Frequency& f, const LevelGeometry& g, const ShiftedWavenumber& sw);
Complex restriction_symbol(const Frequency& f, const LevelGeometry& g);
Complex interpolation_symbol(const Frequency& f, const LevelGeometry& g);
std::optional<Complex> jacobi_symbol(const Frequency& f, const LevelGeometry& g,
                                     const ShiftedWavenumber& sw, double omega);
// One-dimensional lexicographic Gauss-Seidel only.
std::optional<Complex> gauss_seidel_symbol(const Frequency& f, const LevelGeometry& g,
                                           const ShiftedWavenumber& sw);
std::optional<Complex> smoother_symbol(const Frequency& f, const LevelGeometry& g,
                                       const ShiftedWavenumber& sw, const SmootherSpec& s);

SymbolSet evaluate_symbols(const Frequency& f, const LevelGeometry& g, const ShiftedWavenumber& sw,
                           const SmootherSpec& s);

}  // namespace cslfa
