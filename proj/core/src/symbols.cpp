#include "cslfa/symbols.hpp"

#include <cmath>

#include "cslfa/errors.hpp"

namespace cslfa {

double wrap_angle(double t) {
    double r = std::remainder(t, 2.0 * kPi);
    if (r <= -kPi) r += 2.0 * kPi;
    return r;
}

double LevelGeometry::mesh_width() const {
    return std::ldexp(1.0, level - 1) / static_cast<double>(intervals);
}

Complex discretization_symbol(const Frequency& f, const LevelGeometry& g, const ShiftedWavenumber& sw) {
    const double h = g.mesh_width();
    const double ih2 = 1.0 / (h * h);
    double lap = 0.0;
    for (int i = 0; i < f.dimension; ++i) lap += 2.0 * ih2 * (1.0 - std::cos(f[i]));
    return lap + sw.tilde();
}

Complex restriction_symbol(const Frequency& f, const LevelGeometry&) {
    if (f.dimension == 1) return 0.5 * (std::cos(f[0]) + 1.0);
    const double c1 = std::cos(f[0]), c2 = std::cos(f[1]);
    return 0.25 * (c1 * c2 + c1 + c2 + 1.0);
}

Complex interpolation_symbol(const Frequency& f, const LevelGeometry& g) {
    return restriction_symbol(f, g);
}

std::optional<Complex> jacobi_symbol(const Frequency& f, const LevelGeometry& g,
                                     const ShiftedWavenumber& sw, double omega) {
    const double h = g.mesh_width();
    const double centre = 2.0 * f.dimension;
    const Complex diag = centre + sw.tilde() * (h * h);
    if (std::abs(diag) < kResonanceThreshold) return std::nullopt;
    double csum = 0.0;
    for (int i = 0; i < f.dimension; ++i) csum += std::cos(f[i]);
    return (1.0 - omega) + 2.0 * omega * csum / diag;
}

std::optional<Complex> gauss_seidel_symbol(const Frequency& f, const LevelGeometry& g,
                                           const ShiftedWavenumber& sw) {
    if (f.dimension != 1) throw DimensionError("gauss_seidel_symbol: only defined in 1D");
    const double h = g.mesh_width();
    const Complex denom = 2.0 + sw.tilde() * (h * h) - std::polar(1.0, -f[0]);
    if (std::abs(denom) < kResonanceThreshold) return std::nullopt;
    return std::polar(1.0, f[0]) / denom;
}

std::optional<Complex> smoother_symbol(const Frequency& f, const LevelGeometry& g,
                                       const ShiftedWavenumber& sw, const SmootherSpec& s) {
    if (s.kind == SmootherKind::GaussSeidel) return gauss_seidel_symbol(f, g, sw);
    return jacobi_symbol(f, g, sw, s.omega);
}

SymbolSet evaluate_symbols(const Frequency& f, const LevelGeometry& g, const ShiftedWavenumber& sw,
                           const SmootherSpec& s) {
    return {discretization_symbol(f, g, sw), restriction_symbol(f, g), interpolation_symbol(f, g),
            smoother_symbol(f, g, sw, s)};
}

}  // namespace cslfa
