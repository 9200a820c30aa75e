#include "cslfa/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#define LAPACK_COMPLEX_CPP
#include <lapacke.h>

#include "cslfa/errors.hpp"

namespace cslfa {

namespace {

void check_input(const CMatrix& m) {
    if (m.rows() != m.cols())
        throw DimensionError("eigenvalues: matrix is " + std::to_string(m.rows()) + "x" +
                             std::to_string(m.cols()) + ", expected square");
    if (m.rows() > kMaxEigenDimension)
        throw DimensionError("eigenvalues: dimension " + std::to_string(m.rows()) +
                             " exceeds " + std::to_string(kMaxEigenDimension));
    if (!all_finite(m)) throw InputError("eigenvalues: non-finite entry");
}

struct Workspace {
    lapack_int n = -1;
    CMatrix a;
    std::vector<lapack_complex_double> w, work;
    std::vector<double> rwork;
};

bool lapack_eigenvalues(const CMatrix& m, std::vector<Complex>& out) {
    thread_local Workspace ws;
    const auto n = static_cast<lapack_int>(m.rows());
    if (ws.n != n) {
        ws.n = n;
        ws.w.resize(static_cast<std::size_t>(n));
        ws.rwork.resize(static_cast<std::size_t>(2 * n));
        lapack_complex_double query;
        ws.a = m;
        if (LAPACKE_zgeev_work(LAPACK_COL_MAJOR, 'N', 'N', n, reinterpret_cast<lapack_complex_double*>(ws.a.data()),
                               n, ws.w.data(), nullptr, 1, nullptr, 1, &query, -1, ws.rwork.data()) != 0) {
            ws.n = -1;
            return false;
        }
        ws.work.resize(static_cast<std::size_t>(std::max(1.0, reinterpret_cast<Complex&>(query).real())));
    }
    ws.a = m;
    const lapack_int info = LAPACKE_zgeev_work(
        LAPACK_COL_MAJOR, 'N', 'N', n, reinterpret_cast<lapack_complex_double*>(ws.a.data()), n, ws.w.data(),
        nullptr, 1, nullptr, 1, ws.work.data(), static_cast<lapack_int>(ws.work.size()), ws.rwork.data());
    if (info != 0) return false;
    out.resize(static_cast<std::size_t>(n));
    for (lapack_int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = reinterpret_cast<const Complex&>(ws.w[static_cast<std::size_t>(i)]);
    return true;
}

}  // namespace

bool all_finite(const CMatrix& m) {
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
    return true;
}

Spectrum eigenvalues(const CMatrix& m) {
    check_input(m);
    Spectrum s;
    if (m.rows() == 0) return s;
    if (m.rows() == 1) {
        s.eigenvalues = {m(0, 0)};
        s.radius = std::abs(m(0, 0));
        return s;
    }
    if (!lapack_eigenvalues(m, s.eigenvalues)) {
        Eigen::ComplexEigenSolver<CMatrix> solver(m, false);
        if (solver.info() != Eigen::Success) throw InputError("eigenvalues: QR iteration failed");
        const auto& ev = solver.eigenvalues();
        s.eigenvalues.assign(ev.data(), ev.data() + ev.size());
    }
    for (const auto& z : s.eigenvalues) s.radius = std::max(s.radius, std::abs(z));
    return s;
}

double spectral_radius(const CMatrix& m) { return eigenvalues(m).radius; }

CMatrix matrix_power(const CMatrix& m, int p) {
    if (m.rows() != m.cols()) throw DimensionError("matrix_power: non-square input");
    if (p < 0) throw InputError("matrix_power: negative exponent");
    CMatrix result = CMatrix::Identity(m.rows(), m.cols());
    CMatrix base = m;
    while (p > 0) {
        if (p & 1) result = result * base;
        p >>= 1;
        if (p > 0) base = base * base;
    }
    return result;
}

}  // namespace cslfa
