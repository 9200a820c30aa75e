#pragma once

#include <complex>

#include <Eigen/Dense>

namespace oracle {

// Dense finite-grid matrices on the unit interval/square with Dirichlet
// boundaries, lexicographic ordering (x fastest).
inline Eigen::MatrixXcd dense_laplace_1d(int n) {
    const int m = n - 1;
    const double ih2 = static_cast<double>(n) * n;
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
        a(i, i) = 2.0 * ih2;
        if (i > 0) a(i, i - 1) = -ih2;
        if (i + 1 < m) a(i, i + 1) = -ih2;
    }
    return a;
}

inline Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    Eigen::MatrixXcd k(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j) k.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return k;
}

inline Eigen::MatrixXcd dense_helmholtz(int dim, int n, std::complex<double> st) {
    const Eigen::MatrixXcd l = dense_laplace_1d(n);
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n - 1, n - 1);
    Eigen::MatrixXcd a = dim == 1 ? l : Eigen::MatrixXcd(kron(id, l) + kron(l, id));
    a += st * Eigen::MatrixXcd::Identity(a.rows(), a.cols());
    return a;
}

inline Eigen::MatrixXcd dense_restriction_1d(int n) {
    const int mf = n - 1, mc = n / 2 - 1;
    Eigen::MatrixXcd r = Eigen::MatrixXcd::Zero(mc, mf);
    for (int j = 0; j < mc; ++j) {
        r(j, 2 * j) = 0.25;
        r(j, 2 * j + 1) = 0.5;
        r(j, 2 * j + 2) = 0.25;
    }
    return r;
}

inline Eigen::MatrixXcd dense_restriction(int dim, int n) {
    const Eigen::MatrixXcd r = dense_restriction_1d(n);
    return dim == 1 ? r : kron(r, r);
}

inline Eigen::MatrixXcd dense_prolongation(int dim, int n) {
    return (dim == 1 ? 2.0 : 4.0) * dense_restriction(dim, n).transpose();
}

inline Eigen::MatrixXcd dense_jacobi(const Eigen::MatrixXcd& a, double omega) {
    Eigen::MatrixXcd s = Eigen::MatrixXcd::Identity(a.rows(), a.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) s.row(i) -= omega / a(i, i) * a.row(i);
    return s;
}

// Error propagation of a k-level V-cycle with an exact coarsest solve.
inline Eigen::MatrixXcd dense_cycle(int dim, int n, std::complex<double> st, int levels, int nu1, int nu2,
                                    double omega) {
    const Eigen::MatrixXcd a = dense_helmholtz(dim, n, st);
    if (levels == 1) return Eigen::MatrixXcd::Zero(a.rows(), a.cols());
    const Eigen::MatrixXcd s = dense_jacobi(a, omega);
    const Eigen::MatrixXcd r = dense_restriction(dim, n);
    const Eigen::MatrixXcd p = dense_prolongation(dim, n);
    const Eigen::MatrixXcd ac = dense_helmholtz(dim, n / 2, st);
    const Eigen::MatrixXcd mc = dense_cycle(dim, n / 2, st, levels - 1, nu1, nu2, omega);
    const Eigen::MatrixXcd id_c = Eigen::MatrixXcd::Identity(ac.rows(), ac.cols());
    const Eigen::MatrixXcd corr = p * (id_c - mc) * ac.partialPivLu().solve(r * a);
    Eigen::MatrixXcd pre = Eigen::MatrixXcd::Identity(a.rows(), a.cols()), post = pre;
    for (int i = 0; i < nu1; ++i) pre = s * pre;
    for (int i = 0; i < nu2; ++i) post = s * post;
    return post * (Eigen::MatrixXcd::Identity(a.rows(), a.cols()) - corr) * pre;
}

}  // namespace oracle
