#include "cslfa/multigrid.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "cslfa/errors.hpp"

namespace cslfa {

namespace {

constexpr double kWeights[3] = {0.25, 0.5, 0.25};

void check_shape(const GridShape& s, const char* where) {
    if ((s.dimension != 1 && s.dimension != 2) || s.intervals < 2)
        throw DimensionError(std::string(where) + ": invalid grid shape");
}

void check_size(const GridShape& s, const CVector& v, const char* where) {
    if (v.size() != s.size()) throw DimensionError(std::string(where) + ": grid size mismatch");
}

}  // namespace

Eigen::Index GridShape::size() const {
    const Eigen::Index n = interior();
    return dimension == 1 ? n : n * n;
}

GridFunction::GridFunction(const GridShape& s, CVector v) : shape(s), values(std::move(v)) {
    check_size(shape, values, "GridFunction");
}

Complex inner_product(const GridFunction& u, const GridFunction& v) {
    if (!(u.shape == v.shape)) throw DimensionError("inner_product: geometry mismatch");
    return std::pow(u.shape.mesh_width(), u.shape.dimension) * u.values.dot(v.values);
}

Complex HelmholtzOperator::diagonal() const {
    const double h = shape.mesh_width();
    return 2.0 * shape.dimension / (h * h) + sigma_tilde;
}

void apply_operator(const HelmholtzOperator& op, const CVector& u, CVector& out) {
    check_shape(op.shape, "apply_operator");
    check_size(op.shape, u, "apply_operator");
    out.resize(u.size());
    const double h = op.shape.mesh_width();
    const double ih2 = 1.0 / (h * h);
    const Complex diag = op.diagonal();
    const int n = op.shape.interior();
    if (op.shape.dimension == 1) {
        for (int i = 0; i < n; ++i) {
            Complex nb = 0.0;
            if (i > 0) nb += u[i - 1];
            if (i + 1 < n) nb += u[i + 1];
            out[i] = diag * u[i] - ih2 * nb;
        }
        return;
    }
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const Eigen::Index k = i + static_cast<Eigen::Index>(j) * n;
            Complex nb = 0.0;
            if (i > 0) nb += u[k - 1];
            if (i + 1 < n) nb += u[k + 1];
            if (j > 0) nb += u[k - n];
            if (j + 1 < n) nb += u[k + n];
            out[k] = diag * u[k] - ih2 * nb;
        }
    }
}

GridFunction apply_operator(const HelmholtzOperator& op, const GridFunction& u) {
    if (!(op.shape == u.shape)) throw DimensionError("apply_operator: geometry mismatch");
    GridFunction out(u.shape);
    apply_operator(op, u.values, out.values);
    return out;
}

void smooth_in_place(const HelmholtzOperator& op, CVector& u, const CVector& rhs, const SmootherSpec& s,
                     CVector& scratch) {
    check_size(op.shape, rhs, "smooth");
    const double h = op.shape.mesh_width();
    const Complex diag = op.diagonal();
    if (std::abs(diag) * h * h < kResonanceThreshold) throw ResonanceError("smooth: vanishing diagonal");
    if (s.kind == SmootherKind::Jacobi) {
        apply_operator(op, u, scratch);
        u += (s.omega / diag) * (rhs - scratch);
        return;
    }
    if (op.shape.dimension != 1) throw InputError("smooth: Gauss-Seidel is one-dimensional only");
    const double ih2 = 1.0 / (h * h);
    const int n = op.shape.interior();
    for (int i = 0; i < n; ++i) {
        Complex nb = 0.0;
        if (i > 0) nb += u[i - 1];
        if (i + 1 < n) nb += u[i + 1];
        u[i] = (rhs[i] + ih2 * nb) / diag;
    }
}

GridFunction smooth(const HelmholtzOperator& op, const GridFunction& u, const GridFunction& rhs,
                    const SmootherSpec& s) {
    if (!(op.shape == u.shape) || !(u.shape == rhs.shape)) throw DimensionError("smooth: geometry mismatch");
    GridFunction out = u;
    CVector scratch(u.values.size());
    smooth_in_place(op, out.values, rhs.values, s, scratch);
    return out;
}

void restrict_into(const GridShape& fine, const CVector& in, CVector& out) {
    check_size(fine, in, "restrict");
    if (fine.intervals < 4 || fine.intervals % 2 != 0) throw DimensionError("restrict: grid too coarse");
    const GridShape coarse = fine.coarser();
    const int nf = fine.interior();
    const int nc = coarse.interior();
    out.resize(coarse.size());
    if (fine.dimension == 1) {
        for (int c = 0; c < nc; ++c)
            out[c] = kWeights[0] * in[2 * c] + kWeights[1] * in[2 * c + 1] + kWeights[2] * in[2 * c + 2];
        return;
    }
    for (int cj = 0; cj < nc; ++cj) {
        for (int ci = 0; ci < nc; ++ci) {
            Complex acc = 0.0;
            for (int b = 0; b < 3; ++b) {
                const Eigen::Index row = static_cast<Eigen::Index>(2 * cj + b) * nf;
                for (int a = 0; a < 3; ++a) acc += kWeights[a] * kWeights[b] * in[row + 2 * ci + a];
            }
            out[ci + static_cast<Eigen::Index>(cj) * nc] = acc;
        }
    }
}

void prolong_add(const GridShape& coarse, const CVector& in, CVector& out) {
    check_size(coarse, in, "prolong");
    const GridShape fine{coarse.dimension, coarse.intervals * 2};
    check_size(fine, out, "prolong");
    const int nf = fine.interior();
    const int nc = coarse.interior();
    if (coarse.dimension == 1) {
        for (int c = 0; c < nc; ++c) {
            const Complex v = in[c];
            out[2 * c] += 0.5 * v;
            out[2 * c + 1] += v;
            out[2 * c + 2] += 0.5 * v;
        }
        return;
    }
    for (int cj = 0; cj < nc; ++cj) {
        for (int ci = 0; ci < nc; ++ci) {
            const Complex v = in[ci + static_cast<Eigen::Index>(cj) * nc];
            for (int b = 0; b < 3; ++b) {
                const Eigen::Index row = static_cast<Eigen::Index>(2 * cj + b) * nf;
                for (int a = 0; a < 3; ++a) out[row + 2 * ci + a] += 4.0 * kWeights[a] * kWeights[b] * v;
            }
        }
    }
}

GridFunction restrict_full_weighting(const GridFunction& fine) {
    GridFunction out(fine.shape.coarser());
    restrict_into(fine.shape, fine.values, out.values);
    return out;
}

GridFunction prolong_linear(const GridFunction& coarse) {
    GridFunction out(GridShape{coarse.shape.dimension, coarse.shape.intervals * 2});
    prolong_add(coarse.shape, coarse.values, out.values);
    return out;
}

CMatrix dense_operator(const HelmholtzOperator& op) {
    check_shape(op.shape, "dense_operator");
    const Eigen::Index m = op.shape.size();
    const double h = op.shape.mesh_width();
    const double ih2 = 1.0 / (h * h);
    const int n = op.shape.interior();
    CMatrix a = CMatrix::Zero(m, m);
    for (Eigen::Index k = 0; k < m; ++k) a(k, k) = op.diagonal();
    if (op.shape.dimension == 1) {
        for (int i = 0; i + 1 < n; ++i) a(i, i + 1) = a(i + 1, i) = -ih2;
        return a;
    }
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const Eigen::Index k = i + static_cast<Eigen::Index>(j) * n;
            if (i + 1 < n) a(k, k + 1) = a(k + 1, k) = -ih2;
            if (j + 1 < n) a(k, k + n) = a(k + n, k) = -ih2;
        }
    }
    return a;
}

int CycleSpec::resolved_levels(const GridShape& finest) const {
    if (levels > 0) return levels;
    int k = 1;
    int n = finest.intervals;
    while (n % 2 == 0 && n / 2 >= 4) {
        n /= 2;
        ++k;
    }
    return k;
}

void CycleSpec::validate(const GridShape& finest) const {
    if (finest.dimension != 1 && finest.dimension != 2) throw InputError("cycle: dimension must be 1 or 2");
    if (finest.intervals < 4 || (finest.intervals & (finest.intervals - 1)) != 0)
        throw InputError("cycle: N must be a power of two >= 4");
    if (levels != 0 && levels < 2) throw InputError("cycle: levels must be >= 2 (or 0 for full depth)");
    if (nu1 < 0 || nu2 < 0 || nu1 + nu2 < 1) throw InputError("cycle: need nu1+nu2 >= 1");
    if (smoother.kind == SmootherKind::GaussSeidel && finest.dimension != 1)
        throw InputError("cycle: Gauss-Seidel smoother is one-dimensional only");
    const int k = resolved_levels(finest);
    if ((finest.intervals >> (k - 1)) < 4)
        throw InputError("cycle: coarsest grid needs at least three interior points per dimension");
}

MultigridCycle::MultigridCycle(const GridShape& finest, Complex sigma_tilde, const CycleSpec& spec)
    : spec_(spec) {
    spec.validate(finest);
    const int k = spec.resolved_levels(finest);
    GridShape s = finest;
    for (int l = 0; l < k; ++l) {
        Level lv;
        lv.op = HelmholtzOperator{s, sigma_tilde};
        lv.u = CVector::Zero(s.size());
        lv.f = CVector::Zero(s.size());
        lv.r = CVector::Zero(s.size());
        lv.scratch = CVector::Zero(s.size());
        if (l + 1 < k) {
            const double h = s.mesh_width();
            if (std::abs(lv.op.diagonal()) * h * h < kResonanceThreshold)
                throw ResonanceError("cycle: smoother diagonal vanishes on level " + std::to_string(l + 1));
        }
        levels_.push_back(std::move(lv));
        s = s.coarser();
    }
    if (levels_.back().op.shape.size() > kMaxCoarsestUnknowns)
        throw InputError("cycle: coarsest grid too large for a dense solve; add levels");
    coarse_lu_.compute(dense_operator(levels_.back().op));
}

void MultigridCycle::apply(CVector& u, const CVector& rhs) {
    check_size(levels_.front().op.shape, u, "cycle");
    check_size(levels_.front().op.shape, rhs, "cycle");
    cycle(0, u, rhs);
}

void MultigridCycle::cycle(std::size_t l, CVector& u, const CVector& f) {
    Level& lv = levels_[l];
    if (l + 1 == levels_.size()) {
        u = coarse_lu_.solve(f);
        return;
    }
    for (int i = 0; i < spec_.nu1; ++i) smooth_in_place(lv.op, u, f, spec_.smoother, lv.scratch);
    apply_operator(lv.op, u, lv.r);
    lv.r = f - lv.r;
    Level& next = levels_[l + 1];
    restrict_into(lv.op.shape, lv.r, next.f);
    next.u.setZero();
    cycle(l + 1, next.u, next.f);
    prolong_add(next.op.shape, next.u, u);
    for (int i = 0; i < spec_.nu2; ++i) smooth_in_place(lv.op, u, f, spec_.smoother, lv.scratch);
}

GridFunction kgrid_cycle(MultigridCycle& cycle, GridFunction u0, const GridFunction& rhs) {
    cycle.apply(u0, rhs);
    return u0;
}

double asymptotic_factor(const HelmholtzProblem& problem, const CycleSpec& spec, double beta,
                         const FactorOptions& opt) {
    if (opt.iterations < 20) throw InputError("asymptotic_factor: need at least 20 iterations");
    const GridShape shape = problem.shape();
    MultigridCycle cyc(shape, ShiftedWavenumber{problem.sigma, beta}.tilde(), spec);
    std::mt19937_64 rng(opt.seed);
    std::normal_distribution<double> normal;
    CVector e(shape.size());
    for (Eigen::Index i = 0; i < e.size(); ++i) e[i] = Complex(normal(rng), normal(rng));
    e /= e.norm();
    const CVector zero = CVector::Zero(shape.size());
    const int tail = std::max(1, opt.iterations / 4);
    double log_sum = 0.0;
    for (int it = 0; it < opt.iterations; ++it) {
        cyc.apply(e, zero);
        const double r = e.norm();
        if (!std::isfinite(r)) return std::numeric_limits<double>::infinity();
        if (r == 0.0) return 0.0;
        if (it >= opt.iterations - tail) log_sum += std::log(r);
        e /= r;
    }
    return std::exp(log_sum / tail);
}

double experimental_beta_min(const HelmholtzProblem& problem, const CycleSpec& spec,
                             const ExperimentalOptions& opt) {
    if (!(problem.sigma < 0.0)) throw InputError("experimental_beta_min: sigma must be negative");
    return bisect_shift(
        [&](double b) { return asymptotic_factor(problem, spec, b, opt.factor) <= 1.0 + opt.tolerance; },
        opt.bisection);
}

}  // namespace cslfa
