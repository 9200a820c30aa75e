#include "cslfa/krylov.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <numeric>

#include "cslfa/errors.hpp"

namespace cslfa {

namespace {

constexpr double kBreakdown = 1e-30;

void apply_or_copy(const LinearMap& m, const CVector& in, CVector& out) {
    if (m)
        m(in, out);
    else
        out = in;
}

int resolved_cap(const KrylovSpec& spec, Eigen::Index n) {
    return spec.cap > 0 ? spec.cap : static_cast<int>(n);
}

struct Residuals {
    const LinearMap& a;
    const CVector& b;
    double true0;
    CVector scratch;

    double true_relative(const CVector& x) {
        a(x, scratch);
        return (b - scratch).norm() / true0;
    }
};

void record(SolveReport& rep, const KrylovSpec& spec, double prec, double tru) {
    rep.preconditioned_history.push_back(prec);
    rep.true_history.push_back(tru);
    rep.residual_history.push_back(spec.stopping == StoppingResidual::True ? tru : prec);
}

class Timer {
public:
    explicit Timer(double& sink) : sink_(sink), start_(std::chrono::steady_clock::now()) {}
    ~Timer() {
        sink_ = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    double& sink_;
    std::chrono::steady_clock::time_point start_;
};

}  // namespace

void KrylovSpec::validate() const {
    if (!(tolerance > 0.0 && tolerance < 1.0)) throw InputError("krylov: tolerance must lie in (0, 1)");
    if (cap < 0) throw InputError("krylov: cap must be >= 1 (or 0 for the number of unknowns)");
}

SolveReport gmres(const LinearMap& a, const LinearMap& precond, const CVector& b, const CVector& x0,
                  const KrylovSpec& spec) {
    spec.validate();
    SolveReport rep;
    Timer timer(rep.wall_seconds);
    const Eigen::Index n = b.size();
    const int cap = resolved_cap(spec, n);

    CVector tmp(n), w(n);
    a(x0, tmp);
    const CVector r0 = b - tmp;
    CVector z0(n);
    apply_or_copy(precond, r0, z0);
    const double beta = z0.norm();
    Residuals res{a, b, r0.norm(), CVector(n)};
    rep.solution = x0;
    record(rep, spec, 1.0, 1.0);
    if (beta == 0.0 || res.true0 == 0.0) {
        rep.converged = true;
        rep.final_residual = 0.0;
        return rep;
    }

    Eigen::Index chunk = std::min<Eigen::Index>(cap + 1, 64);
    CMatrix v(n, chunk);
    v.col(0) = z0 / beta;
    std::vector<CVector> rcols;
    std::vector<Complex> cs, sn;
    std::vector<Complex> g{Complex(beta, 0.0)};

    for (int j = 0; j < cap; ++j) {
        a(v.col(j), tmp);
        apply_or_copy(precond, tmp, w);
        auto basis = v.leftCols(j + 1);
        CVector h = basis.adjoint() * w;
        w.noalias() -= basis * h;
        const CVector h2 = basis.adjoint() * w;
        w.noalias() -= basis * h2;
        h += h2;
        const double hn = w.norm();

        for (int i = 0; i < j; ++i) {
            const Complex t = std::conj(cs[i]) * h[i] + std::conj(sn[i]) * h[i + 1];
            h[i + 1] = -sn[i] * h[i] + cs[i] * h[i + 1];
            h[i] = t;
        }
        const double denom = std::hypot(std::abs(h[j]), hn);
        Complex c = 1.0, s = 0.0;
        if (denom > 0.0) {
            c = h[j] / denom;
            s = Complex(hn / denom, 0.0);
        }
        cs.push_back(c);
        sn.push_back(s);
        h[j] = std::conj(c) * h[j] + std::conj(s) * hn;
        g.push_back(-s * g[j]);
        g[j] = std::conj(c) * g[j];
        rcols.push_back(h);

        CVector y(j + 1);
        for (int i = j; i >= 0; --i) {
            Complex acc = g[i];
            for (int k = i + 1; k <= j; ++k) acc -= rcols[k][i] * y[k];
            y[i] = acc / rcols[i][i];
        }
        rep.solution = x0 + v.leftCols(j + 1) * y;
        const double prec = std::abs(g[j + 1]) / beta;
        const double tru = res.true_relative(rep.solution);
        record(rep, spec, prec, tru);
        rep.iterations = j + 1;
        rep.final_residual = rep.residual_history.back();
        const bool happy = hn <= 1e-14 * h.norm();
        if (rep.final_residual <= spec.tolerance || happy) {
            rep.converged = rep.final_residual <= spec.tolerance || happy;
            return rep;
        }
        if (j + 1 >= v.cols()) {
            chunk = std::min<Eigen::Index>(cap + 1, v.cols() * 2);
            v.conservativeResize(Eigen::NoChange, chunk);
        }
        v.col(j + 1) = w / hn;
    }
    return rep;
}

SolveReport bicgstab(const LinearMap& a, const LinearMap& precond, const CVector& b, const CVector& x0,
                     const KrylovSpec& spec) {
    spec.validate();
    SolveReport rep;
    Timer timer(rep.wall_seconds);
    const Eigen::Index n = b.size();
    const int cap = resolved_cap(spec, n);

    CVector tmp(n);
    a(x0, tmp);
    const CVector r0_true = b - tmp;
    CVector r(n);
    apply_or_copy(precond, r0_true, r);
    const double prec0 = r.norm();
    Residuals res{a, b, r0_true.norm(), CVector(n)};
    rep.solution = x0;
    record(rep, spec, 1.0, 1.0);
    if (prec0 == 0.0 || res.true0 == 0.0) {
        rep.converged = true;
        rep.final_residual = 0.0;
        return rep;
    }
    const CVector rhat = r;
    CVector p = CVector::Zero(n), v = CVector::Zero(n), s(n), t(n);
    Complex rho = 1.0, alpha = 1.0, omega = 1.0;
    auto stop_value = [&](double prec, double tru) {
        return spec.stopping == StoppingResidual::True ? tru : prec;
    };

    for (int it = 1; it <= cap; ++it) {
        const Complex rho_new = rhat.dot(r);
        if (std::abs(rho_new) < kBreakdown * rhat.norm() * r.norm()) {
            rep.breakdown = true;
            return rep;
        }
        const Complex bet = (rho_new / rho) * (alpha / omega);
        p = r + bet * (p - omega * v);
        a(p, tmp);
        apply_or_copy(precond, tmp, v);
        const Complex rv = rhat.dot(v);
        if (std::abs(rv) < kBreakdown * rhat.norm() * v.norm()) {
            rep.breakdown = true;
            return rep;
        }
        alpha = rho_new / rv;
        s = r - alpha * v;
        rep.iterations = it;

        const CVector x_half = rep.solution + alpha * p;
        const double prec_half = s.norm() / prec0;
        const double tru_half = res.true_relative(x_half);
        if (stop_value(prec_half, tru_half) <= spec.tolerance) {
            rep.solution = x_half;
            record(rep, spec, prec_half, tru_half);
            rep.final_residual = rep.residual_history.back();
            rep.converged = true;
            return rep;
        }

        a(s, tmp);
        apply_or_copy(precond, tmp, t);
        const double tt = t.squaredNorm();
        omega = tt > 0.0 ? t.dot(s) / tt : Complex(0.0);
        if (std::abs(omega) < kBreakdown) {
            rep.solution = x_half;
            record(rep, spec, prec_half, tru_half);
            rep.final_residual = rep.residual_history.back();
            rep.breakdown = true;
            return rep;
        }
        rep.solution = x_half + omega * s;
        r = s - omega * t;
        const double prec = r.norm() / prec0;
        const double tru = res.true_relative(rep.solution);
        record(rep, spec, prec, tru);
        rep.final_residual = rep.residual_history.back();
        if (rep.final_residual <= spec.tolerance) {
            rep.converged = true;
            return rep;
        }
        rho = rho_new;
    }
    return rep;
}

SolveReport solve(const LinearMap& a, const LinearMap& precond, const CVector& b, const CVector& x0,
                  const KrylovSpec& spec) {
    if (spec.method == KrylovMethod::BiCgStab) return bicgstab(a, precond, b, x0, spec);
    return gmres(a, precond, b, x0, spec);
}

LinearMap helmholtz_map(const HelmholtzProblem& problem) {
    const HelmholtzOperator op{problem.shape(), Complex(problem.sigma, 0.0)};
    return [op](const CVector& in, CVector& out) { apply_operator(op, in, out); };
}

LinearMap csl_preconditioner(const HelmholtzProblem& problem, const CslSpec& spec) {
    if (spec.mu < 1) throw InputError("preconditioner: mu must be >= 1");
    if (spec.beta < 0.0) throw InputError("preconditioner: beta must be >= 0");
    auto cyc = std::make_shared<MultigridCycle>(problem.shape(),
                                                ShiftedWavenumber{problem.sigma, spec.beta}.tilde(), spec.cycle);
    const int mu = spec.mu;
    return [cyc, mu](const CVector& in, CVector& out) {
        out = CVector::Zero(in.size());
        for (int i = 0; i < mu; ++i) cyc->apply(out, in);
    };
}

SolveReport solve_helmholtz(const HelmholtzProblem& problem, const KrylovSpec& spec,
                            const std::optional<CslSpec>& precond) {
    const GridShape shape = problem.shape();
    const CVector b = CVector::Ones(shape.size());
    const CVector x0 = CVector::Zero(shape.size());
    LinearMap m;
    if (precond) m = csl_preconditioner(problem, *precond);
    return solve(helmholtz_map(problem), m, b, x0, spec);
}

IterationMinimum iteration_minimum_beta(const HelmholtzProblem& problem, const KrylovSpec& spec,
                                        const CslSpec& precond, const std::vector<double>& beta_grid,
                                        bool prune, const std::function<bool()>& keep_going) {
    if (beta_grid.empty()) throw InputError("iteration_minimum_beta: empty beta grid");
    const int cap = resolved_cap(spec, problem.shape().size());
    const std::size_t n = beta_grid.size();
    IterationMinimum out;
    out.betas = beta_grid;
    out.counts.assign(n, cap);
    out.converged.assign(n, false);
    out.solved.assign(n, false);

    // Pruned searches run from the largest shift down, so the expensive
    // small-shift solves are capped by the best count found so far.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t(0));
    if (prune)
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return beta_grid[a] > beta_grid[b]; });

    int best = -1;
    for (std::size_t i : order) {
        if (keep_going && !keep_going()) {
            out.complete = false;
            break;
        }
        KrylovSpec ks = spec;
        ks.cap = (prune && best > 0) ? std::min(cap, best) : cap;
        CslSpec pc = precond;
        pc.beta = beta_grid[i];
        const SolveReport rep = solve_helmholtz(problem, ks, pc);
        out.counts[i] = rep.converged ? rep.iterations : ks.cap;
        out.converged[i] = rep.converged;
        out.solved[i] = true;
        if (rep.converged && (best < 0 || rep.iterations < best)) best = rep.iterations;
    }

    std::size_t pick = 0;
    bool found = false;
    for (std::size_t i = 0; i < n; ++i) {
        if (!out.converged[i]) continue;
        if (!found || out.counts[i] < out.counts[pick] ||
            (out.counts[i] == out.counts[pick] && beta_grid[i] < beta_grid[pick])) {
            pick = i;
            found = true;
        }
    }
    if (!found)
        pick = static_cast<std::size_t>(std::min_element(beta_grid.begin(), beta_grid.end()) - beta_grid.begin());
    out.beta = beta_grid[pick];
    out.iterations = out.counts[pick];
    return out;
}

double experimental_convergence_factor(const SolveReport& report) {
    if (report.iterations == 0) return 0.0;
    const double r0 = report.residual_history.front();
    const double rf = report.residual_history.back();
    if (rf == 0.0) return 0.0;
    return std::pow(rf / r0, 1.0 / report.iterations);
}

}  // namespace cslfa
