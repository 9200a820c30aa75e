#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "cslfa/config.hpp"
#include "cslfa/errors.hpp"
#include "cslfa/experiments.hpp"
#include "cslfa/kgrid.hpp"
#include "cslfa/krylov.hpp"
#include "cslfa/linalg.hpp"
#include "cslfa/multigrid.hpp"
#include "cslfa/output.hpp"
#include "oracles/charpoly.hpp"
#include "oracles/direct_lfa.hpp"

using namespace cslfa;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    int id;
    const char* name;
    double budget_seconds;  // 0 = none stated
    std::function<Outcome()> body;
};

KGridPlan lfa_plan(int dim, int n, int k, double sigma, int nu1 = 1, int nu2 = 0) {
    KGridPlan p;
    p.dimension = dim;
    p.intervals = n;
    p.levels = k;
    p.sigma = sigma;
    p.nu1 = nu1;
    p.nu2 = nu2;
    return p;
}

bool within(double v, double target, double tol) { return std::abs(v - target) <= tol; }

std::vector<double> log_space(double from, double to, int count) {
    std::vector<double> v;
    for (int i = 0; i < count; ++i) {
        const double t = static_cast<double>(i) / (count - 1);
        v.push_back(-std::exp(std::log(-from) + t * (std::log(-to) - std::log(-from))));
    }
    return v;
}

Outcome c1() {
    const double b4 = beta_min(lfa_plan(2, 32, 4, -1000.0));
    const double b2 = beta_min(lfa_plan(2, 32, 2, -1000.0));
    return {within(b4, 0.42, 0.02), fmt::format("beta_min(k=4)={:.4f} target 0.42+-0.02 [two-grid: {:.4f}]", b4, b2)};
}

Outcome c2() {
    const double b = beta_min(lfa_plan(2, 64, 4, -1600.0, 2, 0));
    return {within(b, 0.20, 0.02), fmt::format("beta_min={:.4f} target 0.20+-0.02", b)};
}

Outcome c3() {
    const std::vector<double> sigmas = log_space(-8000.0, -100.0, 161);
    const double targets[] = {-4096.0, -1024.0, -256.0};
    bool all = true;
    std::string detail;
    for (int k = 2; k <= 4; ++k) {
        std::vector<double> curve;
        for (double s : sigmas) curve.push_back(beta_min(lfa_plan(1, 64, k, s)));
        std::vector<double> minima;
        for (std::size_t i = 1; i + 1 < curve.size(); ++i)
            if (curve[i] < curve[i - 1] && curve[i] <= curve[i + 1]) minima.push_back(sigmas[i]);
        const double t = targets[k - 2];
        bool hit = false;
        for (double m : minima) hit |= std::abs(m - t) <= 0.15 * std::abs(t);
        all &= hit;
        detail += fmt::format(" k={} target {:.0f}: minima at", k, t);
        for (double m : minima) detail += fmt::format(" {:.0f}", m);
        detail += hit ? " (hit);" : " (miss);";
    }
    return {all, detail};
}

Outcome c4() {
    double worst = 0.0;
    for (double s : log_space(-2000.0, -60.0, 10)) {
        const double a = beta_min(lfa_plan(1, 32, 2, s));
        const double b = beta_min(lfa_plan(1, 64, 2, 4.0 * s));
        worst = std::max(worst, std::abs(a - b));
    }
    return {worst < 1e-3, fmt::format("max |delta beta_min|={:.3g} bound 1e-3", worst)};
}

Outcome c5() {
    bool all = true;
    std::string detail;
    for (double s : {-500.0, -2000.0, -5000.0}) {
        const double lfa = beta_min(lfa_plan(1, 64, 2, s));
        const double ex = experimental_beta_min(HelmholtzProblem{1, 64, s}, CycleSpec{2, 1, 0, {}});
        const bool ok = within(ex, lfa, 0.02);
        all &= ok;
        detail += fmt::format(" sigma={:.0f}: lfa={:.4f} exp={:.4f}{};", s, lfa, ex, ok ? "" : " MISS");
    }
    return {all, detail};
}

Outcome c6() {
    const double lfa = beta_min(lfa_plan(1, 64, 4, -1500.0));
    const double ex = experimental_beta_min(HelmholtzProblem{1, 64, -1500.0}, CycleSpec{0, 1, 0, {}});
    return {within(ex, lfa, 0.02), fmt::format("V-cycle exp={:.4f} 4-grid lfa={:.4f} tol 0.02", ex, lfa)};
}

std::vector<double> beta_grid(double from, double to) {
    std::vector<double> g;
    for (int i = 0; from + 0.02 * i <= to + 1e-12; ++i) g.push_back(from + 0.02 * i);
    return g;
}

Outcome c7() {
    const HelmholtzProblem prob{2, 32, -1000.0};
    const int mus[] = {1, 3, 5, 10};
    const double targets[] = {0.30, 0.36, 0.40, 0.42};
    bool all = true;
    std::string detail;
    for (int i = 0; i < 4; ++i) {
        const auto m = iteration_minimum_beta(prob, KrylovSpec{}, CslSpec{mus[i], CycleSpec{2, 1, 0, {}}, 0.0},
                                              beta_grid(0.0, 1.0), true);
        const bool ok = within(m.beta, targets[i], 0.04);
        all &= ok;
        detail += fmt::format(" mu={}: beta*={:.2f} ({} its) target {:.2f}{};", mus[i], m.beta, m.iterations,
                              targets[i], ok ? "" : " MISS");
    }
    return {all, detail};
}

Outcome c8() {
    const HelmholtzProblem prob{2, 256, -64000.0};
    const int mus[] = {3, 5, 10};
    const double targets[] = {0.26, 0.34, 0.34};
    const auto deadline = std::chrono::steady_clock::now() + std::chrono::seconds(1800);
    const auto keep_going = [&] { return std::chrono::steady_clock::now() < deadline; };
    bool all = true;
    std::string detail;
    KrylovSpec ks;
    ks.cap = 1500;
    for (int i = 0; i < 3; ++i) {
        if (!keep_going()) {
            all = false;
            detail += fmt::format(" mu={}: not run, budget spent;", mus[i]);
            continue;
        }
        const auto m = iteration_minimum_beta(prob, ks, CslSpec{mus[i], CycleSpec{0, 1, 0, {}}, 0.0},
                                              beta_grid(0.1, 0.6), true, keep_going);
        std::string solved;
        for (std::size_t j = 0; j < m.betas.size(); ++j)
            if (m.solved[j])
                solved += fmt::format(" {:.2f}:{}{}", m.betas[j], m.counts[j], m.converged[j] ? "" : "+");
        const bool any = std::find(m.converged.begin(), m.converged.end(), true) != m.converged.end();
        const bool ok = m.complete && any && within(m.beta, targets[i], 0.04);
        all &= ok;
        const std::string best = any ? fmt::format("{:.2f} ({} its)", m.beta, m.iterations) : "none converged";
        detail += fmt::format(" mu={}: beta*={} target {:.2f}{}{} [solved{}];", mus[i], best, targets[i],
                              m.complete ? "" : " INCOMPLETE", ok ? "" : " MISS", solved);
        std::fprintf(stderr, "C8 mu=%d done:%s\n", mus[i], solved.c_str());
    }
    return {all, detail};
}

Outcome c9() {
    const auto loaded = load_config_text(
        "kind: convfactor-table\ndimension: 2\nN: 32\nlevels: 2\nsigma: -1000\nmu: 1\n"
        "beta: [0.1, 0.2, 0.3, 0.4, 0.5]\n");
    if (!loaded.ok()) return {false, "config rejected"};
    const SweepResult r = run(loaded.config);
    const double expect[] = {0.78, 0.75, 0.74, 0.75, 0.76};
    bool all = true;
    std::string detail;
    for (int i = 0; i < 5; ++i) {
        const double b = 0.1 * (i + 1);
        double ex = std::nan(""), th = std::nan("");
        std::string th_status;
        for (const auto& row : r.rows) {
            if (std::abs(row.beta - b) > 1e-12) continue;
            if (row.metric == "rho_ex") ex = row.value;
            if (row.metric == "rho_th") th = row.value, th_status = row.status;
        }
        const bool ok = within(ex, expect[i], 0.05) && th >= 0.99;
        all &= ok;
        detail += fmt::format(" beta={:.1f}: rho_ex={:.3f} (target {:.2f}) rho_th={:.4f} [{}]{};", b, ex, expect[i],
                              th, th_status, ok ? "" : " MISS");
    }
    return {all, detail};
}

Outcome c10() {
    const std::vector<double> sigmas = log_space(-3000.0, -100.0, 8);
    int violations = 0, checked = 0;
    std::string worst;
    for (double s : sigmas) {
        const double bm = beta_min(lfa_plan(2, 32, 2, s));
        for (int mu : {1, 3, 5, 10}) {
            KGridPlan p = lfa_plan(2, 32, 2, s);
            p.mu = mu;
            ++checked;
            try {
                const double h = hpc_min_beta(p);
                if (h > bm) {
                    ++violations;
                    worst += fmt::format(" sigma={:.0f} mu={}: hpc={:.4f} > beta_min={:.4f};", s, mu, h, bm);
                }
            } catch (const BracketError&) {
                ++violations;
                worst += fmt::format(" sigma={:.0f} mu={}: no HPC shift up to 64, beta_min={:.4f};", s, mu, bm);
            }
        }
    }
    return {violations == 0, fmt::format("{} of {} (sigma, mu) pairs satisfy hpc_min_beta <= beta_min;{}",
                                         checked - violations, checked, worst)};
}

Outcome c11() {
    std::vector<std::string> failures;
    std::mt19937_64 rng(20240101);
    std::uniform_real_distribution<double> u(-kPi, kPi);
    std::normal_distribution<double> nd;

    for (int i = 0; i < 1000; ++i) {
        const Frequency f1 = Frequency::of(u(rng)), f2 = Frequency::of(u(rng), u(rng));
        const LevelGeometry g{1 + i % 3, 64};
        if (restriction_symbol(f1, g) != interpolation_symbol(f1, g) ||
            restriction_symbol(f2, g) != interpolation_symbol(f2, g)) {
            failures.push_back("R==P");
            break;
        }
    }

    for (int d : {1, 2})
        for (int k : {2, 3, 4}) {
            KGridPlan p = lfa_plan(d, 64, k, -700.0);
            p.beta = 0.3;
            const auto m = assemble_eigenmatrix(p, d == 1 ? Frequency::of(0.41) : Frequency::of(0.41, -1.1));
            if (!m || m->rows() != (1 << (d * (k - 1)))) failures.push_back(fmt::format("dim d={} k={}", d, k));
        }

    double worst_direct = 0.0;
    for (int d : {1, 2})
        for (int i = 0; i < 50; ++i) {
            std::vector<double> th{u(rng) / 2};
            if (d == 2) th.push_back(u(rng) / 2);
            KGridPlan p = lfa_plan(d, 32, 2, -900.0);
            p.beta = 0.2;
            const auto m = assemble_eigenmatrix(p, d == 1 ? Frequency::of(th[0]) : Frequency::of(th[0], th[1]));
            const auto e = oracle::direct_two_grid(oracle::TwoGridSetup{d, 32, -900.0, 0.2, 2.0 / 3.0, 1, 0}, th);
            worst_direct = std::max(worst_direct, (*m - e).norm() / std::max(1.0, e.norm()));
        }
    if (worst_direct > 1e-12) failures.push_back(fmt::format("k=2 direct {:.2g}", worst_direct));

    double worst_pair = 0.0;
    for (int d : {1, 2}) {
        const GridShape s{d, 32};
        const Complex st(-500.0, 100.0);
        const double h = s.mesh_width();
        for (int j1 = 1; j1 < 32; j1 += 5)
            for (int j2 = 1; j2 < (d == 1 ? 2 : 32); j2 += 7) {
                GridFunction v(s);
                for (Eigen::Index idx = 0; idx < s.size(); ++idx) {
                    const int i = static_cast<int>(idx % s.interior()), j = static_cast<int>(idx / s.interior());
                    v.values[idx] = std::sin(j1 * kPi * (i + 1) * h) * (d == 2 ? std::sin(j2 * kPi * (j + 1) * h) : 1.0);
                }
                Complex lambda = st + 4.0 / (h * h) * std::pow(std::sin(j1 * kPi * h / 2), 2);
                if (d == 2) lambda += 4.0 / (h * h) * std::pow(std::sin(j2 * kPi * h / 2), 2);
                const GridFunction av = apply_operator(HelmholtzOperator{s, st}, v);
                worst_pair =
                    std::max(worst_pair, (av.values - lambda * v.values).norm() / (std::abs(lambda) * v.values.norm()));
            }
    }
    if (worst_pair > 1e-10) failures.push_back(fmt::format("eigenpair {:.2g}", worst_pair));

    double worst_radius = 0.0;
    for (int t = 0; t < 50; ++t) {
        CMatrix m(8, 8);
        for (int j = 0; j < 8; ++j)
            for (int i = 0; i < 8; ++i) m(i, j) = Complex(nd(rng), nd(rng));
        const double ref = oracle::root_spectral_radius(m);
        worst_radius = std::max(worst_radius, std::abs(spectral_radius(m) - ref) / ref);
    }
    if (worst_radius > 1e-6) failures.push_back(fmt::format("radius {:.2g}", worst_radius));

    const auto rep = solve_helmholtz(HelmholtzProblem{2, 32, -1000.0}, KrylovSpec{},
                                     CslSpec{1, CycleSpec{2, 1, 0, {}}, 0.5});
    for (std::size_t i = 1; i < rep.preconditioned_history.size(); ++i)
        if (rep.preconditioned_history[i] > rep.preconditioned_history[i - 1] * (1 + 1e-10)) {
            failures.push_back("GMRES monotonicity");
            break;
        }

    const auto cfg = load_config_text("kind: hpc-curve\ndimension: 2\nN: 16\nsigma: [-300, -120]\nmu: [1, 3]\n");
    std::ostringstream a, b;
    write_result(run(cfg.config), a);
    write_result(run(cfg.config), b);
    if (a.str() != b.str()) failures.push_back("rerun differs");

    std::string detail = fmt::format("k2-direct {:.1e}, eigenpair {:.1e}, radius {:.1e}, gmres its {}", worst_direct,
                                     worst_pair, worst_radius, rep.iterations);
    for (const auto& f : failures) detail += "; failed: " + f;
    return {failures.empty(), detail};
}

}  // namespace

int main(int argc, char** argv) {
    bool slow = false;
    std::set<int> only;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--slow") == 0) {
            slow = true;
        } else if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
            only.insert(std::atoi(argv[++i]));
        } else {
            std::fprintf(stderr, "usage: cslfa_acceptance [--slow] [--only N]...\n");
            return 2;
        }
    }

    const std::vector<Criterion> criteria{
        {1, "beta_min 2D 4-grid N=32 sigma=-1000", 120, c1},
        {2, "beta_min 2D 4-grid N=64 nu=2 sigma=-1600", 300, c2},
        {3, "local minima of 1D k-grid beta_min curves", 300, c3},
        {4, "sigma h^2 invariance", 60, c4},
        {5, "LFA vs measured two-grid beta_min", 120, c5},
        {6, "V-cycle vs 4-grid LFA at sigma=-1500", 0, c6},
        {7, "iteration-minimum beta 2D N=32", 600, c7},
        {8, "iteration-minimum beta 2D N=256 V(1,0)", 1800, c8},
        {9, "convergence factor table", 0, c9},
        {10, "HPC minimum below beta_min", 0, c10},
        {11, "property suites", 0, c11},
    };

    int failed = 0;
    for (const auto& c : criteria) {
        if (!only.empty() ? !only.count(c.id) : (c.id == 8 && !slow)) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.body();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        bool pass = o.pass;
        std::string budget;
        if (c.budget_seconds > 0) {
            budget = fmt::format(", budget {:.0f}s", c.budget_seconds);
            if (secs > c.budget_seconds) {
                pass = false;
                budget += " EXCEEDED";
            }
        }
        if (!pass) ++failed;
        std::printf("%s C%d %s: %s (%.1fs%s)\n", pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs,
                    budget.c_str());
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
