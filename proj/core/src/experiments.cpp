#include "cslfa/experiments.hpp"

#include <algorithm>
#include <exception>
#include <functional>

#include <fmt/format.h>
#include <tbb/parallel_for.h>

#include "cslfa/errors.hpp"
#include "cslfa/kgrid.hpp"
#include "cslfa/krylov.hpp"
#include "cslfa/multigrid.hpp"

#ifndef CSLFA_VERSION
#define CSLFA_VERSION "0.0.0"
#endif

namespace cslfa {

namespace {

using Cell = std::function<std::vector<SweepRow>()>;

KGridPlan plan_from(const RunConfig& c, double sigma, double beta = 0.0, int mu = 1) {
    KGridPlan p;
    p.dimension = c.dimension;
    p.levels = c.levels;
    p.nu1 = c.nu1;
    p.nu2 = c.nu2;
    p.smoother = c.smoother;
    p.intervals = c.intervals;
    p.sigma = sigma;
    p.beta = beta;
    p.mu = mu;
    p.theta_samples = c.theta_samples;
    return p;
}

CycleSpec cycle_from(const RunConfig& c, int levels) {
    CycleSpec s;
    s.levels = levels;
    s.nu1 = c.nu1;
    s.nu2 = c.nu2;
    s.smoother = c.smoother;
    return s;
}

HelmholtzProblem problem_from(const RunConfig& c, double sigma) { return {c.dimension, c.intervals, sigma}; }

SweepRow make_row(const std::string& metric, double value, double sigma = kNaN, double beta = kNaN, int mu = 0) {
    SweepRow r;
    r.metric = metric;
    r.value = value;
    r.sigma = sigma;
    r.beta = beta;
    r.mu = mu;
    return r;
}

SweepRow failed_row(const std::string& metric, const std::exception& e, double sigma = kNaN, double beta = kNaN,
                    int mu = 0) {
    SweepRow r = make_row(metric, kNaN, sigma, beta, mu);
    r.status = dynamic_cast<const BracketError*>(&e) ? "bracket-exhausted" : "failed";
    r.reason = e.what();
    return r;
}

// Runs f and turns an exception into a failed row.
template <typename F>
SweepRow guarded(const std::string& metric, double sigma, double beta, int mu, F&& f) {
    try {
        return make_row(metric, f(), sigma, beta, mu);
    } catch (const std::exception& e) {
        return failed_row(metric, e, sigma, beta, mu);
    }
}

void beta_curve(const RunConfig& c, SweepResult& out, std::vector<Cell>& cells) {
    out.metadata.emplace_back("levels", std::to_string(c.levels));
    if (c.experimental) {
        const CycleSpec cs = cycle_from(c, c.experimental_levels);
        out.metadata.emplace_back("experimental_levels",
                                  std::to_string(cs.resolved_levels(problem_from(c, -1.0).shape())));
        out.metadata.emplace_back(
            "experimental_coarsest_intervals",
            std::to_string(c.intervals >> (cs.resolved_levels(problem_from(c, -1.0).shape()) - 1)));
    }
    for (double s : c.sigmas) {
        cells.push_back([&c, s] {
            std::vector<SweepRow> rows;
            rows.push_back(guarded("beta_min", s, kNaN, 0, [&] { return beta_min(plan_from(c, s)); }));
            if (c.experimental) {
                rows.push_back(guarded("experimental_beta_min", s, kNaN, 0, [&] {
                    ExperimentalOptions opt;
                    opt.factor.iterations = c.factor_iterations;
                    opt.factor.seed = c.seed;
                    opt.tolerance = c.experimental_tolerance;
                    return experimental_beta_min(problem_from(c, s), cycle_from(c, c.experimental_levels), opt);
                }));
            }
            return rows;
        });
    }
}

void smoother_curve(const RunConfig& c, std::vector<Cell>& cells) {
    for (double s : c.sigmas) {
        cells.push_back([&c, s] {
            std::vector<SweepRow> rows;
            if (c.dimension == 1 && c.smoother.kind == SmootherKind::Jacobi) {
                try {
                    const auto b = smoother_beta_min(LevelGeometry{1, c.intervals}, s, c.smoother.omega);
                    rows.push_back(make_row("bound_theta_zero", b.theta_zero, s));
                    rows.push_back(make_row("bound_theta_pi", b.theta_pi, s));
                    rows.push_back(make_row("smoother_beta_min", b.combined, s));
                } catch (const std::exception& e) {
                    rows.push_back(failed_row("smoother_beta_min", e, s));
                }
            }
            rows.push_back(guarded("numeric_beta_min", s, kNaN, 0, [&] {
                KGridPlan p = plan_from(c, s);
                p.levels = 2;
                return smoother_numeric_beta_min(p);
            }));
            return rows;
        });
    }
}

void amplification_profile(const RunConfig& c, std::vector<Cell>& cells) {
    for (double s : c.sigmas) {
        if (c.dimension == 1) {
            cells.push_back([&c, s] {
                SweepRow r = make_row("resonance_frequency", kNaN, s);
                const auto t = resonance_frequency(s, LevelGeometry{1, c.intervals});
                if (t)
                    r.value = *t;
                else
                    r.status = "out-of-range";
                return std::vector<SweepRow>{r};
            });
        }
        for (double b : c.betas) {
            cells.push_back([&c, s, b] {
                std::vector<SweepRow> rows;
                try {
                    const KGridPlan p = plan_from(c, s, b);
                    p.validate();
                    double worst = 0.0;
                    for (const auto& f : theta_samples(p, false)) {
                        const double g = amplification_factor(p, f);
                        SweepRow r = make_row("amplification", g, s, b);
                        r.theta1 = f[0];
                        if (c.dimension == 2) r.theta2 = f[1];
                        if (!std::isfinite(g)) r.status = "resonance";
                        worst = std::max(worst, g);
                        rows.push_back(r);
                    }
                    rows.push_back(make_row("max_amplification", worst, s, b));
                } catch (const std::exception& e) {
                    rows.push_back(failed_row("max_amplification", e, s, b));
                }
                return rows;
            });
        }
    }
}

KrylovSpec krylov_from(const RunConfig& c) { return c.krylov; }

void heatmap(const RunConfig& c, std::vector<Cell>& cells) {
    for (int mu : c.mus)
        for (double s : c.sigmas)
            for (double b : c.betas) {
                cells.push_back([&c, s, b, mu] {
                    SweepRow r = make_row("iterations", kNaN, s, b, mu);
                    try {
                        CslSpec pc{mu, cycle_from(c, c.levels), b};
                        const SolveReport rep = solve_helmholtz(problem_from(c, s), krylov_from(c), pc);
                        r.value = rep.iterations;
                        if (rep.breakdown)
                            r.status = "breakdown";
                        else if (!rep.converged)
                            r.status = "not-converged";
                    } catch (const std::exception& e) {
                        r = failed_row("iterations", e, s, b, mu);
                    }
                    return std::vector<SweepRow>{r};
                });
            }
}

void iteration_minimum(const RunConfig& c, std::vector<Cell>& cells) {
    for (int mu : c.mus)
        for (double s : c.sigmas) {
            cells.push_back([&c, s, mu] {
                std::vector<SweepRow> rows;
                try {
                    CslSpec pc{mu, cycle_from(c, c.levels), 0.0};
                    const auto m = iteration_minimum_beta(problem_from(c, s), krylov_from(c), pc, c.betas, c.prune);
                    bool any_converged = false;
                    for (std::size_t i = 0; i < m.betas.size(); ++i) {
                        SweepRow r = make_row("iterations", m.counts[i], s, m.betas[i], mu);
                        if (!m.converged[i]) r.status = (c.prune && any_converged) ? "pruned" : "not-converged";
                        if (m.converged[i]) any_converged = true;
                        rows.push_back(r);
                    }
                    SweepRow b = make_row("iteration_minimum_beta", m.beta, s, kNaN, mu);
                    SweepRow n = make_row("iteration_minimum_count", m.iterations, s, kNaN, mu);
                    if (!any_converged) b.status = n.status = "not-converged";
                    rows.push_back(b);
                    rows.push_back(n);
                } catch (const std::exception& e) {
                    rows.push_back(failed_row("iteration_minimum_beta", e, s, kNaN, mu));
                }
                return rows;
            });
        }
}

void hpc_curve(const RunConfig& c, std::vector<Cell>& cells) {
    for (double s : c.sigmas) {
        cells.push_back([&c, s] {
            return std::vector<SweepRow>{guarded("beta_min", s, kNaN, 0, [&] { return beta_min(plan_from(c, s)); })};
        });
        for (int mu : c.mus)
            cells.push_back([&c, s, mu] {
                return std::vector<SweepRow>{
                    guarded("hpc_min_beta", s, kNaN, mu, [&] { return hpc_min_beta(plan_from(c, s, 0.0, mu)); })};
            });
    }
}

void convfactor_table(const RunConfig& c, SweepResult& out, std::vector<Cell>& cells) {
    const double s = c.sigmas.front();
    const int mu = c.mus.front();
    out.metadata.emplace_back("ellipse_fit", "confocal family, real centre at the midpoint of the real extent");
    for (double b : c.betas) {
        cells.push_back([&c, s, b, mu] {
            std::vector<SweepRow> rows;
            try {
                CslSpec pc{mu, cycle_from(c, c.levels), b};
                const SolveReport rep = solve_helmholtz(problem_from(c, s), krylov_from(c), pc);
                SweepRow it = make_row("iterations", rep.iterations, s, b, mu);
                SweepRow ex = make_row("rho_ex", experimental_convergence_factor(rep), s, b, mu);
                if (!rep.converged) it.status = ex.status = "not-converged";
                rows.push_back(it);
                rows.push_back(ex);
            } catch (const std::exception& e) {
                rows.push_back(failed_row("rho_ex", e, s, b, mu));
            }
            try {
                const auto spec = preconditioned_spectrum(plan_from(c, s, b, mu));
                SweepRow ext = make_row("angular_extent", angular_extent(spec.eigenvalues), s, b, mu);
                SweepRow th = make_row("rho_th", kNaN, s, b, mu);
                if (spec.resonant) {
                    ext.status = th.status = "resonance";
                    rows.push_back(ext);
                    rows.push_back(th);
                    return rows;
                }
                rows.push_back(ext);
                const auto fit = fit_ellipse(spec.eigenvalues);
                if (!fit) {
                    th.value = 1.0;
                    th.status = "origin-enclosed";
                    th.reason = "every confocal ellipse around the spectrum contains the origin";
                    rows.push_back(th);
                    return rows;
                }
                th.value = ellipse_rho_estimate(spec.eigenvalues, *fit);
                rows.push_back(th);
                rows.push_back(make_row("ellipse_c", fit->c, s, b, mu));
                rows.push_back(make_row("ellipse_d", fit->d, s, b, mu));
                rows.push_back(make_row("ellipse_a", fit->a, s, b, mu));
            } catch (const std::exception& e) {
                rows.push_back(failed_row("rho_th", e, s, b, mu));
            }
            return rows;
        });
    }
}

void invariance_check(const RunConfig& c, std::vector<Cell>& cells) {
    for (double s : c.sigmas) {
        cells.push_back([&c, s] {
            std::vector<SweepRow> rows;
            const SweepRow coarse = guarded("beta_min_n", s, kNaN, 0, [&] { return beta_min(plan_from(c, s)); });
            const SweepRow fine = guarded("beta_min_2n", 4.0 * s, kNaN, 0, [&] {
                KGridPlan p = plan_from(c, 4.0 * s);
                p.intervals = 2 * c.intervals;
                return beta_min(p);
            });
            rows.push_back(coarse);
            rows.push_back(fine);
            SweepRow d = make_row("delta", std::abs(coarse.value - fine.value), s);
            if (coarse.failed() || fine.failed()) {
                d.status = "failed";
                d.reason = "a shift search failed";
            }
            rows.push_back(d);
            return rows;
        });
    }
}

}  // namespace

std::string library_version() { return CSLFA_VERSION; }

bool SweepResult::json_output() const {
    return config.kind == ExperimentKind::ConvfactorTable || config.kind == ExperimentKind::InvarianceCheck;
}

SweepResult run(const RunConfig& config) {
    SweepResult out;
    out.config = config;
    out.version = library_version();
    std::vector<Cell> cells;
    switch (config.kind) {
        case ExperimentKind::BetaCurve: beta_curve(config, out, cells); break;
        case ExperimentKind::SmootherCurve: smoother_curve(config, cells); break;
        case ExperimentKind::AmplificationProfile: amplification_profile(config, cells); break;
        case ExperimentKind::Heatmap: heatmap(config, cells); break;
        case ExperimentKind::IterationMinimum: iteration_minimum(config, cells); break;
        case ExperimentKind::HpcCurve: hpc_curve(config, cells); break;
        case ExperimentKind::ConvfactorTable: convfactor_table(config, out, cells); break;
        case ExperimentKind::InvarianceCheck: invariance_check(config, cells); break;
    }
    if (config.kind == ExperimentKind::Heatmap || config.kind == ExperimentKind::IterationMinimum ||
        config.kind == ExperimentKind::ConvfactorTable) {
        const CycleSpec cs = cycle_from(config, config.levels);
        const int k = cs.resolved_levels(problem_from(config, -1.0).shape());
        out.metadata.emplace_back("cycle_levels", std::to_string(k));
        out.metadata.emplace_back("coarsest_intervals", std::to_string(config.intervals >> (k - 1)));
        out.metadata.emplace_back("stopping_residual",
                                  config.krylov.stopping == StoppingResidual::True ? "true" : "preconditioned");
    }

    std::vector<std::vector<SweepRow>> parts(cells.size());
    tbb::parallel_for(std::size_t(0), cells.size(), [&](std::size_t i) { parts[i] = cells[i](); });
    for (auto& p : parts) {
        ++out.total_cells;
        if (std::any_of(p.begin(), p.end(), [](const SweepRow& r) { return r.failed(); })) ++out.failed_cells;
        out.rows.insert(out.rows.end(), p.begin(), p.end());
    }

    if (config.kind == ExperimentKind::InvarianceCheck) {
        double worst = 0.0;
        for (const auto& r : out.rows)
            if (r.metric == "delta") worst = std::max(worst, std::isfinite(r.value) ? r.value : INFINITY);
        out.summary.emplace_back("max_delta", worst);
        out.summary.emplace_back("tolerance", config.invariance_tolerance);
        if (!(worst < config.invariance_tolerance)) out.threshold_exceeded = true;
    }
    if (out.total_cells > 0 &&
        static_cast<double>(out.failed_cells) / out.total_cells > config.failure_threshold)
        out.threshold_exceeded = true;
    out.summary.emplace_back("failed_cells", out.failed_cells);
    out.summary.emplace_back("total_cells", out.total_cells);
    return out;
}

}  // namespace cslfa
