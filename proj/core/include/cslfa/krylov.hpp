#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "cslfa/linalg.hpp"
#include "cslfa/multigrid.hpp"

namespace cslfa {

using LinearMap = std::function<void(const CVector& in, CVector& out)>;

enum class KrylovMethod { Gmres, BiCgStab };

// Which relative residual the stopping test reads.  Both are always logged.
enum class StoppingResidual { True, Preconditioned };

struct KrylovSpec {
    KrylovMethod method = KrylovMethod::Gmres;
    double tolerance = 1e-6;
    int cap = 0;  // 0 = number of unknowns
    StoppingResidual stopping = StoppingResidual::True;

    void validate() const;
};

struct SolveReport {
    int iterations = 0;
    bool converged = false;
    bool breakdown = false;
    double final_residual = 1.0;                // relative, stopping residual
    std::vector<double> residual_history;       // relative, stopping residual, entry 0 = 1
    std::vector<double> preconditioned_history;  // relative
    std::vector<double> true_history;            // relative
    double wall_seconds = 0.0;
    CVector solution;
};

// Left-preconditioned full GMRES and BiCGStab.  An empty preconditioner is
// the identity.
SolveReport gmres(const LinearMap& a, const LinearMap& precond, const CVector& b, const CVector& x0,
                  const KrylovSpec& spec);
SolveReport bicgstab(const LinearMap& a, const LinearMap& precond, const CVector& b, const CVector& x0,
                     const KrylovSpec& spec);
SolveReport solve(const LinearMap& a, const LinearMap& precond, const CVector& b, const CVector& x0,
                  const KrylovSpec& spec);

struct CslSpec {
    int mu = 1;
    CycleSpec cycle;
    double beta = 0.0;
};

// mu cycles on the shifted operator starting from zero.
LinearMap csl_preconditioner(const HelmholtzProblem& problem, const CslSpec& spec);
LinearMap helmholtz_map(const HelmholtzProblem& problem);

// f = 1, x0 = 0, operator at the unshifted sigma.
SolveReport solve_helmholtz(const HelmholtzProblem& problem, const KrylovSpec& spec,
                            const std::optional<CslSpec>& precond);

struct IterationMinimum {
    double beta = 0.0;
    int iterations = 0;
    std::vector<double> betas;
    std::vector<int> counts;
    std::vector<bool> converged;
    std::vector<bool> solved;
    bool complete = true;
};

// Ties resolve toward the smaller shift.  With prune set, shifts are visited
// from largest to smallest and each solve is capped at the best count so far;
// capped counts are lower bounds and the minimiser is unchanged.
// keep_going is polled before each solve; returning false stops the sweep,
// leaves complete unset and picks among the shifts solved so far.
IterationMinimum iteration_minimum_beta(const HelmholtzProblem& problem, const KrylovSpec& spec,
                                        const CslSpec& precond, const std::vector<double>& beta_grid,
                                        bool prune = false, const std::function<bool()>& keep_going = {});

// (r_final / r_0)^(1 / iterations) over the stopping residual sequence.
double experimental_convergence_factor(const SolveReport& report);

}  // namespace cslfa
