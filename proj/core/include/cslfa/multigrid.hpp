#pragma once

#include <cstdint>
#include <vector>

#include "cslfa/linalg.hpp"
#include "cslfa/search.hpp"
#include "cslfa/symbols.hpp"

namespace cslfa {

// Unit interval or square with N intervals per dimension; only interior
// points are stored, the Dirichlet boundary is an implicit zero halo.
struct GridShape {
    int dimension = 1;
    int intervals = 64;

    int interior() const { return intervals - 1; }
    Eigen::Index size() const;
    double mesh_width() const { return 1.0 / intervals; }
    GridShape coarser() const { return {dimension, intervals / 2}; }
    bool operator==(const GridShape&) const = default;
};

struct GridFunction {
    GridShape shape;
    CVector values;

    GridFunction() = default;
    explicit GridFunction(const GridShape& s) : shape(s), values(CVector::Zero(s.size())) {}
    GridFunction(const GridShape& s, CVector v);

    Complex& operator()(int i) { return values[i]; }
    Complex operator()(int i) const { return values[i]; }
    Complex& operator()(int i, int j) { return values[i + static_cast<Eigen::Index>(j) * shape.interior()]; }
    Complex operator()(int i, int j) const { return values[i + static_cast<Eigen::Index>(j) * shape.interior()]; }
};

// h^d * sum conj(u) v.
Complex inner_product(const GridFunction& u, const GridFunction& v);

struct HelmholtzOperator {
    GridShape shape;
    Complex sigma_tilde{0.0, 0.0};

    Complex diagonal() const;  // (2d)/h^2 + sigma_tilde
};

void apply_operator(const HelmholtzOperator& op, const CVector& u, CVector& out);
GridFunction apply_operator(const HelmholtzOperator& op, const GridFunction& u);

// One in-place sweep; scratch must have the grid size.  Throws ResonanceError
// for a vanishing diagonal.
void smooth_in_place(const HelmholtzOperator& op, CVector& u, const CVector& rhs, const SmootherSpec& s,
                     CVector& scratch);
GridFunction smooth(const HelmholtzOperator& op, const GridFunction& u, const GridFunction& rhs,
                    const SmootherSpec& s);

// Full weighting and its dual linear interpolation.
GridFunction restrict_full_weighting(const GridFunction& fine);
GridFunction prolong_linear(const GridFunction& coarse);
void restrict_into(const GridShape& fine, const CVector& in, CVector& out);
void prolong_add(const GridShape& coarse, const CVector& in, CVector& out);

// Dense matrix of the stencil, used for the coarsest exact solve.
CMatrix dense_operator(const HelmholtzOperator& op);

struct CycleSpec {
    int levels = 2;  // 0 = coarsen until three interior points per dimension remain
    int nu1 = 1;
    int nu2 = 0;
    SmootherSpec smoother;

    int resolved_levels(const GridShape& finest) const;
    void validate(const GridShape& finest) const;
};

inline constexpr Eigen::Index kMaxCoarsestUnknowns = 5000;

class MultigridCycle {
public:
    MultigridCycle(const GridShape& finest, Complex sigma_tilde, const CycleSpec& spec);

    // One V-cycle in place.
    void apply(CVector& u, const CVector& rhs);
    void apply(GridFunction& u, const GridFunction& rhs) { apply(u.values, rhs.values); }

    int levels() const { return static_cast<int>(levels_.size()); }
    const GridShape& coarsest() const { return levels_.back().op.shape; }

private:
    struct Level {
        HelmholtzOperator op;
        CVector u, f, r, scratch;
    };
    void cycle(std::size_t l, CVector& u, const CVector& f);

    CycleSpec spec_;
    std::vector<Level> levels_;
    Eigen::PartialPivLU<CMatrix> coarse_lu_;
};

GridFunction kgrid_cycle(MultigridCycle& cycle, GridFunction u0, const GridFunction& rhs);

struct HelmholtzProblem {
    int dimension = 1;
    int intervals = 64;
    double sigma = -500.0;

    GridShape shape() const { return {dimension, intervals}; }
};

struct FactorOptions {
    int iterations = 200;
    std::uint64_t seed = 20240101;
};

// Power iteration on the error propagation with zero right-hand side;
// geometric mean of the last quarter of the per-cycle growth ratios.
double asymptotic_factor(const HelmholtzProblem& problem, const CycleSpec& spec, double beta,
                         const FactorOptions& opt = {});

struct ExperimentalOptions {
    FactorOptions factor;
    double tolerance = 0.01;
    BisectionSettings bisection;
};

double experimental_beta_min(const HelmholtzProblem& problem, const CycleSpec& spec,
                             const ExperimentalOptions& opt = {});

}  // namespace cslfa
