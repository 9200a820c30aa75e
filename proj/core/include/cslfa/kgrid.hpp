#pragma once

#include <optional>
#include <vector>

#include "cslfa/linalg.hpp"
#include "cslfa/search.hpp"
#include "cslfa/symbols.hpp"

namespace cslfa {

struct HarmonicSet {
    Frequency base;
    // Order: 1D {theta0, theta1}; 2D {00, 10, 01, 11}, where a 1 in slot i
    // replaces component i by its complementary angle.
    std::vector<Frequency> members;
};

// theta1 = theta0 - sign(theta0) pi with sign(0) = +1, wrapped into (-pi, pi].
HarmonicSet harmonics(const Frequency& theta0);

struct KGridPlan {
    int dimension = 1;
    int levels = 2;  // k in {2, 3, 4}
    int nu1 = 1;
    int nu2 = 0;
    SmootherSpec smoother;
    int intervals = 64;  // N on the finest level
    double sigma = -500.0;
    double beta = 0.0;
    int mu = 1;             // inner cycles, preconditioned analyses only
    int theta_samples = 0;  // per dimension; 0 selects 1024 (1D) or 128 (2D)

    ShiftedWavenumber wavenumber() const { return {sigma, beta}; }
    LevelGeometry geometry(int level) const { return {level, intervals}; }
    int eigen_dimension() const;
    int samples_per_dimension() const;
    KGridPlan with_beta(double b) const;
    // Throws InputError on an inconsistent plan.
    void validate() const;
};

// Frequencies carried by each level of the k-grid splitting tree.  Entry
// l-1 holds level l; the coarsest level k holds the single mode 2 theta0.
std::vector<std::vector<Frequency>> frequency_tree(const Frequency& theta0, int levels);

// Empty when a coarse symbol or smoother diagonal is resonant.
std::optional<CMatrix> assemble_eigenmatrix(const KGridPlan& plan, const Frequency& theta0);

// +inf at a resonance.
double amplification_factor(const KGridPlan& plan, const Frequency& theta0);

// Uniform half-step-offset samples of (-pi/2, pi/2]^d.  With reduce set and a
// Jacobi smoother only the fundamental domain of the reflection and exchange
// symmetries is returned.
std::vector<Frequency> theta_samples(const KGridPlan& plan, bool reduce = true);

double max_amplification(const KGridPlan& plan);
bool amplification_at_most(const KGridPlan& plan, double bound);

double beta_min(const KGridPlan& plan, const BisectionSettings& s = {});

struct SmootherBounds {
    double theta_zero = 0.0;
    double theta_pi = 0.0;
    double combined = 0.0;
};

// Closed-form shift limits for the 1D weighted Jacobi smoother.
SmootherBounds smoother_beta_min(const LevelGeometry& g, double sigma, double omega);

// max over theta of |S(theta)| for the finest-level smoother alone.
double max_smoother_amplification(const KGridPlan& plan);
double smoother_numeric_beta_min(const KGridPlan& plan, const BisectionSettings& s = {});

// Positive branch of +-arcsin sqrt(-sigma h^2); empty when |sigma| h^2 > 1.
std::optional<double> resonance_frequency(double sigma, const LevelGeometry& g);

// A(sigma) (I - M^mu) A(sigma_tilde)^{-1} on the finest-level members.
std::optional<CMatrix> preconditioned_eigenmatrix(const KGridPlan& plan, const Frequency& theta0);

// Union over sampled frequencies of the eigenvalues of the preconditioned
// symbol.  Sets resonant when any sample hit a pole.
struct PreconditionedSpectrum {
    std::vector<Complex> eigenvalues;
    bool resonant = false;
};
PreconditionedSpectrum preconditioned_spectrum(const KGridPlan& plan);

// Smallest arc (radians) around the origin that contains every point; 2 pi
// when a point sits at the origin.
double angular_extent(const std::vector<Complex>& points);
bool half_plane_condition(const KGridPlan& plan);
double hpc_min_beta(const KGridPlan& plan, const BisectionSettings& s = {});

struct EllipseParams {
    double c = 1.0;  // real centre
    double d = 0.0;  // focal distance
    double a = 0.0;  // major semi-axis
};

bool ellipse_contains(const EllipseParams& e, Complex z, double rel_tol = 1e-9);
// Throws EstimateError when the origin or a spectrum point violates the fit.
double ellipse_rho_estimate(const std::vector<Complex>& spectrum, const EllipseParams& e);
// Confocal fit with real centre at the midpoint of the real extent; empty
// when every member of the family encloses the origin.
std::optional<EllipseParams> fit_ellipse(const std::vector<Complex>& spectrum, int focal_steps = 4000);

}  // namespace cslfa
