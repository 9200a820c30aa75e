#include "cslfa/kgrid.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <string>

#include <tbb/blocked_range.h>
#include <tbb/parallel_for.h>
#include <tbb/parallel_reduce.h>

#include "cslfa/errors.hpp"

namespace cslfa {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double complementary(double t) { return wrap_angle(t - (t >= 0.0 ? kPi : -kPi)); }

bool in_base_cell(double t) { return t > -kPi / 2 && t <= kPi / 2; }

// Children of a level-(l+1) frequency on level l, in harmonic order.
void split(const Frequency& phi, std::vector<Frequency>& out) {
    if (phi.dimension == 1) {
        out.push_back(Frequency::of(wrap_angle(phi[0] / 2)));
        out.push_back(Frequency::of(wrap_angle(phi[0] / 2 + kPi)));
        return;
    }
    for (int s = 0; s < 4; ++s) {
        const double t1 = phi[0] / 2 + ((s & 1) ? kPi : 0.0);
        const double t2 = phi[1] / 2 + ((s & 2) ? kPi : 0.0);
        out.push_back(Frequency::of(wrap_angle(t1), wrap_angle(t2)));
    }
}

struct LevelSymbols {
    std::vector<Complex> a, r, s;
};

bool level_symbols(const KGridPlan& plan, int level, const std::vector<Frequency>& freqs,
                   LevelSymbols& out) {
    const LevelGeometry g = plan.geometry(level);
    const ShiftedWavenumber sw = plan.wavenumber();
    out.a.resize(freqs.size());
    out.r.resize(freqs.size());
    out.s.resize(freqs.size());
    for (std::size_t i = 0; i < freqs.size(); ++i) {
        out.a[i] = discretization_symbol(freqs[i], g, sw);
        out.r[i] = restriction_symbol(freqs[i], g);
        auto s = smoother_symbol(freqs[i], g, sw, plan.smoother);
        if (!s) return false;
        out.s[i] = *s;
    }
    return true;
}

std::optional<CMatrix> assemble_from_tree(const KGridPlan& plan,
                                          const std::vector<std::vector<Frequency>>& tree) {
    const int k = plan.levels;
    const int nh = plan.dimension == 1 ? 2 : 4;
    CMatrix m = CMatrix::Zero(1, 1);
    std::vector<Complex> coarse_a(1);
    {
        const LevelGeometry gk = plan.geometry(k);
        coarse_a[0] = discretization_symbol(tree[static_cast<std::size_t>(k - 1)][0], gk, plan.wavenumber());
    }
    LevelSymbols fine;
    for (int l = k - 1; l >= 1; --l) {
        const auto& freqs = tree[static_cast<std::size_t>(l - 1)];
        const double hc = plan.geometry(l + 1).mesh_width();
        for (const auto& ac : coarse_a)
            if (std::abs(ac) * hc * hc < kResonanceThreshold) return std::nullopt;
        if (!level_symbols(plan, l, freqs, fine)) return std::nullopt;

        const Eigen::Index nc = m.rows();
        const Eigen::Index n = nc * nh;
        CMatrix y = CMatrix::Identity(nc, nc) - m;
        for (Eigen::Index j = 0; j < nc; ++j) y.col(j) /= coarse_a[static_cast<std::size_t>(j)];

        CMatrix t(n, n);
        for (Eigen::Index b = 0; b < n; ++b) {
            const Complex rb_ab = fine.r[static_cast<std::size_t>(b)] * fine.a[static_cast<std::size_t>(b)];
            const Eigen::Index jb = b / nh;
            for (Eigen::Index a = 0; a < n; ++a)
                t(a, b) = -fine.r[static_cast<std::size_t>(a)] * y(a / nh, jb) * rb_ab;
            t(b, b) += 1.0;
        }
        for (Eigen::Index i = 0; i < n; ++i) {
            const Complex s = fine.s[static_cast<std::size_t>(i)];
            const Complex pre = std::pow(s, plan.nu1);
            const Complex post = std::pow(s, plan.nu2);
            t.col(i) *= pre;
            t.row(i) *= post;
        }
        m = std::move(t);
        coarse_a = fine.a;
    }
    return m;
}

std::string plan_text(const KGridPlan& p) {
    return "d=" + std::to_string(p.dimension) + " k=" + std::to_string(p.levels) +
           " N=" + std::to_string(p.intervals);
}

}  // namespace

HarmonicSet harmonics(const Frequency& theta0) {
    for (int i = 0; i < theta0.dimension; ++i)
        if (!in_base_cell(theta0[i]))
            throw InputError("harmonics: component " + std::to_string(theta0[i]) +
                             " outside (-pi/2, pi/2]");
    HarmonicSet h{theta0, {}};
    if (theta0.dimension == 1) {
        h.members = {theta0, Frequency::of(complementary(theta0[0]))};
        return h;
    }
    const double a0 = theta0[0], a1 = complementary(theta0[0]);
    const double b0 = theta0[1], b1 = complementary(theta0[1]);
    h.members = {Frequency::of(a0, b0), Frequency::of(a1, b0), Frequency::of(a0, b1),
                 Frequency::of(a1, b1)};
    return h;
}

int KGridPlan::eigen_dimension() const {
    const int per = dimension == 1 ? 2 : 4;
    int n = 1;
    for (int l = 1; l < levels; ++l) n *= per;
    return n;
}

int KGridPlan::samples_per_dimension() const {
    if (theta_samples > 0) return theta_samples;
    return dimension == 1 ? 1024 : 128;
}

KGridPlan KGridPlan::with_beta(double b) const {
    KGridPlan p = *this;
    p.beta = b;
    return p;
}

void KGridPlan::validate() const {
    if (dimension != 1 && dimension != 2) throw InputError("plan: dimension must be 1 or 2");
    if (levels < 2 || levels > 4) throw InputError("plan: levels must be 2, 3 or 4");
    if (nu1 < 0 || nu2 < 0 || nu1 + nu2 < 1)
        throw InputError("plan: smoothing counts must be non-negative with nu1+nu2 >= 1");
    if (intervals < 4 || (intervals & (intervals - 1)) != 0)
        throw InputError("plan: N must be a power of two >= 4");
    if ((intervals >> (levels - 1)) < 2) throw InputError("plan: too many levels for N");
    if (smoother.kind == SmootherKind::GaussSeidel && dimension != 1)
        throw InputError("plan: Gauss-Seidel symbol is one-dimensional only");
    if (smoother.omega < 0.0 || smoother.omega > 1.0) throw InputError("plan: omega outside [0, 1]");
    if (beta < 0.0 || !std::isfinite(beta)) throw InputError("plan: beta must be finite and >= 0");
    if (!std::isfinite(sigma)) throw InputError("plan: sigma must be finite");
    if (mu < 1) throw InputError("plan: mu must be >= 1");
    if (theta_samples < 0) throw InputError("plan: theta_samples must be >= 0");
}

std::vector<std::vector<Frequency>> frequency_tree(const Frequency& theta0, int levels) {
    if (levels < 2) throw InputError("frequency_tree: levels must be >= 2");
    std::vector<std::vector<Frequency>> tree(static_cast<std::size_t>(levels));
    Frequency coarsest = theta0;
    for (int i = 0; i < theta0.dimension; ++i) coarsest.theta[static_cast<std::size_t>(i)] = wrap_angle(2 * theta0[i]);
    tree[static_cast<std::size_t>(levels - 1)] = {coarsest};
    tree[static_cast<std::size_t>(levels - 2)] = harmonics(theta0).members;
    for (int l = levels - 2; l >= 1; --l) {
        auto& out = tree[static_cast<std::size_t>(l - 1)];
        for (const auto& phi : tree[static_cast<std::size_t>(l)]) split(phi, out);
    }
    return tree;
}

std::optional<CMatrix> assemble_eigenmatrix(const KGridPlan& plan, const Frequency& theta0) {
    if (theta0.dimension != plan.dimension)
        throw DimensionError("assemble_eigenmatrix: frequency dimension mismatch");
    if (plan.nu1 + plan.nu2 < 1) throw InputError("assemble_eigenmatrix: no smoothing steps");
    return assemble_from_tree(plan, frequency_tree(theta0, plan.levels));
}

double amplification_factor(const KGridPlan& plan, const Frequency& theta0) {
    auto m = assemble_eigenmatrix(plan, theta0);
    if (!m) return kInf;
    if (!all_finite(*m)) return kInf;
    return spectral_radius(*m);
}

std::vector<Frequency> theta_samples(const KGridPlan& plan, bool reduce) {
    const int n = plan.samples_per_dimension();
    const double step = kPi / n;
    std::vector<double> t(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) t[static_cast<std::size_t>(j)] = -kPi / 2 + (j + 0.5) * step;
    const bool symmetric = reduce && plan.smoother.kind == SmootherKind::Jacobi && n % 2 == 0;
    const int first = symmetric ? n / 2 : 0;
    std::vector<Frequency> out;
    if (plan.dimension == 1) {
        for (int j = first; j < n; ++j) out.push_back(Frequency::of(t[static_cast<std::size_t>(j)]));
        return out;
    }
    for (int i = first; i < n; ++i)
        for (int j = symmetric ? i : 0; j < n; ++j)
            out.push_back(Frequency::of(t[static_cast<std::size_t>(i)], t[static_cast<std::size_t>(j)]));
    return out;
}

double max_amplification(const KGridPlan& plan) {
    plan.validate();
    const auto samples = theta_samples(plan);
    return tbb::parallel_reduce(
        tbb::blocked_range<std::size_t>(0, samples.size(), 16), 0.0,
        [&](const tbb::blocked_range<std::size_t>& r, double acc) {
            for (std::size_t i = r.begin(); i != r.end(); ++i)
                acc = std::max(acc, amplification_factor(plan, samples[i]));
            return acc;
        },
        [](double x, double y) { return std::max(x, y); });
}

bool amplification_at_most(const KGridPlan& plan, double bound) {
    plan.validate();
    const auto samples = theta_samples(plan);
    std::atomic<bool> exceeded{false};
    tbb::parallel_for(tbb::blocked_range<std::size_t>(0, samples.size(), 16),
                      [&](const tbb::blocked_range<std::size_t>& r) {
                          for (std::size_t i = r.begin(); i != r.end(); ++i) {
                              if (exceeded.load(std::memory_order_relaxed)) return;
                              if (!(amplification_factor(plan, samples[i]) <= bound)) exceeded = true;
                          }
                      });
    return !exceeded.load();
}

double beta_min(const KGridPlan& plan, const BisectionSettings& s) {
    plan.validate();
    if (plan.sigma >= 0.0) throw InputError("beta_min: sigma must be negative");
    try {
        return bisect_shift([&](double b) { return amplification_at_most(plan.with_beta(b), 1.0); }, s);
    } catch (const BracketError& e) {
        throw BracketError("beta_min (" + plan_text(plan) + "): " + e.what(), e.ceiling());
    }
}

SmootherBounds smoother_beta_min(const LevelGeometry& g, double sigma, double omega) {
    if (!(sigma < 0.0)) throw InputError("smoother_beta_min: sigma must be negative");
    if (omega <= 0.0 || omega > 1.0) throw InputError("smoother_beta_min: omega must lie in (0, 1]");
    const double h = g.mesh_width();
    const double x = sigma * h * h;
    const double q0 = 4.0 / ((omega - 2.0) * x) - 1.0;
    const double qpi = -(omega * (4.0 + x) * (4.0 + x) - 2.0 * (2.0 + x) * (4.0 + x)) /
                       ((omega - 2.0) * x * x);
    SmootherBounds b;
    b.theta_zero = std::sqrt(std::max(0.0, q0));
    b.theta_pi = std::sqrt(std::max(0.0, qpi));
    b.combined = std::max(b.theta_zero, b.theta_pi);
    return b;
}

double max_smoother_amplification(const KGridPlan& plan) {
    plan.validate();
    const auto samples = theta_samples(plan, false);
    const LevelGeometry g = plan.geometry(1);
    double worst = 0.0;
    for (const auto& t0 : samples) {
        for (const auto& f : harmonics(t0).members) {
            auto s = smoother_symbol(f, g, plan.wavenumber(), plan.smoother);
            if (!s) return kInf;
            worst = std::max(worst, std::abs(*s));
        }
    }
    return worst;
}

double smoother_numeric_beta_min(const KGridPlan& plan, const BisectionSettings& s) {
    if (!(plan.sigma < 0.0)) throw InputError("smoother_numeric_beta_min: sigma must be negative");
    return bisect_shift([&](double b) { return max_smoother_amplification(plan.with_beta(b)) <= 1.0; }, s);
}

std::optional<double> resonance_frequency(double sigma, const LevelGeometry& g) {
    const double h = g.mesh_width();
    const double x = -sigma * h * h;
    if (x < 0.0 || x > 1.0) return std::nullopt;
    return std::asin(std::sqrt(x));
}

std::optional<CMatrix> preconditioned_eigenmatrix(const KGridPlan& plan, const Frequency& theta0) {
    auto m = assemble_eigenmatrix(plan, theta0);
    if (!m) return std::nullopt;
    const auto members = frequency_tree(theta0, plan.levels).front();
    const LevelGeometry g = plan.geometry(1);
    const double h = g.mesh_width();
    const Eigen::Index n = m->rows();
    CMatrix k = CMatrix::Identity(n, n) - matrix_power(*m, plan.mu);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& f = members[static_cast<std::size_t>(i)];
        const Complex a_shift = discretization_symbol(f, g, plan.wavenumber());
        if (std::abs(a_shift) * h * h < kResonanceThreshold) return std::nullopt;
        const Complex a_plain = discretization_symbol(f, g, plan.wavenumber().unshifted());
        k.row(i) *= a_plain;
        k.col(i) /= a_shift;
    }
    return k;
}

PreconditionedSpectrum preconditioned_spectrum(const KGridPlan& plan) {
    plan.validate();
    const auto samples = theta_samples(plan);
    std::vector<std::vector<Complex>> parts(samples.size());
    std::atomic<bool> resonant{false};
    tbb::parallel_for(tbb::blocked_range<std::size_t>(0, samples.size(), 16),
                      [&](const tbb::blocked_range<std::size_t>& r) {
                          for (std::size_t i = r.begin(); i != r.end(); ++i) {
                              auto k = preconditioned_eigenmatrix(plan, samples[i]);
                              if (!k || !all_finite(*k)) {
                                  resonant = true;
                                  continue;
                              }
                              parts[i] = eigenvalues(*k).eigenvalues;
                          }
                      });
    PreconditionedSpectrum out;
    out.resonant = resonant.load();
    for (auto& p : parts) out.eigenvalues.insert(out.eigenvalues.end(), p.begin(), p.end());
    return out;
}

double angular_extent(const std::vector<Complex>& points) {
    if (points.empty()) return 0.0;
    double scale = 0.0;
    for (const auto& z : points) scale = std::max(scale, std::abs(z));
    std::vector<double> ang;
    ang.reserve(points.size());
    for (const auto& z : points) {
        if (std::abs(z) <= kResonanceThreshold * std::max(1.0, scale)) return 2 * kPi;
        ang.push_back(std::arg(z));
    }
    std::sort(ang.begin(), ang.end());
    double gap = ang.front() + 2 * kPi - ang.back();
    for (std::size_t i = 1; i < ang.size(); ++i) gap = std::max(gap, ang[i] - ang[i - 1]);
    return 2 * kPi - gap;
}

bool half_plane_condition(const KGridPlan& plan) {
    const auto spec = preconditioned_spectrum(plan);
    if (spec.resonant) return false;
    return angular_extent(spec.eigenvalues) < kPi;
}

double hpc_min_beta(const KGridPlan& plan, const BisectionSettings& s) {
    plan.validate();
    if (plan.sigma >= 0.0) throw InputError("hpc_min_beta: sigma must be negative");
    try {
        return bisect_shift([&](double b) { return half_plane_condition(plan.with_beta(b)); }, s);
    } catch (const BracketError& e) {
        throw BracketError("hpc_min_beta (" + plan_text(plan) + "): " + e.what(), e.ceiling());
    }
}

bool ellipse_contains(const EllipseParams& e, Complex z, double rel_tol) {
    const double sum = std::abs(z - (e.c - e.d)) + std::abs(z - (e.c + e.d));
    return sum <= 2 * e.a * (1.0 + rel_tol);
}

double ellipse_rho_estimate(const std::vector<Complex>& spectrum, const EllipseParams& e) {
    if (e.d < 0.0 || e.a < e.d) throw EstimateError("ellipse: require 0 <= d <= a");
    if (!(e.c > e.a)) throw EstimateError("ellipse: origin is not excluded");
    for (const auto& z : spectrum)
        if (!ellipse_contains(e, z)) throw EstimateError("ellipse: spectrum point outside ellipse");
    return (e.a + std::sqrt(e.a * e.a - e.d * e.d)) / (e.c + std::sqrt(e.c * e.c - e.d * e.d));
}

std::optional<EllipseParams> fit_ellipse(const std::vector<Complex>& spectrum, int focal_steps) {
    if (spectrum.empty()) return std::nullopt;
    double lo = spectrum.front().real(), hi = lo;
    for (const auto& z : spectrum) {
        lo = std::min(lo, z.real());
        hi = std::max(hi, z.real());
    }
    const double c = 0.5 * (lo + hi);
    if (!(c > 0.0)) return std::nullopt;
    std::optional<EllipseParams> best;
    double best_rho = kInf;
    for (int i = 0; i < focal_steps; ++i) {
        const double d = c * i / focal_steps;
        double a = d;
        for (const auto& z : spectrum)
            a = std::max(a, 0.5 * (std::abs(z - (c - d)) + std::abs(z - (c + d))));
        if (!(c > a)) continue;
        const double rho = (a + std::sqrt(a * a - d * d)) / (c + std::sqrt(c * c - d * d));
        if (rho < best_rho) {
            best_rho = rho;
            best = EllipseParams{c, d, a};
        }
    }
    return best;
}

}  // namespace cslfa
