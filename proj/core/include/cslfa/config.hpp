#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cslfa/krylov.hpp"
#include "cslfa/symbols.hpp"

namespace cslfa {

enum class ExperimentKind {
    BetaCurve,
    SmootherCurve,
    AmplificationProfile,
    Heatmap,
    IterationMinimum,
    HpcCurve,
    ConvfactorTable,
    InvarianceCheck,
};

std::string kind_name(ExperimentKind k);
// CLI subcommand that runs the kind.
std::string kind_command(ExperimentKind k);
bool parse_kind(const std::string& s, ExperimentKind& out);
bool kind_from_command(const std::string& s, ExperimentKind& out);

struct RunConfig {
    ExperimentKind kind = ExperimentKind::BetaCurve;
    std::string figure;
    int dimension = 1;
    int intervals = 64;
    int levels = 2;  // 0 = full V-cycle depth (solver kinds)
    int nu1 = 1;
    int nu2 = 0;
    SmootherSpec smoother;
    std::vector<double> sigmas;
    std::vector<double> betas;
    std::vector<int> mus{1};
    KrylovSpec krylov;
    bool prune = false;
    std::uint64_t seed = 20240101;
    int theta_samples = 0;
    bool experimental = false;
    int experimental_levels = 2;
    int factor_iterations = 200;
    double experimental_tolerance = 0.01;
    double invariance_tolerance = 1e-3;
    double failure_threshold = 0.0;  // tolerated fraction of failed cells
    std::string output;

    // Canonical one-line JSON of every resolved field except the output path.
    std::string canonical() const;
    std::string hash() const;  // FNV-1a 64 of canonical(), hex
};

struct ConfigOverride {
    std::string key;    // dotted path, e.g. krylov.method
    std::string value;  // YAML scalar or flow sequence/map
};

struct LoadResult {
    RunConfig config;
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

// Empty path loads the defaults.  Never throws for content problems; they are
// reported as violations.
LoadResult load_config(const std::string& path, const std::vector<ConfigOverride>& overrides = {});
LoadResult load_config_text(const std::string& yaml, const std::vector<ConfigOverride>& overrides = {});

std::vector<std::string> validate(const std::string& path);

ConfigOverride parse_override(const std::string& assignment);

}  // namespace cslfa
