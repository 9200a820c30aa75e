#include <algorithm>
#include <iostream>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <tbb/global_control.h>

#include "cslfa/config.hpp"
#include "cslfa/experiments.hpp"
#include "cslfa/output.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNumerical = 1;
constexpr int kExitConfig = 2;

struct CommandOptions {
    std::string config;
    std::vector<std::string> sets;
    std::string output;
    bool to_stdout = false;
};

int report_violations(const std::vector<std::string>& v, const std::string& source) {
    std::cerr << source << ": invalid configuration\n";
    for (const auto& s : v) std::cerr << "  " << s << "\n";
    return kExitConfig;
}

bool mentions_missing_kind(const std::vector<std::string>& v) {
    return std::any_of(v.begin(), v.end(), [](const std::string& s) { return s.rfind("kind: missing", 0) == 0; });
}

int run_command(cslfa::ExperimentKind kind, const CommandOptions& opt) {
    std::vector<cslfa::ConfigOverride> overrides;
    try {
        for (const auto& s : opt.sets) overrides.push_back(cslfa::parse_override(s));
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return kExitConfig;
    }
    auto loaded = cslfa::load_config(opt.config, overrides);
    if (mentions_missing_kind(loaded.violations)) {
        overrides.insert(overrides.begin(), {"kind", cslfa::kind_name(kind)});
        loaded = cslfa::load_config(opt.config, overrides);
    }
    const std::string source = opt.config.empty() ? "defaults" : opt.config;
    if (!loaded.ok()) return report_violations(loaded.violations, source);
    if (loaded.config.kind != kind) {
        std::cerr << source << ": kind '" << cslfa::kind_name(loaded.config.kind) << "' belongs to subcommand '"
                  << cslfa::kind_command(loaded.config.kind) << "'\n";
        return kExitConfig;
    }

    cslfa::SweepResult result;
    try {
        result = cslfa::run(loaded.config);
    } catch (const std::exception& e) {
        std::cerr << "run failed: " << e.what() << "\n";
        return kExitNumerical;
    }
    if (opt.to_stdout) {
        cslfa::write_result(result, std::cout);
    } else {
        const std::string path = cslfa::resolve_output_path(loaded.config, opt.output);
        try {
            cslfa::write_result_file(result, path);
        } catch (const std::exception& e) {
            std::cerr << e.what() << "\n";
            return kExitNumerical;
        }
        std::cout << "wrote " << path << "\n";
    }
    std::cerr << "seed " << loaded.config.seed << ", config " << loaded.config.hash() << ", " << result.rows.size()
              << " rows, " << result.failed_cells << "/" << result.total_cells << " failed cells\n";
    for (const auto& [k, v] : result.summary)
        if (k != "failed_cells" && k != "total_cells") std::cerr << k << " " << cslfa::format_real(v) << "\n";
    if (result.threshold_exceeded) std::cerr << "numerical failure threshold exceeded\n";
    return result.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fourier analysis and solver experiments for shifted-Laplacian multigrid"};
    app.require_subcommand(1);
    int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    app.add_option("-j,--jobs", jobs, "Concurrent workers for sweeps")->check(CLI::PositiveNumber);

    struct Entry {
        cslfa::ExperimentKind kind;
        const char* help;
    };
    const std::vector<Entry> entries = {
        {cslfa::ExperimentKind::BetaCurve, "Minimal shift versus wavenumber from k-grid analysis"},
        {cslfa::ExperimentKind::SmootherCurve, "Smoother-only shift limits"},
        {cslfa::ExperimentKind::AmplificationProfile, "Amplification factor over frequency"},
        {cslfa::ExperimentKind::Heatmap, "Krylov iteration counts over wavenumber and shift"},
        {cslfa::ExperimentKind::IterationMinimum, "Shift minimizing Krylov iterations"},
        {cslfa::ExperimentKind::HpcCurve, "Half-plane condition shift versus wavenumber"},
        {cslfa::ExperimentKind::ConvfactorTable, "Measured and estimated Krylov convergence factors"},
        {cslfa::ExperimentKind::InvarianceCheck, "Minimal shift under joint scaling of wavenumber and grid"},
    };
    std::vector<std::unique_ptr<CommandOptions>> opts;
    std::vector<std::pair<CLI::App*, cslfa::ExperimentKind>> commands;
    for (const auto& e : entries) {
        auto o = std::make_unique<CommandOptions>();
        auto* sub = app.add_subcommand(cslfa::kind_command(e.kind), e.help);
        sub->add_option("-c,--config", o->config, "YAML run configuration")->check(CLI::ExistingFile);
        sub->add_option("-s,--set", o->sets, "Override a key: key=value (repeatable)");
        sub->add_option("-o,--output", o->output, "Output file (relative paths go under $CSLFA_OUTPUT_DIR)");
        sub->add_flag("--stdout", o->to_stdout, "Write the result to standard output");
        commands.emplace_back(sub, e.kind);
        opts.push_back(std::move(o));
    }
    std::string validate_path;
    auto* validate = app.add_subcommand("validate", "Check a configuration file");
    validate->add_option("config", validate_path, "YAML run configuration")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    if (validate->parsed()) {
        const auto v = cslfa::validate(validate_path);
        if (!v.empty()) return report_violations(v, validate_path);
        std::cout << validate_path << ": ok\n";
        return kExitOk;
    }

    tbb::global_control limit(tbb::global_control::max_allowed_parallelism, static_cast<std::size_t>(jobs));
    for (std::size_t i = 0; i < commands.size(); ++i)
        if (commands[i].first->parsed()) return run_command(commands[i].second, *opts[i]);
    return kExitConfig;
}
