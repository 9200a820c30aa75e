#include "cslfa/config.hpp"

#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>
#include <yaml-cpp/yaml.h>

#include "cslfa/errors.hpp"

namespace cslfa {

namespace {

struct KindInfo {
    ExperimentKind kind;
    const char* name;
    const char* command;
};

constexpr KindInfo kKinds[] = {
    {ExperimentKind::BetaCurve, "beta-curve", "beta-min"},
    {ExperimentKind::SmootherCurve, "smoother-curve", "smoother"},
    {ExperimentKind::AmplificationProfile, "amplification-profile", "amp-profile"},
    {ExperimentKind::Heatmap, "heatmap", "heatmap"},
    {ExperimentKind::IterationMinimum, "iteration-minimum", "iter-min"},
    {ExperimentKind::HpcCurve, "hpc-curve", "hpc"},
    {ExperimentKind::ConvfactorTable, "convfactor-table", "convfactor"},
    {ExperimentKind::InvarianceCheck, "invariance-check", "invariance"},
};

const std::set<std::string> kKeys = {
    "kind",  "figure", "dimension", "N",     "levels",        "nu1",          "nu2",
    "omega", "smoother", "sigma",   "beta",  "mu",            "krylov",       "prune",
    "seed",  "theta_samples", "experimental", "invariance_tolerance", "failure_threshold", "output",
};

class Parser {
public:
    std::vector<std::string> violations;

    void fail(const std::string& key, const std::string& msg) { violations.push_back(key + ": " + msg); }

    bool real(const YAML::Node& n, const std::string& key, double& out) {
        try {
            if (!n.IsScalar()) {
                fail(key, "expected a number");
                return false;
            }
            const std::string s = n.Scalar();
            const auto slash = s.find('/');
            if (slash != std::string::npos) {
                const double num = std::stod(s.substr(0, slash));
                const double den = std::stod(s.substr(slash + 1));
                if (den == 0.0) throw std::invalid_argument("zero denominator");
                out = num / den;
            } else {
                out = n.as<double>();
            }
            if (!std::isfinite(out)) {
                fail(key, "must be finite");
                return false;
            }
            return true;
        } catch (const std::exception&) {
            fail(key, "expected a number, got '" + (n.IsScalar() ? n.Scalar() : std::string("?")) + "'");
            return false;
        }
    }

    bool integer(const YAML::Node& n, const std::string& key, long long& out) {
        double v = 0.0;
        if (!real(n, key, v)) return false;
        if (v != std::floor(v) || std::abs(v) > 9.0e15) {
            fail(key, "expected an integer");
            return false;
        }
        out = static_cast<long long>(v);
        return true;
    }

    bool boolean(const YAML::Node& n, const std::string& key, bool& out) {
        try {
            out = n.as<bool>();
            return true;
        } catch (const std::exception&) {
            fail(key, "expected true or false");
            return false;
        }
    }

    bool text(const YAML::Node& n, const std::string& key, std::string& out) {
        if (!n.IsScalar()) {
            fail(key, "expected a string");
            return false;
        }
        out = n.Scalar();
        return true;
    }

    // Scalar, flow list, {from, to, step} or {from, to, count[, spacing]}.
    bool real_range(const YAML::Node& n, const std::string& key, std::vector<double>& out) {
        out.clear();
        if (n.IsScalar()) {
            double v;
            if (!real(n, key, v)) return false;
            out.push_back(v);
            return true;
        }
        if (n.IsSequence()) {
            for (std::size_t i = 0; i < n.size(); ++i) {
                double v;
                if (!real(n[i], key + "[" + std::to_string(i) + "]", v)) return false;
                out.push_back(v);
            }
            return true;
        }
        if (!n.IsMap()) {
            fail(key, "expected a number, list or range map");
            return false;
        }
        for (const auto& kv : n) {
            const auto k = kv.first.as<std::string>();
            if (k != "from" && k != "to" && k != "step" && k != "count" && k != "spacing")
                fail(key, "unknown range key '" + k + "'");
        }
        double from, to;
        if (!n["from"] || !n["to"]) {
            fail(key, "range needs 'from' and 'to'");
            return false;
        }
        if (!real(n["from"], key + ".from", from) || !real(n["to"], key + ".to", to)) return false;
        if (n["step"]) {
            double step;
            if (!real(n["step"], key + ".step", step)) return false;
            if (!(step > 0.0)) {
                fail(key, "step must be positive");
                return false;
            }
            const double dir = to >= from ? 1.0 : -1.0;
            const long long count = static_cast<long long>(std::floor(std::abs(to - from) / step + 1e-9)) + 1;
            if (count > 1000000) {
                fail(key, "range too long");
                return false;
            }
            for (long long i = 0; i < count; ++i)
                out.push_back(std::round((from + dir * static_cast<double>(i) * step) * 1e12) / 1e12);
            return true;
        }
        long long count = 0;
        if (!n["count"]) {
            fail(key, "range needs 'step' or 'count'");
            return false;
        }
        if (!integer(n["count"], key + ".count", count)) return false;
        if (count < 1 || count > 1000000) {
            fail(key, "count must lie in [1, 1000000]");
            return false;
        }
        std::string spacing = "linear";
        if (n["spacing"] && !text(n["spacing"], key + ".spacing", spacing)) return false;
        if (spacing != "linear" && spacing != "log") {
            fail(key, "spacing must be linear or log");
            return false;
        }
        if (spacing == "log" && (from * to <= 0.0)) {
            fail(key, "log spacing needs endpoints of one sign, excluding zero");
            return false;
        }
        for (long long i = 0; i < count; ++i) {
            const double t = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
            double v;
            if (spacing == "linear") {
                v = from + t * (to - from);
            } else {
                const double s = from < 0 ? -1.0 : 1.0;
                v = s * std::exp(std::log(std::abs(from)) + t * (std::log(std::abs(to)) - std::log(std::abs(from))));
            }
            out.push_back(v);
        }
        return true;
    }
};

void set_path(YAML::Node node, const std::vector<std::string>& parts, std::size_t i, const YAML::Node& value) {
    if (i + 1 == parts.size()) {
        node[parts[i]] = value;
        return;
    }
    if (!node[parts[i]] || !node[parts[i]].IsMap()) node[parts[i]] = YAML::Node(YAML::NodeType::Map);
    set_path(node[parts[i]], parts, i + 1, value);
}

bool is_lfa_kind(ExperimentKind k) {
    return k == ExperimentKind::BetaCurve || k == ExperimentKind::AmplificationProfile ||
           k == ExperimentKind::HpcCurve || k == ExperimentKind::InvarianceCheck ||
           k == ExperimentKind::ConvfactorTable;
}

bool is_solver_kind(ExperimentKind k) {
    return k == ExperimentKind::Heatmap || k == ExperimentKind::IterationMinimum ||
           k == ExperimentKind::ConvfactorTable;
}

void semantic_checks(const RunConfig& c, bool sigma_given, bool beta_given, Parser& p) {
    if (c.dimension != 1 && c.dimension != 2) p.fail("dimension", "must be 1 or 2");
    if (c.intervals < 4 || (c.intervals & (c.intervals - 1)) != 0) p.fail("N", "must be a power of two >= 4");
    if (c.nu1 < 0 || c.nu2 < 0 || c.nu1 + c.nu2 < 1) p.fail("nu1/nu2", "need nu1, nu2 >= 0 and nu1+nu2 >= 1");
    if (c.smoother.omega < 0.0 || c.smoother.omega > 1.0) p.fail("omega", "must lie in [0, 1]");
    if (c.smoother.kind == SmootherKind::GaussSeidel && c.dimension != 1)
        p.fail("smoother", "gauss-seidel is available in 1D only");
    if (is_lfa_kind(c.kind)) {
        if (c.levels < 2 || c.levels > 4) p.fail("levels", "Fourier analyses need levels in {2, 3, 4}");
    } else if (c.levels != 0 && c.levels < 2) {
        p.fail("levels", "must be >= 2 or V");
    }
    if (c.intervals >= 4 && (c.intervals & (c.intervals - 1)) == 0) {
        int k = c.levels;
        if (k == 0) {
            k = 1;
            for (int n = c.intervals; n / 2 >= 4; n /= 2) ++k;
        }
        const int coarse = c.intervals >> std::min(k - 1, 30);
        if (is_solver_kind(c.kind) && coarse < 4)
            p.fail("levels", "coarsest grid needs at least three interior points per dimension");
        else if (coarse < 2)
            p.fail("levels", "too many levels for N");
    }
    const bool sigma_required = c.kind != ExperimentKind::Heatmap;
    if (!sigma_given && sigma_required) p.fail("sigma", "missing wavenumber range");
    if (sigma_given && c.sigmas.empty()) p.fail("sigma", "range is empty");
    for (double s : c.sigmas)
        if (!(s < 0.0)) {
            p.fail("sigma", "values must be strictly negative");
            break;
        }
    const bool beta_required =
        c.kind == ExperimentKind::AmplificationProfile || c.kind == ExperimentKind::ConvfactorTable;
    if (beta_required && !beta_given) p.fail("beta", "missing shift grid");
    if (beta_given && c.betas.empty()) p.fail("beta", "grid is empty");
    for (double b : c.betas)
        if (!(b >= 0.0)) {
            p.fail("beta", "values must be non-negative");
            break;
        }
    if (c.mus.empty()) p.fail("mu", "list is empty");
    for (int m : c.mus)
        if (m < 1) {
            p.fail("mu", "values must be >= 1");
            break;
        }
    if (c.kind == ExperimentKind::ConvfactorTable) {
        if (c.sigmas.size() != 1) p.fail("sigma", "convfactor-table takes a single wavenumber");
        if (c.mus.size() != 1) p.fail("mu", "convfactor-table takes a single mu");
    }
    if (!(c.krylov.tolerance > 0.0 && c.krylov.tolerance < 1.0)) p.fail("krylov.tolerance", "must lie in (0, 1)");
    if (c.krylov.cap < 0) p.fail("krylov.cap", "must be >= 0");
    if (c.theta_samples < 0 || c.theta_samples % 2 != 0) p.fail("theta_samples", "must be even and >= 0");
    if (c.factor_iterations < 20) p.fail("experimental.iterations", "must be >= 20");
    if (c.experimental_levels != 0 && c.experimental_levels < 2) p.fail("experimental.levels", "must be >= 2 or V");
    if (!(c.experimental_tolerance >= 0.0)) p.fail("experimental.tolerance", "must be >= 0");
    if (!(c.invariance_tolerance > 0.0)) p.fail("invariance_tolerance", "must be positive");
    if (!(c.failure_threshold >= 0.0 && c.failure_threshold <= 1.0)) p.fail("failure_threshold", "must lie in [0, 1]");
}

std::vector<double> default_heatmap_sigmas(const RunConfig& c) {
    const double h = 1.0 / c.intervals;
    const double lo = -10.0, hi = -4.0 * c.dimension / (h * h);
    std::vector<double> out;
    const int count = 64;
    for (int i = 0; i < count; ++i) {
        const double t = static_cast<double>(i) / (count - 1);
        out.push_back(-std::exp(std::log(-lo) + t * (std::log(-hi) - std::log(-lo))));
    }
    return out;
}

std::vector<double> default_betas() {
    std::vector<double> out;
    for (int i = 0; i <= 50; ++i) out.push_back(std::round(i * 0.02 * 1e12) / 1e12);
    return out;
}

LoadResult parse_root(YAML::Node root, const std::vector<ConfigOverride>& overrides) {
    LoadResult res;
    Parser p;
    if (!root || root.IsNull()) root = YAML::Node(YAML::NodeType::Map);
    if (!root.IsMap()) {
        res.violations.push_back("config: top level must be a key-value map");
        return res;
    }
    for (const auto& o : overrides) {
        std::vector<std::string> parts;
        std::stringstream ss(o.key);
        for (std::string part; std::getline(ss, part, '.');) parts.push_back(part);
        if (parts.empty() || o.key.empty()) {
            p.fail("--set", "empty key");
            continue;
        }
        try {
            set_path(root, parts, 0, YAML::Load(o.value));
        } catch (const YAML::Exception& e) {
            p.fail(o.key, std::string("cannot parse override value: ") + e.what());
        }
    }
    for (const auto& kv : root) {
        const auto k = kv.first.as<std::string>();
        if (!kKeys.count(k)) p.fail(k, "unknown key");
    }

    RunConfig& c = res.config;
    std::string s;
    long long i = 0;
    double d = 0.0;
    if (!root["kind"]) {
        p.fail("kind", "missing experiment kind");
    } else if (p.text(root["kind"], "kind", s) && !parse_kind(s, c.kind)) {
        p.fail("kind", "unknown experiment kind '" + s + "'");
    }
    if (root["figure"]) p.text(root["figure"], "figure", c.figure);
    if (root["dimension"] && p.integer(root["dimension"], "dimension", i)) c.dimension = static_cast<int>(i);
    if (root["N"] && p.integer(root["N"], "N", i)) c.intervals = static_cast<int>(i);
    if (root["levels"]) {
        const auto& n = root["levels"];
        if (n.IsScalar() && (n.Scalar() == "V" || n.Scalar() == "full"))
            c.levels = 0;
        else if (p.integer(n, "levels", i))
            c.levels = static_cast<int>(i);
    }
    if (root["nu1"] && p.integer(root["nu1"], "nu1", i)) c.nu1 = static_cast<int>(i);
    if (root["nu2"] && p.integer(root["nu2"], "nu2", i)) c.nu2 = static_cast<int>(i);
    if (root["omega"] && p.real(root["omega"], "omega", d)) c.smoother.omega = d;
    if (root["smoother"] && p.text(root["smoother"], "smoother", s)) {
        if (s == "jacobi")
            c.smoother.kind = SmootherKind::Jacobi;
        else if (s == "gauss-seidel")
            c.smoother.kind = SmootherKind::GaussSeidel;
        else
            p.fail("smoother", "must be jacobi or gauss-seidel");
    }
    const bool sigma_given = static_cast<bool>(root["sigma"]);
    if (sigma_given) p.real_range(root["sigma"], "sigma", c.sigmas);
    const bool beta_given = static_cast<bool>(root["beta"]);
    if (beta_given) p.real_range(root["beta"], "beta", c.betas);
    if (root["mu"]) {
        std::vector<double> m;
        if (p.real_range(root["mu"], "mu", m)) {
            c.mus.clear();
            for (double v : m) {
                if (v != std::floor(v)) {
                    p.fail("mu", "values must be integers");
                    break;
                }
                c.mus.push_back(static_cast<int>(v));
            }
        }
    }
    if (root["krylov"]) {
        const auto& k = root["krylov"];
        if (!k.IsMap()) {
            p.fail("krylov", "expected a map");
        } else {
            for (const auto& kv : k) {
                const auto key = kv.first.as<std::string>();
                if (key != "method" && key != "tolerance" && key != "cap" && key != "stopping")
                    p.fail("krylov." + key, "unknown key");
            }
            if (k["method"] && p.text(k["method"], "krylov.method", s)) {
                if (s == "gmres")
                    c.krylov.method = KrylovMethod::Gmres;
                else if (s == "bicgstab")
                    c.krylov.method = KrylovMethod::BiCgStab;
                else
                    p.fail("krylov.method", "must be gmres or bicgstab");
            }
            if (k["tolerance"] && p.real(k["tolerance"], "krylov.tolerance", d)) c.krylov.tolerance = d;
            if (k["cap"] && p.integer(k["cap"], "krylov.cap", i)) c.krylov.cap = static_cast<int>(i);
            if (k["stopping"] && p.text(k["stopping"], "krylov.stopping", s)) {
                if (s == "true")
                    c.krylov.stopping = StoppingResidual::True;
                else if (s == "preconditioned")
                    c.krylov.stopping = StoppingResidual::Preconditioned;
                else
                    p.fail("krylov.stopping", "must be true or preconditioned");
            }
        }
    }
    if (root["prune"]) p.boolean(root["prune"], "prune", c.prune);
    if (root["seed"]) {
        try {
            c.seed = root["seed"].as<std::uint64_t>();
        } catch (const std::exception&) {
            p.fail("seed", "expected a non-negative integer");
        }
    }
    if (root["theta_samples"] && p.integer(root["theta_samples"], "theta_samples", i))
        c.theta_samples = static_cast<int>(i);
    if (root["experimental"]) {
        const auto& e = root["experimental"];
        if (e.IsScalar()) {
            p.boolean(e, "experimental", c.experimental);
        } else if (e.IsMap()) {
            c.experimental = true;
            for (const auto& kv : e) {
                const auto key = kv.first.as<std::string>();
                if (key != "enabled" && key != "levels" && key != "iterations" && key != "tolerance")
                    p.fail("experimental." + key, "unknown key");
            }
            if (e["enabled"]) p.boolean(e["enabled"], "experimental.enabled", c.experimental);
            if (e["levels"]) {
                if (e["levels"].IsScalar() && (e["levels"].Scalar() == "V" || e["levels"].Scalar() == "full"))
                    c.experimental_levels = 0;
                else if (p.integer(e["levels"], "experimental.levels", i))
                    c.experimental_levels = static_cast<int>(i);
            }
            if (e["iterations"] && p.integer(e["iterations"], "experimental.iterations", i))
                c.factor_iterations = static_cast<int>(i);
            if (e["tolerance"] && p.real(e["tolerance"], "experimental.tolerance", d))
                c.experimental_tolerance = d;
        } else {
            p.fail("experimental", "expected a boolean or a map");
        }
    }
    if (root["invariance_tolerance"] && p.real(root["invariance_tolerance"], "invariance_tolerance", d))
        c.invariance_tolerance = d;
    if (root["failure_threshold"] && p.real(root["failure_threshold"], "failure_threshold", d))
        c.failure_threshold = d;
    if (root["output"]) p.text(root["output"], "output", c.output);

    if (p.violations.empty()) semantic_checks(c, sigma_given, beta_given, p);
    if (p.violations.empty()) {
        if (!sigma_given && c.kind == ExperimentKind::Heatmap) c.sigmas = default_heatmap_sigmas(c);
        if (!beta_given && (c.kind == ExperimentKind::Heatmap || c.kind == ExperimentKind::IterationMinimum))
            c.betas = default_betas();
    }
    res.violations = std::move(p.violations);
    return res;
}

}  // namespace

std::string kind_name(ExperimentKind k) {
    for (const auto& i : kKinds)
        if (i.kind == k) return i.name;
    return "unknown";
}

std::string kind_command(ExperimentKind k) {
    for (const auto& i : kKinds)
        if (i.kind == k) return i.command;
    return "unknown";
}

bool parse_kind(const std::string& s, ExperimentKind& out) {
    for (const auto& i : kKinds)
        if (s == i.name) {
            out = i.kind;
            return true;
        }
    return false;
}

bool kind_from_command(const std::string& s, ExperimentKind& out) {
    for (const auto& i : kKinds)
        if (s == i.command) {
            out = i.kind;
            return true;
        }
    return false;
}

std::string RunConfig::canonical() const {
    nlohmann::json j;
    j["kind"] = kind_name(kind);
    j["figure"] = figure;
    j["dimension"] = dimension;
    j["N"] = intervals;
    j["levels"] = levels == 0 ? nlohmann::json("V") : nlohmann::json(levels);
    j["nu1"] = nu1;
    j["nu2"] = nu2;
    j["omega"] = smoother.omega;
    j["smoother"] = smoother.kind == SmootherKind::Jacobi ? "jacobi" : "gauss-seidel";
    j["sigma"] = sigmas;
    j["beta"] = betas;
    j["mu"] = mus;
    j["krylov"] = {{"method", krylov.method == KrylovMethod::Gmres ? "gmres" : "bicgstab"},
                   {"tolerance", krylov.tolerance},
                   {"cap", krylov.cap},
                   {"stopping", krylov.stopping == StoppingResidual::True ? "true" : "preconditioned"}};
    j["prune"] = prune;
    j["seed"] = seed;
    j["theta_samples"] = theta_samples;
    j["experimental"] = {{"enabled", experimental},
                         {"levels", experimental_levels == 0 ? nlohmann::json("V") : nlohmann::json(experimental_levels)},
                         {"iterations", factor_iterations},
                         {"tolerance", experimental_tolerance}};
    j["invariance_tolerance"] = invariance_tolerance;
    j["failure_threshold"] = failure_threshold;
    return j.dump();
}

std::string RunConfig::hash() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : canonical()) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return fmt::format("{:016x}", h);
}

ConfigOverride parse_override(const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0)
        throw ConfigError("override '" + assignment + "' is not of the form key=value");
    return {assignment.substr(0, eq), assignment.substr(eq + 1)};
}

LoadResult load_config_text(const std::string& yaml, const std::vector<ConfigOverride>& overrides) {
    YAML::Node root;
    try {
        root = YAML::Load(yaml);
    } catch (const YAML::Exception& e) {
        LoadResult r;
        r.violations.push_back(std::string("config: ") + e.what());
        return r;
    }
    return parse_root(root, overrides);
}

LoadResult load_config(const std::string& path, const std::vector<ConfigOverride>& overrides) {
    if (path.empty()) return parse_root(YAML::Node(YAML::NodeType::Map), overrides);
    YAML::Node root;
    try {
        root = YAML::LoadFile(path);
    } catch (const YAML::Exception& e) {
        LoadResult r;
        r.violations.push_back(path + ": " + e.what());
        return r;
    }
    return parse_root(root, overrides);
}

std::vector<std::string> validate(const std::string& path) { return load_config(path).violations; }

}  // namespace cslfa
