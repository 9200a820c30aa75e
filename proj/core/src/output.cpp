#include "cslfa/output.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

namespace cslfa {

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch == '\n' ? ' ' : ch;
    }
    return out + "\"";
}

std::string optional_real(double v) { return std::isnan(v) ? std::string() : format_real(v); }

nlohmann::json json_real(double v) {
    if (std::isnan(v)) return nullptr;
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return std::stod(format_real(v));
}

}  // namespace

std::string format_real(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) return "0";
    return fmt::format("{:.9g}", v);
}

void write_csv(const SweepResult& r, std::ostream& os) {
    const std::string hash = r.config.hash();
    os << "# cslfa " << r.version << "\n";
    os << "# kind: " << kind_name(r.config.kind) << "\n";
    if (!r.config.figure.empty()) os << "# figure: " << r.config.figure << "\n";
    os << "# seed: " << r.config.seed << "\n";
    os << "# config_hash: " << hash << "\n";
    for (const auto& [k, v] : r.metadata) os << "# " << k << ": " << v << "\n";
    for (const auto& [k, v] : r.summary) os << "# summary " << k << ": " << format_real(v) << "\n";
    os << "# config: " << r.config.canonical() << "\n";
    os << "sigma,beta,mu,theta1,theta2,metric,value,status,reason,config_hash\n";
    for (const auto& row : r.rows) {
        os << optional_real(row.sigma) << ',' << optional_real(row.beta) << ','
           << (row.mu > 0 ? std::to_string(row.mu) : std::string()) << ',' << optional_real(row.theta1) << ','
           << optional_real(row.theta2) << ',' << csv_field(row.metric) << ',' << format_real(row.value) << ','
           << csv_field(row.status) << ',' << csv_field(row.reason) << ',' << hash << "\n";
    }
}

void write_json(const SweepResult& r, std::ostream& os) {
    nlohmann::json j;
    j["provenance"] = {{"tool", "cslfa"},
                       {"version", r.version},
                       {"kind", kind_name(r.config.kind)},
                       {"figure", r.config.figure},
                       {"seed", r.config.seed},
                       {"config_hash", r.config.hash()},
                       {"config", nlohmann::json::parse(r.config.canonical())}};
    nlohmann::json meta = nlohmann::json::object();
    for (const auto& [k, v] : r.metadata) meta[k] = v;
    j["metadata"] = meta;
    const std::string hash = r.config.hash();
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : r.rows) {
        nlohmann::json o;
        o["sigma"] = json_real(row.sigma);
        o["beta"] = json_real(row.beta);
        o["mu"] = row.mu > 0 ? nlohmann::json(row.mu) : nlohmann::json(nullptr);
        o["theta1"] = json_real(row.theta1);
        o["theta2"] = json_real(row.theta2);
        o["metric"] = row.metric;
        o["value"] = json_real(row.value);
        o["status"] = row.status;
        o["reason"] = row.reason;
        o["config_hash"] = hash;
        rows.push_back(o);
    }
    j["rows"] = rows;
    nlohmann::json summary = nlohmann::json::object();
    for (const auto& [k, v] : r.summary) summary[k] = json_real(v);
    j["summary"] = summary;
    os << j.dump(2) << "\n";
}

void write_result(const SweepResult& r, std::ostream& os) {
    if (r.json_output())
        write_json(r, os);
    else
        write_csv(r, os);
}

std::string resolve_output_path(const RunConfig& c, const std::string& explicit_path) {
    std::string p = explicit_path;
    if (p.empty()) p = c.output;
    if (p.empty()) p = kind_name(c.kind) + (c.kind == ExperimentKind::ConvfactorTable ||
                                                    c.kind == ExperimentKind::InvarianceCheck
                                                ? ".json"
                                                : ".csv");
    const std::filesystem::path path(p);
    if (path.is_absolute()) return path.string();
    if (const char* dir = std::getenv(kOutputDirEnv); dir && *dir) return (std::filesystem::path(dir) / path).string();
    return path.string();
}

void write_result_file(const SweepResult& r, const std::string& path) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream os(p, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    write_result(r, os);
    if (!os) throw std::runtime_error("failed writing " + path);
}

}  // namespace cslfa
