#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "cslfa/config.hpp"

namespace cslfa {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct SweepRow {
    double sigma = kNaN;
    double beta = kNaN;
    int mu = 0;  // 0 = not applicable
    double theta1 = kNaN;
    double theta2 = kNaN;
    std::string metric;
    double value = kNaN;
    std::string status = "ok";
    std::string reason;

    bool failed() const { return status == "failed" || status == "bracket-exhausted"; }
};

struct SweepResult {
    RunConfig config;
    std::string version;
    std::vector<SweepRow> rows;
    std::vector<std::pair<std::string, double>> summary;
    std::vector<std::pair<std::string, std::string>> metadata;
    int total_cells = 0;
    int failed_cells = 0;
    bool threshold_exceeded = false;

    bool json_output() const;
    int exit_code() const { return threshold_exceeded ? 1 : 0; }
};

// Deterministic for a given config; sweep cells may run concurrently but rows
// are merged in cell order.
SweepResult run(const RunConfig& config);

std::string library_version();

}  // namespace cslfa
