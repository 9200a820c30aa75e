#pragma once

#include <ostream>
#include <string>

#include "cslfa/experiments.hpp"

namespace cslfa {

inline constexpr const char* kOutputDirEnv = "CSLFA_OUTPUT_DIR";

// 9 significant digits; "nan" and "inf" spelled out.
std::string format_real(double v);

void write_csv(const SweepResult& r, std::ostream& os);
void write_json(const SweepResult& r, std::ostream& os);
void write_result(const SweepResult& r, std::ostream& os);

// Explicit path wins; a relative path is placed under $CSLFA_OUTPUT_DIR when
// set.  Falls back to the config's output key, then to <kind>.<csv|json>.
std::string resolve_output_path(const RunConfig& c, const std::string& explicit_path);

// Creates parent directories.  Throws std::runtime_error on I/O failure.
void write_result_file(const SweepResult& r, const std::string& path);

}  // namespace cslfa
