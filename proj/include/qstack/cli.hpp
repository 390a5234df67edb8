#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace qstack::cli {

inline constexpr const char* kReportSchema = "qstack-report";
inline constexpr const char* kReportSchemaVersion = "1.0.0";

struct RunOptions {
  std::uint64_t seed = 0;
  std::size_t budget = 50;  // random verify-stack cases per stack
  std::size_t bound = 2;    // largest base for exhaustive sweeps, largest |A| for check-sheaf
  bool parallel = true;
};

struct RunResult {
  int exit_code = 0;   // 0 pass, 1 verified failure, 2 input error
  std::string text;    // one line per check and a summary
  std::string report;  // JSON document
};

const std::vector<std::string>& commands();

RunResult run(const std::string& command, const std::string& site_path, const RunOptions& options);
// Same, with the site given inline; source only labels the report.
RunResult run_text(const std::string& command, std::string_view site_text, const RunOptions& options,
                   const std::string& source = "<inline>");

}  // namespace qstack::cli
