#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "robinf/harness.hpp"
#include "robinf/report.hpp"

namespace robinf::cli {

inline constexpr const char* kVersion = "0.3.0";
inline constexpr const char* kOutDirEnv = "ROBINF_OUT_DIR";

enum class Command { simulate, histogram, case_dump };

/// Bad command line or config file; maps to exit status 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Request {
  Command command = Command::simulate;
  ScenarioConfig config = ScenarioConfig::defaults(Scenario::prototypical);
  std::vector<TableFormat> formats{TableFormat::csv, TableFormat::markdown};
  std::filesystem::path out_dir = "results";
  /// histogram and case: index into config.ranges
  std::size_t range_index = 0;
  std::size_t case_index = 0;
};

/// Parses `args` (without the program name). Flags override values read
/// from --config. Throws UsageError naming the offending flag.
Request parse_command_line(const std::vector<std::string>& args);

/// "start:stop:step" or a comma-separated list.
std::vector<double> parse_ranges(const std::string& text);

/// key=value lines that reproduce `request` when passed back via --config.
std::string config_file_text(const Request& request);

/// Executes a request; returns the list of files written.
std::vector<std::filesystem::path> execute(const Request& request, std::ostream& out);

/// Full entry point: parse, execute, map errors to exit status
/// (0 success, 2 usage error, 1 runtime failure).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace robinf::cli
