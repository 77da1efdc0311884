#pragma once

#include <string>

#include "npsl/io.hpp"

namespace npsl {

/// exit_code: 0 success, 1 certification/validation failure, 2 input error.
struct CommandResult {
  int exit_code = 0;
  Json report;
};

/// Every key a command reads, with its default value.
Json default_config(const std::string& command);

/// Keys of overlay replace keys of base; unknown keys are an input error.
Json merge_config(const Json& base, const Json& overlay, const std::string& command);

CommandResult cmd_lognorm(const std::string& file, const Json& config);
CommandResult cmd_slemma(const std::string& file, const Json& config);
CommandResult cmd_certify(const std::string& file, const Json& config);
CommandResult cmd_validate(const std::string& file, const std::string& cert_file, const Json& config);
CommandResult cmd_repro(const Json& config);

/// Runs one of the above by name; library errors become exit codes and an
/// {"error": ...} report instead of escaping.
CommandResult run_command(const std::string& command, const std::string& file, const std::string& cert_file,
                          const Json& config);

/// Aligned-text rendering of a report: scalars as "key  value" lines,
/// lists of objects as column tables.
std::string render_text(const Json& report);

/// Parses "1", "inf", or "1,2,inf" (also a JSON number, string or list).
std::vector<double> parse_p_list(const Json& j);

}  // namespace npsl
