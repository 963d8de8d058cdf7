#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "couplex/field.hpp"
#include "couplex/morse_smale.hpp"

namespace couplex {

enum class OutputFormat { text, json };

struct RunConfig {
  std::string command;  // pages, chain, report, verify, fixtures
  std::optional<std::string> fixture;
  std::optional<std::string> input;
  std::optional<FieldSpec> field;
  std::optional<ModelMode> mode;
  OutputFormat format = OutputFormat::text;
  std::optional<std::string> out;
  int verbosity = 0;
};

enum ExitCode : int { exit_ok = 0, exit_validation = 1, exit_parse = 2 };

/// Runs one command; output goes to `out` (or the --out file), diagnostics
/// to `err`. Returns the process exit code.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Parses argv-style arguments (without the program name) and runs them.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace couplex
