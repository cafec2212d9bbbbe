#ifndef SOFTDS_CLI_COMMANDS_HPP
#define SOFTDS_CLI_COMMANDS_HPP

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace softds::cli {

enum ExitCode : int {
  kSuccess = 0,
  kValidationFailure = 2,
  kRuntimeFailure = 3,
};

/// Flags shared by every scenario-driven command.
struct CommonOptions {
  std::filesystem::path scenario;
  std::filesystem::path out;
  std::optional<double> dt;
  std::optional<long> max_steps;
  std::optional<long> seed;  // recorded in the output metadata only
  std::optional<std::string> starts_grid;  // "AxB", spans the workspace box
};

struct SimulateOptions {
  CommonOptions common;
  bool concat = false;  // one CSV with a run column instead of one per start
  unsigned workers = 0;
};

struct FieldOptions {
  CommonOptions common;
  std::string grid = "50x50";
};

struct SweepOptions {
  CommonOptions common;
  std::string k_values = "1,e^0.25,e^0.5";
  std::optional<std::string> reduction_k;  // defaults to the largest k
  unsigned workers = 0;
};

struct ValidateOptions {
  std::filesystem::path ds;
  std::optional<std::filesystem::path> out;
};

/// Parses "AxB" (any number of axes) into per-axis counts.
std::vector<int> parse_grid_counts(const std::string& spec);

/// Parses a comma-separated k list; accepts plain numbers, "e", "e^x" and "e^{x}".
std::vector<double> parse_k_list(const std::string& spec);

int cmd_simulate(const SimulateOptions& opts, std::ostream& out, std::ostream& err);
int cmd_field(const FieldOptions& opts, std::ostream& out, std::ostream& err);
int cmd_sweep(const SweepOptions& opts, std::ostream& out, std::ostream& err);
int cmd_validate(const ValidateOptions& opts, std::ostream& out, std::ostream& err);

}  // namespace softds::cli

#endif  // SOFTDS_CLI_COMMANDS_HPP
