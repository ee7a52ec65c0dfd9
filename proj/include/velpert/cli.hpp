#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace velpert::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int { kSuccess = 0, kUsageError = 1, kComputeError = 2 };

struct RunConfig {
  std::string subcommand;
  std::string problem_path;
  std::string series_path;
  int n = 1;
  int order = 4;
  double lambda = 1.0;
  bool lambda_given = false;
  bool normalize = false;
  std::string out_path;
  /// "json" or "csv"; empty selects the subcommand default (solve: json, export: csv).
  std::string format;
  double tol_rel = 1e-13;
  /// Sample count for eval/export, interior point count M for oracle.
  std::optional<int> grid;
  std::optional<double> amplitude;
  std::optional<double> guess;
};

int cmd_solve(const RunConfig& cfg, std::ostream& out);
int cmd_eval(const RunConfig& cfg, std::ostream& out);
int cmd_oracle(const RunConfig& cfg, std::ostream& out);
int cmd_export(const RunConfig& cfg, std::ostream& out);
int cmd_validate(const RunConfig& cfg, std::ostream& out);

/// Parses `args` (without the program name), dispatches, and maps library
/// errors to exit codes: input/usage problems -> 1, numerical failures -> 2.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace velpert::cli
