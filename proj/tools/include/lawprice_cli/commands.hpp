#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace lawprice::cli {

enum ExitCode : int {
  kOk = 0,
  kParse = 2,
  kSpaceMismatch = 3,
  kFlagViolation = 4,
  kSolver = 5,
};

struct RunConfig {
  std::string command;
  std::filesystem::path config_path;
  std::uint64_t seed = 1;
  double tolerance = 1e-9;
  std::optional<std::filesystem::path> output_path;
};

/// Parses argv and runs the command. Reports go to --out (atomically) or to
/// `out`; diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Runs an already parsed configuration.
int execute(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace lawprice::cli
