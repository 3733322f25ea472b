#ifndef EPQ_CLI_COMMANDS_HPP
#define EPQ_CLI_COMMANDS_HPP

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string_view>

#include "epq/cli/report.hpp"
#include "epq/cli/scenario.hpp"

namespace epq::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitInfeasible = 3;
inline constexpr int kExitIo = 4;

int exit_code(ErrorCode code);

struct CommandOptions {
  std::filesystem::path scenario;
  std::optional<std::filesystem::path> out;
  std::optional<double> step;
  bool force_partial = false;
};

Solution solve(const Scenario& scenario, bool force_partial = false);

/// Closed-form pair, its exact cost, and the exact model's numeric optimum.
ExactComparison compare_with_exact(const Scenario& scenario, bool force_partial = false);

/// Writes through a sibling temp file and renames it into place, so `path`
/// is either untouched or complete. Throws Error(kIo).
void write_atomically(const std::filesystem::path& path, std::string_view content);

// Each command prints the text report on `out`, diagnostics on `err`, and
// returns the process exit code. With --out, solve and validate also write
// the JSON document and export writes the CSV there instead of `out`.
int run_solve(const CommandOptions& options, std::ostream& out, std::ostream& err);
int run_validate(const CommandOptions& options, std::ostream& out, std::ostream& err);
int run_export(const CommandOptions& options, std::ostream& out, std::ostream& err);

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace epq::cli

#endif  // EPQ_CLI_COMMANDS_HPP
