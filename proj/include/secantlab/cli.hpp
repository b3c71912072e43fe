#ifndef SECANTLAB_CLI_HPP
#define SECANTLAB_CLI_HPP

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace secantlab::cli {

enum class Command {
  theta,
  kummer,
  secant_check,
  secant_search,
  secant_propagate,
  involution,
  hierarchy_run,
  premise_check,
  scenario_fay,
  scenario_degenerate,
};

std::string_view command_name(Command c);
std::optional<Command> command_from_name(std::string_view name);
const std::vector<Command>& all_commands();

struct RunConfig {
  Command command = Command::theta;
  std::string tau_path;
  std::string input_path;
  double eps = 1e-12;
  double tol = 1e-8;
  bool tol_given = false;  // commands with their own default threshold use it only when set
  std::uint64_t seed = 0;
  int samples = 64;
  int order = 4;
  std::string lift;    // empty: every lift
  std::string output;  // empty: JSON to the output stream, no CSV

  /// Throws InputError unless eps < tol, 1 <= order <= 12 and samples >= 1.
  void validate() const;
};

enum ExitCode : int { kSuccess = 0, kInputFailure = 1, kToleranceFailure = 2 };

/// Executes one command. The JSON result goes to config.output (or `out`);
/// the CSV table, when the command has one, goes next to it with extension .csv.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv (subcommand first, then flags) and runs it.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace secantlab::cli

#endif  // SECANTLAB_CLI_HPP
