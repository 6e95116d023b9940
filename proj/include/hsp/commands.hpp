/*
 * Subcommand implementations behind the command-line tool.
 *
 * Each command writes a machine-readable JSON document to `out` and a
 * human-readable summary to `err`, and returns the process exit code:
 *
 *   0  success
 *   1  configuration or construction problem
 *   2  a law failed, a distribution disagreed beyond tolerance, or a
 *      recovery missed
 *   3  the selected semiring cannot express what the command needs
 *   4  the hiding-function promise was violated
 *
 * Living in the library (rather than the binary) so tests can invoke
 * commands in-process and assert on their outputs and exit codes.
 */
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace hsp {

struct CliOptions {
  std::string command;  // laws | dist | run | simon | nonabelian
  std::string config_path;
  std::optional<std::string> semiring_override;
  std::optional<std::uint64_t> seed_override;
  double tol = 1e-9;
  bool state_vector = false;
  std::optional<std::string> out_path;  // extra transcript / output file
  // simon only:
  std::size_t simon_n = 0;
  std::string simon_z = "random";  // "random" or a bit string of length n
};

int run_command(const CliOptions& opts, std::ostream& out, std::ostream& err);

}  // namespace hsp
