#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace krigmv::cli {

enum ExitCode : int {
  kSuccess = 0,
  kUsageError = 1,
  kDataError = 2,
  kNumericalFailure = 3,
};

/// Resolved command-line configuration.
struct RunConfig {
  std::string command;  // variogram | estimate | validate | simulate
  std::string input;
  std::optional<std::size_t> column;
  std::optional<std::size_t> n;
  std::size_t t_start = 0;
  std::size_t t_end = 0;
  std::string model;
  double beta = 1.0135;
  double j_max = 0.0;  // 0: 1000 * n
  double tol = 1e-10;
  std::string mode = "root";
  bool gls_fallback = false;
  unsigned threads = 0;
  std::uint64_t seed = 0;
  double mean = 0.0;
  double variance = 1.0;
  std::string format = "csv";
  std::string output;       // empty: stdout
  std::string plot_output;  // validate only

  /// Stable "key=value;..." string of the fields relevant to `command`.
  [[nodiscard]] std::string canonical() const;
};

/// Executes a parsed configuration. Tables go to config.output or `out`;
/// error records and progress notes go to `err`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv-style arguments (without the program name) and runs.
int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace krigmv::cli
