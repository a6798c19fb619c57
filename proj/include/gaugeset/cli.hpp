#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gaugeset/report_io.hpp"

namespace gaugeset::cli {

enum ExitCode : int { kMatch = 0, kUsage = 1, kMismatch = 2, kInconclusive = 3 };

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Everything a run depends on. A run is reproducible from this plus the
/// binary; reports embed it.
struct RunConfig {
  /// integrate | decompose | varmeasure | riemann-check | corpus
  std::string command;
  std::string entry;
  /// corpus: list | show
  std::string action;
  /// integrate: henstock | mcshane | birkhoff | vh | vms | hkp
  std::string method = "henstock";
  /// plain | measurable (henstock and mcshane only)
  std::string mode = "plain";
  /// steiner | argmax:<u> (d = 1: u in {-1, +1}; d = 2: direction index)
  std::string selection = "steiner";
  std::string theorem = "t33";
  /// varmeasure: "[a,b]u[c,d]" or "{p,q}"; riemann-check: "[a,b]u..."
  std::string set;
  double delta = 1e-3;
  int trials = 8;
  double eps = 0.05;
  /// Optional expected outcome: riemann-check pass|fail, varmeasure zero|positive.
  std::string expect;
  std::size_t m = 64;
  int levels = 0;
  std::optional<double> tol;
  std::uint64_t seed = 0;
  bool deterministic = false;
  std::string out_dir = "gaugeset-out";
};

/// Schema 1. Unknown keys and wrong types are rejected with ConfigError.
RunConfig config_from_json(const Json& j);
Json config_to_json(const RunConfig& c);
/// Reads and validates a config file.
RunConfig load_config(const std::string& path);
/// Checks command/entry/method names; throws ConfigError.
void validate(const RunConfig& c);

/// Executes one run: writes <out_dir>/<stem>.json and .csv (corpus verbs
/// print JSON to `out` instead) and returns the exit code.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses arguments (without the program name), applies --config, then the
/// command-line values, then GAUGESET_SEED, and calls run().
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gaugeset::cli
