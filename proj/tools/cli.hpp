#pragma once

// The `finsler` command-line front end.
//
//   finsler <command> --config <file.json> [--out <path>] [--seed <u64>] [--tol <float>]
//
// A config holds the spacetime descriptor, the command parameters and an
// optional output format:
//
//   { "spacetime": { "type": "brinkmann", "params": { "H": "x2" } },
//     "run": { "samples": 8 },
//     "output": { "format": "json" } }

#include "finsler/report.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace finsler::cli {

enum ExitCode : int { ok = 0, verification_failed = 1, schema_violation = 2, numerical_failure = 3 };

struct RunOptions {
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
};

/// One written artifact: a path (empty for standard output) and its text.
struct Artifact {
  std::string path;
  std::string text;
};

struct RunResult {
  int exit_code = ok;
  std::vector<Artifact> artifacts;
  std::string message;  // diagnostics for stderr
};

const std::vector<std::string>& commands();

/// Runs one command in memory. Never throws; failures map onto exit codes.
RunResult run(const std::string& command, const Json& config, const RunOptions& opt);

/// Parses argv, reads the config, runs, writes artifacts.
int main(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace finsler::cli
