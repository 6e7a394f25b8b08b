#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace uwbped::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,  // bad flags or configuration
  kExitData = 2,   // unreadable or unusable input data
};

struct SimulateOptions {
  std::optional<std::filesystem::path> config;
  std::filesystem::path out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<int> n_pedestrians;
};

struct AnalyzeOptions {
  std::filesystem::path events;
  std::optional<std::filesystem::path> config;
  std::filesystem::path out_dir = ".";
  std::optional<double> bin_width;
  bool include_degraded = false;
  std::optional<std::string> run_id;  // defaults to the events file stem
  std::optional<std::uint64_t> seed;  // accepted for symmetry; analysis is not random
};

struct FdOptions {
  std::vector<std::filesystem::path> inputs;
  std::optional<std::filesystem::path> config;
  std::filesystem::path out_dir = ".";
  std::optional<double> bin_width;
  std::optional<std::uint64_t> seed;
};

// Writes events.csv, truth.csv and oracle_crossings.csv.
int simulate_command(const SimulateOptions& options, std::ostream& log);

// Writes crossings.csv, fd.csv, fd_binned.csv, occupancy.csv, summary.txt
// and diagnostics.json. Nothing is written when any step fails.
int analyze_command(const AnalyzeOptions& options, std::ostream& log);

// Pools one or more fd.csv files and re-bins them into fd_binned.csv, plus
// fd_summary.txt with the free velocity of single-participant runs.
int fd_command(const FdOptions& options, std::ostream& log);

// Parses argv and dispatches to a subcommand.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace uwbped::cli
