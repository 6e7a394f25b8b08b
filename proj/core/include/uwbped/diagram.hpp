#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "uwbped/density.hpp"

namespace uwbped {

// Free walking speed reported in the evacuation-model literature (m/s).
// Written to summaries for comparison; never used in computation.
inline constexpr double kLiteratureFreeVelocity = 1.34;

inline constexpr double kDefaultBinWidth = 0.1;  // 1/m

struct FdPoint {
  double rho = 0.0;  // 1/m
  double v = 0.0;    // m/s
  std::string tag_id;
  int loop = 0;
  std::string run_id;

  friend bool operator==(const FdPoint&, const FdPoint&) = default;
};

struct RunInfo {
  std::string run_id;
  std::size_t participants = 0;

  friend bool operator==(const RunInfo&, const RunInfo&) = default;
};

struct FundamentalDiagram {
  std::vector<FdPoint> points;  // ordered by (run, tag, loop)
  std::vector<RunInfo> runs;    // ordered by run_id
};

struct RunMetrics {
  std::string run_id;
  std::size_t participants = 0;
  std::vector<CrossingMetric> metrics;
};

FundamentalDiagram assemble_fd(std::span<const RunMetrics> runs);

struct FreeVelocityStats {
  double mean = 0.0;
  double sample_std = 0.0;  // n - 1 denominator; 0 when n == 1
  std::size_t n = 0;
};

// Mean and sample standard deviation of values. Throws ValidationError when empty.
FreeVelocityStats velocity_stats(std::vector<double> values);

// Pools crossings from single-pedestrian runs with equal weight.
FreeVelocityStats estimate_free_velocity(std::span<const Crossing> single_pedestrian_crossings);

struct FdBin {
  double center = 0.0;  // 1/m
  double v_mean = 0.0;
  double v_std = 0.0;
  std::size_t count = 0;
};

// Bins on rho with half-open [k*w, (k+1)*w) intervals; empty bins are omitted.
std::vector<FdBin> bin_fd(const FundamentalDiagram& diagram, double bin_width);

void write_crossings_csv(std::ostream& out, std::span<const CrossingMetric> crossings);
void write_fd_csv(std::ostream& out, const FundamentalDiagram& diagram);
void write_fd_binned_csv(std::ostream& out, std::span<const FdBin> bins);

// Parses a file written by write_fd_csv. Run metadata is reconstructed
// with participants = distinct tags seen per run. Throws ParseError.
FundamentalDiagram read_fd_csv(std::istream& in);

struct RunSummary {
  std::string run_id;
  std::size_t participants = 0;
  std::size_t crossings = 0;
  std::size_t degraded_crossings = 0;
  std::vector<std::string> rejected_tags;
  double mean_update_rate = 0.0;  // Hz, averaged over accepted tags
};

struct ExportBundle {
  FundamentalDiagram diagram;
  double bin_width = kDefaultBinWidth;
  std::optional<FreeVelocityStats> free_velocity;
  std::vector<CrossingMetric> crossings;
  OccupancyProfile occupancy;
  double section_length = 2.0;
  std::vector<RunSummary> runs;
};

void write_summary(std::ostream& out, const ExportBundle& bundle);

// Writes crossings.csv, fd.csv, fd_binned.csv, occupancy.csv and
// summary.txt into out_dir (created if missing). Throws DataError on I/O failure.
void export_results(const ExportBundle& bundle, const std::filesystem::path& out_dir);

// Opens `path` for writing, runs fn(stream) and checks the stream state.
// Throws DataError naming the path on failure.
void write_file(const std::filesystem::path& path, const std::function<void(std::ostream&)>& fn);

}  // namespace uwbped
