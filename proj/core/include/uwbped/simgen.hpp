#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "uwbped/geometry.hpp"
#include "uwbped/ingest.hpp"

namespace uwbped {

struct MotionParams {
  double v0_mean = 1.33;  // m/s
  double v0_std = 0.13;   // m/s; 0 gives every pedestrian v0_mean
  double d0 = 0.4;        // m, jam spacing
  double tau = 0.5;       // s
};

struct SamplingParams {
  double mean_rate = 4.74;    // Hz
  double interval_min = 0.05; // s
  double interval_max = 1.0;  // s
  double noise_sigma = 0.10;  // m per axis
  int erratic_tags = 0;
  // Erratic fixes are uniform over the corridor bounding box grown by this
  // much on every side (the room the receivers cover).
  double erratic_box_margin = 3.0;  // m
};

inline constexpr double kSimulationStep = 0.01;  // s

struct ScenarioConfig {
  TrackGeometry geometry;
  MeasurementSection section;
  int n_pedestrians = 1;
  int loops_per_pedestrian = 2;
  MotionParams motion;
  SamplingParams sampling;
  std::uint64_t seed = 1;

  // Throws ValidationError naming the violated constraint.
  void validate() const;
};

// min(v0, max(0, (gap - d0) / tau)).
double headway_speed(double gap, double v0, double d0, double tau);

struct PedestrianTruth {
  std::string tag_id;
  double v0 = 0.0;
  int first_loop = 0;      // lift of the first section entrance ahead of the start position
  std::vector<double> s;   // unwrapped arc length at t = k * dt

  double t_end(double dt) const { return s.empty() ? 0.0 : static_cast<double>(s.size() - 1) * dt; }
  // Linear interpolation on the grid; motion is piecewise linear, so this is exact.
  double position_at(double t, double dt) const;
};

struct GroundTruth {
  double dt = kSimulationStep;
  double track_length = 0.0;
  int loops_per_pedestrian = 2;
  std::vector<PedestrianTruth> pedestrians;  // in start order around the loop

  double t_end() const;
};

std::string pedestrian_tag(int index);
std::string erratic_tag(int index);

// Pedestrians start evenly spaced with the first at s = 0. Each one walks
// loops_per_pedestrian laps counted from its first section entrance and then
// leaves the ring, so every pedestrian yields exactly that many complete
// crossings. Throws ValidationError for an invalid or infeasible config.
GroundTruth simulate_run(const ScenarioConfig& config);

// First fix at t = 0, then exponential intervals (mean 1 / mean_rate)
// clipped to [interval_min, interval_max] until the tag leaves the track.
// Events are merged and time-sorted.
std::vector<LocationEvent> sample_uwb_events(const GroundTruth& truth, const ScenarioConfig& config);

struct OracleCrossing {
  std::string tag_id;
  int loop = 0;
  double t_en = 0.0;
  double t_ex = 0.0;
  double v = 0.0;

  friend bool operator==(const OracleCrossing&, const OracleCrossing&) = default;
};

std::vector<OracleCrossing> oracle_crossings(const GroundTruth& truth, const MeasurementSection& section);

// `tag_id,t,s,x,y`, one row per grid point.
void write_truth_csv(std::ostream& out, const GroundTruth& truth, const TrackGeometry& geometry);
// `tag_id,loop,t_en,t_ex,v`.
void write_oracle_csv(std::ostream& out, const std::vector<OracleCrossing>& crossings);

}  // namespace uwbped
