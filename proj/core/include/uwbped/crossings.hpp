#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "uwbped/geometry.hpp"

namespace uwbped {

// Bracketing samples around one lifted section boundary.
struct BoundaryBracket {
  ArcSample prev;           // last sample whose envelope is at or before the boundary
  ArcSample next;           // first sample whose envelope passes the boundary
  double boundary_s = 0.0;  // x_en or x_ex lifted by loop * L
};

struct BracketPair {
  int loop = 0;
  BoundaryBracket entrance;
  BoundaryBracket exit;
};

enum class SkipReason {
  no_entrance,    // trajectory already past the lifted entrance at its first sample
  incomplete,     // entered but never passed the exit
  invalid_order,  // interpolated exit not after entrance (both brackets degraded)
};

const char* to_string(SkipReason reason) noexcept;

struct SkippedCrossing {
  int loop = 0;
  SkipReason reason = SkipReason::no_entrance;

  friend bool operator==(const SkippedCrossing&, const SkippedCrossing&) = default;
};

struct CrossingDetection {
  std::vector<BracketPair> pairs;
  std::vector<SkippedCrossing> skipped;
};

// Detection runs on the running maximum of s_unwrapped, so backward
// jitter across a boundary never produces a second bracket for that loop.
CrossingDetection detect_crossings(std::span<const ArcSample> samples, const MeasurementSection& section,
                                   double track_length);

// Samples closer than this along the track cannot be interpolated between.
inline constexpr double kDegenerateArcSpan = 1e-6;

struct BoundaryTime {
  double t = 0.0;
  bool degraded = false;  // midpoint fallback was used
};

// Linear interpolation of the instant the boundary was passed:
//   t = prev.t + (next.t - prev.t) * (boundary - prev.s) / (next.s - prev.s)
// using s_unwrapped. Falls back to the bracket midpoint time when
// next.s - prev.s < kDegenerateArcSpan.
BoundaryTime interpolate_boundary_time(const BoundaryBracket& bracket);

// l_m / (t_ex - t_en). Throws DataError when t_ex <= t_en.
double crossing_velocity(double t_en, double t_ex, double section_length);

struct Crossing {
  std::string tag_id;
  int loop = 0;
  double t_en = 0.0;
  double t_ex = 0.0;
  double v = 0.0;
  bool entrance_degraded = false;
  bool exit_degraded = false;

  bool degraded() const noexcept { return entrance_degraded || exit_degraded; }
  friend bool operator==(const Crossing&, const Crossing&) = default;
};

// "" when clean, otherwise "entry_degraded", "exit_degraded" or both joined by '|'.
std::string crossing_flags(const Crossing& crossing);

struct TagCrossings {
  std::vector<Crossing> crossings;  // ordered by loop
  std::vector<SkippedCrossing> skipped;
};

// Detection followed by boundary interpolation and velocity for one tag.
TagCrossings extract_crossings(std::string_view tag_id, std::span<const ArcSample> samples,
                               const MeasurementSection& section, double track_length);

}  // namespace uwbped
