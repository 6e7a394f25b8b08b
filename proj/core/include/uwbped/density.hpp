#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "uwbped/crossings.hpp"

namespace uwbped {

struct OccupancyBreakpoint {
  double t = 0.0;
  int count = 0;  // N(t) from this instant until the next breakpoint

  friend bool operator==(const OccupancyBreakpoint&, const OccupancyBreakpoint&) = default;
};

// Piecewise-constant, right-continuous N(t). N is 0 before the first
// breakpoint. Every breakpoint is one entrance (+1) or one exit (-1), so
// simultaneous events appear as consecutive breakpoints with equal t.
class OccupancyProfile {
 public:
  OccupancyProfile() = default;
  explicit OccupancyProfile(std::vector<OccupancyBreakpoint> breakpoints);

  std::span<const OccupancyBreakpoint> breakpoints() const noexcept { return breakpoints_; }
  bool empty() const noexcept { return breakpoints_.empty(); }
  double t_start() const noexcept;
  double t_end() const noexcept;

  int count_at(double t) const;
  // Exact integral of N over [a, b].
  double integrate(double a, double b) const;
  // Smallest N attained on [a, b).
  int min_count(double a, double b) const;

  friend bool operator==(const OccupancyProfile&, const OccupancyProfile&) = default;

 private:
  std::vector<OccupancyBreakpoint> breakpoints_;
};

// Sweep over +1 at every t_en and -1 at every t_ex; exits are processed
// before entrances at identical times.
OccupancyProfile build_occupancy(std::span<const Crossing> crossings);

// N(t) / l_m. Returns 0 outside the profile's span.
double instantaneous_density(const OccupancyProfile& profile, double t, double section_length);

enum class SelfCounting {
  include,  // N(t) counts the crossing pedestrian itself
  exclude,
};

// Time-average of N(t) / l_m over [t_en, t_ex], integrated exactly over
// the step function. Throws DataError when t_ex <= t_en.
double mean_crossing_density(const OccupancyProfile& profile, const Crossing& crossing, double section_length,
                             SelfCounting self = SelfCounting::include);

struct CrossingMetric {
  Crossing crossing;
  double rho = 0.0;  // 1/m

  friend bool operator==(const CrossingMetric&, const CrossingMetric&) = default;
};

std::vector<CrossingMetric> crossing_metrics(const OccupancyProfile& profile, std::span<const Crossing> crossings,
                                             double section_length, SelfCounting self = SelfCounting::include);

// Header `t,N,rho`, one row per breakpoint.
void write_occupancy_csv(std::ostream& out, const OccupancyProfile& profile, double section_length);

}  // namespace uwbped
