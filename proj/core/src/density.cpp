#include "uwbped/density.hpp"

#include <algorithm>
#include <cstdlib>
#include <ostream>

#include "uwbped/error.hpp"
#include "uwbped/numfmt.hpp"

namespace uwbped {

OccupancyProfile::OccupancyProfile(std::vector<OccupancyBreakpoint> breakpoints)
    : breakpoints_(std::move(breakpoints)) {
  for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
    const int prev = i == 0 ? 0 : breakpoints_[i - 1].count;
    if (breakpoints_[i].count < 0) throw ValidationError("occupancy count must be non-negative");
    if (i > 0 && breakpoints_[i].t < breakpoints_[i - 1].t) {
      throw ValidationError("occupancy breakpoints must be time-ordered");
    }
    if (std::abs(breakpoints_[i].count - prev) != 1) {
      throw ValidationError("consecutive occupancy counts must differ by one");
    }
  }
}

double OccupancyProfile::t_start() const noexcept { return breakpoints_.empty() ? 0.0 : breakpoints_.front().t; }
double OccupancyProfile::t_end() const noexcept { return breakpoints_.empty() ? 0.0 : breakpoints_.back().t; }

int OccupancyProfile::count_at(double t) const {
  const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t,
                                   [](double v, const OccupancyBreakpoint& b) { return v < b.t; });
  if (it == breakpoints_.begin()) return 0;
  return std::prev(it)->count;
}

namespace {

// Calls fn(count, length) for every constant piece of N on [a, b].
template <typename Fn>
void for_each_piece(std::span<const OccupancyBreakpoint> bps, double a, double b, Fn&& fn) {
  if (!(b > a)) return;
  auto it = std::upper_bound(bps.begin(), bps.end(), a,
                             [](double v, const OccupancyBreakpoint& bp) { return v < bp.t; });
  int count = it == bps.begin() ? 0 : std::prev(it)->count;
  double cursor = a;
  for (; it != bps.end() && it->t < b; ++it) {
    if (it->t > cursor) {
      fn(count, it->t - cursor);
      cursor = it->t;
    }
    count = it->count;
  }
  fn(count, b - cursor);
}

}  // namespace

double OccupancyProfile::integrate(double a, double b) const {
  double total = 0.0;
  for_each_piece(breakpoints_, a, b, [&](int n, double len) { total += n * len; });
  return total;
}

int OccupancyProfile::min_count(double a, double b) const {
  int lowest = count_at(a);
  for_each_piece(breakpoints_, a, b, [&](int n, double) { lowest = std::min(lowest, n); });
  return lowest;
}

OccupancyProfile build_occupancy(std::span<const Crossing> crossings) {
  struct Event {
    double t;
    int delta;
  };
  std::vector<Event> events;
  events.reserve(crossings.size() * 2);
  for (const auto& c : crossings) {
    events.push_back({c.t_en, +1});
    events.push_back({c.t_ex, -1});
  }
  std::stable_sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
    if (a.t != b.t) return a.t < b.t;
    return a.delta < b.delta;
  });

  std::vector<OccupancyBreakpoint> bps;
  bps.reserve(events.size());
  int n = 0;
  for (const auto& e : events) {
    n += e.delta;
    bps.push_back({e.t, n});
  }
  return OccupancyProfile(std::move(bps));
}

double instantaneous_density(const OccupancyProfile& profile, double t, double section_length) {
  return profile.count_at(t) / section_length;
}

double mean_crossing_density(const OccupancyProfile& profile, const Crossing& crossing, double section_length,
                             SelfCounting self) {
  const double a = crossing.t_en;
  const double b = crossing.t_ex;
  if (!(b > a)) throw DataError("crossing exit time is not after entrance time");
  // Integrate N - N_min and add N_min back, so a window where N is
  // constant yields exactly N / l_m.
  const int floor_count = profile.min_count(a, b);
  double excess = 0.0;
  for_each_piece(profile.breakpoints(), a, b, [&](int n, double len) { excess += (n - floor_count) * len; });
  double mean_count = floor_count + excess / (b - a);
  if (self == SelfCounting::exclude) mean_count = std::max(0.0, mean_count - 1.0);
  return mean_count / section_length;
}

std::vector<CrossingMetric> crossing_metrics(const OccupancyProfile& profile, std::span<const Crossing> crossings,
                                             double section_length, SelfCounting self) {
  std::vector<CrossingMetric> out;
  out.reserve(crossings.size());
  for (const auto& c : crossings) {
    out.push_back({c, mean_crossing_density(profile, c, section_length, self)});
  }
  return out;
}

void write_occupancy_csv(std::ostream& out, const OccupancyProfile& profile, double section_length) {
  out << "t,N,rho\n";
  for (const auto& bp : profile.breakpoints()) {
    out << format_double(bp.t) << ',' << bp.count << ',' << format_double(bp.count / section_length) << '\n';
  }
}

}  // namespace uwbped
