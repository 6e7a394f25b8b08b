#include "uwbped/crossings.hpp"

#include <algorithm>
#include <limits>

#include "uwbped/error.hpp"

namespace uwbped {

const char* to_string(SkipReason reason) noexcept {
  switch (reason) {
    case SkipReason::no_entrance: return "no_entrance";
    case SkipReason::incomplete: return "incomplete";
    case SkipReason::invalid_order: return "invalid_order";
  }
  return "unknown";
}

CrossingDetection detect_crossings(std::span<const ArcSample> samples, const MeasurementSection& section,
                                   double track_length) {
  CrossingDetection out;
  if (samples.empty()) return out;

  std::vector<double> envelope(samples.size());
  double running = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    running = std::max(running, samples[i].s_unwrapped);
    envelope[i] = running;
  }

  const auto first_past = [&](double boundary, std::size_t from) {
    for (std::size_t i = from; i < envelope.size(); ++i) {
      if (envelope[i] > boundary) return i;
    }
    return envelope.size();
  };

  int loop = 0;
  while (section.x_en() + loop * track_length < envelope.front()) {
    out.skipped.push_back({loop, SkipReason::no_entrance});
    ++loop;
  }

  std::size_t cursor = 1;
  for (;; ++loop) {
    const double lifted_en = section.x_en() + loop * track_length;
    const double lifted_ex = section.x_ex() + loop * track_length;
    const std::size_t en = first_past(lifted_en, cursor);
    if (en == samples.size()) break;
    const std::size_t ex = first_past(lifted_ex, en);
    if (ex == samples.size()) {
      out.skipped.push_back({loop, SkipReason::incomplete});
      break;
    }
    out.pairs.push_back({loop,
                         {samples[en - 1], samples[en], lifted_en},
                         {samples[ex - 1], samples[ex], lifted_ex}});
    cursor = ex;
  }
  return out;
}

BoundaryTime interpolate_boundary_time(const BoundaryBracket& bracket) {
  const auto& a = bracket.prev;
  const auto& b = bracket.next;
  const double span = b.s_unwrapped - a.s_unwrapped;
  if (!(span >= kDegenerateArcSpan)) {
    return {a.t + (b.t - a.t) / 2.0, true};
  }
  const double fraction = std::clamp((bracket.boundary_s - a.s_unwrapped) / span, 0.0, 1.0);
  return {a.t + (b.t - a.t) * fraction, false};
}

double crossing_velocity(double t_en, double t_ex, double section_length) {
  if (!(t_ex > t_en)) throw DataError("crossing exit time is not after entrance time");
  return section_length / (t_ex - t_en);
}

std::string crossing_flags(const Crossing& crossing) {
  if (crossing.entrance_degraded && crossing.exit_degraded) return "entry_degraded|exit_degraded";
  if (crossing.entrance_degraded) return "entry_degraded";
  if (crossing.exit_degraded) return "exit_degraded";
  return {};
}

TagCrossings extract_crossings(std::string_view tag_id, std::span<const ArcSample> samples,
                               const MeasurementSection& section, double track_length) {
  auto detection = detect_crossings(samples, section, track_length);
  TagCrossings out;
  out.skipped = std::move(detection.skipped);
  for (const auto& pair : detection.pairs) {
    const auto en = interpolate_boundary_time(pair.entrance);
    const auto ex = interpolate_boundary_time(pair.exit);
    if (!(ex.t > en.t)) {
      out.skipped.push_back({pair.loop, SkipReason::invalid_order});
      continue;
    }
    out.crossings.push_back({std::string(tag_id), pair.loop, en.t, ex.t,
                             crossing_velocity(en.t, ex.t, section.length()), en.degraded, ex.degraded});
  }
  std::stable_sort(out.skipped.begin(), out.skipped.end(),
            [](const SkippedCrossing& a, const SkippedCrossing& b) { return a.loop < b.loop; });
  return out;
}

}  // namespace uwbped
