#include "uwbped/pipeline.hpp"

#include "uwbped/error.hpp"

namespace uwbped {

std::vector<ArcSample> track_arc_samples(const TagTrack& track, const TrackGeometry& geometry) {
  std::vector<TimedArc> raw;
  raw.reserve(track.samples.size());
  for (const auto& s : track.samples) {
    const auto proj = geometry.project({s.x, s.y});
    raw.push_back({s.t, proj.s_raw, proj.d});
  }
  return unwrap_arc_samples(raw, geometry.total_length());
}

std::size_t RunAnalysis::accepted_tags() const {
  std::size_t n = 0;
  for (const auto& q : quality) n += q.accepted() ? 1 : 0;
  return n;
}

std::vector<std::string> RunAnalysis::rejected_tags() const {
  std::vector<std::string> out;
  for (const auto& q : quality) {
    if (!q.accepted()) out.push_back(q.tag_id);
  }
  return out;
}

double RunAnalysis::mean_update_rate() const {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& q : quality) {
    if (!q.accepted()) continue;
    sum += q.mean_update_rate;
    ++n;
  }
  return n ? sum / static_cast<double>(n) : 0.0;
}

RunMetrics RunAnalysis::diagram_metrics(bool include_degraded) const {
  RunMetrics out{run_id, accepted_tags(), {}};
  for (const auto& m : metrics) {
    if (include_degraded || !m.crossing.degraded()) out.metrics.push_back(m);
  }
  return out;
}

RunSummary RunAnalysis::summary() const {
  RunSummary s;
  s.run_id = run_id;
  s.participants = accepted_tags();
  s.crossings = crossings.size();
  for (const auto& c : crossings) s.degraded_crossings += c.degraded() ? 1 : 0;
  s.rejected_tags = rejected_tags();
  s.mean_update_rate = mean_update_rate();
  return s;
}

RunAnalysis analyze_run(std::string run_id, std::span<const LocationEvent> events, const AnalysisConfig& config) {
  if (!section_fits(config.section, config.geometry)) {
    throw ValidationError("measurement section must lie on a single straight of the track");
  }
  RunAnalysis run;
  run.run_id = std::move(run_id);

  auto tracks = build_tracks(events);
  run.skipped_tags = std::move(tracks.skipped);

  const double L = config.geometry.total_length();
  for (const auto& [tag, track] : tracks.tracks) {
    auto report = assess_track_quality(track, config.geometry, config.qc);
    const bool accepted = report.accepted();
    run.quality.push_back(std::move(report));
    if (!accepted) continue;

    const auto arc = track_arc_samples(track, config.geometry);
    auto found = extract_crossings(tag, arc, config.section, L);
    if (!found.skipped.empty()) run.skipped_crossings.emplace(tag, std::move(found.skipped));
    run.crossings.insert(run.crossings.end(), std::make_move_iterator(found.crossings.begin()),
                         std::make_move_iterator(found.crossings.end()));
  }
  if (run.accepted_tags() == 0) throw DataError("no tag passed quality control");

  run.occupancy = build_occupancy(run.crossings);
  run.metrics = crossing_metrics(run.occupancy, run.crossings, config.section.length(), config.self_counting);
  return run;
}

}  // namespace uwbped
