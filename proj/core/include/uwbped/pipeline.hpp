#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "uwbped/crossings.hpp"
#include "uwbped/density.hpp"
#include "uwbped/diagram.hpp"
#include "uwbped/geometry.hpp"
#include "uwbped/ingest.hpp"

namespace uwbped {

struct AnalysisConfig {
  TrackGeometry geometry;
  MeasurementSection section;
  QcParams qc;
  bool include_degraded = false;  // keep degraded crossings in the diagram
  SelfCounting self_counting = SelfCounting::include;
};

// Projects every fix of a track onto the centerline and unwraps the result.
std::vector<ArcSample> track_arc_samples(const TagTrack& track, const TrackGeometry& geometry);

// Everything derived from one run's event stream.
struct RunAnalysis {
  std::string run_id;
  std::vector<QualityReport> quality;  // one per tag with >= 2 samples, by tag_id
  std::vector<SkippedTag> skipped_tags;
  std::map<std::string, std::vector<SkippedCrossing>> skipped_crossings;
  std::vector<Crossing> crossings;  // accepted tags only, by (tag_id, loop)
  OccupancyProfile occupancy;       // built from every detected crossing
  std::vector<CrossingMetric> metrics;

  std::size_t accepted_tags() const;
  std::vector<std::string> rejected_tags() const;
  double mean_update_rate() const;  // over accepted tags
  RunMetrics diagram_metrics(bool include_degraded) const;
  RunSummary summary() const;
};

// ingest -> QC -> projection/unwrap -> crossings -> occupancy -> densities.
// Throws DataError when no tag passes QC.
RunAnalysis analyze_run(std::string run_id, std::span<const LocationEvent> events, const AnalysisConfig& config);

}  // namespace uwbped
