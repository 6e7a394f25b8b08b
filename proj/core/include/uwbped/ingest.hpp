#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "uwbped/geometry.hpp"

namespace uwbped {

// One asynchronous position fix for one tag. t is relative seconds within a run.
struct LocationEvent {
  std::string tag_id;
  double t = 0.0;
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const LocationEvent&, const LocationEvent&) = default;
};

enum class EventFormat { csv, jsonl };

// ".csv" -> csv, ".jsonl"/".ndjson" -> jsonl.
std::optional<EventFormat> format_from_path(const std::filesystem::path& path);

// CSV: header `tag_id,t,x,y`, LF or CRLF. JSONL: one object per line with
// keys tag_id, t, x, y. Blank lines are ignored. Throws ParseError.
std::vector<LocationEvent> parse_events(std::istream& in, EventFormat format);

// Opens `path` and parses it with the format implied by its extension.
// Throws DataError when the file cannot be opened or the format is unknown.
std::vector<LocationEvent> read_events(const std::filesystem::path& path);

void write_events_csv(std::ostream& out, std::span<const LocationEvent> events);

struct TrackSample {
  double t = 0.0;
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const TrackSample&, const TrackSample&) = default;
};

// Time-ordered fixes of one tag; t is strictly increasing.
struct TagTrack {
  std::string tag_id;
  std::vector<TrackSample> samples;
  std::size_t duplicates_dropped = 0;      // exact (t, x, y) repeats
  std::size_t conflicting_timestamps = 0;  // same t, different position; first kept

  friend bool operator==(const TagTrack&, const TagTrack&) = default;
};

struct SkippedTag {
  std::string tag_id;
  std::size_t sample_count = 0;
};

struct TrackSet {
  std::map<std::string, TagTrack> tracks;  // only tags with >= 2 samples
  std::vector<SkippedTag> skipped;         // sorted by tag_id
};

TrackSet build_tracks(std::span<const LocationEvent> events);

struct QcParams {
  double margin = 0.5;               // m beyond half the corridor width
  double v_max = 10.0;               // m/s
  double oob_threshold = 0.20;       // max out-of-bounds sample fraction
  double overspeed_threshold = 0.05; // max overspeed pair fraction
};

enum class Verdict { accepted, rejected };

struct QualityReport {
  std::string tag_id;
  std::size_t sample_count = 0;
  double mean_update_rate = 0.0;  // Hz
  double out_of_bounds_fraction = 0.0;
  double overspeed_fraction = 0.0;
  std::size_t conflicting_timestamps = 0;
  Verdict verdict = Verdict::accepted;
  std::string reason;  // empty when accepted

  bool accepted() const noexcept { return verdict == Verdict::accepted; }
  friend bool operator==(const QualityReport&, const QualityReport&) = default;
};

QualityReport assess_track_quality(const TagTrack& track, const TrackGeometry& geometry,
                                   const QcParams& params = {});

}  // namespace uwbped
