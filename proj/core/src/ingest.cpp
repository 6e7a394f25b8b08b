#include "uwbped/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>

#include <json.hpp>

#include "uwbped/error.hpp"
#include "uwbped/numfmt.hpp"

namespace uwbped {

namespace {

constexpr std::string_view kCsvHeader = "tag_id,t,x,y";

void strip_line(std::string& line, std::size_t line_no) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
}

double checked_number(std::string_view text, std::size_t line_no, const char* field) {
  const auto value = parse_double(text);
  if (!value) throw ParseError(line_no, field, "not a number: '" + std::string(text) + "'");
  if (!std::isfinite(*value)) throw ParseError(line_no, field, "non-finite value");
  return *value;
}

void check_event(const LocationEvent& ev, std::size_t line_no) {
  if (ev.tag_id.empty()) throw ParseError(line_no, "tag_id", "empty tag id");
  if (ev.t < 0.0) throw ParseError(line_no, "t", "negative time");
}

LocationEvent parse_csv_row(std::string_view row, std::size_t line_no) {
  std::string_view fields[4];
  std::size_t count = 0;
  std::size_t start = 0;
  while (true) {
    const auto comma = row.find(',', start);
    if (count == 4) throw ParseError(line_no, "row", "expected 4 fields");
    fields[count++] = row.substr(start, comma == std::string_view::npos ? comma : comma - start);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (count != 4) throw ParseError(line_no, "row", "expected 4 fields, got " + std::to_string(count));

  LocationEvent ev;
  ev.tag_id = std::string(fields[0]);
  ev.t = checked_number(fields[1], line_no, "t");
  ev.x = checked_number(fields[2], line_no, "x");
  ev.y = checked_number(fields[3], line_no, "y");
  check_event(ev, line_no);
  return ev;
}

LocationEvent parse_jsonl_row(const std::string& row, std::size_t line_no) {
  nlohmann::json obj;
  try {
    obj = nlohmann::json::parse(row);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(line_no, "row", e.what());
  }
  if (!obj.is_object()) throw ParseError(line_no, "row", "expected a JSON object");

  LocationEvent ev;
  const auto tag = obj.find("tag_id");
  if (tag == obj.end() || !tag->is_string()) throw ParseError(line_no, "tag_id", "missing or not a string");
  ev.tag_id = tag->get<std::string>();

  const auto number = [&](const char* key) {
    const auto it = obj.find(key);
    if (it == obj.end() || !it->is_number()) throw ParseError(line_no, key, "missing or not a number");
    const double v = it->get<double>();
    if (!std::isfinite(v)) throw ParseError(line_no, key, "non-finite value");
    return v;
  };
  ev.t = number("t");
  ev.x = number("x");
  ev.y = number("y");
  check_event(ev, line_no);
  return ev;
}

}  // namespace

std::optional<EventFormat> format_from_path(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  if (ext == ".csv") return EventFormat::csv;
  if (ext == ".jsonl" || ext == ".ndjson") return EventFormat::jsonl;
  return std::nullopt;
}

std::vector<LocationEvent> parse_events(std::istream& in, EventFormat format) {
  std::vector<LocationEvent> events;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = format != EventFormat::csv;
  while (std::getline(in, line)) {
    ++line_no;
    strip_line(line, line_no);
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != kCsvHeader) {
        throw ParseError(line_no, "header", "expected '" + std::string(kCsvHeader) + "'");
      }
      header_seen = true;
      continue;
    }
    events.push_back(format == EventFormat::csv ? parse_csv_row(line, line_no)
                                                : parse_jsonl_row(line, line_no));
  }
  return events;
}

std::vector<LocationEvent> read_events(const std::filesystem::path& path) {
  const auto format = format_from_path(path);
  if (!format) throw DataError("unknown event file extension: " + path.string());
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open events file: " + path.string());
  return parse_events(in, *format);
}

void write_events_csv(std::ostream& out, std::span<const LocationEvent> events) {
  out << kCsvHeader << '\n';
  for (const auto& ev : events) {
    out << ev.tag_id << ',' << format_double(ev.t) << ',' << format_double(ev.x) << ','
        << format_double(ev.y) << '\n';
  }
}

TrackSet build_tracks(std::span<const LocationEvent> events) {
  std::map<std::string, std::vector<TrackSample>> grouped;
  for (const auto& ev : events) grouped[ev.tag_id].push_back({ev.t, ev.x, ev.y});

  TrackSet out;
  for (auto& [tag, raw] : grouped) {
    // Exact duplicates are removed before ordering ties so the surviving
    // sample for a conflicting timestamp is the first distinct fix in input order.
    std::stable_sort(raw.begin(), raw.end(),
                     [](const TrackSample& a, const TrackSample& b) { return a.t < b.t; });
    TagTrack track;
    track.tag_id = tag;
    for (std::size_t i = 0; i < raw.size();) {
      std::size_t j = i;
      while (j < raw.size() && raw[j].t == raw[i].t) ++j;
      track.samples.push_back(raw[i]);
      for (std::size_t k = i + 1; k < j; ++k) {
        const bool same_as_earlier = std::any_of(raw.begin() + static_cast<std::ptrdiff_t>(i),
                                                 raw.begin() + static_cast<std::ptrdiff_t>(k),
                                                 [&](const TrackSample& s) { return s == raw[k]; });
        if (same_as_earlier) {
          ++track.duplicates_dropped;
        } else {
          ++track.conflicting_timestamps;
        }
      }
      i = j;
    }
    if (track.samples.size() < 2) {
      out.skipped.push_back({tag, track.samples.size()});
    } else {
      out.tracks.emplace(tag, std::move(track));
    }
  }
  return out;
}

QualityReport assess_track_quality(const TagTrack& track, const TrackGeometry& geometry,
                                   const QcParams& params) {
  QualityReport report;
  report.tag_id = track.tag_id;
  report.sample_count = track.samples.size();
  report.conflicting_timestamps = track.conflicting_timestamps;

  const auto& s = track.samples;
  if (s.size() >= 2) {
    report.mean_update_rate = static_cast<double>(s.size() - 1) / (s.back().t - s.front().t);
  }

  const double lateral_limit = geometry.corridor_width() / 2.0 + params.margin;
  std::size_t out_of_bounds = 0;
  for (const auto& sample : s) {
    if (std::abs(geometry.project({sample.x, sample.y}).d) > lateral_limit) ++out_of_bounds;
  }
  if (!s.empty()) report.out_of_bounds_fraction = static_cast<double>(out_of_bounds) / static_cast<double>(s.size());

  std::size_t overspeed = 0;
  for (std::size_t i = 1; i < s.size(); ++i) {
    const double dist = std::hypot(s[i].x - s[i - 1].x, s[i].y - s[i - 1].y);
    if (dist > params.v_max * (s[i].t - s[i - 1].t)) ++overspeed;
  }
  if (s.size() >= 2) report.overspeed_fraction = static_cast<double>(overspeed) / static_cast<double>(s.size() - 1);

  if (report.out_of_bounds_fraction > params.oob_threshold) {
    report.verdict = Verdict::rejected;
    report.reason = "out_of_bounds_fraction " + format_double(report.out_of_bounds_fraction) +
                    " > " + format_double(params.oob_threshold);
  } else if (report.overspeed_fraction > params.overspeed_threshold) {
    report.verdict = Verdict::rejected;
    report.reason = "overspeed_fraction " + format_double(report.overspeed_fraction) + " > " +
                    format_double(params.overspeed_threshold);
  }
  return report;
}

}  // namespace uwbped
