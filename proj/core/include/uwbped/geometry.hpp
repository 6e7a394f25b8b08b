#pragma once

#include <numbers>
#include <span>
#include <vector>

namespace uwbped {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

struct Box2 {
  Point2 min;
  Point2 max;
};

// Nearest-centerline coordinates of a planar point.
struct TrackProjection {
  double s_raw = 0.0;  // arc length in [0, L)
  double d = 0.0;      // signed lateral offset, positive to the left of the walking direction
};

// Closed stadium-shaped loop: two parallel straights of equal length joined
// by two semicircles. In the track's local frame the first straight runs
// from (0, -R) to (S, -R), the first semicircle is centred at (S, 0) and
// the closing one at (0, 0). Walking direction is counter-clockwise and
// s = 0 is the start of the first straight. `origin` and `heading` place the
// local frame in world coordinates.
class TrackGeometry {
 public:
  // Demo defaults: 6 m straights, 1.5 m radius, 0.8 m corridor.
  TrackGeometry() : TrackGeometry(6.0, 1.5, 0.8) {}
  TrackGeometry(double straight_length, double radius, double corridor_width,
                Point2 origin = {}, double heading = 0.0);

  double straight_length() const noexcept { return straight_; }
  double radius() const noexcept { return radius_; }
  double corridor_width() const noexcept { return width_; }
  Point2 origin() const noexcept { return origin_; }
  double heading() const noexcept { return heading_; }
  double total_length() const noexcept { return 2.0 * straight_ + 2.0 * std::numbers::pi * radius_; }

  // Arc length at which the first semicircle, second straight and closing
  // semicircle begin.
  double first_curve_start() const noexcept { return straight_; }
  double second_straight_start() const noexcept { return straight_ + std::numbers::pi * radius_; }
  double second_curve_start() const noexcept { return 2.0 * straight_ + std::numbers::pi * radius_; }

  // World position of the centerline at arc length s (taken modulo L).
  Point2 centerline_point(double s) const;

  TrackProjection project(Point2 world) const;

  // Axis-aligned world box enclosing the corridor's outer edge.
  Box2 bounding_box() const;

 private:
  Point2 to_local(Point2 world) const;
  Point2 to_world(Point2 local) const;

  double straight_;
  double radius_;
  double width_;
  Point2 origin_;
  double heading_;
  double cos_h_;
  double sin_h_;
};

TrackGeometry make_stadium_track(double straight_length, double radius, double corridor_width);

TrackProjection project_to_track(Point2 point, const TrackGeometry& geometry);

// The analysed window [x_en, x_ex] in arc length; always on one straight.
class MeasurementSection {
 public:
  // Default: [2, 4] on the first straight of the demo track.
  MeasurementSection() = default;

  double x_en() const noexcept { return x_en_; }
  double x_ex() const noexcept { return x_ex_; }
  double length() const noexcept { return x_ex_ - x_en_; }

 private:
  friend MeasurementSection make_section(double, double, const TrackGeometry&);
  MeasurementSection(double x_en, double x_ex) : x_en_(x_en), x_ex_(x_ex) {}

  double x_en_ = 2.0;
  double x_ex_ = 4.0;
};

// Throws ValidationError unless 0 <= x_en < x_ex and both lie on the same straight.
MeasurementSection make_section(double x_en, double x_ex, const TrackGeometry& geometry);

// True when the section lies on one straight of `geometry`.
bool section_fits(const MeasurementSection& section, const TrackGeometry& geometry);

struct TimedArc {
  double t = 0.0;
  double s_raw = 0.0;
  double d = 0.0;
};

struct ArcSample {
  double t = 0.0;
  double s_raw = 0.0;
  double s_unwrapped = 0.0;
  double d = 0.0;
};

// Lifts s_raw by whole multiples of L so consecutive samples differ by at
// most L/2. The first sample is kept as is.
std::vector<ArcSample> unwrap_arc_samples(std::span<const TimedArc> samples, double track_length);

}  // namespace uwbped
