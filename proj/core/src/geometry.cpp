#include "uwbped/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "uwbped/error.hpp"

namespace uwbped {

namespace {

constexpr double kPi = std::numbers::pi;

double wrap_arc(double s, double length) {
  double r = s - length * std::floor(s / length);
  if (r >= length || r < 0.0) r = 0.0;
  return r;
}

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw ValidationError(std::string(name) + " must be a positive finite number");
  }
}

}  // namespace

TrackGeometry::TrackGeometry(double straight_length, double radius, double corridor_width,
                             Point2 origin, double heading)
    : straight_(straight_length),
      radius_(radius),
      width_(corridor_width),
      origin_(origin),
      heading_(heading),
      cos_h_(std::cos(heading)),
      sin_h_(std::sin(heading)) {
  require_positive(straight_length, "track.straight_length");
  require_positive(radius, "track.radius");
  require_positive(corridor_width, "track.corridor_width");
  if (!std::isfinite(origin.x) || !std::isfinite(origin.y) || !std::isfinite(heading)) {
    throw ValidationError("track origin and heading must be finite");
  }
}

Point2 TrackGeometry::to_local(Point2 w) const {
  const double dx = w.x - origin_.x;
  const double dy = w.y - origin_.y;
  return {cos_h_ * dx + sin_h_ * dy, -sin_h_ * dx + cos_h_ * dy};
}

Point2 TrackGeometry::to_world(Point2 p) const {
  return {origin_.x + cos_h_ * p.x - sin_h_ * p.y, origin_.y + sin_h_ * p.x + cos_h_ * p.y};
}

Point2 TrackGeometry::centerline_point(double s) const {
  const double S = straight_;
  const double R = radius_;
  s = wrap_arc(s, total_length());
  Point2 p;
  if (s < S) {
    p = {s, -R};
  } else if (s < second_straight_start()) {
    const double phi = (s - S) / R - kPi / 2.0;
    p = {S + R * std::cos(phi), R * std::sin(phi)};
  } else if (s < second_curve_start()) {
    p = {S - (s - second_straight_start()), R};
  } else {
    const double phi = kPi / 2.0 + (s - second_curve_start()) / R;
    p = {R * std::cos(phi), R * std::sin(phi)};
  }
  return to_world(p);
}

TrackProjection TrackGeometry::project(Point2 world) const {
  const double S = straight_;
  const double R = radius_;
  const Point2 p = to_local(world);
  TrackProjection out;

  if (p.x >= 0.0 && p.x <= S) {
    if (p.x == 0.0 && p.y == 0.0) {
      // Centre of the closing semicircle.
      return {second_curve_start(), R};
    }
    // y == 0 ties go to the first straight; at x == S that is the start of
    // the first semicircle with d = R.
    if (p.y <= 0.0) {
      out = {p.x, p.y + R};
    } else {
      out = {second_straight_start() + (S - p.x), R - p.y};
    }
  } else if (p.x > S) {
    const double dx = p.x - S;
    const double phi = std::atan2(p.y, dx);
    out = {S + R * (phi + kPi / 2.0), R - std::hypot(dx, p.y)};
  } else {
    double phi = std::atan2(p.y, p.x);
    if (phi < kPi / 2.0) phi += 2.0 * kPi;
    out = {second_curve_start() + R * (phi - kPi / 2.0), R - std::hypot(p.x, p.y)};
  }
  out.s_raw = wrap_arc(out.s_raw, total_length());
  return out;
}

Box2 TrackGeometry::bounding_box() const {
  const double h = width_ / 2.0;
  const Point2 corners[] = {{-radius_ - h, -radius_ - h},
                            {straight_ + radius_ + h, -radius_ - h},
                            {straight_ + radius_ + h, radius_ + h},
                            {-radius_ - h, radius_ + h}};
  Box2 box{to_world(corners[0]), to_world(corners[0])};
  for (const auto& c : corners) {
    const Point2 w = to_world(c);
    box.min = {std::min(box.min.x, w.x), std::min(box.min.y, w.y)};
    box.max = {std::max(box.max.x, w.x), std::max(box.max.y, w.y)};
  }
  return box;
}

TrackGeometry make_stadium_track(double straight_length, double radius, double corridor_width) {
  return TrackGeometry(straight_length, radius, corridor_width);
}

TrackProjection project_to_track(Point2 point, const TrackGeometry& geometry) {
  return geometry.project(point);
}

namespace {

bool within_one_straight(double a, double b, const TrackGeometry& g) {
  const auto inside = [&](double lo, double hi) { return a >= lo && a <= hi && b >= lo && b <= hi; };
  return inside(0.0, g.first_curve_start()) ||
         inside(g.second_straight_start(), g.second_curve_start());
}

}  // namespace

MeasurementSection make_section(double x_en, double x_ex, const TrackGeometry& geometry) {
  if (!std::isfinite(x_en) || !std::isfinite(x_ex)) {
    throw ValidationError("section bounds must be finite");
  }
  if (x_en < 0.0) throw ValidationError("section.x_en must be >= 0");
  if (!(x_en < x_ex)) throw ValidationError("section.x_en must be smaller than section.x_ex");
  if (!within_one_straight(x_en, x_ex, geometry)) {
    throw ValidationError("measurement section must lie on a single straight of the track");
  }
  return MeasurementSection(x_en, x_ex);
}

bool section_fits(const MeasurementSection& section, const TrackGeometry& geometry) {
  return within_one_straight(section.x_en(), section.x_ex(), geometry);
}

std::vector<ArcSample> unwrap_arc_samples(std::span<const TimedArc> samples, double track_length) {
  std::vector<ArcSample> out;
  out.reserve(samples.size());
  for (const auto& s : samples) {
    double lifted = s.s_raw;
    if (!out.empty()) {
      const double turns = std::round((out.back().s_unwrapped - s.s_raw) / track_length);
      lifted = s.s_raw + turns * track_length;
    }
    out.push_back({s.t, s.s_raw, lifted, s.d});
  }
  return out;
}

}  // namespace uwbped
