#include "uwbped/simgen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <random>

#include "uwbped/error.hpp"
#include "uwbped/numfmt.hpp"

namespace uwbped {

namespace {

constexpr double kMaxSimulatedSeconds = 36000.0;

void require(bool ok, const std::string& what) {
  if (!ok) throw ValidationError(what);
}

std::mt19937_64 stream_engine(std::uint64_t seed, std::uint32_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), 0x75776221u, stream};
  return std::mt19937_64(seq);
}

}  // namespace

void ScenarioConfig::validate() const {
  require(n_pedestrians >= 1, "sim.n_pedestrians must be >= 1");
  require(loops_per_pedestrian >= 1, "sim.loops_per_pedestrian must be >= 1");
  require(section_fits(section, geometry), "measurement section must lie on a single straight of the track");
  require(motion.v0_mean > 0.0, "sim.v0_mean must be positive");
  require(motion.v0_std >= 0.0, "sim.v0_std must be non-negative");
  require(motion.d0 > 0.0, "sim.d0 must be positive");
  require(motion.tau > 0.0, "sim.tau must be positive");
  require(n_pedestrians * motion.d0 < geometry.total_length(),
          "infeasible packing: sim.n_pedestrians * sim.d0 must be smaller than the track length " +
              format_double(geometry.total_length()) + " m");
  require(sampling.mean_rate > 0.0, "sim.mean_rate must be positive");
  require(sampling.interval_min > 0.0 && sampling.interval_min <= sampling.interval_max,
          "sim.interval_min must be positive and not above sim.interval_max");
  require(sampling.noise_sigma >= 0.0, "sim.noise_sigma must be non-negative");
  require(sampling.erratic_tags >= 0, "sim.erratic_tags must be >= 0");
  require(sampling.erratic_box_margin >= 0.0, "sim.erratic_box_margin must be non-negative");
}

double headway_speed(double gap, double v0, double d0, double tau) {
  return std::min(v0, std::max(0.0, (gap - d0) / tau));
}

double PedestrianTruth::position_at(double t, double dt) const {
  if (s.empty()) return 0.0;
  if (t <= 0.0) return s.front();
  const auto k = static_cast<std::size_t>(std::floor(t / dt));
  if (k + 1 >= s.size()) return s.back();
  const double frac = (t - static_cast<double>(k) * dt) / dt;
  return s[k] + (s[k + 1] - s[k]) * frac;
}

double GroundTruth::t_end() const {
  double end = 0.0;
  for (const auto& p : pedestrians) end = std::max(end, p.t_end(dt));
  return end;
}

std::string pedestrian_tag(int index) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "P%02d", index + 1);
  return buf;
}

std::string erratic_tag(int index) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "X%02d", index + 1);
  return buf;
}

GroundTruth simulate_run(const ScenarioConfig& config) {
  config.validate();
  const int n = config.n_pedestrians;
  const double L = config.geometry.total_length();
  const double dt = kSimulationStep;
  const auto& motion = config.motion;

  GroundTruth truth;
  truth.dt = dt;
  truth.track_length = L;
  truth.loops_per_pedestrian = config.loops_per_pedestrian;

  std::mt19937_64 rng = stream_engine(config.seed, 0);
  std::normal_distribution<double> v0_dist(motion.v0_mean, motion.v0_std > 0.0 ? motion.v0_std : 1.0);

  std::vector<double> pos(n);
  std::vector<double> finish(n);
  std::vector<bool> active(n, true);
  for (int j = 0; j < n; ++j) {
    PedestrianTruth p;
    p.tag_id = pedestrian_tag(j);
    if (motion.v0_std == 0.0) {
      p.v0 = motion.v0_mean;
    } else {
      do {
        p.v0 = v0_dist(rng);
      } while (!(p.v0 > 0.0));
    }
    pos[j] = L * j / n;
    p.first_loop = std::max(0, static_cast<int>(std::ceil((pos[j] - config.section.x_en()) / L)));
    finish[j] = config.section.x_en() + (p.first_loop + config.loops_per_pedestrian) * L;
    p.s.push_back(pos[j]);
    truth.pedestrians.push_back(std::move(p));
  }

  const auto max_steps = static_cast<std::size_t>(kMaxSimulatedSeconds / dt);
  std::vector<int> ring;
  std::vector<double> step(n, 0.0);
  for (std::size_t k = 0;; ++k) {
    ring.clear();
    for (int j = 0; j < n; ++j) {
      if (active[j]) ring.push_back(j);
    }
    if (ring.empty()) break;
    if (k >= max_steps) throw ValidationError("simulation did not finish within the time limit");

    const std::size_t m = ring.size();
    for (std::size_t i = 0; i < m; ++i) {
      const int j = ring[i];
      double gap = std::numeric_limits<double>::infinity();
      if (m > 1) {
        const int pred = ring[(i + 1) % m];
        gap = pos[pred] - pos[j] + (pred < j ? L : 0.0);
      }
      const double v = headway_speed(gap, truth.pedestrians[j].v0, motion.d0, motion.tau);
      step[j] = std::min(v * dt, std::max(0.0, gap));
    }
    for (const int j : ring) {
      pos[j] += step[j];
      truth.pedestrians[j].s.push_back(pos[j]);
      if (pos[j] >= finish[j]) active[j] = false;
    }
  }
  return truth;
}

std::vector<LocationEvent> sample_uwb_events(const GroundTruth& truth, const ScenarioConfig& config) {
  const auto& sp = config.sampling;
  std::vector<LocationEvent> events;

  const auto next_interval = [&](std::mt19937_64& eng, std::exponential_distribution<double>& dist) {
    return std::clamp(dist(eng), sp.interval_min, sp.interval_max);
  };

  for (std::size_t j = 0; j < truth.pedestrians.size(); ++j) {
    const auto& ped = truth.pedestrians[j];
    auto eng = stream_engine(config.seed, static_cast<std::uint32_t>(j + 1));
    std::exponential_distribution<double> interval(sp.mean_rate);
    std::normal_distribution<double> noise(0.0, sp.noise_sigma > 0.0 ? sp.noise_sigma : 1.0);
    const double t_end = ped.t_end(truth.dt);
    for (double t = 0.0; t <= t_end; t += next_interval(eng, interval)) {
      Point2 p = config.geometry.centerline_point(ped.position_at(t, truth.dt));
      if (sp.noise_sigma > 0.0) {
        p.x += noise(eng);
        p.y += noise(eng);
      }
      events.push_back({ped.tag_id, t, p.x, p.y});
    }
  }

  const double run_end = truth.t_end();
  Box2 box = config.geometry.bounding_box();
  box.min = {box.min.x - sp.erratic_box_margin, box.min.y - sp.erratic_box_margin};
  box.max = {box.max.x + sp.erratic_box_margin, box.max.y + sp.erratic_box_margin};
  for (int e = 0; e < sp.erratic_tags; ++e) {
    auto eng = stream_engine(config.seed, static_cast<std::uint32_t>(truth.pedestrians.size() + 1 + e));
    std::exponential_distribution<double> interval(sp.mean_rate);
    std::uniform_real_distribution<double> ux(box.min.x, box.max.x);
    std::uniform_real_distribution<double> uy(box.min.y, box.max.y);
    const std::string tag = erratic_tag(e);
    for (double t = 0.0; t <= run_end; t += next_interval(eng, interval)) {
      const double x = ux(eng);
      events.push_back({tag, t, x, uy(eng)});
    }
  }

  std::stable_sort(events.begin(), events.end(),
                   [](const LocationEvent& a, const LocationEvent& b) { return a.t < b.t; });
  return events;
}

std::vector<OracleCrossing> oracle_crossings(const GroundTruth& truth, const MeasurementSection& section) {
  std::vector<OracleCrossing> out;
  const double dt = truth.dt;
  for (const auto& ped : truth.pedestrians) {
    const auto passage_time = [&](double boundary) -> double {
      const auto it = std::upper_bound(ped.s.begin(), ped.s.end(), boundary);
      if (it == ped.s.begin() || it == ped.s.end()) return std::numeric_limits<double>::quiet_NaN();
      const auto i = static_cast<std::size_t>(it - ped.s.begin());
      const double a = ped.s[i - 1];
      const double b = ped.s[i];
      return (static_cast<double>(i - 1) + (boundary - a) / (b - a)) * dt;
    };
    for (int k = ped.first_loop; k < ped.first_loop + truth.loops_per_pedestrian; ++k) {
      const double t_en = passage_time(section.x_en() + k * truth.track_length);
      const double t_ex = passage_time(section.x_ex() + k * truth.track_length);
      if (!std::isfinite(t_en) || !std::isfinite(t_ex)) continue;
      out.push_back({ped.tag_id, k, t_en, t_ex, section.length() / (t_ex - t_en)});
    }
  }
  return out;
}

void write_truth_csv(std::ostream& out, const GroundTruth& truth, const TrackGeometry& geometry) {
  out << "tag_id,t,s,x,y\n";
  for (const auto& ped : truth.pedestrians) {
    for (std::size_t k = 0; k < ped.s.size(); ++k) {
      const Point2 p = geometry.centerline_point(ped.s[k]);
      out << ped.tag_id << ',' << format_double(static_cast<double>(k) * truth.dt) << ','
          << format_double(ped.s[k]) << ',' << format_double(p.x) << ',' << format_double(p.y) << '\n';
    }
  }
}

void write_oracle_csv(std::ostream& out, const std::vector<OracleCrossing>& crossings) {
  out << "tag_id,loop,t_en,t_ex,v\n";
  for (const auto& c : crossings) {
    out << c.tag_id << ',' << c.loop << ',' << format_double(c.t_en) << ',' << format_double(c.t_ex) << ','
        << format_double(c.v) << '\n';
  }
}

}  // namespace uwbped
