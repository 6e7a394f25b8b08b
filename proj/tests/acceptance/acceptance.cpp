// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "uwbped/crossings.hpp"
#include "uwbped/density.hpp"
#include "uwbped/diagram.hpp"
#include "uwbped/pipeline.hpp"
#include "uwbped/simgen.hpp"

using namespace uwbped;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

ScenarioConfig scenario(int n, std::uint64_t seed) {
  ScenarioConfig cfg;
  cfg.n_pedestrians = n;
  cfg.seed = seed;
  return cfg;
}

RunAnalysis simulate_and_analyze(const ScenarioConfig& cfg, GroundTruth* truth_out = nullptr) {
  const auto truth = simulate_run(cfg);
  const auto events = sample_uwb_events(truth, cfg);
  AnalysisConfig acfg;
  acfg.geometry = cfg.geometry;
  acfg.section = cfg.section;
  auto run = analyze_run("seed" + std::to_string(cfg.seed), events, acfg);
  if (truth_out) *truth_out = truth;
  return run;
}

Outcome oracle_exactness() {
  const auto t0 = std::chrono::steady_clock::now();
  auto cfg = scenario(1, 1);
  cfg.motion.v0_mean = 1.0;
  cfg.motion.v0_std = 0.0;
  cfg.sampling.noise_sigma = 0.0;
  cfg.sampling.mean_rate = 5.0;
  GroundTruth truth;
  const auto run = simulate_and_analyze(cfg, &truth);
  const auto oracle = oracle_crossings(truth, cfg.section);
  const double elapsed = seconds_since(t0);
  if (oracle.size() != 2 || run.crossings.size() != 2)
    return {false, fmt("oracle %zu, pipeline %zu crossings", oracle.size(), run.crossings.size())};
  double worst = 0.0;
  for (std::size_t i = 0; i < 2; ++i) worst = std::max(worst, std::abs(run.crossings[i].v / oracle[i].v - 1.0));
  return {worst < 1e-9 && elapsed < 1.0, fmt("max rel err %.3g (< 1e-9), %.3f s (< 1 s)", worst, elapsed)};
}

Outcome free_velocity_reproduction() {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<Crossing> pooled;
  double v0_sum = 0.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto cfg = scenario(1, seed);
    cfg.sampling.noise_sigma = 0.0;
    GroundTruth truth;
    const auto run = simulate_and_analyze(cfg, &truth);
    v0_sum += truth.pedestrians.at(0).v0;
    const auto m = run.diagram_metrics(false);
    for (const auto& x : m.metrics) pooled.push_back(x.crossing);
  }
  const auto stats = estimate_free_velocity(pooled);
  const double v0_mean = v0_sum / 10.0;
  const double elapsed = seconds_since(t0);
  const bool ok = std::abs(stats.mean - v0_mean) <= 0.02 && stats.mean >= 1.1 && stats.mean <= 1.6 && elapsed < 5.0;
  return {ok, fmt("v_free %.4f +- %.4f (n=%zu), drawn v0 mean %.4f, |diff| %.2g (<= 0.02), %.3f s (< 5 s)",
                  stats.mean, stats.sample_std, stats.n, v0_mean, std::abs(stats.mean - v0_mean), elapsed)};
}

// Number of crossings whose [t_en, t_ex) contains t.
int stab(const std::vector<Crossing>& c, double t) {
  int n = 0;
  for (const auto& x : c) n += (x.t_en <= t && t < x.t_ex) ? 1 : 0;
  return n;
}

Outcome integration_identity() {
  const auto t0 = std::chrono::steady_clock::now();
  constexpr double dt = 1e-4;
  constexpr double l_m = 2.0;
  std::mt19937_64 rng(20240601);
  // Breakpoints on the 1e-4 tick grid so the midpoint sum is itself exact.
  std::uniform_int_distribution<int> start_tick(0, 100000), dur_tick(1000, 40000), count(1, 12);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<Crossing> c;
    const int n = count(rng);
    for (int i = 0; i < n; ++i) {
      const int a = start_tick(rng);
      const int d = dur_tick(rng);
      c.push_back({"T" + std::to_string(i), 0, a * dt, (a + d) * dt, 0.0, false, false});
    }
    const auto profile = build_occupancy(c);
    const auto& w = c[std::uniform_int_distribution<std::size_t>(0, c.size() - 1)(rng)];
    const double exact = mean_crossing_density(profile, w, l_m);
    const auto steps = std::llround((w.t_ex - w.t_en) / dt);
    double sum = 0.0;
    for (long long i = 0; i < steps; ++i) sum += stab(c, w.t_en + (static_cast<double>(i) + 0.5) * dt);
    const double riemann = sum * dt / (w.t_ex - w.t_en) / l_m;
    worst = std::max(worst, std::abs(exact - riemann) / riemann);
  }
  const double elapsed = seconds_since(t0);
  return {worst < 1e-6 && elapsed < 30.0, fmt("1000 profiles, max rel err %.3g (< 1e-6), %.3f s (< 30 s)", worst, elapsed)};
}

Outcome include_self_floor() {
  std::size_t checked = 0;
  std::size_t off = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto cfg = scenario(1, seed);
    if (seed > 10) cfg.sampling.noise_sigma = 0.0;
    const auto run = simulate_and_analyze(cfg);
    for (const auto& m : run.metrics) {
      ++checked;
      off += (m.rho == 0.5) ? 0 : 1;
    }
  }
  return {checked > 0 && off == 0, fmt("%zu single-pedestrian crossings, %zu with rho != 0.5", checked, off)};
}

Outcome crossing_conservation() {
  std::string detail;
  bool ok = true;
  for (int n : {1, 10, 15, 20}) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      auto cfg = scenario(n, 1000 * n + seed);
      cfg.sampling.noise_sigma = 0.0;
      const auto run = simulate_and_analyze(cfg);
      if (run.crossings.size() != static_cast<std::size_t>(2 * n)) {
        ok = false;
        detail += fmt(" n=%d seed=%llu got %zu;", n, static_cast<unsigned long long>(cfg.seed), run.crossings.size());
      }
    }
  }
  return {ok, ok ? "n in {1,10,15,20} x 5 seeds, exactly 2n crossings each" : "mismatch:" + detail};
}

Outcome noise_robustness() {
  std::size_t oracle_total = 0;
  std::size_t detected = 0;
  double bias_sum = 0.0;
  int runs = 0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    auto cfg = scenario(20, 5000 + seed);
    cfg.sampling.noise_sigma = 0.15;
    cfg.sampling.mean_rate = 4.74;
    GroundTruth truth;
    const auto run = simulate_and_analyze(cfg, &truth);
    std::map<std::string, std::vector<const Crossing*>> by_tag;
    for (const auto& c : run.crossings) by_tag[c.tag_id].push_back(&c);
    double run_bias = 0.0;
    std::size_t matched = 0;
    for (const auto& o : oracle_crossings(truth, cfg.section)) {
      ++oracle_total;
      const Crossing* best = nullptr;
      for (const auto* c : by_tag[o.tag_id]) {
        if (std::abs(c->t_en - o.t_en) <= 1.0 && (!best || std::abs(c->t_en - o.t_en) < std::abs(best->t_en - o.t_en)))
          best = c;
      }
      if (!best) continue;
      ++matched;
      run_bias += (best->v - o.v) / o.v;
    }
    detected += matched;
    if (matched > 0) {
      bias_sum += run_bias / static_cast<double>(matched);
      ++runs;
    }
  }
  const double rate = static_cast<double>(detected) / static_cast<double>(oracle_total);
  const double bias = runs ? bias_sum / runs : std::numeric_limits<double>::infinity();
  return {rate >= 0.95 && std::abs(bias) < 0.05,
          fmt("detected %zu/%zu = %.4f (>= 0.95), mean rel bias %+.4f (|.| < 0.05) over 50 runs", detected,
              oracle_total, rate, bias)};
}

Outcome diagram_shape() {
  std::vector<RunMetrics> runs;
  double rho_max = 0.0;
  for (int n : {1, 10, 15, 20}) {
    const auto run = simulate_and_analyze(scenario(n, 100 + n));
    for (const auto& m : run.metrics) rho_max = std::max(rho_max, m.rho);
    runs.push_back(run.diagram_metrics(false));
  }
  const auto bins = bin_fd(assemble_fd(runs), kDefaultBinWidth);
  const FdBin* sparsest = bins.empty() ? nullptr : &bins.front();
  const FdBin* densest = nullptr;
  for (const auto& b : bins)
    if (b.center <= 1.2) densest = &b;
  if (!sparsest || !densest) return {false, "no populated bins"};
  const bool ok = densest->v_mean < sparsest->v_mean && rho_max <= 1.3;
  return {ok, fmt("sparsest bin %.2f: v %.4f, densest bin %.2f: v %.4f, max rho %.4f (<= 1.3)", sparsest->center,
                  sparsest->v_mean, densest->center, densest->v_mean, rho_max)};
}

Outcome erratic_rejection() {
  constexpr int n = 20;
  int bad = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto cfg = scenario(n, 7000 + seed);
    cfg.sampling.erratic_tags = 1;
    const auto run = simulate_and_analyze(cfg);
    const bool ok = run.rejected_tags() == std::vector<std::string>{erratic_tag(0)} &&
                    run.accepted_tags() == static_cast<std::size_t>(n);
    bad += ok ? 0 : 1;
  }
  return {bad == 0, fmt("20 seeds, n=%d genuine + 1 erratic, %d seeds misclassified", n, bad)};
}

Outcome sampling_rate() {
  auto cfg = scenario(5, 9);
  cfg.loops_per_pedestrian = 40;
  const auto truth = simulate_run(cfg);
  const auto events = sample_uwb_events(truth, cfg);
  std::map<std::string, std::pair<std::size_t, double>> per_tag;  // count, last t within 600 s
  for (const auto& e : events) {
    if (e.t > 600.0) continue;
    auto& [count, last] = per_tag[e.tag_id];
    ++count;
    last = std::max(last, e.t);
  }
  double sum = 0.0;
  double span = std::numeric_limits<double>::infinity();
  for (const auto& [tag, cl] : per_tag) {
    sum += static_cast<double>(cl.first - 1) / cl.second;
    span = std::min(span, cl.second);
  }
  const double rate = sum / static_cast<double>(per_tag.size());
  return {std::abs(rate - 4.74) <= 0.3 && span >= 599.0,
          fmt("%zu tags over %.1f s, mean rate %.4f Hz (4.74 +- 0.3)", per_tag.size(), span, rate)};
}

Outcome interpolation_identities() {
  const auto a = interpolate_boundary_time({{10.0, 1.9, 1.9, 0.0}, {10.2, 2.1, 2.1, 0.0}, 2.0});
  const auto b = interpolate_boundary_time({{5.0, 1.8, 1.8, 0.0}, {5.4, 2.2, 2.2, 0.0}, 2.0});
  const auto c = interpolate_boundary_time({{3.0, 2.0, 2.0, 0.0}, {3.4, 2.0, 2.0, 0.0}, 2.0});
  const bool ok = a.t == 10.1 && !a.degraded && b.t == 5.2 && !b.degraded && c.t == 3.2 && c.degraded;
  return {ok, fmt("%.17g%s, %.17g%s, %.17g%s", a.t, a.degraded ? " (degraded)" : "", b.t,
                  b.degraded ? " (degraded)" : "", c.t, c.degraded ? " (degraded)" : "")};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"oracle exactness", oracle_exactness},
      {"free-velocity reproduction", free_velocity_reproduction},
      {"density integration identity", integration_identity},
      {"include-self floor", include_self_floor},
      {"crossing conservation", crossing_conservation},
      {"noise robustness", noise_robustness},
      {"fundamental-diagram shape", diagram_shape},
      {"erratic-tag rejection", erratic_rejection},
      {"sampling-rate realism", sampling_rate},
      {"interpolation identities", interpolation_identities},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome r;
    try {
      r = criteria[i].second();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    failed += r.pass ? 0 : 1;
    std::printf("%s  %2zu %-30s %s\n", r.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, r.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
