#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "uwbped/density.hpp"
#include "uwbped/geometry.hpp"
#include "uwbped/pipeline.hpp"
#include "uwbped/simgen.hpp"

namespace {

using namespace uwbped;

void BM_ProjectToTrack(benchmark::State& state) {
  const TrackGeometry track;
  std::mt19937_64 rng(3);
  const Box2 box = track.bounding_box();
  std::uniform_real_distribution<double> ux(box.min.x, box.max.x), uy(box.min.y, box.max.y);
  std::vector<Point2> points(4096);
  for (auto& p : points) p = {ux(rng), uy(rng)};
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(track.project(points[i++ & 4095]));
  }
}
BENCHMARK(BM_ProjectToTrack);

void BM_BuildOccupancy(benchmark::State& state) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> start(0.0, 600.0), len(1.0, 3.0);
  std::vector<Crossing> crossings(static_cast<std::size_t>(state.range(0)));
  for (auto& c : crossings) {
    c.t_en = start(rng);
    c.t_ex = c.t_en + len(rng);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_occupancy(crossings));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_BuildOccupancy)->Range(64, 16384)->Complexity();

void BM_SimulateRun(benchmark::State& state) {
  ScenarioConfig cfg;
  cfg.n_pedestrians = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_run(cfg));
  }
}
BENCHMARK(BM_SimulateRun)->Arg(1)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_AnalyzeRun(benchmark::State& state) {
  ScenarioConfig cfg;
  cfg.n_pedestrians = static_cast<int>(state.range(0));
  cfg.sampling.noise_sigma = 0.15;
  const auto events = sample_uwb_events(simulate_run(cfg), cfg);
  AnalysisConfig analysis;
  for (auto _ : state) {
    benchmark::DoNotOptimize(analyze_run("bench", events, analysis));
  }
  state.SetItemsProcessed(static_cast<int64_t>(state.iterations() * events.size()));
}
BENCHMARK(BM_AnalyzeRun)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
