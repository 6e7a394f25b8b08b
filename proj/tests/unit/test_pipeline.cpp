#include <gtest/gtest.h>

#include "uwbped/error.hpp"
#include "uwbped/pipeline.hpp"
#include "uwbped/simgen.hpp"

namespace uwbped {
namespace {

TEST(AnalyzeRun, CountsTwoCrossingsPerPedestrian) {
  for (int n : {1, 5, 20}) {
    ScenarioConfig cfg;
    cfg.n_pedestrians = n;
    cfg.sampling.noise_sigma = 0.0;
    cfg.seed = 30 + n;
    const auto run = analyze_run("r", sample_uwb_events(simulate_run(cfg), cfg), AnalysisConfig{});
    EXPECT_EQ(run.crossings.size(), static_cast<std::size_t>(2 * n));
    EXPECT_EQ(run.accepted_tags(), static_cast<std::size_t>(n));
    EXPECT_EQ(run.metrics.size(), run.crossings.size());
    for (const auto& m : run.metrics) EXPECT_GE(m.rho, 0.5);
    const auto s = run.summary();
    EXPECT_EQ(s.participants, static_cast<std::size_t>(n));
    EXPECT_NEAR(s.mean_update_rate, 4.74, 1.0);
  }
}

TEST(AnalyzeRun, RejectsErraticTag) {
  ScenarioConfig cfg;
  cfg.n_pedestrians = 10;
  cfg.sampling.erratic_tags = 1;
  cfg.seed = 77;
  const auto run = analyze_run("r", sample_uwb_events(simulate_run(cfg), cfg), AnalysisConfig{});
  EXPECT_EQ(run.rejected_tags(), std::vector<std::string>{"X01"});
  EXPECT_EQ(run.accepted_tags(), 10u);
  for (const auto& c : run.crossings) EXPECT_NE(c.tag_id, "X01");
}

TEST(AnalyzeRun, NoAcceptedTagIsADataError) {
  std::vector<LocationEvent> events;
  for (int i = 0; i < 20; ++i) events.push_back({"X", i * 0.2, 50.0 + i, 50.0});
  EXPECT_THROW(analyze_run("r", events, AnalysisConfig{}), DataError);
  EXPECT_THROW(analyze_run("r", {}, AnalysisConfig{}), DataError);
}

TEST(AnalyzeRun, SingleSampleTagsAreSkipped) {
  ScenarioConfig cfg;
  cfg.sampling.noise_sigma = 0.0;
  auto events = sample_uwb_events(simulate_run(cfg), cfg);
  events.push_back({"LONE", 1.0, 0.0, -1.5});
  const auto run = analyze_run("r", events, AnalysisConfig{});
  ASSERT_EQ(run.skipped_tags.size(), 1u);
  EXPECT_EQ(run.skipped_tags[0].tag_id, "LONE");
  EXPECT_EQ(run.crossings.size(), 2u);
}

TEST(RunAnalysis, DegradedCrossingsAreFilteredFromTheDiagram) {
  RunAnalysis run;
  run.run_id = "r";
  run.quality.push_back({});
  run.quality.back().tag_id = "A";
  run.metrics = {{{"A", 0, 0.0, 2.0, 1.0, false, false}, 0.5}, {{"A", 1, 20.0, 22.0, 1.0, true, false}, 0.5}};
  ASSERT_TRUE(run.quality.back().accepted());
  EXPECT_EQ(run.diagram_metrics(false).metrics.size(), 1u);
  EXPECT_EQ(run.diagram_metrics(true).metrics.size(), 2u);
  EXPECT_EQ(run.diagram_metrics(false).participants, 1u);
}

TEST(AnalyzeRun, ExcludeSelfShiftsDensityByOnePedestrian) {
  ScenarioConfig cfg;
  cfg.n_pedestrians = 8;
  cfg.seed = 4;
  const auto events = sample_uwb_events(simulate_run(cfg), cfg);
  AnalysisConfig inc;
  AnalysisConfig exc;
  exc.self_counting = SelfCounting::exclude;
  const auto a = analyze_run("r", events, inc);
  const auto b = analyze_run("r", events, exc);
  ASSERT_EQ(a.metrics.size(), b.metrics.size());
  for (std::size_t i = 0; i < a.metrics.size(); ++i) EXPECT_NEAR(a.metrics[i].rho - b.metrics[i].rho, 0.5, 1e-12);
}

TEST(AnalyzeRun, RotatedTrackGivesTheSameCrossings) {
  ScenarioConfig cfg;
  cfg.n_pedestrians = 4;
  cfg.sampling.noise_sigma = 0.0;
  const auto base = analyze_run("r", sample_uwb_events(simulate_run(cfg), cfg), AnalysisConfig{});

  ScenarioConfig moved = cfg;
  moved.geometry = TrackGeometry(6.0, 1.5, 0.8, {12.0, -3.0}, 0.7);
  moved.section = make_section(2.0, 4.0, moved.geometry);
  AnalysisConfig acfg;
  acfg.geometry = moved.geometry;
  acfg.section = moved.section;
  const auto other = analyze_run("r", sample_uwb_events(simulate_run(moved), moved), acfg);
  ASSERT_EQ(base.crossings.size(), other.crossings.size());
  for (std::size_t i = 0; i < base.crossings.size(); ++i) {
    EXPECT_NEAR(base.crossings[i].t_en, other.crossings[i].t_en, 1e-9);
    EXPECT_NEAR(base.crossings[i].v, other.crossings[i].v, 1e-9);
  }
}

}  // namespace
}  // namespace uwbped
