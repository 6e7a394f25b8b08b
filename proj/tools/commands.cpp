#include "commands.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <tuple>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "run_config.hpp"
#include "uwbped/error.hpp"
#include "uwbped/numfmt.hpp"

namespace uwbped::cli {

namespace {

RunConfig resolve_config(const std::optional<std::filesystem::path>& path, std::optional<std::uint64_t> seed) {
  RunConfig cfg = path ? load_run_config(*path) : parse_run_config("{}");
  if (seed) {
    cfg.seed = *seed;
    cfg.scenario.seed = *seed;
  }
  return cfg;
}

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw DataError("cannot create output directory " + dir.string() + ": " + ec.message());
}

nlohmann::json diagnostics_json(const RunAnalysis& run) {
  using nlohmann::json;
  json doc;
  doc["run_id"] = run.run_id;
  json accepted = json::array();
  json rejected = json::array();
  json conflicts = json::object();
  for (const auto& q : run.quality) {
    if (q.accepted()) {
      accepted.push_back(q.tag_id);
    } else {
      rejected.push_back({{"tag_id", q.tag_id},
                          {"reason", q.reason},
                          {"sample_count", q.sample_count},
                          {"mean_update_rate", q.mean_update_rate},
                          {"out_of_bounds_fraction", q.out_of_bounds_fraction},
                          {"overspeed_fraction", q.overspeed_fraction}});
    }
    if (q.conflicting_timestamps > 0) conflicts[q.tag_id] = q.conflicting_timestamps;
  }
  doc["accepted_tags"] = accepted;
  doc["rejected_tags"] = rejected;
  doc["conflicting_timestamps"] = conflicts;

  json skipped_tags = json::array();
  for (const auto& s : run.skipped_tags) skipped_tags.push_back({{"tag_id", s.tag_id}, {"sample_count", s.sample_count}});
  doc["skipped_tags"] = skipped_tags;

  json skipped = json::array();
  for (const auto& [tag, list] : run.skipped_crossings) {
    for (const auto& s : list) skipped.push_back({{"tag_id", tag}, {"loop", s.loop}, {"reason", to_string(s.reason)}});
  }
  doc["skipped_crossings"] = skipped;

  json degraded = json::array();
  for (const auto& c : run.crossings) {
    if (c.degraded()) degraded.push_back({{"tag_id", c.tag_id}, {"loop", c.loop}, {"flags", crossing_flags(c)}});
  }
  doc["degraded_crossings"] = degraded;
  return doc;
}

template <typename Fn>
int guarded(std::ostream& log, Fn&& fn) {
  try {
    return fn();
  } catch (const ValidationError& e) {
    log << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ParseError& e) {
    log << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const DataError& e) {
    log << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::filesystem::filesystem_error& e) {
    log << "error: " << e.what() << '\n';
    return kExitData;
  }
}

}  // namespace

int simulate_command(const SimulateOptions& options, std::ostream& log) {
  return guarded(log, [&] {
    RunConfig cfg = resolve_config(options.config, options.seed);
    if (options.n_pedestrians) cfg.scenario.n_pedestrians = *options.n_pedestrians;
    cfg.scenario.validate();

    const auto truth = simulate_run(cfg.scenario);
    const auto events = sample_uwb_events(truth, cfg.scenario);
    const auto oracle = oracle_crossings(truth, cfg.scenario.section);

    ensure_dir(options.out_dir);
    write_file(options.out_dir / "events.csv", [&](std::ostream& o) { write_events_csv(o, events); });
    write_file(options.out_dir / "truth.csv",
               [&](std::ostream& o) { write_truth_csv(o, truth, cfg.scenario.geometry); });
    write_file(options.out_dir / "oracle_crossings.csv", [&](std::ostream& o) { write_oracle_csv(o, oracle); });
    log << "simulated " << truth.pedestrians.size() << " pedestrians, " << events.size() << " events, "
        << oracle.size() << " oracle crossings -> " << options.out_dir.string() << '\n';
    return kExitOk;
  });
}

int analyze_command(const AnalyzeOptions& options, std::ostream& log) {
  return guarded(log, [&] {
    RunConfig cfg = resolve_config(options.config, options.seed);
    if (options.bin_width) {
      if (!(*options.bin_width > 0.0)) throw ValidationError("--bin-width must be positive");
      cfg.bin_width = *options.bin_width;
    }
    const bool include_degraded = options.include_degraded || cfg.analysis.include_degraded;

    if (!std::filesystem::exists(options.events)) {
      throw DataError("events file not found: " + options.events.string());
    }
    const auto events = read_events(options.events);
    const std::string run_id = options.run_id.value_or(options.events.stem().string());
    const auto run = analyze_run(run_id, events, cfg.analysis);

    const RunMetrics metrics = run.diagram_metrics(include_degraded);
    ExportBundle bundle;
    bundle.diagram = assemble_fd(std::span<const RunMetrics>(&metrics, 1));
    bundle.bin_width = cfg.bin_width;
    if (run.accepted_tags() == 1 && !metrics.metrics.empty()) {
      std::vector<Crossing> single;
      for (const auto& m : metrics.metrics) single.push_back(m.crossing);
      bundle.free_velocity = estimate_free_velocity(single);
    }
    bundle.crossings = run.metrics;
    bundle.occupancy = run.occupancy;
    bundle.section_length = cfg.analysis.section.length();
    bundle.runs.push_back(run.summary());

    export_results(bundle, options.out_dir);
    write_file(options.out_dir / "diagnostics.json",
               [&](std::ostream& o) { o << diagnostics_json(run).dump(2) << '\n'; });
    log << "run " << run_id << ": " << run.accepted_tags() << " accepted tags, " << run.rejected_tags().size()
        << " rejected, " << run.crossings.size() << " crossings -> " << options.out_dir.string() << '\n';
    return kExitOk;
  });
}

int fd_command(const FdOptions& options, std::ostream& log) {
  return guarded(log, [&] {
    RunConfig cfg = resolve_config(options.config, options.seed);
    const double width = options.bin_width.value_or(cfg.bin_width);
    if (!(width > 0.0)) throw ValidationError("--bin-width must be positive");
    if (options.inputs.empty()) throw ValidationError("fd needs at least one --input");

    FundamentalDiagram pooled;
    std::map<std::string, std::size_t> participants;
    for (const auto& path : options.inputs) {
      std::ifstream in(path, std::ios::binary);
      if (!in) throw DataError("cannot open fd file: " + path.string());
      FundamentalDiagram fd;
      try {
        fd = read_fd_csv(in);
      } catch (const ParseError& e) {
        throw DataError(path.string() + ": " + e.what());
      }
      pooled.points.insert(pooled.points.end(), fd.points.begin(), fd.points.end());
      for (const auto& r : fd.runs) participants[r.run_id] += r.participants;
    }
    std::stable_sort(pooled.points.begin(), pooled.points.end(), [](const FdPoint& a, const FdPoint& b) {
      return std::tie(a.run_id, a.tag_id, a.loop) < std::tie(b.run_id, b.tag_id, b.loop);
    });
    for (const auto& [run, n] : participants) pooled.runs.push_back({run, n});

    std::vector<double> free;
    for (const auto& p : pooled.points) {
      if (participants[p.run_id] == 1) free.push_back(p.v);
    }

    const auto bins = bin_fd(pooled, width);
    ensure_dir(options.out_dir);
    write_file(options.out_dir / "fd_binned.csv", [&](std::ostream& o) { write_fd_binned_csv(o, bins); });
    if (options.inputs.size() > 1) {
      write_file(options.out_dir / "fd_pooled.csv", [&](std::ostream& o) { write_fd_csv(o, pooled); });
    }
    write_file(options.out_dir / "fd_summary.txt", [&](std::ostream& o) {
      o << "fd.points=" << pooled.points.size() << '\n' << "fd.runs=" << pooled.runs.size() << '\n';
      o << "fd.bin_width=" << format_double(width) << '\n';
      if (!free.empty()) {
        const auto stats = velocity_stats(free);
        o << "free_velocity.mean=" << format_double(stats.mean) << '\n'
          << "free_velocity.std=" << format_double(stats.sample_std) << '\n'
          << "free_velocity.n=" << stats.n << '\n';
      } else {
        o << "free_velocity.mean=n/a\nfree_velocity.std=n/a\nfree_velocity.n=0\n";
      }
      o << "free_velocity.reference=" << format_double(kLiteratureFreeVelocity) << '\n';
    });
    log << "binned " << pooled.points.size() << " points from " << pooled.runs.size() << " runs into "
        << bins.size() << " bins -> " << options.out_dir.string() << '\n';
    return kExitOk;
  });
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"UWB single-file trajectory analysis"};
  app.require_subcommand(1);

  SimulateOptions sim;
  std::string sim_config, sim_out = ".";
  std::uint64_t sim_seed = 0;
  int sim_n = 0;
  auto* simulate = app.add_subcommand("simulate", "Generate a synthetic run with ground truth");
  simulate->add_option("--config", sim_config, "JSON run configuration")->check(CLI::ExistingFile);
  simulate->add_option("--out-dir", sim_out, "Output directory");
  auto* sim_seed_opt = simulate->add_option("--seed", sim_seed, "Override the configured seed");
  auto* sim_n_opt = simulate->add_option("--n-pedestrians", sim_n, "Override sim.n_pedestrians");

  AnalyzeOptions an;
  std::string an_events, an_config, an_out = ".", an_run;
  double an_width = 0.0;
  std::uint64_t an_seed = 0;
  auto* analyze = app.add_subcommand("analyze", "Extract crossings, densities and the fundamental diagram");
  analyze->add_option("--events", an_events, "Event file (.csv or .jsonl)")->required();
  analyze->add_option("--config", an_config, "JSON run configuration")->check(CLI::ExistingFile);
  analyze->add_option("--out-dir", an_out, "Output directory");
  auto* an_width_opt = analyze->add_option("--bin-width", an_width, "Density bin width (1/m)");
  analyze->add_flag("--include-degraded", an.include_degraded, "Keep interpolation-degraded crossings in the diagram");
  auto* an_run_opt = analyze->add_option("--run-id", an_run, "Run identifier (default: events file stem)");
  auto* an_seed_opt = analyze->add_option("--seed", an_seed, "Override the configured seed");

  FdOptions fd;
  std::vector<std::string> fd_inputs;
  std::string fd_config, fd_out = ".";
  double fd_width = 0.0;
  std::uint64_t fd_seed = 0;
  auto* rebin = app.add_subcommand("fd", "Pool and re-bin existing fd.csv files");
  rebin->add_option("--input", fd_inputs, "fd.csv file (repeatable)")->required()->check(CLI::ExistingFile);
  rebin->add_option("--config", fd_config, "JSON run configuration")->check(CLI::ExistingFile);
  rebin->add_option("--out-dir", fd_out, "Output directory");
  auto* fd_width_opt = rebin->add_option("--bin-width", fd_width, "Density bin width (1/m)");
  auto* fd_seed_opt = rebin->add_option("--seed", fd_seed, "Override the configured seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  if (simulate->parsed()) {
    if (!sim_config.empty()) sim.config = sim_config;
    sim.out_dir = sim_out;
    if (*sim_seed_opt) sim.seed = sim_seed;
    if (*sim_n_opt) sim.n_pedestrians = sim_n;
    return simulate_command(sim, err);
  }
  if (analyze->parsed()) {
    an.events = an_events;
    if (!an_config.empty()) an.config = an_config;
    an.out_dir = an_out;
    if (*an_width_opt) an.bin_width = an_width;
    if (*an_run_opt) an.run_id = an_run;
    if (*an_seed_opt) an.seed = an_seed;
    return analyze_command(an, err);
  }
  fd.inputs.assign(fd_inputs.begin(), fd_inputs.end());
  if (!fd_config.empty()) fd.config = fd_config;
  fd.out_dir = fd_out;
  if (*fd_width_opt) fd.bin_width = fd_width;
  if (*fd_seed_opt) fd.seed = fd_seed;
  return fd_command(fd, err);
}

}  // namespace uwbped::cli
