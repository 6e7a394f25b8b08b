#include "uwbped/diagram.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <tuple>

#include "uwbped/error.hpp"
#include "uwbped/numfmt.hpp"

namespace uwbped {

FundamentalDiagram assemble_fd(std::span<const RunMetrics> runs) {
  FundamentalDiagram fd;
  for (const auto& run : runs) {
    fd.runs.push_back({run.run_id, run.participants});
    for (const auto& m : run.metrics) {
      fd.points.push_back({m.rho, m.crossing.v, m.crossing.tag_id, m.crossing.loop, run.run_id});
    }
  }
  std::stable_sort(fd.points.begin(), fd.points.end(), [](const FdPoint& a, const FdPoint& b) {
    return std::tie(a.run_id, a.tag_id, a.loop) < std::tie(b.run_id, b.tag_id, b.loop);
  });
  std::stable_sort(fd.runs.begin(), fd.runs.end(),
                   [](const RunInfo& a, const RunInfo& b) { return a.run_id < b.run_id; });
  return fd;
}

FreeVelocityStats velocity_stats(std::vector<double> values) {
  if (values.empty()) throw ValidationError("free velocity needs at least one crossing");
  // Sorted summation keeps the result independent of input order.
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  const double n = static_cast<double>(values.size());
  const double mean = sum / n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = values.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  return {mean, sd, values.size()};
}

FreeVelocityStats estimate_free_velocity(std::span<const Crossing> single_pedestrian_crossings) {
  std::vector<double> v;
  v.reserve(single_pedestrian_crossings.size());
  for (const auto& c : single_pedestrian_crossings) v.push_back(c.v);
  return velocity_stats(std::move(v));
}

std::vector<FdBin> bin_fd(const FundamentalDiagram& diagram, double bin_width) {
  if (!(bin_width > 0.0)) throw ValidationError("bin width must be positive");
  std::map<long long, std::vector<double>> groups;
  for (const auto& p : diagram.points) {
    groups[static_cast<long long>(std::floor(p.rho / bin_width))].push_back(p.v);
  }
  std::vector<FdBin> bins;
  bins.reserve(groups.size());
  for (auto& [index, members] : groups) {
    const auto [lo, hi] = std::minmax_element(members.begin(), members.end());
    const double min_v = *lo;
    const double max_v = *hi;
    const auto stats = velocity_stats(std::move(members));
    bins.push_back({(static_cast<double>(index) + 0.5) * bin_width, std::clamp(stats.mean, min_v, max_v),
                    stats.sample_std, stats.n});
  }
  return bins;
}

void write_crossings_csv(std::ostream& out, std::span<const CrossingMetric> crossings) {
  out << "tag_id,loop,t_en,t_ex,v,rho,flags\n";
  for (const auto& m : crossings) {
    const auto& c = m.crossing;
    out << c.tag_id << ',' << c.loop << ',' << format_double(c.t_en) << ',' << format_double(c.t_ex) << ','
        << format_double(c.v) << ',' << format_double(m.rho) << ',' << crossing_flags(c) << '\n';
  }
}

void write_fd_csv(std::ostream& out, const FundamentalDiagram& diagram) {
  out << "rho,v,tag_id,loop,run\n";
  for (const auto& p : diagram.points) {
    out << format_double(p.rho) << ',' << format_double(p.v) << ',' << p.tag_id << ',' << p.loop << ','
        << p.run_id << '\n';
  }
}

void write_fd_binned_csv(std::ostream& out, std::span<const FdBin> bins) {
  out << "rho_bin_center,v_mean,v_std,count\n";
  for (const auto& b : bins) {
    out << format_double(b.center) << ',' << format_double(b.v_mean) << ',' << format_double(b.v_std) << ','
        << b.count << '\n';
  }
}

namespace {

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.push_back(line.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return fields;
}

}  // namespace

FundamentalDiagram read_fd_csv(std::istream& in) {
  FundamentalDiagram fd;
  std::map<std::string, std::set<std::string>> tags_per_run;
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!header) {
      if (line != "rho,v,tag_id,loop,run") throw ParseError(line_no, "header", "expected 'rho,v,tag_id,loop,run'");
      header = true;
      continue;
    }
    const auto f = split_commas(line);
    if (f.size() != 5) throw ParseError(line_no, "row", "expected 5 fields");
    const auto rho = parse_double(f[0]);
    const auto v = parse_double(f[1]);
    const auto loop = parse_double(f[3]);
    if (!rho || !std::isfinite(*rho)) throw ParseError(line_no, "rho", "not a finite number");
    if (!v || !std::isfinite(*v)) throw ParseError(line_no, "v", "not a finite number");
    if (!loop || *loop != std::floor(*loop)) throw ParseError(line_no, "loop", "not an integer");
    if (f[2].empty()) throw ParseError(line_no, "tag_id", "empty tag id");
    fd.points.push_back({*rho, *v, f[2], static_cast<int>(*loop), f[4]});
    tags_per_run[f[4]].insert(f[2]);
  }
  for (const auto& [run, tags] : tags_per_run) fd.runs.push_back({run, tags.size()});
  return fd;
}

void write_summary(std::ostream& out, const ExportBundle& bundle) {
  out << "# uwbped analysis summary\n";
  if (bundle.free_velocity) {
    out << "free_velocity.mean=" << format_double(bundle.free_velocity->mean) << '\n'
        << "free_velocity.std=" << format_double(bundle.free_velocity->sample_std) << '\n'
        << "free_velocity.n=" << bundle.free_velocity->n << '\n';
  } else {
    out << "free_velocity.mean=n/a\nfree_velocity.std=n/a\nfree_velocity.n=0\n";
  }
  out << "free_velocity.reference=" << format_double(kLiteratureFreeVelocity) << '\n';
  out << "section.length=" << format_double(bundle.section_length) << '\n';
  out << "fd.points=" << bundle.diagram.points.size() << '\n';
  out << "fd.bin_width=" << format_double(bundle.bin_width) << '\n';
  for (const auto& run : bundle.runs) {
    const std::string key = "run." + run.run_id + '.';
    out << key << "participants=" << run.participants << '\n'
        << key << "crossings=" << run.crossings << '\n'
        << key << "degraded_crossings=" << run.degraded_crossings << '\n'
        << key << "mean_update_rate=" << format_double(run.mean_update_rate) << '\n'
        << key << "rejected_tags=";
    for (std::size_t i = 0; i < run.rejected_tags.size(); ++i) {
      out << (i ? ";" : "") << run.rejected_tags[i];
    }
    out << '\n';
  }
}

void write_file(const std::filesystem::path& path, const std::function<void(std::ostream&)>& fn) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot open for writing: " + path.string());
  fn(out);
  out.flush();
  if (!out) throw DataError("write failed: " + path.string());
}

void export_results(const ExportBundle& bundle, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw DataError("cannot create output directory " + out_dir.string() + ": " + ec.message());

  const auto bins = bin_fd(bundle.diagram, bundle.bin_width);
  write_file(out_dir / "crossings.csv", [&](std::ostream& o) { write_crossings_csv(o, bundle.crossings); });
  write_file(out_dir / "fd.csv", [&](std::ostream& o) { write_fd_csv(o, bundle.diagram); });
  write_file(out_dir / "fd_binned.csv", [&](std::ostream& o) { write_fd_binned_csv(o, bins); });
  write_file(out_dir / "occupancy.csv",
             [&](std::ostream& o) { write_occupancy_csv(o, bundle.occupancy, bundle.section_length); });
  write_file(out_dir / "summary.txt", [&](std::ostream& o) { write_summary(o, bundle); });
}

}  // namespace uwbped
