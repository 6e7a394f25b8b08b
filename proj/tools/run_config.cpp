#include "run_config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

#include <json.hpp>

#include "uwbped/error.hpp"

namespace uwbped::cli {

namespace {

using nlohmann::json;

struct Values {
  double straight_length = 6.0;
  double radius = 1.5;
  double corridor_width = 0.8;
  double origin_x = 0.0;
  double origin_y = 0.0;
  double heading = 0.0;
  double x_en = 2.0;
  double x_ex = 4.0;
  RunConfig cfg;
};

double as_number(const json& v, const std::string& key) {
  if (!v.is_number()) throw ValidationError("config key '" + key + "' must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ValidationError("config key '" + key + "' must be finite");
  return d;
}

long long as_integer(const json& v, const std::string& key) {
  const double d = as_number(v, key);
  if (d != std::floor(d) || std::abs(d) > 9.0e15) {
    throw ValidationError("config key '" + key + "' must be an integer");
  }
  return v.is_number_integer() ? v.get<long long>() : static_cast<long long>(d);
}

int as_int(const json& v, const std::string& key) {
  const long long i = as_integer(v, key);
  if (i < std::numeric_limits<int>::min() || i > std::numeric_limits<int>::max()) {
    throw ValidationError("config key '" + key + "' is out of range");
  }
  return static_cast<int>(i);
}

bool as_bool(const json& v, const std::string& key) {
  if (!v.is_boolean()) throw ValidationError("config key '" + key + "' must be true or false");
  return v.get<bool>();
}

using Setter = std::function<void(Values&, const json&, const std::string&)>;

const std::vector<std::pair<std::string, Setter>>& setters() {
  static const std::vector<std::pair<std::string, Setter>> table = {
      {"track.straight_length", [](Values& v, const json& j, const std::string& k) { v.straight_length = as_number(j, k); }},
      {"track.radius", [](Values& v, const json& j, const std::string& k) { v.radius = as_number(j, k); }},
      {"track.corridor_width", [](Values& v, const json& j, const std::string& k) { v.corridor_width = as_number(j, k); }},
      {"track.origin_x", [](Values& v, const json& j, const std::string& k) { v.origin_x = as_number(j, k); }},
      {"track.origin_y", [](Values& v, const json& j, const std::string& k) { v.origin_y = as_number(j, k); }},
      {"track.heading", [](Values& v, const json& j, const std::string& k) { v.heading = as_number(j, k); }},
      {"section.x_en", [](Values& v, const json& j, const std::string& k) { v.x_en = as_number(j, k); }},
      {"section.x_ex", [](Values& v, const json& j, const std::string& k) { v.x_ex = as_number(j, k); }},
      {"qc.margin", [](Values& v, const json& j, const std::string& k) { v.cfg.analysis.qc.margin = as_number(j, k); }},
      {"qc.v_max", [](Values& v, const json& j, const std::string& k) { v.cfg.analysis.qc.v_max = as_number(j, k); }},
      {"qc.oob_threshold", [](Values& v, const json& j, const std::string& k) { v.cfg.analysis.qc.oob_threshold = as_number(j, k); }},
      {"qc.overspeed_threshold", [](Values& v, const json& j, const std::string& k) { v.cfg.analysis.qc.overspeed_threshold = as_number(j, k); }},
      {"analysis.bin_width", [](Values& v, const json& j, const std::string& k) { v.cfg.bin_width = as_number(j, k); }},
      {"analysis.include_degraded", [](Values& v, const json& j, const std::string& k) { v.cfg.analysis.include_degraded = as_bool(j, k); }},
      {"analysis.exclude_self", [](Values& v, const json& j, const std::string& k) {
         v.cfg.analysis.self_counting = as_bool(j, k) ? SelfCounting::exclude : SelfCounting::include;
       }},
      {"sim.n_pedestrians", [](Values& v, const json& j, const std::string& k) { v.cfg.scenario.n_pedestrians = as_int(j, k); }},
      {"sim.loops_per_pedestrian", [](Values& v, const json& j, const std::string& k) { v.cfg.scenario.loops_per_pedestrian = as_int(j, k); }},
      {"sim.v0_mean", [](Values& v, const json& j, const std::string& k) { v.cfg.scenario.motion.v0_mean = as_number(j, k); }},
      {"sim.v0_std", [](Values& v, const json& j, const std::string& k) { v.cfg.scenario.motion.v0_std = as_number(j, k); }},
      {"sim.d0", [](Values& v, const json& j, const std::string& k) { v.cfg.scenario.motion.d0 = as_number(j, k); }},
      {"sim.tau", [](Values& v, const json& j, const std::string& k) { v.cfg.scenario.motion.tau = as_number(j, k); }},
      {"sim.mean_rate", [](Values& v, const json& j, const std::string& k) { v.cfg.scenario.sampling.mean_rate = as_number(j, k); }},
      {"sim.interval_min", [](Values& v, const json& j, const std::string& k) { v.cfg.scenario.sampling.interval_min = as_number(j, k); }},
      {"sim.interval_max", [](Values& v, const json& j, const std::string& k) { v.cfg.scenario.sampling.interval_max = as_number(j, k); }},
      {"sim.noise_sigma", [](Values& v, const json& j, const std::string& k) { v.cfg.scenario.sampling.noise_sigma = as_number(j, k); }},
      {"sim.erratic_tags", [](Values& v, const json& j, const std::string& k) { v.cfg.scenario.sampling.erratic_tags = as_int(j, k); }},
      {"sim.erratic_box_margin", [](Values& v, const json& j, const std::string& k) { v.cfg.scenario.sampling.erratic_box_margin = as_number(j, k); }},
      {"seed", [](Values& v, const json& j, const std::string& k) {
         const long long s = as_integer(j, k);
         if (s < 0) throw ValidationError("config key 'seed' must be non-negative");
         v.cfg.seed = static_cast<std::uint64_t>(s);
       }},
  };
  return table;
}

void flatten(const json& node, const std::string& prefix, std::map<std::string, json>& out) {
  for (const auto& [key, value] : node.items()) {
    const std::string full = prefix.empty() ? key : prefix + "." + key;
    if (value.is_object()) {
      flatten(value, full, out);
    } else if (!out.emplace(full, value).second) {
      throw ValidationError("config key '" + full + "' given twice");
    }
  }
}

}  // namespace

const std::vector<std::string>& known_config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& [name, _] : setters()) k.push_back(name);
    return k;
  }();
  return keys;
}

RunConfig parse_run_config(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text.begin(), json_text.end());
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ValidationError("config must be a JSON object");

  std::map<std::string, json> flat;
  flatten(root, "", flat);

  Values v;
  for (const auto& [key, value] : flat) {
    const auto& table = setters();
    const auto it = std::find_if(table.begin(), table.end(), [&](const auto& e) { return e.first == key; });
    if (it == table.end()) throw ValidationError("unknown config key '" + key + "'");
    it->second(v, value, key);
  }

  RunConfig cfg = v.cfg;
  cfg.analysis.geometry =
      TrackGeometry(v.straight_length, v.radius, v.corridor_width, {v.origin_x, v.origin_y}, v.heading);
  cfg.analysis.section = make_section(v.x_en, v.x_ex, cfg.analysis.geometry);
  cfg.scenario.geometry = cfg.analysis.geometry;
  cfg.scenario.section = cfg.analysis.section;
  cfg.scenario.seed = cfg.seed;
  if (!(cfg.bin_width > 0.0)) throw ValidationError("config key 'analysis.bin_width' must be positive");
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read config file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_run_config(buf.str());
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

}  // namespace uwbped::cli
