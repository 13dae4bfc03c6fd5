// Copyright 2026 The dynamic_gap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "manifest.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "dgap/config_fields.hpp"

namespace dgap::cli {
namespace {

class Reader {
 public:
  explicit Reader(std::string name) : name_(std::move(name)) {}

  [[noreturn]] void fail(const YAML::Mark& mark, const std::string& message) const {
    std::ostringstream o;
    o << name_ << ":" << mark.line + 1 << ":" << mark.column + 1 << ": " << message;
    throw ConfigError(o.str());
  }

  template <class T>
  T as(const YAML::Node& node, const std::string& key) const {
    try {
      return node.as<T>();
    } catch (const YAML::BadConversion&) {
      fail(node.Mark(), key + ": expected " + type_name<T>());
    }
  }

  void require_map(const YAML::Node& node, const std::string& what) const {
    if (!node.IsMap()) fail(node.Mark(), what + ": expected a mapping");
  }

  double positive(const YAML::Node& node, const std::string& key) const {
    const auto v = as<double>(node, key);
    if (!(v > 0.0)) fail(node.Mark(), key + ": must be positive");
    return v;
  }

 private:
  template <class T>
  static const char* type_name() {
    if constexpr (std::is_same_v<T, bool>) return "true or false";
    if constexpr (std::is_same_v<T, int> || std::is_same_v<T, std::uint64_t>) return "an integer";
    if constexpr (std::is_same_v<T, std::vector<double>>) return "a list of numbers";
    if constexpr (std::is_same_v<T, std::vector<int>>) return "a list of integers";
    if constexpr (std::is_same_v<T, std::string>) return "a string";
    return "a number";
  }

  std::string name_;
};

void read_planner(const Reader& rd, const YAML::Node& node, PlannerConfig* config) {
  rd.require_map(node, "planner");
  using Setter = std::function<void(const YAML::Node&)>;
  std::map<std::string, Setter> setters;
  std::map<std::string, bool> sections;
  visit_planner_fields(*config, [&](const char* section, const char* key, auto& field) {
    using T = std::decay_t<decltype(field)>;
    const std::string path = *section ? std::string(section) + "." + key : std::string(key);
    if (*section) sections[section] = true;
    setters[path] = [&rd, &field, path](const YAML::Node& v) { field = rd.as<T>(v, path); };
  });
  for (const auto& entry : node) {
    const auto key = entry.first.as<std::string>();
    if (sections.count(key)) {
      rd.require_map(entry.second, "planner." + key);
      for (const auto& inner : entry.second) {
        const auto sub = inner.first.as<std::string>();
        const auto it = setters.find(key + "." + sub);
        if (it == setters.end()) rd.fail(inner.first.Mark(), "unknown planner key '" + key + "." + sub + "'");
        it->second(inner.second);
      }
      continue;
    }
    const auto it = setters.find(key);
    if (it == setters.end()) rd.fail(entry.first.Mark(), "unknown planner key '" + key + "'");
    it->second(entry.second);
  }
  config->sync();
}

void read_trial(const Reader& rd, const YAML::Node& node, FileConfig* out) {
  rd.require_map(node, "trial");
  auto& ov = out->trial_overrides;
  for (const auto& entry : node) {
    const auto key = entry.first.as<std::string>();
    const YAML::Node& v = entry.second;
    if (key == "scan_rate") {
      ov.push_back([x = rd.positive(v, key)](TrialConfig& c) { c.scan_rate = x; });
    } else if (key == "control_rate") {
      ov.push_back([x = rd.positive(v, key)](TrialConfig& c) { c.control_rate = x; });
    } else if (key == "n_beams") {
      const int n = rd.as<int>(v, key);
      if (n < 8) rd.fail(v.Mark(), "n_beams: must be at least 8");
      ov.push_back([n](TrialConfig& c) { c.n_beams = static_cast<std::size_t>(n); });
    } else if (key == "max_range") {
      ov.push_back([x = rd.positive(v, key)](TrialConfig& c) { c.max_range = x; });
    } else if (key == "timeout") {
      ov.push_back([x = rd.positive(v, key)](TrialConfig& c) { c.timeout = x; });
    } else if (key == "goal_tolerance") {
      ov.push_back([x = rd.positive(v, key)](TrialConfig& c) { c.goal_tolerance = x; });
    } else if (key == "goal") {
      const auto g = rd.as<std::vector<double>>(v, key);
      if (g.size() != 2) rd.fail(v.Mark(), "goal: expected [x, y]");
      ov.push_back([g](TrialConfig& c) { c.goal = Vec2(g[0], g[1]); });
    } else if (key == "corridor_length") {
      ov.push_back([x = rd.positive(v, key)](TrialConfig& c) { c.corridor_length = x; });
    } else if (key == "corridor_width") {
      ov.push_back([x = rd.positive(v, key)](TrialConfig& c) { c.corridor_width = x; });
    } else if (key == "agent_density") {
      const auto x = rd.as<double>(v, key);
      if (x < 0.0) rd.fail(v.Mark(), "agent_density: must not be negative");
      ov.push_back([x](TrialConfig& c) { c.agent_density = x; });
    } else {
      rd.fail(entry.first.Mark(), "unknown trial key '" + key + "'");
    }
  }
}

void read_benchmark(const Reader& rd, const YAML::Node& node, FileConfig* out) {
  rd.require_map(node, "benchmark");
  for (const auto& entry : node) {
    const auto key = entry.first.as<std::string>();
    const YAML::Node& v = entry.second;
    if (key == "suite") {
      const auto s = rd.as<std::string>(v, key);
      if (s != "single-gap" && s != "corridor") rd.fail(v.Mark(), "suite: expected single-gap or corridor");
      out->suite = s;
    } else if (key == "trials") {
      const int n = rd.as<int>(v, key);
      if (n < 1) rd.fail(v.Mark(), "trials: must be at least 1");
      out->trials = n;
    } else if (key == "first_seed") {
      out->first_seed = rd.as<std::uint64_t>(v, key);
    } else if (key == "fovs") {
      const auto f = rd.as<std::vector<int>>(v, key);
      for (std::size_t i = 0; i < f.size(); ++i) {
        if (f[i] != 180 && f[i] != 270 && f[i] != 360) rd.fail(v[i].Mark(), "fovs: expected 180, 270 or 360");
      }
      if (f.empty()) rd.fail(v.Mark(), "fovs: must not be empty");
      out->fovs = f;
    } else if (key == "jobs") {
      const int n = rd.as<int>(v, key);
      if (n < 1) rd.fail(v.Mark(), "jobs: must be at least 1");
      out->jobs = n;
    } else {
      rd.fail(entry.first.Mark(), "unknown benchmark key '" + key + "'");
    }
  }
}

}  // namespace

void FileConfig::apply(TrialConfig& config) const {
  config.planner = planner;
  for (const auto& f : trial_overrides) f(config);
}

FileConfig parse_config(const std::string& text, const std::string& name) {
  const Reader rd(name);
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    rd.fail(e.mark, e.msg);
  }
  FileConfig out;
  if (root.IsNull()) return out;
  rd.require_map(root, "config");
  for (const auto& entry : root) {
    const auto key = entry.first.as<std::string>();
    if (key == "planner") {
      read_planner(rd, entry.second, &out.planner);
    } else if (key == "trial") {
      read_trial(rd, entry.second, &out);
    } else if (key == "benchmark") {
      read_benchmark(rd, entry.second, &out);
    } else {
      rd.fail(entry.first.Mark(), "unknown section '" + key + "' (expected planner, trial or benchmark)");
    }
  }
  return out;
}

FileConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), path);
}

std::vector<std::uint64_t> parse_seed_range(const std::string& text) {
  const auto dots = text.find("..");
  const auto number = [&](std::string_view s) {
    std::uint64_t v = 0;
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || end != s.data() + s.size() || s.empty()) {
      throw UsageError("--seeds: expected a..b with nonnegative integers, got '" + text + "'");
    }
    return v;
  };
  if (dots == std::string::npos) throw UsageError("--seeds: expected a..b, got '" + text + "'");
  const std::uint64_t a = number(std::string_view(text).substr(0, dots));
  const std::uint64_t b = number(std::string_view(text).substr(dots + 2));
  if (a > b) throw UsageError("--seeds: range is empty: '" + text + "'");
  std::vector<std::uint64_t> seeds;
  for (std::uint64_t s = a; s <= b; ++s) seeds.push_back(s);
  return seeds;
}

double fov_radians(int degrees) {
  if (degrees != 180 && degrees != 270 && degrees != 360) {
    throw UsageError("--fov: expected 180, 270 or 360, got " + std::to_string(degrees));
  }
  return degrees * kPi / 180.0;
}

}  // namespace dgap::cli
