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

#include "commands.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "dgap/simworld.hpp"
#include "dgap/trace.hpp"
#include "manifest.hpp"
#include "render.hpp"

namespace dgap::cli {
namespace fs = std::filesystem;
namespace {

FileConfig config_of(const CommonArgs& args) {
  return args.config.empty() ? FileConfig{} : load_config(args.config);
}

fs::path output_dir(const std::string& out) {
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec || !fs::is_directory(out)) throw UsageError("--out: cannot create directory '" + out + "'");
  return out;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot write '" + path.string() + "'");
  return f;
}

TraceFile load_trace(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open trace '" + path + "'");
  try {
    return read_trace(in);
  } catch (const InvalidInput& e) {
    throw InvalidInput(path + ": " + e.what());
  }
}

bool failed(const TrialResult& r) { return r.outcome != Outcome::Success; }

}  // namespace

int cmd_trial(const TrialArgs& args, std::ostream& log) {
  const FileConfig file = config_of(args.common);
  TrialConfig cfg = TrialConfig::single_gap(args.seed, fov_radians(args.fov));
  if (args.corridor) {
    cfg.corridor = true;
    cfg.goal = Vec2(cfg.corridor_length - 3.0, 0.0);
  }
  file.apply(cfg);
  if (args.corridor) cfg.timeout = std::max(cfg.timeout, 4.0 * cfg.corridor_length / cfg.planner.v_max);

  const fs::path dir = output_dir(args.common.out);
  const fs::path path = dir / ("trial_" + std::to_string(args.seed) + "_" + std::to_string(args.fov) + ".jsonl");
  std::ofstream out = open_output(path);
  TraceWriter writer(out);
  writer.header(trial_config_to_json(cfg));
  const TrialResult result =
      run_trial(cfg, [&](const PlannerInput& in, const StepRecord& rec) { writer.step(in, rec); });
  std::cout << trial_result_json(result) << '\n';
  log << "trace written to " << path.string() << '\n';
  return failed(result) ? kTrialFailure : kOk;
}

int cmd_benchmark(const BenchmarkArgs& args, std::ostream& log) {
  const FileConfig file = config_of(args.common);
  SuiteConfig suite;
  suite.name = !args.suite.empty() ? args.suite : file.suite.value_or("single-gap");
  if (suite.name != "single-gap" && suite.name != "corridor") {
    throw UsageError("--suite: expected single-gap or corridor, got '" + suite.name + "'");
  }
  suite.corridor = suite.name == "corridor";
  suite.trials = args.trials.value_or(file.trials.value_or(100));
  suite.first_seed = file.first_seed.value_or(0);
  if (!args.seeds.empty()) {
    const auto seeds = parse_seed_range(args.seeds);
    suite.first_seed = seeds.front();
    suite.trials = static_cast<int>(seeds.size());
  }
  const std::vector<int> fovs = !args.fovs.empty() ? args.fovs : file.fovs.value_or(std::vector<int>{360});
  suite.fovs.clear();
  for (int f : fovs) suite.fovs.push_back(fov_radians(f));
  suite.jobs = args.jobs.value_or(file.jobs.value_or(1));
  suite.planner = file.planner;

  std::vector<TrialConfig> trials = suite_trials(suite);
  for (auto& t : trials) {
    const double timeout = t.timeout;
    file.apply(t);
    if (suite.corridor) t.timeout = std::max(t.timeout, timeout);
  }

  // Results are appended as chunks finish, so an interrupted run keeps its completed trials.
  const fs::path dir = output_dir(args.common.out);
  std::ofstream results = open_output(dir / "results.jsonl");
  std::vector<TrialResult> all;
  const std::size_t chunk = static_cast<std::size_t>(std::max(1, suite.jobs)) * 4;
  for (std::size_t begin = 0; begin < trials.size(); begin += chunk) {
    const std::size_t end = std::min(trials.size(), begin + chunk);
    const std::vector<TrialConfig> batch(trials.begin() + static_cast<std::ptrdiff_t>(begin),
                                         trials.begin() + static_cast<std::ptrdiff_t>(end));
    for (auto& r : run_trials(batch, suite.jobs)) {
      results << trial_result_json(r) << '\n';
      all.push_back(std::move(r));
    }
    results.flush();
    log << "\r" << all.size() << "/" << trials.size() << " trials" << std::flush;
  }
  log << '\n';

  const BenchmarkSummary summary = summarize(suite.name, std::move(all));
  open_output(dir / "summary.json") << summary_json(summary);
  open_output(dir / "summary.svg") << summary_svg(summary);
  for (const auto& [outcome, count] : summary.totals) std::cout << outcome << ": " << count << '\n';
  log << "summary written to " << (dir / "summary.json").string() << '\n';
  const bool any_failed = std::any_of(summary.results.begin(), summary.results.end(), failed);
  return any_failed ? kTrialFailure : kOk;
}

int cmd_replay(const ReplayArgs& args, std::ostream& log) {
  const TraceFile trace = load_trace(args.trace);
  const auto diffs = replay_trace(trace);
  for (const auto& d : diffs) std::cout << d << '\n';
  log << trace.records.size() << " steps replayed, " << diffs.size() << " differing\n";
  return diffs.empty() ? kOk : kTrialFailure;
}

int cmd_field_grid(const FieldGridArgs& args, std::ostream& log) {
  const TraceFile trace = load_trace(args.trace);
  const std::size_t step = args.step.value_or(default_step(trace));
  const Json grid = field_grid(trace, step, args.candidate, args.cells);
  const fs::path path = output_dir(args.out) / ("field_grid_" + std::to_string(step) + ".json");
  open_output(path) << grid.dump() << '\n';
  log << "field grid written to " << path.string() << '\n';
  return kOk;
}

int cmd_render(const RenderArgs& args, std::ostream& log) {
  const fs::path dir = output_dir(args.out);
  for (const auto& t : args.traces) {
    const TraceFile trace = load_trace(t);
    const std::size_t step = args.step.value_or(default_step(trace));
    const fs::path path = dir / (fs::path(t).stem().string() + ".svg");
    open_output(path) << render_step_svg(trace, step);
    log << "rendered step " << step << " of " << t << " to " << path.string() << '\n';
  }
  return kOk;
}

}  // namespace dgap::cli
