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

// dgap: run trials and benchmarks, replay traces, rasterize fields, render SVG.
// Exit status: 0 success, 1 usage, 2 config or input, 3 failed trial or replay diff.

#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "dgap/common.hpp"
#include "manifest.hpp"

namespace {

using namespace dgap::cli;

void add_common(CLI::App* cmd, CommonArgs* args) {
  cmd->add_option("--config", args->config, "YAML config file")->check(CLI::ExistingFile);
  cmd->add_option("--out", args->out, "Output directory")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dynamic gap planner: trials, benchmarks, replay and figures"};
  app.require_subcommand(1);

  TrialArgs trial;
  auto* c_trial = app.add_subcommand("trial", "Run one seeded trial and write its trace");
  add_common(c_trial, &trial.common);
  c_trial->add_option("--seed", trial.seed, "Trial seed")->capture_default_str();
  c_trial->add_option("--fov", trial.fov, "Field of view in degrees")
      ->check(CLI::IsMember({180, 270, 360}))
      ->capture_default_str();
  c_trial->add_flag("--corridor", trial.corridor, "Corridor world instead of the single gap");

  BenchmarkArgs bench;
  auto* c_bench = app.add_subcommand("benchmark", "Run a seeded suite and write summary.json and summary.svg");
  add_common(c_bench, &bench.common);
  c_bench->add_option("--suite", bench.suite, "single-gap or corridor")
      ->check(CLI::IsMember({"single-gap", "corridor"}));
  auto* trials_opt = c_bench->add_option("--trials", bench.trials, "Trials per field of view")
                         ->check(CLI::PositiveNumber);
  c_bench->add_option("--seeds", bench.seeds, "Inclusive seed range a..b")->excludes(trials_opt);
  c_bench->add_option("--fov", bench.fovs, "Field of view in degrees (repeatable)")
      ->check(CLI::IsMember({180, 270, 360}));
  c_bench->add_option("--jobs", bench.jobs, "Worker threads")->check(CLI::PositiveNumber);

  ReplayArgs replay;
  auto* c_replay = app.add_subcommand("replay", "Re-plan a recorded trace and report differing decisions");
  c_replay->add_option("trace", replay.trace, "Trace file")->required()->check(CLI::ExistingFile);

  FieldGridArgs grid;
  auto* c_grid = app.add_subcommand("field-grid", "Rasterize the potential and command of a recorded field");
  c_grid->add_option("trace", grid.trace, "Trace file")->required()->check(CLI::ExistingFile);
  c_grid->add_option("--out", grid.out, "Output directory")->capture_default_str();
  c_grid->add_option("--step", grid.step, "Trace step (default: first step with candidates)");
  c_grid->add_option("--candidate", grid.candidate, "Candidate index (default: the adopted one, else 0)");
  c_grid->add_option("--cells", grid.cells, "Cells along the longer side")
      ->check(CLI::Range(2, 2000))
      ->capture_default_str();

  RenderArgs render;
  auto* c_render = app.add_subcommand("render", "Render trace steps as SVG overlays");
  c_render->add_option("traces", render.traces, "Trace files")->required()->check(CLI::ExistingFile);
  c_render->add_option("--out", render.out, "Output directory")->capture_default_str();
  c_render->add_option("--step", render.step, "Trace step (default: first step with candidates)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*c_trial) return cmd_trial(trial, std::cerr);
    if (*c_bench) return cmd_benchmark(bench, std::cerr);
    if (*c_replay) return cmd_replay(replay, std::cerr);
    if (*c_grid) return cmd_field_grid(grid, std::cerr);
    if (*c_render) return cmd_render(render, std::cerr);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfig;
  } catch (const dgap::InvalidInput& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfig;
  }
  return kUsage;
}
