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

#ifndef DGAP_TOOLS_COMMANDS_HPP
#define DGAP_TOOLS_COMMANDS_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace dgap::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kConfig = 2, kTrialFailure = 3 };

struct CommonArgs {
  std::string config;  ///< empty: built-in defaults
  std::string out{"."};
};

struct TrialArgs {
  CommonArgs common;
  std::uint64_t seed{0};
  int fov{360};
  bool corridor{false};
};

struct BenchmarkArgs {
  CommonArgs common;
  std::string suite;  ///< empty: config file, then single-gap
  std::optional<int> trials;
  std::string seeds;  ///< "a..b"; overrides trials and first_seed
  std::vector<int> fovs;
  std::optional<int> jobs;
};

struct ReplayArgs {
  std::string trace;
};

struct FieldGridArgs {
  std::string trace;
  std::string out{"."};
  std::optional<std::size_t> step;
  std::optional<std::size_t> candidate;
  int cells{60};
};

struct RenderArgs {
  std::vector<std::string> traces;
  std::string out{"."};
  std::optional<std::size_t> step;
};

// Each command reports progress on `log` and returns its exit status. Config and
// input errors propagate as exceptions; main() maps them to exit codes.
int cmd_trial(const TrialArgs& args, std::ostream& log);
int cmd_benchmark(const BenchmarkArgs& args, std::ostream& log);
int cmd_replay(const ReplayArgs& args, std::ostream& log);
int cmd_field_grid(const FieldGridArgs& args, std::ostream& log);
int cmd_render(const RenderArgs& args, std::ostream& log);

}  // namespace dgap::cli

#endif  // DGAP_TOOLS_COMMANDS_HPP
