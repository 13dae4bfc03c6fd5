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

// Python bindings. JSON-shaped results cross the boundary as strings; the
// package __init__ decodes them.

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <fstream>
#include <sstream>

#include "dgap/ahpf.hpp"
#include "dgap/egocircle.hpp"
#include "dgap/gap_feasibility.hpp"
#include "dgap/navigable_gap.hpp"
#include "dgap/simworld.hpp"
#include "dgap/trace.hpp"

namespace py = pybind11;
using namespace dgap;

namespace {

std::string run_trial_json(const TrialConfig& config, const std::string& trace_path) {
  if (trace_path.empty()) return trial_result_json(run_trial(config));
  std::ofstream out(trace_path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write trace '" + trace_path + "'");
  TraceWriter writer(out);
  writer.header(trial_config_to_json(config));
  return trial_result_json(
      run_trial(config, [&](const PlannerInput& in, const StepRecord& rec) { writer.step(in, rec); }));
}

std::vector<std::string> replay_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open trace '" + path + "'");
  return replay_trace(read_trace(in));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Dynamic gap local planner, simulator and benchmark";

  py::register_exception<InvalidInput>(m, "InvalidInput", PyExc_ValueError);
  py::register_exception<Singularity>(m, "Singularity", PyExc_ArithmeticError);
  py::register_exception<NumericalFailure>(m, "NumericalFailure", PyExc_RuntimeError);
  py::register_exception<SynthesisFailure>(m, "SynthesisFailure", PyExc_RuntimeError);

  py::enum_<Category>(m, "Category")
      .value("STATIC", Category::Static)
      .value("EXPANDING", Category::Expanding)
      .value("SHRINKING", Category::Shrinking);
  py::enum_<TerminalEvent>(m, "TerminalEvent")
      .value("HORIZON_END", TerminalEvent::HorizonEnd)
      .value("CROSSED", TerminalEvent::Crossed)
      .value("CLOSED", TerminalEvent::Closed)
      .value("REACHABLE_EXPANSION", TerminalEvent::ReachableExpansion);
  py::enum_<GapKind>(m, "GapKind").value("RADIAL", GapKind::Radial).value("SWEPT", GapKind::Swept);

  // Scans and gaps.
  py::class_<EgoCircle>(m, "EgoCircle")
      .def(py::init<>())
      .def_static("make", &EgoCircle::make, py::arg("fov"), py::arg("n_beams"), py::arg("max_range") = 10.0)
      .def_readwrite("ranges", &EgoCircle::ranges)
      .def_readwrite("angle_min", &EgoCircle::angle_min)
      .def_readwrite("angle_max", &EgoCircle::angle_max)
      .def_readwrite("max_range", &EgoCircle::max_range)
      .def_readwrite("stamp", &EgoCircle::stamp)
      .def("__len__", &EgoCircle::size)
      .def("angle", &EgoCircle::angle)
      .def("point", &EgoCircle::point)
      .def("is_free", &EgoCircle::is_free, py::arg("i"), py::arg("tol") = 1e-6)
      .def("beam_at", &EgoCircle::beam_at)
      .def("full_circle", &EgoCircle::full_circle)
      .def("validate", &EgoCircle::validate);

  py::class_<GapPoint>(m, "GapPoint")
      .def_readonly("index", &GapPoint::index)
      .def_readonly("bearing", &GapPoint::bearing)
      .def_readonly("range", &GapPoint::range)
      .def_readonly("p", &GapPoint::p);
  py::class_<Gap>(m, "Gap")
      .def_readonly("left", &Gap::left)
      .def_readonly("right", &Gap::right)
      .def_readonly("kind", &Gap::kind)
      .def("angular_width", &Gap::angular_width)
      .def("center_bearing", &Gap::center_bearing);

  m.def("detect_raw_gaps", &detect_raw_gaps, py::arg("scan"), py::arg("radial_jump_threshold") = 1.0);
  m.def(
      "simplify_gaps",
      [](const EgoCircle& scan, std::vector<Gap> raw, double r_infl, int merge_tolerance, bool drop_narrow) {
        return simplify_gaps(scan, std::move(raw), SimplifyConfig{r_infl, merge_tolerance, drop_narrow});
      },
      py::arg("scan"), py::arg("raw"), py::arg("r_infl") = 0.25, py::arg("merge_tolerance") = 2,
      py::arg("drop_narrow") = true);

  // Gap dynamics and regions.
  py::class_<SideMotion>(m, "SideMotion")
      .def(py::init([](const Vec2& p, const Vec2& v) { return SideMotion{p, v}; }), py::arg("position"),
           py::arg("velocity"))
      .def_readwrite("position", &SideMotion::position)
      .def_readwrite("velocity", &SideMotion::velocity);

  py::class_<GapCategorization>(m, "GapCategorization")
      .def_readonly("left", &GapCategorization::left)
      .def_readonly("right", &GapCategorization::right)
      .def_readonly("gap", &GapCategorization::gap)
      .def_readonly("beta_dot_left", &GapCategorization::beta_dot_left)
      .def_readonly("beta_dot_right", &GapCategorization::beta_dot_right);
  m.def("categorize", py::overload_cast<const SideMotion&, const SideMotion&, double>(&categorize),
        py::arg("left"), py::arg("right"), py::arg("eps") = 1e-3);

  py::class_<PropagationConfig>(m, "PropagationConfig")
      .def(py::init<>())
      .def_readwrite("horizon", &PropagationConfig::horizon)
      .def_readwrite("dt", &PropagationConfig::dt)
      .def_readwrite("r_infl", &PropagationConfig::r_infl)
      .def_readwrite("v_max", &PropagationConfig::v_max)
      .def_readwrite("eps_beta", &PropagationConfig::eps_beta);
  py::class_<PropagationResult>(m, "PropagationResult")
      .def_readonly("terminal_left", &PropagationResult::terminal_left)
      .def_readonly("terminal_right", &PropagationResult::terminal_right)
      .def_readonly("t_terminal", &PropagationResult::t_terminal)
      .def_readonly("event", &PropagationResult::event)
      .def_readonly("category", &PropagationResult::category)
      .def_readonly("track_left", &PropagationResult::track_left)
      .def_readonly("track_right", &PropagationResult::track_right);
  m.def("propagate_gap",
        py::overload_cast<const SideMotion&, const SideMotion&, const PropagationConfig&>(&propagate_gap),
        py::arg("left"), py::arg("right"), py::arg("config") = PropagationConfig{});
  m.def("gap_is_feasible", &gap_is_feasible, py::arg("robot_position"), py::arg("robot_velocity"),
        py::arg("prop"), py::arg("v_max") = 0.5);

  py::class_<NavGapConfig>(m, "NavGapConfig").def(py::init<>());
  py::class_<NavigableGap>(m, "NavigableGap")
      .def_readonly("goal", &NavigableGap::goal)
      .def_readonly("horizon", &NavigableGap::horizon)
      .def_readonly("event", &NavigableGap::event)
      .def_readonly("outline", &NavigableGap::outline)
      .def("contains", &NavigableGap::contains)
      .def("boundary_distance", &NavigableGap::boundary_distance);
  m.def("build_navigable_gap", &build_navigable_gap, py::arg("prop"), py::arg("waypoint"),
        py::arg("config") = NavGapConfig{});
  m.def("track_clearance", &track_clearance);

  // Harmonic fields.
  py::class_<HarmonicField>(m, "HarmonicField")
      .def(py::init([](std::vector<Vec2> centers, Eigen::VectorXd weights, double gain, double v_max) {
             if (centers.empty() || static_cast<Eigen::Index>(centers.size()) != weights.size()) {
               throw InvalidInput("HarmonicField: need one weight per center, goal first");
             }
             HarmonicField f;
             f.goal = centers.front();
             f.centers = std::move(centers);
             f.weights = std::move(weights);
             f.gain = gain;
             f.v_max = v_max;
             return f;
           }),
           py::arg("centers"), py::arg("weights"), py::arg("gain") = 2.0, py::arg("v_max") = 0.5)
      .def_static(
          "from_json",
          [](const std::string& text, double gain, double v_max) {
            return field_from_json(Json::parse(text), gain, v_max);
          },
          py::arg("text"), py::arg("gain") = 2.0, py::arg("v_max") = 0.5)
      .def_readonly("centers", &HarmonicField::centers)
      .def_readonly("weights", &HarmonicField::weights)
      .def_readonly("goal", &HarmonicField::goal)
      .def_readonly("gain", &HarmonicField::gain)
      .def_readonly("v_max", &HarmonicField::v_max)
      .def("potential", [](const HarmonicField& f, const Vec2& p) { return potential(p, f); })
      .def("gradient", [](const HarmonicField& f, const Vec2& p) { return gradient(p, f); })
      .def("hessian", [](const HarmonicField& f, const Vec2& p) { return hessian(p, f); })
      .def("command", [](const HarmonicField& f, const Vec2& p) { return velocity_command(p, f); });
  m.def(
      "synthesize_field",
      [](const NavigableGap& navgap, double gain, double v_max) {
        AhpfConfig c;
        c.gain = gain;
        c.v_max = v_max;
        return synthesize_field(navgap, c);
      },
      py::arg("navgap"), py::arg("gain") = 2.0, py::arg("v_max") = 0.5);

  // Trials and benchmarks.
  py::class_<TrialConfig>(m, "TrialConfig")
      .def_static("single_gap", &TrialConfig::single_gap, py::arg("seed"), py::arg("fov") = kTwoPi)
      .def_static("from_json", [](const std::string& text) { return trial_config_from_json(Json::parse(text)); })
      .def("to_json", [](const TrialConfig& c) { return trial_config_to_json(c).dump(); })
      .def_readwrite("seed", &TrialConfig::seed)
      .def_readwrite("category", &TrialConfig::category)
      .def_readwrite("agent_speed", &TrialConfig::agent_speed)
      .def_readwrite("fov", &TrialConfig::fov)
      .def_readwrite("timeout", &TrialConfig::timeout)
      .def_readwrite("goal", &TrialConfig::goal)
      .def_readwrite("goal_tolerance", &TrialConfig::goal_tolerance)
      .def_readwrite("n_beams", &TrialConfig::n_beams)
      .def_readwrite("max_range", &TrialConfig::max_range)
      .def_readwrite("corridor", &TrialConfig::corridor)
      .def_readwrite("corridor_length", &TrialConfig::corridor_length)
      .def_readwrite("agent_density", &TrialConfig::agent_density);

  m.def("_run_trial", &run_trial_json, py::arg("config"), py::arg("trace_path") = "",
        py::call_guard<py::gil_scoped_release>());
  m.def(
      "_run_benchmark",
      [](const std::string& suite, int trials, std::uint64_t first_seed, std::vector<double> fovs, int jobs) {
        SuiteConfig s;
        s.name = suite;
        s.corridor = suite == "corridor";
        if (!s.corridor && suite != "single-gap") throw InvalidInput("suite: expected single-gap or corridor");
        s.trials = trials;
        s.first_seed = first_seed;
        s.fovs = std::move(fovs);
        s.jobs = jobs;
        return summary_json(run_benchmark(s));
      },
      py::arg("suite"), py::arg("trials"), py::arg("first_seed"), py::arg("fovs"), py::arg("jobs"),
      py::call_guard<py::gil_scoped_release>());
  m.def("replay", &replay_file, py::arg("trace_path"), py::call_guard<py::gil_scoped_release>(),
        "Re-plans a recorded trace; returns one line per differing decision.");
}
