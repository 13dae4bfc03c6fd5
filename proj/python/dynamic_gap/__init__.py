# Copyright 2026 The dynamic_gap Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Dynamic gap local planner, deterministic 2D simulator and benchmark."""

import json
import math

from ._core import (
    Category,
    EgoCircle,
    Gap,
    GapCategorization,
    GapKind,
    GapPoint,
    HarmonicField,
    InvalidInput,
    NavGapConfig,
    NavigableGap,
    NumericalFailure,
    PropagationConfig,
    PropagationResult,
    SideMotion,
    Singularity,
    SynthesisFailure,
    TerminalEvent,
    TrialConfig,
    build_navigable_gap,
    categorize,
    detect_raw_gaps,
    gap_is_feasible,
    propagate_gap,
    replay,
    simplify_gaps,
    synthesize_field,
    track_clearance,
)
from . import _core

__version__ = "0.1.0"


def run_trial(config, trace_path=None):
    """Runs one trial; returns its result as a dict. Writes a JSONL trace if asked."""
    return json.loads(_core._run_trial(config, "" if trace_path is None else str(trace_path)))


def run_benchmark(suite="single-gap", trials=100, first_seed=0, fovs=(360,), jobs=1):
    """Runs a seeded suite; `fovs` in degrees. Returns the summary as a dict."""
    radians = [math.radians(f) for f in fovs]
    return json.loads(_core._run_benchmark(suite, trials, first_seed, radians, jobs))
