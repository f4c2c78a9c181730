# Copyright 2026 The qmerge Authors
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

"""Quantum entropy calculus and state merging simulation."""

from qmerge._qmerge import (
    CapExceeded,
    DensityOperator,
    PureState,
    coherent_information,
    compression_region,
    conditional_entropy,
    entanglement_of_assistance,
    entanglement_of_purification,
    entropy,
    fidelity,
    mac_region,
    merge_curve,
    merge_outcomes,
    mutual_information,
    parse_state,
    partial_trace,
    plan_merge,
    purify,
    side_info_rates,
    ssa_margin,
    state_to_json,
    trace_distance,
)

__all__ = [
    "CapExceeded",
    "DensityOperator",
    "PureState",
    "coherent_information",
    "compression_region",
    "conditional_entropy",
    "entanglement_of_assistance",
    "entanglement_of_purification",
    "entropy",
    "fidelity",
    "mac_region",
    "merge_curve",
    "merge_outcomes",
    "mutual_information",
    "parse_state",
    "partial_trace",
    "plan_merge",
    "purify",
    "side_info_rates",
    "ssa_margin",
    "state_to_json",
    "trace_distance",
]
