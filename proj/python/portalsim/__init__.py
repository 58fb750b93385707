# Copyright 2026 The portalsim Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Python access to the portalsim core: scenarios, traces and DNS wire forms."""

from portalsim._portalsim import (
    SCENARIO_HEADER,
    TRACE_HEADER,
    DecodeError,
    Scenario,
    ScenarioError,
    arrow_labels,
    compare_traces,
    decode_dns,
    encode_dns_query,
    load_scenario,
    parse_scenario,
    parse_trace,
    render_sequence,
    run_scenario,
)

__all__ = [
    "SCENARIO_HEADER",
    "TRACE_HEADER",
    "DecodeError",
    "Scenario",
    "ScenarioError",
    "arrow_labels",
    "compare_traces",
    "decode_dns",
    "encode_dns_query",
    "load_scenario",
    "parse_scenario",
    "parse_trace",
    "render_sequence",
    "run_scenario",
]
