# Copyright 2026 The GeoDP Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Locational differential-privacy aggregation over geographic grids."""

import json

from ._geodp import (
    BudgetExceededError,
    add_gaussian_noise,
    compose_rdp_gaussian,
    debias_rr_histogram,
    exponential_distribution,
    exponential_select,
    gaussian_sigma,
    mse,
    perlin,
    randomize_bit,
    randomize_onehot,
    rr_flip_probability,
)
from . import _geodp

__all__ = [
    "BudgetExceededError",
    "add_gaussian_noise",
    "compose_rdp_gaussian",
    "debias_rr_histogram",
    "exponential_distribution",
    "exponential_select",
    "gaussian_sigma",
    "generate_dataset",
    "meta",
    "mse",
    "perlin",
    "randomize_bit",
    "randomize_onehot",
    "rr_flip_probability",
    "simulate",
    "simulate_raw",
    "sweep",
]


def generate_dataset(**config):
    """Returns (header, records) for a synthetic dataset.

    Accepts the same keys as a simulate request (scenario, rows, cols,
    records_per_cell, seed, jitter, ...).
    """
    lines = _geodp._generate_jsonl(json.dumps(config)).splitlines()
    header = json.loads(lines[0])
    return header, [json.loads(line) for line in lines[1:]]


def simulate_raw(request):
    """Runs one simulation; returns the exact response bytes as a string."""
    return _geodp._simulate(json.dumps(request))


def simulate(request):
    return json.loads(simulate_raw(request))


def sweep(request):
    return json.loads(_geodp._sweep(json.dumps(request)))


def meta():
    return json.loads(_geodp._meta())
