# SPDX-License-Identifier: Apache-2.0
#
# irsfd: robust joint active/passive beamforming for IRS-assisted MIMO full duplex
# Copyright (C) 2026 The irsfd authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
#

"""Python interface to the irsfd simulator.

Configurations and results cross the boundary as JSON text and are exposed
here as plain dictionaries.
"""

import json

from . import _irsfd
from ._irsfd import (
    ConfigError,
    DimensionError,
    derive_seed,
    expect_hxh,
    irs_objective,
    mm_phase_update,
    scheme_names,
)

__all__ = [
    "ConfigError",
    "DimensionError",
    "convergence",
    "default_config",
    "derive_seed",
    "expect_hxh",
    "irs_objective",
    "mm_phase_update",
    "normalize_config",
    "run_sweep",
    "scheme_names",
    "sweep_csv",
    "validate_build",
]


def default_config():
    """Default scenario as a dict."""
    return json.loads(_irsfd.default_config_json())


def normalize_config(config):
    """Validate a scenario dict and fill in defaults. Raises ConfigError."""
    return json.loads(_irsfd.normalize_config_json(json.dumps(config)))


def run_sweep(config, sweep, parallelism=1):
    """Run a Monte-Carlo sweep and return the result dict."""
    return json.loads(_irsfd.run_sweep_json(json.dumps(config), json.dumps(sweep), parallelism))


def sweep_csv(config, sweep, path, parallelism=1):
    """Run a sweep and write the result CSV to path."""
    _irsfd.sweep_csv(json.dumps(config), json.dumps(sweep), str(path), parallelism)


def convergence(config, rho, trial=0, scheme="FD-IRS-RB"):
    """Per-iteration design WSR of one seeded trial."""
    return list(_irsfd.convergence(json.dumps(config), rho, trial, scheme))


def validate_build():
    """Run the built-in oracle checks. Returns (ok, report)."""
    return _irsfd.validate_build()
