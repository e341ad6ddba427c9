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

import csv
import json

import numpy as np
import pytest

import irsfd


def small_config():
    cfg = irsfd.default_config()
    cfg["antennas"].update({"M0": 4, "N0": 3, "Mk": 3, "Nj": 3, "R": 2, "C": 3, "uk": 2, "vj": 2})
    return cfg


SWEEP = {
    "axis": "rho",
    "values": [0.2, 0.8],
    "schemes": ["FD-IRS-RB", "HD-IRS-RB"],
    "n_channel_trials": 2,
    "n_eval_samples": 5,
    "optimizer": {"eps": 1e-3, "max_outer": 10},
}


def test_default_config_round_trips():
    cfg = irsfd.default_config()
    assert irsfd.normalize_config(cfg) == cfg
    assert cfg["antennas"]["M0"] == 15


def test_invalid_config_raises():
    cfg = irsfd.default_config()
    cfg["csi"]["rho"] = -1.0
    with pytest.raises(irsfd.ConfigError):
        irsfd.normalize_config(cfg)
    with pytest.raises(ValueError):
        irsfd.normalize_config({"no_such_key": 1})


def test_scheme_names():
    names = irsfd.scheme_names()
    assert len(names) == 8
    assert "FD-IRS-RB" in names and "HD-No-IRS-Non-RB" in names


def test_sweep_result_and_determinism():
    a = irsfd.run_sweep(small_config(), SWEEP, parallelism=1)
    b = irsfd.run_sweep(small_config(), SWEEP, parallelism=4)
    assert len(a["cells"]) == 4
    for ca, cb in zip(a["cells"], b["cells"]):
        assert ca["mean_wsr_bits"] == cb["mean_wsr_bits"]
        assert np.isfinite(ca["mean_wsr_bits"]) and ca["mean_wsr_bits"] >= 0.0
        assert len(ca["per_trial_wsr_bits"]) == SWEEP["n_channel_trials"]


def test_sweep_csv(tmp_path):
    path = tmp_path / "out.csv"
    irsfd.sweep_csv(small_config(), SWEEP, path)
    rows = list(csv.reader(path.open()))
    assert rows[0] == ["axis", "scheme", "mean_wsr_bits", "stderr", "n_trials", "mean_iters"]
    assert len(rows) == 5


def test_convergence_is_monotone():
    w = irsfd.convergence(small_config(), rho=0.4)
    assert len(w) >= 1
    assert all(b >= a - 1e-8 for a, b in zip(w, w[1:]))


def test_expect_hxh_without_error_is_plain_product():
    rng = np.random.default_rng(3)
    h = rng.standard_normal((3, 4)) + 1j * rng.standard_normal((3, 4))
    x = np.eye(4, dtype=complex)
    zero_j = np.zeros((4, 4), dtype=complex)
    zero_k = np.zeros((3, 3), dtype=complex)
    out = irsfd.expect_hxh(h, x, zero_j, zero_k, "outer")
    np.testing.assert_allclose(out, h @ h.conj().T, atol=1e-12)
    # Error term: tr(X J) K added to the outer form.
    j = np.eye(4, dtype=complex)
    k = 0.5 * np.eye(3, dtype=complex)
    out = irsfd.expect_hxh(h, x, j, k, "outer")
    np.testing.assert_allclose(out, h @ h.conj().T + 4 * k, atol=1e-12)
    with pytest.raises(ValueError):
        irsfd.expect_hxh(h, x, j, k, "sideways")


def test_mm_phase_update_descends_and_keeps_unit_modulus():
    rng = np.random.default_rng(5)
    a = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
    sigma = a @ a.conj().T / 6
    s = rng.standard_normal(6) + 1j * rng.standard_normal(6)
    theta0 = np.exp(1j * rng.uniform(0, 2 * np.pi, 6))
    theta = irsfd.mm_phase_update(sigma, s, theta0)
    np.testing.assert_allclose(np.abs(theta), 1.0, atol=1e-12)
    assert irsfd.irs_objective(sigma, s, theta) <= irsfd.irs_objective(sigma, s, theta0) + 1e-12


def test_derive_seed_distinct():
    seeds = {irsfd.derive_seed(1, t, p) for t in range(50) for p in range(3)}
    assert len(seeds) == 150
