// SPDX-License-Identifier: Apache-2.0
//
// irsfd: robust joint active/passive beamforming for IRS-assisted MIMO full duplex
// Copyright (C) 2026 The irsfd authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "irsfd/harness.hpp"
#include "irsfd/irs.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <nlohmann/json.hpp>

#include <sstream>

namespace py = pybind11;
using namespace irsfd;

namespace
{

ScenarioConfig config_from(const std::string &text)
{
    nlohmann::json j;
    try
    {
        j = nlohmann::json::parse(text);
    }
    catch (const nlohmann::json::exception &e)
    {
        throw ConfigError(std::string("scenario: ") + e.what());
    }
    return scenario_from_json(j);
}

SweepSpec sweep_from(const std::string &config, const std::string &sweep)
{
    nlohmann::json j;
    try
    {
        j = nlohmann::json::parse(sweep);
    }
    catch (const nlohmann::json::exception &e)
    {
        throw ConfigError(std::string("sweep: ") + e.what());
    }
    return sweep_from_json(j, config_from(config));
}

} // namespace

PYBIND11_MODULE(_irsfd, m)
{
    m.doc() = "Robust joint beamforming simulator for IRS-assisted MIMO full duplex";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);

    m.def("default_config_json", [] { return scenario_to_json(ScenarioConfig{}).dump(); });

    m.def(
        "normalize_config_json",
        [](const std::string &text) {
            ScenarioConfig cfg = config_from(text);
            validate(cfg);
            return scenario_to_json(cfg).dump();
        },
        py::arg("config_json"), "Parse, validate and fill defaults of a scenario");

    m.def("scheme_names", [] {
        std::vector<std::string> names;
        for (const auto &s : all_schemes())
            names.push_back(s.name());
        return names;
    });

    m.def("derive_seed", &derive_seed, py::arg("seed"), py::arg("trial"), py::arg("purpose"));

    m.def(
        "run_sweep_json",
        [](const std::string &config, const std::string &sweep, int parallelism) {
            const SweepSpec spec = sweep_from(config, sweep);
            SweepResult r;
            {
                py::gil_scoped_release release;
                r = run_sweep(spec, parallelism);
            }
            return result_to_json(r).dump();
        },
        py::arg("config_json"), py::arg("sweep_json"), py::arg("parallelism") = 1);

    m.def(
        "sweep_csv",
        [](const std::string &config, const std::string &sweep, const std::string &path, int parallelism) {
            const SweepSpec spec = sweep_from(config, sweep);
            SweepResult r;
            {
                py::gil_scoped_release release;
                r = run_sweep(spec, parallelism);
            }
            emit_csv(r, path);
        },
        py::arg("config_json"), py::arg("sweep_json"), py::arg("path"), py::arg("parallelism") = 1);

    m.def(
        "convergence",
        [](const std::string &config, double rho, int trial, const std::string &scheme) {
            ScenarioConfig cfg = config_from(config);
            cfg.rho = rho;
            validate(cfg);
            const auto t = static_cast<std::uint64_t>(trial);
            Rng channel_rng(derive_seed(cfg.seed, t, 0));
            const TrialDraw draw = draw_trial(cfg, channel_rng);
            const ErrorStats stats = trial_error_stats(cfg, draw.gains);
            Rng init_rng(derive_seed(cfg.seed, t, 1));
            py::gil_scoped_release release;
            return optimize(draw.estimates, stats, cfg, SchemeSpec::parse(scheme), init_rng).wsr;
        },
        py::arg("config_json"), py::arg("rho"), py::arg("trial") = 0, py::arg("scheme") = "FD-IRS-RB",
        "Per-iteration design WSR for one seeded channel draw");

    m.def(
        "expect_hxh",
        [](const ComplexMatrix &h, const ComplexMatrix &x, const ComplexMatrix &J, const ComplexMatrix &K,
           const std::string &side) {
            if (side != "outer" && side != "inner")
                throw ConfigError("side must be 'outer' or 'inner'");
            return expect_HXH(h, x, J, K, side == "outer" ? Side::outer : Side::inner);
        },
        py::arg("h"), py::arg("x"), py::arg("J"), py::arg("K"), py::arg("side") = "outer");

    m.def(
        "irs_objective",
        [](const ComplexMatrix &sigma, const ComplexVector &s, const ComplexVector &theta) {
            return irs_objective(make_irs_quadratic(sigma, s), theta);
        },
        py::arg("sigma"), py::arg("s"), py::arg("theta"));

    m.def(
        "mm_phase_update",
        [](const ComplexMatrix &sigma, const ComplexVector &s, const ComplexVector &theta0, double eps, int max_iter) {
            return mm_phase_update(make_irs_quadratic(sigma, s), theta0, eps, max_iter);
        },
        py::arg("sigma"), py::arg("s"), py::arg("theta0"), py::arg("eps") = 1e-4, py::arg("max_iter") = 200);

    m.def("validate_build", [] {
        std::ostringstream out;
        const bool ok = run_validation_suite(out);
        return py::make_tuple(ok, out.str());
    });
}
