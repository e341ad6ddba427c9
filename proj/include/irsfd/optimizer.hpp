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

#ifndef IRSFD_OPTIMIZER_HPP
#define IRSFD_OPTIMIZER_HPP

#include "irsfd/channel.hpp"
#include "irsfd/config.hpp"
#include "irsfd/ewmmse.hpp"
#include "irsfd/expectation.hpp"

#include <optional>
#include <string>
#include <vector>

namespace irsfd
{

enum class Duplex
{
    full,
    half,
};

struct SchemeSpec
{
    Duplex duplex = Duplex::full;
    bool irs = true;
    bool robust = true;

    // "FD-IRS-RB", "HD-No-IRS-Non-RB", ...
    std::string name() const;
    static SchemeSpec parse(const std::string &name);

    bool operator==(const SchemeSpec &) const = default;
};

// The eight named schemes.
std::vector<SchemeSpec> all_schemes();

struct OptimizeOptions
{
    double eps = 1e-4;
    int max_outer = 100;
    double mm_eps = 1e-4;
    int mm_max_iter = 200;
    double power_tol = 1e-12;
};

struct OptimizationTrace
{
    // Design objective (ergodic WSR in bits under the statistics the scheme
    // optimizes against), one entry per outer iteration.
    std::vector<double> wsr;
    int iterations = 0;
    bool converged = false;
    // Final state. For half duplex this is the uplink slot (V_j = 0).
    BeamformState state;
    // Half duplex only: the downlink slot (U_k = 0).
    std::optional<BeamformState> downlink_state;
    // Ergodic WSR of the final state under the true error statistics,
    // time-shared for half duplex.
    double evaluated_wsr = 0.0;
};

BeamformState initialize_state(const ChannelEstimates &est, const ScenarioConfig &cfg, Rng &rng);

OptimizationTrace optimize(const ChannelEstimates &est, const ErrorStats &stats, const ScenarioConfig &cfg,
                           const SchemeSpec &scheme, Rng &rng, const OptimizeOptions &opt = {});

// Plain alternating loop on a given initial state, no scheme handling.
OptimizationTrace optimize_state(const ChannelEstimates &est, const ErrorStats &stats, const ScenarioConfig &cfg,
                                 BeamformState init, bool update_irs, const ActiveLinks &active,
                                 const OptimizeOptions &opt = {});

struct StateEvaluation
{
    double theorem_wsr = 0.0;
    double sampled_wsr = 0.0;
    double stderr_wsr = 0.0;
};

StateEvaluation evaluate_state(const ChannelEstimates &est, const ErrorStats &stats, const BeamformState &state,
                               const ScenarioConfig &cfg, int n_samples, Rng &rng);

// Closed-form and sampled WSR of an optimize() result under the true statistics,
// with the scheme's IRS removal and half-duplex time sharing applied.
StateEvaluation evaluate_scheme(const ChannelEstimates &est, const ErrorStats &stats, const ScenarioConfig &cfg,
                                const SchemeSpec &scheme, const OptimizationTrace &trace, int n_samples, Rng &rng);

} // namespace irsfd

#endif
