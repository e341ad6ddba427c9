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

#ifndef IRSFD_CONFIG_HPP
#define IRSFD_CONFIG_HPP

#include <filesystem>
#include <stdexcept>
#include <string>

#include <nlohmann/json_fwd.hpp>

namespace irsfd
{

class ConfigError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

struct Vec3
{
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

double distance(const Vec3 &a, const Vec3 &b);

// Scenario parameters. Defaults reproduce the reference deployment: a 15x8
// FD base station, 5-antenna users with 2 streams each, and a 10x10 IRS.
struct ScenarioConfig
{
    // Antennas and streams
    int M0 = 15; // BS transmit
    int N0 = 8;  // BS receive
    int Mk = 5;  // UL user transmit
    int Nj = 5;  // DL user receive
    int R = 10;  // IRS rows
    int C = 10;  // IRS columns
    int uk = 2;  // UL streams
    int vj = 2;  // DL streams

    // Power budgets (linear) and noise variances (linear). The noise
    // variances follow snr_db through apply_snr(): sigma^2 = alpha / SNR.
    double alpha_k = 1.0;
    double alpha_0 = 1.0;
    double sigma0_sq = 1e-3;
    double sigmaj_sq = 1e-3;
    double snr_db = 30.0;

    // Rate weights
    double w_k = 1.0;
    double w_j = 1.0;

    // CSI error: sigma_csi^2 = rho / SNR^alpha_decay
    double rho = 0.4;
    double alpha_decay = 0.6;
    // When true the error variance of each link is taken relative to that
    // link's large-scale gain (errors live on the small-scale fading).
    bool csi_error_relative = true;

    // Geometry (meters)
    Vec3 bs_pos{0.0, 0.0, 0.0};
    Vec3 irs_pos{20.0, 10.0, 0.0};
    Vec3 ul_center{20.0, 0.0, 30.0};
    Vec3 dl_center{30.0, 0.0, 20.0};
    double user_radius = 8.0;

    // Large-scale and small-scale channel model
    double rician_kappa = 1.0;
    double pl0_db = -30.0;
    double pl_exponent = 2.0;
    double d0 = 1.0;
    // Path loss of the self-interference channel (tx to rx array of the BS).
    double si_path_loss_db = 0.0;
    double si_los_angle_deg = 30.0;
    // Added to the path loss (dB) of every link that terminates at a receiver
    // (BS receive array or DL user); fixes the received-SNR operating point.
    double rx_gain_normalization_db = 42.0;

    unsigned long long seed = 1;

    int irs_elements() const { return R * C; }
    double snr_linear() const;
    double csi_error_variance() const;
};

// Sets snr_db and re-derives both noise variances from the power budgets.
void apply_snr(ScenarioConfig &cfg, double snr_db);

// Throws ConfigError naming the first violated constraint.
void validate(const ScenarioConfig &cfg);

// Structured JSON configuration with nested sections:
//   antennas, power, weights, csi, geometry, channel, seed
// Missing keys keep their defaults; unknown keys are rejected.
ScenarioConfig scenario_from_json(const nlohmann::json &j);
nlohmann::json scenario_to_json(const ScenarioConfig &cfg);
ScenarioConfig load_scenario(const std::filesystem::path &path);

} // namespace irsfd

#endif
