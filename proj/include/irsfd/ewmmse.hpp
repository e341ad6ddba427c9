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

#ifndef IRSFD_EWMMSE_HPP
#define IRSFD_EWMMSE_HPP

#include "irsfd/channel.hpp"
#include "irsfd/config.hpp"
#include "irsfd/numerics.hpp"

namespace irsfd
{

struct BeamformState
{
    ComplexMatrix U_k;   // Mk x uk
    ComplexMatrix V_j;   // M0 x vj
    ComplexMatrix F_k;   // uk x N0
    ComplexMatrix F_j;   // vj x Nj
    ComplexMatrix W_k;   // uk x uk
    ComplexMatrix W_j;   // vj x vj
    ComplexVector theta; // RC, unit modulus
};

void check_dims(const BeamformState &s, const ScenarioConfig &cfg);

struct Combiners
{
    ComplexMatrix F_k;
    ComplexMatrix F_j;
};

Combiners update_combiners(const ChannelEstimates &est, const ErrorStats &stats, const BeamformState &state,
                           const ScenarioConfig &cfg);

struct ExpectedMse
{
    ComplexMatrix E_k;
    ComplexMatrix E_j;
};

ExpectedMse expected_mse(const ChannelEstimates &est, const ErrorStats &stats, const BeamformState &state,
                         const ScenarioConfig &cfg);

struct Weights
{
    ComplexMatrix W_k;
    ComplexMatrix W_j;
};

Weights update_weights(const ComplexMatrix &E_k, const ComplexMatrix &E_j, const ScenarioConfig &cfg);

struct XMatrices
{
    ComplexMatrix X_k; // Mk x Mk
    ComplexMatrix X_j; // M0 x M0
};

XMatrices build_X_matrices(const ChannelEstimates &est, const ErrorStats &stats, const BeamformState &state);

// Hhat_k^H F_k^H W_k and Hhat_j^H F_j^H W_j on the effective estimates.
ComplexMatrix uplink_rhs(const ChannelEstimates &est, const BeamformState &state);
ComplexMatrix downlink_rhs(const ChannelEstimates &est, const BeamformState &state);

struct PoweredBeamformer
{
    ComplexMatrix B;
    double lambda = 0.0;
};

// B = (X + lambda I)^-1 rhs with the smallest lambda >= 0 meeting Tr(B B^H) <= budget.
// Bisection stops at |Tr(B B^H) - budget| <= rel_tol * budget or a collapsed bracket;
// the feasible end of the bracket is returned.
PoweredBeamformer update_beamformer_with_power(const ComplexMatrix &X, const ComplexMatrix &rhs, double budget,
                                               double rel_tol = 1e-6);

// Tr(B B^H) for B = (X + lambda I)^-1 rhs.
double beamformer_power(const ComplexMatrix &X, const ComplexMatrix &rhs, double lambda);

// Tr(W_k E_k) + Tr(W_j E_j)
double ewmmse_objective(const ChannelEstimates &est, const ErrorStats &stats, const BeamformState &state,
                        const ScenarioConfig &cfg);

struct ActiveLinks
{
    bool uplink = true;
    bool downlink = true;
};

struct InnerOptions
{
    ActiveLinks active;
    double power_tol = 1e-12;
};

// Combiners, weights, U_k, V_j in that order.
void inner_pass(const ChannelEstimates &est, const ErrorStats &stats, BeamformState &state, const ScenarioConfig &cfg,
                const InnerOptions &opt = {});

} // namespace irsfd

#endif
