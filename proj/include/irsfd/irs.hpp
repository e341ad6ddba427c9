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

#ifndef IRSFD_IRS_HPP
#define IRSFD_IRS_HPP

#include "irsfd/channel.hpp"
#include "irsfd/ewmmse.hpp"
#include "irsfd/numerics.hpp"

#include <vector>

namespace irsfd
{

// theta-dependent part of Tr(W_k E_k) + Tr(W_j E_j):
//   theta^H Sigma theta + 2 Re(s^T theta)
struct IrsQuadratic
{
    ComplexMatrix S;     // linear-term matrix, s = diag(S)
    ComplexMatrix Z;     // E[H_0theta^H A_k H_0theta] + E[H_jtheta^H A_j H_jtheta]
    ComplexMatrix T;     // E[H_thetak U U^H H_thetak^H] + E[H_theta0 V V^H H_theta0^H]
    ComplexMatrix Sigma; // Z .* T^T
    ComplexVector s;
    double lambda_max = 0.0;
};

IrsQuadratic build_irs_quadratic(const ChannelEstimates &est, const ErrorStats &stats, const BeamformState &state);

// Builds the quadratic from explicit Sigma and s (S = diag(s), Z = Sigma, T = ones).
IrsQuadratic make_irs_quadratic(const ComplexMatrix &Sigma, const ComplexVector &s);

double irs_objective(const IrsQuadratic &q, const ComplexVector &theta);

// Majorizer of irs_objective at theta_n, evaluated at theta (both unit modulus).
double irs_surrogate(const IrsQuadratic &q, const ComplexVector &theta, const ComplexVector &theta_n);

struct MmTrace
{
    ComplexVector theta;
    std::vector<double> objective; // objective[0] at theta0, one entry per iteration after
    int iterations = 0;
    bool converged = false;
};

MmTrace mm_phase_update_traced(const IrsQuadratic &q, const ComplexVector &theta0, double eps = 1e-4,
                               int max_iter = 200);

ComplexVector mm_phase_update(const IrsQuadratic &q, const ComplexVector &theta0, double eps = 1e-4,
                              int max_iter = 200);

} // namespace irsfd

#endif
