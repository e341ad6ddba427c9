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

#ifndef IRSFD_EXPECTATION_HPP
#define IRSFD_EXPECTATION_HPP

#include "irsfd/channel.hpp"
#include "irsfd/config.hpp"
#include "irsfd/numerics.hpp"

namespace irsfd
{

// outer: E[H X H^H] = Hhat X Hhat^H + Tr(X J^T) K
// inner: E[H^H X H] = Hhat^H X Hhat + Tr(K X) J^T
enum class Side
{
    outer,
    inner,
};

ComplexMatrix expect_HXH(const ComplexMatrix &hhat, const ComplexMatrix &x, const ComplexMatrix &J,
                         const ComplexMatrix &K, Side side);

// Every effective channel has the form D + B Theta C with independent errors
// on D, B and C.
enum class Cascade
{
    k,    // H_k  + H_0theta Theta H_thetak
    zero, // H_0  + H_0theta Theta H_theta0
    j,    // H_j  + H_jtheta Theta H_theta0
    jk,   // H_jk + H_jtheta Theta H_thetak
};

// E[Hbar X Hbar^H] for the given cascade.
ComplexMatrix expect_cascade_outer(const ChannelEstimates &est, const ErrorStats &stats, Cascade c,
                                   const ComplexVector &theta, const ComplexMatrix &x);

// E[Hbar X Hbar^H] - Hhat_bar X Hhat_bar^H
ComplexMatrix cascade_error_outer(const ChannelEstimates &est, const ErrorStats &stats, Cascade c,
                                  const ComplexVector &theta, const ComplexMatrix &x);

// E[Hbar^H A Hbar] for the given cascade.
ComplexMatrix expect_cascade_inner(const ChannelEstimates &est, const ErrorStats &stats, Cascade c,
                                   const ComplexVector &theta, const ComplexMatrix &a);

struct ExpectedCov
{
    ComplexMatrix Q_k;  // E[Hbar_k  U U^H Hbar_k^H]   N0 x N0
    ComplexMatrix T_j;  // E[Hbar_j  V V^H Hbar_j^H]   Nj x Nj
    ComplexMatrix T_0;  // E[Hbar_0  V V^H Hbar_0^H]   N0 x N0
    ComplexMatrix Q_jk; // E[Hbar_jk U U^H Hbar_jk^H]  Nj x Nj
};

ExpectedCov build_expected_cov(const ChannelEstimates &est, const ErrorStats &stats, const ComplexMatrix &U_k,
                               const ComplexMatrix &V_j, const ComplexVector &theta);

struct TheoremCov
{
    ComplexMatrix Sigma_kbar; // N0 x N0
    ComplexMatrix Sigma_jbar; // Nj x Nj
};

TheoremCov build_theorem_cov(const ChannelEstimates &est, const ErrorStats &stats, const ComplexMatrix &U_k,
                             const ComplexMatrix &V_j, const ComplexVector &theta, double sigma0_sq, double sigmaj_sq);

// Weighted rates in bits/s/Hz.
struct Wsr
{
    double ul = 0.0; // w_k * rate_k
    double dl = 0.0; // w_j * rate_j
    double total() const { return ul + dl; }
};

Wsr ergodic_wsr(const ChannelEstimates &est, const ErrorStats &stats, const ComplexMatrix &U_k,
                const ComplexMatrix &V_j, const ComplexVector &theta, const ScenarioConfig &cfg);

Wsr instantaneous_wsr(const ChannelSet &true_ch, const ComplexMatrix &U_k, const ComplexMatrix &V_j,
                      const ComplexVector &theta, const ScenarioConfig &cfg);

// log2 det(I + G^H Sigma^-1 G)
double rate_bits(const ComplexMatrix &G, const ComplexMatrix &Sigma);

} // namespace irsfd

#endif
