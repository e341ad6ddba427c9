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

#ifndef IRSFD_CHANNEL_HPP
#define IRSFD_CHANNEL_HPP

#include "irsfd/config.hpp"
#include "irsfd/numerics.hpp"

#include <array>

namespace irsfd
{

// The eight links of the IRS-assisted FD topology. Matrices are rx x tx.
enum class Link : int
{
    k = 0,         // UL user -> BS rx          N0 x Mk
    j = 1,         // BS tx -> DL user          Nj x M0
    zero = 2,      // BS tx -> BS rx (SI)       N0 x M0
    jk = 3,        // UL user -> DL user        Nj x Mk
    theta0 = 4,    // BS tx -> IRS              RC x M0
    zerotheta = 5, // IRS -> BS rx              N0 x RC
    jtheta = 6,    // IRS -> DL user            Nj x RC
    thetak = 7,    // UL user -> IRS            RC x Mk
};

inline constexpr std::array<Link, 8> all_links{Link::k,      Link::j,         Link::zero,   Link::jk,
                                               Link::theta0, Link::zerotheta, Link::jtheta, Link::thetak};

const char *link_name(Link l);

bool touches_irs(Link l);

struct LinkDims
{
    int rx = 0;
    int tx = 0;
};

LinkDims link_dims(const ScenarioConfig &cfg, Link l);

struct ChannelSet
{
    ComplexMatrix h_k;
    ComplexMatrix h_j;
    ComplexMatrix h_0;
    ComplexMatrix h_jk;
    ComplexMatrix h_theta0;
    ComplexMatrix h_0theta;
    ComplexMatrix h_jtheta;
    ComplexMatrix h_thetak;

    ComplexMatrix &at(Link l);
    const ComplexMatrix &at(Link l) const;

    static ChannelSet zeros(const ScenarioConfig &cfg);
};

// Same layout, but the matrices are the hatted estimates.
struct ChannelEstimates : ChannelSet
{
    ChannelEstimates() = default;
    explicit ChannelEstimates(ChannelSet s) : ChannelSet(std::move(s)) {}
};

// Throws DimensionError if any matrix disagrees with cfg.
void check_dims(const ChannelSet &ch, const ScenarioConfig &cfg);

// Kronecker covariance factors of one link: vec(dH) ~ CN(0, J (x) K), with J
// on the transmit side (tx x tx) and K on the receive side (rx x rx).
struct KroneckerFactors
{
    ComplexMatrix J;
    ComplexMatrix K;
};

struct ErrorStats
{
    std::array<KroneckerFactors, 8> links;

    KroneckerFactors &at(Link l) { return links[static_cast<int>(l)]; }
    const KroneckerFactors &at(Link l) const { return links[static_cast<int>(l)]; }

    // All K = 0 (perfect CSI).
    static ErrorStats zeros(const ScenarioConfig &cfg);
};

void check_dims(const ErrorStats &stats, const ScenarioConfig &cfg);

// ------------------------------------------------------------------------
// Geometry and large-scale fading

struct Topology
{
    Vec3 bs;
    Vec3 irs;
    Vec3 ul_user;
    Vec3 dl_user;
};

// Linear large-scale power gain of each link (after receive normalization).
struct LinkGains
{
    std::array<double, 8> gain{};

    double at(Link l) const { return gain[static_cast<int>(l)]; }
};

// PL = pl0_db - 10 * pl_exponent * log10(distance / d0), in dB.
double path_loss_db(double distance_m, const ScenarioConfig &cfg);

// Users drawn uniformly in horizontal disks of radius user_radius.
Topology sample_topology(const ScenarioConfig &cfg, Rng &rng);

LinkGains link_gains(const ScenarioConfig &cfg, const Topology &topo);

// Half-wavelength ULA steering vector, unit-modulus entries.
ComplexVector ula_steering(int n, double cos_angle);

// Small-scale fading on a fixed topology: Rician for H_0 and the direct
// user-BS links (and H_jk), Rayleigh for all IRS links, each scaled by the
// amplitude of its large-scale gain.
ChannelSet sample_channels(const ScenarioConfig &cfg, const Topology &topo, Rng &rng);

// sample_topology followed by sample_channels.
ChannelSet sample_true_channels(const ScenarioConfig &cfg, Rng &rng);

// ------------------------------------------------------------------------
// CSI error model

// J = I (tx side), K = sigma_csi^2 I (rx side) for every link.
ErrorStats build_error_stats(const ScenarioConfig &cfg);

// As above with K scaled by each link's large-scale gain.
ErrorStats build_error_stats(const ScenarioConfig &cfg, const LinkGains &gains);

// Draws CSI errors with precomputed square-root factors. Scaled identities
// are detected and handled without the matrix products.
class ErrorSampler
{
public:
    explicit ErrorSampler(const ErrorStats &stats);

    // dH = K^(1/2) G (J^T)^(1/2), G i.i.d. CN(0, 1)
    ComplexMatrix sample_error(Link l, Rng &rng) const;

    // est + dH for every link
    ChannelSet sample_true(const ChannelEstimates &est, Rng &rng) const;

private:
    struct Factor
    {
        ComplexMatrix left;  // K^(1/2)
        ComplexMatrix right; // (J^T)^(1/2)
        double left_scale = 0.0;
        double right_scale = 0.0;
        bool left_is_scaled_identity = false;
        bool right_is_scaled_identity = false;
        bool zero = false;
        Eigen::Index rows = 0;
        Eigen::Index cols = 0;
    };
    std::array<Factor, 8> factors_;
};

ChannelSet sample_errors_and_true(const ChannelEstimates &est, const ErrorStats &stats, Rng &rng);

// ------------------------------------------------------------------------
// Effective (direct plus IRS-reflected) channels

struct EffectiveChannels
{
    ComplexMatrix hbar_k;  // H_k  + H_0theta Theta H_thetak
    ComplexMatrix hbar_0;  // H_0  + H_0theta Theta H_theta0
    ComplexMatrix hbar_j;  // H_j  + H_jtheta Theta H_theta0
    ComplexMatrix hbar_jk; // H_jk + H_jtheta Theta H_thetak
};

EffectiveChannels effective_channels(const ChannelSet &ch, const ComplexVector &theta);

// Zeroes the four IRS links (channels) or their error factors.
void remove_irs(ChannelSet &ch);
void remove_irs(ErrorStats &stats);

} // namespace irsfd

#endif
