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

#include "irsfd/channel.hpp"

#include <cmath>
#include <numbers>

namespace irsfd
{

const char *link_name(Link l)
{
    switch (l)
    {
    case Link::k:
        return "H_k";
    case Link::j:
        return "H_j";
    case Link::zero:
        return "H_0";
    case Link::jk:
        return "H_jk";
    case Link::theta0:
        return "H_theta0";
    case Link::zerotheta:
        return "H_0theta";
    case Link::jtheta:
        return "H_jtheta";
    case Link::thetak:
        return "H_thetak";
    }
    return "?";
}

bool touches_irs(Link l)
{
    return l == Link::theta0 || l == Link::zerotheta || l == Link::jtheta || l == Link::thetak;
}

LinkDims link_dims(const ScenarioConfig &cfg, Link l)
{
    const int rc = cfg.irs_elements();
    switch (l)
    {
    case Link::k:
        return {cfg.N0, cfg.Mk};
    case Link::j:
        return {cfg.Nj, cfg.M0};
    case Link::zero:
        return {cfg.N0, cfg.M0};
    case Link::jk:
        return {cfg.Nj, cfg.Mk};
    case Link::theta0:
        return {rc, cfg.M0};
    case Link::zerotheta:
        return {cfg.N0, rc};
    case Link::jtheta:
        return {cfg.Nj, rc};
    case Link::thetak:
        return {rc, cfg.Mk};
    }
    return {};
}

ComplexMatrix &ChannelSet::at(Link l)
{
    return const_cast<ComplexMatrix &>(static_cast<const ChannelSet &>(*this).at(l));
}

const ComplexMatrix &ChannelSet::at(Link l) const
{
    switch (l)
    {
    case Link::k:
        return h_k;
    case Link::j:
        return h_j;
    case Link::zero:
        return h_0;
    case Link::jk:
        return h_jk;
    case Link::theta0:
        return h_theta0;
    case Link::zerotheta:
        return h_0theta;
    case Link::jtheta:
        return h_jtheta;
    case Link::thetak:
        return h_thetak;
    }
    throw std::logic_error("ChannelSet::at: bad link");
}

ChannelSet ChannelSet::zeros(const ScenarioConfig &cfg)
{
    ChannelSet ch;
    for (Link l : all_links)
    {
        const auto d = link_dims(cfg, l);
        ch.at(l) = ComplexMatrix::Zero(d.rx, d.tx);
    }
    return ch;
}

void check_dims(const ChannelSet &ch, const ScenarioConfig &cfg)
{
    for (Link l : all_links)
    {
        const auto d = link_dims(cfg, l);
        const auto &m = ch.at(l);
        if (m.rows() != d.rx || m.cols() != d.tx)
            throw DimensionError(std::string(link_name(l)) + ": expected " + std::to_string(d.rx) + "x" +
                                 std::to_string(d.tx) + ", got " + dims(m));
    }
}

ErrorStats ErrorStats::zeros(const ScenarioConfig &cfg)
{
    ErrorStats s;
    for (Link l : all_links)
    {
        const auto d = link_dims(cfg, l);
        s.at(l) = {ComplexMatrix::Identity(d.tx, d.tx), ComplexMatrix::Zero(d.rx, d.rx)};
    }
    return s;
}

void check_dims(const ErrorStats &stats, const ScenarioConfig &cfg)
{
    for (Link l : all_links)
    {
        const auto d = link_dims(cfg, l);
        const auto &f = stats.at(l);
        if (f.J.rows() != d.tx || f.J.cols() != d.tx)
            throw DimensionError(std::string(link_name(l)) + ": J must be " + std::to_string(d.tx) + "x" +
                                 std::to_string(d.tx) + ", got " + dims(f.J));
        if (f.K.rows() != d.rx || f.K.cols() != d.rx)
            throw DimensionError(std::string(link_name(l)) + ": K must be " + std::to_string(d.rx) + "x" +
                                 std::to_string(d.rx) + ", got " + dims(f.K));
    }
}

double path_loss_db(double distance_m, const ScenarioConfig &cfg)
{
    if (!(distance_m > 0.0))
        throw DomainError("path_loss_db: distance must be positive, got " + std::to_string(distance_m));
    return cfg.pl0_db - 10.0 * cfg.pl_exponent * std::log10(distance_m / cfg.d0);
}

namespace
{

Vec3 uniform_in_disk(const Vec3 &center, double radius, Rng &rng)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double r = radius * std::sqrt(u(rng));
    const double phi = 2.0 * std::numbers::pi * u(rng);
    return {center.x + r * std::cos(phi), center.y + r * std::sin(phi), center.z};
}

double db_to_linear(double db)
{
    return std::pow(10.0, db / 10.0);
}

// Direction cosine of (to - from) against the array axis (x).
double axis_cosine(const Vec3 &from, const Vec3 &to)
{
    const double d = distance(from, to);
    return d > 0.0 ? (to.x - from.x) / d : 0.0;
}

ComplexMatrix los_component(int rx, int tx, double cos_aoa, double cos_aod)
{
    return ula_steering(rx, cos_aoa) * ula_steering(tx, cos_aod).adjoint();
}

ComplexMatrix rician(int rx, int tx, double kappa, const ComplexMatrix &los, Rng &rng)
{
    ComplexMatrix nlos = sample_cn(rx, tx, 1.0, rng);
    if (std::isinf(kappa))
        return los;
    return std::sqrt(kappa / (kappa + 1.0)) * los + std::sqrt(1.0 / (kappa + 1.0)) * nlos;
}

} // namespace

Topology sample_topology(const ScenarioConfig &cfg, Rng &rng)
{
    Topology t;
    t.bs = cfg.bs_pos;
    t.irs = cfg.irs_pos;
    t.ul_user = uniform_in_disk(cfg.ul_center, cfg.user_radius, rng);
    t.dl_user = uniform_in_disk(cfg.dl_center, cfg.user_radius, rng);
    return t;
}

LinkGains link_gains(const ScenarioConfig &cfg, const Topology &topo)
{
    const double norm = cfg.rx_gain_normalization_db;
    LinkGains g;
    auto set = [&](Link l, double db) { g.gain[static_cast<int>(l)] = db_to_linear(db); };
    set(Link::k, path_loss_db(distance(topo.ul_user, topo.bs), cfg) + norm);
    set(Link::j, path_loss_db(distance(topo.bs, topo.dl_user), cfg) + norm);
    set(Link::zero, cfg.si_path_loss_db + norm);
    set(Link::jk, path_loss_db(distance(topo.ul_user, topo.dl_user), cfg) + norm);
    set(Link::theta0, path_loss_db(distance(topo.bs, topo.irs), cfg));
    set(Link::zerotheta, path_loss_db(distance(topo.irs, topo.bs), cfg) + norm);
    set(Link::jtheta, path_loss_db(distance(topo.irs, topo.dl_user), cfg) + norm);
    set(Link::thetak, path_loss_db(distance(topo.ul_user, topo.irs), cfg));
    return g;
}

ComplexVector ula_steering(int n, double cos_angle)
{
    ComplexVector a(n);
    for (int i = 0; i < n; ++i)
        a(i) = std::polar(1.0, std::numbers::pi * i * cos_angle);
    return a;
}

ChannelSet sample_channels(const ScenarioConfig &cfg, const Topology &topo, Rng &rng)
{
    const LinkGains g = link_gains(cfg, topo);
    const double kappa = cfg.rician_kappa;
    ChannelSet ch;

    const double si_cos = std::cos(cfg.si_los_angle_deg * std::numbers::pi / 180.0);

    // Fixed draw order: H_k, H_j, H_0, H_jk, then the IRS links.
    ch.h_k = rician(
        cfg.N0, cfg.Mk, kappa,
        los_component(cfg.N0, cfg.Mk, axis_cosine(topo.bs, topo.ul_user), axis_cosine(topo.ul_user, topo.bs)), rng);
    ch.h_j = rician(
        cfg.Nj, cfg.M0, kappa,
        los_component(cfg.Nj, cfg.M0, axis_cosine(topo.dl_user, topo.bs), axis_cosine(topo.bs, topo.dl_user)), rng);
    ch.h_0 = rician(cfg.N0, cfg.M0, kappa, los_component(cfg.N0, cfg.M0, si_cos, si_cos), rng);
    ch.h_jk = rician(
        cfg.Nj, cfg.Mk, kappa,
        los_component(cfg.Nj, cfg.Mk, axis_cosine(topo.dl_user, topo.ul_user), axis_cosine(topo.ul_user, topo.dl_user)),
        rng);

    const int rc = cfg.irs_elements();
    ch.h_theta0 = sample_cn(rc, cfg.M0, 1.0, rng);
    ch.h_0theta = sample_cn(cfg.N0, rc, 1.0, rng);
    ch.h_jtheta = sample_cn(cfg.Nj, rc, 1.0, rng);
    ch.h_thetak = sample_cn(rc, cfg.Mk, 1.0, rng);

    for (Link l : all_links)
        ch.at(l) *= std::sqrt(g.at(l));
    return ch;
}

ChannelSet sample_true_channels(const ScenarioConfig &cfg, Rng &rng)
{
    const Topology topo = sample_topology(cfg, rng);
    return sample_channels(cfg, topo, rng);
}

ErrorStats build_error_stats(const ScenarioConfig &cfg)
{
    LinkGains unit;
    unit.gain.fill(1.0);
    return build_error_stats(cfg, unit);
}

ErrorStats build_error_stats(const ScenarioConfig &cfg, const LinkGains &gains)
{
    const double var = cfg.csi_error_variance();
    ErrorStats s;
    for (Link l : all_links)
    {
        const auto d = link_dims(cfg, l);
        s.at(l) = {ComplexMatrix::Identity(d.tx, d.tx), (var * gains.at(l)) * ComplexMatrix::Identity(d.rx, d.rx)};
    }
    return s;
}

namespace
{

// Returns true and the scale when m == s * I up to round-off.
bool scaled_identity(const ComplexMatrix &m, double &s)
{
    if (m.rows() != m.cols() || m.size() == 0)
        return false;
    const Complex d0 = m(0, 0);
    if (std::abs(d0.imag()) > 0.0)
        return false;
    const double tol = 1e-14 * std::max(1.0, std::abs(d0));
    for (Eigen::Index c = 0; c < m.cols(); ++c)
        for (Eigen::Index r = 0; r < m.rows(); ++r)
        {
            const Complex expect = r == c ? d0 : Complex(0.0);
            if (std::abs(m(r, c) - expect) > tol)
                return false;
        }
    s = d0.real();
    return true;
}

} // namespace

ErrorSampler::ErrorSampler(const ErrorStats &stats)
{
    for (Link l : all_links)
    {
        const auto &kf = stats.at(l);
        auto &f = factors_[static_cast<int>(l)];
        f.rows = kf.K.rows();
        f.cols = kf.J.rows();

        double ks = 0.0, js = 0.0;
        if (scaled_identity(kf.K, ks))
        {
            if (ks < 0.0)
                throw DomainError(std::string(link_name(l)) + ": K is not positive semidefinite");
            f.left_is_scaled_identity = true;
            f.left_scale = std::sqrt(ks);
        }
        else
            f.left = sqrt_psd(kf.K);

        const ComplexMatrix jt = kf.J.transpose();
        if (scaled_identity(jt, js))
        {
            if (js < 0.0)
                throw DomainError(std::string(link_name(l)) + ": J is not positive semidefinite");
            f.right_is_scaled_identity = true;
            f.right_scale = std::sqrt(js);
        }
        else
            f.right = sqrt_psd(jt);

        f.zero =
            (f.left_is_scaled_identity && f.left_scale == 0.0) || (f.right_is_scaled_identity && f.right_scale == 0.0);
    }
}

ComplexMatrix ErrorSampler::sample_error(Link l, Rng &rng) const
{
    const auto &f = factors_[static_cast<int>(l)];
    // Always draw so the RNG stream does not depend on which links are error-free.
    ComplexMatrix g = sample_cn(f.rows, f.cols, 1.0, rng);
    if (f.zero)
        return ComplexMatrix::Zero(f.rows, f.cols);
    if (f.left_is_scaled_identity)
        g *= f.left_scale;
    else
        g = f.left * g;
    if (f.right_is_scaled_identity)
        g *= f.right_scale;
    else
        g = g * f.right;
    return g;
}

ChannelSet ErrorSampler::sample_true(const ChannelEstimates &est, Rng &rng) const
{
    ChannelSet out = est;
    for (Link l : all_links)
    {
        ComplexMatrix &h = out.at(l);
        const auto &f = factors_[static_cast<int>(l)];
        if (h.rows() != f.rows || h.cols() != f.cols)
            throw DimensionError(std::string(link_name(l)) + ": estimate " + dims(h) +
                                 " does not match error statistics");
        h += sample_error(l, rng);
    }
    return out;
}

ChannelSet sample_errors_and_true(const ChannelEstimates &est, const ErrorStats &stats, Rng &rng)
{
    return ErrorSampler(stats).sample_true(est, rng);
}

EffectiveChannels effective_channels(const ChannelSet &ch, const ComplexVector &theta)
{
    const Eigen::Index rc = ch.h_theta0.rows();
    if (theta.size() != rc)
        throw DimensionError("effective_channels: theta has length " + std::to_string(theta.size()) + ", expected " +
                             std::to_string(rc));
    const auto t = theta.asDiagonal();
    EffectiveChannels e;
    e.hbar_k = ch.h_k + ch.h_0theta * t * ch.h_thetak;
    e.hbar_0 = ch.h_0 + ch.h_0theta * t * ch.h_theta0;
    e.hbar_j = ch.h_j + ch.h_jtheta * t * ch.h_theta0;
    e.hbar_jk = ch.h_jk + ch.h_jtheta * t * ch.h_thetak;
    return e;
}

void remove_irs(ChannelSet &ch)
{
    for (Link l : all_links)
        if (touches_irs(l))
            ch.at(l).setZero();
}

void remove_irs(ErrorStats &stats)
{
    for (Link l : all_links)
        if (touches_irs(l))
            stats.at(l).K.setZero();
}

} // namespace irsfd
