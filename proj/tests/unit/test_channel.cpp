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

#include <doctest.h>

#include "irsfd/channel.hpp"
#include "testing.hpp"

#include <cmath>
#include <numbers>

using namespace irsfd;
using namespace irsfd::testing;

namespace
{

Topology fixed_topology(const ScenarioConfig &cfg)
{
    return Topology{cfg.bs_pos, cfg.irs_pos, cfg.ul_center, cfg.dl_center};
}

} // namespace

TEST_CASE("path_loss_db")
{
    ScenarioConfig cfg;
    CHECK(path_loss_db(1.0, cfg) == doctest::Approx(-30.0).epsilon(1e-14));
    CHECK(path_loss_db(10.0, cfg) == doctest::Approx(-50.0).epsilon(1e-14));
    CHECK(path_loss_db(31.6228, cfg) == doctest::Approx(-30.0 - 20.0 * std::log10(31.6228)).epsilon(1e-14));
    CHECK(std::abs(path_loss_db(31.6228, cfg) + 60.0) < 1e-4);
    CHECK_THROWS_AS(path_loss_db(0.0, cfg), DomainError);
    CHECK_THROWS_AS(path_loss_db(-2.0, cfg), DomainError);

    double prev = path_loss_db(0.1, cfg);
    for (double d = 0.2; d < 500.0; d *= 1.3)
    {
        const double pl = path_loss_db(d, cfg);
        CHECK(pl < prev);
        prev = pl;
    }
}

TEST_CASE("link gains follow distances and receive normalization")
{
    ScenarioConfig cfg;
    const Topology topo = fixed_topology(cfg);
    const LinkGains g = link_gains(cfg, topo);
    const double norm = cfg.rx_gain_normalization_db;
    auto lin = [](double db) { return std::pow(10.0, db / 10.0); };
    CHECK(g.at(Link::k) == doctest::Approx(lin(path_loss_db(distance(topo.ul_user, topo.bs), cfg) + norm)));
    CHECK(g.at(Link::theta0) == doctest::Approx(lin(path_loss_db(distance(topo.bs, topo.irs), cfg))));
    CHECK(g.at(Link::thetak) == doctest::Approx(lin(path_loss_db(distance(topo.ul_user, topo.irs), cfg))));
    CHECK(g.at(Link::zerotheta) == doctest::Approx(lin(path_loss_db(distance(topo.irs, topo.bs), cfg) + norm)));
    CHECK(g.at(Link::zero) == doctest::Approx(lin(cfg.si_path_loss_db + norm)));
}

TEST_CASE("sampled channels have configured dimensions")
{
    ScenarioConfig cfg;
    Rng rng(21);
    const ChannelSet ch = sample_true_channels(cfg, rng);
    CHECK_NOTHROW(check_dims(ch, cfg));
    for (Link l : all_links)
    {
        const LinkDims d = link_dims(cfg, l);
        CHECK(ch.at(l).rows() == d.rx);
        CHECK(ch.at(l).cols() == d.tx);
    }
    ChannelSet bad = ch;
    bad.h_jk = ComplexMatrix::Zero(2, 2);
    CHECK_THROWS_AS(check_dims(bad, cfg), DimensionError);
}

TEST_CASE("user positions lie in their disks")
{
    ScenarioConfig cfg;
    Rng rng(22);
    for (int t = 0; t < 500; ++t)
    {
        const Topology topo = sample_topology(cfg, rng);
        CHECK(distance(topo.ul_user, cfg.ul_center) <= cfg.user_radius + 1e-12);
        CHECK(distance(topo.dl_user, cfg.dl_center) <= cfg.user_radius + 1e-12);
        CHECK(topo.ul_user.z == cfg.ul_center.z);
    }
}

TEST_CASE("large Rician factor yields the line-of-sight component")
{
    ScenarioConfig cfg;
    cfg.rician_kappa = 1e9;
    const Topology topo = fixed_topology(cfg);
    const LinkGains g = link_gains(cfg, topo);
    Rng rng(23);
    const ChannelSet ch = sample_channels(cfg, topo, rng);
    const double c = std::cos(cfg.si_los_angle_deg * std::numbers::pi / 180.0);
    const ComplexMatrix los = std::sqrt(g.at(Link::zero)) * steering(cfg.N0, c) * steering(cfg.M0, c).adjoint();
    CHECK(rel_fro(ch.h_0, los) < 1e-3);
}

TEST_CASE("zero Rician factor gives zero-mean fading")
{
    ScenarioConfig cfg = small_config();
    cfg.rician_kappa = 0.0;
    const Topology topo = fixed_topology(cfg);
    const LinkGains g = link_gains(cfg, topo);
    Rng rng(24);
    const int n = 10000;
    ComplexMatrix mean = ComplexMatrix::Zero(cfg.N0, cfg.M0);
    for (int t = 0; t < n; ++t)
        mean += sample_channels(cfg, topo, rng).h_0;
    mean /= static_cast<double>(n);
    const double sigma = std::sqrt(g.at(Link::zero));
    CHECK(max_abs(mean) < 3.0 * sigma / 100.0);
}

TEST_CASE("IRS link entry variance equals its path-loss gain")
{
    ScenarioConfig cfg = small_config();
    const Topology topo = fixed_topology(cfg);
    const LinkGains g = link_gains(cfg, topo);
    Rng rng(25);
    const int n = 10000;
    std::array<Eigen::MatrixXd, 4> power;
    const std::array<Link, 4> irs_links{Link::theta0, Link::zerotheta, Link::jtheta, Link::thetak};
    for (int i = 0; i < 4; ++i)
    {
        const LinkDims d = link_dims(cfg, irs_links[i]);
        power[i] = Eigen::MatrixXd::Zero(d.rx, d.tx);
    }
    for (int t = 0; t < n; ++t)
    {
        const ChannelSet ch = sample_channels(cfg, topo, rng);
        for (int i = 0; i < 4; ++i)
            power[i] += ch.at(irs_links[i]).cwiseAbs2();
    }
    for (int i = 0; i < 4; ++i)
    {
        const Eigen::MatrixXd v = power[i] / static_cast<double>(n);
        const double gain = g.at(irs_links[i]);
        CHECK(v.maxCoeff() <= 1.05 * gain);
        CHECK(v.minCoeff() >= 0.95 * gain);
    }
}

TEST_CASE("build_error_stats")
{
    ScenarioConfig cfg;
    cfg.csi_error_relative = false;
    cfg.rho = 0.0;
    ErrorStats st = build_error_stats(cfg);
    for (Link l : all_links)
        CHECK(st.at(l).K.norm() == 0.0);

    cfg.rho = 0.4;
    apply_snr(cfg, 30.0);
    cfg.alpha_decay = 0.6;
    const double expected = 0.4 * std::pow(10.0, -1.8);
    CHECK(cfg.csi_error_variance() == doctest::Approx(6.3496e-3).epsilon(1e-4));
    st = build_error_stats(cfg);
    for (Link l : all_links)
    {
        const LinkDims d = link_dims(cfg, l);
        CHECK(st.at(l).J.rows() == d.tx);
        CHECK((st.at(l).J - ComplexMatrix::Identity(d.tx, d.tx)).norm() == 0.0);
        CHECK((st.at(l).K - expected * ComplexMatrix::Identity(d.rx, d.rx)).norm() < 1e-15);
    }
    CHECK_NOTHROW(check_dims(st, cfg));

    cfg.rho = 1.0;
    apply_snr(cfg, 0.0);
    CHECK(cfg.csi_error_variance() == doctest::Approx(1.0).epsilon(1e-15));

    cfg.rho = 0.4;
    apply_snr(cfg, 30.0);
    const LinkGains g = link_gains(cfg, fixed_topology(cfg));
    st = build_error_stats(cfg, g);
    for (Link l : all_links)
    {
        const LinkDims d = link_dims(cfg, l);
        CHECK(rel_fro(st.at(l).K, expected * g.at(l) * ComplexMatrix::Identity(d.rx, d.rx)) < 1e-14);
    }
}

TEST_CASE("zero error statistics reproduce the estimates")
{
    const ScenarioConfig cfg = small_config();
    Rng rng(26);
    const ChannelEstimates est = random_estimates(cfg, rng);
    const ChannelSet t = sample_errors_and_true(est, ErrorStats::zeros(cfg), rng);
    for (Link l : all_links)
        CHECK(t.at(l) == est.at(l));
}

TEST_CASE("scaled-identity error covariance")
{
    const ScenarioConfig cfg = small_config();
    ErrorStats st = ErrorStats::zeros(cfg);
    const double s2 = 0.3;
    const LinkDims d = link_dims(cfg, Link::jk);
    st.at(Link::jk).J = ComplexMatrix::Identity(d.tx, d.tx);
    st.at(Link::jk).K = s2 * ComplexMatrix::Identity(d.rx, d.rx);
    const ErrorSampler sampler(st);
    Rng rng(27);
    const int n = 10000;
    const Eigen::Index m = d.rx * d.tx;
    ComplexMatrix cov = ComplexMatrix::Zero(m, m);
    ComplexVector mean = ComplexVector::Zero(m);
    for (int t = 0; t < n; ++t)
    {
        const ComplexMatrix e = sampler.sample_error(Link::jk, rng);
        const ComplexVector v = e.reshaped();
        cov += v * v.adjoint();
        mean += v;
    }
    cov /= static_cast<double>(n);
    mean /= static_cast<double>(n);
    CHECK(max_abs(cov - s2 * ComplexMatrix::Identity(m, m)) <= 0.05 * s2);
    CHECK(mean.cwiseAbs().maxCoeff() < 3.0 * std::sqrt(s2) / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("Kronecker error covariance converges to J kron K")
{
    const ScenarioConfig cfg = small_config();
    Rng rng(28);
    ErrorStats st = ErrorStats::zeros(cfg);
    const LinkDims d = link_dims(cfg, Link::k);
    const ComplexMatrix J = random_hpd(d.tx, rng);
    const ComplexMatrix K = random_hpd(d.rx, rng, 0.5);
    st.at(Link::k).J = J;
    st.at(Link::k).K = K;
    const ErrorSampler sampler(st);
    const int n = 10000;
    const Eigen::Index m = d.rx * d.tx;
    ComplexMatrix cov = ComplexMatrix::Zero(m, m);
    for (int t = 0; t < n; ++t)
    {
        const ComplexVector v = sampler.sample_error(Link::k, rng).reshaped();
        cov += v * v.adjoint();
    }
    cov /= static_cast<double>(n);
    ComplexMatrix kron(m, m);
    for (Eigen::Index a = 0; a < d.tx; ++a)
        for (Eigen::Index b = 0; b < d.tx; ++b)
            kron.block(a * d.rx, b * d.rx, d.rx, d.rx) = J(a, b) * K;
    CHECK(rel_fro(cov, kron) < 0.05);
}

TEST_CASE("sample_true adds errors to the estimates")
{
    const ScenarioConfig cfg = small_config();
    Rng rng(29);
    const ChannelEstimates est = random_estimates(cfg, rng);
    const ErrorStats st = random_stats(cfg, rng, 0.1);
    Rng a(5), b(5);
    const ChannelSet t = sample_errors_and_true(est, st, a);
    const ErrorSampler sampler(st);
    for (Link l : all_links)
    {
        const ComplexMatrix e = sampler.sample_error(l, b);
        CHECK(rel_fro(t.at(l), est.at(l) + e) < 1e-14);
    }
}

TEST_CASE("non-PSD covariance factors are rejected")
{
    const ScenarioConfig cfg = small_config();
    Rng rng(30);
    const ChannelEstimates est = random_estimates(cfg, rng);
    ErrorStats st = ErrorStats::zeros(cfg);
    const LinkDims d = link_dims(cfg, Link::j);
    st.at(Link::j).K = -ComplexMatrix::Identity(d.rx, d.rx);
    CHECK_THROWS_AS(sample_errors_and_true(est, st, rng), DomainError);

    st = ErrorStats::zeros(cfg);
    st.at(Link::j).J = -ComplexMatrix::Identity(d.tx, d.tx);
    st.at(Link::j).K = ComplexMatrix::Identity(d.rx, d.rx);
    CHECK_THROWS_AS(sample_errors_and_true(est, st, rng), DomainError);
}

TEST_CASE("effective channels")
{
    const ScenarioConfig cfg = small_config();
    Rng rng(31);
    ChannelSet ch = random_estimates(cfg, rng);
    const ComplexVector theta = random_phases(cfg.irs_elements(), rng);

    ChannelSet no_irs = ch;
    remove_irs(no_irs);
    EffectiveChannels e = effective_channels(no_irs, theta);
    CHECK(e.hbar_k == ch.h_k);
    CHECK(e.hbar_0 == ch.h_0);
    CHECK(e.hbar_j == ch.h_j);
    CHECK(e.hbar_jk == ch.h_jk);

    ChannelSet cascade_only = ch;
    cascade_only.h_k.setZero();
    const ComplexVector ones = ComplexVector::Ones(cfg.irs_elements());
    e = effective_channels(cascade_only, ones);
    CHECK(rel_fro(e.hbar_k, ch.h_0theta * ch.h_thetak) < 1e-14);

    e = effective_channels(ch, theta);
    CHECK(max_abs(e.hbar_k - naive_cascade(ch.h_k, ch.h_0theta, theta, ch.h_thetak)) < 1e-12);
    CHECK(max_abs(e.hbar_0 - naive_cascade(ch.h_0, ch.h_0theta, theta, ch.h_theta0)) < 1e-12);
    CHECK(max_abs(e.hbar_j - naive_cascade(ch.h_j, ch.h_jtheta, theta, ch.h_theta0)) < 1e-12);
    CHECK(max_abs(e.hbar_jk - naive_cascade(ch.h_jk, ch.h_jtheta, theta, ch.h_thetak)) < 1e-12);

    CHECK_THROWS_AS(effective_channels(ch, ComplexVector::Ones(cfg.irs_elements() + 1)), DimensionError);
}

TEST_CASE("effective channels are affine in each link")
{
    const ScenarioConfig cfg = small_config();
    Rng rng(32);
    const ChannelSet base = random_estimates(cfg, rng);
    const ComplexVector theta = random_phases(cfg.irs_elements(), rng);
    auto flat = [](const EffectiveChannels &e) {
        ComplexVector v(e.hbar_k.size() + e.hbar_0.size() + e.hbar_j.size() + e.hbar_jk.size());
        v << e.hbar_k.reshaped(), e.hbar_0.reshaped(), e.hbar_j.reshaped(), e.hbar_jk.reshaped();
        return v;
    };
    for (Link l : all_links)
    {
        const LinkDims d = link_dims(cfg, l);
        const ComplexMatrix a = sample_cn(d.rx, d.tx, 1.0, rng);
        const ComplexMatrix b = sample_cn(d.rx, d.tx, 1.0, rng);
        ChannelSet sa = base, sb = base, sab = base, s0 = base;
        sa.at(l) = a;
        sb.at(l) = b;
        sab.at(l) = a + b;
        s0.at(l).setZero();
        const ComplexVector lhs = flat(effective_channels(sab, theta)) - flat(effective_channels(sb, theta));
        const ComplexVector rhs = flat(effective_channels(sa, theta)) - flat(effective_channels(s0, theta));
        CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("remove_irs zeroes every IRS link and its statistics")
{
    const ScenarioConfig cfg = small_config();
    Rng rng(33);
    ChannelSet ch = random_estimates(cfg, rng);
    ErrorStats st = random_stats(cfg, rng, 0.2);
    remove_irs(ch);
    remove_irs(st);
    for (Link l : all_links)
    {
        CHECK(touches_irs(l) == (l == Link::theta0 || l == Link::zerotheta || l == Link::jtheta || l == Link::thetak));
        if (touches_irs(l))
        {
            CHECK(ch.at(l).norm() == 0.0);
            CHECK(st.at(l).K.norm() == 0.0);
        }
        else
        {
            CHECK(ch.at(l).norm() > 0.0);
            CHECK(st.at(l).K.norm() > 0.0);
        }
    }
}
