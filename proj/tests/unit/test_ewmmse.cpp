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

#include "irsfd/ewmmse.hpp"
#include "irsfd/expectation.hpp"
#include "oracles.hpp"
#include "testing.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>

using namespace irsfd;
using namespace irsfd::testing;

namespace
{

// Identity-channel scenario: uk = Mk = N0, single link active.
ScenarioConfig identity_config()
{
    ScenarioConfig cfg = small_config();
    cfg.Mk = 2;
    cfg.N0 = 2;
    cfg.uk = 2;
    cfg.alpha_k = 2.0;
    return cfg;
}

ChannelEstimates identity_channels(const ScenarioConfig &cfg)
{
    ChannelSet ch = ChannelSet::zeros(cfg);
    ch.h_k = ComplexMatrix::Identity(cfg.N0, cfg.Mk);
    return ChannelEstimates(ch);
}

// Sum over eigenmodes of |Q^H rhs|^2 / (lambda + eig)^2.
double svd_form_power(const ComplexMatrix &X, const ComplexMatrix &rhs, double lambda)
{
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (X + X.adjoint()));
    const ComplexMatrix proj = es.eigenvectors().adjoint() * rhs;
    double p = 0.0;
    for (Eigen::Index i = 0; i < X.rows(); ++i)
        p += proj.row(i).squaredNorm() / std::pow(lambda + es.eigenvalues()(i), 2);
    return p;
}

// Textbook power-constrained solution by bisection on the eigenmode form.
ComplexMatrix textbook_beamformer(const ComplexMatrix &X, const ComplexMatrix &rhs, double budget)
{
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (X + X.adjoint()));
    const ComplexMatrix Q = es.eigenvectors();
    const RealVector d = es.eigenvalues();
    const ComplexMatrix proj = Q.adjoint() * rhs;
    auto power = [&](double l) {
        double p = 0.0;
        for (Eigen::Index i = 0; i < d.size(); ++i)
            p += proj.row(i).squaredNorm() / std::pow(l + d(i), 2);
        return p;
    };
    double lambda = 0.0;
    if (!(d.minCoeff() > 1e-12 * d.maxCoeff() && power(0.0) <= budget))
    {
        double lo = 0.0, hi = 1.0;
        while (power(hi) > budget)
            hi *= 2.0;
        for (int it = 0; it < 200; ++it)
        {
            const double mid = 0.5 * (lo + hi);
            (power(mid) > budget ? lo : hi) = mid;
        }
        lambda = hi;
    }
    ComplexMatrix inv = ComplexMatrix::Zero(d.size(), d.size());
    for (Eigen::Index i = 0; i < d.size(); ++i)
        inv(i, i) = 1.0 / (lambda + d(i));
    return Q * inv * proj;
}

// Perfect-CSI WMMSE pass written from the textbook formulas.
BeamformState textbook_pass(const ChannelSet &ch, const BeamformState &in, const ScenarioConfig &cfg)
{
    const EffectiveChannels e = effective_channels(ch, in.theta);
    const ComplexMatrix Ut = in.U_k * in.U_k.adjoint();
    const ComplexMatrix Vt = in.V_j * in.V_j.adjoint();
    const ComplexMatrix Rk = e.hbar_k * Ut * e.hbar_k.adjoint() + e.hbar_0 * Vt * e.hbar_0.adjoint() +
                             cfg.sigma0_sq * ComplexMatrix::Identity(cfg.N0, cfg.N0);
    const ComplexMatrix Rj = e.hbar_j * Vt * e.hbar_j.adjoint() + e.hbar_jk * Ut * e.hbar_jk.adjoint() +
                             cfg.sigmaj_sq * ComplexMatrix::Identity(cfg.Nj, cfg.Nj);
    BeamformState out = in;
    out.F_k = (e.hbar_k * in.U_k).adjoint() * Rk.inverse();
    out.F_j = (e.hbar_j * in.V_j).adjoint() * Rj.inverse();
    const ComplexMatrix Ek = ComplexMatrix::Identity(cfg.uk, cfg.uk) - out.F_k * e.hbar_k * in.U_k;
    const ComplexMatrix Ej = ComplexMatrix::Identity(cfg.vj, cfg.vj) - out.F_j * e.hbar_j * in.V_j;
    out.W_k = cfg.w_k / std::numbers::ln2 * Ek.inverse();
    out.W_j = cfg.w_j / std::numbers::ln2 * Ej.inverse();
    const ComplexMatrix Ak = out.F_k.adjoint() * out.W_k * out.F_k;
    const ComplexMatrix Aj = out.F_j.adjoint() * out.W_j * out.F_j;
    const ComplexMatrix Xk = e.hbar_k.adjoint() * Ak * e.hbar_k + e.hbar_jk.adjoint() * Aj * e.hbar_jk;
    const ComplexMatrix Xj = e.hbar_j.adjoint() * Aj * e.hbar_j + e.hbar_0.adjoint() * Ak * e.hbar_0;
    out.U_k = textbook_beamformer(Xk, e.hbar_k.adjoint() * out.F_k.adjoint() * out.W_k, cfg.alpha_k);
    out.V_j = textbook_beamformer(Xj, e.hbar_j.adjoint() * out.F_j.adjoint() * out.W_j, cfg.alpha_0);
    return out;
}

// Tr(W_k E_k) + Tr(W_j E_j) + lambda_k Tr(U U^H) + lambda_j Tr(V V^H) at fixed F, W.
double lagrangian(const ChannelEstimates &est, const ErrorStats &st, const BeamformState &s, const ScenarioConfig &cfg,
                  double lk, double lj)
{
    return ewmmse_objective(est, st, s, cfg) + lk * s.U_k.squaredNorm() + lj * s.V_j.squaredNorm();
}

} // namespace

TEST_CASE("combiners: scalar MMSE")
{
    const ScenarioConfig cfg = identity_config();
    const ChannelEstimates est = identity_channels(cfg);
    Rng rng(61);
    BeamformState s = random_state(cfg, rng);
    s.U_k = ComplexMatrix::Identity(2, 2);
    s.V_j.setZero();
    const Combiners c = update_combiners(est, ErrorStats::zeros(cfg), s, cfg);
    CHECK(rel_fro(c.F_k, ComplexMatrix::Identity(2, 2) / (1.0 + cfg.sigma0_sq)) < 1e-12);

    s.F_k = c.F_k;
    const ExpectedMse m = expected_mse(est, ErrorStats::zeros(cfg), s, cfg);
    CHECK(rel_fro(m.E_k, cfg.sigma0_sq / (1.0 + cfg.sigma0_sq) * ComplexMatrix::Identity(2, 2)) < 1e-12);

    s.U_k.setZero();
    CHECK(update_combiners(est, ErrorStats::zeros(cfg), s, cfg).F_k.norm() == 0.0);
}

TEST_CASE("combiners minimize the expected MSE trace")
{
    const ScenarioConfig cfg = small_config();
    Rng rng(62);
    for (int inst = 0; inst < 5; ++inst)
    {
        const ChannelEstimates est = random_estimates(cfg, rng);
        const ErrorStats st = random_stats(cfg, rng, 0.2);
        BeamformState s = random_state(cfg, rng);
        const Combiners c = update_combiners(est, st, s, cfg);
        s.F_k = c.F_k;
        s.F_j = c.F_j;
        const ExpectedMse best = expected_mse(est, st, s, cfg);
        for (int p = 0; p < 100; ++p)
        {
            BeamformState q = s;
            q.F_k += 1e-3 * sample_cn(cfg.uk, cfg.N0, 1.0, rng);
            q.F_j += 1e-3 * sample_cn(cfg.vj, cfg.Nj, 1.0, rng);
            const ExpectedMse m = expected_mse(est, st, q, cfg);
            CHECK(best.E_k.trace().real() <= m.E_k.trace().real());
            CHECK(best.E_j.trace().real() <= m.E_j.trace().real());
        }
    }
}

TEST_CASE("expected MSE closed forms")
{
    const ScenarioConfig cfg = small_config();
    Rng rng(63);
    const ChannelEstimates est = random_estimates(cfg, rng);
    const ErrorStats st = random_stats(cfg, rng, 0.2);
    BeamformState s = random_state(cfg, rng);
    s.F_k.setZero();
    s.F_j.setZero();
    s.U_k.setZero();
    const ExpectedMse m = expected_mse(est, st, s, cfg);
    CHECK(rel_fro(m.E_k, ComplexMatrix::Identity(cfg.uk, cfg.uk)) < 1e-14);
    CHECK(rel_fro(m.E_j, ComplexMatrix::Identity(cfg.vj, cfg.vj)) < 1e-14);
}

TEST_CASE("expected MSE matches sampling")
{
    const ScenarioConfig cfg = small_config();
    Rng rng(64);
    for (int inst = 0; inst < 3; ++inst)
    {
        const ChannelEstimates est = random_estimates(cfg, rng);
        const ErrorStats st = random_stats(cfg, rng, 0.2);
        const BeamformState s = random_state(cfg, rng);
        const ExpectedMse m = expected_mse(est, st, s, cfg);

        const ErrorSampler sampler(st);
        const ComplexMatrix Ut = s.U_k * s.U_k.adjoint();
        const ComplexMatrix Vt = s.V_j * s.V_j.adjoint();
        const ComplexMatrix Ik = ComplexMatrix::Identity(cfg.uk, cfg.uk);
        const ComplexMatrix Ij = ComplexMatrix::Identity(cfg.vj, cfg.vj);
        ComplexMatrix ek = ComplexMatrix::Zero(cfg.uk, cfg.uk);
        ComplexMatrix ej = ComplexMatrix::Zero(cfg.vj, cfg.vj);
        const int n = 100000;
        for (int t = 0; t < n; ++t)
        {
            const EffectiveChannels e = effective_channels(sampler.sample_true(est, rng), s.theta);
            // Symbol and noise expectation in closed form, channel errors sampled.
            const ComplexMatrix dk = s.F_k * e.hbar_k * s.U_k - Ik;
            const ComplexMatrix dj = s.F_j * e.hbar_j * s.V_j - Ij;
            ek += dk * dk.adjoint() + s.F_k * e.hbar_0 * Vt * e.hbar_0.adjoint() * s.F_k.adjoint() +
                  cfg.sigma0_sq * s.F_k * s.F_k.adjoint();
            ej += dj * dj.adjoint() + s.F_j * e.hbar_jk * Ut * e.hbar_jk.adjoint() * s.F_j.adjoint() +
                  cfg.sigmaj_sq * s.F_j * s.F_j.adjoint();
        }
        ek /= static_cast<double>(n);
        ej /= static_cast<double>(n);
        CHECK(rel_fro(m.E_k, ek) < 0.02);
        CHECK(rel_fro(m.E_j, ej) < 0.02);
        CHECK(hermitian_defect(m.E_k) <= 1e-10);
    }
}

TEST_CASE("weights")
{
    ScenarioConfig cfg = small_config();
    cfg.w_k = std::numbers::ln2;
    cfg.w_j = std::numbers::ln2;
    const ComplexMatrix I2 = ComplexMatrix::Identity(2, 2);
    Weights w = update_weights(I2, I2, cfg);
    CHECK(rel_fro(w.W_k, I2) < 1e-14);
    w = update_weights(2.0 * I2, 2.0 * I2, cfg);
    CHECK(rel_fro(w.W_j, 0.5 * I2) < 1e-14);

    cfg = small_config();
    Rng rng(65);
    for (int t = 0; t < 20; ++t)
    {
        const ComplexMatrix ek = random_hpd(cfg.uk, rng);
        const ComplexMatrix ej = random_hpd(cfg.vj, rng);
        w = update_weights(ek, ej, cfg);
        CHECK(rel_fro(w.W_k * ek, cfg.w_k / std::numbers::ln2 * I2) < 1e-8);
        CHECK(rel_fro(w.W_j * ej, cfg.w_j / std::numbers::ln2 * I2) < 1e-8);
    }
}

TEST_CASE("X matrices closed forms")
{
    const ScenarioConfig cfg = small_config();
    Rng rng(66);
    ChannelSet ch = random_estimates(cfg, rng);
    remove_irs(ch);
    ch.h_jk.setZero();
    ch.h_0.setZero();
    const ChannelEstimates est(ch);
    BeamformState s = random_state(cfg, rng);
    XMatrices x = build_X_matrices(est, ErrorStats::zeros(cfg), s);
    CHECK(rel_fro(x.X_k, ch.h_k.adjoint() * s.F_k.adjoint() * s.W_k * s.F_k * ch.h_k) < 1e-12);
    CHECK(rel_fro(x.X_j, ch.h_j.adjoint() * s.F_j.adjoint() * s.W_j * s.F_j * ch.h_j) < 1e-12);

    const ChannelEstimates full = random_estimates(cfg, rng);
    s.W_k.setZero();
    s.W_j.setZero();
    x = build_X_matrices(full, random_stats(cfg, rng, 0.3), s);
    CHECK(x.X_k.norm() == 0.0);
    CHECK(x.X_j.norm() == 0.0);
}

TEST_CASE("X matrices are Hermitian PSD")
{
    const ScenarioConfig cfg = small_config();
    Rng rng(67);
    for (int inst = 0; inst < 10; ++inst)
    {
        const ChannelEstimates est = random_estimates(cfg, rng);
        const ErrorStats st = random_stats(cfg, rng, 0.3);
        const BeamformState s = random_state(cfg, rng);
        const XMatrices x = build_X_matrices(est, st, s);
        CHECK(hermitian_defect(x.X_k) <= 1e-10);
        CHECK(min_eigenvalue_hermitian(x.X_k) >= -1e-9 * std::max(1.0, x.X_k.norm()));
        CHECK(min_eigenvalue_hermitian(x.X_j) >= -1e-9 * std::max(1.0, x.X_j.norm()));
    }
}

TEST_CASE("beamformer update is stationary for the Lagrangian")
{
    const ScenarioConfig cfg = small_config();
    Rng rng(68);
    for (int inst = 0; inst < 10; ++inst)
    {
        const ChannelEstimates est = random_estimates(cfg, rng);
        const ErrorStats st = random_stats(cfg, rng, 0.2);
        BeamformState s = random_state(cfg, rng);
        const BeamformState start = s;
        const XMatrices x = build_X_matrices(est, st, s);
        const PoweredBeamformer bu = update_beamformer_with_power(x.X_k, uplink_rhs(est, s), cfg.alpha_k, 1e-12);
        const PoweredBeamformer bv = update_beamformer_with_power(x.X_j, downlink_rhs(est, s), cfg.alpha_0, 1e-12);
        s.U_k = bu.B;
        s.V_j = bv.B;
        const double h = 1e-5;
        for (int dir = 0; dir < 4; ++dir)
        {
            BeamformState p = s, m = s, p0 = start, m0 = start;
            const ComplexMatrix du = sample_cn(cfg.Mk, cfg.uk, 1.0, rng);
            const ComplexMatrix dv = sample_cn(cfg.M0, cfg.vj, 1.0, rng);
            p.U_k += h * du;
            m.U_k -= h * du;
            p.V_j += h * dv;
            m.V_j -= h * dv;
            p0.U_k += h * du;
            m0.U_k -= h * du;
            p0.V_j += h * dv;
            m0.V_j -= h * dv;
            const double g = (lagrangian(est, st, p, cfg, bu.lambda, bv.lambda) -
                              lagrangian(est, st, m, cfg, bu.lambda, bv.lambda)) /
                             (2.0 * h);
            const double g0 = (lagrangian(est, st, p0, cfg, bu.lambda, bv.lambda) -
                               lagrangian(est, st, m0, cfg, bu.lambda, bv.lambda)) /
                              (2.0 * h);
            CHECK(std::abs(g) <= 1e-6 * std::max(std::abs(g0), 1.0));
        }
    }
}

TEST_CASE("power bisection")
{
    for (int n : {1, 3, 5})
    {
        const ComplexMatrix I = ComplexMatrix::Identity(n, n);
        PoweredBeamformer b = update_beamformer_with_power(I, I, static_cast<double>(n));
        CHECK(b.lambda == 0.0);
        CHECK(rel_fro(b.B, I) < 1e-14);

        b = update_beamformer_with_power(ComplexMatrix::Zero(n, n), I, 1.0);
        CHECK(b.lambda == doctest::Approx(std::sqrt(static_cast<double>(n))).epsilon(1e-6));
        CHECK(b.B.squaredNorm() <= 1.0);
        CHECK(b.B.squaredNorm() >= 1.0 - 1e-6);
    }

    Rng rng(69);
    for (int inst = 0; inst < 10; ++inst)
    {
        const ComplexMatrix g = sample_cn(6, 3, 1.0, rng);
        const ComplexMatrix X = g * g.adjoint();
        const ComplexMatrix rhs = sample_cn(6, 2, 1.0, rng);
        const double budget = 0.5;
        const PoweredBeamformer b = update_beamformer_with_power(X, rhs, budget);
        CHECK(b.lambda > 0.0);
        CHECK(b.B.squaredNorm() <= budget);
        CHECK(std::abs(b.B.squaredNorm() - budget) <= 1e-6 * budget);
        CHECK(beamformer_power(X, rhs, b.lambda) == doctest::Approx(b.B.squaredNorm()).epsilon(1e-12));

        double prev = beamformer_power(X, rhs, 1e-3);
        for (int k = 1; k <= 20; ++k)
        {
            const double lam = 1e-3 * std::pow(1.8, k);
            const double p = beamformer_power(X, rhs, lam);
            CHECK(p < prev);
            CHECK(std::abs(svd_form_power(X, rhs, lam) - p) <= 1e-8 * p);
            prev = p;
        }
    }
}

TEST_CASE("inner pass increases the ergodic WSR and respects power")
{
    const ScenarioConfig cfg = small_config();
    Rng rng(70);
    for (int inst = 0; inst < 10; ++inst)
    {
        const ChannelEstimates est = random_estimates(cfg, rng);
        const ErrorStats st = random_stats(cfg, rng, 0.1);
        BeamformState s = random_state(cfg, rng);
        double prev = ergodic_wsr(est, st, s.U_k, s.V_j, s.theta, cfg).total();
        for (int pass = 0; pass < 15; ++pass)
        {
            inner_pass(est, st, s, cfg);
            const double next = ergodic_wsr(est, st, s.U_k, s.V_j, s.theta, cfg).total();
            CHECK(next >= prev - 1e-8);
            CHECK(s.U_k.squaredNorm() <= cfg.alpha_k * (1.0 + 1e-6));
            CHECK(s.V_j.squaredNorm() <= cfg.alpha_0 * (1.0 + 1e-6));
            CHECK(hermitian_defect(s.W_k) <= 1e-10);
            CHECK(min_eigenvalue_hermitian(s.W_k) > 0.0);
            CHECK(min_eigenvalue_hermitian(s.W_j) > 0.0);
            prev = next;
        }
    }
}

TEST_CASE("with perfect CSI an inner pass equals textbook WMMSE")
{
    const ScenarioConfig cfg = small_config();
    Rng rng(71);
    for (int inst = 0; inst < 10; ++inst)
    {
        const ChannelEstimates est = random_estimates(cfg, rng);
        BeamformState s = random_state(cfg, rng);
        const BeamformState ref = textbook_pass(est, s, cfg);
        inner_pass(est, ErrorStats::zeros(cfg), s, cfg);
        CHECK(max_abs(s.F_k - ref.F_k) <= 1e-8);
        CHECK(max_abs(s.F_j - ref.F_j) <= 1e-8);
        CHECK(max_abs(s.W_k - ref.W_k) <= 1e-8 * std::max(1.0, max_abs(ref.W_k)));
        CHECK(max_abs(s.W_j - ref.W_j) <= 1e-8 * std::max(1.0, max_abs(ref.W_j)));
        CHECK(max_abs(s.U_k - ref.U_k) <= 1e-8);
        CHECK(max_abs(s.V_j - ref.V_j) <= 1e-8);
    }
}

TEST_CASE("inactive links keep their beamformer")
{
    const ScenarioConfig cfg = small_config();
    Rng rng(72);
    const ChannelEstimates est = random_estimates(cfg, rng);
    BeamformState s = random_state(cfg, rng);
    s.V_j.setZero();
    InnerOptions opt;
    opt.active = {true, false};
    inner_pass(est, ErrorStats::zeros(cfg), s, cfg, opt);
    CHECK(s.V_j.norm() == 0.0);
    CHECK(s.U_k.norm() > 0.0);
}

TEST_CASE("state dimension checks")
{
    const ScenarioConfig cfg = small_config();
    Rng rng(73);
    BeamformState s = random_state(cfg, rng);
    CHECK_NOTHROW(check_dims(s, cfg));
    s.theta = ComplexVector::Ones(3);
    CHECK_THROWS_AS(check_dims(s, cfg), DimensionError);
}
