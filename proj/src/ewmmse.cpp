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

#include "irsfd/ewmmse.hpp"

#include "irsfd/expectation.hpp"

#include <cmath>
#include <numbers>

namespace irsfd
{

namespace
{

void expect_shape(const ComplexMatrix &m, Eigen::Index r, Eigen::Index c, const char *name)
{
    if (m.rows() != r || m.cols() != c)
        throw DimensionError(std::string(name) + ": expected " + std::to_string(r) + "x" + std::to_string(c) +
                             ", got " + dims(m));
}

ComplexMatrix rx_cov_uplink(const ExpectedCov &e, double sigma_sq)
{
    ComplexMatrix r = e.Q_k + e.T_0;
    r.diagonal().array() += sigma_sq;
    return symmetrize(r);
}

ComplexMatrix rx_cov_downlink(const ExpectedCov &e, double sigma_sq)
{
    ComplexMatrix r = e.T_j + e.Q_jk;
    r.diagonal().array() += sigma_sq;
    return symmetrize(r);
}

// I - F H U - (F H U)^H + F R F^H
ComplexMatrix mse_matrix(const ComplexMatrix &F, const ComplexMatrix &HU, const ComplexMatrix &R)
{
    const ComplexMatrix fhu = F * HU;
    ComplexMatrix e = F * R * F.adjoint() - fhu - fhu.adjoint();
    e.diagonal().array() += 1.0;
    return symmetrize(e);
}

} // namespace

void check_dims(const BeamformState &s, const ScenarioConfig &cfg)
{
    expect_shape(s.U_k, cfg.Mk, cfg.uk, "U_k");
    expect_shape(s.V_j, cfg.M0, cfg.vj, "V_j");
    expect_shape(s.F_k, cfg.uk, cfg.N0, "F_k");
    expect_shape(s.F_j, cfg.vj, cfg.Nj, "F_j");
    expect_shape(s.W_k, cfg.uk, cfg.uk, "W_k");
    expect_shape(s.W_j, cfg.vj, cfg.vj, "W_j");
    if (s.theta.size() != cfg.irs_elements())
        throw DimensionError("theta: expected length " + std::to_string(cfg.irs_elements()) + ", got " +
                             std::to_string(s.theta.size()));
}

Combiners update_combiners(const ChannelEstimates &est, const ErrorStats &stats, const BeamformState &state,
                           const ScenarioConfig &cfg)
{
    const ExpectedCov e = build_expected_cov(est, stats, state.U_k, state.V_j, state.theta);
    const EffectiveChannels h = effective_channels(est, state.theta);
    Combiners c;
    c.F_k = solve_hpd(rx_cov_uplink(e, cfg.sigma0_sq), h.hbar_k * state.U_k).adjoint();
    c.F_j = solve_hpd(rx_cov_downlink(e, cfg.sigmaj_sq), h.hbar_j * state.V_j).adjoint();
    return c;
}

ExpectedMse expected_mse(const ChannelEstimates &est, const ErrorStats &stats, const BeamformState &state,
                         const ScenarioConfig &cfg)
{
    const ExpectedCov e = build_expected_cov(est, stats, state.U_k, state.V_j, state.theta);
    const EffectiveChannels h = effective_channels(est, state.theta);
    ExpectedMse m;
    m.E_k = mse_matrix(state.F_k, h.hbar_k * state.U_k, rx_cov_uplink(e, cfg.sigma0_sq));
    m.E_j = mse_matrix(state.F_j, h.hbar_j * state.V_j, rx_cov_downlink(e, cfg.sigmaj_sq));
    return m;
}

Weights update_weights(const ComplexMatrix &E_k, const ComplexMatrix &E_j, const ScenarioConfig &cfg)
{
    const double ck = cfg.w_k / std::numbers::ln2;
    const double cj = cfg.w_j / std::numbers::ln2;
    Weights w;
    w.W_k = symmetrize(solve_hpd_regularized(E_k, ck * ComplexMatrix::Identity(E_k.rows(), E_k.cols())));
    w.W_j = symmetrize(solve_hpd_regularized(E_j, cj * ComplexMatrix::Identity(E_j.rows(), E_j.cols())));
    return w;
}

XMatrices build_X_matrices(const ChannelEstimates &est, const ErrorStats &stats, const BeamformState &state)
{
    const ComplexMatrix a_k = symmetrize(state.F_k.adjoint() * state.W_k * state.F_k);
    const ComplexMatrix a_j = symmetrize(state.F_j.adjoint() * state.W_j * state.F_j);
    XMatrices x;
    x.X_k = symmetrize(expect_cascade_inner(est, stats, Cascade::k, state.theta, a_k) +
                       expect_cascade_inner(est, stats, Cascade::jk, state.theta, a_j));
    x.X_j = symmetrize(expect_cascade_inner(est, stats, Cascade::j, state.theta, a_j) +
                       expect_cascade_inner(est, stats, Cascade::zero, state.theta, a_k));
    return x;
}

ComplexMatrix uplink_rhs(const ChannelEstimates &est, const BeamformState &state)
{
    const EffectiveChannels h = effective_channels(est, state.theta);
    return h.hbar_k.adjoint() * state.F_k.adjoint() * state.W_k;
}

ComplexMatrix downlink_rhs(const ChannelEstimates &est, const BeamformState &state)
{
    const EffectiveChannels h = effective_channels(est, state.theta);
    return h.hbar_j.adjoint() * state.F_j.adjoint() * state.W_j;
}

namespace
{

ComplexMatrix shifted_solve(const ComplexMatrix &X, const ComplexMatrix &rhs, double lambda)
{
    ComplexMatrix a = symmetrize(X);
    a.diagonal().array() += lambda;
    if (lambda > 0.0)
    {
        Eigen::LLT<ComplexMatrix> llt(a);
        if (llt.info() == Eigen::Success)
            return llt.solve(rhs);
    }
    return solve_hpd_regularized(a, rhs);
}

} // namespace

double beamformer_power(const ComplexMatrix &X, const ComplexMatrix &rhs, double lambda)
{
    return shifted_solve(X, rhs, lambda).squaredNorm();
}

PoweredBeamformer update_beamformer_with_power(const ComplexMatrix &X, const ComplexMatrix &rhs, double budget,
                                               double rel_tol)
{
    if (X.rows() != X.cols() || X.rows() != rhs.rows())
        throw DimensionError("update_beamformer_with_power: X " + dims(X) + " with rhs " + dims(rhs));
    if (!(budget > 0.0))
        throw DomainError("update_beamformer_with_power: budget must be positive");

    PoweredBeamformer out;
    if (rhs.squaredNorm() == 0.0)
    {
        out.B = ComplexMatrix::Zero(rhs.rows(), rhs.cols());
        return out;
    }

    // lambda = 0 is admissible only when X is nonsingular enough for a solve.
    bool zero_ok = true;
    ComplexMatrix b0;
    try
    {
        b0 = shifted_solve(X, rhs, 0.0);
    }
    catch (const SingularityError &)
    {
        zero_ok = false;
    }
    if (zero_ok && b0.allFinite() && b0.squaredNorm() <= budget)
    {
        out.B = std::move(b0);
        return out;
    }

    double lo = 0.0;
    double hi = 1.0;
    ComplexMatrix b_hi = shifted_solve(X, rhs, hi);
    while (b_hi.squaredNorm() >= budget)
    {
        lo = hi;
        hi *= 2.0;
        b_hi = shifted_solve(X, rhs, hi);
    }
    while (std::abs(b_hi.squaredNorm() - budget) > rel_tol * budget && hi - lo > 1e-12 * std::max(1.0, hi))
    {
        const double mid = 0.5 * (lo + hi);
        ComplexMatrix b = shifted_solve(X, rhs, mid);
        if (b.squaredNorm() > budget)
            lo = mid;
        else
        {
            hi = mid;
            b_hi = std::move(b);
        }
    }
    out.B = std::move(b_hi);
    out.lambda = hi;
    return out;
}

double ewmmse_objective(const ChannelEstimates &est, const ErrorStats &stats, const BeamformState &state,
                        const ScenarioConfig &cfg)
{
    const ExpectedMse m = expected_mse(est, stats, state, cfg);
    return (state.W_k * m.E_k).trace().real() + (state.W_j * m.E_j).trace().real();
}

void inner_pass(const ChannelEstimates &est, const ErrorStats &stats, BeamformState &state, const ScenarioConfig &cfg,
                const InnerOptions &opt)
{
    const Combiners c = update_combiners(est, stats, state, cfg);
    state.F_k = c.F_k;
    state.F_j = c.F_j;

    const ExpectedMse m = expected_mse(est, stats, state, cfg);
    const Weights w = update_weights(m.E_k, m.E_j, cfg);
    state.W_k = w.W_k;
    state.W_j = w.W_j;

    // U_k and V_j decouple once F and W are fixed.
    const XMatrices x = build_X_matrices(est, stats, state);
    if (opt.active.uplink)
        state.U_k = update_beamformer_with_power(x.X_k, uplink_rhs(est, state), cfg.alpha_k, opt.power_tol).B;
    if (opt.active.downlink)
        state.V_j = update_beamformer_with_power(x.X_j, downlink_rhs(est, state), cfg.alpha_0, opt.power_tol).B;
}

} // namespace irsfd
