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

#include "irsfd/expectation.hpp"

namespace irsfd
{

ComplexMatrix expect_HXH(const ComplexMatrix &hhat, const ComplexMatrix &x, const ComplexMatrix &J,
                         const ComplexMatrix &K, Side side)
{
    const Eigen::Index rx = hhat.rows();
    const Eigen::Index tx = hhat.cols();
    if (J.rows() != tx || J.cols() != tx || K.rows() != rx || K.cols() != rx)
        throw DimensionError("expect_HXH: H " + dims(hhat) + " with J " + dims(J) + " and K " + dims(K));
    if (side == Side::outer)
    {
        if (x.rows() != tx || x.cols() != tx)
            throw DimensionError("expect_HXH: X " + dims(x) + " does not match H " + dims(hhat));
        // Tr(X J^T) = sum_ab X(a,b) J(a,b)
        const Complex tr = x.cwiseProduct(J).sum();
        return hhat * x * hhat.adjoint() + tr * K;
    }
    if (x.rows() != rx || x.cols() != rx)
        throw DimensionError("expect_HXH: X " + dims(x) + " does not match H^H " + dims(hhat));
    // Tr(K X) = sum_ab K(a,b) X(b,a)
    const Complex tr = K.cwiseProduct(x.transpose()).sum();
    return hhat.adjoint() * x * hhat + tr * J.transpose();
}

namespace
{

struct CascadeLinks
{
    Link d;
    Link b;
    Link c;
};

CascadeLinks links_of(Cascade c)
{
    switch (c)
    {
    case Cascade::k:
        return {Link::k, Link::zerotheta, Link::thetak};
    case Cascade::zero:
        return {Link::zero, Link::zerotheta, Link::theta0};
    case Cascade::j:
        return {Link::j, Link::jtheta, Link::theta0};
    case Cascade::jk:
        return {Link::jk, Link::jtheta, Link::thetak};
    }
    throw std::logic_error("bad cascade");
}

} // namespace

namespace
{

const ComplexMatrix &cascade_direct(const ChannelEstimates &est, Cascade c)
{
    return est.at(links_of(c).d);
}

ComplexMatrix cascade_hbar(const ChannelEstimates &est, Cascade c, const ComplexVector &theta)
{
    const auto l = links_of(c);
    return est.at(l.d) + est.at(l.b) * theta.asDiagonal() * est.at(l.c);
}

} // namespace

ComplexMatrix cascade_error_outer(const ChannelEstimates &est, const ErrorStats &stats, Cascade c,
                                  const ComplexVector &theta, const ComplexMatrix &x)
{
    const auto l = links_of(c);
    const ComplexMatrix &B = est.at(l.b);
    const ComplexMatrix &C = est.at(l.c);
    if (theta.size() != B.cols())
        throw DimensionError("expect_cascade_outer: theta length " + std::to_string(theta.size()));
    const ComplexMatrix &D = cascade_direct(est, c);
    if (x.rows() != D.cols() || x.cols() != D.cols())
        throw DimensionError("expect_cascade_outer: X " + dims(x) + " does not match " + dims(D));

    const KroneckerFactors &fd = stats.at(l.d);
    const KroneckerFactors &fb = stats.at(l.b);
    const KroneckerFactors &fc = stats.at(l.c);
    const Complex tr_d = x.cwiseProduct(fd.J).sum();
    const Complex tr_c = x.cwiseProduct(fc.J).sum();

    ComplexMatrix out = tr_d * fd.K;
    const ComplexMatrix bt = B * theta.asDiagonal();
    out += tr_c * (bt * fc.K * bt.adjoint());
    // Y = Theta E[C X C^H] Theta^H
    ComplexMatrix y = C * x * C.adjoint() + tr_c * fc.K;
    y = theta.asDiagonal() * y * theta.conjugate().asDiagonal();
    out += y.cwiseProduct(fb.J).sum() * fb.K;
    return symmetrize(out);
}

ComplexMatrix expect_cascade_outer(const ChannelEstimates &est, const ErrorStats &stats, Cascade c,
                                   const ComplexVector &theta, const ComplexMatrix &x)
{
    const ComplexMatrix err = cascade_error_outer(est, stats, c, theta, x);
    const ComplexMatrix h = cascade_hbar(est, c, theta);
    return symmetrize(h * x * h.adjoint() + err);
}

ComplexMatrix expect_cascade_inner(const ChannelEstimates &est, const ErrorStats &stats, Cascade c,
                                   const ComplexVector &theta, const ComplexMatrix &a)
{
    const auto l = links_of(c);
    const ComplexMatrix &D = est.at(l.d);
    const ComplexMatrix &B = est.at(l.b);
    const ComplexMatrix &C = est.at(l.c);
    if (theta.size() != B.cols())
        throw DimensionError("expect_cascade_inner: theta length " + std::to_string(theta.size()));

    ComplexMatrix out = expect_HXH(D, a, stats.at(l.d).J, stats.at(l.d).K, Side::inner);
    const ComplexMatrix tc = theta.asDiagonal() * C;
    const ComplexMatrix cross = D.adjoint() * a * B * tc;
    out += cross + cross.adjoint();

    ComplexMatrix z = expect_HXH(B, a, stats.at(l.b).J, stats.at(l.b).K, Side::inner);
    z = theta.conjugate().asDiagonal() * z * theta.asDiagonal();
    out += expect_HXH(C, z, stats.at(l.c).J, stats.at(l.c).K, Side::inner);
    return symmetrize(out);
}

ExpectedCov build_expected_cov(const ChannelEstimates &est, const ErrorStats &stats, const ComplexMatrix &U_k,
                               const ComplexMatrix &V_j, const ComplexVector &theta)
{
    const ComplexMatrix ut = U_k * U_k.adjoint();
    const ComplexMatrix vt = V_j * V_j.adjoint();
    ExpectedCov e;
    e.Q_k = expect_cascade_outer(est, stats, Cascade::k, theta, ut);
    e.T_j = expect_cascade_outer(est, stats, Cascade::j, theta, vt);
    e.T_0 = expect_cascade_outer(est, stats, Cascade::zero, theta, vt);
    e.Q_jk = expect_cascade_outer(est, stats, Cascade::jk, theta, ut);
    return e;
}

TheoremCov build_theorem_cov(const ChannelEstimates &est, const ErrorStats &stats, const ComplexMatrix &U_k,
                             const ComplexMatrix &V_j, const ComplexVector &theta, double sigma0_sq, double sigmaj_sq)
{
    const ComplexMatrix ut = U_k * U_k.adjoint();
    const ComplexMatrix vt = V_j * V_j.adjoint();

    const EffectiveChannels h = effective_channels(est, theta);
    const ComplexMatrix i0 = h.hbar_0 * V_j;
    const ComplexMatrix ijk = h.hbar_jk * U_k;

    // Q_k - S_k S_k^H and T_j - S_j S_j^H are the error-induced parts alone.
    TheoremCov t;
    t.Sigma_kbar = i0 * i0.adjoint() + cascade_error_outer(est, stats, Cascade::zero, theta, vt) +
                   cascade_error_outer(est, stats, Cascade::k, theta, ut);
    t.Sigma_kbar.diagonal().array() += sigma0_sq;
    t.Sigma_kbar = symmetrize(t.Sigma_kbar);
    t.Sigma_jbar = ijk * ijk.adjoint() + cascade_error_outer(est, stats, Cascade::jk, theta, ut) +
                   cascade_error_outer(est, stats, Cascade::j, theta, vt);
    t.Sigma_jbar.diagonal().array() += sigmaj_sq;
    t.Sigma_jbar = symmetrize(t.Sigma_jbar);
    return t;
}

double rate_bits(const ComplexMatrix &G, const ComplexMatrix &Sigma)
{
    if (G.cols() == 0)
        return 0.0;
    ComplexMatrix m = G.adjoint() * solve_hpd(Sigma, G);
    m.diagonal().array() += 1.0;
    return log2det_hpd(m);
}

Wsr ergodic_wsr(const ChannelEstimates &est, const ErrorStats &stats, const ComplexMatrix &U_k,
                const ComplexMatrix &V_j, const ComplexVector &theta, const ScenarioConfig &cfg)
{
    const TheoremCov t = build_theorem_cov(est, stats, U_k, V_j, theta, cfg.sigma0_sq, cfg.sigmaj_sq);
    const EffectiveChannels h = effective_channels(est, theta);
    Wsr w;
    w.ul = cfg.w_k * rate_bits(h.hbar_k * U_k, t.Sigma_kbar);
    w.dl = cfg.w_j * rate_bits(h.hbar_j * V_j, t.Sigma_jbar);
    return w;
}

Wsr instantaneous_wsr(const ChannelSet &true_ch, const ComplexMatrix &U_k, const ComplexMatrix &V_j,
                      const ComplexVector &theta, const ScenarioConfig &cfg)
{
    const EffectiveChannels h = effective_channels(true_ch, theta);
    const ComplexMatrix i0 = h.hbar_0 * V_j;
    const ComplexMatrix ijk = h.hbar_jk * U_k;

    ComplexMatrix rk = i0 * i0.adjoint();
    rk.diagonal().array() += cfg.sigma0_sq;
    rk = symmetrize(rk);
    ComplexMatrix rj = ijk * ijk.adjoint();
    rj.diagonal().array() += cfg.sigmaj_sq;
    rj = symmetrize(rj);

    Wsr w;
    w.ul = cfg.w_k * rate_bits(h.hbar_k * U_k, rk);
    w.dl = cfg.w_j * rate_bits(h.hbar_j * V_j, rj);
    return w;
}

} // namespace irsfd
