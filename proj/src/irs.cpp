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

#include "irsfd/irs.hpp"

#include "irsfd/expectation.hpp"

#include <cmath>
#include <limits>

namespace irsfd
{

IrsQuadratic build_irs_quadratic(const ChannelEstimates &est, const ErrorStats &stats, const BeamformState &state)
{
    const ComplexMatrix a_k = symmetrize(state.F_k.adjoint() * state.W_k * state.F_k);
    const ComplexMatrix a_j = symmetrize(state.F_j.adjoint() * state.W_j * state.F_j);
    const ComplexMatrix ut = state.U_k * state.U_k.adjoint();
    const ComplexMatrix vt = state.V_j * state.V_j.adjoint();

    const auto &s0t = stats.at(Link::zerotheta);
    const auto &sjt = stats.at(Link::jtheta);
    const auto &stk = stats.at(Link::thetak);
    const auto &st0 = stats.at(Link::theta0);

    IrsQuadratic q;
    q.Z = symmetrize(expect_HXH(est.h_0theta, a_k, s0t.J, s0t.K, Side::inner) +
                     expect_HXH(est.h_jtheta, a_j, sjt.J, sjt.K, Side::inner));
    q.T = symmetrize(expect_HXH(est.h_thetak, ut, stk.J, stk.K, Side::outer) +
                     expect_HXH(est.h_theta0, vt, st0.J, st0.K, Side::outer));
    q.Sigma = symmetrize(hadamard(q.Z, q.T.transpose()));

    // Cross terms between direct and reflected paths, minus the signal term.
    const ComplexMatrix wf_k = state.W_k * state.F_k;
    const ComplexMatrix wf_j = state.W_j * state.F_j;
    const ComplexMatrix g_k =
        est.h_0theta.adjoint() * state.F_k.adjoint() *
        (wf_k * est.h_k * ut * est.h_thetak.adjoint() + wf_k * est.h_0 * vt * est.h_theta0.adjoint() -
         state.W_k * state.U_k.adjoint() * est.h_thetak.adjoint());
    const ComplexMatrix g_j =
        est.h_jtheta.adjoint() * state.F_j.adjoint() *
        (wf_j * est.h_j * vt * est.h_theta0.adjoint() + wf_j * est.h_jk * ut * est.h_thetak.adjoint() -
         state.W_j * state.V_j.adjoint() * est.h_theta0.adjoint());
    q.S = (g_k + g_j).adjoint();
    q.s = q.S.diagonal();
    q.lambda_max = q.Sigma.size() ? max_eigenvalue_hermitian(q.Sigma) : 0.0;
    return q;
}

IrsQuadratic make_irs_quadratic(const ComplexMatrix &Sigma, const ComplexVector &s)
{
    if (Sigma.rows() != Sigma.cols() || Sigma.rows() != s.size())
        throw DimensionError("make_irs_quadratic: Sigma " + dims(Sigma) + " with s of length " +
                             std::to_string(s.size()));
    IrsQuadratic q;
    q.Sigma = symmetrize(Sigma);
    q.Z = q.Sigma;
    q.T = ComplexMatrix::Ones(Sigma.rows(), Sigma.cols());
    q.S = s.asDiagonal();
    q.s = s;
    q.lambda_max = q.Sigma.size() ? max_eigenvalue_hermitian(q.Sigma) : 0.0;
    return q;
}

double irs_objective(const IrsQuadratic &q, const ComplexVector &theta)
{
    if (theta.size() != q.s.size())
        throw DimensionError("irs_objective: theta length " + std::to_string(theta.size()));
    const double quad = theta.dot(q.Sigma * theta).real();
    const double lin = 2.0 * (q.s.transpose() * theta)(0).real();
    return quad + lin;
}

double irs_surrogate(const IrsQuadratic &q, const ComplexVector &theta, const ComplexVector &theta_n)
{
    const double n = static_cast<double>(theta.size());
    ComplexMatrix shift = -q.Sigma;
    shift.diagonal().array() += q.lambda_max;
    const ComplexVector st = shift * theta_n;
    return q.lambda_max * n - 2.0 * theta.dot(st).real() + theta_n.dot(st).real() +
           2.0 * (q.s.transpose() * theta)(0).real();
}

MmTrace mm_phase_update_traced(const IrsQuadratic &q, const ComplexVector &theta0, double eps, int max_iter)
{
    if (theta0.size() != q.s.size())
        throw DimensionError("mm_phase_update: theta0 length " + std::to_string(theta0.size()) + ", expected " +
                             std::to_string(q.s.size()));
    MmTrace tr;
    tr.theta = theta0;
    double f = irs_objective(q, tr.theta);
    tr.objective.push_back(f);

    ComplexMatrix shift = -q.Sigma;
    shift.diagonal().array() += q.lambda_max;
    const ComplexVector s_conj = q.s.conjugate();
    const double scale = std::max(q.lambda_max * static_cast<double>(q.s.size()), q.s.norm());

    for (int it = 0; it < max_iter; ++it)
    {
        const ComplexVector qn = shift * tr.theta - s_conj;
        ComplexVector next = tr.theta;
        for (Eigen::Index i = 0; i < qn.size(); ++i)
            if (qn(i) != Complex(0.0))
                next(i) = std::polar(1.0, std::arg(qn(i)));
        const double f_next = irs_objective(q, next);
        tr.theta = std::move(next);
        tr.objective.push_back(f_next);
        tr.iterations = it + 1;

        const double denom = std::max({std::abs(f_next), 1e-12 * scale, std::numeric_limits<double>::min()});
        const bool done = std::abs(f_next - f) / denom <= eps;
        f = f_next;
        if (done)
        {
            tr.converged = true;
            break;
        }
    }
    return tr;
}

ComplexVector mm_phase_update(const IrsQuadratic &q, const ComplexVector &theta0, double eps, int max_iter)
{
    return mm_phase_update_traced(q, theta0, eps, max_iter).theta;
}

} // namespace irsfd
