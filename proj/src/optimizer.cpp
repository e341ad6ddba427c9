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

#include "irsfd/optimizer.hpp"

#include "irsfd/irs.hpp"

#include <cmath>
#include <limits>

namespace irsfd
{

std::string SchemeSpec::name() const
{
    std::string n = duplex == Duplex::full ? "FD" : "HD";
    n += irs ? "-IRS" : "-No-IRS";
    n += robust ? "-RB" : "-Non-RB";
    return n;
}

SchemeSpec SchemeSpec::parse(const std::string &name)
{
    for (const auto &s : all_schemes())
        if (s.name() == name)
            return s;
    throw ConfigError("unknown scheme: " + name);
}

std::vector<SchemeSpec> all_schemes()
{
    std::vector<SchemeSpec> out;
    for (Duplex d : {Duplex::full, Duplex::half})
        for (bool irs : {true, false})
            for (bool robust : {true, false})
                out.push_back({d, irs, robust});
    return out;
}

namespace
{

ComplexMatrix dominant_precoder(const ComplexMatrix &h, int streams, double budget)
{
    const Svd d = svd(h);
    const Eigen::Index cols = h.cols();
    ComplexMatrix p = ComplexMatrix::Zero(cols, streams);
    const Eigen::Index avail = std::min<Eigen::Index>(streams, d.right.cols());
    p.leftCols(avail) = d.right.leftCols(avail);
    // Fill any stream beyond the channel rank with unit basis vectors.
    for (Eigen::Index c = avail; c < streams; ++c)
        p(c % cols, c) = 1.0;
    return std::sqrt(budget / streams) * p;
}

ComplexMatrix rect_identity(int rows, int cols)
{
    return ComplexMatrix::Identity(rows, cols);
}

double relative_change(double prev, double next)
{
    const double denom = std::max(std::abs(next), std::numeric_limits<double>::min());
    return std::abs(next - prev) / denom;
}

double design_wsr(const ChannelEstimates &est, const ErrorStats &stats, const BeamformState &s,
                  const ScenarioConfig &cfg, const ActiveLinks &active)
{
    const Wsr w = ergodic_wsr(est, stats, s.U_k, s.V_j, s.theta, cfg);
    return (active.uplink ? w.ul : 0.0) + (active.downlink ? w.dl : 0.0);
}

} // namespace

BeamformState initialize_state(const ChannelEstimates &est, const ScenarioConfig &cfg, Rng &rng)
{
    BeamformState s;
    s.theta = random_phases(cfg.irs_elements(), rng);
    const EffectiveChannels h = effective_channels(est, s.theta);
    s.U_k = dominant_precoder(h.hbar_k, cfg.uk, cfg.alpha_k);
    s.V_j = dominant_precoder(h.hbar_j, cfg.vj, cfg.alpha_0);
    s.F_k = rect_identity(cfg.uk, cfg.N0);
    s.F_j = rect_identity(cfg.vj, cfg.Nj);
    s.W_k = ComplexMatrix::Identity(cfg.uk, cfg.uk);
    s.W_j = ComplexMatrix::Identity(cfg.vj, cfg.vj);
    return s;
}

OptimizationTrace optimize_state(const ChannelEstimates &est, const ErrorStats &stats, const ScenarioConfig &cfg,
                                 BeamformState init, bool update_irs, const ActiveLinks &active,
                                 const OptimizeOptions &opt)
{
    OptimizationTrace tr;
    tr.state = std::move(init);
    InnerOptions inner;
    inner.active = active;
    inner.power_tol = opt.power_tol;

    double prev = design_wsr(est, stats, tr.state, cfg, active);
    for (int it = 0; it < opt.max_outer; ++it)
    {
        inner_pass(est, stats, tr.state, cfg, inner);
        if (update_irs)
        {
            const IrsQuadratic q = build_irs_quadratic(est, stats, tr.state);
            tr.state.theta = mm_phase_update(q, tr.state.theta, opt.mm_eps, opt.mm_max_iter);
        }
        const double now = design_wsr(est, stats, tr.state, cfg, active);
        tr.wsr.push_back(now);
        tr.iterations = it + 1;
        const bool done = relative_change(prev, now) <= opt.eps;
        prev = now;
        if (done)
        {
            tr.converged = true;
            break;
        }
    }
    return tr;
}

OptimizationTrace optimize(const ChannelEstimates &est_in, const ErrorStats &stats_in, const ScenarioConfig &cfg,
                           const SchemeSpec &scheme, Rng &rng, const OptimizeOptions &opt)
{
    ChannelEstimates est = est_in;
    ErrorStats stats = stats_in;
    if (!scheme.irs)
    {
        remove_irs(est);
        remove_irs(stats);
    }
    const ErrorStats design = scheme.robust ? stats : ErrorStats::zeros(cfg);

    BeamformState init = initialize_state(est, cfg, rng);

    if (scheme.duplex == Duplex::full)
    {
        OptimizationTrace tr = optimize_state(est, design, cfg, std::move(init), scheme.irs, {true, true}, opt);
        tr.evaluated_wsr = ergodic_wsr(est, stats, tr.state.U_k, tr.state.V_j, tr.state.theta, cfg).total();
        return tr;
    }

    // Half duplex: each direction owns half of the time, free of SI and
    // UL-to-DL interference, with its own IRS configuration.
    BeamformState ul_init = init;
    ul_init.V_j.setZero();
    BeamformState dl_init = std::move(init);
    dl_init.U_k.setZero();

    OptimizationTrace ul = optimize_state(est, design, cfg, std::move(ul_init), scheme.irs, {true, false}, opt);
    OptimizationTrace dl = optimize_state(est, design, cfg, std::move(dl_init), scheme.irs, {false, true}, opt);

    OptimizationTrace tr;
    const std::size_t n = std::max(ul.wsr.size(), dl.wsr.size());
    for (std::size_t i = 0; i < n; ++i)
    {
        const double a = ul.wsr.empty() ? 0.0 : ul.wsr[std::min(i, ul.wsr.size() - 1)];
        const double b = dl.wsr.empty() ? 0.0 : dl.wsr[std::min(i, dl.wsr.size() - 1)];
        tr.wsr.push_back(0.5 * (a + b));
    }
    tr.iterations = std::max(ul.iterations, dl.iterations);
    tr.converged = ul.converged && dl.converged;
    const double r_ul = ergodic_wsr(est, stats, ul.state.U_k, ul.state.V_j, ul.state.theta, cfg).ul;
    const double r_dl = ergodic_wsr(est, stats, dl.state.U_k, dl.state.V_j, dl.state.theta, cfg).dl;
    tr.evaluated_wsr = 0.5 * (r_ul + r_dl);
    tr.state = std::move(ul.state);
    tr.downlink_state = std::move(dl.state);
    return tr;
}

StateEvaluation evaluate_state(const ChannelEstimates &est, const ErrorStats &stats, const BeamformState &state,
                               const ScenarioConfig &cfg, int n_samples, Rng &rng)
{
    if (n_samples < 1)
        throw DomainError("evaluate_state: n_samples must be at least 1");
    StateEvaluation ev;
    ev.theorem_wsr = ergodic_wsr(est, stats, state.U_k, state.V_j, state.theta, cfg).total();

    const ErrorSampler sampler(stats);
    double sum = 0.0;
    double sum_sq = 0.0;
    for (int i = 0; i < n_samples; ++i)
    {
        const ChannelSet h = sampler.sample_true(est, rng);
        const double r = instantaneous_wsr(h, state.U_k, state.V_j, state.theta, cfg).total();
        sum += r;
        sum_sq += r * r;
    }
    const double n = static_cast<double>(n_samples);
    ev.sampled_wsr = sum / n;
    if (n_samples > 1)
    {
        const double var = std::max(0.0, (sum_sq - n * ev.sampled_wsr * ev.sampled_wsr) / (n - 1.0));
        ev.stderr_wsr = std::sqrt(var / n);
    }
    return ev;
}

StateEvaluation evaluate_scheme(const ChannelEstimates &est_in, const ErrorStats &stats_in, const ScenarioConfig &cfg,
                                const SchemeSpec &scheme, const OptimizationTrace &trace, int n_samples, Rng &rng)
{
    ChannelEstimates est = est_in;
    ErrorStats stats = stats_in;
    if (!scheme.irs)
    {
        remove_irs(est);
        remove_irs(stats);
    }
    if (scheme.duplex == Duplex::full || !trace.downlink_state)
        return evaluate_state(est, stats, trace.state, cfg, n_samples, rng);

    // The uplink slot carries no downlink rate and vice versa.
    const StateEvaluation ul = evaluate_state(est, stats, trace.state, cfg, n_samples, rng);
    const StateEvaluation dl = evaluate_state(est, stats, *trace.downlink_state, cfg, n_samples, rng);
    StateEvaluation ev;
    ev.theorem_wsr = 0.5 * (ul.theorem_wsr + dl.theorem_wsr);
    ev.sampled_wsr = 0.5 * (ul.sampled_wsr + dl.sampled_wsr);
    ev.stderr_wsr = 0.5 * std::sqrt(ul.stderr_wsr * ul.stderr_wsr + dl.stderr_wsr * dl.stderr_wsr);
    return ev;
}

} // namespace irsfd
