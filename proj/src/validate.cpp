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
#include "irsfd/harness.hpp"
#include "irsfd/irs.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <ostream>
#include <sstream>

namespace irsfd
{

namespace
{

struct Check
{
    const char *name;
    std::function<std::string()> run; // empty string on pass, reason otherwise
};

std::string fail_if(bool bad, const std::string &why)
{
    return bad ? why : std::string();
}

ScenarioConfig small_config()
{
    ScenarioConfig cfg;
    cfg.M0 = 4;
    cfg.N0 = 4;
    cfg.Mk = 3;
    cfg.Nj = 3;
    cfg.R = 2;
    cfg.C = 3;
    cfg.uk = 2;
    cfg.vj = 2;
    apply_snr(cfg, 30.0);
    return cfg;
}

std::string check_svd()
{
    Rng rng(11);
    const ComplexMatrix a = sample_cn(5, 3, 1.0, rng);
    const Svd d = svd(a);
    const double err = (d.left * d.singulars.cast<Complex>().asDiagonal() * d.right.adjoint() - a).norm() / a.norm();
    return fail_if(err > 1e-8, "reconstruction residual " + std::to_string(err));
}

std::string check_solve()
{
    Rng rng(12);
    const ComplexMatrix g = sample_cn(6, 6, 1.0, rng);
    ComplexMatrix a = g * g.adjoint();
    a.diagonal().array() += 0.5;
    const ComplexMatrix b = sample_cn(6, 2, 1.0, rng);
    const double res = (a * solve_hpd(a, b) - b).norm() / b.norm();
    return fail_if(res > 1e-8, "residual " + std::to_string(res));
}

std::string check_kronecker_expectation()
{
    Rng rng(13);
    const ComplexMatrix h = sample_cn(3, 4, 1.0, rng);
    const ComplexMatrix gx = sample_cn(4, 4, 1.0, rng);
    const ComplexMatrix x = gx * gx.adjoint();
    const ComplexMatrix gj = sample_cn(4, 4, 0.5, rng);
    const ComplexMatrix J = gj * gj.adjoint();
    const ComplexMatrix K = 0.3 * ComplexMatrix::Identity(3, 3);
    const ComplexMatrix want = expect_HXH(h, x, J, K, Side::outer);

    const ComplexMatrix kr = sqrt_psd(K);
    const ComplexMatrix jr = sqrt_psd(J.transpose());
    ComplexMatrix acc = ComplexMatrix::Zero(3, 3);
    const int n = 20000;
    for (int i = 0; i < n; ++i)
    {
        const ComplexMatrix hh = h + kr * sample_cn(3, 4, 1.0, rng) * jr;
        acc += hh * x * hh.adjoint();
    }
    acc /= static_cast<double>(n);
    const double rel = (acc - want).norm() / want.norm();
    return fail_if(rel > 0.03, "relative error " + std::to_string(rel));
}

std::string check_mm_scalar()
{
    ComplexMatrix sigma(1, 1);
    sigma(0, 0) = 2.0;
    ComplexVector s(1);
    s(0) = 1.0;
    const IrsQuadratic q = make_irs_quadratic(sigma, s);
    ComplexVector t0(1);
    t0(0) = 1.0;
    const MmTrace tr = mm_phase_update_traced(q, t0);
    const bool ok = std::abs(tr.theta(0) - Complex(-1.0)) < 1e-12 && std::abs(tr.objective.front() - 4.0) < 1e-12 &&
                    std::abs(tr.objective.back()) < 1e-12;
    return fail_if(!ok, "scalar MM did not reach theta = -1 with objective 0");
}

std::string check_bisection()
{
    const int n = 4;
    const auto r = update_beamformer_with_power(ComplexMatrix::Zero(n, n), ComplexMatrix::Identity(n, n), 1.0);
    return fail_if(std::abs(r.lambda - 2.0) > 1e-5, "lambda " + std::to_string(r.lambda) + ", expected 2");
}

std::string check_weights()
{
    Rng rng(14);
    const ComplexMatrix g = sample_cn(3, 3, 1.0, rng);
    ComplexMatrix e = g * g.adjoint();
    e.diagonal().array() += 0.2;
    ScenarioConfig cfg;
    cfg.w_k = 1.7;
    const Weights w = update_weights(e, e, cfg);
    const ComplexMatrix want = (cfg.w_k / std::numbers::ln2) * ComplexMatrix::Identity(3, 3);
    const double err = (w.W_k * e - want).norm();
    return fail_if(err > 1e-8, "W E deviates from (w/ln2) I by " + std::to_string(err));
}

std::string check_monotone()
{
    ScenarioConfig cfg = small_config();
    cfg.rho = 0.5;
    Rng rng(15);
    const TrialDraw d = draw_trial(cfg, rng);
    const ErrorStats stats = trial_error_stats(cfg, d.gains);
    Rng init(16);
    OptimizeOptions opt;
    opt.max_outer = 30;
    const OptimizationTrace tr = optimize(d.estimates, stats, cfg, SchemeSpec{}, init, opt);
    for (std::size_t i = 1; i < tr.wsr.size(); ++i)
        if (tr.wsr[i] < tr.wsr[i - 1] - 1e-8)
            return "WSR decreased at iteration " + std::to_string(i + 1);
    return {};
}

std::string check_determinism()
{
    SweepSpec spec;
    spec.base = small_config();
    spec.axis = SweepAxis::rho;
    spec.values = {0.2, 0.6};
    spec.schemes = {SchemeSpec{}, SchemeSpec{Duplex::half, true, true}};
    spec.n_channel_trials = 3;
    spec.n_eval_samples = 5;
    spec.optimizer.max_outer = 5;
    const SweepResult a = run_sweep(spec, 1);
    const SweepResult b = run_sweep(spec, 3);
    for (std::size_t i = 0; i < a.cells.size(); ++i)
        if (a.cells[i].per_trial != b.cells[i].per_trial)
            return "per-trial WSR differs between parallelism 1 and 3";
    return {};
}

} // namespace

bool run_validation_suite(std::ostream &out)
{
    const Check checks[] = {
        {"svd reconstruction", check_svd},
        {"hpd solve residual", check_solve},
        {"Kronecker expectation vs sampling", check_kronecker_expectation},
        {"MM scalar instance", check_mm_scalar},
        {"power bisection closed form", check_bisection},
        {"weight inverse product", check_weights},
        {"monotone outer iterations", check_monotone},
        {"sweep determinism", check_determinism},
    };
    bool all = true;
    for (const auto &c : checks)
    {
        std::string why;
        try
        {
            why = c.run();
        }
        catch (const std::exception &e)
        {
            why = std::string("exception: ") + e.what();
        }
        out << (why.empty() ? "PASS " : "FAIL ") << c.name;
        if (!why.empty())
            out << " (" << why << ')';
        out << '\n';
        all = all && why.empty();
    }
    out << (all ? "all checks passed" : "some checks failed") << '\n';
    return all;
}

} // namespace irsfd
