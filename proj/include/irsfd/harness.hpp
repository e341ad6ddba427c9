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

#ifndef IRSFD_HARNESS_HPP
#define IRSFD_HARNESS_HPP

#include "irsfd/channel.hpp"
#include "irsfd/config.hpp"
#include "irsfd/optimizer.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace irsfd
{

class IoError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

enum class SweepAxis
{
    snr_db,
    rho,
};

const char *axis_name(SweepAxis a);

struct SweepSpec
{
    SweepAxis axis = SweepAxis::rho;
    std::vector<double> values;
    std::vector<SchemeSpec> schemes;
    int n_channel_trials = 100;
    int n_eval_samples = 500; // 0 disables the sampled ergodic evaluation
    ScenarioConfig base;
    OptimizeOptions optimizer;
};

void validate(const SweepSpec &spec);

SweepSpec sweep_from_json(const nlohmann::json &j, const ScenarioConfig &base);
SweepSpec load_sweep(const std::filesystem::path &path, const ScenarioConfig &base);

struct SweepCell
{
    double axis_value = 0.0;
    SchemeSpec scheme;
    double mean_wsr = 0.0; // bits/s/Hz over finite trials
    double stderr_wsr = 0.0;
    int n_trials = 0;              // finite trials
    std::vector<double> per_trial; // length n_channel_trials, NaN for failed trials
    std::vector<double> sampled_per_trial;
    double mean_sampled_wsr = 0.0;
    double mean_iters = 0.0;
    double wall_seconds = 0.0;
    std::vector<std::string> errors;
};

struct SweepResult
{
    SweepAxis axis = SweepAxis::rho;
    std::vector<SweepCell> cells; // axis ascending, then scheme name
};

// Channel draw shared by every scheme and axis value of one trial.
struct TrialDraw
{
    Topology topology;
    LinkGains gains;
    ChannelEstimates estimates;
};

TrialDraw draw_trial(const ScenarioConfig &cfg, Rng &rng);

ErrorStats trial_error_stats(const ScenarioConfig &cfg, const LinkGains &gains);

// Independent stream for (seed, trial, purpose).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t trial, std::uint64_t purpose);

SweepResult run_sweep(const SweepSpec &spec, int parallelism);

void emit_csv(const SweepResult &result, const std::filesystem::path &path);
void emit_svg_lineplot(const SweepResult &result, const std::filesystem::path &path);
void emit_svg_cdf(const SweepResult &result, double axis_value, const std::filesystem::path &path);

struct SvgSeries
{
    std::string name;
    std::vector<std::pair<double, double>> points;
    bool markers = true;
};

// Standalone line plot: one polyline per series with two or more points.
void emit_svg_series(const std::filesystem::path &path, const std::string &title, const std::string &xlabel,
                     const std::string &ylabel, const std::vector<SvgSeries> &series);

struct CdfPoint
{
    double x = 0.0;
    double p = 0.0;
};

// Step points of the empirical CDF of the finite entries, ending at p = 1.
std::vector<CdfPoint> empirical_cdf(std::vector<double> samples);

nlohmann::json result_to_json(const SweepResult &result);

// Runs fn(i) for i in [0, n) on up to parallelism threads.
template <typename Fn> void parallel_for(int n, int parallelism, Fn &&fn);

// Built-in oracle checks; one pass/fail line each. True when all pass.
bool run_validation_suite(std::ostream &out);

int cli_main(int argc, char **argv);

} // namespace irsfd

#include "irsfd/detail/parallel.hpp"

#endif
