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

#include "irsfd/harness.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

namespace irsfd
{

namespace
{

constexpr int exit_ok = 0;
constexpr int exit_validation = 1;
constexpr int exit_config = 2;

template <typename T> std::optional<T> env_number(const char *name)
{
    const char *raw = std::getenv(name);
    if (!raw || !*raw)
        return std::nullopt;
    try
    {
        std::size_t used = 0;
        const long long v = std::stoll(raw, &used);
        if (used != std::string(raw).size() || v < 0)
            throw std::invalid_argument(raw);
        return static_cast<T>(v);
    }
    catch (const std::exception &)
    {
        throw ConfigError(std::string("environment variable ") + name + " is not a non-negative integer: " + raw);
    }
}

void ensure_dir(const std::filesystem::path &dir)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir))
        throw IoError("cannot create output directory: " + dir.string());
}

std::string value_tag(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%g", v);
    std::string s = buf;
    for (char &c : s)
        if (c == '.')
            c = 'p';
        else if (c == '-')
            c = 'm';
    return s;
}

int run_command(const std::string &config, const std::string &sweep, const std::string &out,
                std::optional<int> parallelism, std::optional<unsigned long long> seed)
{
    ScenarioConfig cfg = load_scenario(config);
    if (!seed)
        seed = env_number<unsigned long long>("IRSFD_SEED");
    if (seed)
        cfg.seed = *seed;
    if (!parallelism)
        parallelism = env_number<int>("IRSFD_PARALLELISM");
    const int threads = parallelism && *parallelism > 0
                            ? *parallelism
                            : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

    const SweepSpec spec = load_sweep(sweep, cfg);
    ensure_dir(out);
    const SweepResult result = run_sweep(spec, threads);

    for (const auto &c : result.cells)
        for (const auto &e : c.errors)
            std::cerr << "warning: " << axis_name(result.axis) << '=' << c.axis_value << ' ' << c.scheme.name() << ": "
                      << e << '\n';

    const std::filesystem::path dir(out);
    emit_csv(result, dir / "results.csv");
    emit_svg_lineplot(result, dir / "wsr.svg");
    for (double v : spec.values)
        emit_svg_cdf(result, v, dir / ("cdf_" + std::string(axis_name(result.axis)) + "_" + value_tag(v) + ".svg"));
    std::ofstream js(dir / "results.json");
    if (!js)
        throw IoError("cannot open for writing: " + (dir / "results.json").string());
    js << result_to_json(result).dump(2) << '\n';
    std::cout << "wrote " << result.cells.size() << " cells to " << dir.string() << '\n';
    return exit_ok;
}

int convergence_command(const std::string &config, double rho, const std::string &out, int trials,
                        const OptimizeOptions &opt, std::optional<unsigned long long> seed)
{
    ScenarioConfig cfg = load_scenario(config);
    if (!seed)
        seed = env_number<unsigned long long>("IRSFD_SEED");
    if (seed)
        cfg.seed = *seed;
    cfg.rho = rho;
    validate(cfg);
    if (trials < 1)
        throw ConfigError("--trials must be at least 1");
    ensure_dir(out);

    std::ostringstream csv;
    csv << "trial,iteration,wsr_bits\n";
    std::vector<SvgSeries> series;
    const SchemeSpec scheme{};
    for (int t = 0; t < trials; ++t)
    {
        Rng channel_rng(derive_seed(cfg.seed, t, 0));
        const TrialDraw draw = draw_trial(cfg, channel_rng);
        const ErrorStats stats = trial_error_stats(cfg, draw.gains);
        Rng init_rng(derive_seed(cfg.seed, t, 1));
        const OptimizationTrace tr = optimize(draw.estimates, stats, cfg, scheme, init_rng, opt);
        SvgSeries s;
        s.name = "trial " + std::to_string(t);
        s.markers = false;
        for (std::size_t i = 0; i < tr.wsr.size(); ++i)
        {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.12g", tr.wsr[i]);
            csv << t << ',' << i + 1 << ',' << buf << '\n';
            s.points.emplace_back(static_cast<double>(i + 1), tr.wsr[i]);
        }
        series.push_back(std::move(s));
        std::cout << "trial " << t << ": " << tr.iterations << " iterations, "
                  << (tr.converged ? "converged" : "not converged") << ", final WSR " << tr.wsr.back()
                  << " bits/s/Hz\n";
    }
    const std::filesystem::path dir(out);
    std::ofstream f(dir / "convergence.csv", std::ios::binary);
    if (!f)
        throw IoError("cannot open for writing: " + (dir / "convergence.csv").string());
    f << csv.str();
    emit_svg_series(dir / "convergence.svg", scheme.name() + " convergence", "outer iteration", "WSR (bits/s/Hz)",
                    series);
    return exit_ok;
}

} // namespace

int cli_main(int argc, char **argv)
{
    CLI::App app{"irsfd: robust joint beamforming simulator for IRS-assisted MIMO full duplex"};
    app.require_subcommand(1);

    std::string config, sweep, out;
    std::optional<int> parallelism;
    std::optional<unsigned long long> seed;
    auto *run = app.add_subcommand("run", "Monte-Carlo sweep producing CSV and SVG outputs");
    run->add_option("--config", config, "scenario JSON file")->required();
    run->add_option("--sweep", sweep, "sweep JSON file")->required();
    run->add_option("--out", out, "output directory")->required();
    run->add_option("--parallelism", parallelism, "worker threads (env IRSFD_PARALLELISM)");
    run->add_option("--seed", seed, "base seed (env IRSFD_SEED)");

    double rho = 0.0;
    int trials = 1;
    OptimizeOptions opt;
    auto *conv = app.add_subcommand("convergence", "per-iteration WSR trace of the robust FD-IRS design");
    conv->add_option("--config", config, "scenario JSON file")->required();
    conv->add_option("--rho", rho, "CSI error scale factor")->required();
    conv->add_option("--out", out, "output directory")->required();
    conv->add_option("--trials", trials, "number of channel draws")->capture_default_str();
    conv->add_option("--eps", opt.eps, "relative WSR change for convergence")->capture_default_str();
    conv->add_option("--max-outer", opt.max_outer, "outer iteration cap")->capture_default_str();
    conv->add_option("--seed", seed, "base seed (env IRSFD_SEED)");

    auto *val = app.add_subcommand("validate", "run the built-in oracle checks");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp &e)
    {
        return app.exit(e);
    }
    catch (const CLI::CallForAllHelp &e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError &e)
    {
        app.exit(e);
        return exit_config;
    }

    try
    {
        if (run->parsed())
            return run_command(config, sweep, out, parallelism, seed);
        if (conv->parsed())
            return convergence_command(config, rho, out, trials, opt, seed);
        if (val->parsed())
            return run_validation_suite(std::cout) ? exit_ok : exit_validation;
    }
    catch (const ConfigError &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return exit_config;
    }
    catch (const IoError &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return exit_config;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return exit_validation;
    }
    return exit_config;
}

} // namespace irsfd
