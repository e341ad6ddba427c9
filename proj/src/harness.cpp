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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace irsfd
{

using nlohmann::json;

const char *axis_name(SweepAxis a)
{
    return a == SweepAxis::snr_db ? "snr_db" : "rho";
}

void validate(const SweepSpec &spec)
{
    if (spec.values.empty())
        throw ConfigError("sweep: values must not be empty");
    if (!std::is_sorted(spec.values.begin(), spec.values.end()) ||
        std::adjacent_find(spec.values.begin(), spec.values.end()) != spec.values.end())
        throw ConfigError("sweep: values must be strictly ascending");
    for (double v : spec.values)
        if (!std::isfinite(v))
            throw ConfigError("sweep: values must be finite");
    if (spec.schemes.empty())
        throw ConfigError("sweep: schemes must not be empty");
    std::set<std::string> seen;
    for (const auto &s : spec.schemes)
        if (!seen.insert(s.name()).second)
            throw ConfigError("sweep: duplicate scheme " + s.name());
    if (spec.n_channel_trials < 1)
        throw ConfigError("sweep: n_channel_trials must be at least 1");
    if (spec.n_eval_samples < 0)
        throw ConfigError("sweep: n_eval_samples must be non-negative");
    if (!(spec.optimizer.eps >= 0.0) || spec.optimizer.max_outer < 1 || !(spec.optimizer.mm_eps >= 0.0) ||
        spec.optimizer.mm_max_iter < 1)
        throw ConfigError("sweep: invalid optimizer settings");
}

SweepSpec sweep_from_json(const json &j, const ScenarioConfig &base)
{
    if (!j.is_object())
        throw ConfigError("sweep configuration must be a JSON object");
    static const std::set<std::string> known{"axis",           "values",   "schemes", "n_channel_trials",
                                             "n_eval_samples", "optimizer"};
    for (const auto &[k, v] : j.items())
        if (!known.count(k))
            throw ConfigError("unknown key '" + k + "' in sweep");

    SweepSpec spec;
    spec.base = base;
    try
    {
        const std::string axis = j.at("axis").get<std::string>();
        if (axis == "snr_db")
            spec.axis = SweepAxis::snr_db;
        else if (axis == "rho")
            spec.axis = SweepAxis::rho;
        else
            throw ConfigError("sweep: axis must be 'snr_db' or 'rho', got '" + axis + "'");
        spec.values = j.at("values").get<std::vector<double>>();
        for (const auto &name : j.at("schemes").get<std::vector<std::string>>())
            spec.schemes.push_back(SchemeSpec::parse(name));
        spec.n_channel_trials = j.value("n_channel_trials", spec.n_channel_trials);
        spec.n_eval_samples = j.value("n_eval_samples", spec.n_eval_samples);
        if (j.contains("optimizer"))
        {
            const auto &o = j.at("optimizer");
            for (const auto &[k, v] : o.items())
                if (k != "eps" && k != "max_outer" && k != "mm_eps" && k != "mm_max_iter")
                    throw ConfigError("unknown key '" + k + "' in sweep.optimizer");
            spec.optimizer.eps = o.value("eps", spec.optimizer.eps);
            spec.optimizer.max_outer = o.value("max_outer", spec.optimizer.max_outer);
            spec.optimizer.mm_eps = o.value("mm_eps", spec.optimizer.mm_eps);
            spec.optimizer.mm_max_iter = o.value("mm_max_iter", spec.optimizer.mm_max_iter);
        }
    }
    catch (const json::exception &e)
    {
        throw ConfigError(std::string("sweep: ") + e.what());
    }
    validate(spec);
    return spec;
}

SweepSpec load_sweep(const std::filesystem::path &path, const ScenarioConfig &base)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open sweep file: " + path.string());
    json j;
    try
    {
        in >> j;
    }
    catch (const json::exception &e)
    {
        throw ConfigError("cannot parse sweep file " + path.string() + ": " + e.what());
    }
    return sweep_from_json(j, base);
}

TrialDraw draw_trial(const ScenarioConfig &cfg, Rng &rng)
{
    TrialDraw d;
    d.topology = sample_topology(cfg, rng);
    d.gains = link_gains(cfg, d.topology);
    d.estimates = ChannelEstimates(sample_channels(cfg, d.topology, rng));
    return d;
}

ErrorStats trial_error_stats(const ScenarioConfig &cfg, const LinkGains &gains)
{
    return cfg.csi_error_relative ? build_error_stats(cfg, gains) : build_error_stats(cfg);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t trial, std::uint64_t purpose)
{
    // splitmix64 finalizer over a combined key
    auto mix = [](std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    return mix(mix(seed ^ trial) ^ (purpose * 0xd1342543de82ef95ULL));
}

namespace
{

ScenarioConfig config_at(const SweepSpec &spec, double value)
{
    ScenarioConfig cfg = spec.base;
    if (spec.axis == SweepAxis::snr_db)
        apply_snr(cfg, value);
    else
        cfg.rho = value;
    validate(cfg);
    return cfg;
}

struct TrialOutcome
{
    std::vector<double> wsr;
    std::vector<double> sampled;
    std::vector<int> iters;
    std::vector<double> seconds;
    std::vector<std::vector<std::string>> errors; // per scheme
};

std::vector<SchemeSpec> sorted_schemes(std::vector<SchemeSpec> s)
{
    std::sort(s.begin(), s.end(), [](const SchemeSpec &a, const SchemeSpec &b) { return a.name() < b.name(); });
    return s;
}

} // namespace

SweepResult run_sweep(const SweepSpec &spec, int parallelism)
{
    validate(spec);
    const auto schemes = sorted_schemes(spec.schemes);
    const int nv = static_cast<int>(spec.values.size());
    const int ns = static_cast<int>(schemes.size());
    const int nt = spec.n_channel_trials;
    const double nan = std::numeric_limits<double>::quiet_NaN();

    std::vector<ScenarioConfig> configs(nv);
    std::vector<std::string> config_errors(nv);
    for (int v = 0; v < nv; ++v)
    {
        try
        {
            configs[v] = config_at(spec, spec.values[v]);
        }
        catch (const ConfigError &e)
        {
            config_errors[v] = e.what();
        }
    }

    std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(nv) * nt);
    parallel_for(nv * nt, parallelism, [&](int task) {
        const int v = task / nt;
        const int t = task % nt;
        TrialOutcome &out = outcomes[task];
        out.wsr.assign(ns, nan);
        out.sampled.assign(ns, nan);
        out.iters.assign(ns, 0);
        out.seconds.assign(ns, 0.0);
        out.errors.assign(ns, {});
        if (!config_errors[v].empty())
            return;

        const ScenarioConfig &cfg = configs[v];
        const std::uint64_t seed = spec.base.seed;
        TrialDraw draw;
        ErrorStats stats;
        try
        {
            Rng channel_rng(derive_seed(seed, t, 0));
            draw = draw_trial(cfg, channel_rng);
            stats = trial_error_stats(cfg, draw.gains);
        }
        catch (const std::exception &e)
        {
            for (auto &errs : out.errors)
                errs.push_back("trial " + std::to_string(t) + ": " + e.what());
            return;
        }

        for (int s = 0; s < ns; ++s)
        {
            const auto start = std::chrono::steady_clock::now();
            try
            {
                Rng init_rng(derive_seed(seed, t, 1));
                const OptimizationTrace tr = optimize(draw.estimates, stats, cfg, schemes[s], init_rng, spec.optimizer);
                out.wsr[s] = tr.evaluated_wsr;
                out.iters[s] = tr.iterations;
                if (spec.n_eval_samples > 0)
                {
                    Rng eval_rng(derive_seed(seed, t, 2));
                    out.sampled[s] =
                        evaluate_scheme(draw.estimates, stats, cfg, schemes[s], tr, spec.n_eval_samples, eval_rng)
                            .sampled_wsr;
                }
            }
            catch (const std::exception &e)
            {
                out.errors[s].push_back("trial " + std::to_string(t) + ": " + e.what());
            }
            out.seconds[s] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        }
    });

    SweepResult result;
    result.axis = spec.axis;
    for (int v = 0; v < nv; ++v)
        for (int s = 0; s < ns; ++s)
        {
            SweepCell cell;
            cell.axis_value = spec.values[v];
            cell.scheme = schemes[s];
            if (!config_errors[v].empty())
                cell.errors.push_back(config_errors[v]);
            double sum = 0.0, sum_sq = 0.0, sampled_sum = 0.0, iter_sum = 0.0;
            int n_sampled = 0;
            for (int t = 0; t < nt; ++t)
            {
                const TrialOutcome &o = outcomes[static_cast<std::size_t>(v) * nt + t];
                const double w = o.wsr.empty() ? nan : o.wsr[s];
                const double sm = o.sampled.empty() ? nan : o.sampled[s];
                cell.per_trial.push_back(w);
                cell.sampled_per_trial.push_back(sm);
                if (std::isfinite(w))
                {
                    sum += w;
                    sum_sq += w * w;
                    iter_sum += o.iters[s];
                    ++cell.n_trials;
                }
                if (std::isfinite(sm))
                {
                    sampled_sum += sm;
                    ++n_sampled;
                }
                if (!o.seconds.empty())
                    cell.wall_seconds += o.seconds[s];
                if (!o.errors.empty())
                    for (const auto &e : o.errors[s])
                        cell.errors.push_back(e);
            }
            if (cell.n_trials > 0)
            {
                const double n = cell.n_trials;
                cell.mean_wsr = sum / n;
                cell.mean_iters = iter_sum / n;
                if (cell.n_trials > 1)
                    cell.stderr_wsr =
                        std::sqrt(std::max(0.0, (sum_sq - n * cell.mean_wsr * cell.mean_wsr) / (n - 1.0)) / n);
            }
            else
            {
                cell.mean_wsr = nan;
                cell.stderr_wsr = nan;
            }
            cell.mean_sampled_wsr = n_sampled > 0 ? sampled_sum / n_sampled : nan;
            result.cells.push_back(std::move(cell));
        }
    return result;
}

namespace
{

std::string fmt12(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string fmt3(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

std::vector<const SweepCell *> ordered_cells(const SweepResult &r)
{
    std::vector<const SweepCell *> cells;
    for (const auto &c : r.cells)
        cells.push_back(&c);
    std::stable_sort(cells.begin(), cells.end(), [](const SweepCell *a, const SweepCell *b) {
        if (a->axis_value != b->axis_value)
            return a->axis_value < b->axis_value;
        return a->scheme.name() < b->scheme.name();
    });
    return cells;
}

void write_file(const std::filesystem::path &path, const std::string &text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot open for writing: " + path.string());
    out << text;
    out.flush();
    if (!out)
        throw IoError("write failed: " + path.string());
}

std::string xml_escape(const std::string &s)
{
    std::string o;
    for (char c : s)
        switch (c)
        {
        case '&':
            o += "&amp;";
            break;
        case '<':
            o += "&lt;";
            break;
        case '>':
            o += "&gt;";
            break;
        case '"':
            o += "&quot;";
            break;
        default:
            o += c;
        }
    return o;
}

const char *palette(std::size_t i)
{
    static const char *colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                   "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
    return colors[i % 8];
}

struct Frame
{
    double width = 640, height = 420;
    double left = 70, right = 190, top = 40, bottom = 60;
    double x0 = 0, x1 = 1, y0 = 0, y1 = 1;

    double px(double x) const { return left + (x - x0) / (x1 - x0) * (width - left - right); }
    double py(double y) const { return height - bottom - (y - y0) / (y1 - y0) * (height - top - bottom); }
};

void pad_range(double &lo, double &hi)
{
    if (!(hi > lo))
    {
        lo -= 0.5;
        hi += 0.5;
    }
}

std::string svg_frame(const Frame &f, const std::string &title, const std::string &xlabel, const std::string &ylabel)
{
    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << f.width << "\" height=\"" << f.height
      << "\" viewBox=\"0 0 " << f.width << ' ' << f.height << "\">\n";
    o << "<rect x=\"0\" y=\"0\" width=\"" << f.width << "\" height=\"" << f.height << "\" fill=\"white\"/>\n";
    o << "<text x=\"" << f.width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-family=\"sans-serif\" "
      << "font-size=\"15\">" << xml_escape(title) << "</text>\n";
    const double xa = f.height - f.bottom;
    o << "<line x1=\"" << f.left << "\" y1=\"" << xa << "\" x2=\"" << f.width - f.right << "\" y2=\"" << xa
      << "\" stroke=\"black\"/>\n";
    o << "<line x1=\"" << f.left << "\" y1=\"" << f.top << "\" x2=\"" << f.left << "\" y2=\"" << xa
      << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 5; ++i)
    {
        const double xv = f.x0 + (f.x1 - f.x0) * i / 5.0;
        const double yv = f.y0 + (f.y1 - f.y0) * i / 5.0;
        o << "<line x1=\"" << f.px(xv) << "\" y1=\"" << xa << "\" x2=\"" << f.px(xv) << "\" y2=\"" << xa + 5
          << "\" stroke=\"black\"/>\n";
        o << "<text x=\"" << f.px(xv) << "\" y=\"" << xa + 19 << "\" text-anchor=\"middle\" "
          << "font-family=\"sans-serif\" font-size=\"11\">" << fmt3(xv) << "</text>\n";
        o << "<line x1=\"" << f.left - 5 << "\" y1=\"" << f.py(yv) << "\" x2=\"" << f.left << "\" y2=\"" << f.py(yv)
          << "\" stroke=\"black\"/>\n";
        o << "<text x=\"" << f.left - 8 << "\" y=\"" << f.py(yv) + 4 << "\" text-anchor=\"end\" "
          << "font-family=\"sans-serif\" font-size=\"11\">" << fmt3(yv) << "</text>\n";
    }
    o << "<text x=\"" << (f.left + f.width - f.right) / 2 << "\" y=\"" << f.height - 15
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << xml_escape(xlabel) << "</text>\n";
    o << "<text x=\"18\" y=\"" << (f.top + xa) / 2 << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
      << "font-size=\"13\" transform=\"rotate(-90 18 " << (f.top + xa) / 2 << ")\">" << xml_escape(ylabel)
      << "</text>\n";
    return o.str();
}

std::string svg_legend(const Frame &f, const std::vector<std::string> &names)
{
    std::ostringstream o;
    const double x = f.width - f.right + 15;
    for (std::size_t i = 0; i < names.size(); ++i)
    {
        const double y = f.top + 10 + 20.0 * i;
        o << "<line x1=\"" << x << "\" y1=\"" << y << "\" x2=\"" << x + 20 << "\" y2=\"" << y << "\" stroke=\""
          << palette(i) << "\" stroke-width=\"2\"/>\n";
        o << "<text x=\"" << x + 26 << "\" y=\"" << y + 4 << "\" font-family=\"sans-serif\" font-size=\"11\">"
          << xml_escape(names[i]) << "</text>\n";
    }
    return o.str();
}

std::string polyline(const Frame &f, const std::vector<std::pair<double, double>> &pts, const char *color)
{
    std::ostringstream o;
    o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i)
        o << (i ? " " : "") << f.px(pts[i].first) << ',' << f.py(pts[i].second);
    o << "\"/>\n";
    return o.str();
}

} // namespace

void emit_csv(const SweepResult &result, const std::filesystem::path &path)
{
    std::ostringstream o;
    o << "axis,scheme,mean_wsr_bits,stderr,n_trials,mean_iters\n";
    for (const SweepCell *c : ordered_cells(result))
        o << fmt12(c->axis_value) << ',' << c->scheme.name() << ',' << fmt12(c->mean_wsr) << ',' << fmt12(c->stderr_wsr)
          << ',' << c->n_trials << ',' << fmt12(c->mean_iters) << '\n';
    write_file(path, o.str());
}

void emit_svg_series(const std::filesystem::path &path, const std::string &title, const std::string &xlabel,
                     const std::string &ylabel, const std::vector<SvgSeries> &series)
{
    Frame f;
    f.x0 = std::numeric_limits<double>::infinity();
    f.x1 = -f.x0;
    f.y0 = 0.0;
    f.y1 = 0.0;
    for (const auto &s : series)
        for (const auto &[x, y] : s.points)
        {
            f.x0 = std::min(f.x0, x);
            f.x1 = std::max(f.x1, x);
            f.y0 = std::min(f.y0, y);
            f.y1 = std::max(f.y1, y);
        }
    if (!std::isfinite(f.x0))
        f.x0 = f.x1 = 0.0;
    f.y1 += 0.05 * (f.y1 - f.y0);
    pad_range(f.x0, f.x1);
    pad_range(f.y0, f.y1);

    std::ostringstream o;
    o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    o << svg_frame(f, title, xlabel, ylabel);
    std::vector<std::string> names;
    for (std::size_t i = 0; i < series.size(); ++i)
    {
        const auto &s = series[i];
        names.push_back(s.name);
        if (s.points.size() >= 2)
            o << polyline(f, s.points, palette(i));
        if (s.markers)
            for (const auto &[x, y] : s.points)
                o << "<circle cx=\"" << f.px(x) << "\" cy=\"" << f.py(y) << "\" r=\"3\" fill=\"" << palette(i)
                  << "\"/>\n";
    }
    o << svg_legend(f, names);
    o << "</svg>\n";
    write_file(path, o.str());
}

void emit_svg_lineplot(const SweepResult &result, const std::filesystem::path &path)
{
    if (result.cells.empty())
        throw std::invalid_argument("emit_svg_lineplot: empty result");
    std::map<std::string, SvgSeries> by_name;
    for (const SweepCell *c : ordered_cells(result))
    {
        auto &s = by_name[c->scheme.name()];
        s.name = c->scheme.name();
        if (std::isfinite(c->mean_wsr))
            s.points.emplace_back(c->axis_value, c->mean_wsr);
    }
    std::vector<SvgSeries> series;
    for (auto &[name, s] : by_name)
        series.push_back(std::move(s));
    emit_svg_series(path, "Mean WSR", axis_name(result.axis), "WSR (bits/s/Hz)", series);
}

std::vector<CdfPoint> empirical_cdf(std::vector<double> samples)
{
    samples.erase(std::remove_if(samples.begin(), samples.end(), [](double v) { return !std::isfinite(v); }),
                  samples.end());
    std::sort(samples.begin(), samples.end());
    std::vector<CdfPoint> pts;
    const double n = static_cast<double>(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i)
    {
        pts.push_back({samples[i], i / n});
        pts.push_back({samples[i], (i + 1) / n});
    }
    return pts;
}

void emit_svg_cdf(const SweepResult &result, double axis_value, const std::filesystem::path &path)
{
    std::vector<SvgSeries> series;
    for (const SweepCell *c : ordered_cells(result))
        if (c->axis_value == axis_value)
        {
            SvgSeries s;
            s.name = c->scheme.name();
            s.markers = false;
            for (const auto &p : empirical_cdf(c->per_trial))
                s.points.emplace_back(p.x, p.p);
            series.push_back(std::move(s));
        }
    if (series.empty())
        throw std::invalid_argument("emit_svg_cdf: no cells at axis value " + fmt12(axis_value));
    emit_svg_series(path, std::string("CDF of WSR at ") + axis_name(result.axis) + " = " + fmt3(axis_value),
                    "WSR (bits/s/Hz)", "CDF", series);
}

json result_to_json(const SweepResult &result)
{
    auto num = [](double v) -> json { return std::isfinite(v) ? json(v) : json(nullptr); };
    json cells = json::array();
    for (const SweepCell *c : ordered_cells(result))
    {
        json per = json::array(), sampled = json::array();
        for (double v : c->per_trial)
            per.push_back(num(v));
        for (double v : c->sampled_per_trial)
            sampled.push_back(num(v));
        cells.push_back({{"axis_value", c->axis_value},
                         {"scheme", c->scheme.name()},
                         {"mean_wsr_bits", num(c->mean_wsr)},
                         {"stderr", num(c->stderr_wsr)},
                         {"n_trials", c->n_trials},
                         {"mean_iters", num(c->mean_iters)},
                         {"mean_sampled_wsr_bits", num(c->mean_sampled_wsr)},
                         {"per_trial_wsr_bits", per},
                         {"per_trial_sampled_wsr_bits", sampled},
                         {"wall_seconds", c->wall_seconds},
                         {"errors", c->errors}});
    }
    return {{"axis", axis_name(result.axis)}, {"cells", cells}};
}

} // namespace irsfd
