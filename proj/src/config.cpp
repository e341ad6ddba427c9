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

#include "irsfd/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

namespace irsfd
{

using nlohmann::json;

double distance(const Vec3 &a, const Vec3 &b)
{
    const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

double ScenarioConfig::snr_linear() const
{
    return std::pow(10.0, snr_db / 10.0);
}

double ScenarioConfig::csi_error_variance() const
{
    return rho / std::pow(snr_linear(), alpha_decay);
}

void apply_snr(ScenarioConfig &cfg, double snr_db)
{
    cfg.snr_db = snr_db;
    const double snr = cfg.snr_linear();
    cfg.sigma0_sq = cfg.alpha_k / snr;
    cfg.sigmaj_sq = cfg.alpha_0 / snr;
}

void validate(const ScenarioConfig &cfg)
{
    auto fail = [](const std::string &m) { throw ConfigError("invalid scenario: " + m); };

    if (cfg.M0 < 1 || cfg.N0 < 1 || cfg.Mk < 1 || cfg.Nj < 1 || cfg.R < 1 || cfg.C < 1)
        fail("antenna and IRS dimensions must be positive");
    if (cfg.uk < 1 || cfg.vj < 1)
        fail("stream counts must be positive");
    if (cfg.uk > std::min(cfg.Mk, cfg.N0))
        fail("uk must not exceed min(Mk, N0)");
    if (cfg.vj > std::min(cfg.M0, cfg.Nj))
        fail("vj must not exceed min(M0, Nj)");
    if (!(cfg.alpha_k > 0.0) || !(cfg.alpha_0 > 0.0))
        fail("power budgets must be positive");
    if (!(cfg.sigma0_sq > 0.0) || !(cfg.sigmaj_sq > 0.0))
        fail("noise variances must be positive");
    if (!(cfg.w_k > 0.0) || !(cfg.w_j > 0.0))
        fail("rate weights must be positive");
    if (!(cfg.rho >= 0.0))
        fail("rho must be non-negative");
    if (!(cfg.alpha_decay >= 0.0 && cfg.alpha_decay <= 1.0))
        fail("alpha_decay must lie in [0, 1]");
    if (!(cfg.user_radius >= 0.0))
        fail("user_radius must be non-negative");
    if (!(cfg.rician_kappa >= 0.0))
        fail("rician_kappa must be non-negative");
    if (!(cfg.d0 > 0.0))
        fail("d0 must be positive");
    if (!std::isfinite(cfg.snr_db) || !std::isfinite(cfg.pl0_db) || !std::isfinite(cfg.pl_exponent) ||
        !std::isfinite(cfg.si_path_loss_db) || !std::isfinite(cfg.rx_gain_normalization_db))
        fail("non-finite value");
}

namespace
{

using Keys = std::set<std::string>;

void reject_unknown(const json &section, const Keys &known, const std::string &where)
{
    for (const auto &[k, v] : section.items())
        if (!known.count(k))
            throw ConfigError("unknown key '" + k + "' in " + where);
}

template <typename T> void read(const json &s, const char *key, T &out)
{
    if (s.contains(key))
    {
        try
        {
            out = s.at(key).get<T>();
        }
        catch (const json::exception &e)
        {
            throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
        }
    }
}

void read_vec3(const json &s, const char *key, Vec3 &out)
{
    if (!s.contains(key))
        return;
    const auto &a = s.at(key);
    if (!a.is_array() || a.size() != 3)
        throw ConfigError(std::string("'") + key + "' must be an array of three numbers");
    for (const auto &e : a)
        if (!e.is_number())
            throw ConfigError(std::string("'") + key + "' must be an array of three numbers");
    out = {a[0].get<double>(), a[1].get<double>(), a[2].get<double>()};
}

json vec3_json(const Vec3 &v)
{
    return json::array({v.x, v.y, v.z});
}

const json &section(const json &j, const char *name)
{
    static const json empty = json::object();
    if (!j.contains(name))
        return empty;
    if (!j.at(name).is_object())
        throw ConfigError(std::string("section '") + name + "' must be an object");
    return j.at(name);
}

} // namespace

ScenarioConfig scenario_from_json(const json &j)
{
    if (!j.is_object())
        throw ConfigError("scenario configuration must be a JSON object");
    reject_unknown(j, {"antennas", "power", "weights", "csi", "geometry", "channel", "seed"}, "scenario");

    ScenarioConfig cfg;

    const auto &ant = section(j, "antennas");
    reject_unknown(ant, {"M0", "N0", "Mk", "Nj", "R", "C", "uk", "vj"}, "antennas");
    read(ant, "M0", cfg.M0);
    read(ant, "N0", cfg.N0);
    read(ant, "Mk", cfg.Mk);
    read(ant, "Nj", cfg.Nj);
    read(ant, "R", cfg.R);
    read(ant, "C", cfg.C);
    read(ant, "uk", cfg.uk);
    read(ant, "vj", cfg.vj);

    const auto &pw = section(j, "power");
    reject_unknown(pw, {"alpha_k", "alpha_0", "snr_db", "sigma0_sq", "sigmaj_sq"}, "power");
    read(pw, "alpha_k", cfg.alpha_k);
    read(pw, "alpha_0", cfg.alpha_0);
    read(pw, "snr_db", cfg.snr_db);
    apply_snr(cfg, cfg.snr_db);
    read(pw, "sigma0_sq", cfg.sigma0_sq);
    read(pw, "sigmaj_sq", cfg.sigmaj_sq);

    const auto &w = section(j, "weights");
    reject_unknown(w, {"w_k", "w_j"}, "weights");
    read(w, "w_k", cfg.w_k);
    read(w, "w_j", cfg.w_j);

    const auto &csi = section(j, "csi");
    reject_unknown(csi, {"rho", "alpha_decay", "relative"}, "csi");
    read(csi, "rho", cfg.rho);
    read(csi, "alpha_decay", cfg.alpha_decay);
    read(csi, "relative", cfg.csi_error_relative);

    const auto &geo = section(j, "geometry");
    reject_unknown(geo, {"bs", "irs", "ul_center", "dl_center", "user_radius"}, "geometry");
    read_vec3(geo, "bs", cfg.bs_pos);
    read_vec3(geo, "irs", cfg.irs_pos);
    read_vec3(geo, "ul_center", cfg.ul_center);
    read_vec3(geo, "dl_center", cfg.dl_center);
    read(geo, "user_radius", cfg.user_radius);

    const auto &ch = section(j, "channel");
    reject_unknown(ch,
                   {"rician_kappa", "pl0_db", "pl_exponent", "d0", "si_path_loss_db", "si_los_angle_deg",
                    "rx_gain_normalization_db"},
                   "channel");
    read(ch, "rician_kappa", cfg.rician_kappa);
    read(ch, "pl0_db", cfg.pl0_db);
    read(ch, "pl_exponent", cfg.pl_exponent);
    read(ch, "d0", cfg.d0);
    read(ch, "si_path_loss_db", cfg.si_path_loss_db);
    read(ch, "si_los_angle_deg", cfg.si_los_angle_deg);
    read(ch, "rx_gain_normalization_db", cfg.rx_gain_normalization_db);

    read(j, "seed", cfg.seed);

    validate(cfg);
    return cfg;
}

json scenario_to_json(const ScenarioConfig &cfg)
{
    return json{
        {"antennas",
         {{"M0", cfg.M0},
          {"N0", cfg.N0},
          {"Mk", cfg.Mk},
          {"Nj", cfg.Nj},
          {"R", cfg.R},
          {"C", cfg.C},
          {"uk", cfg.uk},
          {"vj", cfg.vj}}},
        {"power",
         {{"alpha_k", cfg.alpha_k},
          {"alpha_0", cfg.alpha_0},
          {"snr_db", cfg.snr_db},
          {"sigma0_sq", cfg.sigma0_sq},
          {"sigmaj_sq", cfg.sigmaj_sq}}},
        {"weights", {{"w_k", cfg.w_k}, {"w_j", cfg.w_j}}},
        {"csi", {{"rho", cfg.rho}, {"alpha_decay", cfg.alpha_decay}, {"relative", cfg.csi_error_relative}}},
        {"geometry",
         {{"bs", vec3_json(cfg.bs_pos)},
          {"irs", vec3_json(cfg.irs_pos)},
          {"ul_center", vec3_json(cfg.ul_center)},
          {"dl_center", vec3_json(cfg.dl_center)},
          {"user_radius", cfg.user_radius}}},
        {"channel",
         {{"rician_kappa", cfg.rician_kappa},
          {"pl0_db", cfg.pl0_db},
          {"pl_exponent", cfg.pl_exponent},
          {"d0", cfg.d0},
          {"si_path_loss_db", cfg.si_path_loss_db},
          {"si_los_angle_deg", cfg.si_los_angle_deg},
          {"rx_gain_normalization_db", cfg.rx_gain_normalization_db}}},
        {"seed", cfg.seed},
    };
}

ScenarioConfig load_scenario(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open scenario file: " + path.string());
    json j;
    try
    {
        in >> j;
    }
    catch (const json::exception &e)
    {
        throw ConfigError("cannot parse scenario file " + path.string() + ": " + e.what());
    }
    return scenario_from_json(j);
}

} // namespace irsfd
