// SPDX-License-Identifier: Apache-2.0
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

#include "rydsrc/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <openssl/evp.h>

#include "rydsrc/diagnostics.hpp"
#include "rydsrc/output.hpp"
#include "rydsrc/rng.hpp"

namespace rydsrc {

using nlohmann::json;

CloudGeometry ExperimentConfig::geometry() const
{
    CloudGeometry g;
    g.n_atoms = ensemble.n_atoms;
    g.sigma_um = ensemble.sigma_um;
    g.source_um = ensemble.source_um;
    g.min_source_distance_um = ensemble.min_source_distance_um;
    return g;
}

AngularRate ExperimentConfig::omega_max() const { return AngularRate::from_mhz(preparation.omega_max_mhz); }

AngularRate ExperimentConfig::intermediate_detuning() const
{
    if (preparation.intermediate_detuning_mhz)
        return AngularRate::from_mhz(*preparation.intermediate_detuning_mhz);
    return -species().delta_sa;
}

PulseSchedule ExperimentConfig::schedule() const
{
    const auto& p = preparation;
    return PulseSchedule::sin2_ramp(omega_max(), p.ramp_us, p.plateau_end_us, p.t_final_us,
                                    AngularRate::from_mhz(p.two_photon_detuning_start_mhz),
                                    AngularRate::from_mhz(p.two_photon_detuning_end_mhz))
        .with_phase(p.omega_phase_rad);
}

PreparationSettings ExperimentConfig::preparation_settings() const
{
    PreparationSettings s;
    s.gamma_s = DecayRate::per_us(preparation.gamma_s_per_us);
    s.gamma_sg = DecayRate::per_us(preparation.gamma_sg_per_us);
    s.dt_us = preparation.dt_us;
    s.dt_out_us = preparation.dt_out_us;
    return s;
}

EmissionGeometry ExperimentConfig::emission_geometry() const
{
    return make_emission_geometry(species(), emission.control_tilt_rad);
}

AngularRate ExperimentConfig::omega_c() const { return AngularRate::from_mhz(emission.omega_c_mhz); }

AngularRate ExperimentConfig::gamma_e() const { return AngularRate::from_mhz(emission.gamma_e_mhz); }

std::shared_ptr<const ModeGrid> ExperimentConfig::mode_grid() const
{
    const double w = emission_linewidth(omega_c(), gamma_e());
    return make_mode_grid(emission.n_theta, emission.n_phi, emission_geometry().k,
                          uniform_frequencies(emission.freq_window_linewidths * w, emission.n_freq));
}

namespace {

json vec(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

Vec3 to_vec(const json& j) { return Vec3(j[0].get<double>(), j[1].get<double>(), j[2].get<double>()); }

} // namespace

json to_json(const ExperimentConfig& c)
{
    json j;
    j["schema_version"] = kSchemaVersion;
    j["preset"] = c.preset;
    const auto& e = c.ensemble;
    j["ensemble"] = {{"n_atoms", e.n_atoms},
                     {"sigma_um", vec(e.sigma_um)},
                     {"source_um", vec(e.source_um)},
                     {"dipole_axis", vec(e.dipole_axis)},
                     {"min_source_distance_um", e.min_source_distance_um},
                     {"hist_bins", e.hist_bins}};
    const auto& p = c.preparation;
    j["preparation"] = {{"omega_max_mhz", p.omega_max_mhz},
                        {"intermediate_detuning_mhz",
                         p.intermediate_detuning_mhz ? json(*p.intermediate_detuning_mhz) : json(nullptr)},
                        {"ramp_us", p.ramp_us},
                        {"plateau_end_us", p.plateau_end_us},
                        {"t_final_us", p.t_final_us},
                        {"two_photon_detuning_start_mhz", p.two_photon_detuning_start_mhz},
                        {"two_photon_detuning_end_mhz", p.two_photon_detuning_end_mhz},
                        {"omega_phase_rad", p.omega_phase_rad},
                        {"gamma_s_per_us", p.gamma_s_per_us},
                        {"gamma_sg_per_us", p.gamma_sg_per_us},
                        {"dt_us", p.dt_us},
                        {"dt_out_us", p.dt_out_us},
                        {"herald_threshold", p.herald_threshold}};
    const auto& m = c.emission;
    j["emission"] = {{"omega_c_mhz", m.omega_c_mhz},
                     {"gamma_e_mhz", m.gamma_e_mhz},
                     {"control_tilt_rad", m.control_tilt_rad},
                     {"n_theta", m.n_theta},
                     {"n_phi", m.n_phi},
                     {"n_freq", m.n_freq},
                     {"freq_window_linewidths", m.freq_window_linewidths},
                     {"cone_half_angle_rad", m.cone_half_angle_rad},
                     {"cut_points", m.cut_points},
                     {"coarse_theta", m.coarse_theta},
                     {"coarse_phi", m.coarse_phi}};
    const auto& s = c.single_step;
    j["single_step"] = {{"omega_max_mhz", s.omega_max_mhz},
                        {"omega_c_mhz", s.omega_c_mhz},
                        {"two_photon_detuning_mhz", s.two_photon_detuning_mhz},
                        {"ramp_us", s.ramp_us},
                        {"plateau_end_us", s.plateau_end_us},
                        {"t_final_us", s.t_final_us},
                        {"dt_us", s.dt_us},
                        {"freq_window_rates", s.freq_window_rates}};
    const auto& x = c.eit;
    j["eit"] = {{"g_sqrt_rho_max_mhz", x.g_sqrt_rho_max_mhz},
                {"omega_c_mhz", x.omega_c_mhz},
                {"gamma_e_mhz", x.gamma_e_mhz},
                {"gamma_s_per_us", x.gamma_s_per_us},
                {"sigma_z_um", x.sigma_z_um},
                {"half_length_um", x.half_length_um},
                {"z_points", x.z_points},
                {"detuning_points", x.detuning_points},
                {"detuning_span_mhz", x.detuning_span_mhz},
                {"propagation_speed_um_per_us", x.propagation_speed_um_per_us},
                {"ramp_us", x.ramp_us},
                {"propagation_dt_us", x.propagation_dt_us}};
    const auto& r = c.campaign;
    j["campaign"] = {{"realizations", r.realizations},
                     {"master_seed", r.master_seed},
                     {"overlap_pairs", r.overlap_pairs},
                     {"emit", r.emit},
                     {"full_grid_keep", r.full_grid_keep},
                     {"failure_budget", r.failure_budget}};
    const auto& b = c.budget;
    j["budget"] = {{"eta", b.eta},
                   {"p_i_prime", b.p_i_prime},
                   {"p_eg", b.p_eg},
                   {"delta_theta_rad", b.delta_theta_rad}};
    return j;
}

namespace {

bool is_nonneg_integer(const json& v)
{
    return v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0);
}

// Overlays `doc` onto the default document `base`, rejecting keys and types
// the defaults do not have.
void merge_checked(json& base, const json& doc, const std::string& path)
{
    if (!doc.is_object())
        throw ConfigError("config: '" + (path.empty() ? std::string("<root>") : path) + "' must be an object");
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        const std::string key = path.empty() ? it.key() : path + "." + it.key();
        if (!base.contains(it.key()))
            throw ConfigError("config: unknown key '" + key + "'");
        json& slot = base[it.key()];
        const json& v = it.value();
        bool ok;
        if (slot.is_object()) {
            merge_checked(slot, v, key);
            continue;
        } else if (slot.is_null()) {
            ok = v.is_null() || v.is_number();
        } else if (slot.is_boolean()) {
            ok = v.is_boolean();
        } else if (slot.is_string()) {
            ok = v.is_string();
        } else if (slot.is_array()) {
            ok = v.is_array() && v.size() == slot.size() &&
                 std::all_of(v.begin(), v.end(), [](const json& e) { return e.is_number(); });
        } else if (slot.is_number_unsigned() || slot.is_number_integer()) {
            ok = is_nonneg_integer(v);
        } else {
            ok = v.is_number();
        }
        if (!ok)
            throw ConfigError("config: key '" + key + "' has the wrong type (expected like " + slot.dump() + ")");
        slot = v;
    }
}

} // namespace

ExperimentConfig config_from_json(const json& doc)
{
    json j = to_json(ExperimentConfig{});
    merge_checked(j, doc, "");
    if (j["schema_version"].get<int>() != kSchemaVersion)
        throw ConfigError("config: unsupported schema_version " + j["schema_version"].dump());
    ExperimentConfig c;
    c.preset = j["preset"].get<std::string>();
    const auto& e = j["ensemble"];
    c.ensemble.n_atoms = e["n_atoms"].get<std::size_t>();
    c.ensemble.sigma_um = to_vec(e["sigma_um"]);
    c.ensemble.source_um = to_vec(e["source_um"]);
    c.ensemble.dipole_axis = to_vec(e["dipole_axis"]);
    c.ensemble.min_source_distance_um = e["min_source_distance_um"].get<double>();
    c.ensemble.hist_bins = e["hist_bins"].get<std::size_t>();
    const auto& p = j["preparation"];
    c.preparation.omega_max_mhz = p["omega_max_mhz"].get<double>();
    if (!p["intermediate_detuning_mhz"].is_null())
        c.preparation.intermediate_detuning_mhz = p["intermediate_detuning_mhz"].get<double>();
    c.preparation.ramp_us = p["ramp_us"].get<double>();
    c.preparation.plateau_end_us = p["plateau_end_us"].get<double>();
    c.preparation.t_final_us = p["t_final_us"].get<double>();
    c.preparation.two_photon_detuning_start_mhz = p["two_photon_detuning_start_mhz"].get<double>();
    c.preparation.two_photon_detuning_end_mhz = p["two_photon_detuning_end_mhz"].get<double>();
    c.preparation.omega_phase_rad = p["omega_phase_rad"].get<double>();
    c.preparation.gamma_s_per_us = p["gamma_s_per_us"].get<double>();
    c.preparation.gamma_sg_per_us = p["gamma_sg_per_us"].get<double>();
    c.preparation.dt_us = p["dt_us"].get<double>();
    c.preparation.dt_out_us = p["dt_out_us"].get<double>();
    c.preparation.herald_threshold = p["herald_threshold"].get<double>();
    const auto& m = j["emission"];
    c.emission.omega_c_mhz = m["omega_c_mhz"].get<double>();
    c.emission.gamma_e_mhz = m["gamma_e_mhz"].get<double>();
    c.emission.control_tilt_rad = m["control_tilt_rad"].get<double>();
    c.emission.n_theta = m["n_theta"].get<std::size_t>();
    c.emission.n_phi = m["n_phi"].get<std::size_t>();
    c.emission.n_freq = m["n_freq"].get<std::size_t>();
    c.emission.freq_window_linewidths = m["freq_window_linewidths"].get<double>();
    c.emission.cone_half_angle_rad = m["cone_half_angle_rad"].get<double>();
    c.emission.cut_points = m["cut_points"].get<std::size_t>();
    c.emission.coarse_theta = m["coarse_theta"].get<std::size_t>();
    c.emission.coarse_phi = m["coarse_phi"].get<std::size_t>();
    const auto& s = j["single_step"];
    c.single_step.omega_max_mhz = s["omega_max_mhz"].get<double>();
    c.single_step.omega_c_mhz = s["omega_c_mhz"].get<double>();
    c.single_step.two_photon_detuning_mhz = s["two_photon_detuning_mhz"].get<double>();
    c.single_step.ramp_us = s["ramp_us"].get<double>();
    c.single_step.plateau_end_us = s["plateau_end_us"].get<double>();
    c.single_step.t_final_us = s["t_final_us"].get<double>();
    c.single_step.dt_us = s["dt_us"].get<double>();
    c.single_step.freq_window_rates = s["freq_window_rates"].get<double>();
    const auto& x = j["eit"];
    c.eit.g_sqrt_rho_max_mhz = x["g_sqrt_rho_max_mhz"].get<double>();
    c.eit.omega_c_mhz = x["omega_c_mhz"].get<double>();
    c.eit.gamma_e_mhz = x["gamma_e_mhz"].get<double>();
    c.eit.gamma_s_per_us = x["gamma_s_per_us"].get<double>();
    c.eit.sigma_z_um = x["sigma_z_um"].get<double>();
    c.eit.half_length_um = x["half_length_um"].get<double>();
    c.eit.z_points = x["z_points"].get<std::size_t>();
    c.eit.detuning_points = x["detuning_points"].get<std::size_t>();
    c.eit.detuning_span_mhz = x["detuning_span_mhz"].get<double>();
    c.eit.propagation_speed_um_per_us = x["propagation_speed_um_per_us"].get<double>();
    c.eit.ramp_us = x["ramp_us"].get<double>();
    c.eit.propagation_dt_us = x["propagation_dt_us"].get<double>();
    const auto& r = j["campaign"];
    c.campaign.realizations = r["realizations"].get<std::size_t>();
    c.campaign.master_seed = r["master_seed"].get<std::uint64_t>();
    c.campaign.overlap_pairs = r["overlap_pairs"].get<std::size_t>();
    c.campaign.emit = r["emit"].get<bool>();
    c.campaign.full_grid_keep = r["full_grid_keep"].get<std::size_t>();
    c.campaign.failure_budget = r["failure_budget"].get<double>();
    const auto& b = j["budget"];
    c.budget.eta = b["eta"].get<double>();
    c.budget.p_i_prime = b["p_i_prime"].get<double>();
    c.budget.p_eg = b["p_eg"].get<double>();
    c.budget.delta_theta_rad = b["delta_theta_rad"].get<double>();
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config " + path.string() + ": " + e.what());
    }
    return config_from_json(doc);
}

void apply_override(json& doc, std::string_view assignment)
{
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos || eq == 0)
        throw ConfigError("override '" + std::string(assignment) + "' must have the form key=value");
    const std::string key(assignment.substr(0, eq));
    const std::string text(assignment.substr(eq + 1));
    json value;
    try {
        value = json::parse(text);
    } catch (const json::parse_error&) {
        value = text;
    }
    json* node = &doc;
    std::size_t start = 0;
    while (true) {
        const auto dot = key.find('.', start);
        const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (!node->is_object() || !node->contains(part))
            throw ConfigError("override: unknown key '" + key + "'");
        node = &(*node)[part];
        if (dot == std::string::npos)
            break;
        start = dot + 1;
    }
    if (node->is_object())
        throw ConfigError("override: '" + key + "' names a section, not a value");
    *node = value;
}

ExperimentConfig apply_overrides(const ExperimentConfig& cfg, const std::vector<std::string>& assignments)
{
    json doc = to_json(cfg);
    for (const auto& a : assignments)
        apply_override(doc, a);
    return config_from_json(doc);
}

std::string sha256_hex(std::string_view data)
{
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    if (!ctx || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx, data.data(), data.size()) != 1 || EVP_DigestFinal_ex(ctx, digest, &len) != 1) {
        EVP_MD_CTX_free(ctx);
        throw std::runtime_error("sha256 failed");
    }
    EVP_MD_CTX_free(ctx);
    std::string hex;
    char buf[3];
    for (unsigned int i = 0; i < len; ++i) {
        std::snprintf(buf, sizeof buf, "%02x", digest[i]);
        hex += buf;
    }
    return hex;
}

std::string config_hash(const ExperimentConfig& cfg) { return sha256_hex(to_json(cfg).dump()); }

namespace {

double median(std::vector<double> v)
{
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

} // namespace

ValidationReport validate_config(const ExperimentConfig& cfg)
{
    const auto& preset = cfg.species();
    phase_match_wavenumber(preset);
    const auto& e = cfg.ensemble;
    const auto& p = cfg.preparation;
    for (int a = 0; a < 3; ++a)
        if (!(e.sigma_um[a] > 0.0))
            throw ConfigError("config: cloud widths sigma_um must be positive");
    if (e.n_atoms == 0 && cfg.campaign.realizations > 0)
        throw ConfigError("config: n_atoms = 0 leaves no statistics for the requested realizations");
    if (e.dipole_axis.norm() == 0.0)
        throw ConfigError("config: dipole_axis must be nonzero");
    if (e.min_source_distance_um < 0.0)
        throw ConfigError("config: min_source_distance_um must be non-negative");
    if (p.gamma_s_per_us < 0.0 || p.gamma_sg_per_us < 0.0)
        throw ConfigError("config: decay and dephasing rates must be non-negative");
    if (!(cfg.emission.gamma_e_mhz > 0.0) || cfg.emission.omega_c_mhz < 0.0 || p.omega_max_mhz < 0.0)
        throw ConfigError("config: Gamma_e must be positive and Rabi frequencies non-negative");
    if (!(p.dt_us > 0.0) || !(p.dt_out_us > 0.0))
        throw ConfigError("config: dt_us and dt_out_us must be positive");
    if (cfg.campaign.failure_budget < 0.0 || cfg.campaign.failure_budget > 1.0)
        throw ConfigError("config: failure_budget must lie in [0, 1]");
    if (cfg.emission.n_theta == 0 || cfg.emission.n_phi == 0 || cfg.emission.n_freq == 0)
        throw ConfigError("config: emission grid must be non-empty");
    const double big_delta = cfg.intermediate_detuning().rad_per_us();
    if (big_delta == 0.0)
        throw ConfigError("config: intermediate detuning must be nonzero");
    const auto schedule = cfg.schedule();
    const double tx = std::abs(e.source_um.x()) / e.sigma_um.x();
    const double ty = std::abs(e.source_um.y()) / e.sigma_um.y();
    if (std::max(tx, ty) <= 3.0)
        throw ConfigError("config: source atom lies within the 3 sigma transverse extent of the cloud");

    ValidationReport rep;
    auto soft = [&](std::string msg) {
        warn(msg);
        rep.warnings.push_back(std::move(msg));
    };
    const double omax = cfg.omega_max().rad_per_us();
    if (std::abs(big_delta) < 9.0 * omax)
        soft("adiabatic elimination degraded: |Delta| < 9 Omega_max");

    const std::size_t probes = std::min<std::size_t>(16, std::max<std::size_t>(1, cfg.campaign.realizations));
    std::vector<double> dbars, ratios;
    if (e.n_atoms > 0) {
        for (std::size_t i = 0; i < probes; ++i) {
            const auto cloud = sample_cloud(cfg.geometry(), cfg.campaign.master_seed, stream_id(i, StreamPurpose::Cloud));
            const auto field = build_coupling_field(cloud, e.source_um, preset.c3, cfg.omega_max(),
                                                    cfg.intermediate_detuning(), e.dipole_axis.normalized());
            dbars.push_back(field.d_bar.rad_per_us());
            ratios.push_back(field.max_abs_bare() / std::abs(preset.delta_sa.rad_per_us()));
        }
        rep.d_bar_estimate = AngularRate::from_rad_per_us(median(dbars));
        rep.max_coupling_ratio = median(ratios);
        if (rep.max_coupling_ratio > 0.3)
            soft("adiabatic elimination degraded: max |D_j| exceeds 0.3 |Delta_sa|");
    }
    const double stiff =
        std::max({omax, schedule.max_abs_delta(), rep.d_bar_estimate.rad_per_us()}) * p.dt_us;
    if (stiff >= 0.1)
        throw ConfigError("config: dt_us too large, max(|Omega|, |delta|, D_bar) dt = " + std::to_string(stiff) +
                          " >= 0.1");
    if (cfg.schedule().chirp_rate() != 0.0 && rep.d_bar_estimate.rad_per_us() > 0.0) {
        const double d = rep.d_bar_estimate.rad_per_us();
        if (std::abs(cfg.schedule().chirp_rate()) >= d * d)
            soft("chirp is not adiabatic: alpha >= D_bar^2");
    }
    return rep;
}

} // namespace rydsrc
