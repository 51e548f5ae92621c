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

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "rydsrc/emission.hpp"
#include "rydsrc/ensemble.hpp"
#include "rydsrc/presets.hpp"
#include "rydsrc/preparation.hpp"
#include "rydsrc/schedule.hpp"

namespace rydsrc {

struct EnsembleConfig {
    std::size_t n_atoms = 1000;
    Vec3 sigma_um{1.0, 1.0, 6.0};
    Vec3 source_um{7.0, 0.0, 0.0};
    Vec3 dipole_axis{0.0, 1.0, 0.0};
    double min_source_distance_um = 0.5;
    std::size_t hist_bins = 61;
};

struct PreparationConfig {
    double omega_max_mhz = 10.0;
    /// Empty: -delta_sa of the preset, so the product state |s>|d> is resonant at delta = 0.
    std::optional<double> intermediate_detuning_mhz;
    double ramp_us = 0.3;
    double plateau_end_us = 1.2;
    double t_final_us = 1.5;
    double two_photon_detuning_start_mhz = -30.0;
    double two_photon_detuning_end_mhz = 30.0;
    double omega_phase_rad = 0.0;
    double gamma_s_per_us = 0.01;
    double gamma_sg_per_us = 0.01;
    double dt_us = 5e-4;
    double dt_out_us = 0.01;
    double herald_threshold = 0.95;
};

struct EmissionConfig {
    double omega_c_mhz = 1.0;
    double gamma_e_mhz = 6.07;
    double control_tilt_rad = 0.0;
    std::size_t n_theta = 128;
    std::size_t n_phi = 256;
    std::size_t n_freq = 401;
    double freq_window_linewidths = 20.0;
    double cone_half_angle_rad = 0.07 * kPi;
    std::size_t cut_points = 2001;
    std::size_t coarse_theta = 16;
    std::size_t coarse_phi = 32;
};

struct SingleStepConfig {
    double omega_max_mhz = 0.5;
    double omega_c_mhz = 2.0;
    double two_photon_detuning_mhz = 0.0;
    double ramp_us = 0.5;
    double plateau_end_us = 2.5;
    double t_final_us = 3.0;
    double dt_us = 1e-3;
    double freq_window_rates = 20.0;
};

struct EitConfig {
    double g_sqrt_rho_max_mhz = 5.0;
    double omega_c_mhz = 0.5;
    double gamma_e_mhz = 3.035;            // Gamma_e / 2
    double gamma_s_per_us = 0.015;         // Gamma_s/2 + gamma_sg
    double sigma_z_um = 6.0;
    double half_length_um = 60.0;
    std::size_t z_points = 1201;
    std::size_t detuning_points = 801;
    double detuning_span_mhz = 2.0;
    double propagation_speed_um_per_us = 2000.0;
    double ramp_us = 1.0;
    double propagation_dt_us = 1e-3;
};

struct CampaignConfig {
    std::size_t realizations = 2000;
    std::uint64_t master_seed = 20160501;
    std::size_t overlap_pairs = 200;
    bool emit = true;
    std::size_t full_grid_keep = 16;
    double failure_budget = 0.01;
};

struct BudgetConfig {
    double eta = 0.6;
    double p_i_prime = 0.008;
    double p_eg = 0.1;
    double delta_theta_rad = 0.07 * kPi;
};

/// Complete parameter set of a run. Every field maps onto one JSON key; the
/// unit is part of the key name.
struct ExperimentConfig {
    std::string preset = "CsRb_70P";
    EnsembleConfig ensemble;
    PreparationConfig preparation;
    EmissionConfig emission;
    SingleStepConfig single_step;
    EitConfig eit;
    CampaignConfig campaign;
    BudgetConfig budget;

    const SpeciesPreset& species() const { return preset_lookup(preset); }
    CloudGeometry geometry() const;
    AngularRate omega_max() const;
    AngularRate intermediate_detuning() const;
    PulseSchedule schedule() const;
    PreparationSettings preparation_settings() const;
    EmissionGeometry emission_geometry() const;
    std::shared_ptr<const ModeGrid> mode_grid() const;
    AngularRate omega_c() const;
    AngularRate gamma_e() const;
};

nlohmann::json to_json(const ExperimentConfig& cfg);
/// Throws ConfigError on unknown keys, wrong types or missing sections
/// being of the wrong type. Missing keys keep their defaults.
ExperimentConfig config_from_json(const nlohmann::json& doc);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Applies "dotted.key=value" with the value parsed as JSON (bare words are
/// taken as strings). Throws ConfigError for unknown keys.
void apply_override(nlohmann::json& doc, std::string_view assignment);
ExperimentConfig apply_overrides(const ExperimentConfig& cfg, const std::vector<std::string>& assignments);

/// Hex SHA-256 of the canonical (sorted, compact) JSON of the config.
std::string config_hash(const ExperimentConfig& cfg);
std::string sha256_hex(std::string_view data);

struct ValidationReport {
    std::vector<std::string> warnings;
    AngularRate d_bar_estimate;   // median over the probe clouds
    double max_coupling_ratio = 0.0; // median of max_j |D_j| / |delta_sa|
};
/// Hard violations throw ConfigError; soft ones are returned (and passed to
/// warn()). Cloud-dependent checks use the median over the first
/// min(16, realizations) campaign clouds.
ValidationReport validate_config(const ExperimentConfig& cfg);

} // namespace rydsrc
