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
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rydsrc/config.hpp"
#include "rydsrc/emission.hpp"
#include "rydsrc/ensemble.hpp"
#include "rydsrc/preparation.hpp"

namespace rydsrc {

/// Everything a realization needs that does not depend on its index.
struct CampaignContext {
    ExperimentConfig config;
    const SpeciesPreset* preset = nullptr;
    PulseSchedule schedule = PulseSchedule::constant(AngularRate{}, AngularRate{}, 1.0);
    PreparationSettings settings;
    EmissionGeometry geometry;
    std::shared_ptr<const ModeGrid> grid;
    std::vector<cplx> spectral;
    std::shared_ptr<const ModeGrid> coarse_grid;

    static CampaignContext make(const ExperimentConfig& cfg);
};

struct RealizationRecord {
    std::size_t index = 0;
    bool ok = false;
    std::string error;

    double p_s = 0.0;
    double p_g = 0.0;
    double norm_lost = 0.0;
    double max_norm_error = 0.0;
    bool heralded = false;
    double d_bar = 0.0;  // rad/us
    double d_center = 0.0; // bare coupling of the atom nearest the cloud centre, rad/us
    double eta = 0.0;
    double ipr = 0.0;
    std::size_t resampled = 0;
    std::size_t short_range = 0;

    bool emitted = false;
    double cone_fraction = 0.0;    // conditional
    double cone_absolute = 0.0;
    double fwhm_x = 0.0;
    double fwhm_y = 0.0;
    double amplitude_scale = 0.0;
    std::vector<double> cut_xz;
    std::vector<double> cut_yz;
    std::vector<double> coarse_sphere;
    EmitterSet emitters;

    Histogram p_x, p_y, p_z;
    std::vector<double> times, p_ground_series, p_spin_series, loss_series;

    // Retained only for flagged realizations.
    bool flagged = false;
    std::optional<PhotonState> full_state;
    std::vector<double> p_angular; // transient: consumed by the reduction
};

/// Runs realization `index` exactly as a campaign would.
RealizationRecord run_realization(const CampaignContext& ctx, std::size_t index, bool keep_full_grid);

struct Summary {
    double mean = 0.0;
    double std = 0.0;
    double min = 0.0;
    double max = 0.0;
    double median = 0.0;
    std::size_t count = 0;
    double hist_lo = 0.0;
    double hist_hi = 0.0;
    std::vector<std::size_t> hist_counts;
};
/// Population statistics with a 20-bin histogram over [min, max]. Values are
/// sorted internally, so the result does not depend on input order.
Summary summarize(std::vector<double> values, std::size_t bins = 20);
nlohmann::json to_json(const Summary& s);

struct OverlapSummary {
    std::size_t pairs = 0;
    double mean_raw = 0.0;
    double min_raw = 0.0;
    double mean_normalized = 0.0;
    double min_normalized = 0.0;
    double min_ratio_to_p_s = 0.0;  // min raw / sqrt(P_S,m P_S,m')
    double cap_mean_normalized = 0.0;
    double cap_min_normalized = 0.0;
    double bound = 0.96;
    bool meets_bound = false;
    std::vector<std::pair<std::size_t, std::size_t>> pair_indices;
};
/// |<psi_m|psi_m'>| over up to `n_pairs` distinct unordered pairs drawn with
/// the OverlapPairs stream of `seed`. Uses the exact full-sphere route.
/// Throws DomainError with fewer than two emitted records.
OverlapSummary overlap_sampling(const std::vector<RealizationRecord>& records, std::size_t n_pairs,
                                std::uint64_t seed, double k, double cap_half_angle, unsigned threads = 1);

struct CampaignResult {
    nlohmann::json manifest;
    nlohmann::json stats;
    std::vector<RealizationRecord> records;
    std::vector<double> mean_p_angular;
    std::shared_ptr<const ModeGrid> grid;
    std::vector<double> times;
    std::vector<double> mean_p_ground, mean_p_spin, mean_loss;
    std::vector<double> mean_cut_xz, mean_cut_yz, cut_theta;
    Histogram mean_p_x, mean_p_y, mean_p_z;
    std::size_t failures = 0;
    bool failed = false;
};

struct CampaignOptions {
    unsigned threads = 1;
    std::vector<std::string> overrides; // recorded in the manifest
};

/// sample -> couple -> prepare -> emit for every realization, then ordered
/// reduction. Statistics are bit-identical for any thread count.
CampaignResult run_campaign(const ExperimentConfig& cfg, const CampaignOptions& options = {});

/// manifest.json, stats.json, trajectories/, angular/, spinwave_hist.csv.
void write_campaign_outputs(const CampaignResult& result, const std::filesystem::path& dir);

/// Manifest fields shared by all commands.
nlohmann::json make_manifest(const ExperimentConfig& cfg, const std::vector<std::string>& overrides,
                             const std::string& command);

} // namespace rydsrc
