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

#include "rydsrc/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "rydsrc/diagnostics.hpp"
#include "rydsrc/output.hpp"
#include "rydsrc/parallel.hpp"
#include "rydsrc/rng.hpp"

namespace rydsrc {

using nlohmann::json;

namespace {

constexpr std::size_t kReductionBlock = 32;

} // namespace

CampaignContext CampaignContext::make(const ExperimentConfig& cfg)
{
    CampaignContext ctx;
    ctx.config = cfg;
    ctx.preset = &cfg.species();
    ctx.schedule = cfg.schedule();
    ctx.settings = cfg.preparation_settings();
    ctx.geometry = cfg.emission_geometry();
    if (cfg.campaign.emit) {
        ctx.grid = cfg.mode_grid();
        ctx.spectral = kernel_spectrum(*ctx.grid, cfg.omega_c(), cfg.gamma_e());
        ctx.coarse_grid = make_mode_grid(cfg.emission.coarse_theta, cfg.emission.coarse_phi, ctx.geometry.k, {0.0});
    }
    return ctx;
}

RealizationRecord run_realization(const CampaignContext& ctx, std::size_t index, bool keep_full)
{
    const auto& cfg = ctx.config;
    RealizationRecord rec;
    rec.index = index;
    rec.flagged = keep_full;
    try {
        const auto cloud =
            sample_cloud(cfg.geometry(), cfg.campaign.master_seed, stream_id(index, StreamPurpose::Cloud));
        rec.resampled = cloud.resampled;
        const auto field = build_coupling_field(cloud, cfg.ensemble.source_um, ctx.preset->c3, cfg.omega_max(),
                                                cfg.intermediate_detuning(), cfg.ensemble.dipole_axis.normalized());
        rec.d_bar = field.d_bar.rad_per_us();
        rec.short_range = field.short_range_count;
        if (cloud.size() > 0) {
            std::size_t nearest = 0;
            for (std::size_t j = 1; j < cloud.size(); ++j)
                if (cloud.positions[j].squaredNorm() < cloud.positions[nearest].squaredNorm())
                    nearest = j;
            rec.d_center = field.bare[nearest];
        }

        RandomStream noise = make_stream(cfg.campaign.master_seed, index, StreamPurpose::Dephasing);
        const auto traj = integrate_preparation(field, ctx.schedule, ctx.settings, &noise);
        const auto herald = heralding_report(traj, cfg.preparation.herald_threshold);
        rec.p_s = herald.p_s_final;
        rec.p_g = traj.final_state.population_ground();
        rec.norm_lost = herald.norm_lost;
        rec.heralded = herald.success;
        rec.max_norm_error = traj.max_norm_error;
        rec.times = traj.times;
        rec.p_ground_series = traj.p_ground;
        rec.p_spin_series = traj.p_spin_wave;
        rec.loss_series = traj.norm_lost;

        HistogramSpec hist;
        hist.bins = cfg.ensemble.hist_bins;
        const auto profile = spin_wave_profile(cloud, field, ctx.geometry.k0, cfg.ensemble.sigma_um, hist);
        rec.eta = participation_fraction(profile);
        rec.ipr = inverse_participation_ratio(profile);
        rec.p_x = profile.p_x;
        rec.p_y = profile.p_y;
        rec.p_z = profile.p_z;

        if (cfg.campaign.emit) {
            auto emitters = make_emitters(cloud, traj.final_state.c, ctx.geometry.q());
            auto state = photon_amplitudes(emitters, ctx.grid, ctx.spectral, rec.p_s);
            const auto cone = cone_fraction(state, Vec3::UnitZ(), cfg.emission.cone_half_angle_rad);
            rec.cone_fraction = cone.conditional;
            rec.cone_absolute = cone.absolute;
            rec.amplitude_scale = state.amplitude_scale;
            const double k = ctx.geometry.k;
            auto cx = polar_cut(emitters, state.amplitude_scale, k, CutPlane::XZ, cfg.emission.cut_points);
            auto cy = polar_cut(emitters, state.amplitude_scale, k, CutPlane::YZ, cfg.emission.cut_points);
            rec.fwhm_x = cx.fwhm;
            rec.fwhm_y = cy.fwhm;
            rec.cut_xz = std::move(cx.p);
            rec.cut_yz = std::move(cy.p);
            const auto coarse = phase_sum(emitters, ctx.coarse_grid->directions, k);
            rec.coarse_sphere.reserve(coarse.size());
            for (const auto& f : coarse)
                rec.coarse_sphere.push_back(state.amplitude_scale * state.amplitude_scale * std::norm(f));
            rec.p_angular = state.p_angular;
            if (keep_full)
                rec.full_state = std::move(state);
            rec.emitters = std::move(emitters);
            rec.emitted = true;
        }
        rec.ok = true;
    } catch (const std::exception& e) {
        rec.ok = false;
        rec.error = e.what();
        rec.emitted = false;
    }
    return rec;
}

Summary summarize(std::vector<double> v, std::size_t bins)
{
    Summary s;
    s.count = v.size();
    if (v.empty())
        return s;
    std::sort(v.begin(), v.end());
    s.min = v.front();
    s.max = v.back();
    const std::size_t n = v.size();
    s.median = n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
    double sum = 0.0;
    for (double x : v)
        sum += x;
    s.mean = std::clamp(sum / static_cast<double>(n), s.min, s.max);
    double ss = 0.0;
    for (double x : v)
        ss += (x - s.mean) * (x - s.mean);
    s.std = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
    s.hist_lo = s.min;
    s.hist_hi = s.max;
    s.hist_counts.assign(bins, 0);
    const double width = s.max - s.min;
    for (double x : v) {
        std::size_t b = 0;
        if (width > 0.0)
            b = std::min(bins - 1, static_cast<std::size_t>((x - s.min) / width * static_cast<double>(bins)));
        ++s.hist_counts[b];
    }
    return s;
}

json to_json(const Summary& s)
{
    return json{{"mean", s.mean},
                {"std", s.std},
                {"min", s.min},
                {"max", s.max},
                {"median", s.median},
                {"count", s.count},
                {"histogram", {{"lo", s.hist_lo}, {"hi", s.hist_hi}, {"counts", s.hist_counts}}}};
}

OverlapSummary overlap_sampling(const std::vector<RealizationRecord>& records, std::size_t n_pairs,
                                std::uint64_t seed, double k, double cap_half_angle, unsigned threads)
{
    std::vector<std::size_t> pool;
    for (std::size_t i = 0; i < records.size(); ++i)
        if (records[i].ok && records[i].emitted)
            pool.push_back(i);
    if (pool.size() < 2)
        throw DomainError("overlap_sampling: need at least two emitted realizations");
    const std::size_t n = pool.size();
    const std::size_t max_pairs = n * (n - 1) / 2;
    const std::size_t target = std::min(n_pairs, max_pairs);

    OverlapSummary out;
    RandomStream rng = make_stream(seed, 0, StreamPurpose::OverlapPairs);
    std::set<std::pair<std::size_t, std::size_t>> seen;
    while (out.pair_indices.size() < target) {
        const auto a = static_cast<std::size_t>(rng.uniform_open() * static_cast<double>(n));
        const auto b = static_cast<std::size_t>(rng.uniform_open() * static_cast<double>(n));
        if (a == b || a >= n || b >= n)
            continue;
        const auto key = std::minmax(pool[a], pool[b]);
        if (seen.insert(key).second)
            out.pair_indices.push_back(key);
    }

    // Cap amplitudes for the realizations that take part.
    const CapGrid cap = make_cap_grid(cap_half_angle, 24, 48);
    std::vector<std::size_t> involved;
    for (const auto& [a, b] : out.pair_indices) {
        involved.push_back(a);
        involved.push_back(b);
    }
    std::sort(involved.begin(), involved.end());
    involved.erase(std::unique(involved.begin(), involved.end()), involved.end());
    std::map<std::size_t, std::size_t> slot;
    for (std::size_t i = 0; i < involved.size(); ++i)
        slot[involved[i]] = i;
    std::vector<std::vector<cplx>> cap_f(involved.size());
    parallel_for(involved.size(), threads, [&](std::size_t i) {
        const auto& r = records[involved[i]];
        cap_f[i] = phase_sum(r.emitters, cap.directions, k);
    });

    struct PairResult {
        Overlap full, capped;
        double ratio = 0.0;
    };
    std::vector<PairResult> res(out.pair_indices.size());
    parallel_for(res.size(), threads, [&](std::size_t p) {
        const auto [a, b] = out.pair_indices[p];
        const auto& ra = records[a];
        const auto& rb = records[b];
        res[p].full = exact_overlap(ra.emitters, ra.amplitude_scale, rb.emitters, rb.amplitude_scale, k);
        const double den = std::sqrt(ra.p_s * rb.p_s);
        res[p].ratio = den > 0.0 ? res[p].full.raw / den : 0.0;
        res[p].capped = cap_overlap(cap, cap_f[slot.at(a)], cap_f[slot.at(b)]);
    });

    out.pairs = res.size();
    out.min_raw = out.min_normalized = out.min_ratio_to_p_s = out.cap_min_normalized = 1e300;
    for (const auto& r : res) {
        out.mean_raw += r.full.raw;
        out.mean_normalized += r.full.normalized;
        out.cap_mean_normalized += r.capped.normalized;
        out.min_raw = std::min(out.min_raw, r.full.raw);
        out.min_normalized = std::min(out.min_normalized, r.full.normalized);
        out.min_ratio_to_p_s = std::min(out.min_ratio_to_p_s, r.ratio);
        out.cap_min_normalized = std::min(out.cap_min_normalized, r.capped.normalized);
    }
    const auto m = static_cast<double>(res.size());
    out.mean_raw /= m;
    out.mean_normalized /= m;
    out.cap_mean_normalized /= m;
    out.meets_bound = out.min_ratio_to_p_s >= out.bound;
    return out;
}

namespace {

std::string utc_now()
{
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void accumulate(std::vector<double>& acc, const std::vector<double>& v)
{
    if (acc.empty())
        acc.assign(v.size(), 0.0);
    for (std::size_t i = 0; i < v.size() && i < acc.size(); ++i)
        acc[i] += v[i];
}

void scale(std::vector<double>& v, double s)
{
    for (auto& x : v)
        x *= s;
}

Histogram mean_histogram(const std::vector<RealizationRecord>& recs, Histogram RealizationRecord::*member)
{
    Histogram h;
    std::size_t count = 0;
    for (const auto& r : recs) {
        if (!r.ok)
            continue;
        const Histogram& x = r.*member;
        if (h.density.empty()) {
            h.lo = x.lo;
            h.hi = x.hi;
        }
        accumulate(h.density, x.density);
        ++count;
    }
    if (count)
        scale(h.density, 1.0 / static_cast<double>(count));
    return h;
}

} // namespace

json make_manifest(const ExperimentConfig& cfg, const std::vector<std::string>& overrides, const std::string& command)
{
    return json{{"schema_version", kSchemaVersion},
                {"command", command},
                {"config_hash", config_hash(cfg)},
                {"master_seed", cfg.campaign.master_seed},
                {"realizations", cfg.campaign.realizations},
                {"code_version", RYDSRC_VERSION},
                {"overrides", overrides},
                {"config", to_json(cfg)},
                {"timestamps", {{"started_utc", utc_now()}}}};
}

CampaignResult run_campaign(const ExperimentConfig& cfg, const CampaignOptions& options)
{
    validate_config(cfg);
    CampaignResult out;
    out.manifest = make_manifest(cfg, options.overrides, "campaign");
    const auto ctx = CampaignContext::make(cfg);
    out.grid = ctx.grid;
    const std::size_t n = cfg.campaign.realizations;
    const unsigned threads = resolve_threads(options.threads);
    out.records.resize(n);

    std::vector<double> angular_sum, cut_x_sum, cut_y_sum;
    std::size_t emitted = 0;
    for (std::size_t start = 0; start < n; start += kReductionBlock) {
        const std::size_t end = std::min(n, start + kReductionBlock);
        parallel_for(end - start, threads, [&](std::size_t i) {
            const std::size_t idx = start + i;
            out.records[idx] = run_realization(ctx, idx, idx < cfg.campaign.full_grid_keep);
        });
        for (std::size_t idx = start; idx < end; ++idx) {
            auto& r = out.records[idx];
            if (r.ok && r.emitted) {
                accumulate(angular_sum, r.p_angular);
                accumulate(cut_x_sum, r.cut_xz);
                accumulate(cut_y_sum, r.cut_yz);
                ++emitted;
            }
            r.p_angular.clear();
            r.p_angular.shrink_to_fit();
        }
    }

    std::vector<double> p_s, d_bar, eta, ipr, cone, cone_abs, fx, fy, loss, d_center;
    std::size_t heralded = 0, resampled = 0, short_range = 0;
    std::vector<json> failures;
    for (const auto& r : out.records) {
        if (!r.ok) {
            ++out.failures;
            failures.push_back({{"index", r.index}, {"error", r.error}});
            continue;
        }
        p_s.push_back(r.p_s);
        d_bar.push_back(r.d_bar / kTwoPi);
        d_center.push_back(r.d_center / kTwoPi);
        eta.push_back(r.eta);
        ipr.push_back(r.ipr);
        loss.push_back(r.norm_lost);
        heralded += r.heralded;
        resampled += r.resampled;
        short_range += r.short_range;
        if (r.emitted) {
            cone.push_back(r.cone_fraction);
            cone_abs.push_back(r.cone_absolute);
            fx.push_back(r.fwhm_x / kPi);
            fy.push_back(r.fwhm_y / kPi);
        }
        accumulate(out.mean_p_ground, r.p_ground_series);
        accumulate(out.mean_p_spin, r.p_spin_series);
        accumulate(out.mean_loss, r.loss_series);
    }
    const std::size_t good = n - out.failures;
    if (good) {
        const double s = 1.0 / static_cast<double>(good);
        scale(out.mean_p_ground, s);
        scale(out.mean_p_spin, s);
        scale(out.mean_loss, s);
    }
    if (emitted) {
        const double s = 1.0 / static_cast<double>(emitted);
        out.mean_p_angular = std::move(angular_sum);
        scale(out.mean_p_angular, s);
        out.mean_cut_xz = std::move(cut_x_sum);
        out.mean_cut_yz = std::move(cut_y_sum);
        scale(out.mean_cut_xz, s);
        scale(out.mean_cut_yz, s);
        for (std::size_t i = 0; i < out.mean_cut_xz.size(); ++i)
            out.cut_theta.push_back(-kPi + kTwoPi * static_cast<double>(i) /
                                               static_cast<double>(out.mean_cut_xz.size() - 1));
    }
    for (const auto& r : out.records)
        if (r.ok) {
            out.times = r.times;
            break;
        }
    out.mean_p_x = mean_histogram(out.records, &RealizationRecord::p_x);
    out.mean_p_y = mean_histogram(out.records, &RealizationRecord::p_y);
    out.mean_p_z = mean_histogram(out.records, &RealizationRecord::p_z);

    const double fail_frac = n ? static_cast<double>(out.failures) / static_cast<double>(n) : 0.0;
    out.failed = fail_frac > cfg.campaign.failure_budget;

    json stats;
    stats["schema_version"] = kSchemaVersion;
    stats["config_hash"] = out.manifest["config_hash"];
    stats["realizations"] = n;
    stats["succeeded"] = good;
    stats["failures"] = out.failures;
    stats["failure_fraction"] = fail_frac;
    stats["status"] = out.failed ? "failed" : "ok";
    stats["failed_realizations"] = failures;
    stats["single_realization"] = good == 1;
    const auto s_ps = summarize(p_s), s_db = summarize(d_bar), s_eta = summarize(eta);
    stats["p_s"] = to_json(s_ps);
    stats["norm_lost"] = to_json(summarize(loss));
    stats["d_bar_mhz"] = to_json(s_db);
    stats["d_center_mhz"] = to_json(summarize(d_center));
    stats["eta"] = to_json(s_eta);
    stats["inverse_participation_ratio"] = to_json(summarize(ipr));
    stats["herald_rate"] = good ? static_cast<double>(heralded) / static_cast<double>(good) : 0.0;
    stats["resampled_atoms"] = resampled;
    stats["short_range_pairs"] = short_range;

    json metrics{{"p_s_mean", s_ps.mean},
                 {"p_s_min", s_ps.min},
                 {"p_s_std", s_ps.std},
                 {"d_bar_mhz_median", s_db.median},
                 {"d_bar_mhz_mean", s_db.mean},
                 {"eta_mean", s_eta.mean},
                 {"herald_rate", stats["herald_rate"]},
                 {"failure_fraction", fail_frac}};
    if (emitted) {
        const auto s_cone = summarize(cone), s_fx = summarize(fx), s_fy = summarize(fy);
        stats["cone_fraction"] = to_json(s_cone);
        stats["cone_fraction_absolute"] = to_json(summarize(cone_abs));
        stats["fwhm_x_over_pi"] = to_json(s_fx);
        stats["fwhm_y_over_pi"] = to_json(s_fy);
        metrics["cone_fraction_mean"] = s_cone.mean;
        metrics["fwhm_x_over_pi_mean"] = s_fx.mean;
        metrics["fwhm_y_over_pi_mean"] = s_fy.mean;
        if (emitted >= 2 && cfg.campaign.overlap_pairs > 0) {
            const auto ov = overlap_sampling(out.records, cfg.campaign.overlap_pairs, cfg.campaign.master_seed,
                                             ctx.geometry.k, cfg.emission.cone_half_angle_rad, threads);
            stats["overlap"] = {{"pairs", ov.pairs},
                                {"mean_raw", ov.mean_raw},
                                {"min_raw", ov.min_raw},
                                {"mean_normalized", ov.mean_normalized},
                                {"min_normalized", ov.min_normalized},
                                {"min_ratio_to_p_s", ov.min_ratio_to_p_s},
                                {"bound", ov.bound},
                                {"meets_bound", ov.meets_bound},
                                {"cap_mean_normalized", ov.cap_mean_normalized},
                                {"cap_min_normalized", ov.cap_min_normalized}};
            metrics["overlap_min_ratio"] = ov.min_ratio_to_p_s;
            metrics["overlap_mean_normalized"] = ov.mean_normalized;
            metrics["overlap_cap_min_normalized"] = ov.cap_min_normalized;
        }
    }
    stats["metrics"] = metrics;
    out.stats = std::move(stats);
    out.manifest["timestamps"]["finished_utc"] = utc_now();
    return out;
}

void write_campaign_outputs(const CampaignResult& r, const std::filesystem::path& dir)
{
    std::filesystem::create_directories(dir);
    write_text_file(dir / "manifest.json", r.manifest.dump(2) + "\n");
    write_text_file(dir / "stats.json", dump_json_sci(r.stats));

    auto csv = [&](const std::filesystem::path& path, auto&& body) {
        std::ostringstream os;
        body(os);
        write_text_file(path, os.str());
    };
    csv(dir / "trajectories" / "mean.csv", [&](std::ostream& os) {
        write_csv_header(os, {"t_us", "P_G", "P_S", "norm_lost"});
        for (std::size_t i = 0; i < r.times.size() && i < r.mean_p_ground.size(); ++i)
            write_csv_row(os, {r.times[i], r.mean_p_ground[i], r.mean_p_spin[i], r.mean_loss[i]});
    });
    for (const auto& rec : r.records) {
        if (!rec.flagged || !rec.ok)
            continue;
        char name[48];
        std::snprintf(name, sizeof name, "realization_%05zu.csv", rec.index);
        csv(dir / "trajectories" / name, [&](std::ostream& os) {
            write_csv_header(os, {"t_us", "P_G", "P_S", "norm_lost"});
            for (std::size_t i = 0; i < r.times.size() && i < rec.p_ground_series.size(); ++i)
                write_csv_row(os, {r.times[i], rec.p_ground_series[i], rec.p_spin_series[i], rec.loss_series[i]});
        });
        if (rec.full_state) {
            std::snprintf(name, sizeof name, "realization_%05zu.csv", rec.index);
            csv(dir / "angular" / name, [&](std::ostream& os) { write_angular_csv(os, *rec.full_state); });
        }
    }
    if (r.grid && !r.mean_p_angular.empty()) {
        const ModeGrid& g = *r.grid;
        csv(dir / "angular" / "mean_sphere.csv", [&](std::ostream& os) {
            write_csv_header(os, {"theta_rad", "phi_rad", "weight", "P"});
            for (std::size_t t = 0; t < g.n_theta(); ++t)
                for (std::size_t p = 0; p < g.n_phi(); ++p) {
                    const std::size_t d = t * g.n_phi() + p;
                    write_csv_row(os, {std::acos(g.cos_theta[t]), g.phi[p], g.weights[d], r.mean_p_angular[d]});
                }
        });
        PolarCut cx{r.cut_theta, r.mean_cut_xz, 0.0}, cy{r.cut_theta, r.mean_cut_yz, 0.0};
        csv(dir / "angular" / "cut_xz.csv", [&](std::ostream& os) { write_cut_csv(os, cx); });
        csv(dir / "angular" / "cut_yz.csv", [&](std::ostream& os) { write_cut_csv(os, cy); });
    }
    csv(dir / "spinwave_hist.csv", [&](std::ostream& os) {
        write_csv_header(os, {"x_um", "p_x", "y_um", "p_y", "z_um", "p_z"});
        for (std::size_t i = 0; i < r.mean_p_x.bins(); ++i)
            write_csv_row(os, {r.mean_p_x.center(i), r.mean_p_x.density[i], r.mean_p_y.center(i),
                               r.mean_p_y.density[i], r.mean_p_z.center(i), r.mean_p_z.density[i]});
    });
}

} // namespace rydsrc
