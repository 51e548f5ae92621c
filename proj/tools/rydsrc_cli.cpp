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

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "rydsrc/config.hpp"
#include "rydsrc/diagnostics.hpp"
#include "rydsrc/eit.hpp"
#include "rydsrc/emission.hpp"
#include "rydsrc/ensemble.hpp"
#include "rydsrc/harness.hpp"
#include "rydsrc/output.hpp"
#include "rydsrc/parallel.hpp"
#include "rydsrc/preparation.hpp"
#include "rydsrc/two_level.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace rydsrc;

namespace {

struct Common {
    std::string config_path;
    std::string out_dir = "out";
    std::optional<std::uint64_t> seed;
    unsigned threads = 0;
    std::vector<std::string> overrides;
    std::vector<std::string> asserts;
};

class AssertionMiss : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

unsigned thread_count(const Common& c)
{
    if (c.threads > 0)
        return c.threads;
    if (const char* env = std::getenv("RYD_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v > 0)
                return static_cast<unsigned>(v);
        } catch (const std::exception&) {
        }
        throw ConfigError(std::string("RYD_THREADS must be a positive integer, got '") + env + "'");
    }
    return resolve_threads(0);
}

ExperimentConfig resolve_config(const Common& c)
{
    ExperimentConfig cfg;
    if (!c.config_path.empty())
        cfg = load_config(c.config_path);
    cfg = apply_overrides(cfg, c.overrides);
    if (c.seed)
        cfg.campaign.master_seed = *c.seed;
    return cfg;
}

std::vector<std::string> recorded_overrides(const Common& c)
{
    auto v = c.overrides;
    if (c.seed)
        v.push_back("campaign.master_seed=" + std::to_string(*c.seed));
    return v;
}

// "name OP value" with OP one of >=, <=, ==, >, <.
void check_assertions(const std::vector<std::string>& exprs, const json& metrics)
{
    static const std::regex re(R"(^\s*([A-Za-z0-9_.]+)\s*(>=|<=|==|>|<)\s*([-+0-9.eE]+)\s*$)");
    std::vector<std::string> misses;
    for (const auto& e : exprs) {
        std::smatch m;
        if (!std::regex_match(e, m, re))
            throw ConfigError("cannot parse --assert '" + e + "'");
        const std::string name = m[1];
        if (!metrics.contains(name) || !metrics[name].is_number())
            throw ConfigError("--assert: unknown metric '" + name + "'");
        const double lhs = metrics[name].get<double>();
        const double rhs = std::stod(m[3]);
        const std::string op = m[2];
        const bool ok = op == ">=" ? lhs >= rhs : op == "<=" ? lhs <= rhs : op == "==" ? lhs == rhs
                        : op == ">" ? lhs > rhs : lhs < rhs;
        std::cerr << (ok ? "assert ok:   " : "assert MISS: ") << e << " (" << name << " = " << sci(lhs) << ")\n";
        if (!ok)
            misses.push_back(e);
    }
    if (!misses.empty())
        throw AssertionMiss(std::to_string(misses.size()) + " assertion(s) missed");
}

template <class F>
void write_csv(const fs::path& path, F&& body)
{
    std::ostringstream os;
    body(os);
    write_text_file(path, os.str());
}

void finish(const Common& c, const ExperimentConfig& cfg, const std::string& command, json metrics)
{
    const fs::path out(c.out_dir);
    auto manifest = make_manifest(cfg, recorded_overrides(c), command);
    write_text_file(out / "manifest.json", manifest.dump(2) + "\n");
    write_text_file(out / "metrics.json", dump_json_sci(metrics));
    std::cout << dump_json_sci(metrics);
    check_assertions(c.asserts, metrics);
}

struct Prepared {
    AtomCloud cloud;
    CouplingField field;
    Trajectory trajectory;
};

Prepared prepare_one(const ExperimentConfig& cfg, std::size_t index)
{
    Prepared p;
    p.cloud = sample_cloud(cfg.geometry(), cfg.campaign.master_seed, stream_id(index, StreamPurpose::Cloud));
    p.field = build_coupling_field(p.cloud, cfg.ensemble.source_um, cfg.species().c3, cfg.omega_max(),
                                   cfg.intermediate_detuning(), cfg.ensemble.dipole_axis.normalized());
    RandomStream noise = make_stream(cfg.campaign.master_seed, index, StreamPurpose::Dephasing);
    p.trajectory = integrate_preparation(p.field, cfg.schedule(), cfg.preparation_settings(), &noise);
    return p;
}

void cmd_prepare(const Common& c, std::size_t index)
{
    const auto cfg = resolve_config(c);
    validate_config(cfg);
    const auto p = prepare_one(cfg, index);
    const fs::path out(c.out_dir);
    write_csv(out / "trajectory.csv", [&](std::ostream& os) { write_trajectory_csv(os, p.trajectory); });
    HistogramSpec hist;
    hist.bins = cfg.ensemble.hist_bins;
    const auto geom = cfg.emission_geometry();
    const auto profile = spin_wave_profile(p.cloud, p.field, geom.k0, cfg.ensemble.sigma_um, hist);
    write_csv(out / "spinwave_hist.csv", [&](std::ostream& os) {
        write_csv_header(os, {"x_um", "p_x", "y_um", "p_y", "z_um", "p_z"});
        for (std::size_t i = 0; i < profile.p_x.bins(); ++i)
            write_csv_row(os, {profile.p_x.center(i), profile.p_x.density[i], profile.p_y.center(i),
                               profile.p_y.density[i], profile.p_z.center(i), profile.p_z.density[i]});
    });
    const auto herald = heralding_report(p.trajectory, cfg.preparation.herald_threshold);
    finish(c, cfg, "prepare",
           json{{"p_s", herald.p_s_final},
                {"p_g", p.trajectory.final_state.population_ground()},
                {"norm_lost", herald.norm_lost},
                {"heralded", herald.success ? 1 : 0},
                {"d_bar_mhz", p.field.d_bar.mhz()},
                {"eta", participation_fraction(profile)},
                {"max_norm_error", p.trajectory.max_norm_error}});
}

void cmd_emit(const Common& c, std::size_t index)
{
    const auto cfg = apply_overrides(resolve_config(c), {"campaign.emit=true"});
    validate_config(cfg);
    const auto ctx = CampaignContext::make(cfg);
    auto rec = run_realization(ctx, index, true);
    if (!rec.ok)
        throw IntegrationError("realization " + std::to_string(index) + " failed: " + rec.error);
    const fs::path out(c.out_dir);
    const auto& state = *rec.full_state;
    write_csv(out / "angular_sphere.csv", [&](std::ostream& os) { write_angular_csv(os, state); });
    write_csv(out / "spectrum.csv", [&](std::ostream& os) { write_spectrum_csv(os, state); });
    const double k = ctx.geometry.k;
    for (auto [plane, name] : {std::pair{CutPlane::XZ, "cut_xz.csv"}, std::pair{CutPlane::YZ, "cut_yz.csv"}}) {
        const auto cut = polar_cut(rec.emitters, rec.amplitude_scale, k, plane, cfg.emission.cut_points);
        write_csv(out / name, [&](std::ostream& os) { write_cut_csv(os, cut); });
    }
    finish(c, cfg, "emit",
           json{{"p_s", rec.p_s},
                {"cone_fraction", rec.cone_fraction},
                {"cone_absolute", rec.cone_absolute},
                {"fwhm_x_over_pi", rec.fwhm_x / kPi},
                {"fwhm_y_over_pi", rec.fwhm_y / kPi},
                {"eta", rec.eta}});
}

void cmd_single_step(const Common& c)
{
    const auto cfg = resolve_config(c);
    const auto& ss = cfg.single_step;
    const auto omega = AngularRate::from_mhz(ss.omega_max_mhz);
    const auto omega_c = AngularRate::from_mhz(ss.omega_c_mhz);
    const auto delta = cfg.intermediate_detuning();
    const auto two_photon = AngularRate::from_mhz(ss.two_photon_detuning_mhz);
    const auto schedule =
        PulseSchedule::sin2_ramp(omega, ss.ramp_us, ss.plateau_end_us, ss.t_final_us, two_photon, two_photon)
            .with_phase(cfg.preparation.omega_phase_rad);
    const auto cloud =
        sample_cloud(cfg.geometry(), cfg.campaign.master_seed, stream_id(0, StreamPurpose::Cloud));
    const auto field = build_coupling_field(cloud, cfg.ensemble.source_um, cfg.species().c3, omega, delta,
                                            cfg.ensemble.dipole_axis.normalized());
    const double w = emission_linewidth(omega_c, cfg.gamma_e());
    const auto geom = cfg.emission_geometry();
    const auto grid = make_mode_grid(cfg.emission.n_theta, cfg.emission.n_phi, geom.k,
                                     uniform_frequencies(ss.freq_window_rates * w, cfg.emission.n_freq));
    const auto r = single_step_amplitudes(cloud, field, schedule, omega_c, cfg.gamma_e(),
                                          DecayRate::per_us(cfg.preparation.gamma_s_per_us), geom, grid, ss.dt_us,
                                          thread_count(c));
    const fs::path out(c.out_dir);
    write_csv(out / "spectrum.csv", [&](std::ostream& os) { write_spectrum_csv(os, r.photon); });
    write_csv(out / "emission.csv", [&](std::ostream& os) {
        write_csv_header(os, {"t_us", "P_G", "rate_per_us"});
        for (std::size_t i = 0; i < r.times.size(); ++i)
            write_csv_row(os, {r.times[i], r.p_ground[i], r.emission_rate[i]});
    });
    const auto spec = r.photon.spectrum();
    const double width = fwhm(grid->frequencies, spec);
    const auto cone = cone_fraction(r.photon, Vec3::UnitZ(), cfg.emission.cone_half_angle_rad);
    finish(c, cfg, "single-step",
           json{{"extraction", r.extraction},
                {"linewidth_mhz", w / kTwoPi},
                {"spectrum_fwhm_mhz", width / kTwoPi},
                {"cone_fraction", cone.conditional}});
}

void cmd_eit(const Common& c)
{
    const auto cfg = resolve_config(c);
    const auto& e = cfg.eit;
    EitParameters p;
    p.g = AngularRate::from_mhz(e.g_sqrt_rho_max_mhz).rad_per_us();
    p.gamma_e = AngularRate::from_mhz(e.gamma_e_mhz);
    p.gamma_s = DecayRate::per_us(e.gamma_s_per_us);
    p.omega_c = AngularRate::from_mhz(e.omega_c_mhz);
    p.omega_p = kTwoPi * kSpeedOfLight / (cfg.species().lambda_photon_nm * 1e-3);
    const auto medium = make_gaussian_medium(p, e.sigma_z_um, 1.0, e.half_length_um, e.z_points);

    const double span = AngularRate::from_mhz(e.detuning_span_mhz).rad_per_us();
    std::vector<double> det;
    for (std::size_t i = 0; i < e.detuning_points; ++i)
        det.push_back(-span + 2.0 * span * static_cast<double>(i) / static_cast<double>(e.detuning_points - 1));
    const fs::path out(c.out_dir);
    write_csv(out / "susceptibility.csv", [&](std::ostream& os) { write_susceptibility_csv(os, p, 1.0, det); });

    // Storage: the control field ramps linearly to zero over ramp_us.
    const double c_prop = e.propagation_speed_um_per_us;
    auto theta_of_t = [&](double t) {
        const double f = std::max(0.0, 1.0 - t / e.ramp_us);
        return mixing_angle(p.g, 1.0, p.omega_c * f);
    };
    PolaritonField in;
    in.z = medium.z;
    in.theta = theta_of_t(0.0);
    const double z0 = -0.25 * e.half_length_um, width = 0.05 * e.half_length_um;
    for (double z : in.z)
        in.psi.emplace_back(std::exp(-0.5 * (z - z0) * (z - z0) / (width * width)));
    const auto res = polariton_propagate(in, theta_of_t, e.ramp_us, e.propagation_dt_us, c_prop);
    write_csv(out / "polariton_in.csv", [&](std::ostream& os) { write_polariton_csv(os, in); });
    write_csv(out / "polariton_out.csv", [&](std::ostream& os) { write_polariton_csv(os, res.field); });

    const double hwhm = transparency_hwhm(p, 1.0, 20.0 * p.gamma_e.rad_per_us());
    const double expansion = transparency_hwhm_expansion(p);
    finish(c, cfg, "eit",
           json{{"im_chi_zero", susceptibility(p, 1.0, AngularRate{}).imag()},
                {"hwhm_mhz", hwhm / kTwoPi},
                {"hwhm_expansion_mhz", expansion / kTwoPi},
                {"hwhm_relative_deviation", std::abs(hwhm - expansion) / expansion},
                {"group_velocity_um_per_us", group_velocity(theta_of_t(0.0), c_prop)},
                {"displacement_um", res.displacement},
                {"norm_ratio", res.field.norm() / in.norm()}});
}

void cmd_campaign(const Common& c)
{
    const auto cfg = resolve_config(c);
    CampaignOptions opt;
    opt.threads = thread_count(c);
    opt.overrides = recorded_overrides(c);
    const auto result = run_campaign(cfg, opt);
    write_campaign_outputs(result, c.out_dir);
    std::cout << dump_json_sci(result.stats["metrics"]);
    if (result.failed)
        throw IntegrationError("campaign failed: " + std::to_string(result.failures) +
                               " realization(s) failed, above the failure budget");
    check_assertions(c.asserts, result.stats["metrics"]);
}

void cmd_lz_validate(const Common& c, double d_bar_mhz, std::vector<double> alphas)
{
    const auto cfg = resolve_config(c);
    const auto d = AngularRate::from_mhz(d_bar_mhz);
    const double d2 = d.rad_per_us() * d.rad_per_us();
    if (alphas.empty()) {
        // log-spaced in P over [1e-3, 0.9]
        for (int i = 0; i < 10; ++i) {
            const double lp = std::log(1e-3) + (std::log(0.9) - std::log(1e-3)) * i / 9.0;
            alphas.push_back(-kTwoPi * d2 / lp);
        }
    }
    double max_err = 0.0;
    std::ostringstream os;
    write_csv_header(os, {"alpha", "analytic", "numeric", "abs_error"});
    for (double a : alphas) {
        if (!(a > 0.0))
            throw ConfigError("lz-validate: alpha must be positive");
        const auto r = lz_sweep_numeric(d, a);
        write_csv_row(os, {r.alpha, r.analytic, r.numeric, r.abs_error()});
        max_err = std::max(max_err, r.abs_error());
    }
    write_text_file(fs::path(c.out_dir) / "lz.csv", os.str());
    std::cout << os.str();
    auto asserts = c.asserts;
    asserts.push_back("max_abs_error<2e-3");
    Common cc = c;
    cc.asserts = asserts;
    finish(cc, cfg, "lz-validate", json{{"max_abs_error", max_err}, {"d_bar_mhz", d_bar_mhz}});
}

void cmd_budget(const Common& c)
{
    const auto cfg = resolve_config(c);
    const auto& b = cfg.budget;
    const auto r = photon_budget(b.eta, cfg.ensemble.n_atoms, b.delta_theta_rad, b.p_i_prime, b.p_eg);
    json metrics{{"eta", r.eta},
                 {"n_atoms", r.n_atoms},
                 {"delta_theta_rad", r.delta_theta},
                 {"delta_omega_sr", r.delta_omega},
                 {"p_delta_omega_collective_raw", r.p_delta_omega_collective_raw},
                 {"p_delta_omega_collective", r.p_delta_omega_collective},
                 {"collective_saturated", r.collective_saturated ? 1 : 0},
                 {"p_delta_omega_geometric", r.p_delta_omega_geometric},
                 {"p_i_prime", r.p_i_prime},
                 {"p_eg", r.p_eg},
                 {"p_multi", r.p_multi}};
    finish(c, cfg, "budget", metrics);
}

void cmd_presets()
{
    std::cout << "name,c3_ghz_um3,delta_sa_mhz,lambda_excite_nm,lambda_control_nm,lambda_photon_nm,gamma_e_mhz\n";
    for (const auto& p : all_presets())
        std::cout << p.name << ',' << sci(p.c3.ghz_um3) << ',' << sci(p.delta_sa.mhz()) << ','
                  << sci(p.lambda_excite_nm) << ',' << sci(p.lambda_control_nm) << ',' << sci(p.lambda_photon_nm)
                  << ',' << sci(p.gamma_e.mhz()) << '\n';
}

void add_common(CLI::App* sub, Common& c)
{
    sub->add_option("--config", c.config_path, "JSON configuration file")->check(CLI::ExistingFile);
    sub->add_option("--out", c.out_dir, "output directory");
    sub->add_option("--seed", c.seed, "master seed (overrides campaign.master_seed)");
    sub->add_option("--threads", c.threads, "worker cap (default: RYD_THREADS or all cores)");
    sub->add_option("--set", c.overrides, "dotted.key=value override, repeatable")->take_all();
    sub->add_option("--assert", c.asserts, "metric OP value, repeatable")->take_all();
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Rydberg single-photon source simulator"};
    app.require_subcommand(1);
    Common c;
    std::size_t index = 0;
    double lz_d_bar = 13.0;
    std::vector<double> lz_alphas;

    auto* prepare = app.add_subcommand("prepare", "prepare one spin wave");
    auto* emit = app.add_subcommand("emit", "prepare and emit one photon");
    auto* single = app.add_subcommand("single-step", "single-step creation with constant control");
    auto* eit = app.add_subcommand("eit", "EIT susceptibility and polariton storage");
    auto* campaign = app.add_subcommand("campaign", "Monte Carlo campaign over realizations");
    auto* lz = app.add_subcommand("lz-validate", "Landau-Zener sweep check");
    auto* budget = app.add_subcommand("budget", "multi-photon budget");
    app.add_subcommand("presets", "list species presets");
    for (auto* s : {prepare, emit, single, eit, campaign, lz, budget})
        add_common(s, c);
    for (auto* s : {prepare, emit})
        s->add_option("--index", index, "realization index");
    lz->add_option("--d-bar-mhz", lz_d_bar, "collective coupling D_bar / 2pi in MHz")->check(CLI::PositiveNumber);
    lz->add_option("--alpha", lz_alphas, "chirp rates in rad/us^2")->take_all();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        const std::string name = app.get_subcommands().front()->get_name();
        if (name == "prepare")
            cmd_prepare(c, index);
        else if (name == "emit")
            cmd_emit(c, index);
        else if (name == "single-step")
            cmd_single_step(c);
        else if (name == "eit")
            cmd_eit(c);
        else if (name == "campaign")
            cmd_campaign(c);
        else if (name == "lz-validate")
            cmd_lz_validate(c, lz_d_bar, lz_alphas);
        else if (name == "budget")
            cmd_budget(c);
        else
            cmd_presets();
    } catch (const AssertionMiss& e) {
        std::cerr << "rydsrc: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "rydsrc: error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
