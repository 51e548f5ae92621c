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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "rydsrc/diagnostics.hpp"
#include "rydsrc/emission.hpp"
#include "rydsrc/ensemble.hpp"
#include "rydsrc/presets.hpp"
#include "rydsrc/quadrature.hpp"
#include "rydsrc/rng.hpp"

using namespace rydsrc;

namespace {

EmitterSet random_emitters(std::size_t n, double sigma, std::uint64_t stream)
{
    const auto cloud = sample_cloud(n, Vec3(sigma, sigma, 3.0 * sigma), 101, stream);
    RandomStream r = make_stream(101, stream, StreamPurpose::Test);
    std::vector<cplx> a;
    for (std::size_t j = 0; j < n; ++j)
        a.push_back(std::polar(0.5 + r.uniform_open(), kTwoPi * r.uniform_open()));
    return make_emitters(cloud, a, Vec3(0.0, 0.0, 8.0));
}

double sum_abs(const EmitterSet& e)
{
    double s = 0.0;
    for (const auto& w : e.weights)
        s += std::abs(w);
    return s;
}

} // namespace

TEST_CASE("mode grid covers the sphere")
{
    const auto g = make_mode_grid(32, 64, 8.0, {0.0});
    REQUIRE(g->n_directions() == 32 * 64);
    double w = 0.0;
    for (std::size_t d = 0; d < g->n_directions(); ++d) {
        w += g->weights[d];
        CHECK(g->directions[d].norm() == doctest::Approx(1.0));
    }
    CHECK(w == doctest::Approx(4.0 * kPi).epsilon(1e-12));
    // Direction index layout.
    CHECK(g->directions[3 * 64 + 5].z() == doctest::Approx(g->cos_theta[3]));
    CHECK_THROWS_AS(make_mode_grid(0, 4, 8.0, {0.0}), DomainError);
    const auto f = uniform_frequencies(5.0, 11);
    CHECK(f.front() == -5.0);
    CHECK(f.back() == 5.0);
    CHECK(f[5] == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("phase-sum kernel matches the naive double loop")
{
    const auto e = random_emitters(300, 1.0, 1);
    const auto g = make_mode_grid(24, 40, kTwoPi / 0.78024, {0.0});
    const auto fast = phase_sum(e, g->directions, g->k_magnitude);
    const auto naive = phase_sum_naive(e, g->directions, g->k_magnitude);
    const double scale = sum_abs(e);
    double worst = 0.0;
    for (std::size_t d = 0; d < fast.size(); ++d)
        worst = std::max(worst, std::abs(fast[d] - naive[d]) / scale);
    CHECK(worst <= 1e-12);

    // Bitwise independent of the worker count.
    const auto par = phase_sum(e, g->directions, g->k_magnitude, 3);
    for (std::size_t d = 0; d < fast.size(); ++d)
        CHECK(par[d] == fast[d]);
}

TEST_CASE("emitter weights carry the stored phase")
{
    const auto cloud = sample_cloud(5, Vec3(1.0, 1.0, 1.0), 2, 1);
    const std::vector<cplx> c{1.0, cplx(0, 1), 2.0, -1.0, 0.5};
    const Vec3 q(0.1, -0.2, 8.0);
    const auto e = make_emitters(cloud, c, q);
    for (std::size_t j = 0; j < 5; ++j)
        CHECK(std::abs(e.weights[j] - c[j] * std::polar(1.0, q.dot(cloud.positions[j]))) < 1e-15);

    const auto& preset = preset_lookup("CsRb_70P");
    const auto geo = make_emission_geometry(preset);
    CHECK(geo.k0.z() == doctest::Approx(kTwoPi / 0.297));
    CHECK(geo.kc.z() == doctest::Approx(kTwoPi / 0.480));
    CHECK(geo.k == doctest::Approx(kTwoPi / 0.78024));
    const auto tilted = make_emission_geometry(preset, 0.04 * kPi);
    CHECK(tilted.kc.norm() == doctest::Approx(kTwoPi / 0.480));
    CHECK(tilted.kc.x() == doctest::Approx(kTwoPi / 0.480 * std::sin(0.04 * kPi)));
    CHECK(tilted.q().x() < 0.0);
}

TEST_CASE("a single emitter radiates isotropically")
{
    EmitterSet one{{Vec3::Zero()}, {cplx(1.0, 0.0)}};
    const auto g = make_mode_grid(64, 32, 8.0, uniform_frequencies(10.0, 41));
    const auto spec = kernel_spectrum(*g, AngularRate::from_mhz(1.0), AngularRate::from_mhz(6.07));
    const auto st = photon_amplitudes(one, g, spec, 0.8);
    for (double p : st.p_angular)
        CHECK(p == doctest::Approx(0.8 / (4.0 * kPi)));
    for (double dth : {0.05, 0.07 * kPi, 0.5, 1.2}) {
        const auto c = cone_fraction(st, Vec3::UnitZ(), dth);
        CHECK(c.conditional == doctest::Approx(0.5 * (1.0 - std::cos(dth))).epsilon(1e-9));
        CHECK(c.absolute == doctest::Approx(0.8 * c.conditional));
        const auto down = cone_fraction(st, -Vec3::UnitZ(), dth);
        CHECK(down.conditional == doctest::Approx(c.conditional).epsilon(1e-9));
    }
    const auto cut = polar_cut(one, st.amplitude_scale, 8.0, CutPlane::XZ, 101);
    CHECK(cut.theta.front() == doctest::Approx(-kPi));
    CHECK(cut.theta.back() == doctest::Approx(kPi));
    CHECK(std::isnan(cut.fwhm));
}

TEST_CASE("exact sinc overlap agrees with grid quadrature")
{
    const double k = kTwoPi / 0.78024;
    const auto a = random_emitters(40, 0.6, 2);
    const auto b = random_emitters(40, 0.6, 3);
    const std::vector<cplx> spec{cplx(1.0, 0.0)};
    auto grid1 = make_mode_grid(96, 192, k, {0.0});
    const auto sa = photon_amplitudes(a, grid1, spec, 0.9);
    const auto sb = photon_amplitudes(b, grid1, spec, 0.7);
    const auto quad = mode_overlap(sa, sb);
    const auto exact = exact_overlap(a, sa.amplitude_scale, b, sb.amplitude_scale, k);
    CHECK(exact.raw == doctest::Approx(quad.raw).epsilon(1e-8));
    CHECK(exact.normalized == doctest::Approx(quad.normalized).epsilon(1e-8));
    // Self overlap is the total probability.
    CHECK(exact_overlap(a, sa.amplitude_scale, a, sa.amplitude_scale, k).raw == doctest::Approx(0.9));
    CHECK(mode_overlap(sa, sa).normalized == doctest::Approx(1.0));
    // Cauchy-Schwarz.
    CHECK(exact.normalized <= 1.0 + 1e-12);

    const auto other = photon_amplitudes(a, make_mode_grid(8, 8, k, {0.0}), spec, 0.9);
    CHECK_THROWS_AS(mode_overlap(sa, other), DomainError);

    // Cap overlap of a state with itself is 1.
    const auto cap = make_cap_grid(0.07 * kPi);
    double w = 0.0;
    for (double x : cap.weights)
        w += x;
    CHECK(w == doctest::Approx(kTwoPi * (1.0 - std::cos(0.07 * kPi))).epsilon(1e-12));
    const auto fa = phase_sum(a, cap.directions, k);
    CHECK(cap_overlap(cap, fa, fa).normalized == doctest::Approx(1.0));
}

TEST_CASE("coupling kernel is the time integral of the constant-control response")
{
    const auto oc = AngularRate::from_mhz(1.0);
    const auto ge = AngularRate::from_mhz(6.07);
    const double w = emission_linewidth(oc, ge);
    CHECK(w == doctest::Approx(std::pow(kTwoPi, 2) / (0.5 * kTwoPi * 6.07)));
    const double pref = oc.rad_per_us() / (0.5 * ge.rad_per_us());
    for (double dk : {-3.0 * w, 0.0, 0.4 * w, 7.0 * w}) {
        const double T = 2.0;
        // int_0^T exp((i dk - w) t) dt
        const double re = simpson([&](double t) { return std::exp(-w * t) * std::cos(dk * t); }, 0.0, T, 20000);
        const double im = simpson([&](double t) { return std::exp(-w * t) * std::sin(dk * t); }, 0.0, T, 20000);
        const cplx g = coupling_kernel(AngularRate::from_rad_per_us(dk), oc, ge, T);
        CHECK(std::abs(g - pref * cplx(re, im)) < 1e-9 * pref / w);
        const cplx inf = coupling_kernel(AngularRate::from_rad_per_us(dk), oc, ge);
        CHECK(std::abs(inf - pref / cplx(w, -dk)) < 1e-12 * pref / w);
    }
    WarningCapture cap;
    CHECK(coupling_kernel(AngularRate{}, AngularRate{}, ge) == cplx(0.0, 0.0));
    CHECK_FALSE(cap.messages().empty());
}

TEST_CASE("emission spectrum is a Lorentzian of half width w")
{
    const auto oc = AngularRate::from_mhz(1.0);
    const auto ge = AngularRate::from_mhz(6.07);
    const double w = emission_linewidth(oc, ge);
    const auto g = make_mode_grid(4, 4, 8.0, uniform_frequencies(20.0 * w, 401));
    const auto spec = kernel_spectrum(*g, oc, ge);
    double norm = 0.0;
    for (std::size_t f = 0; f < spec.size(); ++f)
        norm += g->freq_weights[f] * std::norm(spec[f]);
    CHECK(norm == doctest::Approx(1.0).epsilon(1e-12));
    std::vector<double> p;
    for (const auto& s : spec)
        p.push_back(std::norm(s));
    const auto fit = fit_lorentzian(g->frequencies, p, 10.0 * w);
    CHECK(fit.hwhm == doctest::Approx(w).epsilon(1e-6));
    CHECK(fwhm(g->frequencies, p) == doctest::Approx(2.0 * w).epsilon(1e-3));
}

TEST_CASE("fit and width helpers on known shapes")
{
    std::vector<double> x, lor, gau;
    for (int i = -500; i <= 500; ++i) {
        const double v = 0.01 * i;
        x.push_back(v);
        lor.push_back(3.0 / (1.0 + v * v / 0.25));
        gau.push_back(std::exp(-0.5 * v * v / 0.09));
    }
    const auto fit = fit_lorentzian(x, lor, 2.0);
    CHECK(fit.hwhm == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(fit.amplitude == doctest::Approx(3.0).epsilon(1e-10));
    CHECK(fwhm(x, gau) == doctest::Approx(2.0 * std::sqrt(2.0 * std::log(2.0)) * 0.3).epsilon(1e-3));
    CHECK_THROWS_AS(fit_lorentzian(x, lor, 0.001), DomainError);
}

TEST_CASE("participation fraction and inverse participation ratio")
{
    SpinWaveProfile uniform;
    for (int j = 0; j < 100; ++j) {
        uniform.envelope.push_back(cplx(0.1, 0.0));
        uniform.amplitudes.push_back(cplx(0.1, 0.0));
    }
    CHECK(participation_fraction(uniform) == doctest::Approx(1.0));
    CHECK(inverse_participation_ratio(uniform) == doctest::Approx(1.0));

    SpinWaveProfile single = uniform;
    std::fill(single.envelope.begin(), single.envelope.end(), cplx(0.0));
    std::fill(single.amplitudes.begin(), single.amplitudes.end(), cplx(0.0));
    single.envelope[3] = single.amplitudes[3] = 1.0;
    CHECK(participation_fraction(single) == doctest::Approx(0.01));
    CHECK(inverse_participation_ratio(single) == doctest::Approx(0.01));
}

TEST_CASE("photon budget formulas")
{
    const auto b = photon_budget(0.6, 1000, 0.07 * kPi, 0.008, 0.1);
    CHECK(b.delta_omega == doctest::Approx(kTwoPi * (1.0 - std::cos(0.07 * kPi))));
    CHECK(std::abs(b.delta_omega - 0.1514) <= 1e-3);
    CHECK(std::abs(b.p_multi - 0.0096) <= 1e-4);
    CHECK(b.p_delta_omega_geometric == doctest::Approx(0.5 * (1.0 - std::cos(0.07 * kPi))));
    CHECK(b.p_delta_omega_collective_raw == doctest::Approx(0.6 * 1000 * b.delta_omega / (4.0 * kPi)));
    CHECK(b.collective_saturated);
    CHECK(b.p_delta_omega_collective == 1.0);

    const auto z = photon_budget(0.6, 0, 0.07 * kPi, 0.008, 0.1);
    CHECK(z.p_multi == 0.0);
    CHECK(z.p_delta_omega_collective == 0.0);
    CHECK_FALSE(z.collective_saturated);

    CHECK_THROWS_AS(photon_budget(1.5, 10, 0.1, 0.0, 0.0), DomainError);
    CHECK_THROWS_AS(photon_budget(0.5, 10, 0.0, 0.0, 0.0), DomainError);
    CHECK_THROWS_AS(photon_budget(0.5, 10, 0.1, -0.1, 0.0), DomainError);
}

TEST_CASE("single-step emission under a constant drive")
{
    const auto cloud = sample_cloud(200, Vec3(1.0, 1.0, 6.0), 8, 1);
    const auto om = AngularRate::from_mhz(0.5);
    const auto delta = AngularRate::from_mhz(94.0);
    const auto field = build_coupling_field(cloud, Vec3(7.0, 0.0, 0.0), C3Coefficient{11.7}, om, delta);
    const auto oc = AngularRate::from_mhz(2.0);
    const auto ge = AngularRate::from_mhz(6.07);
    const double w = emission_linewidth(oc, ge);
    const double rate = field.d_bar.rad_per_us() * field.d_bar.rad_per_us() / w;
    const double T = 8.0 / rate;
    const auto sched = PulseSchedule::constant(om, AngularRate{}, T);
    const auto geo = make_emission_geometry(preset_lookup("CsRb_70P"));
    const auto grid = make_mode_grid(16, 32, geo.k, uniform_frequencies(30.0 * rate, 601));
    WarningCapture cap;
    const auto r = single_step_amplitudes(cloud, field, sched, oc, ge, DecayRate::per_us(0.0), geo, grid,
                                          T / 4000.0);
    // |c0(T)|^2 = exp(-2 D_bar^2 T / w)
    CHECK(r.extraction == doctest::Approx(1.0 - std::exp(-2.0 * rate * T)).epsilon(1e-9));
    CHECK(r.linewidth == doctest::Approx(w));
    CHECK(r.p_ground.back() == doctest::Approx(std::exp(-2.0 * rate * T)).epsilon(1e-3));
    // Spectrum of a decaying amplitude exp(-rate t): Lorentzian, HWHM = rate.
    const auto spec = r.photon.spectrum();
    const auto fit = fit_lorentzian(grid->frequencies, spec, 5.0 * rate);
    CHECK(fit.hwhm == doctest::Approx(rate).epsilon(0.02));

    WarningCapture strong;
    single_step_amplitudes(cloud, field, sched, AngularRate::from_mhz(4.0), ge, DecayRate::per_us(0.0), geo,
                           grid, T / 400.0);
    CHECK(strong.contains("Omega_c"));
    CHECK_THROWS_AS(single_step_amplitudes(cloud, field, sched, AngularRate{}, ge, DecayRate::per_us(0.0), geo,
                                           grid, T / 400.0),
                    DomainError);
}

TEST_CASE("CSV writers have stable headers")
{
    EmitterSet one{{Vec3::Zero()}, {cplx(1.0, 0.0)}};
    const auto g = make_mode_grid(2, 2, 8.0, {-1.0, 0.0, 1.0});
    const auto st = photon_amplitudes(one, g, {1.0, 1.0, 1.0}, 1.0);
    std::ostringstream a, s, c;
    write_angular_csv(a, st);
    write_spectrum_csv(s, st);
    write_cut_csv(c, polar_cut(one, 1.0, 8.0, CutPlane::YZ, 5));
    CHECK(a.str().rfind("theta_rad,phi_rad,weight,P\n", 0) == 0);
    CHECK(s.str().rfind("detuning_rad_per_us,P\n", 0) == 0);
    CHECK(c.str().rfind("theta_rad,P\n", 0) == 0);
}
