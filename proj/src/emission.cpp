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

#include "rydsrc/emission.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>

#include "rydsrc/diagnostics.hpp"
#include "rydsrc/output.hpp"
#include "rydsrc/parallel.hpp"
#include "rydsrc/quadrature.hpp"

namespace rydsrc {

namespace {

const cplx kI(0.0, 1.0);

double sinc(double x)
{
    if (std::abs(x) < 1e-4) {
        const double x2 = x * x;
        return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
    }
    return std::sin(x) / x;
}

} // namespace

bool ModeGrid::same_layout(const ModeGrid& o) const
{
    return this == &o || (cos_theta == o.cos_theta && phi == o.phi && frequencies == o.frequencies &&
                          k_magnitude == o.k_magnitude);
}

std::vector<double> uniform_frequencies(double half_width, std::size_t n)
{
    if (n == 0)
        return {};
    if (n == 1)
        return {0.0};
    std::vector<double> f(n);
    for (std::size_t i = 0; i < n; ++i)
        f[i] = -half_width + 2.0 * half_width * static_cast<double>(i) / static_cast<double>(n - 1);
    return f;
}

std::shared_ptr<const ModeGrid> make_mode_grid(std::size_t n_theta, std::size_t n_phi, double k,
                                               std::vector<double> frequencies)
{
    if (n_theta == 0 || n_phi == 0)
        throw DomainError("mode grid: empty direction grid");
    if (frequencies.empty())
        throw DomainError("mode grid: empty frequency grid");
    auto g = std::make_shared<ModeGrid>();
    auto rule = gauss_legendre(n_theta);
    g->cos_theta = rule.nodes;
    g->cos_weights = rule.weights;
    g->k_magnitude = k;
    const double dphi = kTwoPi / static_cast<double>(n_phi);
    for (std::size_t p = 0; p < n_phi; ++p)
        g->phi.push_back(dphi * static_cast<double>(p));
    g->directions.reserve(n_theta * n_phi);
    g->weights.reserve(n_theta * n_phi);
    for (std::size_t t = 0; t < n_theta; ++t) {
        const double ct = g->cos_theta[t];
        const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
        for (std::size_t p = 0; p < n_phi; ++p) {
            g->directions.emplace_back(st * std::cos(g->phi[p]), st * std::sin(g->phi[p]), ct);
            g->weights.push_back(g->cos_weights[t] * dphi);
        }
    }
    g->frequencies = std::move(frequencies);
    const std::size_t nf = g->frequencies.size();
    g->freq_weights.assign(nf, 1.0);
    if (nf > 1) {
        for (std::size_t i = 0; i < nf; ++i) {
            const double left = i > 0 ? g->frequencies[i] - g->frequencies[i - 1] : 0.0;
            const double right = i + 1 < nf ? g->frequencies[i + 1] - g->frequencies[i] : 0.0;
            g->freq_weights[i] = 0.5 * (left + right);
        }
    }
    return g;
}

double emission_linewidth(AngularRate omega_c, AngularRate gamma_e)
{
    if (!(gamma_e.rad_per_us() > 0.0))
        throw DomainError("emission linewidth: Gamma_e must be positive");
    const double oc = omega_c.rad_per_us();
    return oc * oc / (0.5 * gamma_e.rad_per_us());
}

std::complex<double> coupling_kernel(AngularRate detuning, AngularRate omega_c, AngularRate gamma_e,
                                     std::optional<double> t_us)
{
    const double w = emission_linewidth(omega_c, gamma_e);
    if (omega_c.rad_per_us() == 0.0) {
        warn("coupling kernel: Omega_c = 0, no photon is emitted");
        return {};
    }
    const double dk = detuning.rad_per_us();
    const cplx pref = omega_c.rad_per_us() / (0.5 * gamma_e.rad_per_us()); // Omega_c real
    const cplx denom(w, -dk);
    if (!t_us)
        return pref / denom;
    const cplx decay = std::exp(cplx(-w, dk) * *t_us);
    return pref * (1.0 - decay) / denom;
}

EmissionGeometry make_emission_geometry(const SpeciesPreset& preset, double tilt)
{
    EmissionGeometry g;
    g.k = phase_match_wavenumber(preset);
    g.k0 = Vec3(0.0, 0.0, wavenumber_per_um(preset.lambda_excite_nm));
    const double kc = wavenumber_per_um(preset.lambda_control_nm);
    g.kc = Vec3(kc * std::sin(tilt), 0.0, kc * std::cos(tilt));
    return g;
}

EmitterSet make_emitters(const AtomCloud& cloud, std::span<const cplx> amplitudes, const Vec3& q)
{
    if (amplitudes.size() != cloud.size())
        throw DomainError("make_emitters: amplitude count does not match the cloud");
    EmitterSet e;
    e.positions = cloud.positions;
    e.weights.resize(cloud.size());
    for (std::size_t j = 0; j < cloud.size(); ++j)
        e.weights[j] = amplitudes[j] * std::polar(1.0, q.dot(cloud.positions[j]));
    return e;
}

std::vector<cplx> phase_sum(const EmitterSet& e, std::span<const Vec3> directions, double k, unsigned threads)
{
    const std::size_t n = e.size();
    std::vector<double> x(n), y(n), z(n), wr(n), wi(n);
    for (std::size_t j = 0; j < n; ++j) {
        x[j] = -k * e.positions[j].x();
        y[j] = -k * e.positions[j].y();
        z[j] = -k * e.positions[j].z();
        wr[j] = e.weights[j].real();
        wi[j] = e.weights[j].imag();
    }
    std::vector<cplx> out(directions.size());
    constexpr std::size_t kChunk = 64;
    const std::size_t chunks = (directions.size() + kChunk - 1) / kChunk;
    parallel_for(chunks, threads, [&](std::size_t c) {
        const std::size_t end = std::min(directions.size(), (c + 1) * kChunk);
        for (std::size_t d = c * kChunk; d < end; ++d) {
            const double nx = directions[d].x(), ny = directions[d].y(), nz = directions[d].z();
            double re = 0.0, im = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                const double ph = nx * x[j] + ny * y[j] + nz * z[j];
                const double cs = std::cos(ph), sn = std::sin(ph);
                re += wr[j] * cs - wi[j] * sn;
                im += wr[j] * sn + wi[j] * cs;
            }
            out[d] = cplx(re, im);
        }
    });
    return out;
}

std::vector<cplx> phase_sum_naive(const EmitterSet& e, std::span<const Vec3> directions, double k)
{
    std::vector<cplx> out(directions.size());
    for (std::size_t d = 0; d < directions.size(); ++d) {
        cplx acc{};
        for (std::size_t j = 0; j < e.size(); ++j)
            acc += e.weights[j] * std::exp(-kI * (k * directions[d].dot(e.positions[j])));
        out[d] = acc;
    }
    return out;
}

std::vector<double> PhotonState::spectrum() const
{
    std::vector<double> s(spectral.size());
    for (std::size_t f = 0; f < spectral.size(); ++f)
        s[f] = total_prob * std::norm(spectral[f]);
    return s;
}

std::vector<double> PhotonState::spectrum_at(std::size_t d) const
{
    std::vector<double> s(spectral.size());
    for (std::size_t f = 0; f < spectral.size(); ++f)
        s[f] = std::norm(angular.at(d)) * std::norm(spectral[f]);
    return s;
}

namespace {

void normalize_spectrum(const ModeGrid& grid, std::vector<cplx>& g)
{
    double norm = 0.0;
    for (std::size_t f = 0; f < g.size(); ++f)
        norm += grid.freq_weights[f] * std::norm(g[f]);
    if (norm > 0.0) {
        const double s = 1.0 / std::sqrt(norm);
        for (auto& v : g)
            v *= s;
    }
}

} // namespace

std::vector<cplx> kernel_spectrum(const ModeGrid& grid, AngularRate omega_c, AngularRate gamma_e,
                                  std::optional<double> t_us)
{
    std::vector<cplx> g(grid.n_frequencies());
    if (omega_c.rad_per_us() == 0.0) {
        warn("coupling kernel: Omega_c = 0, no photon is emitted");
        return g;
    }
    for (std::size_t f = 0; f < g.size(); ++f)
        g[f] = coupling_kernel(AngularRate::from_rad_per_us(grid.frequencies[f]), omega_c, gamma_e, t_us);
    normalize_spectrum(grid, g);
    return g;
}

PhotonState photon_amplitudes(const EmitterSet& emitters, std::shared_ptr<const ModeGrid> grid,
                              std::vector<cplx> spectral, double total_prob, unsigned threads)
{
    if (!grid || grid->n_directions() == 0)
        throw DomainError("photon_amplitudes: empty grid");
    if (spectral.size() != grid->n_frequencies())
        throw DomainError("photon_amplitudes: spectrum size does not match the grid");
    PhotonState s;
    s.angular = phase_sum(emitters, grid->directions, grid->k_magnitude, threads);
    double raw = 0.0;
    for (std::size_t d = 0; d < s.angular.size(); ++d)
        raw += grid->weights[d] * std::norm(s.angular[d]);
    s.amplitude_scale = raw > 0.0 ? std::sqrt(total_prob / raw) : 0.0;
    s.total_prob = raw > 0.0 ? total_prob : 0.0;
    s.p_angular.resize(s.angular.size());
    for (std::size_t d = 0; d < s.angular.size(); ++d) {
        s.angular[d] *= s.amplitude_scale;
        s.p_angular[d] = std::norm(s.angular[d]);
    }
    s.spectral = std::move(spectral);
    s.grid = std::move(grid);
    return s;
}

ConeFraction cone_fraction(const PhotonState& state, const Vec3& axis_in, double delta_theta)
{
    if (!(delta_theta > 0.0 && delta_theta <= kPi))
        throw DomainError("cone_fraction: half angle must lie in (0, pi]");
    const ModeGrid& g = *state.grid;
    const Vec3 axis = axis_in.normalized();
    const double cos_cap = std::cos(delta_theta);
    double inside = 0.0, total = 0.0;
    for (std::size_t d = 0; d < g.n_directions(); ++d)
        total += g.weights[d] * state.p_angular[d];

    const bool polar = std::abs(std::abs(axis.z()) - 1.0) < 1e-14;
    if (polar) {
        const double sign = axis.z() > 0 ? 1.0 : -1.0;
        double lower = -1.0;
        for (std::size_t t = 0; t < g.n_theta(); ++t) {
            const double upper = lower + g.cos_weights[t];
            // Cell [lower, upper] in cos(theta); the cap is sign*cos >= cos_cap.
            double frac;
            if (sign > 0)
                frac = std::clamp((upper - cos_cap) / g.cos_weights[t], 0.0, 1.0);
            else
                frac = std::clamp((-cos_cap - lower) / g.cos_weights[t], 0.0, 1.0);
            if (delta_theta >= kPi)
                frac = 1.0;
            if (frac > 0.0)
                for (std::size_t p = 0; p < g.n_phi(); ++p) {
                    const std::size_t d = t * g.n_phi() + p;
                    inside += frac * g.weights[d] * state.p_angular[d];
                }
            lower = upper;
        }
    } else {
        for (std::size_t d = 0; d < g.n_directions(); ++d)
            if (g.directions[d].dot(axis) >= cos_cap)
                inside += g.weights[d] * state.p_angular[d];
    }
    ConeFraction c;
    c.conditional = total > 0.0 ? inside / total : 0.0;
    c.absolute = c.conditional * state.total_prob;
    return c;
}

Overlap mode_overlap(const PhotonState& a, const PhotonState& b)
{
    if (!a.grid || !b.grid || !a.grid->same_layout(*b.grid))
        throw DomainError("mode_overlap: photon states live on different grids");
    const ModeGrid& g = *a.grid;
    cplx ang{}, spec{};
    for (std::size_t d = 0; d < g.n_directions(); ++d)
        ang += g.weights[d] * std::conj(a.angular[d]) * b.angular[d];
    for (std::size_t f = 0; f < g.n_frequencies(); ++f)
        spec += g.freq_weights[f] * std::conj(a.spectral[f]) * b.spectral[f];
    Overlap o;
    o.raw = std::abs(ang * spec);
    const double den = std::sqrt(a.total_prob * b.total_prob);
    o.normalized = den > 0.0 ? o.raw / den : 0.0;
    return o;
}

cplx angular_inner_product(const EmitterSet& a, double scale_a, const EmitterSet& b, double scale_b, double k)
{
    cplx acc{};
    for (std::size_t j = 0; j < a.size(); ++j) {
        const Vec3 rj = a.positions[j];
        cplx row{};
        for (std::size_t l = 0; l < b.size(); ++l)
            row += b.weights[l] * sinc(k * (rj - b.positions[l]).norm());
        acc += std::conj(a.weights[j]) * row;
    }
    return 4.0 * kPi * scale_a * scale_b * acc;
}

Overlap exact_overlap(const EmitterSet& a, double scale_a, const EmitterSet& b, double scale_b, double k)
{
    Overlap o;
    o.raw = std::abs(angular_inner_product(a, scale_a, b, scale_b, k));
    const double pa = angular_inner_product(a, scale_a, a, scale_a, k).real();
    const double pb = angular_inner_product(b, scale_b, b, scale_b, k).real();
    const double den = std::sqrt(pa * pb);
    o.normalized = den > 0.0 ? o.raw / den : 0.0;
    return o;
}

CapGrid make_cap_grid(double half_angle, std::size_t n_theta, std::size_t n_phi)
{
    if (!(half_angle > 0.0 && half_angle <= kPi))
        throw DomainError("cap grid: half angle must lie in (0, pi]");
    CapGrid cap;
    const auto rule = gauss_legendre(n_theta, std::cos(half_angle), 1.0);
    const double dphi = kTwoPi / static_cast<double>(n_phi);
    for (std::size_t t = 0; t < n_theta; ++t) {
        const double ct = rule.nodes[t];
        const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
        for (std::size_t p = 0; p < n_phi; ++p) {
            const double ph = dphi * static_cast<double>(p);
            cap.directions.emplace_back(st * std::cos(ph), st * std::sin(ph), ct);
            cap.weights.push_back(rule.weights[t] * dphi);
        }
    }
    return cap;
}

Overlap cap_overlap(const CapGrid& cap, std::span<const cplx> fa, std::span<const cplx> fb)
{
    if (fa.size() != cap.weights.size() || fb.size() != cap.weights.size())
        throw DomainError("cap_overlap: amplitudes do not match the cap grid");
    cplx ab{};
    double aa = 0.0, bb = 0.0;
    for (std::size_t d = 0; d < cap.weights.size(); ++d) {
        ab += cap.weights[d] * std::conj(fa[d]) * fb[d];
        aa += cap.weights[d] * std::norm(fa[d]);
        bb += cap.weights[d] * std::norm(fb[d]);
    }
    Overlap o;
    o.raw = std::abs(ab);
    o.normalized = aa > 0.0 && bb > 0.0 ? o.raw / std::sqrt(aa * bb) : 0.0;
    return o;
}

double fwhm(std::span<const double> theta, std::span<const double> p)
{
    const double nan = std::numeric_limits<double>::quiet_NaN();
    if (p.size() < 3 || theta.size() != p.size())
        return nan;
    const auto peak = static_cast<std::size_t>(std::max_element(p.begin(), p.end()) - p.begin());
    const double half = 0.5 * p[peak];
    auto cross = [&](std::size_t i, std::size_t j) {
        // p[i] >= half > p[j]
        return theta[i] + (theta[j] - theta[i]) * (p[i] - half) / (p[i] - p[j]);
    };
    double left = nan, right = nan;
    for (std::size_t i = peak; i > 0; --i)
        if (p[i - 1] < half) {
            left = cross(i, i - 1);
            break;
        }
    for (std::size_t i = peak; i + 1 < p.size(); ++i)
        if (p[i + 1] < half) {
            right = cross(i, i + 1);
            break;
        }
    return right - left;
}

PolarCut polar_cut(const EmitterSet& emitters, double scale, double k, CutPlane plane, std::size_t points)
{
    if (points < 3)
        throw DomainError("polar_cut: need at least three points");
    PolarCut cut;
    std::vector<Vec3> dirs;
    dirs.reserve(points);
    for (std::size_t i = 0; i < points; ++i) {
        const double t = -kPi + kTwoPi * static_cast<double>(i) / static_cast<double>(points - 1);
        cut.theta.push_back(t);
        if (plane == CutPlane::XZ)
            dirs.emplace_back(std::sin(t), 0.0, std::cos(t));
        else
            dirs.emplace_back(0.0, std::sin(t), std::cos(t));
    }
    const auto f = phase_sum(emitters, dirs, k);
    for (const auto& v : f)
        cut.p.push_back(scale * scale * std::norm(v));
    cut.fwhm = fwhm(cut.theta, cut.p);
    return cut;
}

LorentzianFit fit_lorentzian(std::span<const double> x, std::span<const double> p, double window)
{
    // 1/P = a + b x^2
    double s0 = 0, s1 = 0, s2 = 0, sy = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (std::abs(x[i]) > window || !(p[i] > 0.0))
            continue;
        const double u = x[i] * x[i];
        const double y = 1.0 / p[i];
        s0 += 1;
        s1 += u;
        s2 += u * u;
        sy += y;
        sxy += u * y;
    }
    if (s0 < 3)
        throw DomainError("fit_lorentzian: fewer than three usable points");
    const double det = s0 * s2 - s1 * s1;
    const double a = (s2 * sy - s1 * sxy) / det;
    const double b = (s0 * sxy - s1 * sy) / det;
    LorentzianFit fit;
    if (a > 0.0 && b > 0.0) {
        fit.hwhm = std::sqrt(a / b);
        fit.amplitude = 1.0 / a;
    } else {
        fit.hwhm = std::numeric_limits<double>::quiet_NaN();
    }
    return fit;
}

SingleStepResult single_step_amplitudes(const AtomCloud& cloud, const CouplingField& field,
                                        const PulseSchedule& schedule, AngularRate omega_c, AngularRate gamma_e,
                                        DecayRate gamma_s, const EmissionGeometry& geometry,
                                        std::shared_ptr<const ModeGrid> grid, double dt_us, unsigned threads)
{
    const double w = emission_linewidth(omega_c, gamma_e);
    if (!(w > 0.0))
        throw DomainError("single_step_amplitudes: emission linewidth w must be positive");
    if (!(dt_us > 0.0))
        throw DomainError("single_step_amplitudes: dt must be positive");
    if (field.size() != cloud.size())
        throw DomainError("single_step_amplitudes: coupling field does not match the cloud");
    const double oc = omega_c.rad_per_us();
    const double big_delta = field.delta.rad_per_us();
    if (std::abs(oc) >= 0.5 * gamma_e.rad_per_us())
        warn("single-step: |Omega_c| >= Gamma_e/2, elimination of |e> degraded");
    if (gamma_s.value() > 0.1 * w)
        warn("single-step: Gamma_s is not small compared with w");

    double sum_d2 = 0.0, sum_d2_shift2 = 0.0;
    const double om = schedule.max_omega();
    for (double d : field.bare) {
        const double shift = schedule.delta(0.5 * schedule.t_final()) + (om * om - d * d) / big_delta;
        sum_d2 += d * d;
        sum_d2_shift2 += d * d * shift * shift;
    }
    if (sum_d2 > 0.0 && std::sqrt(sum_d2_shift2 / sum_d2) > 0.1 * w)
        warn("single-step: two-photon detuning d~_j is not small compared with w");

    SingleStepResult r;
    r.linewidth = w;
    const double T = schedule.t_final();
    const auto steps = static_cast<std::size_t>(std::ceil(T / dt_us - 1e-9));
    const double h = T / static_cast<double>(steps);
    // D_bar(t)^2 = Omega(t)^2 sum_j D_j^2 / Delta^2
    const double geo = sum_d2 / (big_delta * big_delta);
    std::vector<double> f(steps + 1), c0(steps + 1);
    double integral = 0.0;
    double prev_rate = 0.0;
    for (std::size_t n = 0; n <= steps; ++n) {
        const double t = static_cast<double>(n) * h;
        const double o = schedule.omega(t);
        const double rate = o * o * geo / w;
        if (n > 0)
            integral += 0.5 * h * (prev_rate + rate);
        prev_rate = rate;
        c0[n] = std::exp(-integral);
        f[n] = o / oc * c0[n];
        r.times.push_back(t);
        r.p_ground.push_back(c0[n] * c0[n]);
        r.emission_rate.push_back(2.0 * rate * c0[n] * c0[n]);
    }
    r.extraction = 1.0 - c0.back() * c0.back();

    std::vector<cplx> g(grid->n_frequencies());
    for (std::size_t k = 0; k < g.size(); ++k) {
        const double dk = grid->frequencies[k];
        cplx acc{};
        for (std::size_t n = 0; n <= steps; ++n) {
            const double wt = (n == 0 || n == steps) ? 0.5 * h : h;
            acc += wt * f[n] * std::polar(1.0, dk * r.times[n]);
        }
        g[k] = acc;
    }
    normalize_spectrum(*grid, g);

    std::vector<cplx> amps(field.size());
    for (std::size_t j = 0; j < field.size(); ++j)
        amps[j] = field.bare[j] / big_delta;
    r.emitters = make_emitters(cloud, amps, geometry.q());
    r.photon = photon_amplitudes(r.emitters, std::move(grid), std::move(g), r.extraction, threads);
    return r;
}

double participation_fraction(const SpinWaveProfile& profile)
{
    const std::size_t n = profile.envelope.size();
    if (n == 0)
        return 0.0;
    cplx sum{};
    double norm = 0.0;
    for (const auto& s : profile.envelope) {
        sum += s;
        norm += std::norm(s);
    }
    return norm > 0.0 ? std::norm(sum) / (static_cast<double>(n) * norm) : 0.0;
}

double inverse_participation_ratio(const SpinWaveProfile& profile)
{
    const std::size_t n = profile.amplitudes.size();
    double s2 = 0.0, s4 = 0.0;
    for (const auto& s : profile.amplitudes) {
        const double a = std::norm(s);
        s2 += a;
        s4 += a * a;
    }
    return s4 > 0.0 ? s2 * s2 / (static_cast<double>(n) * s4) : 0.0;
}

PhotonBudget photon_budget(double eta, std::size_t n_atoms, double delta_theta, double p_i_prime, double p_eg)
{
    auto check = [](double p, const char* name) {
        if (!(p >= 0.0 && p <= 1.0))
            throw DomainError(std::string("photon_budget: ") + name + " must lie in [0, 1]");
    };
    check(eta, "eta");
    check(p_i_prime, "P_i'");
    check(p_eg, "P_eg");
    if (!(delta_theta > 0.0 && delta_theta <= kPi))
        throw DomainError("photon_budget: delta_theta must lie in (0, pi]");
    PhotonBudget b;
    b.eta = eta;
    b.n_atoms = n_atoms;
    b.delta_theta = delta_theta;
    b.p_i_prime = p_i_prime;
    b.p_eg = p_eg;
    const double one_minus_cos = 1.0 - std::cos(delta_theta);
    b.delta_omega = kTwoPi * one_minus_cos;
    b.p_delta_omega_collective_raw = eta * static_cast<double>(n_atoms) * b.delta_omega / (4.0 * kPi);
    b.collective_saturated = b.p_delta_omega_collective_raw > 1.0;
    b.p_delta_omega_collective = std::min(1.0, b.p_delta_omega_collective_raw);
    b.p_delta_omega_geometric = 0.5 * one_minus_cos;
    b.p_multi = std::min(1.0, static_cast<double>(n_atoms) * p_i_prime * p_eg * b.p_delta_omega_geometric);
    return b;
}

void write_angular_csv(std::ostream& out, const PhotonState& s)
{
    const ModeGrid& g = *s.grid;
    write_csv_header(out, {"theta_rad", "phi_rad", "weight", "P"});
    for (std::size_t t = 0; t < g.n_theta(); ++t)
        for (std::size_t p = 0; p < g.n_phi(); ++p) {
            const std::size_t d = t * g.n_phi() + p;
            write_csv_row(out, {std::acos(g.cos_theta[t]), g.phi[p], g.weights[d], s.p_angular[d]});
        }
}

void write_cut_csv(std::ostream& out, const PolarCut& cut)
{
    write_csv_header(out, {"theta_rad", "P"});
    for (std::size_t i = 0; i < cut.theta.size(); ++i)
        write_csv_row(out, {cut.theta[i], cut.p[i]});
}

void write_spectrum_csv(std::ostream& out, const PhotonState& s)
{
    write_csv_header(out, {"detuning_rad_per_us", "P"});
    const auto spec = s.spectrum();
    for (std::size_t f = 0; f < spec.size(); ++f)
        write_csv_row(out, {s.grid->frequencies[f], spec[f]});
}

} // namespace rydsrc
