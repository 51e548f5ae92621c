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

#include "rydsrc/eit.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "rydsrc/diagnostics.hpp"
#include "rydsrc/output.hpp"

namespace rydsrc {

namespace {

const std::complex<double> kI(0.0, 1.0);

} // namespace

EitMedium make_gaussian_medium(const EitParameters& params, double sigma_z, double rho_peak, double half_length,
                               std::size_t points)
{
    if (points < 2 || !(half_length > 0.0) || !(sigma_z > 0.0))
        throw DomainError("EIT medium: need a positive extent and at least two grid points");
    if (rho_peak < 0.0)
        throw DomainError("EIT medium: density must be non-negative");
    EitMedium m;
    m.params = params;
    for (std::size_t i = 0; i < points; ++i) {
        const double z = -half_length + 2.0 * half_length * static_cast<double>(i) / static_cast<double>(points - 1);
        m.z.push_back(z);
        m.rho.push_back(rho_peak * std::exp(-0.5 * z * z / (sigma_z * sigma_z)));
    }
    return m;
}

std::complex<double> susceptibility(const EitParameters& p, double rho, AngularRate detuning)
{
    if (rho < 0.0)
        throw DomainError("susceptibility: density must be non-negative");
    if (!(p.omega_p > 0.0))
        throw DomainError("susceptibility: probe carrier must be positive");
    const double dp = detuning.rad_per_us();
    const double oc2 = p.omega_c.rad_per_us() * p.omega_c.rad_per_us();
    const std::complex<double> spin(p.gamma_s.value(), -dp);
    std::complex<double> denom(p.gamma_e.rad_per_us(), -dp);
    if (oc2 != 0.0) {
        if (spin == 0.0)
            return {0.0, 0.0}; // dark-state pole: perfect transparency
        denom += oc2 / spin;
    }
    if (std::abs(denom) == 0.0)
        throw DomainError("susceptibility: singular denominator (gamma_e = 0, Omega_c = 0, dp = 0)");
    return (2.0 / p.omega_p) * kI * p.g * p.g * rho / denom;
}

std::complex<double> susceptibility(const EitMedium& m, std::size_t i, AngularRate detuning)
{
    return susceptibility(m.params, m.rho.at(i), detuning);
}

double absorption_coefficient(const EitParameters& p, double rho, AngularRate detuning)
{
    return p.omega_p / (2.0 * p.light_speed) * susceptibility(p, rho, detuning).imag();
}

TransparencyProfile transparency_profile(const EitMedium& m, std::span<const double> detunings)
{
    for (std::size_t i = 1; i < m.z.size(); ++i)
        if (!(m.z[i] > m.z[i - 1]))
            throw DomainError("transparency_profile: z grid must be strictly increasing");
    TransparencyProfile prof;
    prof.detunings.assign(detunings.begin(), detunings.end());
    prof.absorption.resize(m.z.size());
    for (std::size_t i = 0; i < m.z.size(); ++i) {
        prof.absorption[i].reserve(detunings.size());
        for (double d : detunings)
            prof.absorption[i].push_back(absorption_coefficient(m.params, m.rho[i], AngularRate::from_rad_per_us(d)));
    }
    return prof;
}

double transparency_hwhm(const EitParameters& p, double rho, double max_detuning)
{
    auto a = [&](double d) { return absorption_coefficient(p, rho, AngularRate::from_rad_per_us(d)); };
    // Locate the absorption maximum on a fine grid, then refine by golden section.
    constexpr std::size_t kScan = 20000;
    double best = 0.0, best_d = max_detuning;
    for (std::size_t i = 1; i <= kScan; ++i) {
        const double d = max_detuning * static_cast<double>(i) / kScan;
        const double v = a(d);
        if (v > best) {
            best = v;
            best_d = d;
        }
    }
    double lo = std::max(0.0, best_d - max_detuning / kScan), hi = std::min(max_detuning, best_d + max_detuning / kScan);
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    for (int it = 0; it < 200 && hi - lo > 1e-15 * max_detuning; ++it) {
        const double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
        if (a(x1) < a(x2))
            lo = x1;
        else
            hi = x2;
    }
    const double peak_d = 0.5 * (lo + hi);
    const double half = 0.5 * a(peak_d);
    if (a(0.0) >= half)
        return 0.0;
    lo = 0.0;
    hi = peak_d;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (a(mid) < half)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double transparency_hwhm_exact(const EitParameters& p)
{
    const double ge = p.gamma_e.rad_per_us();
    const double oc = p.omega_c.rad_per_us();
    return 0.5 * (std::sqrt(ge * ge + 4.0 * oc * oc) - ge);
}

double transparency_hwhm_expansion(const EitParameters& p)
{
    const double oc = p.omega_c.rad_per_us();
    return oc * oc / p.gamma_e.rad_per_us();
}

double mixing_angle(double g, double rho, AngularRate omega_c)
{
    if (omega_c.rad_per_us() < 0.0)
        throw DomainError("mixing_angle: Omega_c must be non-negative");
    if (rho < 0.0)
        throw DomainError("mixing_angle: density must be non-negative");
    return std::atan2(std::abs(g) * std::sqrt(rho), omega_c.rad_per_us());
}

double group_velocity(double theta, double light_speed)
{
    const double c = std::cos(theta);
    return light_speed * c * c;
}

double transfer_group_velocity(const EitParameters& p, double rho, double length, double h)
{
    auto phase = [&](double d) {
        const auto chi = susceptibility(p, rho, AngularRate::from_rad_per_us(d));
        return p.omega_p / (2.0 * p.light_speed) * chi.real() * length;
    };
    // Delay relative to vacuum propagation over the same length.
    const double delay = (phase(h) - phase(-h)) / (2.0 * h);
    return length / (delay + length / p.light_speed);
}

double PolaritonField::norm() const
{
    double s = 0.0;
    for (std::size_t i = 1; i < z.size(); ++i)
        s += 0.5 * (z[i] - z[i - 1]) * (std::norm(psi[i]) + std::norm(psi[i - 1]));
    return s;
}

PropagationResult polariton_propagate(const PolaritonField& in, const std::function<double(double)>& theta_of_t,
                                      double t_final, double dt, double light_speed)
{
    const std::size_t n = in.z.size();
    if (n < 4 || in.psi.size() != n)
        throw DomainError("polariton_propagate: need at least four grid points with matching amplitudes");
    if (!(dt > 0.0) || t_final < 0.0)
        throw DomainError("polariton_propagate: need dt > 0 and t_final >= 0");
    const double dz = (in.z.back() - in.z.front()) / static_cast<double>(n - 1);
    for (std::size_t i = 1; i < n; ++i)
        if (std::abs(in.z[i] - in.z[i - 1] - dz) > 1e-9 * dz)
            throw DomainError("polariton_propagate: z grid must be uniform");

    std::size_t intervals = static_cast<std::size_t>(std::ceil(t_final / dt - 1e-9));
    intervals = std::max<std::size_t>(2, intervals + (intervals % 2));
    const double h = t_final / static_cast<double>(intervals);
    double x = 0.0, v_max = 0.0;
    for (std::size_t i = 0; i <= intervals; ++i) {
        const double t = in.t + h * static_cast<double>(i);
        const double v = group_velocity(theta_of_t(t), light_speed);
        v_max = std::max(v_max, v);
        const double wgt = (i == 0 || i == intervals) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        x += wgt * v;
    }
    x *= h / 3.0;
    if (v_max * dt > dz * (1.0 + 1e-12))
        throw DomainError("polariton_propagate: v_max dt exceeds dz; reduce dt");
    if (std::abs(x) > in.z.back() - in.z.front())
        throw DomainError("polariton_propagate: displacement exceeds the grid; extend the z grid");

    auto sample = [&](long i) -> std::complex<double> {
        if (i < 0 || i >= static_cast<long>(n))
            return {};
        return in.psi[static_cast<std::size_t>(i)];
    };
    PropagationResult r;
    r.displacement = x;
    r.field.z = in.z;
    r.field.t = in.t + t_final;
    r.field.theta = theta_of_t(in.t + t_final);
    r.field.psi.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double s = (in.z[i] - x - in.z.front()) / dz;
        const double fl = std::floor(s);
        const auto i1 = static_cast<long>(fl);
        const double u = s - fl;
        if (u == 0.0) {
            r.field.psi[i] = sample(i1);
            continue;
        }
        // Lagrange weights on nodes i1-1, i1, i1+1, i1+2.
        const double w0 = -u * (u - 1.0) * (u - 2.0) / 6.0;
        const double w1 = (u + 1.0) * (u - 1.0) * (u - 2.0) / 2.0;
        const double w2 = -(u + 1.0) * u * (u - 2.0) / 2.0;
        const double w3 = (u + 1.0) * u * (u - 1.0) / 6.0;
        r.field.psi[i] = w0 * sample(i1 - 1) + w1 * sample(i1) + w2 * sample(i1 + 1) + w3 * sample(i1 + 2);
    }
    return r;
}

void write_susceptibility_csv(std::ostream& out, const EitParameters& p, double rho, std::span<const double> detunings)
{
    write_csv_header(out, {"delta_p", "re_chi", "im_chi", "absorption"});
    for (double d : detunings) {
        const auto chi = susceptibility(p, rho, AngularRate::from_rad_per_us(d));
        write_csv_row(out, {d, chi.real(), chi.imag(), p.omega_p / (2.0 * p.light_speed) * chi.imag()});
    }
}

void write_polariton_csv(std::ostream& out, const PolaritonField& f)
{
    write_csv_header(out, {"z", "abs_psi_sq"});
    for (std::size_t i = 0; i < f.z.size(); ++i)
        write_csv_row(out, {f.z[i], std::norm(f.psi[i])});
}

} // namespace rydsrc
