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

#include "rydsrc/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <string>

#include "rydsrc/diagnostics.hpp"
#include "rydsrc/rng.hpp"

namespace rydsrc {

namespace {

constexpr double kShortRangeUm = 0.5;

Vec3 draw_position(RandomStream& rng, std::normal_distribution<double>& normal, const Vec3& sigma)
{
    const double x = normal(rng) * sigma.x();
    const double y = normal(rng) * sigma.y();
    const double z = normal(rng) * sigma.z();
    return {x, y, z};
}

void check_sigma(const Vec3& sigma)
{
    if (!(sigma.x() > 0.0 && sigma.y() > 0.0 && sigma.z() > 0.0))
        throw DomainError("cloud standard deviations must be positive");
}

} // namespace

AtomCloud sample_cloud(std::size_t n, const Vec3& sigma_um, std::uint64_t seed, std::uint64_t stream)
{
    check_sigma(sigma_um);
    AtomCloud cloud;
    cloud.seed = seed;
    cloud.stream = stream;
    cloud.positions.reserve(n);
    RandomStream rng(seed, stream);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (std::size_t j = 0; j < n; ++j)
        cloud.positions.push_back(draw_position(rng, normal, sigma_um));
    return cloud;
}

AtomCloud sample_cloud(const CloudGeometry& g, std::uint64_t seed, std::uint64_t stream)
{
    check_sigma(g.sigma_um);
    AtomCloud cloud;
    cloud.seed = seed;
    cloud.stream = stream;
    cloud.positions.reserve(g.n_atoms);
    RandomStream rng(seed, stream);
    std::normal_distribution<double> normal(0.0, 1.0);
    const double min_d2 = g.min_source_distance_um * g.min_source_distance_um;
    while (cloud.positions.size() < g.n_atoms) {
        Vec3 r = draw_position(rng, normal, g.sigma_um);
        if ((r - g.source_um).squaredNorm() < min_d2) {
            ++cloud.resampled;
            if (cloud.resampled > 1000 * (g.n_atoms + 1))
                throw DomainError("source-distance guard rejects nearly every draw; move the source atom");
            continue;
        }
        cloud.positions.push_back(r);
    }
    return cloud;
}

double peak_density(std::size_t n, const Vec3& s)
{
    return static_cast<double>(n) / (std::pow(kTwoPi, 1.5) * s.x() * s.y() * s.z());
}

ExchangeCoupling dipole_coupling(const Vec3& r, const Vec3& source, C3Coefficient c3, const Vec3& axis)
{
    const Vec3 sep = r - source;
    const double dist2 = sep.squaredNorm();
    if (dist2 == 0.0)
        throw DomainError("dipole_coupling: atom coincides with the source");
    const double dist = std::sqrt(dist2);
    const double cos_theta = sep.dot(axis) / (dist * axis.norm());
    const double value = c3.rad_per_us_um3() / (dist2 * dist) * (1.0 - 3.0 * cos_theta * cos_theta);
    return {AngularRate::from_rad_per_us(value), dist < kShortRangeUm};
}

AngularRate effective_coupling(AngularRate d, AngularRate omega, AngularRate delta)
{
    if (delta.rad_per_us() == 0.0)
        throw DomainError("effective_coupling: intermediate detuning must be nonzero");
    return AngularRate::from_rad_per_us(-d.rad_per_us() * omega.rad_per_us() / delta.rad_per_us());
}

AngularRate effective_detuning(AngularRate two_photon, AngularRate omega, AngularRate d, AngularRate delta)
{
    if (delta.rad_per_us() == 0.0)
        throw DomainError("effective_detuning: intermediate detuning must be nonzero");
    const double om = omega.rad_per_us();
    const double dd = d.rad_per_us();
    return AngularRate::from_rad_per_us(two_photon.rad_per_us() + (om * om - dd * dd) / delta.rad_per_us());
}

double CouplingField::max_abs_bare() const
{
    double m = 0.0;
    for (double d : bare)
        m = std::max(m, std::abs(d));
    return m;
}

CouplingField build_coupling_field(const AtomCloud& cloud, const Vec3& source, C3Coefficient c3,
                                   AngularRate omega_max, AngularRate delta, const Vec3& axis)
{
    if (delta.rad_per_us() == 0.0)
        throw DomainError("build_coupling_field: intermediate detuning must be nonzero");
    CouplingField f;
    f.omega_max = omega_max;
    f.delta = delta;
    const std::size_t n = cloud.size();
    f.bare.resize(n);
    f.effective.resize(n);
    f.shift_offset.resize(n);
    const double om = omega_max.rad_per_us();
    const double de = delta.rad_per_us();
    for (std::size_t j = 0; j < n; ++j) {
        const auto ex = dipole_coupling(cloud.positions[j], source, c3, axis);
        const double d = ex.rate.rad_per_us();
        f.short_range_count += ex.short_range ? 1 : 0;
        f.bare[j] = d;
        f.effective[j] = -d * om / de;
        f.shift_offset[j] = (om * om - d * d) / de;
    }
    f.d_bar = collective_coupling(f);
    return f;
}

AngularRate collective_coupling(const CouplingField& field)
{
    if (field.effective.empty()) {
        warn("collective_coupling: empty coupling field, D_bar = 0");
        return AngularRate{};
    }
    double sum = 0.0;
    for (double d : field.effective)
        sum += d * d;
    return AngularRate::from_rad_per_us(std::sqrt(sum));
}

double Histogram::mean() const
{
    double m = 0.0;
    for (std::size_t i = 0; i < density.size(); ++i)
        m += center(i) * density[i] * width();
    return m;
}

Histogram weighted_histogram(std::span<const double> values, std::span<const double> weights, double lo,
                             double hi, std::size_t bins)
{
    if (bins == 0 || !(hi > lo))
        throw DomainError("weighted_histogram: need bins > 0 and hi > lo");
    Histogram h{lo, hi, std::vector<double>(bins, 0.0)};
    const double w = h.width();
    double total = 0.0;
    for (std::size_t j = 0; j < values.size(); ++j) {
        const double v = values[j];
        if (v < lo || v >= hi)
            continue;
        const auto idx = std::min(bins - 1, static_cast<std::size_t>((v - lo) / w));
        h.density[idx] += weights[j];
        total += weights[j];
    }
    if (total > 0.0)
        for (auto& d : h.density)
            d /= total * w;
    return h;
}

SpinWaveProfile spin_wave_profile(const AtomCloud& cloud, std::span<const cplx> envelope, const Vec3& k0,
                                  const Vec3& sigma, HistogramSpec spec)
{
    if (envelope.size() != cloud.size())
        throw DomainError("spin_wave_profile: amplitude count does not match the cloud");
    double norm2 = 0.0;
    for (const auto& c : envelope)
        norm2 += std::norm(c);
    if (!(norm2 > 0.0))
        throw DomainError("spin_wave_profile: all couplings vanish, no spin wave");
    const double inv = 1.0 / std::sqrt(norm2);
    const std::size_t n = cloud.size();
    SpinWaveProfile p;
    p.amplitudes.resize(n);
    p.envelope.resize(n);
    std::vector<double> weight(n), xs(n), ys(n), zs(n);
    for (std::size_t j = 0; j < n; ++j) {
        const Vec3& r = cloud.positions[j];
        p.envelope[j] = envelope[j] * inv;
        p.amplitudes[j] = p.envelope[j] * std::polar(1.0, k0.dot(r));
        weight[j] = std::norm(p.envelope[j]);
        xs[j] = r.x();
        ys[j] = r.y();
        zs[j] = r.z();
    }
    const double hw = spec.half_width_sigmas;
    p.p_x = weighted_histogram(xs, weight, -hw * sigma.x(), hw * sigma.x(), spec.bins);
    p.p_y = weighted_histogram(ys, weight, -hw * sigma.y(), hw * sigma.y(), spec.bins);
    p.p_z = weighted_histogram(zs, weight, -hw * sigma.z(), hw * sigma.z(), spec.bins);
    return p;
}

SpinWaveProfile spin_wave_profile(const AtomCloud& cloud, const CouplingField& field, const Vec3& k0,
                                  const Vec3& sigma, HistogramSpec spec)
{
    std::vector<cplx> env(field.effective.begin(), field.effective.end());
    return spin_wave_profile(cloud, env, k0, sigma, spec);
}

void write_cloud_csv(std::ostream& out, const AtomCloud& cloud)
{
    out << "x_um,y_um,z_um\n";
    out.precision(17);
    for (const auto& r : cloud.positions)
        out << r.x() << ',' << r.y() << ',' << r.z() << '\n';
}

AtomCloud read_cloud_csv(std::istream& in)
{
    AtomCloud cloud;
    std::string line;
    if (!std::getline(in, line))
        throw DomainError("read_cloud_csv: empty input");
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty())
            continue;
        std::istringstream row(line);
        double v[3];
        char sep;
        if (!(row >> v[0] >> sep >> v[1] >> sep >> v[2]))
            throw DomainError("read_cloud_csv: malformed row " + std::to_string(lineno));
        cloud.positions.emplace_back(v[0], v[1], v[2]);
    }
    return cloud;
}

} // namespace rydsrc
