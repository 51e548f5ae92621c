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

#include <complex>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "rydsrc/units.hpp"

namespace rydsrc {

using Vec3 = Eigen::Vector3d;
using cplx = std::complex<double>;

/// Sampled medium-atom positions in um.
struct AtomCloud {
    std::vector<Vec3> positions;
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
    std::size_t resampled = 0; // draws rejected by the source-distance guard

    std::size_t size() const { return positions.size(); }
};

/// Gaussian cloud geometry and the position of the source atom.
struct CloudGeometry {
    std::size_t n_atoms = 1000;
    Vec3 sigma_um{1.0, 1.0, 6.0};
    Vec3 source_um{7.0, 0.0, 0.0};
    /// Atoms drawn closer than this to the source are redrawn.
    double min_source_distance_um = 0.5;
};

/// N i.i.d. Gaussian positions centred at the origin. Deterministic in
/// (seed, stream, n, sigma); no source-distance guard.
AtomCloud sample_cloud(std::size_t n, const Vec3& sigma_um, std::uint64_t seed, std::uint64_t stream = 0);

/// As above, redrawing atoms that fall within the minimum source distance.
AtomCloud sample_cloud(const CloudGeometry& geometry, std::uint64_t seed, std::uint64_t stream = 0);

/// Peak density N / ((2 pi)^{3/2} sx sy sz) in 1/um^3.
double peak_density(std::size_t n, const Vec3& sigma_um);

/// Resonant exchange D(R) = C3 / |R|^3 (1 - 3 cos^2 theta), theta measured
/// from `dipole_axis` (unit vector, y by default).
struct ExchangeCoupling {
    AngularRate rate;
    bool short_range = false; // |R| < 0.5 um, dipole approximation stressed
};

ExchangeCoupling dipole_coupling(const Vec3& r_um, const Vec3& source_um, C3Coefficient c3,
                                 const Vec3& dipole_axis = Vec3::UnitY());

/// Second-order coupling -D Omega / Delta.
AngularRate effective_coupling(AngularRate d, AngularRate omega, AngularRate delta);

/// Shifted two-photon detuning delta + (|Omega|^2 - |D|^2) / Delta.
AngularRate effective_detuning(AngularRate two_photon, AngularRate omega, AngularRate d, AngularRate delta);

/// Per-atom couplings of one realization. All arrays are in rad/us.
struct CouplingField {
    std::vector<double> bare;           // D_j
    std::vector<double> effective;      // D~_j at Omega_max
    std::vector<double> shift_offset;   // (Omega_max^2 - D_j^2) / Delta
    AngularRate omega_max;
    AngularRate delta;
    AngularRate d_bar;                  // (sum_j |D~_j|^2)^{1/2}
    std::size_t short_range_count = 0;

    std::size_t size() const { return bare.size(); }
    double max_abs_bare() const;
};

CouplingField build_coupling_field(const AtomCloud& cloud, const Vec3& source_um, C3Coefficient c3,
                                   AngularRate omega_max, AngularRate delta,
                                   const Vec3& dipole_axis = Vec3::UnitY());

/// Root-sum-square of the effective couplings. Empty field -> 0 with a warning.
AngularRate collective_coupling(const CouplingField& field);

/// Normalized density histogram over [lo, hi].
struct Histogram {
    double lo = 0.0;
    double hi = 0.0;
    std::vector<double> density; // integrates to 1 over [lo, hi]

    std::size_t bins() const { return density.size(); }
    double width() const { return (hi - lo) / static_cast<double>(density.size()); }
    double center(std::size_t i) const { return lo + (static_cast<double>(i) + 0.5) * width(); }
    /// First moment of the histogram density.
    double mean() const;
};

/// Weighted histogram: weights outside [lo, hi] are dropped, the rest
/// normalized to unit area. All-zero in-range weight leaves zeros.
Histogram weighted_histogram(std::span<const double> values, std::span<const double> weights, double lo,
                             double hi, std::size_t bins);

/// Spin-wave amplitudes at the atom sites.
struct SpinWaveProfile {
    std::vector<cplx> amplitudes; // S_j including the carrier e^{i k0.r_j}
    std::vector<cplx> envelope;   // S_j e^{-i k0.r_j}
    Histogram p_x, p_y, p_z;      // excitation densities along each axis

    std::size_t size() const { return amplitudes.size(); }
};

struct HistogramSpec {
    std::size_t bins = 61;
    double half_width_sigmas = 3.0;
};

/// Site amplitudes proportional to D~_j e^{i k0.r_j}, unit-normalized.
/// Throws DomainError when every coupling vanishes.
SpinWaveProfile spin_wave_profile(const AtomCloud& cloud, const CouplingField& field, const Vec3& k0,
                                  const Vec3& sigma_um, HistogramSpec hist = {});

/// Same, from arbitrary slowly-varying amplitudes (e.g. the prepared c_j).
SpinWaveProfile spin_wave_profile(const AtomCloud& cloud, std::span<const cplx> envelope, const Vec3& k0,
                                  const Vec3& sigma_um, HistogramSpec hist = {});

/// CSV fixture format: one "x,y,z" row per atom with a header line.
void write_cloud_csv(std::ostream& out, const AtomCloud& cloud);
AtomCloud read_cloud_csv(std::istream& in);

} // namespace rydsrc
