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
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "rydsrc/ensemble.hpp"
#include "rydsrc/presets.hpp"
#include "rydsrc/schedule.hpp"
#include "rydsrc/units.hpp"

namespace rydsrc {

/// Directions on the unit sphere (Gauss-Legendre in cos(theta) times a
/// uniform phi grid) and a uniform grid of photon detunings omega_k - omega_eg.
/// Direction index d = i_theta * n_phi + i_phi.
struct ModeGrid {
    std::vector<double> cos_theta;      // GL nodes, ascending
    std::vector<double> cos_weights;    // GL weights
    std::vector<double> phi;
    std::vector<Vec3> directions;
    std::vector<double> weights;        // solid angle per direction, sum 4 pi
    std::vector<double> frequencies;    // rad/us
    std::vector<double> freq_weights;   // trapezoid weights
    double k_magnitude = 0.0;           // 1/um

    std::size_t n_theta() const { return cos_theta.size(); }
    std::size_t n_phi() const { return phi.size(); }
    std::size_t n_directions() const { return directions.size(); }
    std::size_t n_frequencies() const { return frequencies.size(); }
    bool same_layout(const ModeGrid& other) const;
};

/// Uniform detuning grid of `n` points over [-half_width, half_width].
std::vector<double> uniform_frequencies(double half_width, std::size_t n);

/// Throws DomainError for an empty direction set.
std::shared_ptr<const ModeGrid> make_mode_grid(std::size_t n_theta, std::size_t n_phi, double k_magnitude,
                                               std::vector<double> frequencies);

/// Dimensionless photon coupling g~_k(t) per unit g_k for a constant control
/// field:
///   (Omega_c^*/(Gamma_e/2)) (1 - e^{(i dk - w) t}) / (w - i dk),
/// w = |Omega_c|^2/(Gamma_e/2). With `t_us` empty the t -> infinity limit
/// is returned. Omega_c = 0 gives 0 with a warning.
std::complex<double> coupling_kernel(AngularRate detuning, AngularRate omega_c, AngularRate gamma_e,
                                     std::optional<double> t_us = std::nullopt);

/// Emission linewidth |Omega_c|^2/(Gamma_e/2), rad/us.
double emission_linewidth(AngularRate omega_c, AngularRate gamma_e);

/// Wave vectors of the excitation and control lasers. The control beam is
/// tilted by `control_tilt_rad` in the x-z plane; |k| is the emission
/// wave number of the preset.
struct EmissionGeometry {
    Vec3 k0;
    Vec3 kc;
    double k = 0.0;
    Vec3 q() const { return k0 - kc; }
};
EmissionGeometry make_emission_geometry(const SpeciesPreset& preset, double control_tilt_rad = 0.0);

/// Point emitters with complex weights u_j = c_j e^{i q.r_j}. The angular
/// amplitude is F(n) = sum_j u_j e^{-i k n.r_j}.
struct EmitterSet {
    std::vector<Vec3> positions;
    std::vector<cplx> weights;
    std::size_t size() const { return positions.size(); }
};
EmitterSet make_emitters(const AtomCloud& cloud, std::span<const cplx> amplitudes, const Vec3& q);

/// F(n) for each direction. Parallel over directions; each sum runs over
/// atoms in index order, so the result is independent of `threads`.
std::vector<cplx> phase_sum(const EmitterSet& emitters, std::span<const Vec3> directions, double k,
                            unsigned threads = 1);
/// Reference double loop with std::complex exponentials.
std::vector<cplx> phase_sum_naive(const EmitterSet& emitters, std::span<const Vec3> directions, double k);

/// Photon amplitudes a(n, w) = F(n) G(w), stored in separable form.
/// Normalization: sum_d W_d |F_d|^2 = total_prob and sum_f w_f |G_f|^2 = 1.
struct PhotonState {
    std::shared_ptr<const ModeGrid> grid;
    std::vector<cplx> angular;     // F on grid directions
    std::vector<cplx> spectral;    // G on grid frequencies
    std::vector<double> p_angular; // |F|^2 per steradian
    double total_prob = 0.0;
    double amplitude_scale = 0.0;  // F = amplitude_scale * raw phase sum

    cplx amplitude(std::size_t direction, std::size_t frequency) const
    {
        return angular[direction] * spectral[frequency];
    }
    /// Spectral density total_prob |G|^2 in 1/(rad/us).
    std::vector<double> spectrum() const;
    /// |F_d|^2 |G_f|^2 at one direction.
    std::vector<double> spectrum_at(std::size_t direction) const;
};

/// Spectral factor from the constant-control kernel, unit-normalized on the grid.
std::vector<cplx> kernel_spectrum(const ModeGrid& grid, AngularRate omega_c, AngularRate gamma_e,
                                  std::optional<double> t_us = std::nullopt);

/// Builds the photon state of `emitters` with total probability `total_prob`.
PhotonState photon_amplitudes(const EmitterSet& emitters, std::shared_ptr<const ModeGrid> grid,
                              std::vector<cplx> spectral, double total_prob, unsigned threads = 1);

/// Fraction of the angular probability within `delta_theta` of `axis`.
/// For axis = +-z the boundary ring of grid cells is weighted by the part
/// of its cos(theta) cell inside the cap; other axes count whole nodes.
struct ConeFraction {
    double conditional = 0.0; // relative to total_prob
    double absolute = 0.0;    // conditional * total_prob
};
ConeFraction cone_fraction(const PhotonState& state, const Vec3& axis, double delta_theta);

/// |<psi_m|psi_m'>| by grid quadrature; `normalized` divides by
/// sqrt(P_m P_m'). Throws DomainError on grid mismatch.
struct Overlap {
    double raw = 0.0;
    double normalized = 0.0;
};
Overlap mode_overlap(const PhotonState& a, const PhotonState& b);

/// Exact full-sphere overlap of two emitter sets with the same spectrum:
///   int dOmega F_a^* F_b = 4 pi sum_jl u_aj^* u_bl sinc(k |r_aj - r_bl|),
/// scaled by the amplitude scales.
cplx angular_inner_product(const EmitterSet& a, double scale_a, const EmitterSet& b, double scale_b, double k);
Overlap exact_overlap(const EmitterSet& a, double scale_a, const EmitterSet& b, double scale_b, double k);
/// Quadrature over the cap theta <= half_angle about +z (GL in cos(theta)
/// on [cos half_angle, 1], uniform phi).
struct CapGrid {
    std::vector<Vec3> directions;
    std::vector<double> weights;
};
CapGrid make_cap_grid(double half_angle, std::size_t n_theta = 48, std::size_t n_phi = 96);
/// Overlap of two sets of amplitudes sampled on the same cap grid.
Overlap cap_overlap(const CapGrid& cap, std::span<const cplx> fa, std::span<const cplx> fb);

/// Angular probability along a great circle through +z. The x-z cut uses
/// n = (sin t, 0, cos t), the y-z cut n = (0, sin t, cos t), t in [-pi, pi).
enum class CutPlane { XZ, YZ };
struct PolarCut {
    std::vector<double> theta;
    std::vector<double> p;
    double fwhm = 0.0; // full width at half maximum around the peak, rad
};
PolarCut polar_cut(const EmitterSet& emitters, double amplitude_scale, double k, CutPlane plane,
                   std::size_t points = 2001);
/// Linear interpolation of the half-maximum crossings on either side of the
/// global peak; NaN when a crossing is not found.
double fwhm(std::span<const double> theta, std::span<const double> p);

/// Lorentzian fit P = A / (1 + (x/h)^2) by linear regression of 1/P on x^2
/// over |x| <= window.
struct LorentzianFit {
    double hwhm = 0.0;
    double amplitude = 0.0;
};
LorentzianFit fit_lorentzian(std::span<const double> x, std::span<const double> p, double window);

/// Single-step creation with constant control and pulsed excitation.
struct SingleStepResult {
    PhotonState photon;
    EmitterSet emitters;
    std::vector<double> times;
    std::vector<double> p_ground;       // |c0(t)|^2
    std::vector<double> emission_rate;  // 2 D_bar(t)^2 / w |c0|^2, 1/us
    double extraction = 0.0;            // 1 - |c0(T)|^2
    double linewidth = 0.0;             // w
};
/// Source weights D_j/Delta (sign absorbed into a global phase), kernel
/// G(dk) = int dt (Omega(t)/Omega_c) c0(t) e^{i dk t}, c0 = exp(-int D_bar^2/w).
/// Throws DomainError when w = 0. Warns when |Omega_c| >= Gamma_e/2 or when
/// Gamma_s or the coupling-weighted rms of d~_j is not small against w.
SingleStepResult single_step_amplitudes(const AtomCloud& cloud, const CouplingField& field,
                                        const PulseSchedule& schedule, AngularRate omega_c, AngularRate gamma_e,
                                        DecayRate gamma_s, const EmissionGeometry& geometry,
                                        std::shared_ptr<const ModeGrid> grid, double dt_us = 1e-3,
                                        unsigned threads = 1);

/// Coherent participating fraction of a spin wave,
///   eta = |sum_j env_j|^2 / (N sum_j |env_j|^2),
/// the forward-emission enhancement relative to N independent emitters.
double participation_fraction(const SpinWaveProfile& profile);
/// Normalized inverse participation ratio (sum |S|^2)^2 / (N sum |S|^4).
double inverse_participation_ratio(const SpinWaveProfile& profile);

struct PhotonBudget {
    double eta = 0.0;
    std::size_t n_atoms = 0;
    double delta_theta = 0.0;
    double delta_omega = 0.0;              // 2 pi (1 - cos delta_theta), sr
    double p_delta_omega_collective_raw = 0.0; // eta N delta_omega / 4 pi
    double p_delta_omega_collective = 0.0; // clipped to [0, 1]
    bool collective_saturated = false;
    double p_delta_omega_geometric = 0.0;  // (1 - cos delta_theta) / 2
    double p_i_prime = 0.0;
    double p_eg = 0.0;
    double p_multi = 0.0;                  // N P_i' P_eg P_geometric
};
/// Throws DomainError for probabilities outside [0, 1] or delta_theta
/// outside (0, pi].
PhotonBudget photon_budget(double eta, std::size_t n_atoms, double delta_theta, double p_i_prime, double p_eg);

void write_angular_csv(std::ostream& out, const PhotonState& state);
void write_cut_csv(std::ostream& out, const PolarCut& cut);
void write_spectrum_csv(std::ostream& out, const PhotonState& state);

} // namespace rydsrc
