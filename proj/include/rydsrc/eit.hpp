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
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "rydsrc/units.hpp"

namespace rydsrc {

/// One-dimensional EIT medium. `g` is the atom-field coupling in
/// rad/us um^{1/2}, so g sqrt(rho) is a rate for a linear density rho in 1/um.
struct EitParameters {
    double g = 0.0;
    AngularRate gamma_e;                    // optical coherence decay
    DecayRate gamma_s;                      // Rydberg coherence decay
    AngularRate omega_c;                    // control Rabi frequency
    double omega_p = 0.0;                   // probe carrier, rad/us
    double light_speed = kSpeedOfLight;     // um/us
};

struct EitMedium {
    std::vector<double> z;   // strictly increasing, um
    std::vector<double> rho; // linear density, 1/um
    EitParameters params;
};

/// Gaussian density rho_peak exp(-z^2 / 2 sigma^2) on `points` nodes over
/// [-half_length, half_length]. Throws DomainError for a degenerate grid or
/// negative density.
EitMedium make_gaussian_medium(const EitParameters& params, double sigma_z_um, double rho_peak_per_um,
                               double half_length_um, std::size_t points);

/// chi = (2/omega_p) i g^2 rho / (gamma_e - i dp + |Omega_c|^2/(gamma_s - i dp)).
/// At dp = gamma_s = 0 with Omega_c != 0 the exact limit 0 is returned.
/// Throws DomainError when the denominator vanishes.
std::complex<double> susceptibility(const EitParameters& params, double rho, AngularRate probe_detuning);
std::complex<double> susceptibility(const EitMedium& medium, std::size_t z_index, AngularRate probe_detuning);

/// (omega_p / 2c) Im chi, 1/um.
double absorption_coefficient(const EitParameters& params, double rho, AngularRate probe_detuning);

struct TransparencyProfile {
    std::vector<double> detunings;              // rad/us
    std::vector<std::vector<double>> absorption; // [z][detuning]
};
TransparencyProfile transparency_profile(const EitMedium& medium, std::span<const double> detunings);

/// Half width of the transparency dip: first detuning where absorption rises
/// to half of its maximum over (0, max_detuning], by bisection on the
/// formula.
double transparency_hwhm(const EitParameters& params, double rho, double max_detuning);
/// (sqrt(gamma_e^2 + 4 |Omega_c|^2) - gamma_e)/2, exact for gamma_s = 0.
double transparency_hwhm_exact(const EitParameters& params);
/// Leading order |Omega_c|^2 / gamma_e.
double transparency_hwhm_expansion(const EitParameters& params);

/// theta = atan2(g sqrt(rho), Omega_c) in [0, pi/2]. Throws DomainError for
/// Omega_c < 0 or rho < 0.
double mixing_angle(double g, double rho, AngularRate omega_c);
double group_velocity(double theta, double light_speed = kSpeedOfLight);

/// Group velocity from the phase slope of exp(i (omega_p/2c) chi L) in a
/// uniform medium, by a central difference of step `d_detuning` at dp = 0.
double transfer_group_velocity(const EitParameters& params, double rho, double length_um, double d_detuning);

struct PolaritonField {
    std::vector<double> z;  // uniform grid
    std::vector<std::complex<double>> psi;
    double theta = 0.0;
    double t = 0.0;
    double norm() const;    // int |psi|^2 dz, trapezoid
};

struct PropagationResult {
    PolaritonField field;
    double displacement = 0.0; // int v dt
};

/// Characteristic solution psi(z, t_final) = psi(z - X, 0), X = int v dt by
/// composite Simpson over steps of at most dt and 4-point cubic Lagrange
/// interpolation of the input envelope (zero outside the grid).
/// Preconditions: v_max dt <= dz. Throws DomainError when violated, when the
/// grid is not uniform, or when |X| exceeds the grid length.
PropagationResult polariton_propagate(const PolaritonField& field, const std::function<double(double)>& theta_of_t,
                                      double t_final, double dt, double light_speed = kSpeedOfLight);

void write_susceptibility_csv(std::ostream& out, const EitParameters& params, double rho,
                              std::span<const double> detunings);
void write_polariton_csv(std::ostream& out, const PolaritonField& field);

} // namespace rydsrc
