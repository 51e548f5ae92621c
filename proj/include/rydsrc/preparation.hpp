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
#include <random>
#include <span>
#include <vector>

#include "rydsrc/ensemble.hpp"
#include "rydsrc/rng.hpp"
#include "rydsrc/schedule.hpp"
#include "rydsrc/units.hpp"

namespace rydsrc {

struct PreparationSettings {
    DecayRate gamma_s = DecayRate::per_us(0.01);  // decay of |s> out of the manifold
    DecayRate gamma_sg = DecayRate::per_us(0.01); // s-g dephasing
    double dt_us = 5e-4;
    double dt_out_us = 0.01;
};

/// Amplitudes of |G,u> and |s_j,d> (carrier phases e^{i k0.r_j} factored out).
struct PreparationState {
    cplx c0{1.0, 0.0};
    std::vector<cplx> c;
    double t = 0.0;
    double norm_lost = 0.0; // integrated Gamma_s * P_S

    double population_ground() const { return std::norm(c0); }
    double population_spin_wave() const;
    double total() const { return population_ground() + population_spin_wave() + norm_lost; }

    static PreparationState ground(std::size_t n_atoms);
};

struct Trajectory {
    std::vector<double> times;
    std::vector<double> p_ground;     // |c0|^2
    std::vector<double> p_spin_wave;  // sum_j |c_j|^2
    std::vector<double> norm_lost;
    PreparationState final_state;
    double max_norm_error = 0.0;      // max |total - initial total| over the run

    double final_p_s() const { return p_spin_wave.empty() ? 0.0 : p_spin_wave.back(); }
};

/// Gaussian dephasing detuning: zero mean, variance 2 gamma / dt, held
/// constant over one integration step.
class DephasingNoise {
public:
    DephasingNoise(DecayRate gamma, double dt_us);

    double sample(RandomStream& rng);
    double stddev() const { return stddev_; }

private:
    double stddev_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

/// One dephasing draw (rad/us).
AngularRate dephasing_increment(DecayRate gamma, double dt_us, RandomStream& rng);

/// Fixed-step RK4 integration of the effective amplitude equations
///   dc0/dt  = i sum_j D~_j^* c_j
///   dc_j/dt = (i (d~_j + s_j(t)) - Gamma_s/2) c_j + i D~_j c0
/// with D~_j(t) = -D_j Omega(t)/Delta, d~_j(t) = delta(t) + (|Omega|^2 - D_j^2)/Delta
/// and s_j(t) the dephasing detunings (omitted when gamma_sg = 0).
///
/// Lost norm is integrated alongside the amplitudes, never renormalized.
/// `noise` is required when gamma_sg > 0. Throws IntegrationError on NaN or
/// norm growth above 1e-6.
Trajectory integrate_preparation(std::span<const double> bare_coupling, AngularRate delta,
                                 const PulseSchedule& schedule, const PreparationSettings& settings,
                                 RandomStream* noise = nullptr, const PreparationState* initial = nullptr);

Trajectory integrate_preparation(const CouplingField& field, const PulseSchedule& schedule,
                                 const PreparationSettings& settings, RandomStream* noise = nullptr,
                                 const PreparationState* initial = nullptr);

struct HeraldingReport {
    double p_s_final = 0.0;
    double norm_lost = 0.0;
    bool success = false;
};

/// Detecting the source atom in |d> heralds the spin wave; success means
/// the prepared P_S reaches `threshold`.
HeraldingReport heralding_report(const Trajectory& trajectory, double threshold = 0.95);

/// CSV columns t_us,P_G,P_S,norm_lost.
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory);

} // namespace rydsrc
