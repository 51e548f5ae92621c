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
#include <span>
#include <vector>

#include "rydsrc/ensemble.hpp"
#include "rydsrc/schedule.hpp"
#include "rydsrc/units.hpp"

namespace rydsrc {

inline constexpr std::size_t kFullModelMaxAtoms = 6;

/// Final amplitudes of the model that keeps the intermediate level |i>.
struct FullModelResult {
    cplx ground;                // |G,u>
    std::vector<cplx> inter;    // |i_j,u>
    std::vector<cplx> spin;     // |s_j,d>

    double population_spin_wave() const;
    double population_intermediate() const;
};

struct FullModelSettings {
    DecayRate gamma_s = DecayRate::per_us(0.0);
    double dt_us = 1e-4;
};

/// Dense propagation in the basis {|G,u>, |i_j,u>, |s_j,d>} (dimension
/// 1 + 2N) with
///   H/hbar = -sum_j [Delta |i_j><i_j| + delta(t) |s_j><s_j|
///                    + (Omega(t) |i_j><G| + h.c.) - (D_j |s_j><i_j| + h.c.)]
///            - i Gamma_s/2 sum_j |s_j><s_j|.
/// Delta is held fixed while delta(t) follows the schedule. Each step uses
/// the exact exponential of H at the step midpoint. Only single-excitation
/// states reached from |G,u> are kept, so spectator light shifts on |s_j>
/// from the other atoms are absent for N > 1.
///
/// Throws DomainError for more than kFullModelMaxAtoms atoms.
FullModelResult full_model_oracle(std::span<const double> bare_coupling, AngularRate delta,
                                  const PulseSchedule& schedule, const FullModelSettings& settings = {});

/// Exact propagation of the effective N-amplitude model under a
/// piecewise-constant schedule: product of matrix exponentials of the
/// (1+N)-dimensional effective Hamiltonian, one per segment.
struct EffectiveAmplitudes {
    cplx c0;
    std::vector<cplx> c;
};
EffectiveAmplitudes effective_model_expm(std::span<const double> bare_coupling, AngularRate delta,
                                         const PulseSchedule& piecewise_schedule, DecayRate gamma_s);

} // namespace rydsrc
