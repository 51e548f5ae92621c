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

#include <array>
#include <complex>
#include <functional>

#include "rydsrc/units.hpp"

namespace rydsrc {

/// Collective two-level reduction in the basis {|G,u>, |S,d>}:
///   H/hbar = -[[0, D_bar], [D_bar, delta_tilde]].
struct TwoLevelModel {
    AngularRate d_bar;
    AngularRate delta_tilde;
};

struct TwoLevelEigen {
    double lambda_plus = 0.0;  // rad/us
    double lambda_minus = 0.0;
    std::array<double, 2> plus{};  // normalized (G, S) components
    std::array<double, 2> minus{};
};

/// lambda_pm = (delta_tilde +- sqrt(delta_tilde^2 + 4 D_bar^2)) / 2 with the
/// matching eigenvectors of [[0, D_bar], [D_bar, delta_tilde]].
/// Throws DomainError for D_bar < 0.
TwoLevelEigen two_level_eigen(const TwoLevelModel& model);

/// exp(-2 pi D_bar^2 / alpha). Throws DomainError for alpha <= 0.
double lz_probability(AngularRate d_bar, double alpha_rad_per_us2);

using TwoLevelState = std::array<std::complex<double>, 2>;

/// RK4 integration of d/dt (c0, b) = i [[0, D(t)], [D(t), d(t)]] (c0, b)
/// from t0 to t1 in `steps` equal steps.
TwoLevelState integrate_two_level(const std::function<double(double)>& d_bar,
                                  const std::function<double(double)>& delta_tilde, double t0, double t1,
                                  TwoLevelState initial, std::size_t steps);

struct LzSweepResult {
    double alpha = 0.0;
    double analytic = 0.0;
    double numeric = 0.0;
    double abs_error() const;
};

/// Linear sweep delta_tilde = alpha t over [-span D_bar, +span D_bar] with
/// constant D_bar. Starts in the instantaneous |+> and returns the final
/// population of the instantaneous |->.
LzSweepResult lz_sweep_numeric(AngularRate d_bar, double alpha_rad_per_us2, double span = 40.0,
                               double steps_per_unit_phase = 200.0);

} // namespace rydsrc
