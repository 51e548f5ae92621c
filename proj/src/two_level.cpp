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

#include "rydsrc/two_level.hpp"

#include <algorithm>
#include <cmath>

#include "rydsrc/diagnostics.hpp"

namespace rydsrc {

TwoLevelEigen two_level_eigen(const TwoLevelModel& model)
{
    const double d = model.d_bar.rad_per_us();
    const double dt = model.delta_tilde.rad_per_us();
    if (d < 0.0)
        throw DomainError("two_level_eigen: D_bar must be non-negative");
    TwoLevelEigen e;
    const double root = std::sqrt(dt * dt + 4.0 * d * d);
    e.lambda_plus = 0.5 * (dt + root);
    e.lambda_minus = 0.5 * (dt - root);
    if (d == 0.0) {
        // Uncoupled: |G> has eigenvalue 0, |S> has delta_tilde.
        if (dt >= 0.0) {
            e.plus = {0.0, 1.0};
            e.minus = {1.0, 0.0};
        } else {
            e.plus = {1.0, 0.0};
            e.minus = {0.0, 1.0};
        }
        return e;
    }
    const double np = std::hypot(e.lambda_minus, d);
    e.plus = {-e.lambda_minus / np, d / np};
    const double nm = std::hypot(e.lambda_plus, d);
    e.minus = {e.lambda_plus / nm, -d / nm};
    return e;
}

double lz_probability(AngularRate d_bar, double alpha)
{
    if (!(alpha > 0.0))
        throw DomainError("lz_probability: chirp rate must be positive");
    const double d = d_bar.rad_per_us();
    return std::exp(-kTwoPi * d * d / alpha);
}

TwoLevelState integrate_two_level(const std::function<double(double)>& d_bar,
                                  const std::function<double(double)>& delta_tilde, double t0, double t1,
                                  TwoLevelState psi, std::size_t steps)
{
    if (steps == 0)
        throw DomainError("integrate_two_level: need at least one step");
    const std::complex<double> I(0.0, 1.0);
    auto rhs = [&](double t, const TwoLevelState& y) {
        const double d = d_bar(t);
        const double s = delta_tilde(t);
        return TwoLevelState{I * d * y[1], I * (d * y[0] + s * y[1])};
    };
    auto axpy = [](const TwoLevelState& y, double a, const TwoLevelState& k) {
        return TwoLevelState{y[0] + a * k[0], y[1] + a * k[1]};
    };
    const double h = (t1 - t0) / static_cast<double>(steps);
    for (std::size_t n = 0; n < steps; ++n) {
        const double t = t0 + static_cast<double>(n) * h;
        const auto k1 = rhs(t, psi);
        const auto k2 = rhs(t + 0.5 * h, axpy(psi, 0.5 * h, k1));
        const auto k3 = rhs(t + 0.5 * h, axpy(psi, 0.5 * h, k2));
        const auto k4 = rhs(t + h, axpy(psi, h, k3));
        for (int i = 0; i < 2; ++i)
            psi[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    return psi;
}

double LzSweepResult::abs_error() const { return std::abs(analytic - numeric); }

LzSweepResult lz_sweep_numeric(AngularRate d_bar, double alpha, double span, double steps_per_unit_phase)
{
    const double d = d_bar.rad_per_us();
    if (!(d > 0.0))
        throw DomainError("lz_sweep_numeric: D_bar must be positive");
    LzSweepResult r;
    r.alpha = alpha;
    r.analytic = lz_probability(d_bar, alpha);

    const double t_half = span * d / alpha;
    const double delta_edge = span * d;
    const auto start = two_level_eigen({d_bar, AngularRate::from_rad_per_us(-delta_edge)});
    const auto end = two_level_eigen({d_bar, AngularRate::from_rad_per_us(delta_edge)});

    // Largest instantaneous frequency is ~ span * D_bar; resolve it finely.
    const double phase = 2.0 * t_half * std::max(delta_edge, d);
    const auto steps = static_cast<std::size_t>(std::ceil(phase * steps_per_unit_phase / kTwoPi)) + 1000;

    TwoLevelState psi{start.plus[0], start.plus[1]};
    psi = integrate_two_level([d](double) { return d; }, [alpha](double t) { return alpha * t; }, -t_half, t_half,
                              psi, steps);
    r.numeric = std::norm(end.minus[0] * psi[0] + end.minus[1] * psi[1]);
    return r;
}

} // namespace rydsrc
