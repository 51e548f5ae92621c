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

#include "rydsrc/full_model.hpp"

#include <cmath>
#include <string>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "rydsrc/diagnostics.hpp"

namespace rydsrc {

namespace {

using MatC = Eigen::MatrixXcd;
using VecC = Eigen::VectorXcd;

const cplx kI(0.0, 1.0);

} // namespace

double FullModelResult::population_spin_wave() const
{
    double p = 0.0;
    for (const auto& a : spin)
        p += std::norm(a);
    return p;
}

double FullModelResult::population_intermediate() const
{
    double p = 0.0;
    for (const auto& a : inter)
        p += std::norm(a);
    return p;
}

FullModelResult full_model_oracle(std::span<const double> d, AngularRate delta, const PulseSchedule& schedule,
                                  const FullModelSettings& settings)
{
    const std::size_t n = d.size();
    if (n > kFullModelMaxAtoms)
        throw DomainError("full_model_oracle: at most " + std::to_string(kFullModelMaxAtoms) +
                          " atoms, got " + std::to_string(n));
    if (!(settings.dt_us > 0.0))
        throw DomainError("full_model_oracle: dt must be positive");
    const auto dim = static_cast<Eigen::Index>(1 + 2 * n);
    const double big_delta = delta.rad_per_us();
    const double half_gamma = 0.5 * settings.gamma_s.value();

    auto hamiltonian = [&](double t) {
        MatC h = MatC::Zero(dim, dim);
        const cplx omega = schedule.omega_complex(t);
        const double small_delta = schedule.delta(t);
        for (std::size_t j = 0; j < n; ++j) {
            const auto i = static_cast<Eigen::Index>(1 + j);
            const auto s = static_cast<Eigen::Index>(1 + n + j);
            h(i, i) = -big_delta;
            h(s, s) = cplx(-small_delta, -half_gamma);
            h(i, 0) = -omega;
            h(0, i) = -std::conj(omega);
            h(s, i) = d[j];
            h(i, s) = d[j];
        }
        return h;
    };

    VecC psi = VecC::Zero(dim);
    psi(0) = 1.0;
    const double T = schedule.t_final();
    const auto steps = static_cast<std::size_t>(std::ceil(T / settings.dt_us - 1e-9));
    const double h = T / static_cast<double>(steps);
    for (std::size_t k = 0; k < steps; ++k) {
        const double tm = (static_cast<double>(k) + 0.5) * h;
        const MatC u = (-kI * h * hamiltonian(tm)).exp();
        psi = u * psi;
    }

    FullModelResult r;
    r.ground = psi(0);
    for (std::size_t j = 0; j < n; ++j) {
        r.inter.push_back(psi(static_cast<Eigen::Index>(1 + j)));
        r.spin.push_back(psi(static_cast<Eigen::Index>(1 + n + j)));
    }
    return r;
}

EffectiveAmplitudes effective_model_expm(std::span<const double> d, AngularRate delta,
                                         const PulseSchedule& schedule, DecayRate gamma_s)
{
    if (schedule.envelope() == PulseSchedule::Envelope::Sin2Ramp)
        throw DomainError("effective_model_expm: schedule must be piecewise constant");
    const std::size_t n = d.size();
    const auto dim = static_cast<Eigen::Index>(1 + n);
    const double inv = 1.0 / delta.rad_per_us();
    const double half_gamma = 0.5 * gamma_s.value();

    std::vector<double> ends;
    if (schedule.envelope() == PulseSchedule::Envelope::Constant)
        ends.push_back(schedule.t_final());
    else
        for (const auto& seg : schedule.segments())
            ends.push_back(seg.t_end_us);

    VecC psi = VecC::Zero(dim);
    psi(0) = 1.0;
    double start = 0.0;
    for (double end : ends) {
        const double tm = 0.5 * (start + end);
        const cplx omega = schedule.omega_complex(tm);
        const cplx s = -omega * inv;
        const double base = schedule.delta(tm) + std::norm(omega) * inv;
        // d/dt psi = M psi
        MatC m = MatC::Zero(dim, dim);
        for (std::size_t j = 0; j < n; ++j) {
            const auto k = static_cast<Eigen::Index>(1 + j);
            m(k, k) = cplx(-half_gamma, base - d[j] * d[j] * inv);
            m(k, 0) = kI * s * d[j];
            m(0, k) = kI * std::conj(s) * d[j];
        }
        psi = (m * (end - start)).exp() * psi;
        start = end;
    }
    EffectiveAmplitudes out;
    out.c0 = psi(0);
    for (std::size_t j = 0; j < n; ++j)
        out.c.push_back(psi(static_cast<Eigen::Index>(1 + j)));
    return out;
}

} // namespace rydsrc
