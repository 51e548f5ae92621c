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

#include "rydsrc/preparation.hpp"

#include <cmath>
#include <ostream>
#include <string>

#include "rydsrc/diagnostics.hpp"
#include "rydsrc/output.hpp"

namespace rydsrc {

double PreparationState::population_spin_wave() const
{
    double p = 0.0;
    for (const auto& cj : c)
        p += std::norm(cj);
    return p;
}

PreparationState PreparationState::ground(std::size_t n_atoms)
{
    PreparationState s;
    s.c.assign(n_atoms, cplx{});
    return s;
}

DephasingNoise::DephasingNoise(DecayRate gamma, double dt_us)
{
    if (!(dt_us > 0.0))
        throw DomainError("dephasing noise: dt must be positive");
    stddev_ = std::sqrt(2.0 * gamma.value() / dt_us);
}

double DephasingNoise::sample(RandomStream& rng)
{
    if (stddev_ == 0.0)
        return 0.0;
    return stddev_ * normal_(rng);
}

AngularRate dephasing_increment(DecayRate gamma, double dt_us, RandomStream& rng)
{
    DephasingNoise noise(gamma, dt_us);
    return AngularRate::from_rad_per_us(noise.sample(rng));
}

namespace {

// Right-hand side of the amplitude equations at one instant. `shift[j]`
// holds -D_j^2/Delta plus the dephasing detuning of the current step.
struct AmplitudeRhs {
    std::span<const double> d;
    std::span<const double> shift;
    double inv_delta;
    double half_gamma;
    double gamma;

    void operator()(double omega_abs, cplx omega, double two_photon, const cplx& c0, std::span<const cplx> c,
                    cplx& dc0, std::span<cplx> dc, double& dloss) const
    {
        const cplx s = -omega * inv_delta; // D~_j = s D_j
        const double base = two_photon + omega_abs * omega_abs * inv_delta;
        const cplx coupling0 = cplx(0.0, 1.0) * s * c0;
        cplx sum{};
        double pop = 0.0;
        const std::size_t n = d.size();
        for (std::size_t j = 0; j < n; ++j) {
            const cplx cj = c[j];
            sum += d[j] * cj;
            pop += std::norm(cj);
            const double det = base + shift[j];
            // (i det - Gamma/2) c_j + i s D_j c0
            dc[j] = cplx(-half_gamma * cj.real() - det * cj.imag(), det * cj.real() - half_gamma * cj.imag()) +
                    d[j] * coupling0;
        }
        dc0 = cplx(0.0, 1.0) * std::conj(s) * sum;
        dloss = gamma * pop;
    }
};

} // namespace

Trajectory integrate_preparation(std::span<const double> bare, AngularRate delta, const PulseSchedule& schedule,
                                 const PreparationSettings& settings, RandomStream* noise,
                                 const PreparationState* initial)
{
    if (delta.rad_per_us() == 0.0)
        throw DomainError("integrate_preparation: intermediate detuning must be nonzero");
    if (!(settings.dt_us > 0.0) || !(settings.dt_out_us > 0.0))
        throw DomainError("integrate_preparation: time steps must be positive");
    const bool dephasing = settings.gamma_sg.value() > 0.0;
    if (dephasing && noise == nullptr)
        throw DomainError("integrate_preparation: dephasing requires a noise stream");

    const std::size_t n = bare.size();
    PreparationState state = initial ? *initial : PreparationState::ground(n);
    if (state.c.size() != n)
        throw DomainError("integrate_preparation: initial state size does not match the couplings");
    const double t0 = state.t;
    const double t_end = t0 + schedule.t_final();
    // Piecewise schedules are stepped segment by segment so no RK4 step
    // straddles a discontinuity.
    std::vector<double> breaks{0.0};
    if (schedule.envelope() == PulseSchedule::Envelope::Piecewise)
        for (const auto& seg : schedule.segments())
            if (seg.t_end_us > breaks.back())
                breaks.push_back(seg.t_end_us);
    if (breaks.back() < schedule.t_final() || breaks.size() == 1)
        breaks.push_back(schedule.t_final());
    const double inv_delta = 1.0 / delta.rad_per_us();
    std::vector<double> static_shift(n), shift(n);
    for (std::size_t j = 0; j < n; ++j)
        static_shift[j] = -bare[j] * bare[j] * inv_delta;
    shift = static_shift;

    AmplitudeRhs rhs{bare, shift, inv_delta, 0.5 * settings.gamma_s.value(), settings.gamma_s.value()};

    Trajectory traj;
    auto record = [&](double t) {
        traj.times.push_back(t);
        traj.p_ground.push_back(state.population_ground());
        traj.p_spin_wave.push_back(state.population_spin_wave());
        traj.norm_lost.push_back(state.norm_lost);
    };
    record(t0);
    const double total0 = state.total();

    std::vector<cplx> k1(n), k2(n), k3(n), k4(n), tmp(n);
    cplx a1, a2, a3, a4;
    double l1, l2, l3, l4;

    double next_out = settings.dt_out_us;
    for (std::size_t piece = 1; piece < breaks.size(); ++piece) {
        const double a = breaks[piece - 1];
        const double len = breaks[piece] - a;
        const auto steps = static_cast<std::size_t>(std::max(1.0, std::ceil(len / settings.dt_us - 1e-9)));
        const double h = len / static_cast<double>(steps);
        DephasingNoise dephase(settings.gamma_sg, h);
        for (std::size_t step = 0; step < steps; ++step) {
            // Schedule time is measured from the start of this run.
            const double ts = a + static_cast<double>(step) * h;
            const double tb = step + 1 == steps ? breaks[piece] : ts + h;
            if (dephasing)
                for (std::size_t j = 0; j < n; ++j)
                    shift[j] = static_shift[j] + dephase.sample(*noise);

            const double om_a = schedule.omega(ts);
            const double om_m = schedule.omega(ts + 0.5 * h);
            const double om_b = schedule.omega_left(tb);
            const double de_a = schedule.delta(ts);
            const double de_m = schedule.delta(ts + 0.5 * h);
            const double de_b = schedule.delta_left(tb);
            const cplx phase = std::polar(1.0, schedule.omega_phase());

            rhs(om_a, om_a * phase, de_a, state.c0, state.c, a1, k1, l1);
            for (std::size_t j = 0; j < n; ++j)
                tmp[j] = state.c[j] + 0.5 * h * k1[j];
            rhs(om_m, om_m * phase, de_m, state.c0 + 0.5 * h * a1, tmp, a2, k2, l2);
            for (std::size_t j = 0; j < n; ++j)
                tmp[j] = state.c[j] + 0.5 * h * k2[j];
            rhs(om_m, om_m * phase, de_m, state.c0 + 0.5 * h * a2, tmp, a3, k3, l3);
            for (std::size_t j = 0; j < n; ++j)
                tmp[j] = state.c[j] + h * k3[j];
            rhs(om_b, om_b * phase, de_b, state.c0 + h * a3, tmp, a4, k4, l4);

            const double w = h / 6.0;
            state.c0 += w * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
            for (std::size_t j = 0; j < n; ++j)
                state.c[j] += w * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
            state.norm_lost += w * (l1 + 2.0 * l2 + 2.0 * l3 + l4);
            const bool last = piece + 1 == breaks.size() && step + 1 == steps;
            const double t_rel = tb;
            state.t = t0 + t_rel;

            const double total = state.total();
            if (!std::isfinite(total))
                throw IntegrationError("integrate_preparation: non-finite amplitude at t = " +
                                       std::to_string(state.t));
            const double err = total - total0;
            traj.max_norm_error = std::max(traj.max_norm_error, std::abs(err));
            if (err > 1e-6)
                throw IntegrationError("integrate_preparation: norm grew by " + std::to_string(err) +
                                       " at t = " + std::to_string(state.t) + "; reduce dt");
            if (last) {
                record(t_end);
            } else if (t_rel >= next_out - 0.5 * h) {
                record(state.t);
                while (next_out <= t_rel + 0.5 * h)
                    next_out += settings.dt_out_us;
            }
        }
    }
    traj.final_state = std::move(state);
    return traj;
}

Trajectory integrate_preparation(const CouplingField& field, const PulseSchedule& schedule,
                                 const PreparationSettings& settings, RandomStream* noise,
                                 const PreparationState* initial)
{
    return integrate_preparation(field.bare, field.delta, schedule, settings, noise, initial);
}

HeraldingReport heralding_report(const Trajectory& trajectory, double threshold)
{
    HeraldingReport r;
    r.p_s_final = trajectory.final_p_s();
    r.norm_lost = trajectory.norm_lost.empty() ? 0.0 : trajectory.norm_lost.back();
    r.success = r.p_s_final >= threshold;
    return r;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& t)
{
    write_csv_header(out, {"t_us", "P_G", "P_S", "norm_lost"});
    for (std::size_t i = 0; i < t.times.size(); ++i)
        write_csv_row(out, {t.times[i], t.p_ground[i], t.p_spin_wave[i], t.norm_lost[i]});
}

} // namespace rydsrc
