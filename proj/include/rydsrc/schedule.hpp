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
#include <vector>

#include "rydsrc/units.hpp"

namespace rydsrc {

/// Excitation-laser Rabi frequency Omega(t) and two-photon detuning delta(t).
///
/// Sin2Ramp: Omega rises as sin^2 over [0, ramp], stays at the peak until
/// plateau_end, falls as sin^2 until t_final. delta sweeps linearly from
/// chirp_start to chirp_end across the plateau and is clamped outside it.
///
/// Constant: Omega = peak and delta = chirp_start for all t.
///
/// Piecewise: constant segments; segment k holds on [t_{k-1}, t_k).
class PulseSchedule {
public:
    enum class Envelope { Sin2Ramp, Constant, Piecewise };

    struct Segment {
        double t_end_us;
        AngularRate omega;
        AngularRate delta;
    };

    static PulseSchedule sin2_ramp(AngularRate peak, double ramp_us, double plateau_end_us, double t_final_us,
                                   AngularRate chirp_start, AngularRate chirp_end);
    static PulseSchedule constant(AngularRate omega, AngularRate delta, double t_final_us);
    static PulseSchedule piecewise(std::vector<Segment> segments);

    /// Default chirped pulse: 0.3 us ramps, plateau to 1.2 us, 1.5 us total,
    /// delta swept from -2pi x 30 MHz to +2pi x 30 MHz.
    static PulseSchedule default_chirp(AngularRate peak);

    Envelope envelope() const { return envelope_; }
    double t_final() const { return t_final_; }
    AngularRate peak() const { return peak_; }

    /// |Omega(t)| in rad/us.
    double omega(double t) const;
    /// Complex Omega(t) including the constant global phase.
    std::complex<double> omega_complex(double t) const { return std::polar(omega(t), phase_); }
    /// delta(t) in rad/us.
    double delta(double t) const;

    /// Left limits Omega(t-), delta(t-); equal to omega/delta except at
    /// piecewise segment boundaries.
    double omega_left(double t) const;
    double delta_left(double t) const;

    /// Chirp rate d delta/dt on the plateau (rad/us^2); 0 for unchirped shapes.
    double chirp_rate() const;
    /// Largest |Omega| and |delta| over the schedule.
    double max_omega() const;
    double max_abs_delta() const;

    double omega_phase() const { return phase_; }
    PulseSchedule with_phase(double phase_rad) const;

    /// Omega(T - t), delta(T - t). Same envelope, reversed chirp.
    PulseSchedule time_reversed() const;

    const std::vector<Segment>& segments() const { return segments_; }
    double ramp() const { return ramp_; }
    double plateau_end() const { return plateau_end_; }
    AngularRate chirp_start() const { return chirp_start_; }
    AngularRate chirp_end() const { return chirp_end_; }

private:
    PulseSchedule() = default;
    const Segment& segment_at(double t, bool left) const;

    Envelope envelope_ = Envelope::Constant;
    AngularRate peak_;
    double ramp_ = 0.0;
    double plateau_end_ = 0.0;
    double t_final_ = 0.0;
    AngularRate chirp_start_;
    AngularRate chirp_end_;
    double phase_ = 0.0;
    bool reversed_ = false;
    std::vector<Segment> segments_;
};

} // namespace rydsrc
