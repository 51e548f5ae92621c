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

#include "rydsrc/schedule.hpp"

#include <algorithm>
#include <cmath>

#include "rydsrc/diagnostics.hpp"

namespace rydsrc {

PulseSchedule PulseSchedule::sin2_ramp(AngularRate peak, double ramp_us, double plateau_end_us, double t_final_us,
                                       AngularRate chirp_start, AngularRate chirp_end)
{
    if (!(ramp_us > 0.0 && plateau_end_us >= ramp_us && t_final_us > plateau_end_us))
        throw ConfigError("pulse schedule: need 0 < ramp <= plateau_end < t_final");
    if (peak.rad_per_us() < 0.0)
        throw ConfigError("pulse schedule: peak Rabi frequency must be non-negative");
    PulseSchedule s;
    s.envelope_ = Envelope::Sin2Ramp;
    s.peak_ = peak;
    s.ramp_ = ramp_us;
    s.plateau_end_ = plateau_end_us;
    s.t_final_ = t_final_us;
    s.chirp_start_ = chirp_start;
    s.chirp_end_ = chirp_end;
    return s;
}

PulseSchedule PulseSchedule::constant(AngularRate omega, AngularRate delta, double t_final_us)
{
    if (!(t_final_us > 0.0))
        throw ConfigError("pulse schedule: t_final must be positive");
    if (omega.rad_per_us() < 0.0)
        throw ConfigError("pulse schedule: Rabi frequency must be non-negative");
    PulseSchedule s;
    s.envelope_ = Envelope::Constant;
    s.peak_ = omega;
    s.t_final_ = t_final_us;
    s.chirp_start_ = delta;
    s.chirp_end_ = delta;
    return s;
}

PulseSchedule PulseSchedule::piecewise(std::vector<Segment> segments)
{
    if (segments.empty())
        throw ConfigError("pulse schedule: piecewise schedule needs at least one segment");
    double prev = 0.0;
    double peak = 0.0;
    for (const auto& seg : segments) {
        if (!(seg.t_end_us > prev))
            throw ConfigError("pulse schedule: segment end times must increase");
        if (seg.omega.rad_per_us() < 0.0)
            throw ConfigError("pulse schedule: Rabi frequency must be non-negative");
        prev = seg.t_end_us;
        peak = std::max(peak, seg.omega.rad_per_us());
    }
    PulseSchedule s;
    s.envelope_ = Envelope::Piecewise;
    s.peak_ = AngularRate::from_rad_per_us(peak);
    s.t_final_ = prev;
    s.segments_ = std::move(segments);
    return s;
}

PulseSchedule PulseSchedule::default_chirp(AngularRate peak)
{
    return sin2_ramp(peak, 0.3, 1.2, 1.5, AngularRate::from_mhz(-30.0), AngularRate::from_mhz(30.0));
}

double PulseSchedule::omega(double t) const
{
    if (reversed_)
        t = t_final_ - t;
    switch (envelope_) {
    case Envelope::Constant:
        return peak_.rad_per_us();
    case Envelope::Piecewise:
        return segment_at(t, false).omega.rad_per_us();
    case Envelope::Sin2Ramp:
        break;
    }
    const double p = peak_.rad_per_us();
    if (t <= 0.0 || t >= t_final_)
        return 0.0;
    if (t < ramp_) {
        const double s = std::sin(0.5 * kPi * t / ramp_);
        return p * s * s;
    }
    if (t <= plateau_end_)
        return p;
    const double s = std::sin(0.5 * kPi * (t_final_ - t) / (t_final_ - plateau_end_));
    return p * s * s;
}

double PulseSchedule::delta(double t) const
{
    if (reversed_)
        t = t_final_ - t;
    switch (envelope_) {
    case Envelope::Constant:
        return chirp_start_.rad_per_us();
    case Envelope::Piecewise:
        return segment_at(t, false).delta.rad_per_us();
    case Envelope::Sin2Ramp:
        break;
    }
    const double a = chirp_start_.rad_per_us();
    const double b = chirp_end_.rad_per_us();
    if (t <= ramp_)
        return a;
    if (t >= plateau_end_)
        return b;
    if (plateau_end_ == ramp_)
        return b;
    return a + (b - a) * (t - ramp_) / (plateau_end_ - ramp_);
}

const PulseSchedule::Segment& PulseSchedule::segment_at(double t, bool left) const
{
    // Piecewise values are right-continuous in forward time; reversal maps
    // a right limit onto a left limit.
    if (reversed_)
        left = !left;
    for (const auto& seg : segments_)
        if (left ? t <= seg.t_end_us : t < seg.t_end_us)
            return seg;
    return segments_.back();
}

double PulseSchedule::omega_left(double t) const
{
    if (envelope_ != Envelope::Piecewise)
        return omega(t);
    return segment_at(reversed_ ? t_final_ - t : t, true).omega.rad_per_us();
}

double PulseSchedule::delta_left(double t) const
{
    if (envelope_ != Envelope::Piecewise)
        return delta(t);
    return segment_at(reversed_ ? t_final_ - t : t, true).delta.rad_per_us();
}

double PulseSchedule::chirp_rate() const
{
    if (envelope_ != Envelope::Sin2Ramp || plateau_end_ == ramp_)
        return 0.0;
    const double rate = (chirp_end_.rad_per_us() - chirp_start_.rad_per_us()) / (plateau_end_ - ramp_);
    return reversed_ ? -rate : rate;
}

double PulseSchedule::max_omega() const { return peak_.rad_per_us(); }

double PulseSchedule::max_abs_delta() const
{
    if (envelope_ == Envelope::Piecewise) {
        double m = 0.0;
        for (const auto& seg : segments_)
            m = std::max(m, std::abs(seg.delta.rad_per_us()));
        return m;
    }
    return std::max(std::abs(chirp_start_.rad_per_us()), std::abs(chirp_end_.rad_per_us()));
}

PulseSchedule PulseSchedule::with_phase(double phase_rad) const
{
    PulseSchedule s = *this;
    s.phase_ = phase_rad;
    return s;
}

PulseSchedule PulseSchedule::time_reversed() const
{
    PulseSchedule s = *this;
    s.reversed_ = !reversed_;
    return s;
}

} // namespace rydsrc
