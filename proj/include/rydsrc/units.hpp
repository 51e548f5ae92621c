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

// Unit conventions.
//
// Internal time unit is the microsecond and internal length unit is the
// micrometre. Rabi frequencies, detunings and couplings are angular rates
// in rad/us; plain population decay and dephasing rates are in 1/us and
// never carry a factor 2*pi. The two are separate types so they cannot be
// mixed by accident.

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rydsrc {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Speed of light in um/us.
inline constexpr double kSpeedOfLight = 299792458.0;

/// Angular frequency in rad/us. 1 MHz corresponds to 2*pi rad/us.
class AngularRate {
public:
    constexpr AngularRate() = default;

    static constexpr AngularRate from_rad_per_us(double v) { return AngularRate(checked(v)); }
    static constexpr AngularRate from_mhz(double v) { return AngularRate(checked(v) * kTwoPi); }

    constexpr double rad_per_us() const { return value_; }
    constexpr double mhz() const { return value_ / kTwoPi; }

    constexpr AngularRate operator-() const { return AngularRate(-value_); }
    constexpr AngularRate operator+(AngularRate o) const { return AngularRate(value_ + o.value_); }
    constexpr AngularRate operator-(AngularRate o) const { return AngularRate(value_ - o.value_); }
    constexpr AngularRate operator*(double s) const { return AngularRate(value_ * s); }
    constexpr AngularRate operator/(double s) const { return AngularRate(value_ / s); }
    constexpr double operator/(AngularRate o) const { return value_ / o.value_; }
    constexpr auto operator<=>(const AngularRate&) const = default;

private:
    constexpr explicit AngularRate(double v) : value_(v) {}

    static constexpr double checked(double v)
    {
        if (!(v == v) || v == HUGE_VAL || v == -HUGE_VAL)
            throw std::invalid_argument("AngularRate: value must be finite");
        return v;
    }

    double value_ = 0.0;
};

constexpr AngularRate operator*(double s, AngularRate r) { return r * s; }

/// Plain rate in 1/us (population decay, dephasing). No 2*pi.
class DecayRate {
public:
    constexpr DecayRate() = default;

    static constexpr DecayRate per_us(double v)
    {
        if (!(v == v) || v < 0.0 || v == HUGE_VAL)
            throw std::invalid_argument("DecayRate: value must be finite and non-negative");
        return DecayRate(v);
    }
    static constexpr DecayRate from_khz(double v) { return per_us(v * 1e-3); }

    constexpr double value() const { return value_; }
    constexpr auto operator<=>(const DecayRate&) const = default;

private:
    constexpr explicit DecayRate(double v) : value_(v) {}
    double value_ = 0.0;
};

/// Resonant dipole-dipole coefficient, quoted in GHz um^3 in the
/// angular-frequency convention: D(R) [rad/s] = C3 * 1e9 / R^3.
struct C3Coefficient {
    double ghz_um3 = 0.0;

    constexpr double rad_per_us_um3() const { return ghz_um3 * 1e3; }
};

} // namespace rydsrc
