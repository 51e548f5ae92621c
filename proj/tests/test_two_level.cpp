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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rydsrc/diagnostics.hpp"
#include "rydsrc/two_level.hpp"

using namespace rydsrc;
using cplx = std::complex<double>;

TEST_CASE("eigenpairs of the collective two-level Hamiltonian")
{
    for (double dt : {-3.0, -0.2, 0.0, 0.7, 5.0}) {
        const double d = 1.3;
        const auto e = two_level_eigen({AngularRate::from_rad_per_us(d), AngularRate::from_rad_per_us(dt)});
        CHECK(e.lambda_plus == doctest::Approx(0.5 * (dt + std::sqrt(dt * dt + 4 * d * d))));
        CHECK(e.lambda_minus == doctest::Approx(0.5 * (dt - std::sqrt(dt * dt + 4 * d * d))));
        for (const auto& [lam, v] : {std::pair{e.lambda_plus, e.plus}, std::pair{e.lambda_minus, e.minus}}) {
            // M v = lambda v with M = [[0, d], [d, dt]]
            CHECK(d * v[1] == doctest::Approx(lam * v[0]).scale(1.0));
            CHECK(d * v[0] + dt * v[1] == doctest::Approx(lam * v[1]).scale(1.0));
            CHECK(v[0] * v[0] + v[1] * v[1] == doctest::Approx(1.0));
        }
        CHECK(std::abs(e.plus[0] * e.minus[0] + e.plus[1] * e.minus[1]) < 1e-14);
    }
    const auto zero = two_level_eigen({AngularRate{}, AngularRate::from_rad_per_us(2.0)});
    CHECK(std::abs(zero.plus[1]) == 1.0);
    CHECK_THROWS_AS(two_level_eigen({AngularRate::from_rad_per_us(-1.0), AngularRate{}}), DomainError);
}

TEST_CASE("Landau-Zener probability formula")
{
    const auto d = AngularRate::from_mhz(13.0);
    const double d2 = d.rad_per_us() * d.rad_per_us();
    CHECK(lz_probability(d, kTwoPi * d2) == doctest::Approx(std::exp(-1.0)));
    CHECK(lz_probability(d, kTwoPi * d2) == doctest::Approx(0.36788).epsilon(1e-5));
    CHECK(lz_probability(d, 1e-3 * d2) < 1e-300);
    CHECK_THROWS_AS(lz_probability(d, 0.0), DomainError);
    CHECK_THROWS_AS(lz_probability(d, -1.0), DomainError);
}

TEST_CASE("constant two-level propagation matches the closed-form Rabi solution")
{
    const double d = 2.0, det = 1.5, T = 1.7;
    const auto psi = integrate_two_level([&](double) { return d; }, [&](double) { return det; }, 0.0, T,
                                         {cplx(1.0, 0.0), cplx(0.0, 0.0)}, 4000);
    const double r = std::sqrt(d * d + 0.25 * det * det);
    const double p = d * d / (r * r) * std::pow(std::sin(r * T), 2);
    CHECK(std::norm(psi[1]) == doctest::Approx(p).epsilon(1e-10));
    CHECK(std::norm(psi[0]) + std::norm(psi[1]) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("numeric sweep agrees with the Landau-Zener formula over a decade sweep")
{
    const auto d = AngularRate::from_mhz(13.0);
    const double d2 = d.rad_per_us() * d.rad_per_us();
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
        const double p = std::exp(std::log(1e-3) + (std::log(0.9) - std::log(1e-3)) * i / 9.0);
        const double alpha = -kTwoPi * d2 / std::log(p);
        const auto r = lz_sweep_numeric(d, alpha);
        CHECK(r.analytic == doctest::Approx(p).epsilon(1e-12));
        worst = std::max(worst, r.abs_error());
    }
    CHECK(worst < 2e-3);
    // Adiabatic limit.
    const auto slow = lz_sweep_numeric(d, 0.05 * d2);
    CHECK(slow.analytic < 1e-30);
    CHECK(slow.numeric < 2e-3);
}
