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
#include <string>
#include <string_view>

#include "rydsrc/units.hpp"

namespace rydsrc {

enum class Species { CsRb_70P, RbRb_A, RbRb_B };

/// Quantum numbers of the four Rydberg levels involved in the exchange.
struct LevelLabels {
    std::string_view source_up;     // |u>
    std::string_view source_down;   // |d>
    std::string_view medium_inter;  // |i>
    std::string_view medium_stored; // |s>
};

/// Atomic constants for one choice of source/medium species and levels.
struct SpeciesPreset {
    Species species;
    std::string_view name;
    C3Coefficient c3;
    AngularRate delta_sa;         // omega_ud - omega_si
    double lambda_excite_nm;      // g -> i laser
    double lambda_control_nm;     // s -> e control laser
    double lambda_photon_nm;      // e -> g emission
    AngularRate gamma_e;          // decay rate of |e>, angular convention
    LevelLabels levels;
};

/// Tabulated preset. Throws ConfigError for an unknown name.
const SpeciesPreset& preset_lookup(Species species);
const SpeciesPreset& preset_lookup(std::string_view name);

/// All presets, in declaration order.
const std::array<SpeciesPreset, 3>& all_presets();

std::string_view to_string(Species species);

/// Emission wavenumber 2*pi/lambda_photon in 1/um.
///
/// Also checks that collinear excitation and control beams are phase
/// matched, |k_excite - k_control| == k_photon within 1%; throws
/// ConfigError otherwise (including the degenerate equal-wavelength case).
double phase_match_wavenumber(const SpeciesPreset& preset);

/// Wavenumber 2*pi/lambda in 1/um for a wavelength in nm.
constexpr double wavenumber_per_um(double lambda_nm) { return kTwoPi / (lambda_nm * 1e-3); }

} // namespace rydsrc
