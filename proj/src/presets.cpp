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

#include "rydsrc/presets.hpp"

#include <cmath>
#include <string>

#include "rydsrc/diagnostics.hpp"

namespace rydsrc {

namespace {

// Optical wavelengths and Gamma_e are standard Rb values (5S-nP excitation
// at 297 nm, 5P-nS/nD control at 480 nm, D2 emission at 780.24 nm with a
// 6.07 MHz natural linewidth). They are shared by the three presets since
// the medium is Rb in all of them.
constexpr double kExciteNm = 297.0;
constexpr double kControlNm = 480.0;
constexpr double kPhotonNm = 780.24;
constexpr double kGammaEMHz = 6.07;

const std::array<SpeciesPreset, 3> kPresets = {{
    {Species::CsRb_70P, "CsRb_70P", C3Coefficient{11.7}, AngularRate::from_mhz(-94.0), kExciteNm,
     kControlNm, kPhotonNm, AngularRate::from_mhz(kGammaEMHz),
     {"Cs 70P3/2 mj=1/2", "Cs 70S1/2 mj=1/2", "Rb 58P3/2 mj=3/2", "Rb 57D5/2 mj=3/2"}},
    {Species::RbRb_A, "RbRb_A", C3Coefficient{16.1}, AngularRate::from_mhz(-92.0), kExciteNm,
     kControlNm, kPhotonNm, AngularRate::from_mhz(kGammaEMHz),
     {"Rb 70P3/2 mj=3/2", "Rb 68D5/2 mj=3/2", "Rb 64P3/2 mj=1/2", "Rb 65S1/2 mj=1/2"}},
    {Species::RbRb_B, "RbRb_B", C3Coefficient{20.3}, AngularRate::from_mhz(-86.0), kExciteNm,
     kControlNm, kPhotonNm, AngularRate::from_mhz(kGammaEMHz),
     {"Rb 71P1/2 mj=1/2", "Rb 69D3/2 mj=1/2", "Rb 65P3/2 mj=1/2", "Rb 66S1/2 mj=1/2"}},
}};

} // namespace

const std::array<SpeciesPreset, 3>& all_presets() { return kPresets; }

const SpeciesPreset& preset_lookup(Species species)
{
    for (const auto& p : kPresets)
        if (p.species == species)
            return p;
    throw ConfigError("unknown species preset");
}

const SpeciesPreset& preset_lookup(std::string_view name)
{
    for (const auto& p : kPresets)
        if (p.name == name)
            return p;
    throw ConfigError("unknown species preset '" + std::string(name) + "'");
}

std::string_view to_string(Species species) { return preset_lookup(species).name; }

double phase_match_wavenumber(const SpeciesPreset& preset)
{
    if (!(preset.lambda_excite_nm > 0.0 && preset.lambda_control_nm > 0.0 && preset.lambda_photon_nm > 0.0))
        throw ConfigError("preset wavelengths must be positive");
    const double k_photon = wavenumber_per_um(preset.lambda_photon_nm);
    const double k_mismatch =
        std::abs(wavenumber_per_um(preset.lambda_excite_nm) - wavenumber_per_um(preset.lambda_control_nm));
    if (k_mismatch == 0.0)
        throw ConfigError("no phase-matched optical mode: excitation and control wavelengths coincide");
    if (std::abs(k_mismatch - k_photon) > 0.01 * k_photon)
        throw ConfigError("inconsistent preset wavelengths: |k_excite - k_control| differs from k_photon by more than 1%");
    return k_photon;
}

} // namespace rydsrc
