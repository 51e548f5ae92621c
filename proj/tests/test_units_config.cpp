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
#include <sstream>

#include "rydsrc/config.hpp"
#include "rydsrc/diagnostics.hpp"
#include "rydsrc/output.hpp"
#include "rydsrc/presets.hpp"
#include "rydsrc/units.hpp"

using namespace rydsrc;

TEST_CASE("angular and plain rates keep the 2 pi apart")
{
    CHECK(AngularRate::from_mhz(1.0).rad_per_us() == doctest::Approx(kTwoPi));
    CHECK(AngularRate::from_rad_per_us(kTwoPi * 3.0).mhz() == doctest::Approx(3.0));
    CHECK(DecayRate::from_khz(10.0).value() == doctest::Approx(0.01));
    CHECK_THROWS_AS(DecayRate::per_us(-1.0), std::invalid_argument);
    CHECK_THROWS_AS(AngularRate::from_mhz(std::nan("")), std::invalid_argument);
    CHECK_THROWS_AS(AngularRate::from_mhz(HUGE_VAL), std::invalid_argument);
    CHECK(C3Coefficient{11.7}.rad_per_us_um3() == doctest::Approx(11700.0));
}

TEST_CASE("presets carry the tabulated constants")
{
    const auto& cs = preset_lookup("CsRb_70P");
    CHECK(cs.c3.ghz_um3 == 11.7);
    CHECK(cs.delta_sa.mhz() == doctest::Approx(-94.0));
    CHECK(preset_lookup("RbRb_A").c3.ghz_um3 == 16.1);
    CHECK(preset_lookup("RbRb_A").delta_sa.mhz() == doctest::Approx(-92.0));
    CHECK(preset_lookup("RbRb_B").c3.ghz_um3 == 20.3);
    CHECK(preset_lookup("RbRb_B").delta_sa.mhz() == doctest::Approx(-86.0));
    CHECK(cs.gamma_e.mhz() == doctest::Approx(6.07));
    CHECK_THROWS_AS(preset_lookup("NaK"), ConfigError);
    CHECK(all_presets().size() == 3);

    // |k_297 - k_480| against k_780.
    const double k = phase_match_wavenumber(cs);
    CHECK(k == doctest::Approx(kTwoPi / 0.78024));
    const double mismatch = std::abs(kTwoPi / 0.297 - kTwoPi / 0.480 - k) / k;
    CHECK(mismatch < 0.01);

    SpeciesPreset bad = cs;
    bad.lambda_control_nm = bad.lambda_excite_nm;
    CHECK_THROWS_AS(phase_match_wavenumber(bad), ConfigError);
}

TEST_CASE("config JSON round trip and strict parsing")
{
    ExperimentConfig cfg;
    cfg.ensemble.n_atoms = 321;
    cfg.preparation.intermediate_detuning_mhz = 80.0;
    const auto doc = to_json(cfg);
    const auto back = config_from_json(doc);
    CHECK(back.ensemble.n_atoms == 321);
    REQUIRE(back.preparation.intermediate_detuning_mhz.has_value());
    CHECK(*back.preparation.intermediate_detuning_mhz == 80.0);
    CHECK(config_hash(back) == config_hash(cfg));

    auto unknown = doc;
    unknown["ensemble"]["n_atom"] = 5;
    CHECK_THROWS_AS(config_from_json(unknown), ConfigError);
    auto wrong = doc;
    wrong["campaign"]["realizations"] = "many";
    CHECK_THROWS_AS(config_from_json(wrong), ConfigError);
    auto version = doc;
    version["schema_version"] = 7;
    CHECK_THROWS_AS(config_from_json(version), ConfigError);

    // Missing keys keep defaults.
    const auto partial = config_from_json(nlohmann::json{{"ensemble", {{"n_atoms", 10}}}});
    CHECK(partial.ensemble.n_atoms == 10);
    CHECK(partial.campaign.realizations == ExperimentConfig{}.campaign.realizations);
}

TEST_CASE("overrides walk dotted keys and change the hash")
{
    ExperimentConfig cfg;
    const auto h0 = config_hash(cfg);
    const auto o = apply_overrides(cfg, {"preparation.gamma_sg_per_us=0", "preset=RbRb_A"});
    CHECK(o.preparation.gamma_sg_per_us == 0.0);
    CHECK(o.preset == "RbRb_A");
    CHECK(config_hash(o) != h0);
    CHECK(config_hash(apply_overrides(cfg, {})) == h0);
    CHECK_THROWS_AS(apply_overrides(cfg, {"preparation.nope=1"}), ConfigError);
    CHECK_THROWS_AS(apply_overrides(cfg, {"no_equals_sign"}), ConfigError);
    CHECK_THROWS_AS(apply_overrides(cfg, {"ensemble.n_atoms=\"x\""}), ConfigError);
}

TEST_CASE("sha256 matches the FIPS 180-2 test vectors")
{
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("validation: hard errors throw, soft ones warn")
{
    ExperimentConfig cfg;
    cfg.campaign.realizations = 4;
    {
        WarningCapture cap;
        const auto rep = validate_config(cfg);
        CHECK(rep.d_bar_estimate.mhz() > 10.0);
        CHECK(rep.d_bar_estimate.mhz() < 16.0);
        CHECK_FALSE(cap.contains("adiabatic elimination degraded: |Delta|"));
    }
    {
        auto c = cfg;
        c.preparation.dt_us = 0.05;
        CHECK_THROWS_AS(validate_config(c), ConfigError);
    }
    {
        auto c = cfg;
        c.preparation.intermediate_detuning_mhz = 0.0;
        CHECK_THROWS_AS(validate_config(c), ConfigError);
    }
    {
        auto c = cfg;
        c.preset = "unknown";
        CHECK_THROWS_AS(validate_config(c), ConfigError);
    }
    {
        auto c = cfg;
        c.ensemble.source_um = Vec3(2.0, 0.0, 0.0); // inside the cloud
        CHECK_THROWS_AS(validate_config(c), ConfigError);
    }
    {
        auto c = cfg;
        c.preparation.intermediate_detuning_mhz = 50.0;
        WarningCapture cap;
        const auto rep = validate_config(c);
        CHECK(cap.contains("adiabatic elimination degraded"));
        CHECK_FALSE(rep.warnings.empty());
    }
    {
        // Slow sweep against a tiny coupling.
        auto c = cfg;
        c.preparation.omega_max_mhz = 0.5;
        WarningCapture cap;
        validate_config(c);
        CHECK(cap.contains("chirp is not adiabatic"));
    }
}

TEST_CASE("numeric output is fixed-precision and canonical")
{
    CHECK(sci(1.0) == "1.0000000000000000e+00");
    CHECK(sci(-0.5) == "-5.0000000000000000e-01");
    const nlohmann::json a = {{"b", 2.5}, {"a", 1}};
    const nlohmann::json b = {{"a", 1}, {"b", 2.5}};
    CHECK(dump_json_sci(a) == dump_json_sci(b));
    CHECK(dump_json_sci(a).find("2.5000000000000000e+00") != std::string::npos);
    std::ostringstream os;
    write_csv_header(os, {"x", "y"});
    write_csv_row(os, {1.0, 2.0});
    CHECK(os.str() == "x,y\n1.0000000000000000e+00,2.0000000000000000e+00\n");
}
