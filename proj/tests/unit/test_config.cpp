// SPDX-License-Identifier: Apache-2.0
//
// nfchan - near-field MIMO channel modelling with rough-surface reflections
// Copyright (C) 2026 The nfchan Authors
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
// ------------------------------------------------------------------------

#include <catch_amalgamated.hpp>

#include "nfchan/config.hpp"
#include "nfchan/csv.hpp"
#include "nfchan/experiments.hpp"

#include <sstream>

using namespace nfchan;
using Catch::Approx;
using Catch::Matchers::ContainsSubstring;

TEST_CASE("number formatting round-trips and folds negative zero")
{
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(-0.0) == "0");
    CHECK(format_double(1e-300) == "1e-300");
    CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("CSV writer layout")
{
    std::ostringstream out;
    CsvWriter csv(out);
    csv.comment("seed", "4");
    csv.header({"a", "b", "c"});
    csv.row(1.5, std::int64_t{-2}, std::string_view("x"));
    csv.row(std::size_t{3}, 0.25, std::string("y"));
    CHECK(out.str() == "# seed: 4\na,b,c\n1.5,-2,x\n3,0.25,y\n");
}

TEST_CASE("SHA-256 known answers")
{
    CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("empty document gives defaults")
{
    const Config c = parse_config("{}");
    CHECK(c.carrier_hz == 28e9);
    CHECK(c.seed == 1);
    CHECK_FALSE(c.verify_mean.has_value());
    const auto v = default_verify_mean(c.wavelength());
    CHECK(v.surface.length_u == Approx(0.5));
    CHECK(v.kappa_sigma_z.values().size() == 21);
    CHECK(v.realizations == 100);
}

TEST_CASE("sweep grid is inclusive")
{
    const Sweep s{0.0, 5.0, 0.25};
    const auto v = s.values();
    REQUIRE(v.size() == 21);
    CHECK(v.back() == 5.0);
    CHECK(v[3] == 0.75);
}

TEST_CASE("unknown keys and bad values name their path")
{
    CHECK_THROWS_WITH(parse_config(R"({"sede": 1})"), ContainsSubstring("$.sede"));
    CHECK_THROWS_WITH(parse_config(R"({"verify_mean": {"surface": {"sigma": 1}}})"), ContainsSubstring("$.verify_mean.surface.sigma"));
    CHECK_THROWS_WITH(parse_config(R"({"verify_mean": {"tolerance": {"power_rel": "x"}}})"), ContainsSubstring("$.verify_mean.tolerance.power_rel"));
    CHECK_THROWS_WITH(parse_config(R"({"carrier_frequency_hz": -1})"), ContainsSubstring("carrier_frequency_hz"));
    CHECK_THROWS_WITH(parse_config(R"({"verify_mean": {"surface": {"zeta": 2}}})"), ContainsSubstring("$.verify_mean.surface"));
    CHECK_THROWS_WITH(parse_config(R"({"scenario": {"preset": "nope"}})"), ContainsSubstring("$.scenario.preset"));
    CHECK_THROWS_WITH(parse_config("{"), ContainsSubstring("malformed"));
}

TEST_CASE("verify-mean section")
{
    const Config c = parse_config(R"({
        "seed": 9,
        "verify_mean": {
            "surface": {"length_u_m": 0.3, "length_v_m": 0.2, "zeta": 0.5},
            "tx_m": [0, 0, 4], "rx_m": [0.2, 0, 4],
            "kappa_sigma_z": {"start": 0, "stop": 1, "step": 0.5},
            "realizations": 12,
            "tolerance": {"mean_rel": 0.04}
        }})");
    REQUIRE(c.verify_mean.has_value());
    const auto &v = *c.verify_mean;
    CHECK(c.seed == 9);
    CHECK(v.surface.length_v == 0.2);
    CHECK(v.surface.zeta == 0.5);
    CHECK(v.tx.z() == 4.0);
    CHECK(v.kappa_sigma_z.values() == std::vector<double>{0.0, 0.5, 1.0});
    CHECK(v.realizations == 12);
    CHECK(v.mean_tol_rel == 0.04);
    CHECK(v.power_tol_rel == 0.2);
}

TEST_CASE("scenario preset with overrides")
{
    const Config c = parse_config(R"({
        "scenario": {"preset": "two-user-walls", "ris_side": 8,
                     "ris_experiment": {"draws": 3, "high_power_dbm": 44}},
        "sum_rate": {"tx_power_sweep_dbm": {"start": 0, "stop": 9, "step": 3}}})");
    REQUIRE(c.scenario.has_value());
    REQUIRE(c.scenario->ris.has_value());
    CHECK(c.scenario->ris->n_y == 8);
    CHECK(c.scenario->ris_experiment.draws == 3);
    CHECK(c.scenario->ris_experiment.high_power_dbm == 44.0);
    CHECK(c.sum_rate.tx_power_dbm == std::vector<double>{0, 3, 6, 9});
    CHECK(c.scenario->surface("wall1").zeta == Approx(zeta_for_specular_loss(c.wavelength(), -61, 3)));
}

TEST_CASE("explicit scenario arrays and links")
{
    const Config c = parse_config(R"({
        "scenario": {
            "arrays": [{"name": "a", "position_m": [0, 0, 3]},
                       {"name": "b", "upa": {"center_m": [2, 0, 1], "axis_a": [1, 0, 0], "axis_b": [0, 1, 0], "n_a": 2, "n_b": 2}}],
            "surfaces": [{"name": "floor", "length_u_m": 4, "length_v_m": 4, "sigma_z_m": 0.001, "zeta": 0.5}],
            "links": [{"name": "ab", "tx": "a", "rx": "b", "budget": {"ricean_k_db": 10}, "n_scatterers": 2,
                       "scatterers": [{"position_m": [1, 1, 1], "amplitude_re": 1e-4}]}]
        }})");
    const auto &s = *c.scenario;
    CHECK(s.array("b").size() == 4);
    CHECK(s.link("ab").budget.ricean_k_db == 10.0);
    CHECK(s.link("ab").scatterers.size() == 1);
    const auto d = s.link_description("ab");
    CHECK(d.surfaces.size() == 1);
    CHECK(d.n_random_scatterers == 2);

    CHECK_THROWS_WITH(parse_config(R"({"scenario": {"links": [{"name": "x", "tx": "nope", "rx": "nope"}]}})"), ContainsSubstring("$.scenario"));
}

TEST_CASE("digest is deterministic and sensitive to effective inputs")
{
    const Config a = parse_config(R"({"seed": 1})"), b = parse_config(R"({"seed":1})"), c = parse_config(R"({"seed": 2})");
    CHECK(config_digest(a, 1, 0) == config_digest(b, 1, 0));
    CHECK(config_digest(a, 1, 0) != config_digest(c, 1, 0));
    CHECK(config_digest(a, 1, 0) != config_digest(a, 2, 0));
    CHECK(config_digest(a, 1, 0) != config_digest(a, 1, 5));
    CHECK(config_digest(a, 1, 0).size() == 64);
}

TEST_CASE("output directory resolution")
{
    CHECK(resolve_out_dir(std::string("x/y")) == "x/y");
    unsetenv("NFCHAN_OUT_DIR");
    CHECK(resolve_out_dir(std::nullopt) == ".");
    setenv("NFCHAN_OUT_DIR", "/tmp/nf", 1);
    CHECK(resolve_out_dir(std::nullopt) == "/tmp/nf");
    CHECK(resolve_out_dir(std::string("z")) == "z");
    unsetenv("NFCHAN_OUT_DIR");
}

TEST_CASE("report JSON and lookups")
{
    ExperimentReport r;
    r.id = "x";
    r.summary = {{"a", 0.5}};
    r.checks = {{"c1", 0.1, 0.2, true, ""}, {"c2", 0.3, 0.2, false, "d"}};
    CHECK_FALSE(r.passed());
    CHECK(r.check("c2").detail == "d");
    CHECK(r.value("a") == 0.5);
    CHECK_THROWS(r.check("zz"));
    const std::string j = r.to_json();
    CHECK_THROWS(r.value("zz"));
    CHECK(j.find("\"passed\": false") != std::string::npos);
}

TEST_CASE("unknown experiment name")
{
    CHECK_THROWS_WITH(run_experiment("nope", parse_config("{}"), RunOptions{}), ContainsSubstring("unknown experiment"));
}

TEST_CASE("shipped configuration files load")
{
    for (const char *name : {"verify_mean", "verify_distribution", "verify_correlation", "sum_rate", "oracle"})
    {
        INFO(name);
        const Config c = load_config(std::string(NFCHAN_CONFIG_DIR) + "/" + name + ".json");
        CHECK(c.carrier_hz == 28e9);
    }
    const Config mean = load_config(std::string(NFCHAN_CONFIG_DIR) + "/verify_mean.json");
    const auto d = default_verify_mean(mean.wavelength());
    CHECK(mean.verify_mean->surface.length_u == d.surface.length_u);
    CHECK(mean.verify_mean->kappa_sigma_z.values() == d.kappa_sigma_z.values());
    CHECK(load_config(std::string(NFCHAN_CONFIG_DIR) + "/oracle.json").oracle->tx.size() == 2);
    CHECK_THROWS_WITH(load_config("/nonexistent/x.json"), ContainsSubstring("/nonexistent/x.json"));
}
