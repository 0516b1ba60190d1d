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

#ifndef NFCHAN_CONFIG_HPP
#define NFCHAN_CONFIG_HPP

#include "nfchan/scenario.hpp"
#include "nfchan/surface.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace nfchan
{
    // Inclusive grid start, start + step, ..., <= stop
    struct Sweep
    {
        double start = 0.0;
        double stop = 0.0;
        double step = 1.0;

        std::vector<double> values() const;
    };

    struct VerifyMeanConfig
    {
        PlanarSurfaceSpec surface;
        Vec3 tx = Vec3(0.0, 0.0, 8.0);
        Vec3 rx = Vec3(0.5, 0.0, 8.0);
        Sweep kappa_sigma_z{0.0, 5.0, 0.25};
        std::size_t realizations = 100;
        double mean_tol_rel = 0.05;     // |mean| vs e^{-g/2}
        double mean_tol_abs = 0.02;     // used where e^{-g/2} < mean_abs_below
        double mean_abs_below = 0.05;
        double power_tol_rel = 0.2;     // E|c| vs the closed-form magnitude curve
    };

    struct VerifyDistributionConfig
    {
        PlanarSurfaceSpec surface;
        Vec3 tx = Vec3(0.0, 0.0, 8.0);
        Vec3 rx = Vec3(0.5, 0.0, 8.0);
        std::vector<double> kappa_sigma_z{0.0, 0.5, 3.0};
        std::size_t samples = 500;
        std::size_t bins = 25;
    };

    struct VerifyCorrelationConfig
    {
        PlanarSurfaceSpec surface;
        Vec3 tx = Vec3(0.0, 0.0, 5.0);
        std::vector<double> rx_height_m{0.3, 0.5}; // receive pair center above the surface center
        double max_separation_wavelengths = 5.0;
        std::size_t separations = 26;
        double kappa_sigma_z = 3.0;
        std::size_t realizations = 1000;
        double closed_vs_numeric_tol = 1e-3;
        double empirical_tol = 0.1;
    };

    struct SumRateConfig
    {
        std::vector<double> tx_power_dbm; // empty = doubling sweep from 0 dBm to high_power_dbm
        double ordering_rel_tol = 0.1;
        double saturation_bits = 0.1;
    };

    struct OracleConfig
    {
        PlanarSurfaceSpec surface;
        std::vector<Vec3> tx{Vec3(0.0, 0.0, 8.0)};
        std::vector<Vec3> rx{Vec3(0.5, 0.0, 8.0)};
        std::size_t realizations = 1;
    };

    struct Config
    {
        double carrier_hz = 28e9;
        std::uint64_t seed = 1;
        std::optional<VerifyMeanConfig> verify_mean;
        std::optional<VerifyDistributionConfig> verify_distribution;
        std::optional<VerifyCorrelationConfig> verify_correlation;
        std::optional<ScenarioConfig> scenario;
        SumRateConfig sum_rate;
        std::optional<OracleConfig> oracle;

        std::string canonical; // normalized JSON text the config was parsed from

        double wavelength() const { return wavelength_of(carrier_hz); }
    };

    // Parses the JSON document; throws std::invalid_argument naming the offending key
    Config parse_config(const std::string &json_text);
    Config load_config(const std::string &path);

    // Defaults used by the tests and the CLI when no file is given
    VerifyMeanConfig default_verify_mean(double wavelength);
    VerifyDistributionConfig default_verify_distribution(double wavelength);
    VerifyCorrelationConfig default_verify_correlation(double wavelength);

    // Lower-case hex SHA-256
    std::string sha256_hex(const std::string &data);

    // Digest of the canonical config text together with the effective run parameters
    std::string config_digest(const Config &config, std::uint64_t seed, std::size_t realizations_override);
}

#endif
