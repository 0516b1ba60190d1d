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

#ifndef NFCHAN_SCENARIO_HPP
#define NFCHAN_SCENARIO_HPP

#include "nfchan/channel.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace nfchan
{
    struct NamedArray
    {
        std::string name;
        ArrayGeometry geometry;
    };

    struct LinkConfig
    {
        std::string name;
        std::string tx; // array name
        std::string rx; // array name
        LinkBudget budget;
        std::size_t n_scatterers = 0;             // random point scatterers per draw
        std::vector<PointScatterer> scatterers;   // fixed point scatterers
        std::vector<std::string> surfaces;        // surface names; empty = every scenario surface
        bool use_surfaces = true;
    };

    struct NoiseConfig
    {
        double bandwidth_hz = 20e6;
        double n0_dbm_per_hz = -174.0;
        double noise_figure_db = 6.0;

        // sigma_n^2 = W N_0 N_f [W]
        double variance_w() const;
    };

    // N_y x N_z RIS, element (i, j) at center + (i - (N_y-1)/2) s axis_y + (j - (N_z-1)/2) s axis_z
    struct RisConfig
    {
        Vec3 center = Vec3::Zero();
        Vec3 normal = Vec3::UnitX();
        Vec3 axis_y = Vec3::UnitY();
        std::size_t n_y = 32;
        std::size_t n_z = 32;
        double element_spacing = 0.0; // 0 = lambda / 2
        double unit_cell_area = 0.0;  // 0 = element_spacing^2
        std::size_t n_tiles = 10;

        void validate() const;
        double spacing(double wavelength) const;
        double cell_area(double wavelength) const;

        // Omega = 4 pi A_uc / lambda^2
        double omega(double wavelength) const;

        ArrayGeometry geometry(double wavelength) const;

        // Contiguous bands of z-rows with near-equal height; each entry lists flat element indices
        std::vector<std::vector<std::size_t>> tiles() const;
    };

    struct RisExperimentConfig
    {
        std::string bs = "bs";
        std::vector<std::string> users{"mu1", "mu2"};
        std::string wall_bs_ris = "wall1"; // non-LOS path BS -> RIS
        std::string wall_ris_mu = "wall2"; // non-LOS path RIS -> MU
        LinkBudget bs_mu{-61.0, 2.0, -100.0, -40.0};
        LinkBudget bs_ris{-61.0, 2.0, 100.0, 0.0};
        LinkBudget ris_mu{-61.0, 2.0, 8.0, 0.0};
        std::size_t n_scatterers = 8;
        std::vector<double> tx_power_dbm;     // sweep; empty = default doubling sweep
        double high_power_dbm = 50.0;         // operating point of the ordering check
        std::size_t draws = 50;
    };

    struct ScenarioConfig
    {
        double carrier_hz = 28e9;
        std::vector<NamedArray> arrays;
        std::vector<PlanarSurfaceSpec> surfaces;
        std::vector<LinkConfig> links;
        NoiseConfig noise;
        std::optional<RisConfig> ris;
        RisExperimentConfig ris_experiment;
        std::uint64_t seed = 1;
        unsigned threads = 1;

        double wavelength() const { return wavelength_of(carrier_hz); }

        // Lookup by name; throw std::invalid_argument("unknown ...") if missing
        const ArrayGeometry &array(const std::string &name) const;
        const PlanarSurfaceSpec &surface(const std::string &name) const;
        const LinkConfig &link(const std::string &name) const;
        bool has_surface(const std::string &name) const;

        // Resolves names into a self-contained link description
        LinkDescription link_description(const std::string &link_name) const;

        // Checks every invariant and that all referenced names resolve
        void validate() const;
    };
}

#endif
