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

#include "nfchan/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace nfchan
{
    double NoiseConfig::variance_w() const
    {
        return bandwidth_hz * db_to_linear(n0_dbm_per_hz - 30.0) * db_to_linear(noise_figure_db);
    }

    void RisConfig::validate() const
    {
        if (n_y == 0 || n_z == 0)
            throw std::invalid_argument("RIS needs at least one element");
        if (n_tiles == 0 || n_tiles > n_z)
            throw std::invalid_argument("RIS tile count must be in [1, n_z]");
        if (element_spacing < 0.0 || unit_cell_area < 0.0)
            throw std::invalid_argument("RIS spacing and unit-cell area must be >= 0");
        if (!is_finite(center) || normal.norm() == 0.0 || axis_y.norm() == 0.0)
            throw std::invalid_argument("invalid RIS pose");
    }

    double RisConfig::spacing(double wavelength) const
    {
        return element_spacing > 0.0 ? element_spacing : 0.5 * wavelength;
    }

    double RisConfig::cell_area(double wavelength) const
    {
        const double s = spacing(wavelength);
        return unit_cell_area > 0.0 ? unit_cell_area : s * s;
    }

    double RisConfig::omega(double wavelength) const
    {
        return 4.0 * pi * cell_area(wavelength) / (wavelength * wavelength);
    }

    ArrayGeometry RisConfig::geometry(double wavelength) const
    {
        validate();
        const PlanePose pose = PlanePose::make(center, normal, axis_y);
        return ArrayGeometry::upa(center, pose.axis_u(), pose.axis_v(), n_y, n_z, spacing(wavelength));
    }

    std::vector<std::vector<std::size_t>> RisConfig::tiles() const
    {
        validate();
        std::vector<std::vector<std::size_t>> out(n_tiles);
        for (std::size_t t = 0; t < n_tiles; ++t)
        {
            const std::size_t j0 = n_z * t / n_tiles, j1 = n_z * (t + 1) / n_tiles;
            for (std::size_t i = 0; i < n_y; ++i)
                for (std::size_t j = j0; j < j1; ++j)
                    out[t].push_back(i * n_z + j);
            std::sort(out[t].begin(), out[t].end());
        }
        return out;
    }

    const ArrayGeometry &ScenarioConfig::array(const std::string &name) const
    {
        for (const auto &a : arrays)
            if (a.name == name)
                return a.geometry;
        throw std::invalid_argument("unknown array '" + name + "'");
    }

    const PlanarSurfaceSpec &ScenarioConfig::surface(const std::string &name) const
    {
        for (const auto &s : surfaces)
            if (s.name == name)
                return s;
        throw std::invalid_argument("unknown surface '" + name + "'");
    }

    bool ScenarioConfig::has_surface(const std::string &name) const
    {
        return std::any_of(surfaces.begin(), surfaces.end(), [&](const auto &s)
                           { return s.name == name; });
    }

    const LinkConfig &ScenarioConfig::link(const std::string &name) const
    {
        for (const auto &l : links)
            if (l.name == name)
                return l;
        throw std::invalid_argument("unknown link '" + name + "'");
    }

    LinkDescription ScenarioConfig::link_description(const std::string &link_name) const
    {
        const LinkConfig &l = link(link_name);
        LinkDescription d;
        d.tx = array(l.tx);
        d.rx = array(l.rx);
        d.budget = l.budget;
        d.fixed_scatterers = l.scatterers;
        d.n_random_scatterers = l.n_scatterers;
        d.wavelength = wavelength();
        d.threads = threads;
        if (l.use_surfaces)
        {
            if (l.surfaces.empty())
                d.surfaces = surfaces;
            else
                for (const auto &s : l.surfaces)
                    d.surfaces.push_back(surface(s));
        }
        return d;
    }

    void ScenarioConfig::validate() const
    {
        if (!(carrier_hz > 0.0) || !std::isfinite(carrier_hz))
            throw std::invalid_argument("carrier frequency must be positive");
        std::set<std::string> names;
        for (const auto &a : arrays)
            if (!names.insert("array:" + a.name).second)
                throw std::invalid_argument("duplicate array '" + a.name + "'");
        for (const auto &s : surfaces)
        {
            s.validate();
            if (!names.insert("surface:" + s.name).second)
                throw std::invalid_argument("duplicate surface '" + s.name + "'");
        }
        for (const auto &l : links)
        {
            if (!names.insert("link:" + l.name).second)
                throw std::invalid_argument("duplicate link '" + l.name + "'");
            l.budget.validate();
            array(l.tx);
            array(l.rx);
            for (const auto &s : l.surfaces)
                surface(s);
        }
        if (ris)
        {
            ris->validate();
            array(ris_experiment.bs);
            if (ris_experiment.users.empty())
                throw std::invalid_argument("RIS experiment needs at least one user");
            for (const auto &u : ris_experiment.users)
                array(u);
            ris_experiment.bs_mu.validate();
            ris_experiment.bs_ris.validate();
            ris_experiment.ris_mu.validate();
        }
    }
}
