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

#ifndef NFCHAN_SURFACE_HPP
#define NFCHAN_SURFACE_HPP

#include "nfchan/geometry.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace nfchan
{
    // Finite rectangular non-reconfigurable surface (wall, ground, ceiling).
    // The rectangle is centered at pose.origin and spans [-length_u/2, length_u/2] x [-length_v/2, length_v/2].
    struct PlanarSurfaceSpec
    {
        std::string name = "surface";
        PlanePose pose = PlanePose::make(Vec3::Zero(), Vec3::UnitZ(), Vec3::UnitX());
        double length_u = 1.0;           // Extent along pose.axis_u() [m]
        double length_v = 1.0;           // Extent along pose.axis_v() [m]
        double sigma_z = 0.0;            // Height standard deviation [m]
        double zeta = 1.0;               // Passivity / loss factor, (0, 1]
        double grid_step = 0.0;          // Quadrature cell size [m]; 0 = lambda/10 at first use
        double correlation_length = 0.0; // Gaussian height correlation length [m]; 0 = i.i.d. per cell

        // Throws std::invalid_argument on violated invariants
        void validate() const;

        double area() const { return length_u * length_v; }

        // Grid step to use for a given wavelength (resolves the lambda/10 default)
        double step_for(double wavelength) const;

        // Number of cells along u and v for a given step
        std::size_t cells_u(double step) const;
        std::size_t cells_v(double step) const;

        // Whether the in-plane projection of p lies inside the rectangle
        bool contains(const Vec3 &p) const;
    };

    // One Gaussian height-field draw on the quadrature grid. Heights are row-major [cells_u, cells_v].
    struct RoughRealization
    {
        PlanarSurfaceSpec spec;
        double step = 0.0;
        std::size_t n_u = 0;
        std::size_t n_v = 0;
        std::vector<double> heights;
        std::uint64_t seed = 0;

        double height(std::size_t iu, std::size_t iv) const { return heights[iu * n_v + iv]; }

        // Center of cell (iu, iv) on the mean plane
        Vec3 cell_center(std::size_t iu, std::size_t iv) const;
    };

    // Draws i.i.d. N(0, sigma_z^2) heights per cell (or Gaussian-smoothed heights when
    // correlation_length > 0, rescaled to standard deviation sigma_z). Deterministic in (spec, seed).
    // "wavelength" only resolves the default grid step.
    RoughRealization sample_realization(const PlanarSurfaceSpec &spec, std::uint64_t seed, double wavelength);

    // Flat realization (all heights zero)
    RoughRealization flat_realization(const PlanarSurfaceSpec &spec, double wavelength);

    // CSV dump: header "x_m,y_m,z_m" followed by one line per cell (global coordinates)
    void write_realization_csv(const RoughRealization &realization, std::ostream &out);
}

#endif
