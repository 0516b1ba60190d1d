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

#ifndef NFCHAN_HF_ORACLE_HPP
#define NFCHAN_HF_ORACLE_HPP

#include "nfchan/surface.hpp"
#include "nfchan/types.hpp"

#include <cstdint>
#include <vector>

namespace nfchan
{
    // One oracle value E(u_rx) / E(u_tx)
    struct HfSample
    {
        cplx value{};
        std::size_t tx_index = 0;
        std::size_t rx_index = 0;
        std::uint64_t realization_seed = 0;
    };

    // Brute-force Huygens-Fresnel reflection integral over one realization (midpoint rule).
    // Throws std::invalid_argument("no reflection path") if Tx and Rx are not strictly on the same side,
    // and ("quadrature resolution") if the grid step exceeds lambda/8.
    // threads = 0 uses all hardware threads; the result is bit-identical for any thread count.
    cplx hf_integral(const RoughRealization &realization, const Vec3 &u_tx, const Vec3 &u_rx,
                     double wavelength, unsigned threads = 1);

    // All Tx/Rx combinations in one pass over the cells; returns an [N_rx, N_tx] matrix
    ComplexMatrix hf_matrix(const RoughRealization &realization, const std::vector<Vec3> &tx_positions,
                            const std::vector<Vec3> &rx_positions, double wavelength, unsigned threads = 1);

    // One [N_rx, N_tx] matrix per realization, realization i drawn with seed base_seed + i
    std::vector<ComplexMatrix> monte_carlo_channel(const PlanarSurfaceSpec &spec, const std::vector<Vec3> &tx_positions,
                                                   const std::vector<Vec3> &rx_positions, double wavelength,
                                                   std::size_t n_realizations, std::uint64_t base_seed,
                                                   unsigned threads = 1);

    // Flattened view of a Monte-Carlo run
    std::vector<HfSample> to_samples(const std::vector<ComplexMatrix> &matrices, std::uint64_t base_seed);

    // Oracle on the flat (sigma_z = 0) version of the surface
    cplx hf_flat(const PlanarSurfaceSpec &spec, const Vec3 &u_tx, const Vec3 &u_rx, double wavelength, unsigned threads = 1);

    // E|hf_integral|^2 in the limit of independent uniformly distributed cell phases:
    // (zeta / lambda)^2 * sum_cells (a_tx a_rx dA)^2, with a = z_perp / r^2
    double diffuse_power_iid(const PlanarSurfaceSpec &spec, const Vec3 &u_tx, const Vec3 &u_rx, double wavelength);
}

#endif
