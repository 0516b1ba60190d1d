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

#ifndef NFCHAN_CHANNEL_HPP
#define NFCHAN_CHANNEL_HPP

#include "nfchan/stat_model.hpp"
#include "nfchan/surface.hpp"
#include "nfchan/types.hpp"

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

namespace nfchan
{
    class ArrayGeometry
    {
    public:
        ArrayGeometry() = default;
        explicit ArrayGeometry(std::vector<Vec3> elements);

        // Uniform planar array centered at "center"; element (i, j) sits at
        // center + (i - (n_a - 1)/2) s axis_a + (j - (n_b - 1)/2) s axis_b, flat index i * n_b + j
        static ArrayGeometry upa(const Vec3 &center, const Vec3 &axis_a, const Vec3 &axis_b,
                                 std::size_t n_a, std::size_t n_b, double spacing);

        static ArrayGeometry single(const Vec3 &position) { return ArrayGeometry({position}); }

        const std::vector<Vec3> &elements() const { return elements_; }
        const Vec3 &center() const { return center_; }
        std::size_t size() const { return elements_.size(); }

    private:
        std::vector<Vec3> elements_;
        Vec3 center_ = Vec3::Zero();
    };

    struct PointScatterer
    {
        Vec3 position = Vec3::Zero();
        cplx amplitude{}; // c_s
    };

    struct LinkBudget
    {
        double beta_ref_db = -61.0;       // Path loss at d_0 = 1 m
        double path_loss_exponent = 2.0;  // eta
        double ricean_k_db = 100.0;       // LOS power over aggregate point-scatterer power
        double blockage_db = 0.0;         // <= 0, scales the whole link

        void validate() const;

        // beta (d / 1 m)^-eta * blockage
        double path_gain(double distance) const;
    };

    // [a(p)]_i = e^{j kappa |u_i - p|}
    ComplexVector array_response(const ArrayGeometry &array, const Vec3 &p, double wavelength);

    // [H]_{m,n} = e^{j kappa |u_rx,m - u_tx,n|}; throws std::invalid_argument("coincident elements")
    ComplexMatrix los_matrix(const ArrayGeometry &tx, const ArrayGeometry &rx, double wavelength);

    // a_rx(u_s) a_tx^T(u_s) (unit amplitude); throws std::invalid_argument("coincident elements")
    ComplexMatrix scatterer_matrix(const PointScatterer &s, const ArrayGeometry &tx, const ArrayGeometry &rx, double wavelength);

    // c_s = reference / (|u_rx - u_s| |u_s - u_tx|)
    double point_scatterer_amplitude(const Vec3 &u_s, const Vec3 &u_tx, const Vec3 &u_rx, double reference = 1.0);

    // zeta for which |c_d(0)| equals the free-space amplitude at the image distance minus "loss_db" (eta = 2)
    double zeta_for_specular_loss(double wavelength, double beta_ref_db, double loss_db);

    struct LinkDescription
    {
        ArrayGeometry tx;
        ArrayGeometry rx;
        LinkBudget budget;
        std::vector<PlanarSurfaceSpec> surfaces;
        std::vector<PointScatterer> fixed_scatterers;
        std::size_t n_random_scatterers = 0;
        double wavelength = wavelength_of(28e9);
        double rx_effective_area = 0.0; // A_rx for |c_{n,inf}|^2; 0 = lambda^2 / (4 pi)
        double tx_directivity = 1.0;    // D_tx
        std::size_t dense_covariance_limit = 256;
        unsigned threads = 1;
    };

    // One surface's contribution to a link
    struct SurfaceTerm
    {
        std::string name;
        SurfaceChannelStats stats;
        bool specular_on_surface = false; // the specular point lies inside the finite rectangle
        StochasticSampler sampler;
    };

    // Precomputed channel of one link; draw() adds random point scatterers and the stochastic surface parts
    class LinkModel
    {
    public:
        explicit LinkModel(const LinkDescription &desc);

        // E{H}: LOS + fixed scatterers + specular components
        const ComplexMatrix &mean() const { return mean_; }

        ComplexMatrix draw(std::uint64_t seed) const;

        const LinkDescription &description() const { return desc_; }
        const std::vector<SurfaceTerm> &surface_terms() const { return surfaces_; }
        const std::vector<std::string> &warnings() const { return warnings_; }

        double los_amplitude() const { return c0_; }
        double scatterer_power() const { return scatterer_power_; } // aggregate E|c_s|^2 of the random scatterers

    private:
        LinkDescription desc_;
        ComplexMatrix mean_;
        double c0_ = 0.0;
        double scatterer_power_ = 0.0;
        double link_scale_ = 1.0;
        std::vector<SurfaceTerm> surfaces_;
        std::vector<std::string> warnings_;
    };

    struct ScenarioConfig;

    // Channel realization of a named link of the scenario; deterministic in (scenario, link, seed)
    ComplexMatrix assemble_channel(const ScenarioConfig &scenario, const std::string &link, std::uint64_t seed);

    // Rows "m,n,re,im"
    void write_channel_csv(const ComplexMatrix &H, std::ostream &out);

    // int64 LE rows, int64 LE cols, then row-major (re, im) doubles in little-endian
    void write_channel_binary(const ComplexMatrix &H, std::ostream &out);
    ComplexMatrix read_channel_binary(std::istream &in);
}

#endif
