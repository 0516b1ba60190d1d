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

#include "nfchan/surface.hpp"
#include "nfchan/csv.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>
#include <stdexcept>

namespace nfchan
{
    void PlanarSurfaceSpec::validate() const
    {
        if (!(length_u > 0.0) || !(length_v > 0.0) || !std::isfinite(length_u) || !std::isfinite(length_v))
            throw std::invalid_argument("surface '" + name + "': extents must be positive");
        if (!std::isfinite(sigma_z) || sigma_z < 0.0)
            throw std::invalid_argument("surface '" + name + "': sigma_z must be finite and >= 0");
        if (!(zeta > 0.0) || zeta > 1.0)
            throw std::invalid_argument("surface '" + name + "': zeta must be in (0, 1]");
        if (!std::isfinite(grid_step) || grid_step < 0.0)
            throw std::invalid_argument("surface '" + name + "': grid_step must be >= 0");
        if (!std::isfinite(correlation_length) || correlation_length < 0.0)
            throw std::invalid_argument("surface '" + name + "': correlation_length must be >= 0");
    }

    double PlanarSurfaceSpec::step_for(double wavelength) const
    {
        return grid_step > 0.0 ? grid_step : wavelength / 10.0;
    }

    std::size_t PlanarSurfaceSpec::cells_u(double step) const
    {
        return static_cast<std::size_t>(std::ceil(length_u / step - 1e-9));
    }

    std::size_t PlanarSurfaceSpec::cells_v(double step) const
    {
        return static_cast<std::size_t>(std::ceil(length_v / step - 1e-9));
    }

    bool PlanarSurfaceSpec::contains(const Vec3 &p) const
    {
        const auto [u, v] = pose.in_plane(p);
        return std::abs(u) <= 0.5 * length_u && std::abs(v) <= 0.5 * length_v;
    }

    Vec3 RoughRealization::cell_center(std::size_t iu, std::size_t iv) const
    {
        // The grid is centered on the surface origin; with ceil() the outermost cells may overhang by < step
        const double u = (static_cast<double>(iu) + 0.5) * step - 0.5 * static_cast<double>(n_u) * step;
        const double v = (static_cast<double>(iv) + 0.5) * step - 0.5 * static_cast<double>(n_v) * step;
        return spec.pose.point(u, v);
    }

    namespace
    {
        RoughRealization empty_grid(const PlanarSurfaceSpec &spec, double wavelength)
        {
            spec.validate();
            if (!(wavelength > 0.0))
                throw std::invalid_argument("wavelength must be positive");
            RoughRealization r;
            r.spec = spec;
            r.step = spec.step_for(wavelength);
            r.n_u = spec.cells_u(r.step);
            r.n_v = spec.cells_v(r.step);
            r.heights.assign(r.n_u * r.n_v, 0.0);
            return r;
        }

        // Separable Gaussian smoothing of white noise on a padded grid, cropped to (n_u, n_v).
        // A kernel with std s yields the height autocorrelation exp(-r^2 / (4 s^2)), so s = l / 2.
        void smooth_heights(RoughRealization &r, std::mt19937_64 &gen)
        {
            const double s_cells = 0.5 * r.spec.correlation_length / r.step;
            const auto half = static_cast<std::ptrdiff_t>(std::ceil(3.0 * s_cells));
            std::vector<double> kernel(static_cast<std::size_t>(2 * half + 1));
            double k2 = 0.0, ksum = 0.0;
            for (std::ptrdiff_t i = -half; i <= half; ++i)
            {
                const double x = static_cast<double>(i) / std::max(s_cells, 1e-12);
                kernel[static_cast<std::size_t>(i + half)] = std::exp(-0.5 * x * x);
                ksum += kernel[static_cast<std::size_t>(i + half)];
            }
            for (auto &k : kernel)
            {
                k /= ksum;
                k2 += k * k;
            }

            const std::size_t pu = r.n_u + 2 * static_cast<std::size_t>(half);
            const std::size_t pv = r.n_v + 2 * static_cast<std::size_t>(half);
            std::normal_distribution<double> normal(0.0, 1.0);
            std::vector<double> noise(pu * pv);
            for (auto &x : noise)
                x = normal(gen);

            // Pass along v, then along u; the 2-D kernel variance factor is k2^2
            std::vector<double> tmp(pu * r.n_v, 0.0);
            for (std::size_t i = 0; i < pu; ++i)
                for (std::size_t j = 0; j < r.n_v; ++j)
                {
                    double acc = 0.0;
                    for (std::size_t k = 0; k < kernel.size(); ++k)
                        acc += kernel[k] * noise[i * pv + j + k];
                    tmp[i * r.n_v + j] = acc;
                }
            const double scale = r.spec.sigma_z / k2; // sqrt(k2^2) = k2
            for (std::size_t i = 0; i < r.n_u; ++i)
                for (std::size_t j = 0; j < r.n_v; ++j)
                {
                    double acc = 0.0;
                    for (std::size_t k = 0; k < kernel.size(); ++k)
                        acc += kernel[k] * tmp[(i + k) * r.n_v + j];
                    r.heights[i * r.n_v + j] = scale * acc;
                }
        }
    }

    RoughRealization sample_realization(const PlanarSurfaceSpec &spec, std::uint64_t seed, double wavelength)
    {
        RoughRealization r = empty_grid(spec, wavelength);
        r.seed = seed;
        if (spec.sigma_z == 0.0)
            return r;

        std::mt19937_64 gen(seed);
        if (spec.correlation_length > 0.0)
        {
            smooth_heights(r, gen);
            return r;
        }
        std::normal_distribution<double> normal(0.0, spec.sigma_z);
        for (auto &h : r.heights)
            h = normal(gen);
        return r;
    }

    RoughRealization flat_realization(const PlanarSurfaceSpec &spec, double wavelength)
    {
        return empty_grid(spec, wavelength);
    }

    void write_realization_csv(const RoughRealization &realization, std::ostream &out)
    {
        CsvWriter csv(out);
        csv.header({"x_m", "y_m", "z_m"});
        for (std::size_t iu = 0; iu < realization.n_u; ++iu)
            for (std::size_t iv = 0; iv < realization.n_v; ++iv)
            {
                const Vec3 p = realization.cell_center(iu, iv) + realization.height(iu, iv) * realization.spec.pose.normal();
                csv.row(p.x(), p.y(), p.z());
            }
    }
}
