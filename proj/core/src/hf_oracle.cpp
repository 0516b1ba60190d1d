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

#include "nfchan/hf_oracle.hpp"
#include "nfchan/parallel.hpp"

#include <cmath>
#include <stdexcept>

namespace nfchan
{
    namespace
    {
        void check_inputs(const RoughRealization &r, const std::vector<Vec3> &tx, const std::vector<Vec3> &rx, double wavelength)
        {
            if (!(wavelength > 0.0) || !std::isfinite(wavelength))
                throw std::invalid_argument("wavelength must be positive");
            if (r.step > wavelength / 8.0 * (1.0 + 1e-12))
                throw std::invalid_argument("quadrature resolution");
            if (tx.empty() || rx.empty())
                throw std::invalid_argument("empty antenna list");
            const PlanePose &pose = r.spec.pose;
            const double side = pose.signed_distance(tx.front());
            for (const auto *list : {&tx, &rx})
                for (const auto &p : *list)
                {
                    if (!is_finite(p))
                        throw std::invalid_argument("non-finite antenna position");
                    const double s = pose.signed_distance(p);
                    if (s == 0.0 || (s > 0.0) != (side > 0.0))
                        throw std::invalid_argument("no reflection path");
                }
        }
    }

    ComplexMatrix hf_matrix(const RoughRealization &realization, const std::vector<Vec3> &tx_positions,
                            const std::vector<Vec3> &rx_positions, double wavelength, unsigned threads)
    {
        check_inputs(realization, tx_positions, rx_positions, wavelength);

        const std::size_t n_tx = tx_positions.size(), n_rx = rx_positions.size(), n_pairs = n_tx * n_rx;
        const std::size_t n_u = realization.n_u, n_v = realization.n_v;
        const double kappa = wavenumber_of(wavelength);
        const double dA = realization.step * realization.step;
        const PlanePose &pose = realization.spec.pose;
        const Vec3 normal = pose.normal();

        std::vector<double> z_tx(n_tx), z_rx(n_rx);
        for (std::size_t n = 0; n < n_tx; ++n)
            z_tx[n] = std::abs(pose.signed_distance(tx_positions[n]));
        for (std::size_t m = 0; m < n_rx; ++m)
            z_rx[m] = std::abs(pose.signed_distance(rx_positions[m]));

        // Row partial sums, pair index p = m * n_tx + n
        std::vector<cplx> row_sums(n_u * n_pairs);
        parallel_for(n_u, threads, [&](std::size_t iu)
                     {
            std::vector<cplx> terms(n_pairs * n_v);
            std::vector<cplx> e_tx(n_tx), e_rx(n_rx);
            for (std::size_t iv = 0; iv < n_v; ++iv)
            {
                const Vec3 u = realization.cell_center(iu, iv) + realization.height(iu, iv) * normal;
                for (std::size_t n = 0; n < n_tx; ++n)
                {
                    const double r = (u - tx_positions[n]).norm();
                    e_tx[n] = std::polar(z_tx[n] / (r * r), kappa * r);
                }
                for (std::size_t m = 0; m < n_rx; ++m)
                {
                    const double r = (rx_positions[m] - u).norm();
                    e_rx[m] = std::polar(z_rx[m] / (r * r), kappa * r);
                }
                for (std::size_t m = 0; m < n_rx; ++m)
                    for (std::size_t n = 0; n < n_tx; ++n)
                        terms[(m * n_tx + n) * n_v + iv] = e_rx[m] * e_tx[n];
            }
            for (std::size_t p = 0; p < n_pairs; ++p)
                row_sums[p * n_u + iu] = pairwise_sum(terms.data() + p * n_v, n_v); }
                     );

        const cplx scale = realization.spec.zeta / (cplx(0.0, 1.0) * wavelength) * dA;
        ComplexMatrix out(n_rx, n_tx);
        for (std::size_t m = 0; m < n_rx; ++m)
            for (std::size_t n = 0; n < n_tx; ++n)
                out(m, n) = scale * pairwise_sum(row_sums.data() + (m * n_tx + n) * n_u, n_u);
        return out;
    }

    cplx hf_integral(const RoughRealization &realization, const Vec3 &u_tx, const Vec3 &u_rx, double wavelength, unsigned threads)
    {
        return hf_matrix(realization, {u_tx}, {u_rx}, wavelength, threads)(0, 0);
    }

    std::vector<ComplexMatrix> monte_carlo_channel(const PlanarSurfaceSpec &spec, const std::vector<Vec3> &tx_positions,
                                                   const std::vector<Vec3> &rx_positions, double wavelength,
                                                   std::size_t n_realizations, std::uint64_t base_seed, unsigned threads)
    {
        if (n_realizations == 0)
            throw std::invalid_argument("n_realizations must be >= 1");
        spec.validate();
        std::vector<ComplexMatrix> out(n_realizations);
        parallel_for(n_realizations, threads, [&](std::size_t i)
                     {
            const auto r = sample_realization(spec, base_seed + i, wavelength);
            out[i] = hf_matrix(r, tx_positions, rx_positions, wavelength, 1); });
        return out;
    }

    std::vector<HfSample> to_samples(const std::vector<ComplexMatrix> &matrices, std::uint64_t base_seed)
    {
        std::vector<HfSample> out;
        for (std::size_t i = 0; i < matrices.size(); ++i)
            for (Eigen::Index m = 0; m < matrices[i].rows(); ++m)
                for (Eigen::Index n = 0; n < matrices[i].cols(); ++n)
                    out.push_back({matrices[i](m, n), static_cast<std::size_t>(n), static_cast<std::size_t>(m), base_seed + i});
        return out;
    }

    cplx hf_flat(const PlanarSurfaceSpec &spec, const Vec3 &u_tx, const Vec3 &u_rx, double wavelength, unsigned threads)
    {
        return hf_integral(flat_realization(spec, wavelength), u_tx, u_rx, wavelength, threads);
    }

    double diffuse_power_iid(const PlanarSurfaceSpec &spec, const Vec3 &u_tx, const Vec3 &u_rx, double wavelength)
    {
        const auto r = flat_realization(spec, wavelength);
        const double z_tx = std::abs(spec.pose.signed_distance(u_tx));
        const double z_rx = std::abs(spec.pose.signed_distance(u_rx));
        const double dA = r.step * r.step;
        std::vector<double> terms(r.n_u * r.n_v);
        for (std::size_t iu = 0; iu < r.n_u; ++iu)
            for (std::size_t iv = 0; iv < r.n_v; ++iv)
            {
                const Vec3 u = r.cell_center(iu, iv);
                const double a = z_tx / (u - u_tx).squaredNorm() * z_rx / (u_rx - u).squaredNorm() * dA;
                terms[iu * r.n_v + iv] = a * a;
            }
        const double k = spec.zeta / wavelength;
        return k * k * pairwise_sum(terms.data(), terms.size());
    }
}
