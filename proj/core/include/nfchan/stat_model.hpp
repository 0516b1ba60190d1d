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

#ifndef NFCHAN_STAT_MODEL_HPP
#define NFCHAN_STAT_MODEL_HPP

#include "nfchan/geometry.hpp"
#include "nfchan/surface.hpp"
#include "nfchan/types.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace nfchan
{
    enum class Regime
    {
        SR,        // specular reflection, kappa * sigma_z <= 0.1
        transient,
        SS         // full scattering, kappa * sigma_z >= 10
    };

    std::string to_string(Regime r);

    struct RegimeParams
    {
        double g = 0.0;             // (kappa sigma_z (cos_tx + cos_rx))^2
        double kappa_sigma_z = 0.0;
        Regime regime = Regime::SR;
    };

    RegimeParams roughness_factor(double kappa, double sigma_z, double cos_tx, double cos_rx);

    // Elevation extent [theta_1, theta_2] of a surface in a local frame (radians)
    struct CorrelationSpec
    {
        double theta_1 = -pi / 2.0;
        double theta_2 = pi / 2.0;

        double theta_c() const { return theta_2 - theta_1; }
        void validate() const;
    };

    // Mirror-image deterministic component for arrays of antennas.
    // c_d = (zeta / (j lambda)) e^{-g/2} / |mirror(rx_center) - tx_center|, H_d(m, n) = e^{j kappa |mirror(rx_m) - tx_n|}
    struct DeterministicComponent
    {
        cplx c_d{};
        ComplexMatrix H_d;
        RegimeParams regime;
    };

    DeterministicComponent deterministic_component(const PlanarSurfaceSpec &surface, const std::vector<Vec3> &tx_positions,
                                                   const std::vector<Vec3> &rx_positions, double wavelength);

    // Same H_d, amplitude from the stationary-phase evaluation of the HF integral over an unbounded plane:
    // c = zeta cos(theta_s) e^{-g/2} / D, with theta_s the incidence angle at the specular point and D the image distance
    DeterministicComponent specular_field(const PlanarSurfaceSpec &surface, const std::vector<Vec3> &tx_positions,
                                          const std::vector<Vec3> &rx_positions, double wavelength);

    // |c_{n,inf}|^2 = (zeta / lambda) (A_rx D_r / (4 pi u_rx^2)) (A_r D_tx / (4 pi u_tx^2)), D_r = 2, A_r = L_1 L_2,
    // with u_tx, u_rx the distances to the surface center
    double isotropic_power(const PlanarSurfaceSpec &surface, const Vec3 &u_tx, const Vec3 &u_rx, double A_rx, double D_tx, double wavelength);

    // (1 - e^{-g/2})^2 |c_{n,inf}|^2
    double stochastic_power(double g, double c_n_inf_sq);

    // sqrt(e^{-g} + (1 - e^{-g/2})^2 ratio_inf^2)
    double total_power_ratio(double g, double ratio_inf);

    // ---------------------------------------------------------------------------------------------
    // Spatial correlation

    // Integration point with area weight [m^2]
    struct QuadratureNode
    {
        Vec3 point;
        double weight = 0.0;
    };

    // Midpoint nodes on the surface rectangle; step = 0 picks the surface grid step for "wavelength"
    std::vector<QuadratureNode> planar_nodes(const PlanarSurfaceSpec &surface, double step, double wavelength);

    // planar_nodes weighted by the diffuse power each cell scatters from u_tx towards u_rx
    std::vector<QuadratureNode> illuminated_nodes(const PlanarSurfaceSpec &surface, const Vec3 &u_tx, const Vec3 &u_rx,
                                                  double step, double wavelength);

    // Nodes on the spherical zone theta_1 <= theta <= theta_2 (elevation in "frame"), full azimuth, radius "radius".
    // Area element radius^2 cos(theta) dtheta dphi. Composite Gauss-Legendre in theta with "panels" panels.
    std::vector<QuadratureNode> sector_nodes(const LocalFrame &frame, double radius, const CorrelationSpec &sector,
                                             std::size_t panels = 16, std::size_t n_phi = 8);

    // Projected-path correlation between entries (m, n) and (m', n'):
    // (1/|U|) int e^{j kappa (d_rx sin theta_rx(u) + d_tx sin theta_tx(u))} dA
    cplx correlation_numeric(const std::vector<QuadratureNode> &domain, const std::pair<Vec3, Vec3> &pair_tx,
                             const std::pair<Vec3, Vec3> &pair_rx, double wavelength);

    cplx correlation_numeric(const PlanarSurfaceSpec &surface, const std::pair<Vec3, Vec3> &pair_tx,
                             const std::pair<Vec3, Vec3> &pair_rx, double wavelength);

    // sin(pi x) / (pi x)
    double sinc(double x);

    // |R| = sinc((2 d / lambda) cos((theta_2 + theta_1) / 2) sin((theta_2 - theta_1) / 2))
    double correlation_sinc(double d, const CorrelationSpec &spec, double wavelength);

    // Antenna pair axis aligned with the surface edge direction: theta_1 = -pi/2
    double correlation_aligned(double d, double theta_c, double wavelength);

    // Antenna pair axis perpendicular, sector symmetric about the equator
    double correlation_perpendicular(double d, double theta_c, double wavelength);

    // Uniform-in-sin(theta) sector with the same mean and variance of sin(theta) as the weighted domain
    CorrelationSpec effective_sector(const std::vector<QuadratureNode> &domain, const LocalFrame &frame);

    // Human-readable violations of the aperture condition (2 d^2 / lambda < distance) and the roughness-aperture
    // condition (kappa d sigma_z << distance, taken as a factor 0.1); empty if both hold.
    std::vector<std::string> check_assumptions(const PlanarSurfaceSpec &surface, const std::vector<Vec3> &tx_positions,
                                               const std::vector<Vec3> &rx_positions, double wavelength);

    enum class CovarianceMethod
    {
        numeric,
        sinc
    };

    // Full (N_rx N_tx) x (N_rx N_tx) covariance, flattened index m * N_tx + n. The numeric method projects each
    // node direction from the array centers, so the matrix is a Gram matrix.
    // Hermitian with unit diagonal; throws std::runtime_error("correlation model inconsistent") if the
    // smallest eigenvalue is below -1e-6.
    ComplexMatrix build_covariance(const std::vector<QuadratureNode> &domain, const std::vector<Vec3> &tx_positions,
                                   const std::vector<Vec3> &rx_positions, double wavelength, CovarianceMethod method,
                                   unsigned threads = 1);

    ComplexMatrix build_covariance(const PlanarSurfaceSpec &surface, const std::vector<Vec3> &tx_positions,
                                   const std::vector<Vec3> &rx_positions, double wavelength, CovarianceMethod method,
                                   unsigned threads = 1);

    // Correlation among the antennas of one side, [N, N] (the other side reduced to a single antenna).
    // The sinc method uses one frame per pair direction, centered at the array center.
    ComplexMatrix side_covariance(const std::vector<QuadratureNode> &domain, const std::vector<Vec3> &positions,
                                  double wavelength, CovarianceMethod method, unsigned threads = 1);

    // Nodes for the projected-path integral. The integrand varies on the scale lambda * distance / aperture,
    // so the step is chosen from the geometry (bounded to [16, 256] cells per side).
    std::vector<QuadratureNode> correlation_nodes(const PlanarSurfaceSpec &surface, const std::vector<Vec3> &tx_positions,
                                                  const std::vector<Vec3> &rx_positions, double wavelength);

    // Hermitian square root factor F with F F^H = R, negative eigenvalues >= -1e-6 clipped to 0
    ComplexMatrix covariance_factor(const ComplexMatrix &R);

    // Covariance of the stochastic part, either dense or Kronecker-separable (R = R_rx (x) R_tx)
    struct CovarianceModel
    {
        ComplexMatrix full;
        ComplexMatrix rx;
        ComplexMatrix tx;

        bool separable() const { return full.size() == 0; }
        ComplexMatrix dense() const;
    };

    struct SurfaceChannelStats
    {
        cplx c_d{};
        ComplexMatrix H_d;
        double stoch_power = 0.0; // E|c_n|^2
        CovarianceModel covariance;
        RegimeParams regime;
    };

    // Zero-mean circularly-symmetric complex Gaussian draws with entry covariance stoch_power * R
    class StochasticSampler
    {
    public:
        StochasticSampler() = default;
        StochasticSampler(const CovarianceModel &cov, double stoch_power, std::size_t n_rx, std::size_t n_tx);

        ComplexMatrix draw(std::uint64_t seed) const;

        std::size_t rows() const { return n_rx_; }
        std::size_t cols() const { return n_tx_; }

    private:
        std::size_t n_rx_ = 0, n_tx_ = 0;
        double amplitude_ = 0.0;
        bool separable_ = false;
        ComplexMatrix f_full_, f_rx_, f_tx_;
    };

    ComplexMatrix sample_stochastic(const SurfaceChannelStats &stats, std::uint64_t seed);
}

#endif
