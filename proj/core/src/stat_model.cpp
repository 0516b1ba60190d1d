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

#include "nfchan/stat_model.hpp"
#include "nfchan/parallel.hpp"

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <stdexcept>

namespace nfchan
{
    std::string to_string(Regime r)
    {
        switch (r)
        {
        case Regime::SR:
            return "SR";
        case Regime::transient:
            return "transient";
        case Regime::SS:
            return "SS";
        }
        return "unknown";
    }

    RegimeParams roughness_factor(double kappa, double sigma_z, double cos_tx, double cos_rx)
    {
        RegimeParams p;
        p.kappa_sigma_z = kappa * sigma_z;
        const double a = p.kappa_sigma_z * (cos_tx + cos_rx);
        p.g = a * a;
        if (p.kappa_sigma_z <= 0.1)
            p.regime = Regime::SR;
        else if (p.kappa_sigma_z >= 10.0)
            p.regime = Regime::SS;
        else
            p.regime = Regime::transient;
        return p;
    }

    void CorrelationSpec::validate() const
    {
        if (!(theta_1 >= -pi / 2.0 - 1e-12) || !(theta_2 <= pi / 2.0 + 1e-12) || !(theta_1 < theta_2))
            throw std::invalid_argument("correlation sector must satisfy -pi/2 <= theta_1 < theta_2 <= pi/2");
    }

    namespace
    {
        Vec3 center_of(const std::vector<Vec3> &p)
        {
            if (p.empty())
                throw std::invalid_argument("empty antenna list");
            Vec3 c = Vec3::Zero();
            for (const auto &x : p)
                c += x;
            return c / static_cast<double>(p.size());
        }

        void require_same_side(const PlanePose &pose, const std::vector<Vec3> &tx, const std::vector<Vec3> &rx)
        {
            const double side = pose.signed_distance(tx.front());
            for (const auto *list : {&tx, &rx})
                for (const auto &p : *list)
                {
                    const double s = pose.signed_distance(p);
                    if (s == 0.0)
                        throw std::invalid_argument("grazing geometry");
                    if ((s > 0.0) != (side > 0.0))
                        throw std::invalid_argument("no reflection path");
                }
        }

        ComplexMatrix image_phases(const PlanePose &pose, const std::vector<Vec3> &tx, const std::vector<Vec3> &rx, double kappa)
        {
            ComplexMatrix H(static_cast<Eigen::Index>(rx.size()), static_cast<Eigen::Index>(tx.size()));
            for (std::size_t m = 0; m < rx.size(); ++m)
            {
                const Vec3 v_rx = mirror_image(rx[m], pose);
                for (std::size_t n = 0; n < tx.size(); ++n)
                    H(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n)) = std::polar(1.0, kappa * (v_rx - tx[n]).norm());
            }
            return H;
        }

        double max_pair_distance(const std::vector<Vec3> &p)
        {
            double d = 0.0;
            for (std::size_t i = 0; i < p.size(); ++i)
                for (std::size_t j = i + 1; j < p.size(); ++j)
                    d = std::max(d, (p[i] - p[j]).norm());
            return d;
        }

        // d * sin(theta) of node u in the frame of pair (a, b): (b - a) . (u - o) / |u - o|
        double projected_path(const Vec3 &a, const Vec3 &b, const Vec3 &u)
        {
            const Vec3 o = 0.5 * (a + b);
            const Vec3 r = u - o;
            const double n = r.norm();
            if (n == 0.0)
                throw std::invalid_argument("coincident point");
            return (b - a).dot(r) / n;
        }

        // R = conj(A) A^T / sum(w) with A(k, i) = sqrt(w_i) e^{j kappa (rhat_rx,i . (u_m - c_rx) + rhat_tx,i . (u_n - c_tx))},
        // k = m n_tx + n and rhat the unit vector from each array center to node i. Positive semidefinite by construction.
        ComplexMatrix gram_correlation(const std::vector<QuadratureNode> &domain, const std::vector<Vec3> &rx,
                                       const std::vector<Vec3> &tx, double wavelength, unsigned threads)
        {
            const double kappa = wavenumber_of(wavelength);
            const std::size_t n_rx = rx.size(), n_tx = std::max<std::size_t>(tx.size(), 1), N = n_rx * n_tx;
            const Vec3 c_rx = center_of(rx), c_tx = tx.empty() ? Vec3::Zero() : center_of(tx);
            constexpr std::size_t block = 512;
            ComplexMatrix R = ComplexMatrix::Zero(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(N));
            double w_sum = 0.0;
            for (std::size_t b0 = 0; b0 < domain.size(); b0 += block)
            {
                const std::size_t nb = std::min(block, domain.size() - b0);
                ComplexMatrix A(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(nb));
                parallel_for(nb, threads, [&](std::size_t i)
                             {
                    const QuadratureNode &node = domain[b0 + i];
                    const Vec3 d_rx = node.point - c_rx;
                    if (d_rx.norm() == 0.0)
                        throw std::invalid_argument("coincident point");
                    const Vec3 r_rx = d_rx.normalized();
                    const Vec3 r_tx = tx.empty() ? Vec3::Zero() : Vec3((node.point - c_tx).normalized());
                    const double amp = std::sqrt(node.weight);
                    for (std::size_t m = 0; m < n_rx; ++m)
                        for (std::size_t n = 0; n < n_tx; ++n)
                        {
                            double phase = r_rx.dot(rx[m] - c_rx);
                            if (!tx.empty())
                                phase += r_tx.dot(tx[n] - c_tx);
                            A(static_cast<Eigen::Index>(m * n_tx + n), static_cast<Eigen::Index>(i)) = std::polar(amp, kappa * phase);
                        }
                });
                R.noalias() += A.conjugate() * A.transpose();
                for (std::size_t i = 0; i < nb; ++i)
                    w_sum += domain[b0 + i].weight;
            }
            if (!(w_sum > 0.0))
                throw std::invalid_argument("empty quadrature domain");
            return R / w_sum;
        }

        void finalize_covariance(ComplexMatrix &R)
        {
            R = (0.5 * (R + R.adjoint())).eval();
            for (Eigen::Index i = 0; i < R.rows(); ++i)
                R(i, i) = 1.0;
            Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(R, Eigen::EigenvaluesOnly);
            if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() < -1e-6)
                throw std::runtime_error("correlation model inconsistent");
        }
    }

    DeterministicComponent deterministic_component(const PlanarSurfaceSpec &surface, const std::vector<Vec3> &tx_positions,
                                                   const std::vector<Vec3> &rx_positions, double wavelength)
    {
        surface.validate();
        const Vec3 tx_c = center_of(tx_positions), rx_c = center_of(rx_positions);
        require_same_side(surface.pose, tx_positions, rx_positions);
        const auto [cos_tx, cos_rx] = incidence_cosines(surface.pose, tx_c, rx_c);
        const double kappa = wavenumber_of(wavelength);

        DeterministicComponent out;
        out.regime = roughness_factor(kappa, surface.sigma_z, cos_tx, cos_rx);
        const double D = (mirror_image(rx_c, surface.pose) - tx_c).norm();
        out.c_d = surface.zeta / (cplx(0.0, 1.0) * wavelength) * std::exp(-0.5 * out.regime.g) / D;
        out.H_d = image_phases(surface.pose, tx_positions, rx_positions, kappa);
        return out;
    }

    DeterministicComponent specular_field(const PlanarSurfaceSpec &surface, const std::vector<Vec3> &tx_positions,
                                          const std::vector<Vec3> &rx_positions, double wavelength)
    {
        surface.validate();
        const Vec3 tx_c = center_of(tx_positions), rx_c = center_of(rx_positions);
        require_same_side(surface.pose, tx_positions, rx_positions);
        const double kappa = wavenumber_of(wavelength);
        const double h_tx = std::abs(surface.pose.signed_distance(tx_c));
        const double h_rx = std::abs(surface.pose.signed_distance(rx_c));
        const double D = (mirror_image(rx_c, surface.pose) - tx_c).norm();
        const double cos_s = (h_tx + h_rx) / D;

        DeterministicComponent out;
        out.regime = roughness_factor(kappa, surface.sigma_z, cos_s, cos_s);
        out.c_d = surface.zeta * cos_s * std::exp(-0.5 * out.regime.g) / D;
        out.H_d = image_phases(surface.pose, tx_positions, rx_positions, kappa);
        return out;
    }

    double isotropic_power(const PlanarSurfaceSpec &surface, const Vec3 &u_tx, const Vec3 &u_rx, double A_rx, double D_tx, double wavelength)
    {
        const double d_tx = (u_tx - surface.pose.origin()).norm();
        const double d_rx = (u_rx - surface.pose.origin()).norm();
        if (!(d_tx > 0.0) || !(d_rx > 0.0))
            throw std::invalid_argument("distances must be positive");
        constexpr double D_r = 2.0;
        return (surface.zeta / wavelength) * (A_rx * D_r / (4.0 * pi * d_rx * d_rx)) * (surface.area() * D_tx / (4.0 * pi * d_tx * d_tx));
    }

    double stochastic_power(double g, double c_n_inf_sq)
    {
        const double a = 1.0 - std::exp(-0.5 * g);
        return a * a * c_n_inf_sq;
    }

    double total_power_ratio(double g, double ratio_inf)
    {
        const double a = 1.0 - std::exp(-0.5 * g);
        return std::sqrt(std::exp(-g) + a * a * ratio_inf * ratio_inf);
    }

    std::vector<QuadratureNode> planar_nodes(const PlanarSurfaceSpec &surface, double step, double wavelength)
    {
        PlanarSurfaceSpec s = surface;
        if (step > 0.0)
            s.grid_step = step;
        const auto grid = flat_realization(s, wavelength);
        std::vector<QuadratureNode> nodes;
        nodes.reserve(grid.n_u * grid.n_v);
        const double w = grid.step * grid.step;
        for (std::size_t iu = 0; iu < grid.n_u; ++iu)
            for (std::size_t iv = 0; iv < grid.n_v; ++iv)
                nodes.push_back({grid.cell_center(iu, iv), w});
        return nodes;
    }

    std::vector<QuadratureNode> illuminated_nodes(const PlanarSurfaceSpec &surface, const Vec3 &u_tx, const Vec3 &u_rx,
                                                  double step, double wavelength)
    {
        auto nodes = planar_nodes(surface, step, wavelength);
        const double z_tx = std::abs(surface.pose.signed_distance(u_tx));
        const double z_rx = std::abs(surface.pose.signed_distance(u_rx));
        for (auto &node : nodes)
        {
            const double a = z_tx / (node.point - u_tx).squaredNorm() * z_rx / (u_rx - node.point).squaredNorm();
            node.weight *= a * a;
        }
        return nodes;
    }

    std::vector<QuadratureNode> sector_nodes(const LocalFrame &frame, double radius, const CorrelationSpec &sector,
                                             std::size_t panels, std::size_t n_phi)
    {
        sector.validate();
        if (!(radius > 0.0) || panels == 0 || n_phi == 0)
            throw std::invalid_argument("sector_nodes: invalid arguments");

        const Vec3 z = frame.z_axis;
        const Vec3 helper = std::abs(z.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
        const Vec3 x = (helper - helper.dot(z) * z).normalized();
        const Vec3 y = z.cross(x);

        using GL = boost::math::quadrature::gauss<double, 20>;
        const auto &abscissa = GL::abscissa();
        const auto &weights = GL::weights();

        std::vector<QuadratureNode> nodes;
        const double width = sector.theta_c() / static_cast<double>(panels);
        const double w_phi = 2.0 * pi / static_cast<double>(n_phi);
        for (std::size_t p = 0; p < panels; ++p)
        {
            const double mid = sector.theta_1 + (static_cast<double>(p) + 0.5) * width;
            for (std::size_t k = 0; k < abscissa.size(); ++k)
                for (int sign : {-1, 1})
                {
                    if (k == 0 && sign < 0 && abscissa[0] == 0.0)
                        continue;
                    const double theta = mid + sign * abscissa[k] * 0.5 * width;
                    const double w_theta = weights[k] * 0.5 * width;
                    for (std::size_t q = 0; q < n_phi; ++q)
                    {
                        const double phi = (static_cast<double>(q) + 0.5) * w_phi;
                        const Vec3 dir = std::cos(theta) * (std::cos(phi) * x + std::sin(phi) * y) + std::sin(theta) * z;
                        nodes.push_back({frame.origin + radius * dir, radius * radius * std::cos(theta) * w_theta * w_phi});
                    }
                }
        }
        return nodes;
    }

    cplx correlation_numeric(const std::vector<QuadratureNode> &domain, const std::pair<Vec3, Vec3> &pair_tx,
                             const std::pair<Vec3, Vec3> &pair_rx, double wavelength)
    {
        const double kappa = wavenumber_of(wavelength);
        const bool has_tx = pair_tx.first != pair_tx.second;
        const bool has_rx = pair_rx.first != pair_rx.second;
        if (!has_tx && !has_rx)
            return 1.0;
        std::vector<cplx> terms(domain.size());
        std::vector<double> w(domain.size());
        for (std::size_t i = 0; i < domain.size(); ++i)
        {
            double path = 0.0;
            if (has_rx)
                path += projected_path(pair_rx.first, pair_rx.second, domain[i].point);
            if (has_tx)
                path += projected_path(pair_tx.first, pair_tx.second, domain[i].point);
            terms[i] = std::polar(domain[i].weight, kappa * path);
            w[i] = domain[i].weight;
        }
        return pairwise_sum(terms.data(), terms.size()) / pairwise_sum(w.data(), w.size());
    }

    cplx correlation_numeric(const PlanarSurfaceSpec &surface, const std::pair<Vec3, Vec3> &pair_tx,
                             const std::pair<Vec3, Vec3> &pair_rx, double wavelength)
    {
        const auto nodes = correlation_nodes(surface, {pair_tx.first, pair_tx.second}, {pair_rx.first, pair_rx.second}, wavelength);
        return correlation_numeric(nodes, pair_tx, pair_rx, wavelength);
    }

    double sinc(double x)
    {
        if (std::abs(x) < 1e-8)
            return 1.0 - (pi * x) * (pi * x) / 6.0;
        return std::sin(pi * x) / (pi * x);
    }

    double correlation_sinc(double d, const CorrelationSpec &spec, double wavelength)
    {
        return sinc(2.0 * d / wavelength * std::cos(0.5 * (spec.theta_2 + spec.theta_1)) * std::sin(0.5 * (spec.theta_2 - spec.theta_1)));
    }

    double correlation_aligned(double d, double theta_c, double wavelength)
    {
        const double s = std::sin(0.5 * theta_c);
        return sinc(2.0 * d / wavelength * s * s);
    }

    double correlation_perpendicular(double d, double theta_c, double wavelength)
    {
        return sinc(2.0 * d / wavelength * std::sin(0.5 * theta_c));
    }

    CorrelationSpec effective_sector(const std::vector<QuadratureNode> &domain, const LocalFrame &frame)
    {
        if (domain.empty())
            throw std::invalid_argument("empty quadrature domain");
        double sw = 0.0, s1 = 0.0, s2 = 0.0;
        for (const auto &node : domain)
        {
            const double s = std::sin(elevation_in_frame(node.point, frame));
            sw += node.weight;
            s1 += node.weight * s;
            s2 += node.weight * s * s;
        }
        const double mean = s1 / sw;
        const double var = std::max(0.0, s2 / sw - mean * mean);
        const double half = std::max(std::sqrt(3.0 * var), 1e-12);
        CorrelationSpec out;
        out.theta_1 = std::asin(std::clamp(mean - half, -1.0, 1.0));
        out.theta_2 = std::asin(std::clamp(mean + half, -1.0, 1.0));
        if (!(out.theta_1 < out.theta_2))
            out.theta_2 = std::nextafter(out.theta_1, pi);
        return out;
    }

    std::vector<std::string> check_assumptions(const PlanarSurfaceSpec &surface, const std::vector<Vec3> &tx_positions,
                                               const std::vector<Vec3> &rx_positions, double wavelength)
    {
        std::vector<std::string> warnings;
        const double kappa = wavenumber_of(wavelength);
        const std::array<std::pair<const char *, const std::vector<Vec3> *>, 2> sides{{{"tx", &tx_positions}, {"rx", &rx_positions}}};
        for (const auto &[name, list] : sides)
        {
            const double d = max_pair_distance(*list);
            const double u = (center_of(*list) - surface.pose.origin()).norm();
            if (2.0 * d * d / wavelength >= u)
                warnings.push_back(std::string("aperture condition violated on ") + name + " side: 2 d^2 / lambda = " + std::to_string(2.0 * d * d / wavelength) +
                                   " m >= distance " + std::to_string(u) + " m");
            if (kappa * d * surface.sigma_z >= 0.1 * u)
                warnings.push_back(std::string("roughness-aperture condition violated on ") + name + " side: kappa d sigma_z = " + std::to_string(kappa * d * surface.sigma_z) +
                                   " m is not << distance " + std::to_string(u) + " m");
        }
        return warnings;
    }

    ComplexMatrix side_covariance(const std::vector<QuadratureNode> &domain, const std::vector<Vec3> &positions,
                                  double wavelength, CovarianceMethod method, unsigned threads)
    {
        const auto N = static_cast<Eigen::Index>(positions.size());
        ComplexMatrix R = ComplexMatrix::Identity(N, N);
        if (N <= 1)
            return R;

        if (method == CovarianceMethod::numeric)
            R = gram_correlation(domain, positions, {}, wavelength, threads);
        else
        {
            const Vec3 center = center_of(positions);
            const double kappa = wavenumber_of(wavelength);
            std::map<std::array<long long, 3>, std::pair<double, double>> cache; // direction -> (mean s, width s)
            for (Eigen::Index i = 0; i < N; ++i)
                for (Eigen::Index j = i + 1; j < N; ++j)
                {
                    const Vec3 delta = positions[static_cast<std::size_t>(j)] - positions[static_cast<std::size_t>(i)];
                    const double d = delta.norm();
                    if (d == 0.0)
                    {
                        R(i, j) = 1.0;
                        continue;
                    }
                    Vec3 dir = delta / d;
                    // A reversed axis maps s -> -s; store one orientation only
                    double flip = 1.0;
                    if (dir.x() < 0.0 || (dir.x() == 0.0 && (dir.y() < 0.0 || (dir.y() == 0.0 && dir.z() < 0.0))))
                    {
                        dir = -dir;
                        flip = -1.0;
                    }
                    const std::array<long long, 3> key{std::llround(dir.x() * 1e9), std::llround(dir.y() * 1e9), std::llround(dir.z() * 1e9)};
                    auto it = cache.find(key);
                    if (it == cache.end())
                    {
                        const CorrelationSpec sec = effective_sector(domain, LocalFrame::make(center, dir));
                        const double sa = std::sin(sec.theta_1), sb = std::sin(sec.theta_2);
                        it = cache.emplace(key, std::make_pair(0.5 * (sa + sb), sb - sa)).first;
                    }
                    const auto [mean_s, width_s] = it->second;
                    R(i, j) = std::polar(sinc(d * width_s / wavelength), kappa * d * flip * mean_s);
                }
        }
        for (Eigen::Index i = 0; i < N; ++i)
            for (Eigen::Index j = 0; j < i; ++j)
                R(i, j) = std::conj(R(j, i));
        finalize_covariance(R);
        return R;
    }

    ComplexMatrix build_covariance(const std::vector<QuadratureNode> &domain, const std::vector<Vec3> &tx_positions,
                                   const std::vector<Vec3> &rx_positions, double wavelength, CovarianceMethod method,
                                   unsigned threads)
    {
        const std::size_t n_tx = tx_positions.size(), n_rx = rx_positions.size(), N = n_tx * n_rx;
        if (N == 0)
            throw std::invalid_argument("empty antenna list");
        ComplexMatrix R = ComplexMatrix::Identity(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(N));

        if (method == CovarianceMethod::numeric)
            R = gram_correlation(domain, rx_positions, tx_positions, wavelength, threads);
        else
        {
            const ComplexMatrix R_rx = side_covariance(domain, rx_positions, wavelength, method, threads);
            const ComplexMatrix R_tx = side_covariance(domain, tx_positions, wavelength, method, threads);
            for (std::size_t i = 0; i < N; ++i)
                for (std::size_t j = 0; j < N; ++j)
                    R(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                        R_rx(static_cast<Eigen::Index>(i / n_tx), static_cast<Eigen::Index>(j / n_tx)) *
                        R_tx(static_cast<Eigen::Index>(i % n_tx), static_cast<Eigen::Index>(j % n_tx));
        }
        finalize_covariance(R);
        return R;
    }

    ComplexMatrix build_covariance(const PlanarSurfaceSpec &surface, const std::vector<Vec3> &tx_positions,
                                   const std::vector<Vec3> &rx_positions, double wavelength, CovarianceMethod method,
                                   unsigned threads)
    {
        return build_covariance(correlation_nodes(surface, tx_positions, rx_positions, wavelength), tx_positions,
                                rx_positions, wavelength, method, threads);
    }

    std::vector<QuadratureNode> correlation_nodes(const PlanarSurfaceSpec &surface, const std::vector<Vec3> &tx_positions,
                                                  const std::vector<Vec3> &rx_positions, double wavelength)
    {
        surface.validate();
        const double aperture = std::max(max_pair_distance(tx_positions), max_pair_distance(rx_positions));
        double dist = std::numeric_limits<double>::infinity();
        for (const auto *list : {&tx_positions, &rx_positions})
            for (const auto &p : *list)
                dist = std::min(dist, std::abs(surface.pose.signed_distance(p)));
        const double longest = std::max(surface.length_u, surface.length_v);
        double step = aperture > 0.0 ? wavelength * dist / (8.0 * aperture) : longest / 16.0;
        step = std::clamp(step, longest / 256.0, longest / 16.0);
        return planar_nodes(surface, step, wavelength);
    }

    ComplexMatrix covariance_factor(const ComplexMatrix &R)
    {
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(R);
        if (es.info() != Eigen::Success)
            throw std::runtime_error("covariance factorization failed");
        Eigen::VectorXd ev = es.eigenvalues();
        if (ev.size() > 0 && ev.minCoeff() < -1e-6)
            throw std::runtime_error("correlation model inconsistent");
        ev = ev.cwiseMax(0.0).cwiseSqrt();
        return es.eigenvectors() * ev.asDiagonal();
    }

    ComplexMatrix CovarianceModel::dense() const
    {
        if (!separable())
            return full;
        const Eigen::Index n_rx = rx.rows(), n_tx = tx.rows(), N = n_rx * n_tx;
        ComplexMatrix R(N, N);
        for (Eigen::Index i = 0; i < N; ++i)
            for (Eigen::Index j = 0; j < N; ++j)
                R(i, j) = rx(i / n_tx, j / n_tx) * tx(i % n_tx, j % n_tx);
        return R;
    }

    StochasticSampler::StochasticSampler(const CovarianceModel &cov, double stoch_power, std::size_t n_rx, std::size_t n_tx)
        : n_rx_(n_rx), n_tx_(n_tx), amplitude_(std::sqrt(stoch_power)), separable_(cov.separable())
    {
        if (!(stoch_power >= 0.0) || !std::isfinite(stoch_power))
            throw std::invalid_argument("stochastic power must be finite and >= 0");
        if (stoch_power == 0.0)
            return;
        const auto N = static_cast<Eigen::Index>(n_rx * n_tx);
        if (separable_)
        {
            if (cov.rx.rows() != static_cast<Eigen::Index>(n_rx) || cov.tx.rows() != static_cast<Eigen::Index>(n_tx))
                throw std::invalid_argument("covariance dimensions do not match the arrays");
            f_rx_ = covariance_factor(cov.rx);
            f_tx_ = covariance_factor(cov.tx);
        }
        else
        {
            if (cov.full.rows() != N || cov.full.cols() != N)
                throw std::invalid_argument("covariance dimensions do not match the arrays");
            f_full_ = covariance_factor(cov.full);
        }
    }

    ComplexMatrix StochasticSampler::draw(std::uint64_t seed) const
    {
        const auto R = static_cast<Eigen::Index>(n_rx_), C = static_cast<Eigen::Index>(n_tx_);
        if (amplitude_ == 0.0)
            return ComplexMatrix::Zero(R, C);

        std::mt19937_64 gen(seed);
        std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
        if (separable_)
        {
            ComplexMatrix W(R, C);
            for (Eigen::Index m = 0; m < R; ++m)
                for (Eigen::Index n = 0; n < C; ++n)
                {
                    const double re = normal(gen);
                    W(m, n) = cplx(re, normal(gen));
                }
            return amplitude_ * (f_rx_ * W * f_tx_.transpose());
        }
        ComplexVector w(R * C);
        for (Eigen::Index i = 0; i < w.size(); ++i)
        {
            const double re = normal(gen);
            w(i) = cplx(re, normal(gen));
        }
        const ComplexVector v = amplitude_ * (f_full_ * w);
        ComplexMatrix out(R, C);
        for (Eigen::Index m = 0; m < R; ++m)
            for (Eigen::Index n = 0; n < C; ++n)
                out(m, n) = v(m * C + n);
        return out;
    }

    ComplexMatrix sample_stochastic(const SurfaceChannelStats &stats, std::uint64_t seed)
    {
        const auto n_rx = static_cast<std::size_t>(stats.H_d.rows()), n_tx = static_cast<std::size_t>(stats.H_d.cols());
        return StochasticSampler(stats.covariance, stats.stoch_power, n_rx, n_tx).draw(seed);
    }
}
