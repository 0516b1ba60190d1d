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

#include "nfchan/channel.hpp"
#include "nfchan/csv.hpp"
#include "nfchan/scenario.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>
#include <random>
#include <stdexcept>

namespace nfchan
{
    ArrayGeometry::ArrayGeometry(std::vector<Vec3> elements) : elements_(std::move(elements))
    {
        if (elements_.empty())
            throw std::invalid_argument("array needs at least one element");
        Vec3 c = Vec3::Zero();
        for (const auto &e : elements_)
        {
            if (!is_finite(e))
                throw std::invalid_argument("non-finite element position");
            c += e;
        }
        center_ = c / static_cast<double>(elements_.size());
    }

    ArrayGeometry ArrayGeometry::upa(const Vec3 &center, const Vec3 &axis_a, const Vec3 &axis_b,
                                     std::size_t n_a, std::size_t n_b, double spacing)
    {
        if (n_a == 0 || n_b == 0 || !(spacing > 0.0))
            throw std::invalid_argument("UPA needs positive dimensions and spacing");
        const Vec3 a = axis_a.normalized(), b = axis_b.normalized();
        std::vector<Vec3> el;
        el.reserve(n_a * n_b);
        for (std::size_t i = 0; i < n_a; ++i)
            for (std::size_t j = 0; j < n_b; ++j)
                el.push_back(center + (static_cast<double>(i) - 0.5 * static_cast<double>(n_a - 1)) * spacing * a +
                             (static_cast<double>(j) - 0.5 * static_cast<double>(n_b - 1)) * spacing * b);
        return ArrayGeometry(std::move(el));
    }

    void LinkBudget::validate() const
    {
        if (!(path_loss_exponent > 0.0))
            throw std::invalid_argument("path loss exponent must be positive");
        if (!(blockage_db <= 0.0))
            throw std::invalid_argument("blockage must be <= 0 dB");
        if (!std::isfinite(beta_ref_db) || std::isnan(ricean_k_db))
            throw std::invalid_argument("invalid link budget");
    }

    double LinkBudget::path_gain(double distance) const
    {
        return db_to_linear(beta_ref_db + blockage_db) * std::pow(distance, -path_loss_exponent);
    }

    ComplexVector array_response(const ArrayGeometry &array, const Vec3 &p, double wavelength)
    {
        const double kappa = wavenumber_of(wavelength);
        ComplexVector a(static_cast<Eigen::Index>(array.size()));
        for (std::size_t i = 0; i < array.size(); ++i)
        {
            const double d = (array.elements()[i] - p).norm();
            if (d == 0.0)
                throw std::invalid_argument("coincident elements");
            a(static_cast<Eigen::Index>(i)) = std::polar(1.0, kappa * d);
        }
        return a;
    }

    ComplexMatrix los_matrix(const ArrayGeometry &tx, const ArrayGeometry &rx, double wavelength)
    {
        ComplexMatrix H(static_cast<Eigen::Index>(rx.size()), static_cast<Eigen::Index>(tx.size()));
        for (std::size_t n = 0; n < tx.size(); ++n)
            H.col(static_cast<Eigen::Index>(n)) = array_response(rx, tx.elements()[n], wavelength);
        return H;
    }

    ComplexMatrix scatterer_matrix(const PointScatterer &s, const ArrayGeometry &tx, const ArrayGeometry &rx, double wavelength)
    {
        return array_response(rx, s.position, wavelength) * array_response(tx, s.position, wavelength).transpose();
    }

    double point_scatterer_amplitude(const Vec3 &u_s, const Vec3 &u_tx, const Vec3 &u_rx, double reference)
    {
        return reference / ((u_rx - u_s).norm() * (u_s - u_tx).norm());
    }

    double zeta_for_specular_loss(double wavelength, double beta_ref_db, double loss_db)
    {
        return wavelength * std::sqrt(db_to_linear(beta_ref_db)) * std::pow(10.0, -loss_db / 20.0);
    }

    LinkModel::LinkModel(const LinkDescription &desc) : desc_(desc)
    {
        desc_.budget.validate();
        if (desc_.tx.size() == 0 || desc_.rx.size() == 0)
            throw std::invalid_argument("link arrays must not be empty");
        const double lambda = desc_.wavelength;
        const Vec3 &tx_c = desc_.tx.center(), &rx_c = desc_.rx.center();
        const double d = (rx_c - tx_c).norm();
        if (!(d > 0.0))
            throw std::invalid_argument("coincident elements");

        // Power split between LOS and random scatterers, K / (1 + K) and 1 / (1 + K)
        const double gain = desc_.budget.path_gain(d);
        const double k_lin = db_to_linear(desc_.budget.ricean_k_db);
        const double los_share = std::isinf(k_lin) ? 1.0 : k_lin / (1.0 + k_lin);
        c0_ = std::sqrt(gain * los_share);
        scatterer_power_ = desc_.n_random_scatterers > 0 ? gain * (1.0 - los_share) : 0.0;
        link_scale_ = std::pow(10.0, desc_.budget.blockage_db / 20.0);

        mean_ = c0_ * los_matrix(desc_.tx, desc_.rx, lambda);
        for (const auto &s : desc_.fixed_scatterers)
            mean_ += s.amplitude * scatterer_matrix(s, desc_.tx, desc_.rx, lambda);

        const std::size_t n_rx = desc_.rx.size(), n_tx = desc_.tx.size();
        const double a_rx = desc_.rx_effective_area > 0.0 ? desc_.rx_effective_area : lambda * lambda / (4.0 * pi);
        for (const auto &surface : desc_.surfaces)
        {
            const PlanePose &pose = surface.pose;
            const double s_tx = pose.signed_distance(tx_c), s_rx = pose.signed_distance(rx_c);
            if (s_tx == 0.0 || s_rx == 0.0 || (s_tx > 0.0) != (s_rx > 0.0))
                continue;
            bool same_side = true;
            for (const auto *arr : {&desc_.tx, &desc_.rx})
                for (const auto &p : arr->elements())
                {
                    const double s = pose.signed_distance(p);
                    same_side = same_side && s != 0.0 && (s > 0.0) == (s_tx > 0.0);
                }
            if (!same_side)
                continue;

            SurfaceTerm term;
            term.name = surface.name;
            const auto det = deterministic_component(surface, desc_.tx.elements(), desc_.rx.elements(), lambda);
            term.specular_on_surface = surface.contains(specular_point(pose, tx_c, rx_c));
            term.stats.c_d = term.specular_on_surface ? link_scale_ * det.c_d : cplx{};
            term.stats.H_d = det.H_d;
            term.stats.regime = det.regime;

            if (surface.sigma_z > 0.0)
            {
                const double c_inf_sq = isotropic_power(surface, tx_c, rx_c, a_rx, desc_.tx_directivity, lambda);
                term.stats.stoch_power = link_scale_ * link_scale_ * stochastic_power(det.regime.g, c_inf_sq);
                if (n_rx * n_tx <= desc_.dense_covariance_limit)
                {
                    term.stats.covariance.full = build_covariance(surface, desc_.tx.elements(), desc_.rx.elements(), lambda,
                                                                  CovarianceMethod::numeric, desc_.threads);
                }
                else
                {
                    const auto side = [&](const ArrayGeometry &arr, const ArrayGeometry &other)
                    {
                        const auto method = arr.size() <= desc_.dense_covariance_limit ? CovarianceMethod::numeric : CovarianceMethod::sinc;
                        const auto nodes = correlation_nodes(surface, arr.elements(), {other.center()}, lambda);
                        return side_covariance(nodes, arr.elements(), lambda, method, desc_.threads);
                    };
                    term.stats.covariance.rx = side(desc_.rx, desc_.tx);
                    term.stats.covariance.tx = side(desc_.tx, desc_.rx);
                }
                term.sampler = StochasticSampler(term.stats.covariance, term.stats.stoch_power, n_rx, n_tx);
                for (auto &w : check_assumptions(surface, desc_.tx.elements(), desc_.rx.elements(), lambda))
                    warnings_.push_back(surface.name + ": " + w);
            }
            else
                term.sampler = StochasticSampler({}, 0.0, n_rx, n_tx);

            mean_ += term.stats.c_d * term.stats.H_d;
            surfaces_.push_back(std::move(term));
        }
    }

    ComplexMatrix LinkModel::draw(std::uint64_t seed) const
    {
        ComplexMatrix H = mean_;
        const double lambda = desc_.wavelength;
        if (desc_.n_random_scatterers > 0 && scatterer_power_ > 0.0)
        {
            // Scatterers uniform in the Tx/Rx bounding box inflated by a quarter of the link distance
            std::mt19937_64 gen(derive_seed(seed, 1));
            std::uniform_real_distribution<double> unit(0.0, 1.0);
            const Vec3 &a = desc_.tx.center(), &b = desc_.rx.center();
            const double pad = 0.25 * (b - a).norm();
            const Vec3 lo = a.cwiseMin(b).array() - pad, hi = a.cwiseMax(b).array() + pad;
            const double amp = std::sqrt(scatterer_power_ / static_cast<double>(desc_.n_random_scatterers));
            for (std::size_t s = 0; s < desc_.n_random_scatterers; ++s)
            {
                PointScatterer sc;
                for (int k = 0; k < 3; ++k)
                    sc.position[k] = lo[k] + (hi[k] - lo[k]) * unit(gen);
                sc.amplitude = std::polar(amp, 2.0 * pi * unit(gen));
                H += sc.amplitude * scatterer_matrix(sc, desc_.tx, desc_.rx, lambda);
            }
        }
        for (std::size_t r = 0; r < surfaces_.size(); ++r)
            if (surfaces_[r].stats.stoch_power > 0.0)
                H += surfaces_[r].sampler.draw(derive_seed(seed, 2, r));
        return H;
    }

    ComplexMatrix assemble_channel(const ScenarioConfig &scenario, const std::string &link, std::uint64_t seed)
    {
        return LinkModel(scenario.link_description(link)).draw(seed);
    }

    void write_channel_csv(const ComplexMatrix &H, std::ostream &out)
    {
        CsvWriter csv(out);
        csv.header({"m", "n", "re", "im"});
        for (Eigen::Index m = 0; m < H.rows(); ++m)
            for (Eigen::Index n = 0; n < H.cols(); ++n)
                csv.row(static_cast<std::int64_t>(m), static_cast<std::int64_t>(n), H(m, n).real(), H(m, n).imag());
    }

    namespace
    {
        template <typename T>
        void put_le(std::ostream &out, T v)
        {
            std::array<char, sizeof(T)> b{};
            std::memcpy(b.data(), &v, sizeof(T));
            if constexpr (std::endian::native == std::endian::big)
                std::reverse(b.begin(), b.end());
            out.write(b.data(), static_cast<std::streamsize>(b.size()));
        }

        template <typename T>
        T get_le(std::istream &in)
        {
            std::array<char, sizeof(T)> b{};
            if (!in.read(b.data(), static_cast<std::streamsize>(b.size())))
                throw std::runtime_error("truncated channel dump");
            if constexpr (std::endian::native == std::endian::big)
                std::reverse(b.begin(), b.end());
            T v;
            std::memcpy(&v, b.data(), sizeof(T));
            return v;
        }
    }

    void write_channel_binary(const ComplexMatrix &H, std::ostream &out)
    {
        put_le<std::int64_t>(out, H.rows());
        put_le<std::int64_t>(out, H.cols());
        for (Eigen::Index m = 0; m < H.rows(); ++m)
            for (Eigen::Index n = 0; n < H.cols(); ++n)
            {
                put_le<double>(out, H(m, n).real());
                put_le<double>(out, H(m, n).imag());
            }
    }

    ComplexMatrix read_channel_binary(std::istream &in)
    {
        const auto rows = get_le<std::int64_t>(in), cols = get_le<std::int64_t>(in);
        if (rows < 0 || cols < 0)
            throw std::runtime_error("invalid channel dump header");
        ComplexMatrix H(rows, cols);
        for (Eigen::Index m = 0; m < rows; ++m)
            for (Eigen::Index n = 0; n < cols; ++n)
            {
                const double re = get_le<double>(in);
                H(m, n) = cplx(re, get_le<double>(in));
            }
        return H;
    }
}
