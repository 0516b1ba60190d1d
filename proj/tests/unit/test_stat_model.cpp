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

#include <catch_amalgamated.hpp>

#include "nfchan/hf_oracle.hpp"
#include "nfchan/stat_model.hpp"

#include <Eigen/Eigenvalues>

#include <random>

using namespace nfchan;
using Catch::Approx;

namespace
{
    const double lambda = wavelength_of(28e9);
    const double kappa = wavenumber_of(lambda);

    PlanarSurfaceSpec plate(double side, double sigma = 0.0)
    {
        PlanarSurfaceSpec s;
        s.length_u = s.length_v = side;
        s.sigma_z = sigma;
        return s;
    }

    std::vector<Vec3> line(const Vec3 &start, const Vec3 &dir, std::size_t n, double spacing)
    {
        std::vector<Vec3> out;
        for (std::size_t i = 0; i < n; ++i)
            out.push_back(start + static_cast<double>(i) * spacing * dir);
        return out;
    }

    void require_sound(const ComplexMatrix &R)
    {
        REQUIRE((R - R.adjoint()).cwiseAbs().maxCoeff() <= 1e-12);
        REQUIRE((R.diagonal().array() - 1.0).abs().maxCoeff() <= 1e-12);
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(R, Eigen::EigenvaluesOnly);
        REQUIRE(eig.eigenvalues().minCoeff() >= -1e-6);
    }
}

TEST_CASE("roughness factor and regimes")
{
    const auto smooth = roughness_factor(kappa, 0.0, 1.0, 1.0);
    CHECK(smooth.g == 0.0);
    CHECK(smooth.regime == Regime::SR);
    CHECK(roughness_factor(kappa, 1.0 / kappa, 1.0, 1.0).g == Approx(4.0));
    const auto ss = roughness_factor(kappa, 3.0 / kappa, 1.0, 1.0);
    CHECK(ss.g == Approx(36.0));
    CHECK(std::exp(-ss.g / 2) == Approx(1.523e-8).epsilon(1e-3));
    CHECK(roughness_factor(kappa, 3.0 / kappa, 1.0, 1.0).regime == Regime::transient);
    CHECK(roughness_factor(kappa, 12.0 / kappa, 1.0, 1.0).regime == Regime::SS);
    CHECK(to_string(Regime::SS) == "SS");
}

TEST_CASE("deterministic component")
{
    auto s = plate(3.0);
    s.zeta = 0.7;
    const Vec3 tx(0, 0, 90), rx(1, 2, 10);
    const auto flat = deterministic_component(s, {tx}, {rx}, lambda);
    const double D = (mirror_image(rx, s.pose) - tx).norm();
    CHECK(std::abs(flat.c_d) == Approx(0.7 / (lambda * D)).epsilon(1e-12));
    CHECK(std::abs(flat.H_d(0, 0)) == Approx(1.0).epsilon(1e-14));

    const std::vector<Vec3> txs = line(Vec3(-0.01, 0, 90), Vec3::UnitX(), 3, lambda / 2);
    const std::vector<Vec3> rxs = line(Vec3(1, 2, 10), Vec3::UnitY(), 4, lambda / 2);
    const auto multi = deterministic_component(s, txs, rxs, lambda);
    double worst = 0.0;
    for (std::size_t m = 0; m < rxs.size(); ++m)
        for (std::size_t n = 0; n < txs.size(); ++n)
        {
            const double via_rx = (mirror_image(rxs[m], s.pose) - txs[n]).norm();
            const double via_tx = (rxs[m] - mirror_image(txs[n], s.pose)).norm();
            const cplx h = multi.H_d(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
            worst = std::max(worst, std::abs(h - std::polar(1.0, kappa * via_tx)));
            worst = std::max(worst, std::abs(h - std::polar(1.0, kappa * via_rx)));
        }
    CHECK(worst <= 1e-9);

    for (double ks : {0.3, 1.0, 2.5})
    {
        s.sigma_z = ks / kappa;
        const auto rough = deterministic_component(s, {tx}, {rx}, lambda);
        CHECK(std::abs(rough.c_d) / std::abs(flat.c_d) == Approx(std::exp(-rough.regime.g / 2)).epsilon(1e-12));
        CHECK(std::abs(rough.c_d) < std::abs(flat.c_d));
    }
}

TEST_CASE("isotropic power scaling")
{
    const auto s = plate(0.5);
    const double base = isotropic_power(s, Vec3(0, 0, 3), Vec3(1, 0, 2), 1e-4, 1.0, lambda);
    CHECK(isotropic_power(s, Vec3(0, 0, 3), Vec3(2, 0, 4), 1e-4, 1.0, lambda) == Approx(base / 4));
    auto big = s;
    big.length_u *= 2;
    CHECK(isotropic_power(big, Vec3(0, 0, 3), Vec3(1, 0, 2), 1e-4, 1.0, lambda) == Approx(2 * base));
}

TEST_CASE("isotropic power against oracle power at kappa sigma_z = 5")
{
    const auto s = plate(0.12, 5.0 / kappa);
    const Vec3 tx(0, 0, 1), rx(0.05, 0, 1);
    const double dA = std::pow(s.step_for(lambda), 2);
    const auto [ct, cr] = incidence_cosines(s.pose, tx, rx);
    const double aperture = 8 * pi * pi * s.zeta * dA * ct * ct * cr * cr / lambda;
    const double model = isotropic_power(s, tx, rx, aperture, 1.0, lambda);

    const auto mats = monte_carlo_channel(s, {tx}, {rx}, lambda, 200, 3);
    double p = 0.0;
    for (const auto &m : mats)
        p += std::norm(m(0, 0));
    CHECK(p / 200.0 == Approx(model).epsilon(0.25));
}

TEST_CASE("stochastic power and total magnitude curve")
{
    CHECK(stochastic_power(0.0, 3.0) == 0.0);
    CHECK(stochastic_power(1e3, 3.0) == Approx(3.0));
    CHECK(stochastic_power(2 * std::log(2.0), 3.0) == Approx(0.75));
    CHECK(total_power_ratio(0.0, 0.2) == Approx(1.0));
    CHECK(total_power_ratio(1e3, 0.2) == Approx(0.2));
}

TEST_CASE("sinc conventions and closed-form cases")
{
    CHECK(sinc(0.0) == 1.0);
    CHECK(std::abs(sinc(1.0)) < 1e-15);
    CHECK(sinc(0.5) == Approx(2 / pi));
    CorrelationSpec sec;
    sec.theta_1 = -0.3;
    sec.theta_2 = 0.5;
    CHECK(correlation_sinc(0.0, sec, lambda) == 1.0);

    const double tc = 1.1, d = 0.7 * lambda;
    CorrelationSpec aligned{-pi / 2, -pi / 2 + tc};
    CorrelationSpec perp{-tc / 2, tc / 2};
    CHECK(std::abs(correlation_sinc(d, aligned, lambda)) == Approx(correlation_aligned(d, tc, lambda)).epsilon(1e-12));
    CHECK(std::abs(correlation_sinc(d, perp, lambda)) == Approx(correlation_perpendicular(d, tc, lambda)).epsilon(1e-12));
    CHECK_THROWS(CorrelationSpec{0.4, 0.2}.validate());
}

TEST_CASE("aligned correlation dominates perpendicular on the main lobe")
{
    for (double tc = 0.1; tc < pi; tc += 0.15)
    {
        const double lobe = lambda / (2 * std::sin(tc / 2));
        for (double d = 0.0; d <= lobe; d += lobe / 40)
            REQUIRE(std::abs(correlation_aligned(d, tc, lambda)) >= std::abs(correlation_perpendicular(d, tc, lambda)) - 1e-15);
    }
}

TEST_CASE("perpendicular correlation does not increase with angular range on the main lobe")
{
    const double d = 0.6 * lambda;
    double prev = 1.0;
    for (double tc = 0.05; tc < pi; tc += 0.05)
    {
        if (2 * d / lambda * std::sin(tc / 2) > 1.0)
            break;
        const double r = std::abs(correlation_perpendicular(d, tc, lambda));
        REQUIRE(r <= prev + 1e-15);
        prev = r;
    }
}

TEST_CASE("projected-path integral reductions")
{
    const auto s = plate(0.3);
    const Vec3 a(0, 0, 0.5), b(0.01, 0, 0.5), t(0.1, 0.1, 3);
    CHECK(correlation_numeric(s, {t, t}, {a, a}, lambda) == cplx(1.0));
    const auto nodes = planar_nodes(s, lambda / 4, lambda);
    CHECK(correlation_numeric(nodes, {t, t}, {a, b}, lambda) == correlation_numeric(nodes, {Vec3::Zero(), Vec3::Zero()}, {a, b}, lambda));
    CHECK(std::abs(correlation_numeric(nodes, {t, t}, {a, b}, lambda)) <= 1.0);
}

TEST_CASE("sector quadrature matches the sinc law on random instances")
{
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> ud(0.0, 5.0), ut(-pi / 2, pi / 2);
    double worst = 0.0;
    for (int i = 0; i < 40; ++i)
    {
        double t1 = ut(rng), t2 = ut(rng);
        if (t1 > t2)
            std::swap(t1, t2);
        if (t2 - t1 < 1e-3)
            continue;
        const CorrelationSpec sec{t1, t2};
        const double d = ud(rng) * lambda;
        const Vec3 a(0.1, 0.2, 0.3), dir = Vec3(1, 2, 2).normalized();
        const LocalFrame frame = LocalFrame::make(a + 0.5 * d * dir, dir);
        const auto nodes = sector_nodes(frame, 1.0, sec);
        const cplx num = correlation_numeric(nodes, {Vec3::Zero(), Vec3::Zero()}, {a, a + d * dir}, lambda);
        worst = std::max(worst, std::abs(std::abs(num) - std::abs(correlation_sinc(d, sec, lambda))));
        CHECK(effective_sector(nodes, frame).theta_1 == Approx(t1).margin(1e-9));
        CHECK(effective_sector(nodes, frame).theta_2 == Approx(t2).margin(1e-9));
    }
    CHECK(worst <= 1e-3);
}

TEST_CASE("covariance: trivial sizes and definition")
{
    const auto s = plate(0.3);
    const Vec3 t(0, 0, 3);
    const auto one = build_covariance(s, {t}, {Vec3(0.2, 0, 1)}, lambda, CovarianceMethod::numeric);
    REQUIRE(one.rows() == 1);
    CHECK(one(0, 0) == cplx(1.0));

    const std::vector<Vec3> rx{Vec3(0.2, 0, 1), Vec3(0.2, lambda / 2, 1)};
    const auto R = build_covariance(s, {t}, rx, lambda, CovarianceMethod::numeric);
    const auto nodes = correlation_nodes(s, {t}, rx, lambda);
    CHECK(std::abs(R(0, 1) - correlation_numeric(nodes, {t, t}, {rx[0], rx[1]}, lambda)) <= 1e-12);
}

TEST_CASE("covariance soundness on random geometries")
{
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 6; ++trial)
    {
        const auto s = plate(0.4);
        const Vec3 tc(u(rng), u(rng), 2.0 + u(rng)), rc(u(rng), u(rng), 1.0 + 0.5 * u(rng));
        const Vec3 ta = Vec3(u(rng), u(rng), u(rng)).normalized(), ra = Vec3(u(rng), u(rng), u(rng)).normalized();
        const auto txs = line(tc, ta, 3, lambda / 2), rxs = line(rc, ra, 4, lambda / 2);
        for (auto method : {CovarianceMethod::numeric, CovarianceMethod::sinc})
        {
            const auto R = build_covariance(s, txs, rxs, lambda, method);
            REQUIRE(R.rows() == 12);
            require_sound(R);
        }
    }
}

TEST_CASE("numeric and sinc covariance agree on an isotropic domain")
{
    const Vec3 center(0.3, -0.2, 1.0), dir = Vec3(0, 1, 1).normalized();
    const auto rxs = line(center, dir, 5, lambda / 2);
    const CorrelationSpec sec{-0.4, 0.9};
    const auto nodes = sector_nodes(LocalFrame::make(center + 1.0 * lambda * dir, dir), 1.0, sec);
    const auto Rn = side_covariance(nodes, rxs, lambda, CovarianceMethod::numeric);
    const auto Rs = side_covariance(nodes, rxs, lambda, CovarianceMethod::sinc);
    CHECK((Rn - Rs).cwiseAbs().maxCoeff() <= 1e-3);
}

TEST_CASE("stochastic sampler statistics")
{
    const auto s = plate(0.3);
    const std::vector<Vec3> rxs{Vec3(0.1, 0, 0.5), Vec3(0.1, lambda / 2, 0.5), Vec3(0.1, lambda, 0.5)};
    const std::vector<Vec3> txs{Vec3(0, 0, 2), Vec3(lambda / 2, 0, 2)};

    CovarianceModel dense;
    dense.full = build_covariance(s, txs, rxs, lambda, CovarianceMethod::numeric);
    CHECK(StochasticSampler(dense, 0.0, 3, 2).draw(5).cwiseAbs().maxCoeff() == 0.0);

    CovarianceModel sep;
    sep.rx = side_covariance(correlation_nodes(s, txs, rxs, lambda), rxs, lambda, CovarianceMethod::numeric);
    sep.tx = side_covariance(correlation_nodes(s, txs, rxs, lambda), txs, lambda, CovarianceMethod::numeric);

    for (const CovarianceModel *model : {&dense, &sep})
    {
        const double power = 2.5;
        const StochasticSampler sampler(*model, power, 3, 2);
        const ComplexMatrix target = power * model->dense();
        const int n = 10000;
        ComplexMatrix C = ComplexMatrix::Zero(6, 6);
        ComplexVector mu = ComplexVector::Zero(6);
        for (int i = 0; i < n; ++i)
        {
            const ComplexMatrix H = sampler.draw(derive_seed(99, static_cast<std::uint64_t>(i)));
            ComplexVector v(6);
            for (Eigen::Index m = 0; m < 3; ++m)
                for (Eigen::Index k = 0; k < 2; ++k)
                    v(m * 2 + k) = H(m, k);
            mu += v;
            C += v * v.adjoint();
        }
        mu /= n;
        C /= n;
        CHECK((C - target).norm() / target.norm() <= 0.05);
        CHECK(mu.cwiseAbs().maxCoeff() <= 3 * std::sqrt(power / n));
    }
}

TEST_CASE("assumption warnings")
{
    const auto s = plate(0.3, 1e-3);
    CHECK(check_assumptions(s, {Vec3(0, 0, 5)}, {Vec3(0.1, 0, 5)}, lambda).empty());
    const auto w = check_assumptions(s, {Vec3(0, 0, 0.5), Vec3(0.3, 0, 0.5)}, {Vec3(0.1, 0, 5)}, lambda);
    REQUIRE_FALSE(w.empty());
    CHECK(w.front().find("aperture condition") != std::string::npos);
}
