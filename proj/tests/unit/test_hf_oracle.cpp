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

using namespace nfchan;
using Catch::Approx;

namespace
{
    const double lambda = wavelength_of(28e9);
    const double kappa = wavenumber_of(lambda);

    PlanarSurfaceSpec plate(double side, double sigma = 0.0, double zeta = 1.0)
    {
        PlanarSurfaceSpec s;
        s.length_u = s.length_v = side;
        s.sigma_z = sigma;
        s.zeta = zeta;
        return s;
    }
}

TEST_CASE("flat plate reproduces the specular amplitude and image phase")
{
    const auto s = plate(0.8);
    const Vec3 tx(0, 0, 0.3), rx(0.1, 0.05, 0.3);
    const cplx hf = hf_flat(s, tx, rx, lambda);
    const auto ref = specular_field(s, {tx}, {rx}, lambda);
    const cplx expected = ref.c_d * ref.H_d(0, 0);
    CHECK(std::abs(hf) == Approx(std::abs(expected)).epsilon(0.05));
    CHECK(std::abs(std::arg(hf / expected)) < 0.05);
}

TEST_CASE("output is linear in zeta")
{
    const Vec3 tx(0, 0, 1), rx(0.2, 0, 1.2);
    const cplx a = hf_flat(plate(0.2, 0.0, 0.4), tx, rx, lambda);
    const cplx b = hf_flat(plate(0.2, 0.0, 0.8), tx, rx, lambda);
    CHECK(std::abs(b - 2.0 * a) <= 1e-12 * std::abs(b));
}

TEST_CASE("swapping Tx and Rx leaves the integral unchanged")
{
    const auto r = sample_realization(plate(0.2, 2e-3), 9, lambda);
    const Vec3 tx(0.1, -0.3, 1.5), rx(-0.2, 0.4, 0.7);
    const cplx a = hf_integral(r, tx, rx, lambda), b = hf_integral(r, rx, tx, lambda);
    CHECK(std::abs(a - b) <= 1e-12 * std::abs(a));
}

TEST_CASE("quadrature convergence on a flat plate")
{
    auto s = plate(0.3);
    const Vec3 tx(0, 0, 2), rx(0.4, 0, 2);
    s.grid_step = lambda / 10;
    const double coarse = std::abs(hf_flat(s, tx, rx, lambda));
    s.grid_step = lambda / 20;
    const double fine = std::abs(hf_flat(s, tx, rx, lambda));
    CHECK(std::abs(coarse - fine) <= 0.01 * fine);
}

TEST_CASE("preconditions")
{
    auto s = plate(0.1);
    s.grid_step = lambda / 4;
    CHECK_THROWS_WITH(hf_flat(s, Vec3(0, 0, 1), Vec3(0, 0, 2), lambda), Catch::Matchers::ContainsSubstring("resolution"));
    CHECK_THROWS_WITH(hf_flat(plate(0.1), Vec3(0, 0, 1), Vec3(0, 0, -2), lambda), Catch::Matchers::ContainsSubstring("reflection path"));
}

TEST_CASE("results do not depend on the worker count")
{
    const auto s = plate(0.15, 3e-3);
    const std::vector<Vec3> tx{Vec3(0, 0, 1), Vec3(0.01, 0, 1)}, rx{Vec3(0.3, 0, 1), Vec3(0.3, 0.005, 1), Vec3(0.3, 0.01, 1)};
    const auto one = monte_carlo_channel(s, tx, rx, lambda, 6, 100, 1);
    const auto three = monte_carlo_channel(s, tx, rx, lambda, 6, 100, 3);
    REQUIRE(one.size() == 6);
    for (std::size_t i = 0; i < one.size(); ++i)
        REQUIRE(one[i] == three[i]);
    const auto r = sample_realization(s, 100, lambda);
    CHECK(hf_matrix(r, tx, rx, lambda, 1) == one[0]);
    CHECK(hf_matrix(r, tx, rx, lambda, 4) == one[0]);

    const auto samples = to_samples(one, 100);
    REQUIRE(samples.size() == 6 * 6);
    CHECK(samples[7].realization_seed == 101);
    CHECK(samples[7].value == one[1](samples[7].rx_index, samples[7].tx_index));
}

TEST_CASE("single flat realization equals the flat reference")
{
    const auto s = plate(0.2);
    const Vec3 tx(0, 0, 1), rx(0.1, 0, 1);
    const auto m = monte_carlo_channel(s, {tx}, {rx}, lambda, 1, 5);
    CHECK(m[0](0, 0) == hf_flat(s, tx, rx, lambda));
}

TEST_CASE("Monte-Carlo mean decays as exp(-g/2) at kappa sigma_z = 1")
{
    const auto s = plate(0.5, 1.0 / kappa);
    const Vec3 tx(0, 0, 8), rx(0.5, 0, 8);
    const cplx c0 = hf_flat(s, tx, rx, lambda);
    const double g = deterministic_component(s, {tx}, {rx}, lambda).regime.g;
    const auto mats = monte_carlo_channel(s, {tx}, {rx}, lambda, 100, 1);
    cplx avg{};
    for (const auto &m : mats)
        avg += m(0, 0) / c0;
    avg /= 100.0;
    CHECK(g == Approx(4.0).epsilon(2e-3));
    CHECK(std::abs(avg) == Approx(std::exp(-g / 2)).epsilon(0.05));
    CHECK(std::abs(std::arg(avg)) < 0.05);
}

TEST_CASE("large roughness power approaches the independent-phase asymptote")
{
    const auto s = plate(0.12, 5.0 / kappa);
    const Vec3 tx(0, 0, 1), rx(0.2, 0, 1);
    const auto mats = monte_carlo_channel(s, {tx}, {rx}, lambda, 400, 77);
    double p = 0.0;
    for (const auto &m : mats)
        p += std::norm(m(0, 0));
    p /= 400.0;
    CHECK(p == Approx(diffuse_power_iid(s, tx, rx, lambda)).epsilon(0.15));
}
