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

#include "nfchan/parallel.hpp"
#include "nfchan/stats.hpp"
#include "nfchan/types.hpp"

#include <random>

using namespace nfchan;
using Catch::Approx;

TEST_CASE("moments")
{
    const std::vector<double> x{1, 2, 3, 4};
    CHECK(mean(x) == 2.5);
    CHECK(stddev(x) == Approx(std::sqrt(5.0 / 3.0)));
}

TEST_CASE("Anderson-Darling statistic and p-value against reference values")
{
    std::vector<double> x;
    for (int i = 0; i < 20; ++i)
        x.push_back(std::sin(1.7 * i) * (1 + std::fmod(0.1 * i, 3.0)) + 0.05 * i);
    const auto a = anderson_darling_normal(x);
    CHECK(a.a2 == Approx(0.34524109716183204).epsilon(1e-10));
    CHECK(a.p_value == Approx(0.4483094919478603).epsilon(1e-8));
    CHECK(a.normal_at_1pct);

    std::vector<double> y;
    for (int i = 0; i < 30; ++i)
        y.push_back(std::exp(-2.0 + 4.0 * i / 29.0));
    const auto b = anderson_darling_normal(y);
    CHECK(b.a2 == Approx(2.085807333513152).epsilon(1e-10));
    CHECK(b.p_value == Approx(1.9284522322855788e-05).epsilon(1e-6));
    CHECK_FALSE(b.normal_at_1pct);
}

TEST_CASE("Anderson-Darling preconditions and behaviour on Gaussian data")
{
    CHECK_THROWS(anderson_darling_normal(std::vector<double>{1, 2, 3}));
    CHECK_THROWS(anderson_darling_normal(std::vector<double>(20, 1.0)));

    std::mt19937_64 rng(4);
    std::normal_distribution<double> n(3.0, 2.0);
    int rejected = 0;
    for (int t = 0; t < 200; ++t)
    {
        std::vector<double> z(100);
        for (auto &v : z)
            v = n(rng);
        rejected += anderson_darling_normal(z).normal_at_1pct ? 0 : 1;
    }
    CHECK(rejected <= 8);
}

TEST_CASE("pairwise sum and parallel_for")
{
    std::vector<double> v(1001);
    for (std::size_t i = 0; i < v.size(); ++i)
        v[i] = 1.0 / static_cast<double>(i + 1);
    const double s = pairwise_sum(v.data(), v.size());
    CHECK(s == Approx(7.486469861549344).epsilon(1e-14));

    std::vector<int> hits(37, 0);
    parallel_for(hits.size(), 4, [&](std::size_t i)
                 { hits[i] += 1; });
    for (int h : hits)
        REQUIRE(h == 1);
}

TEST_CASE("seed derivation is stable")
{
    CHECK(derive_seed(1, 0) != derive_seed(1, 1));
    CHECK(derive_seed(1, 2, 3) != derive_seed(1, 3, 2));
    CHECK(derive_seed(7, 5) == derive_seed(7, 5));
    CHECK(wavelength_of(28e9) == Approx(0.0107068735).epsilon(1e-9));
}
