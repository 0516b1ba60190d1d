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
#include "nfchan/hf_oracle.hpp"
#include "nfchan/ris_sim.hpp"
#include "nfchan/stat_model.hpp"
#include "nfchan/surface.hpp"

#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

using namespace nfchan;

namespace
{
    constexpr double lambda = wavelength_of(28e9);

    PlanarSurfaceSpec plate(double side)
    {
        PlanarSurfaceSpec s;
        s.name = "plate";
        s.length_u = side;
        s.length_v = side;
        s.sigma_z = 0.5 * lambda;
        s.grid_step = lambda / 10.0;
        return s;
    }

    std::vector<Vec3> ula(const Vec3 &center, std::size_t n)
    {
        return ArrayGeometry::upa(center, Vec3::UnitX(), Vec3::UnitY(), n, 1, lambda / 2.0).elements();
    }
}

static void BM_HfIntegral(benchmark::State &state)
{
    const auto s = plate(static_cast<double>(state.range(0)) / 100.0);
    const auto r = sample_realization(s, 7, lambda);
    for (auto _ : state)
        benchmark::DoNotOptimize(hf_integral(r, Vec3(0.0, 0.0, 8.0), Vec3(0.5, 0.0, 8.0), lambda));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(r.heights.size()));
}
BENCHMARK(BM_HfIntegral)->Arg(25)->Arg(50)->Unit(benchmark::kMillisecond);

static void BM_HfMatrix(benchmark::State &state)
{
    const auto s = plate(0.25);
    const auto r = sample_realization(s, 7, lambda);
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto tx = ula(Vec3(0.0, 0.0, 5.0), n);
    const auto rx = ula(Vec3(0.4, 0.0, 5.0), n);
    for (auto _ : state)
        benchmark::DoNotOptimize(hf_matrix(r, tx, rx, lambda));
}
BENCHMARK(BM_HfMatrix)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

static void BM_BuildCovariance(benchmark::State &state)
{
    const auto s = plate(0.27);
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto tx = ula(Vec3(0.0, 0.0, 5.0), n);
    const auto rx = ula(Vec3(0.0, 0.3, 0.5), n);
    const auto method = state.range(1) ? CovarianceMethod::numeric : CovarianceMethod::sinc;
    for (auto _ : state)
        benchmark::DoNotOptimize(build_covariance(s, tx, rx, lambda, method));
}
BENCHMARK(BM_BuildCovariance)->Args({4, 0})->Args({4, 1})->Args({8, 0})->Args({8, 1})->Unit(benchmark::kMillisecond);

static void BM_RisPlan(benchmark::State &state)
{
    const auto sc = two_user_walls_scenario(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(plan_beams(sc, BeamMode::NlosNlos, db_to_watts(30.0)));
}
BENCHMARK(BM_RisPlan)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

static void BM_RisDraw(benchmark::State &state)
{
    const auto sc = two_user_walls_scenario(32);
    const auto plan = plan_beams(sc, BeamMode::NlosNlos, db_to_watts(30.0));
    std::uint64_t seed = 1;
    for (auto _ : state)
        benchmark::DoNotOptimize(end_to_end_channel(sc, plan, 0, seed++));
}
BENCHMARK(BM_RisDraw)->Unit(benchmark::kMicrosecond);

static void BM_RisEvaluate(benchmark::State &state)
{
    const auto sc = two_user_walls_scenario(32);
    const auto plan = plan_beams(sc, BeamMode::NlosNlos, db_to_watts(30.0));
    for (auto _ : state)
        benchmark::DoNotOptimize(evaluate_sum_rate(sc, plan, db_to_watts(30.0), static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_RisEvaluate)->Arg(10)->Arg(50)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
