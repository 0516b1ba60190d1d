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

#include "nfchan/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace nfchan
{
    double mean(std::span<const double> x)
    {
        if (x.empty())
            throw std::invalid_argument("mean of empty sample");
        double s = 0.0;
        for (double v : x)
            s += v;
        return s / static_cast<double>(x.size());
    }

    double stddev(std::span<const double> x)
    {
        if (x.size() < 2)
            throw std::invalid_argument("stddev needs at least two samples");
        const double mu = mean(x);
        double s = 0.0;
        for (double v : x)
            s += (v - mu) * (v - mu);
        return std::sqrt(s / static_cast<double>(x.size() - 1));
    }

    NormalityResult anderson_darling_normal(std::span<const double> x)
    {
        const std::size_t n = x.size();
        if (n < 8)
            throw std::invalid_argument("Anderson-Darling test needs at least 8 samples");
        const double mu = mean(x), sd = stddev(x);
        if (!(sd > 0.0))
            throw std::invalid_argument("Anderson-Darling test on a constant sample");

        std::vector<double> z(x.begin(), x.end());
        std::sort(z.begin(), z.end());
        for (auto &v : z)
            v = (v - mu) / sd;

        // log Phi(z) and log(1 - Phi(z)) through erfc for tail accuracy
        const auto log_cdf = [](double t) { return std::log(0.5 * std::erfc(-t / std::numbers::sqrt2)); };
        const auto log_sf = [](double t) { return std::log(0.5 * std::erfc(t / std::numbers::sqrt2)); };

        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            s += (2.0 * static_cast<double>(i) + 1.0) * (log_cdf(z[i]) + log_sf(z[n - 1 - i]));
        const double nd = static_cast<double>(n);

        NormalityResult r;
        r.a2 = -nd - s / nd;
        r.a2_star = r.a2 * (1.0 + 0.75 / nd + 2.25 / (nd * nd));
        const double a = r.a2_star;
        if (a >= 0.6)
            r.p_value = std::exp(1.2937 - 5.709 * a + 0.0186 * a * a);
        else if (a >= 0.34)
            r.p_value = std::exp(0.9177 - 4.279 * a - 1.38 * a * a);
        else if (a >= 0.2)
            r.p_value = 1.0 - std::exp(-8.318 + 42.796 * a - 59.938 * a * a);
        else
            r.p_value = 1.0 - std::exp(-13.436 + 101.14 * a - 223.73 * a * a);
        r.p_value = std::clamp(r.p_value, 0.0, 1.0);
        r.normal_at_1pct = r.a2_star < r.critical_1pct;
        return r;
    }
}
