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

#ifndef NFCHAN_STATS_HPP
#define NFCHAN_STATS_HPP

#include <span>
#include <vector>

namespace nfchan
{
    double mean(std::span<const double> x);

    // Sample standard deviation (n - 1 denominator)
    double stddev(std::span<const double> x);

    struct NormalityResult
    {
        double a2 = 0.0;          // Anderson-Darling statistic
        double a2_star = 0.0;     // a2 * (1 + 0.75 / n + 2.25 / n^2)
        double p_value = 0.0;     // D'Agostino-Stephens approximation
        double critical_1pct = 1.035;
        bool normal_at_1pct = false;
    };

    // Anderson-Darling test for normality with mean and variance estimated from the sample.
    // Requires at least 8 samples and a non-zero spread.
    NormalityResult anderson_darling_normal(std::span<const double> x);
}

#endif
