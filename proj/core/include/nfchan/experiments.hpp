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

#ifndef NFCHAN_EXPERIMENTS_HPP
#define NFCHAN_EXPERIMENTS_HPP

#include "nfchan/config.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace nfchan
{
    struct RunOptions
    {
        std::optional<std::uint64_t> seed;        // overrides the config seed
        std::optional<std::size_t> realizations;  // overrides realization / sample / draw counts
        std::string out_dir = ".";
        unsigned threads = 1;
    };

    struct Check
    {
        std::string name;
        double value = 0.0;     // measured statistic
        double tolerance = 0.0; // bound it is compared against
        bool pass = false;
        std::string detail;
    };

    struct ExperimentReport
    {
        std::string id;
        std::string digest;
        std::uint64_t seed = 0;
        std::vector<std::string> outputs;
        std::vector<std::pair<std::string, double>> summary;
        std::vector<Check> checks;
        std::vector<std::string> notes;

        bool passed() const;
        const Check &check(const std::string &name) const;
        double value(const std::string &summary_key) const;

        // Deterministic JSON rendering (no timestamps)
        std::string to_json() const;
    };

    ExperimentReport run_verify_mean(const Config &config, const RunOptions &options);
    ExperimentReport run_verify_distribution(const Config &config, const RunOptions &options);
    ExperimentReport run_verify_correlation(const Config &config, const RunOptions &options);
    ExperimentReport run_sum_rate(const Config &config, const RunOptions &options);
    ExperimentReport run_oracle(const Config &config, const RunOptions &options);

    // Dispatch by CLI name: verify-mean, verify-distribution, verify-correlation, sum-rate, oracle
    ExperimentReport run_experiment(const std::string &name, const Config &config, const RunOptions &options);

    // Explicit flag value, else NFCHAN_OUT_DIR, else "."
    std::string resolve_out_dir(const std::optional<std::string> &flag);
}

#endif
