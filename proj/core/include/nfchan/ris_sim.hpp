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

#ifndef NFCHAN_RIS_SIM_HPP
#define NFCHAN_RIS_SIM_HPP

#include "nfchan/channel.hpp"
#include "nfchan/scenario.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace nfchan
{
    // "<BS-RIS path>-<RIS-MU path>"; "(n)LOS" means non-LOS paths may be used in addition to LOS
    enum class BeamMode
    {
        LosLos,
        LosNlos,  // LOS-(n)LOS
        NlosLos,  // (n)LOS-LOS
        NlosNlos, // (n)LOS-(n)LOS
    };

    enum class PathKind
    {
        LOS,
        NLOS
    };

    std::string to_string(BeamMode mode);
    BeamMode parse_beam_mode(const std::string &text); // accepts the printed labels
    inline constexpr BeamMode all_beam_modes[] = {BeamMode::LosLos, BeamMode::LosNlos, BeamMode::NlosLos, BeamMode::NlosNlos};

    struct TileAssignment
    {
        std::size_t user = 0;
        PathKind ris_mu_path = PathKind::LOS;
    };

    struct BeamPlan
    {
        BeamMode mode = BeamMode::LosLos;
        std::vector<ComplexVector> bs_weights; // one N_t vector per user
        std::vector<PathKind> bs_ris_path;     // per user
        Eigen::VectorXd ris_phases;            // omega_n in [0, 2 pi)
        std::vector<TileAssignment> tiles;
        double objective = 0.0;                // sum rate of the mean channel [bits/s/Hz]
    };

    struct SumRateResult
    {
        double tx_power_dbm = 0.0;
        double sum_rate = 0.0;     // mean over draws of sum_k log2(1 + SINR_k)
        double sum_rate_std = 0.0; // standard deviation over draws
        std::vector<double> per_user_sinr; // mean linear SINR per user
    };

    // omega_n = -kappa (|u_n - source| + |target - u_n|) mod 2 pi, for the listed elements
    std::vector<double> focus_phases(const ArrayGeometry &ris, const Vec3 &source, const Vec3 &target,
                                     const std::vector<std::size_t> &subset, double wavelength);

    // H_d + H_r diag(omega e^{j phases}) H_t
    ComplexMatrix end_to_end_channel(const ComplexMatrix &H_d, const ComplexMatrix &H_r, const ComplexMatrix &H_t,
                                     double omega, const Eigen::VectorXd &phases);

    double db_to_watts(double dbm);

    // Channel realization of all links of the RIS experiment
    struct RisChannels
    {
        ComplexMatrix H_t;              // BS -> RIS, [N, N_t]
        std::vector<ComplexMatrix> H_d; // BS -> MU k, [N_r, N_t]
        std::vector<ComplexMatrix> H_r; // RIS -> MU k, [N_r, N]
    };

    // Precomputed link models of the RIS scenario
    class RisSystem
    {
    public:
        explicit RisSystem(const ScenarioConfig &scenario);

        std::size_t n_users() const { return users_.size(); }
        std::size_t n_elements() const { return ris_.size(); }
        double omega() const { return omega_; }
        double noise_variance() const { return noise_; }
        const std::vector<std::vector<std::size_t>> &tiles() const { return tiles_; }

        bool bs_ris_nlos_available() const { return wall_bs_ris_.has_value(); }
        bool ris_mu_nlos_available(std::size_t user) const;

        RisChannels mean() const;
        RisChannels draw(std::uint64_t seed) const;

        // Greedy tile assignment and conjugate focusing; throws std::invalid_argument("path unavailable")
        BeamPlan plan(BeamMode mode, double tx_power_w) const;

        ComplexMatrix end_to_end(const RisChannels &ch, const BeamPlan &plan, std::size_t user) const;

        // Per-user SINR for one realization
        std::vector<double> sinr(const RisChannels &ch, const BeamPlan &plan) const;

        // Averages over draws with seeds derive_seed(base_seed, i)
        SumRateResult evaluate(const BeamPlan &plan, double tx_power_w, std::size_t n_draws, std::uint64_t base_seed) const;
        SumRateResult evaluate(const BeamPlan &plan, double tx_power_w, const std::vector<RisChannels> &draws) const;

    private:
        struct Candidate;
        BeamPlan plan_fixed(BeamMode mode, const std::vector<PathKind> &bs_paths, double tx_power_w, const RisChannels &mean) const;

        double lambda_ = 0.0;
        double omega_ = 0.0;
        double noise_ = 0.0;
        ArrayGeometry ris_;
        ArrayGeometry bs_;
        std::vector<ArrayGeometry> users_;
        std::vector<std::vector<std::size_t>> tiles_;
        std::optional<PlanarSurfaceSpec> wall_bs_ris_;
        std::optional<PlanarSurfaceSpec> wall_ris_mu_;
        std::vector<LinkModel> bs_mu_;
        std::optional<LinkModel> bs_ris_;
        std::vector<LinkModel> ris_mu_;
        unsigned threads_ = 1;
    };

    // Scenario-level wrappers
    BeamPlan plan_beams(const ScenarioConfig &scenario, BeamMode mode, double tx_power_w);
    ComplexMatrix end_to_end_channel(const ScenarioConfig &scenario, const BeamPlan &plan, std::size_t user, std::uint64_t seed);
    SumRateResult evaluate_sum_rate(const ScenarioConfig &scenario, const BeamPlan &plan, double tx_power_w, std::size_t n_draws);

    // Smallest sweep power above which every doubling gains < "tolerance" bits/s/Hz, after the curve
    // has risen at least once; nullopt if the curve does not flatten inside the sweep.
    // Powers must be increasing in doubling steps.
    std::optional<double> saturation_threshold(const std::vector<double> &power_dbm, const std::vector<double> &rate,
                                               double tolerance = 0.1);

    // Default doubling sweep from "lo_dbm" up to "hi_dbm"
    std::vector<double> doubling_sweep(double lo_dbm, double hi_dbm);

    // The two-user multi-wall scenario with an n x n RIS (desk default n = 32)
    ScenarioConfig two_user_walls_scenario(std::size_t ris_side = 32);
}

#endif
