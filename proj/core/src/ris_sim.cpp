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

#include "nfchan/ris_sim.hpp"
#include "nfchan/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace nfchan
{
    std::string to_string(BeamMode mode)
    {
        switch (mode)
        {
        case BeamMode::LosLos:
            return "LOS-LOS";
        case BeamMode::LosNlos:
            return "LOS-(n)LOS";
        case BeamMode::NlosLos:
            return "(n)LOS-LOS";
        case BeamMode::NlosNlos:
            return "(n)LOS-(n)LOS";
        }
        return "unknown";
    }

    BeamMode parse_beam_mode(const std::string &text)
    {
        for (auto m : all_beam_modes)
            if (to_string(m) == text)
                return m;
        throw std::invalid_argument("unknown beam mode '" + text + "'");
    }

    namespace
    {
        bool bs_nlos_allowed(BeamMode m) { return m == BeamMode::NlosLos || m == BeamMode::NlosNlos; }
        bool mu_nlos_allowed(BeamMode m) { return m == BeamMode::LosNlos || m == BeamMode::NlosNlos; }

        double wrap_phase(double x)
        {
            double r = std::fmod(x, 2.0 * pi);
            if (r < 0.0)
                r += 2.0 * pi;
            return r;
        }

        // Whether a specular path a -> surface -> b exists on the finite rectangle
        bool specular_path(const PlanarSurfaceSpec &s, const Vec3 &a, const Vec3 &b)
        {
            const double sa = s.pose.signed_distance(a), sb = s.pose.signed_distance(b);
            if (sa == 0.0 || sb == 0.0 || (sa > 0.0) != (sb > 0.0))
                return false;
            return s.contains(specular_point(s.pose, a, b));
        }

        double sum_rate_of(const std::vector<std::vector<cplx>> &g, double noise)
        {
            double rate = 0.0;
            for (std::size_t k = 0; k < g.size(); ++k)
            {
                double interference = noise;
                for (std::size_t j = 0; j < g.size(); ++j)
                    if (j != k)
                        interference += std::norm(g[k][j]);
                rate += std::log2(1.0 + std::norm(g[k][k]) / interference);
            }
            return rate;
        }
    }

    std::vector<double> focus_phases(const ArrayGeometry &ris, const Vec3 &source, const Vec3 &target,
                                     const std::vector<std::size_t> &subset, double wavelength)
    {
        const double kappa = wavenumber_of(wavelength);
        std::vector<double> out;
        out.reserve(subset.size());
        for (auto n : subset)
        {
            if (n >= ris.size())
                throw std::out_of_range("RIS element index out of range");
            const Vec3 &u = ris.elements()[n];
            out.push_back(wrap_phase(-kappa * ((u - source).norm() + (target - u).norm())));
        }
        return out;
    }

    ComplexMatrix end_to_end_channel(const ComplexMatrix &H_d, const ComplexMatrix &H_r, const ComplexMatrix &H_t,
                                     double omega, const Eigen::VectorXd &phases)
    {
        if (H_r.cols() != H_t.rows() || H_r.cols() != phases.size() || H_d.rows() != H_r.rows() || H_d.cols() != H_t.cols())
            throw std::invalid_argument("dimension mismatch");
        ComplexVector diag(phases.size());
        for (Eigen::Index n = 0; n < phases.size(); ++n)
            diag(n) = std::polar(omega, phases(n));
        return H_d + H_r * diag.asDiagonal() * H_t;
    }

    double db_to_watts(double dbm) { return db_to_linear(dbm - 30.0); }

    RisSystem::RisSystem(const ScenarioConfig &scenario)
    {
        scenario.validate();
        if (!scenario.ris)
            throw std::invalid_argument("scenario has no RIS");
        const auto &cfg = scenario.ris_experiment;
        lambda_ = scenario.wavelength();
        omega_ = scenario.ris->omega(lambda_);
        noise_ = scenario.noise.variance_w();
        ris_ = scenario.ris->geometry(lambda_);
        tiles_ = scenario.ris->tiles();
        bs_ = scenario.array(cfg.bs);
        threads_ = scenario.threads;
        for (const auto &u : cfg.users)
        {
            users_.push_back(scenario.array(u));
            if (users_.back().size() != 1)
                throw std::invalid_argument("users must have a single antenna");
        }

        if (scenario.has_surface(cfg.wall_bs_ris) && specular_path(scenario.surface(cfg.wall_bs_ris), bs_.center(), ris_.center()))
            wall_bs_ris_ = scenario.surface(cfg.wall_bs_ris);
        if (scenario.has_surface(cfg.wall_ris_mu))
            wall_ris_mu_ = scenario.surface(cfg.wall_ris_mu);

        const auto make = [&](const ArrayGeometry &tx, const ArrayGeometry &rx, const LinkBudget &budget)
        {
            LinkDescription d;
            d.tx = tx;
            d.rx = rx;
            d.budget = budget;
            d.surfaces = scenario.surfaces;
            d.n_random_scatterers = cfg.n_scatterers;
            d.wavelength = lambda_;
            d.threads = threads_;
            return LinkModel(d);
        };
        bs_ris_.emplace(make(bs_, ris_, cfg.bs_ris));
        for (const auto &u : users_)
        {
            bs_mu_.push_back(make(bs_, u, cfg.bs_mu));
            ris_mu_.push_back(make(ris_, u, cfg.ris_mu));
        }
    }

    bool RisSystem::ris_mu_nlos_available(std::size_t user) const
    {
        return wall_ris_mu_ && specular_path(*wall_ris_mu_, ris_.center(), users_.at(user).center());
    }

    RisChannels RisSystem::mean() const
    {
        RisChannels ch;
        ch.H_t = bs_ris_->mean();
        for (std::size_t k = 0; k < users_.size(); ++k)
        {
            ch.H_d.push_back(bs_mu_[k].mean());
            ch.H_r.push_back(ris_mu_[k].mean());
        }
        return ch;
    }

    RisChannels RisSystem::draw(std::uint64_t seed) const
    {
        RisChannels ch;
        ch.H_t = bs_ris_->draw(derive_seed(seed, 1));
        for (std::size_t k = 0; k < users_.size(); ++k)
        {
            ch.H_d.push_back(bs_mu_[k].draw(derive_seed(seed, 2, k)));
            ch.H_r.push_back(ris_mu_[k].draw(derive_seed(seed, 3, k)));
        }
        return ch;
    }

    BeamPlan RisSystem::plan_fixed(BeamMode mode, const std::vector<PathKind> &bs_paths, double tx_power_w, const RisChannels &mean) const
    {
        const std::size_t K = users_.size(), T = tiles_.size(), N = ris_.size();
        const Vec3 bs_virtual = wall_bs_ris_ ? mirror_image(bs_.center(), wall_bs_ris_->pose) : bs_.center();

        BeamPlan plan;
        plan.mode = mode;
        plan.bs_ris_path = bs_paths;

        // Maximum-ratio BS weights toward the real RIS center or its image in wall 1
        const double per_user = K > 0 ? tx_power_w / static_cast<double>(K) : 0.0;
        for (std::size_t k = 0; k < K; ++k)
        {
            const Vec3 focal = bs_paths[k] == PathKind::LOS ? ris_.center() : mirror_image(ris_.center(), wall_bs_ris_->pose);
            ComplexVector w = array_response(bs_, focal, lambda_).conjugate();
            w *= std::sqrt(per_user / static_cast<double>(bs_.size()));
            plan.bs_weights.push_back(w);
        }

        // Candidate (user, RIS-MU path) options and their focusing phases over the whole RIS
        struct Option
        {
            std::size_t user;
            PathKind path;
            std::vector<double> phases;
        };
        std::vector<Option> options;
        std::vector<std::size_t> all(N);
        for (std::size_t n = 0; n < N; ++n)
            all[n] = n;
        for (std::size_t u = 0; u < K; ++u)
        {
            const Vec3 source = bs_paths[u] == PathKind::LOS ? bs_.center() : bs_virtual;
            const Vec3 &user = users_[u].center();
            options.push_back({u, PathKind::LOS, focus_phases(ris_, source, user, all, lambda_)});
            if (mu_nlos_allowed(mode) && ris_mu_nlos_available(u))
                options.push_back({u, PathKind::NLOS, focus_phases(ris_, source, mirror_image(user, wall_ris_mu_->pose), all, lambda_)});
        }

        // c[t][o][k][j]: tile t, option o, contribution to h_k w_j
        std::vector<ComplexVector> v(K);
        for (std::size_t j = 0; j < K; ++j)
            v[j] = mean.H_t * plan.bs_weights[j];
        std::vector<std::vector<std::vector<std::vector<cplx>>>> c(T, std::vector<std::vector<std::vector<cplx>>>(options.size(), std::vector<std::vector<cplx>>(K, std::vector<cplx>(K))));
        for (std::size_t t = 0; t < T; ++t)
            for (std::size_t o = 0; o < options.size(); ++o)
                for (std::size_t k = 0; k < K; ++k)
                    for (std::size_t j = 0; j < K; ++j)
                    {
                        cplx acc{};
                        for (auto n : tiles_[t])
                            acc += mean.H_r[k](0, static_cast<Eigen::Index>(n)) * std::polar(omega_, options[o].phases[n]) * v[j](static_cast<Eigen::Index>(n));
                        c[t][o][k][j] = acc;
                    }

        std::vector<std::vector<cplx>> g(K, std::vector<cplx>(K));
        for (std::size_t k = 0; k < K; ++k)
            for (std::size_t j = 0; j < K; ++j)
                g[k][j] = (mean.H_d[k] * plan.bs_weights[j])(0);

        std::vector<long> chosen(T, -1);
        std::vector<cplx> rot(T, cplx(1.0, 0.0));
        const auto apply = [&](std::size_t t, double sign)
        {
            if (chosen[t] < 0)
                return;
            for (std::size_t k = 0; k < K; ++k)
                for (std::size_t j = 0; j < K; ++j)
                    g[k][j] += sign * rot[t] * c[t][static_cast<std::size_t>(chosen[t])][k][j];
        };
        // Co-phasing of a tile with the rest of its user's own term
        const auto rotation_for = [&](std::size_t t, std::size_t o)
        {
            const std::size_t u = options[o].user;
            const cplx own = c[t][o][u][u];
            const double base = std::abs(g[u][u]) > 0.0 ? std::arg(g[u][u]) : 0.0;
            return std::polar(1.0, base - (std::abs(own) > 0.0 ? std::arg(own) : 0.0));
        };
        const auto set_tile = [&](std::size_t t, long o)
        {
            apply(t, -1.0);
            chosen[t] = o;
            if (o >= 0)
            {
                rot[t] = rotation_for(t, static_cast<std::size_t>(o));
                apply(t, 1.0);
            }
        };
        const auto score_with = [&](std::size_t t, std::size_t o)
        {
            const auto saved_g = g;
            const long saved_o = chosen[t];
            const cplx saved_r = rot[t];
            set_tile(t, static_cast<long>(o));
            const double s = sum_rate_of(g, noise_);
            g = saved_g;
            chosen[t] = saved_o;
            rot[t] = saved_r;
            return s;
        };

        for (int pass = 0; pass < 2; ++pass)
            for (std::size_t t = 0; t < T; ++t)
            {
                std::size_t best = 0;
                double best_score = -1.0;
                for (std::size_t o = 0; o < options.size(); ++o)
                {
                    const double s = score_with(t, o);
                    if (s > best_score)
                    {
                        best_score = s;
                        best = o;
                    }
                }
                set_tile(t, static_cast<long>(best));
            }

        // Every user keeps at least one tile
        const auto count_of = [&](std::size_t u)
        {
            return static_cast<std::size_t>(std::count_if(chosen.begin(), chosen.end(), [&](long o)
                                                          { return o >= 0 && options[static_cast<std::size_t>(o)].user == u; }));
        };
        for (std::size_t u = 0; u < K && T >= K; ++u)
        {
            if (count_of(u) > 0)
                continue;
            std::size_t best_t = 0, best_o = 0;
            double best_score = -1.0;
            for (std::size_t t = 0; t < T; ++t)
            {
                if (count_of(options[static_cast<std::size_t>(chosen[t])].user) <= 1)
                    continue;
                for (std::size_t o = 0; o < options.size(); ++o)
                    if (options[o].user == u)
                    {
                        const double s = score_with(t, o);
                        if (s > best_score)
                        {
                            best_score = s;
                            best_t = t;
                            best_o = o;
                        }
                    }
            }
            set_tile(best_t, static_cast<long>(best_o));
        }

        plan.ris_phases.resize(static_cast<Eigen::Index>(N));
        plan.tiles.resize(T);
        for (std::size_t t = 0; t < T; ++t)
        {
            const auto &opt = options[static_cast<std::size_t>(chosen[t])];
            plan.tiles[t] = {opt.user, opt.path};
            const double psi = std::arg(rot[t]);
            for (auto n : tiles_[t])
                plan.ris_phases(static_cast<Eigen::Index>(n)) = wrap_phase(opt.phases[n] + psi);
        }
        plan.objective = sum_rate_of(g, noise_);
        return plan;
    }

    BeamPlan RisSystem::plan(BeamMode mode, double tx_power_w) const
    {
        if (!(tx_power_w >= 0.0))
            throw std::invalid_argument("transmit power must be >= 0");
        if (bs_nlos_allowed(mode) && !bs_ris_nlos_available())
            throw std::invalid_argument("path unavailable");
        if (mu_nlos_allowed(mode))
        {
            bool any = false;
            for (std::size_t u = 0; u < users_.size(); ++u)
                any = any || ris_mu_nlos_available(u);
            if (!any)
                throw std::invalid_argument("path unavailable");
        }

        const RisChannels m = mean();
        const std::size_t K = users_.size();
        BeamPlan best;
        bool have = false;
        for (auto sub : all_beam_modes)
        {
            const bool included = (sub == mode) || sub == BeamMode::LosLos ||
                                  (mode == BeamMode::NlosNlos && (sub == BeamMode::LosNlos || sub == BeamMode::NlosLos));
            if (!included)
                continue;
            const std::size_t combos = bs_nlos_allowed(sub) ? (std::size_t{1} << K) : 1;
            for (std::size_t mask = 0; mask < combos; ++mask)
            {
                std::vector<PathKind> paths(K);
                for (std::size_t k = 0; k < K; ++k)
                    paths[k] = (mask >> k) & 1u ? PathKind::NLOS : PathKind::LOS;
                BeamPlan p = plan_fixed(sub, paths, tx_power_w, m);
                if (!have || p.objective > best.objective)
                {
                    best = std::move(p);
                    have = true;
                }
            }
        }
        best.mode = mode;
        return best;
    }

    ComplexMatrix RisSystem::end_to_end(const RisChannels &ch, const BeamPlan &plan, std::size_t user) const
    {
        return end_to_end_channel(ch.H_d.at(user), ch.H_r.at(user), ch.H_t, omega_, plan.ris_phases);
    }

    std::vector<double> RisSystem::sinr(const RisChannels &ch, const BeamPlan &plan) const
    {
        const std::size_t K = users_.size();
        std::vector<double> out(K);
        for (std::size_t k = 0; k < K; ++k)
        {
            const ComplexMatrix h = end_to_end(ch, plan, k);
            double signal = 0.0, interference = noise_;
            for (std::size_t j = 0; j < K; ++j)
            {
                const double p = std::norm((h * plan.bs_weights[j])(0));
                if (j == k)
                    signal = p;
                else
                    interference += p;
            }
            out[k] = signal / interference;
        }
        return out;
    }

    SumRateResult RisSystem::evaluate(const BeamPlan &plan, double tx_power_w, const std::vector<RisChannels> &draws) const
    {
        if (draws.empty())
            throw std::invalid_argument("need at least one channel draw");
        BeamPlan scaled = plan;
        double total = 0.0;
        for (const auto &w : plan.bs_weights)
            total += w.squaredNorm();
        for (auto &w : scaled.bs_weights)
            w *= total > 0.0 ? std::sqrt(tx_power_w / total) : 0.0;

        SumRateResult r;
        r.tx_power_dbm = tx_power_w > 0.0 ? 10.0 * std::log10(tx_power_w) + 30.0 : -std::numeric_limits<double>::infinity();
        r.per_user_sinr.assign(users_.size(), 0.0);
        std::vector<double> rates(draws.size());
        for (std::size_t i = 0; i < draws.size(); ++i)
        {
            const auto s = sinr(draws[i], scaled);
            double rate = 0.0;
            for (std::size_t k = 0; k < s.size(); ++k)
            {
                rate += std::log2(1.0 + s[k]);
                r.per_user_sinr[k] += s[k] / static_cast<double>(draws.size());
            }
            rates[i] = rate;
        }
        double m = 0.0;
        for (double x : rates)
            m += x;
        m /= static_cast<double>(rates.size());
        double v = 0.0;
        for (double x : rates)
            v += (x - m) * (x - m);
        r.sum_rate = m;
        r.sum_rate_std = rates.size() > 1 ? std::sqrt(v / static_cast<double>(rates.size() - 1)) : 0.0;
        return r;
    }

    SumRateResult RisSystem::evaluate(const BeamPlan &plan, double tx_power_w, std::size_t n_draws, std::uint64_t base_seed) const
    {
        std::vector<RisChannels> draws(n_draws);
        parallel_for(n_draws, threads_, [&](std::size_t i)
                     { draws[i] = draw(derive_seed(base_seed, i)); });
        return evaluate(plan, tx_power_w, draws);
    }

    BeamPlan plan_beams(const ScenarioConfig &scenario, BeamMode mode, double tx_power_w)
    {
        return RisSystem(scenario).plan(mode, tx_power_w);
    }

    ComplexMatrix end_to_end_channel(const ScenarioConfig &scenario, const BeamPlan &plan, std::size_t user, std::uint64_t seed)
    {
        const RisSystem sys(scenario);
        return sys.end_to_end(sys.draw(seed), plan, user);
    }

    SumRateResult evaluate_sum_rate(const ScenarioConfig &scenario, const BeamPlan &plan, double tx_power_w, std::size_t n_draws)
    {
        return RisSystem(scenario).evaluate(plan, tx_power_w, n_draws, scenario.seed);
    }

    std::optional<double> saturation_threshold(const std::vector<double> &power_dbm, const std::vector<double> &rate, double tolerance)
    {
        if (power_dbm.size() != rate.size() || rate.size() < 4)
            return std::nullopt;
        const std::size_t n = rate.size();
        // Last index whose doubling step gains at least "tolerance"
        std::optional<std::size_t> last_rise;
        for (std::size_t i = 0; i + 1 < n; ++i)
            if (rate[i + 1] - rate[i] >= tolerance)
                last_rise = i;
        if (!last_rise)
            return std::nullopt;
        const std::size_t start = *last_rise + 1;
        if (start + 2 >= n) // need at least two flat doubling steps
            return std::nullopt;
        return power_dbm[start];
    }

    std::vector<double> doubling_sweep(double lo_dbm, double hi_dbm)
    {
        const double step = 10.0 * std::log10(2.0);
        std::vector<double> out;
        for (std::size_t i = 0;; ++i)
        {
            const double p = lo_dbm + static_cast<double>(i) * step;
            if (p > hi_dbm + 1e-9)
                break;
            out.push_back(p);
        }
        return out;
    }

    ScenarioConfig two_user_walls_scenario(std::size_t ris_side)
    {
        ScenarioConfig s;
        s.carrier_hz = 28e9;
        const double lambda = s.wavelength();

        s.arrays.push_back({"bs", ArrayGeometry::upa(Vec3(40, 40, 5), Vec3::UnitX(), Vec3::UnitZ(), 4, 4, 0.5 * lambda)});
        s.arrays.push_back({"mu1", ArrayGeometry::single(Vec3(23, -23, -5))});
        s.arrays.push_back({"mu2", ArrayGeometry::single(Vec3(28, -28, -5))});

        const double zeta = zeta_for_specular_loss(lambda, -61.0, 3.0);
        PlanarSurfaceSpec wall1;
        wall1.name = "wall1";
        wall1.pose = PlanePose::make(Vec3(45, 35, 0), -Vec3::UnitX(), Vec3::UnitY());
        wall1.length_u = 10.0;
        wall1.length_v = 10.0;
        wall1.zeta = zeta;
        PlanarSurfaceSpec wall2 = wall1;
        wall2.name = "wall2";
        wall2.pose = PlanePose::make(Vec3(30, -22, 0), -Vec3::UnitX(), Vec3::UnitY());
        s.surfaces = {wall1, wall2};

        RisConfig ris;
        ris.n_y = ris_side;
        ris.n_z = ris_side;
        ris.n_tiles = std::min<std::size_t>(10, ris_side);
        s.ris = ris;
        s.arrays.push_back({"ris", ris.geometry(lambda)});

        const auto &e = s.ris_experiment;
        s.links.push_back({"bs-ris", "bs", "ris", e.bs_ris, e.n_scatterers, {}, {}, true});
        for (const auto &u : e.users)
        {
            s.links.push_back({"bs-" + u, "bs", u, e.bs_mu, e.n_scatterers, {}, {}, true});
            s.links.push_back({"ris-" + u, "ris", u, e.ris_mu, e.n_scatterers, {}, {}, true});
        }
        return s;
    }
}
