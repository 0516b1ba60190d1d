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

#include "nfchan/experiments.hpp"
#include "nfchan/csv.hpp"
#include "nfchan/hf_oracle.hpp"
#include "nfchan/parallel.hpp"
#include "nfchan/ris_sim.hpp"
#include "nfchan/stat_model.hpp"
#include "nfchan/stats.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace nfchan
{
    bool ExperimentReport::passed() const
    {
        return std::all_of(checks.begin(), checks.end(), [](const Check &c)
                           { return c.pass; });
    }

    const Check &ExperimentReport::check(const std::string &name) const
    {
        for (const auto &c : checks)
            if (c.name == name)
                return c;
        throw std::out_of_range("no check named '" + name + "'");
    }

    double ExperimentReport::value(const std::string &summary_key) const
    {
        for (const auto &[k, v] : summary)
            if (k == summary_key)
                return v;
        throw std::out_of_range("no summary value '" + summary_key + "'");
    }

    std::string ExperimentReport::to_json() const
    {
        nlohmann::ordered_json j;
        j["experiment"] = id;
        j["config_sha256"] = digest;
        j["seed"] = seed;
        j["outputs"] = outputs;
        auto &s = j["summary"];
        s = nlohmann::ordered_json::object();
        for (const auto &[k, v] : summary)
            s[k] = format_double(v);
        auto &c = j["checks"];
        c = nlohmann::ordered_json::array();
        for (const auto &x : checks)
            c.push_back({{"name", x.name}, {"value", format_double(x.value)}, {"tolerance", format_double(x.tolerance)}, {"pass", x.pass}, {"detail", x.detail}});
        j["notes"] = notes;
        j["passed"] = passed();
        return j.dump(2) + "\n";
    }

    std::string resolve_out_dir(const std::optional<std::string> &flag)
    {
        if (flag && !flag->empty())
            return *flag;
        if (const char *env = std::getenv("NFCHAN_OUT_DIR"); env && *env)
            return env;
        return ".";
    }

    namespace
    {
        struct Context
        {
            const Config &config;
            const RunOptions &options;
            ExperimentReport report;

            Context(const Config &c, const RunOptions &o, const std::string &id, std::size_t realizations)
                : config(c), options(o)
            {
                report.id = id;
                report.seed = o.seed.value_or(c.seed);
                report.digest = config_digest(c, report.seed, o.realizations.value_or(realizations));
            }

            std::uint64_t seed() const { return report.seed; }

            std::size_t count(std::size_t configured) const { return options.realizations.value_or(configured); }

            void metadata(CsvWriter &csv) const
            {
                csv.comment("experiment", report.id);
                csv.comment("config_sha256", report.digest);
                csv.comment("seed", std::to_string(report.seed));
            }

            void write(const std::string &name, const std::string &content)
            {
                const std::filesystem::path dir(options.out_dir);
                std::filesystem::create_directories(dir);
                const auto path = dir / name;
                std::ofstream out(path, std::ios::binary);
                if (!out)
                    throw std::runtime_error("cannot write '" + path.string() + "'");
                out << content;
                report.outputs.push_back(path.string());
            }

            void add_check(const std::string &name, double value, double tol, bool pass, const std::string &detail = "")
            {
                report.checks.push_back({name, value, tol, pass, detail});
            }

            ExperimentReport finish()
            {
                const std::string report_name = report.id + "_report.json";
                report.outputs.push_back((std::filesystem::path(options.out_dir) / report_name).string());
                const std::string text = report.to_json();
                report.outputs.pop_back();
                write(report_name, text);
                return report;
            }
        };

        PlanarSurfaceSpec with_roughness(PlanarSurfaceSpec s, double kappa_sigma_z, double kappa)
        {
            s.sigma_z = kappa_sigma_z / kappa;
            return s;
        }

        std::vector<cplx> column(const std::vector<ComplexMatrix> &mats, Eigen::Index m, Eigen::Index n)
        {
            std::vector<cplx> out;
            out.reserve(mats.size());
            for (const auto &M : mats)
                out.push_back(M(m, n));
            return out;
        }

        cplx complex_mean(const std::vector<cplx> &z)
        {
            return pairwise_sum(z.data(), z.size()) / static_cast<double>(z.size());
        }
    }

    ExperimentReport run_verify_mean(const Config &config, const RunOptions &options)
    {
        const VerifyMeanConfig v = config.verify_mean.value_or(default_verify_mean(config.wavelength()));
        Context ctx(config, options, "verify_mean", v.realizations);
        const double lambda = config.wavelength(), kappa = wavenumber_of(lambda);
        const std::size_t R = ctx.count(v.realizations);
        if (R == 0)
            throw std::invalid_argument("realizations must be >= 1");

        PlanarSurfaceSpec flat = v.surface;
        flat.sigma_z = 0.0;
        const cplx c0 = hf_flat(flat, v.tx, v.rx, lambda, options.threads);
        const double ratio_inf = std::sqrt(diffuse_power_iid(flat, v.tx, v.rx, lambda)) / std::abs(c0);

        std::ostringstream out;
        CsvWriter csv(out);
        ctx.metadata(csv);
        csv.comment("realizations", std::to_string(R));
        csv.comment("ratio_inf", format_double(ratio_inf));
        csv.header({"kappa_sigma_z", "g", "one_re", "one_im", "one_abs", "avg_re", "avg_im", "avg_mean_abs", "avg_abs",
                    "theory_mean", "theory_abs", "mean_err", "abs_rel_err"});

        double worst_mean_rel = 0.0, worst_mean_abs = 0.0, worst_power = 0.0;
        bool power_ok = true;
        for (double ks : v.kappa_sigma_z.values())
        {
            const PlanarSurfaceSpec s = with_roughness(v.surface, ks, kappa);
            const double g = deterministic_component(s, {v.tx}, {v.rx}, lambda).regime.g;
            const auto mats = monte_carlo_channel(s, {v.tx}, {v.rx}, lambda, R, ctx.seed(), options.threads);
            std::vector<cplx> z = column(mats, 0, 0);
            std::vector<double> mag(z.size());
            for (std::size_t i = 0; i < z.size(); ++i)
            {
                z[i] /= c0;
                mag[i] = std::abs(z[i]);
            }
            const cplx avg = complex_mean(z);
            const double avg_abs = pairwise_sum(mag.data(), mag.size()) / static_cast<double>(mag.size());
            const double th_mean = std::exp(-0.5 * g);
            const double th_abs = total_power_ratio(g, ratio_inf);

            const double mean_err = std::abs(std::abs(avg) - th_mean);
            if (th_mean >= v.mean_abs_below)
            {
                worst_mean_rel = std::max(worst_mean_rel, mean_err / th_mean);
            }
            else
            {
                worst_mean_abs = std::max(worst_mean_abs, mean_err);
            }
            const double abs_err = std::abs(avg_abs - th_abs) / th_abs;
            worst_power = std::max(worst_power, abs_err);
            power_ok = power_ok && abs_err <= v.power_tol_rel;

            csv.row(ks, g, z[0].real(), z[0].imag(), mag[0], avg.real(), avg.imag(), std::abs(avg), avg_abs, th_mean, th_abs, mean_err, abs_err);
        }
        ctx.write("verify_mean.csv", out.str());
        ctx.report.summary = {{"ratio_inf", ratio_inf}, {"flat_abs", std::abs(c0)}, {"max_mean_rel_err", worst_mean_rel},
                              {"max_mean_abs_err", worst_mean_abs}, {"max_power_rel_err", worst_power}};
        ctx.add_check("mean_decay_rel", worst_mean_rel, v.mean_tol_rel, worst_mean_rel <= v.mean_tol_rel,
                      "| |E z| - e^{-g/2} | / e^{-g/2} where e^{-g/2} >= " + format_double(v.mean_abs_below));
        ctx.add_check("mean_decay_abs", worst_mean_abs, v.mean_tol_abs, worst_mean_abs <= v.mean_tol_abs,
                      "| |E z| - e^{-g/2} | where e^{-g/2} < " + format_double(v.mean_abs_below));
        ctx.add_check("power_heuristic", worst_power, v.power_tol_rel, power_ok, "| E|z| - closed form | / closed form");
        return ctx.finish();
    }

    ExperimentReport run_verify_distribution(const Config &config, const RunOptions &options)
    {
        const VerifyDistributionConfig v = config.verify_distribution.value_or(default_verify_distribution(config.wavelength()));
        Context ctx(config, options, "verify_distribution", v.samples);
        const double lambda = config.wavelength(), kappa = wavenumber_of(lambda);
        const std::size_t R = ctx.count(v.samples);
        if (R < 8)
            throw std::invalid_argument("distribution check needs at least 8 samples");

        PlanarSurfaceSpec flat = v.surface;
        flat.sigma_z = 0.0;
        const cplx c0 = hf_flat(flat, v.tx, v.rx, lambda, options.threads);

        std::ostringstream samples_out, hist_out;
        CsvWriter samples(samples_out), hist(hist_out);
        ctx.metadata(samples);
        ctx.metadata(hist);
        samples.header({"kappa_sigma_z", "seed", "re", "im"});
        hist.header({"kappa_sigma_z", "part", "bin_center", "density", "normal_density"});

        for (double ks : v.kappa_sigma_z)
        {
            const PlanarSurfaceSpec s = with_roughness(v.surface, ks, kappa);
            const auto mats = monte_carlo_channel(s, {v.tx}, {v.rx}, lambda, R, ctx.seed(), options.threads);
            std::vector<cplx> z = column(mats, 0, 0);
            for (auto &x : z)
                x /= c0;
            const cplx m = complex_mean(z);
            std::vector<double> re(z.size()), im(z.size());
            for (std::size_t i = 0; i < z.size(); ++i)
            {
                re[i] = (z[i] - m).real();
                im[i] = (z[i] - m).imag();
                samples.row(ks, static_cast<std::int64_t>(ctx.seed() + i), re[i], im[i]);
            }
            const std::string tag = "kappa_sigma_z=" + format_double(ks);
            const double spread = std::max(stddev(re), stddev(im));
            if (!(spread > 1e-12))
            {
                ctx.report.notes.push_back(tag + ": degenerate (zero-variance) samples, normality test skipped");
                continue;
            }
            for (const auto &[part, data] : {std::pair<const char *, const std::vector<double> *>{"re", &re}, {"im", &im}})
            {
                const auto ad = anderson_darling_normal(*data);
                ctx.report.summary.push_back({tag + " " + part + " A2*", ad.a2_star});
                ctx.report.summary.push_back({tag + " " + part + " p", ad.p_value});
                ctx.add_check("normality " + tag + " " + part, ad.a2_star, ad.critical_1pct, ad.normal_at_1pct,
                              "Anderson-Darling A*^2 below the 1% critical value");

                const double sd = stddev(*data);
                const double lo = -4.0 * sd, width = 8.0 * sd / static_cast<double>(v.bins);
                std::vector<std::size_t> counts(v.bins, 0);
                for (double x : *data)
                {
                    const auto b = static_cast<long>(std::floor((x - lo) / width));
                    if (b >= 0 && b < static_cast<long>(v.bins))
                        ++counts[static_cast<std::size_t>(b)];
                }
                for (std::size_t b = 0; b < v.bins; ++b)
                {
                    const double x = lo + (static_cast<double>(b) + 0.5) * width;
                    const double density = static_cast<double>(counts[b]) / (static_cast<double>(data->size()) * width);
                    const double normal = std::exp(-0.5 * x * x / (sd * sd)) / (sd * std::sqrt(2.0 * pi));
                    hist.row(ks, std::string_view(part), x, density, normal);
                }
            }
        }
        ctx.write("verify_distribution_samples.csv", samples_out.str());
        ctx.write("verify_distribution_hist.csv", hist_out.str());
        return ctx.finish();
    }

    ExperimentReport run_verify_correlation(const Config &config, const RunOptions &options)
    {
        const VerifyCorrelationConfig v = config.verify_correlation.value_or(default_verify_correlation(config.wavelength()));
        Context ctx(config, options, "verify_correlation", v.realizations);
        const double lambda = config.wavelength(), kappa = wavenumber_of(lambda);
        const std::size_t R = ctx.count(v.realizations);
        if (R < 2)
            throw std::invalid_argument("correlation check needs at least 2 realizations");
        const PlanarSurfaceSpec s = with_roughness(v.surface, v.kappa_sigma_z, kappa);
        const PlanePose &pose = s.pose;

        std::vector<double> d(v.separations);
        for (std::size_t i = 0; i < d.size(); ++i)
            d[i] = v.max_separation_wavelengths * lambda * static_cast<double>(i) / static_cast<double>(d.size() - 1);

        std::ostringstream out;
        CsvWriter csv(out);
        ctx.metadata(csv);
        csv.comment("realizations", std::to_string(R));
        csv.header({"rx_height_m", "placement", "d_over_lambda", "theta_1", "theta_2", "theta_c", "closed_form",
                    "numeric_isotropic", "numeric_planar", "empirical"});

        double worst_cn = 0.0, worst_emp = 0.0, worst_order = 0.0;
        for (std::size_t hi = 0; hi < v.rx_height_m.size(); ++hi)
        {
            const double h = v.rx_height_m[hi];
            const Vec3 c = pose.origin() + h * pose.normal();
            const auto domain = illuminated_nodes(s, v.tx, c, 0.0, lambda);
            const std::array<std::pair<const char *, Vec3>, 2> placements{{{"aligned", pose.normal()}, {"perpendicular", pose.axis_u()}}};

            // Receive points: common reference antenna, then the moving antenna of each placement
            std::vector<Vec3> rx{c};
            for (const auto &pl : placements)
                for (std::size_t i = 1; i < d.size(); ++i)
                    rx.push_back(c + d[i] * pl.second);
            const auto mats = monte_carlo_channel(s, {v.tx}, rx, lambda, R, derive_seed(ctx.seed(), hi), options.threads);

            std::vector<cplx> mean_h(rx.size());
            for (std::size_t m = 0; m < rx.size(); ++m)
                mean_h[m] = complex_mean(column(mats, static_cast<Eigen::Index>(m), 0));
            const auto empirical = [&](std::size_t m)
            {
                cplx cross{};
                double p0 = 0.0, p1 = 0.0;
                for (const auto &M : mats)
                {
                    const cplx a = M(0, 0) - mean_h[0], b = M(static_cast<Eigen::Index>(m), 0) - mean_h[m];
                    cross += a * std::conj(b);
                    p0 += std::norm(a);
                    p1 += std::norm(b);
                }
                return std::abs(cross) / std::sqrt(p0 * p1);
            };

            std::array<std::vector<double>, 2> closed;
            for (std::size_t p = 0; p < placements.size(); ++p)
            {
                const Vec3 axis = placements[p].second;
                for (std::size_t i = 0; i < d.size(); ++i)
                {
                    const Vec3 moving = c + d[i] * axis;
                    // The d = 0 frame takes the limiting orientation of the placement
                    const LocalFrame frame = LocalFrame::make(0.5 * (c + moving), axis);
                    const CorrelationSpec sector = effective_sector(domain, frame);
                    const double cf = std::abs(correlation_sinc(d[i], sector, lambda));
                    const auto iso = sector_nodes(frame, 1.0, sector);
                    const double num_iso = std::abs(correlation_numeric(iso, {v.tx, v.tx}, {c, moving}, lambda));
                    const double num_pl = std::abs(correlation_numeric(domain, {v.tx, v.tx}, {c, moving}, lambda));
                    const double emp = i == 0 ? 1.0 : empirical(1 + p * (d.size() - 1) + (i - 1));
                    closed[p].push_back(cf);
                    worst_cn = std::max(worst_cn, std::abs(cf - num_iso));
                    worst_emp = std::max(worst_emp, std::abs(emp - cf));
                    csv.row(h, std::string_view(placements[p].first), d[i] / lambda, sector.theta_1, sector.theta_2,
                            sector.theta_c(), cf, num_iso, num_pl, emp);
                }
            }
            // Main lobe of the perpendicular curve: up to its first minimum
            std::size_t lobe = 1;
            while (lobe < d.size() && closed[1][lobe] < closed[1][lobe - 1])
                ++lobe;
            for (std::size_t i = 0; i < lobe; ++i)
                worst_order = std::max(worst_order, closed[1][i] - closed[0][i]);
        }
        ctx.write("verify_correlation.csv", out.str());
        ctx.report.summary = {{"max_closed_vs_numeric", worst_cn}, {"max_empirical_vs_closed", worst_emp}, {"max_perpendicular_excess", worst_order}};
        ctx.add_check("closed_vs_numeric", worst_cn, v.closed_vs_numeric_tol, worst_cn <= v.closed_vs_numeric_tol,
                      "sinc vs projected-path quadrature on the isotropic sector");
        ctx.add_check("empirical_vs_closed", worst_emp, v.empirical_tol, worst_emp <= v.empirical_tol,
                      "oracle sample correlation vs sinc, max over d");
        ctx.add_check("aligned_ge_perpendicular", worst_order, 0.0, worst_order <= 0.0,
                      "max (perpendicular - aligned) on the perpendicular main lobe");
        return ctx.finish();
    }

    ExperimentReport run_sum_rate(const Config &config, const RunOptions &options)
    {
        ScenarioConfig scenario = config.scenario.value_or(two_user_walls_scenario());
        if (!scenario.ris)
            throw std::invalid_argument("sum-rate needs a scenario with a RIS");
        scenario.threads = options.threads;
        Context ctx(config, options, "sum_rate", scenario.ris_experiment.draws);
        const std::size_t n_draws = ctx.count(scenario.ris_experiment.draws);
        if (n_draws == 0)
            throw std::invalid_argument("draws must be >= 1");

        const RisSystem sys(scenario);
        std::vector<double> powers = config.sum_rate.tx_power_dbm;
        if (powers.empty())
            powers = scenario.ris_experiment.tx_power_dbm;
        if (powers.empty())
            powers = doubling_sweep(0.0, scenario.ris_experiment.high_power_dbm + 12.0);

        std::vector<RisChannels> draws(n_draws);
        parallel_for(n_draws, options.threads, [&](std::size_t i)
                     { draws[i] = sys.draw(derive_seed(ctx.seed(), i)); });

        // Sweep points plus the high-power operating point, all four modes
        std::vector<double> points = powers;
        points.push_back(scenario.ris_experiment.high_power_dbm);
        constexpr std::size_t M = std::size(all_beam_modes);
        std::vector<SumRateResult> results(points.size() * M);
        parallel_for(results.size(), options.threads, [&](std::size_t idx)
                     {
            const double p_w = db_to_watts(points[idx / M]);
            const BeamPlan plan = sys.plan(all_beam_modes[idx % M], p_w);
            results[idx] = sys.evaluate(plan, p_w, draws);
            results[idx].tx_power_dbm = points[idx / M]; });

        std::ostringstream out;
        CsvWriter csv(out);
        ctx.metadata(csv);
        csv.comment("draws", std::to_string(n_draws));
        std::vector<std::string> header{"tx_power_dbm", "mode", "mean_sum_rate", "std_sum_rate"};
        for (const auto &u : scenario.ris_experiment.users)
            header.push_back("sinr_db_" + u);
        csv.header(header);
        std::map<BeamMode, std::vector<double>> curves;
        for (std::size_t pi_ = 0; pi_ < powers.size(); ++pi_)
            for (std::size_t m = 0; m < M; ++m)
            {
                const auto &r = results[pi_ * M + m];
                curves[all_beam_modes[m]].push_back(r.sum_rate);
                out << format_double(r.tx_power_dbm) << ',' << to_string(all_beam_modes[m]) << ',' << format_double(r.sum_rate) << ','
                    << format_double(r.sum_rate_std);
                for (double sinr : r.per_user_sinr)
                    out << ',' << format_double(linear_to_db(sinr));
                out << '\n';
            }
        ctx.write("sum_rate.csv", out.str());

        const auto high = [&](BeamMode m)
        {
            return results[powers.size() * M + static_cast<std::size_t>(m)].sum_rate;
        };
        const double nn = high(BeamMode::NlosNlos), ln = high(BeamMode::LosNlos), nl = high(BeamMode::NlosLos), ll = high(BeamMode::LosLos);
        for (auto m : all_beam_modes)
            ctx.report.summary.push_back({"sum_rate@" + format_double(scenario.ris_experiment.high_power_dbm) + "dBm " + to_string(m), high(m)});
        const auto threshold = saturation_threshold(powers, curves[BeamMode::LosLos], config.sum_rate.saturation_bits);
        ctx.report.summary.push_back({"LOS-LOS saturation threshold dBm", threshold.value_or(std::nan(""))});

        ctx.add_check("(n)LOS-(n)LOS >= LOS-(n)LOS", nn - ln, 0.0, nn >= ln);
        ctx.add_check("LOS-(n)LOS >= LOS-LOS", ln - ll, 0.0, ln >= ll);
        const double rel = ll > 0.0 ? std::abs(nl - ll) / ll : std::abs(nl - ll);
        ctx.add_check("(n)LOS-LOS within tolerance of LOS-LOS", rel, config.sum_rate.ordering_rel_tol, rel <= config.sum_rate.ordering_rel_tol,
                      "relative difference at the high-power point");
        ctx.add_check("LOS-LOS saturation", threshold.value_or(std::nan("")), config.sum_rate.saturation_bits, threshold.has_value(),
                      "every doubling above the threshold gains less than the tolerance [bits/s/Hz]");
        const double rel_ln = ll > 0.0 ? std::abs(ln - ll) / ll : std::abs(ln - ll);
        ctx.report.summary.push_back({"|LOS-(n)LOS - LOS-LOS| / LOS-LOS", rel_ln});
        return ctx.finish();
    }

    ExperimentReport run_oracle(const Config &config, const RunOptions &options)
    {
        OracleConfig o;
        if (config.oracle)
            o = *config.oracle;
        else
            o.surface = default_verify_mean(config.wavelength()).surface;
        Context ctx(config, options, "oracle", o.realizations);
        const std::size_t R = ctx.count(o.realizations);
        const auto mats = monte_carlo_channel(o.surface, o.tx, o.rx, config.wavelength(), R, ctx.seed(), options.threads);

        std::ostringstream out;
        CsvWriter csv(out);
        ctx.metadata(csv);
        csv.header({"seed", "m", "n", "re", "im"});
        for (const auto &s : to_samples(mats, ctx.seed()))
            csv.row(static_cast<std::int64_t>(s.realization_seed), static_cast<std::int64_t>(s.rx_index),
                    static_cast<std::int64_t>(s.tx_index), s.value.real(), s.value.imag());
        ctx.write("oracle.csv", out.str());
        ctx.report.summary = {{"samples", static_cast<double>(R * o.tx.size() * o.rx.size())}};
        return ctx.finish();
    }

    ExperimentReport run_experiment(const std::string &name, const Config &config, const RunOptions &options)
    {
        if (name == "verify-mean")
            return run_verify_mean(config, options);
        if (name == "verify-distribution")
            return run_verify_distribution(config, options);
        if (name == "verify-correlation")
            return run_verify_correlation(config, options);
        if (name == "sum-rate")
            return run_sum_rate(config, options);
        if (name == "oracle")
            return run_oracle(config, options);
        throw std::invalid_argument("unknown experiment '" + name + "'");
    }
}
