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

#include "nfchan/config.hpp"
#include "nfchan/ris_sim.hpp"

#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <stdexcept>

namespace nfchan
{
    using json = nlohmann::json;

    std::vector<double> Sweep::values() const
    {
        if (!(step > 0.0) || !std::isfinite(start) || !std::isfinite(stop) || stop < start)
            throw std::invalid_argument("invalid sweep");
        std::vector<double> out;
        for (std::size_t i = 0;; ++i)
        {
            const double v = start + static_cast<double>(i) * step;
            if (v > stop + 1e-9 * std::max(1.0, std::abs(stop)))
                break;
            out.push_back(v);
        }
        return out;
    }

    namespace
    {
        [[noreturn]] void fail(const std::string &path, const std::string &what)
        {
            throw std::invalid_argument("config: '" + path + "': " + what);
        }

        void check_keys(const json &j, const std::string &path, std::initializer_list<const char *> allowed)
        {
            if (!j.is_object())
                fail(path, "expected an object");
            for (const auto &[key, value] : j.items())
                if (std::none_of(allowed.begin(), allowed.end(), [&](const char *a)
                                 { return key == a; }))
                    fail(path + "." + key, "unknown key");
        }

        template <typename T>
        T get(const json &j, const std::string &path, const char *key, T fallback)
        {
            if (!j.contains(key))
                return fallback;
            try
            {
                return j.at(key).get<T>();
            }
            catch (const json::exception &)
            {
                fail(path + "." + key, "wrong type");
            }
        }

        Vec3 get_vec(const json &j, const std::string &path, const char *key, const Vec3 &fallback)
        {
            if (!j.contains(key))
                return fallback;
            const auto &v = j.at(key);
            if (!v.is_array() || v.size() != 3 || !std::all_of(v.begin(), v.end(), [](const json &x)
                                                                { return x.is_number(); }))
                fail(path + "." + key, "expected [x, y, z]");
            return Vec3(v[0].get<double>(), v[1].get<double>(), v[2].get<double>());
        }

        std::vector<Vec3> get_points(const json &j, const std::string &path, const char *key, const std::vector<Vec3> &fallback)
        {
            if (!j.contains(key))
                return fallback;
            const auto &v = j.at(key);
            if (!v.is_array() || v.empty())
                fail(path + "." + key, "expected a non-empty list");
            // A single point may be given directly
            if (v[0].is_number())
                return {get_vec(j, path, key, Vec3::Zero())};
            std::vector<Vec3> out;
            for (std::size_t i = 0; i < v.size(); ++i)
            {
                json wrap = {{"p", v[i]}};
                out.push_back(get_vec(wrap, path + "." + key + "[" + std::to_string(i) + "]", "p", Vec3::Zero()));
            }
            return out;
        }

        Sweep get_sweep(const json &j, const std::string &path, const char *key, const Sweep &fallback)
        {
            if (!j.contains(key))
                return fallback;
            const auto &s = j.at(key);
            const std::string p = path + "." + key;
            check_keys(s, p, {"start", "stop", "step"});
            Sweep out{get(s, p, "start", fallback.start), get(s, p, "stop", fallback.stop), get(s, p, "step", fallback.step)};
            out.values();
            return out;
        }

        PlanarSurfaceSpec parse_surface(const json &j, const std::string &path, double wavelength, PlanarSurfaceSpec s)
        {
            check_keys(j, path, {"name", "origin_m", "normal", "axis_u", "length_u_m", "length_v_m", "sigma_z_m", "zeta",
                                 "specular_loss_db", "beta_ref_db", "grid_step_m", "correlation_length_m"});
            s.name = get(j, path, "name", s.name);
            try
            {
                s.pose = PlanePose::make(get_vec(j, path, "origin_m", s.pose.origin()), get_vec(j, path, "normal", s.pose.normal()),
                                         get_vec(j, path, "axis_u", s.pose.axis_u()));
            }
            catch (const std::invalid_argument &e)
            {
                fail(path, e.what());
            }
            s.length_u = get(j, path, "length_u_m", s.length_u);
            s.length_v = get(j, path, "length_v_m", s.length_v);
            s.sigma_z = get(j, path, "sigma_z_m", s.sigma_z);
            s.grid_step = get(j, path, "grid_step_m", s.grid_step);
            s.correlation_length = get(j, path, "correlation_length_m", s.correlation_length);
            if (j.contains("zeta") && j.contains("specular_loss_db"))
                fail(path, "give either zeta or specular_loss_db");
            s.zeta = get(j, path, "zeta", s.zeta);
            if (j.contains("specular_loss_db"))
                s.zeta = zeta_for_specular_loss(wavelength, get(j, path, "beta_ref_db", -61.0), get(j, path, "specular_loss_db", 0.0));
            try
            {
                s.validate();
            }
            catch (const std::invalid_argument &e)
            {
                fail(path, e.what());
            }
            return s;
        }

        LinkBudget parse_budget(const json &j, const std::string &path, LinkBudget b)
        {
            check_keys(j, path, {"beta_ref_db", "path_loss_exponent", "ricean_k_db", "blockage_db"});
            b.beta_ref_db = get(j, path, "beta_ref_db", b.beta_ref_db);
            b.path_loss_exponent = get(j, path, "path_loss_exponent", b.path_loss_exponent);
            b.ricean_k_db = get(j, path, "ricean_k_db", b.ricean_k_db);
            b.blockage_db = get(j, path, "blockage_db", b.blockage_db);
            try
            {
                b.validate();
            }
            catch (const std::invalid_argument &e)
            {
                fail(path, e.what());
            }
            return b;
        }

        NamedArray parse_array(const json &j, const std::string &path, double wavelength)
        {
            check_keys(j, path, {"name", "position_m", "elements_m", "upa"});
            NamedArray a;
            a.name = get<std::string>(j, path, "name", "");
            if (a.name.empty())
                fail(path, "array needs a name");
            const int forms = static_cast<int>(j.contains("position_m")) + static_cast<int>(j.contains("elements_m")) + static_cast<int>(j.contains("upa"));
            if (forms != 1)
                fail(path, "give exactly one of position_m, elements_m, upa");
            if (j.contains("position_m"))
                a.geometry = ArrayGeometry::single(get_vec(j, path, "position_m", Vec3::Zero()));
            else if (j.contains("elements_m"))
                a.geometry = ArrayGeometry(get_points(j, path, "elements_m", {}));
            else
            {
                const auto &u = j.at("upa");
                const std::string p = path + ".upa";
                check_keys(u, p, {"center_m", "axis_a", "axis_b", "n_a", "n_b", "spacing_m"});
                const double s = get(u, p, "spacing_m", 0.0);
                try
                {
                    a.geometry = ArrayGeometry::upa(get_vec(u, p, "center_m", Vec3::Zero()), get_vec(u, p, "axis_a", Vec3::UnitX()),
                                                    get_vec(u, p, "axis_b", Vec3::UnitZ()), get(u, p, "n_a", std::size_t{1}),
                                                    get(u, p, "n_b", std::size_t{1}), s > 0.0 ? s : 0.5 * wavelength);
                }
                catch (const std::invalid_argument &e)
                {
                    fail(p, e.what());
                }
            }
            return a;
        }

        ScenarioConfig parse_scenario(const json &j, const std::string &path, double carrier_hz)
        {
            check_keys(j, path, {"preset", "ris_side", "arrays", "surfaces", "links", "noise", "ris", "ris_experiment", "threads"});
            ScenarioConfig s;
            const std::string preset = get<std::string>(j, path, "preset", "");
            if (preset == "two-user-walls")
                s = two_user_walls_scenario(get(j, path, "ris_side", std::size_t{32}));
            else if (!preset.empty())
                fail(path + ".preset", "unknown preset '" + preset + "'");
            s.carrier_hz = carrier_hz;
            const double lambda = s.wavelength();

            if (j.contains("arrays"))
            {
                s.arrays.clear();
                for (std::size_t i = 0; i < j.at("arrays").size(); ++i)
                    s.arrays.push_back(parse_array(j.at("arrays")[i], path + ".arrays[" + std::to_string(i) + "]", lambda));
            }
            if (j.contains("surfaces"))
            {
                s.surfaces.clear();
                for (std::size_t i = 0; i < j.at("surfaces").size(); ++i)
                    s.surfaces.push_back(parse_surface(j.at("surfaces")[i], path + ".surfaces[" + std::to_string(i) + "]", lambda, {}));
            }
            if (j.contains("noise"))
            {
                const auto &n = j.at("noise");
                const std::string p = path + ".noise";
                check_keys(n, p, {"bandwidth_hz", "n0_dbm_per_hz", "noise_figure_db"});
                s.noise.bandwidth_hz = get(n, p, "bandwidth_hz", s.noise.bandwidth_hz);
                s.noise.n0_dbm_per_hz = get(n, p, "n0_dbm_per_hz", s.noise.n0_dbm_per_hz);
                s.noise.noise_figure_db = get(n, p, "noise_figure_db", s.noise.noise_figure_db);
            }
            if (j.contains("ris"))
            {
                const auto &r = j.at("ris");
                const std::string p = path + ".ris";
                check_keys(r, p, {"center_m", "normal", "axis_y", "n_y", "n_z", "element_spacing_m", "unit_cell_area_m2", "n_tiles"});
                RisConfig ris = s.ris.value_or(RisConfig{});
                ris.center = get_vec(r, p, "center_m", ris.center);
                ris.normal = get_vec(r, p, "normal", ris.normal);
                ris.axis_y = get_vec(r, p, "axis_y", ris.axis_y);
                ris.n_y = get(r, p, "n_y", ris.n_y);
                ris.n_z = get(r, p, "n_z", ris.n_z);
                ris.element_spacing = get(r, p, "element_spacing_m", ris.element_spacing);
                ris.unit_cell_area = get(r, p, "unit_cell_area_m2", ris.unit_cell_area);
                ris.n_tiles = get(r, p, "n_tiles", ris.n_tiles);
                try
                {
                    ris.validate();
                }
                catch (const std::invalid_argument &e)
                {
                    fail(p, e.what());
                }
                s.ris = ris;
                auto it = std::find_if(s.arrays.begin(), s.arrays.end(), [](const NamedArray &a)
                                       { return a.name == "ris"; });
                if (it != s.arrays.end())
                    it->geometry = ris.geometry(lambda);
                else
                    s.arrays.push_back({"ris", ris.geometry(lambda)});
            }
            if (j.contains("ris_experiment"))
            {
                const auto &e = j.at("ris_experiment");
                const std::string p = path + ".ris_experiment";
                check_keys(e, p, {"bs", "users", "wall_bs_ris", "wall_ris_mu", "bs_mu", "bs_ris", "ris_mu", "n_scatterers", "high_power_dbm", "draws"});
                auto &x = s.ris_experiment;
                x.bs = get(e, p, "bs", x.bs);
                x.users = get(e, p, "users", x.users);
                x.wall_bs_ris = get(e, p, "wall_bs_ris", x.wall_bs_ris);
                x.wall_ris_mu = get(e, p, "wall_ris_mu", x.wall_ris_mu);
                if (e.contains("bs_mu"))
                    x.bs_mu = parse_budget(e.at("bs_mu"), p + ".bs_mu", x.bs_mu);
                if (e.contains("bs_ris"))
                    x.bs_ris = parse_budget(e.at("bs_ris"), p + ".bs_ris", x.bs_ris);
                if (e.contains("ris_mu"))
                    x.ris_mu = parse_budget(e.at("ris_mu"), p + ".ris_mu", x.ris_mu);
                x.n_scatterers = get(e, p, "n_scatterers", x.n_scatterers);
                x.high_power_dbm = get(e, p, "high_power_dbm", x.high_power_dbm);
                x.draws = get(e, p, "draws", x.draws);
                if (x.draws == 0)
                    fail(p + ".draws", "must be >= 1");
            }
            if (j.contains("links"))
            {
                s.links.clear();
                for (std::size_t i = 0; i < j.at("links").size(); ++i)
                {
                    const auto &l = j.at("links")[i];
                    const std::string p = path + ".links[" + std::to_string(i) + "]";
                    check_keys(l, p, {"name", "tx", "rx", "budget", "n_scatterers", "scatterers", "surfaces", "use_surfaces"});
                    LinkConfig lc;
                    lc.name = get<std::string>(l, p, "name", "");
                    lc.tx = get<std::string>(l, p, "tx", "");
                    lc.rx = get<std::string>(l, p, "rx", "");
                    if (l.contains("budget"))
                        lc.budget = parse_budget(l.at("budget"), p + ".budget", lc.budget);
                    lc.n_scatterers = get(l, p, "n_scatterers", lc.n_scatterers);
                    lc.surfaces = get(l, p, "surfaces", lc.surfaces);
                    lc.use_surfaces = get(l, p, "use_surfaces", lc.use_surfaces);
                    if (l.contains("scatterers"))
                        for (std::size_t k = 0; k < l.at("scatterers").size(); ++k)
                        {
                            const auto &sc = l.at("scatterers")[k];
                            const std::string q = p + ".scatterers[" + std::to_string(k) + "]";
                            check_keys(sc, q, {"position_m", "amplitude_re", "amplitude_im"});
                            lc.scatterers.push_back({get_vec(sc, q, "position_m", Vec3::Zero()),
                                                     cplx(get(sc, q, "amplitude_re", 0.0), get(sc, q, "amplitude_im", 0.0))});
                        }
                    s.links.push_back(std::move(lc));
                }
            }
            s.threads = get(j, path, "threads", s.threads);
            try
            {
                s.validate();
            }
            catch (const std::invalid_argument &e)
            {
                fail(path, e.what());
            }
            return s;
        }
    }

    VerifyMeanConfig default_verify_mean(double wavelength)
    {
        VerifyMeanConfig c;
        c.surface.name = "plate";
        c.surface.length_u = 0.5;
        c.surface.length_v = 0.5;
        c.surface.grid_step = wavelength / 10.0;
        return c;
    }

    VerifyDistributionConfig default_verify_distribution(double wavelength)
    {
        VerifyDistributionConfig c;
        c.surface = default_verify_mean(wavelength).surface;
        return c;
    }

    VerifyCorrelationConfig default_verify_correlation(double wavelength)
    {
        VerifyCorrelationConfig c;
        c.surface.name = "plate";
        c.surface.length_u = 0.27;
        c.surface.length_v = 0.27;
        c.surface.grid_step = wavelength / 8.0;
        return c;
    }

    Config parse_config(const std::string &json_text)
    {
        json root;
        try
        {
            root = json::parse(json_text);
        }
        catch (const json::parse_error &e)
        {
            throw std::invalid_argument(std::string("config: malformed JSON: ") + e.what());
        }
        check_keys(root, "$", {"carrier_frequency_hz", "seed", "verify_mean", "verify_distribution", "verify_correlation", "scenario", "sum_rate", "oracle"});

        Config c;
        c.carrier_hz = get(root, "$", "carrier_frequency_hz", c.carrier_hz);
        if (!(c.carrier_hz > 0.0) || !std::isfinite(c.carrier_hz))
            fail("$.carrier_frequency_hz", "must be positive");
        c.seed = get(root, "$", "seed", c.seed);
        const double lambda = c.wavelength();

        if (root.contains("verify_mean"))
        {
            const auto &j = root.at("verify_mean");
            const std::string p = "$.verify_mean";
            check_keys(j, p, {"surface", "tx_m", "rx_m", "kappa_sigma_z", "realizations", "tolerance"});
            VerifyMeanConfig v = default_verify_mean(lambda);
            if (j.contains("surface"))
                v.surface = parse_surface(j.at("surface"), p + ".surface", lambda, v.surface);
            v.tx = get_vec(j, p, "tx_m", v.tx);
            v.rx = get_vec(j, p, "rx_m", v.rx);
            v.kappa_sigma_z = get_sweep(j, p, "kappa_sigma_z", v.kappa_sigma_z);
            v.realizations = get(j, p, "realizations", v.realizations);
            if (j.contains("tolerance"))
            {
                const auto &t = j.at("tolerance");
                check_keys(t, p + ".tolerance", {"mean_rel", "mean_abs", "mean_abs_below", "power_rel"});
                v.mean_tol_rel = get(t, p + ".tolerance", "mean_rel", v.mean_tol_rel);
                v.mean_tol_abs = get(t, p + ".tolerance", "mean_abs", v.mean_tol_abs);
                v.mean_abs_below = get(t, p + ".tolerance", "mean_abs_below", v.mean_abs_below);
                v.power_tol_rel = get(t, p + ".tolerance", "power_rel", v.power_tol_rel);
            }
            c.verify_mean = v;
        }
        if (root.contains("verify_distribution"))
        {
            const auto &j = root.at("verify_distribution");
            const std::string p = "$.verify_distribution";
            check_keys(j, p, {"surface", "tx_m", "rx_m", "kappa_sigma_z", "samples", "bins"});
            VerifyDistributionConfig v = default_verify_distribution(lambda);
            if (j.contains("surface"))
                v.surface = parse_surface(j.at("surface"), p + ".surface", lambda, v.surface);
            v.tx = get_vec(j, p, "tx_m", v.tx);
            v.rx = get_vec(j, p, "rx_m", v.rx);
            v.kappa_sigma_z = get(j, p, "kappa_sigma_z", v.kappa_sigma_z);
            v.samples = get(j, p, "samples", v.samples);
            v.bins = get(j, p, "bins", v.bins);
            c.verify_distribution = v;
        }
        if (root.contains("verify_correlation"))
        {
            const auto &j = root.at("verify_correlation");
            const std::string p = "$.verify_correlation";
            check_keys(j, p, {"surface", "tx_m", "rx_height_m", "max_separation_wavelengths", "separations", "kappa_sigma_z",
                              "realizations", "tolerance"});
            VerifyCorrelationConfig v = default_verify_correlation(lambda);
            if (j.contains("surface"))
                v.surface = parse_surface(j.at("surface"), p + ".surface", lambda, v.surface);
            v.tx = get_vec(j, p, "tx_m", v.tx);
            v.rx_height_m = get(j, p, "rx_height_m", v.rx_height_m);
            v.max_separation_wavelengths = get(j, p, "max_separation_wavelengths", v.max_separation_wavelengths);
            v.separations = get(j, p, "separations", v.separations);
            v.kappa_sigma_z = get(j, p, "kappa_sigma_z", v.kappa_sigma_z);
            v.realizations = get(j, p, "realizations", v.realizations);
            if (j.contains("tolerance"))
            {
                const auto &t = j.at("tolerance");
                check_keys(t, p + ".tolerance", {"closed_vs_numeric", "empirical"});
                v.closed_vs_numeric_tol = get(t, p + ".tolerance", "closed_vs_numeric", v.closed_vs_numeric_tol);
                v.empirical_tol = get(t, p + ".tolerance", "empirical", v.empirical_tol);
            }
            if (v.separations < 2)
                fail(p + ".separations", "must be >= 2");
            c.verify_correlation = v;
        }
        if (root.contains("scenario"))
            c.scenario = parse_scenario(root.at("scenario"), "$.scenario", c.carrier_hz);
        if (root.contains("sum_rate"))
        {
            const auto &j = root.at("sum_rate");
            const std::string p = "$.sum_rate";
            check_keys(j, p, {"tx_power_dbm", "tx_power_sweep_dbm", "ordering_rel_tol", "saturation_bits"});
            c.sum_rate.tx_power_dbm = get(j, p, "tx_power_dbm", c.sum_rate.tx_power_dbm);
            if (j.contains("tx_power_sweep_dbm"))
            {
                if (j.contains("tx_power_dbm"))
                    fail(p, "give either tx_power_dbm or tx_power_sweep_dbm");
                c.sum_rate.tx_power_dbm = get_sweep(j, p, "tx_power_sweep_dbm", {}).values();
            }
            c.sum_rate.ordering_rel_tol = get(j, p, "ordering_rel_tol", c.sum_rate.ordering_rel_tol);
            c.sum_rate.saturation_bits = get(j, p, "saturation_bits", c.sum_rate.saturation_bits);
        }
        if (root.contains("oracle"))
        {
            const auto &j = root.at("oracle");
            const std::string p = "$.oracle";
            check_keys(j, p, {"surface", "tx_m", "rx_m", "realizations"});
            OracleConfig o;
            o.surface = default_verify_mean(lambda).surface;
            if (j.contains("surface"))
                o.surface = parse_surface(j.at("surface"), p + ".surface", lambda, o.surface);
            o.tx = get_points(j, p, "tx_m", o.tx);
            o.rx = get_points(j, p, "rx_m", o.rx);
            o.realizations = get(j, p, "realizations", o.realizations);
            c.oracle = o;
        }
        c.canonical = root.dump();
        return c;
    }

    Config load_config(const std::string &path)
    {
        std::ifstream in(path);
        if (!in)
            throw std::invalid_argument("config: cannot open '" + path + "'");
        std::ostringstream ss;
        ss << in.rdbuf();
        return parse_config(ss.str());
    }

    std::string sha256_hex(const std::string &data)
    {
        unsigned char md[EVP_MAX_MD_SIZE];
        unsigned int len = 0;
        if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
            throw std::runtime_error("SHA-256 failed");
        static constexpr char hex[] = "0123456789abcdef";
        std::string out;
        for (unsigned int i = 0; i < len; ++i)
        {
            out += hex[md[i] >> 4];
            out += hex[md[i] & 0xF];
        }
        return out;
    }

    std::string config_digest(const Config &config, std::uint64_t seed, std::size_t realizations_override)
    {
        return sha256_hex(config.canonical + "\nseed=" + std::to_string(seed) + "\nrealizations=" + std::to_string(realizations_override));
    }
}
