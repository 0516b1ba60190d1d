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

// Acceptance gate: runs criteria AC1-AC8 at their stated tolerances and prints one PASS/FAIL line each.
// Exit status is non-zero if any criterion fails.

#include "nfchan/channel.hpp"
#include "nfchan/config.hpp"
#include "nfchan/experiments.hpp"
#include "nfchan/stat_model.hpp"

#include <Eigen/Eigenvalues>

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <thread>

using namespace nfchan;

namespace
{
    int failures = 0;

    void verdict(const char *id, bool pass, const std::string &what)
    {
        std::printf("%s %s: %s\n", id, pass ? "PASS" : "FAIL", what.c_str());
        std::fflush(stdout);
        failures += pass ? 0 : 1;
    }

    std::string fmt(double x)
    {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.4g", x);
        return buf;
    }

    void detail(const ExperimentReport &r)
    {
        for (const auto &c : r.checks)
            std::printf("    [%s] %s = %s (bound %s)\n", c.pass ? "ok" : "x", c.name.c_str(), fmt(c.value).c_str(), fmt(c.tolerance).c_str());
        for (const auto &n : r.notes)
            std::printf("    note: %s\n", n.c_str());
    }

    Vec3 random_vec(std::mt19937_64 &rng, double scale)
    {
        std::uniform_real_distribution<double> u(-scale, scale);
        return Vec3(u(rng), u(rng), u(rng));
    }

    std::string slurp(const std::string &path)
    {
        std::ifstream in(path, std::ios::binary);
        std::ostringstream s;
        s << in.rdbuf();
        return s.str();
    }

    void geometric_identities()
    {
        std::mt19937_64 rng(5);
        double inv = 0.0, two_form = 0.0;
        for (int i = 0; i < 10000; ++i)
        {
            Vec3 n = random_vec(rng, 1.0), a = random_vec(rng, 1.0);
            if (n.norm() < 0.1 || a.cross(n).norm() < 0.1 * n.norm())
            {
                --i;
                continue;
            }
            const PlanePose plane = PlanePose::make(random_vec(rng, 5.0), n, a);
            const Vec3 p = random_vec(rng, 5.0), q = random_vec(rng, 5.0);
            inv = std::max(inv, (mirror_image(mirror_image(p, plane), plane) - p).norm());
            two_form = std::max(two_form, std::abs((mirror_image(q, plane) - p).norm() - (q - mirror_image(p, plane)).norm()));
        }

        const double lambda = wavelength_of(28e9);
        double los = 0.0;
        for (int i = 0; i < 200; ++i)
        {
            const auto tx = ArrayGeometry::upa(random_vec(rng, 5.0), Vec3::UnitX(), random_vec(rng, 1.0).normalized().cross(Vec3::UnitX()).normalized(), 3, 2, lambda / 2);
            const auto rx = ArrayGeometry::upa(random_vec(rng, 5.0) + Vec3(12, 0, 0), Vec3::UnitY(), Vec3::UnitZ(), 2, 2, lambda / 2);
            const ComplexMatrix H = los_matrix(tx, rx, lambda);
            ComplexMatrix by_cols(H.rows(), H.cols()), by_rows(H.rows(), H.cols());
            for (std::size_t n = 0; n < tx.size(); ++n)
                by_cols.col(static_cast<Eigen::Index>(n)) = array_response(rx, tx.elements()[n], lambda);
            for (std::size_t m = 0; m < rx.size(); ++m)
                by_rows.row(static_cast<Eigen::Index>(m)) = array_response(tx, rx.elements()[m], lambda).transpose();
            los = std::max({los, (H - by_cols).cwiseAbs().maxCoeff(), (by_cols - by_rows).cwiseAbs().maxCoeff()});
        }
        verdict("AC5", inv <= 1e-12 && two_form <= 1e-12 && los <= 1e-12,
                "mirror involution " + fmt(inv) + ", image-distance two-form " + fmt(two_form) + ", LOS row/column forms " + fmt(los) + " (bound 1e-12)");
    }

    void covariance_soundness()
    {
        const double lambda = wavelength_of(28e9);
        std::mt19937_64 rng(6);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        double herm = 0.0, diag = 0.0, min_eig = 1.0;
        std::size_t built = 0;
        bool threw = false;
        for (int trial = 0; trial < 20; ++trial)
        {
            PlanarSurfaceSpec s;
            s.length_u = 0.3 + 0.2 * (1 + u(rng));
            s.length_v = 0.3 + 0.2 * (1 + u(rng));
            const Vec3 tc(u(rng), u(rng), 2.5 + u(rng)), rc(u(rng), u(rng), 1.0 + 0.5 * u(rng));
            std::vector<Vec3> txs, rxs;
            const Vec3 ta = random_vec(rng, 1.0).normalized(), ra = random_vec(rng, 1.0).normalized();
            for (int k = 0; k < 3; ++k)
                txs.push_back(tc + k * lambda / 2 * ta);
            for (int k = 0; k < 4; ++k)
                rxs.push_back(rc + k * lambda / 2 * ra);
            for (auto method : {CovarianceMethod::numeric, CovarianceMethod::sinc})
            {
                try
                {
                    const ComplexMatrix R = build_covariance(s, txs, rxs, lambda, method);
                    herm = std::max(herm, (R - R.adjoint()).cwiseAbs().maxCoeff());
                    diag = std::max(diag, (R.diagonal().array() - 1.0).abs().maxCoeff());
                    Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(R, Eigen::EigenvaluesOnly);
                    min_eig = std::min(min_eig, eig.eigenvalues().minCoeff());
                    ++built;
                }
                catch (const std::exception &)
                {
                    threw = true;
                }
            }
        }

        // Sampler check on one dense target
        PlanarSurfaceSpec s;
        s.length_u = s.length_v = 0.3;
        const std::vector<Vec3> txs{Vec3(0, 0, 2), Vec3(lambda / 2, 0, 2)};
        const std::vector<Vec3> rxs{Vec3(0.1, 0, 0.5), Vec3(0.1, lambda / 2, 0.5), Vec3(0.1, lambda, 0.5)};
        CovarianceModel model;
        model.full = build_covariance(s, txs, rxs, lambda, CovarianceMethod::numeric);
        const double power = 1.7;
        const StochasticSampler sampler(model, power, 3, 2);
        const int n = 10000;
        ComplexMatrix C = ComplexMatrix::Zero(6, 6);
        for (int i = 0; i < n; ++i)
        {
            const ComplexMatrix H = sampler.draw(derive_seed(123, static_cast<std::uint64_t>(i)));
            ComplexVector v(6);
            for (Eigen::Index m = 0; m < 3; ++m)
                for (Eigen::Index k = 0; k < 2; ++k)
                    v(m * 2 + k) = H(m, k);
            C += v * v.adjoint();
        }
        C /= n;
        const ComplexMatrix target = power * model.full;
        const double frob = (C - target).norm() / target.norm();

        const bool pass = !threw && herm <= 1e-12 && diag <= 1e-12 && min_eig >= -1e-6 && frob <= 0.05;
        verdict("AC6", pass, std::to_string(built) + " covariances: max |R - R^H| " + fmt(herm) + ", max |diag - 1| " + fmt(diag) +
                                 ", min eigenvalue " + fmt(min_eig) + "; sampler rel. Frobenius error " + fmt(frob) + " (bound 0.05)");
    }

    bool same_outputs(const ExperimentReport &a, const ExperimentReport &b, std::string &why)
    {
        if (a.outputs.size() != b.outputs.size())
        {
            why = a.id + ": different output sets";
            return false;
        }
        for (std::size_t i = 0; i < a.outputs.size(); ++i)
        {
            if (a.outputs[i].ends_with(".json"))
                continue;
            if (slurp(a.outputs[i]) != slurp(b.outputs[i]))
            {
                why = a.outputs[i] + " differs from " + b.outputs[i];
                return false;
            }
        }
        return true;
    }
}

int main(int argc, char **argv)
{
    std::string out = "acceptance_out";
    for (int i = 1; i + 1 < argc; ++i)
        if (std::strcmp(argv[i], "--out") == 0)
            out = argv[i + 1];
    std::filesystem::create_directories(out);
    const unsigned threads = std::max(1u, std::thread::hardware_concurrency());

    const Config config = parse_config("{}");
    RunOptions opt;
    opt.out_dir = out;
    opt.threads = threads;

    try
    {
        const auto mean = run_verify_mean(config, opt);
        verdict("AC1", mean.check("mean_decay_rel").pass && mean.check("mean_decay_abs").pass,
                "|mean| vs exp(-g/2): max rel. error " + fmt(mean.check("mean_decay_rel").value) + " (bound 0.05), max abs. error " +
                    fmt(mean.check("mean_decay_abs").value) + " (bound 0.02), kappa*sigma_z in [0, 5], 100 realizations");
        verdict("AC2", mean.check("power_heuristic").pass,
                "E|c|/|c(0)| vs closed-form magnitude: max rel. error " + fmt(mean.check("power_heuristic").value) + " (bound 0.2)");

        const auto dist = run_verify_distribution(config, opt);
        verdict("AC3", dist.passed() && dist.checks.size() == 4, "Anderson-Darling at 1% on re/im, kappa*sigma_z in {0.5, 3}, 500 samples");
        detail(dist);

        const auto corr = run_verify_correlation(config, opt);
        verdict("AC4", corr.passed(),
                "closed form vs quadrature " + fmt(corr.check("closed_vs_numeric").value) + " (bound 1e-3), oracle vs closed form " +
                    fmt(corr.check("empirical_vs_closed").value) + " (bound 0.1), aligned >= perpendicular excess " +
                    fmt(corr.check("aligned_ge_perpendicular").value));

        geometric_identities();
        covariance_soundness();

        const auto rate = run_sum_rate(config, opt);
        verdict("AC7", rate.passed(), "mode ordering and saturation at 32x32 RIS, 50 draws");
        detail(rate);

        // AC8: reduced runs, 1 worker vs several, byte-compare every CSV
        bool det = true;
        std::string why;
        for (const auto &[name, count] : std::vector<std::pair<std::string, std::size_t>>{
                 {"verify-mean", 4}, {"verify-distribution", 16}, {"verify-correlation", 6}, {"sum-rate", 3}, {"oracle", 3}})
        {
            RunOptions a = opt, b = opt, c = opt;
            a.realizations = b.realizations = c.realizations = count;
            a.threads = 1;
            b.threads = 3;
            c.threads = 1;
            a.out_dir = out + "/det_a";
            b.out_dir = out + "/det_b";
            c.out_dir = out + "/det_c";
            const auto ra = run_experiment(name, config, a), rb = run_experiment(name, config, b), rc = run_experiment(name, config, c);
            det = det && same_outputs(ra, rb, why) && same_outputs(ra, rc, why) && ra.digest == rb.digest;
        }
        verdict("AC8", det, det ? "byte-identical CSVs for all experiments across reruns and 1 vs 3 workers" : why);
    }
    catch (const std::exception &e)
    {
        std::printf("acceptance aborted: %s\n", e.what());
        return 2;
    }
    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
