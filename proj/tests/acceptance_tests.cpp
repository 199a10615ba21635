// SPDX-License-Identifier: Apache-2.0
//
// noncobf: robust non-coherent downlink beamforming for massive MIMO
// Copyright (C) 2026 The noncobf authors
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
//
// Release gate: every check prints one pass/fail line. Tolerances are fixed
// here, not tuned at run time.

#include "noncobf/eval_harness.hpp"
#include "noncobf/report_io.hpp"
#include "test_util.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

using namespace noncobf;

namespace {

struct criterion_check {
    int number;
    std::string name;
    bool ok = true;
    std::string first_failure;

    void expect(bool cond, const std::string &what) {
        if (!cond && ok) {
            ok = false;
            first_failure = what;
        }
    }

    void finish() const {
        std::printf("criterion %d [%s] %s%s%s\n", number, ok ? "PASS" : "FAIL", name.c_str(),
                    ok ? "" : ": ", ok ? "" : first_failure.c_str());
        std::fflush(stdout);
        INFO(first_failure);
        REQUIRE(ok);
    }
};

double seconds_since(const std::chrono::steady_clock::time_point &t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

signature_set from_columns(const std::vector<cvec> &cols) {
    signature_set a;
    a.signatures.resize(cols.front().size(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t i = 0; i < cols.size(); ++i)
        a.signatures.col(static_cast<Eigen::Index>(i)) = cols[i];
    return a;
}

double grid_worst_case(const cvec &g, const signature_set &a, int grid_n) {
    const auto l = static_cast<std::size_t>(a.num_paths());
    std::vector<std::vector<cplx>> table(l, std::vector<cplx>(static_cast<std::size_t>(grid_n)));
    for (std::size_t i = 0; i < l; ++i) {
        const cplx w = g.dot(a.signatures.col(static_cast<Eigen::Index>(i)));
        for (int k = 0; k < grid_n; ++k)
            table[i][static_cast<std::size_t>(k)] = w * std::polar(1.0, kTwoPi * k / grid_n);
    }
    std::vector<int> idx(l, 0);
    double best = std::numeric_limits<double>::infinity();
    while (true) {
        cplx sum(0.0, 0.0);
        for (std::size_t i = 0; i < l; ++i)
            sum += table[i][static_cast<std::size_t>(idx[i])];
        best = std::min(best, std::norm(sum));
        std::size_t pos = 0;
        while (pos < l && ++idx[pos] == grid_n) {
            idx[pos] = 0;
            ++pos;
        }
        if (pos == l)
            break;
    }
    return best;
}

multiuser_scenario random_feasible_scenario(Eigen::Index n, std::size_t num_users,
                                            Eigen::Index paths, std::mt19937_64 &rng,
                                            double rho) {
    multiuser_scenario s;
    s.noise_variance = 1.0;
    for (std::size_t k = 0; k < num_users; ++k) {
        signature_set a = test::random_signatures(n, paths, rng);
        for (Eigen::Index i = 0; i < paths; ++i)
            a.signatures.col(i) *= 1.0 / (1.0 + 0.5 * static_cast<double>(i));
        s.users.push_back({std::move(a), iid_uniform_phases{}});
        s.symbol_powers.push_back(1.0 / rho);
    }
    return s;
}

double median_of(const std::vector<double> &sorted) { return quantile(sorted, 0.5); }

std::vector<double> design_values(const std::vector<cdf_table_row> &rows, design_criterion d) {
    std::vector<double> out;
    for (const auto &r : rows)
        if (r.design == d && r.metric == "gain_db")
            out.push_back(r.value_db);
    return out;
}

const std::string kCli = NONCOBF_CLI_PATH;

int run_cli(const std::string &args) {
    const int ret = std::system((kCli + " " + args).c_str());
    if (ret == -1)
        return -1;
    return WIFEXITED(ret) ? WEXITSTATUS(ret) : -1;
}

std::string read_file(const std::filesystem::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("criterion 1: eigen-solution correctness on 500 random instances") {
    criterion_check c{1, "stationary eigenpairs: residual, probe dominance, trace bounds"};
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(20260101);

    for (int trial = 0; trial < 500 && c.ok; ++trial) {
        const Eigen::Index n = 16;
        const Eigen::Index l = 1 + static_cast<Eigen::Index>(rng() % 6);
        const signature_set a = test::random_signatures(n, l, rng);
        const cmat r = test::random_correlation(static_cast<std::size_t>(l), rng);

        const beamformer bf = stationary_bf(a, r);
        cmat m = a.signatures * r * a.signatures.adjoint();
        m = 0.5 * (m + m.adjoint()).eval();

        const double resid = (m * bf.g - bf.objective_value * bf.g).norm();
        c.expect(resid <= 1e-9 * bf.objective_value, "eigen residual above 1e-9 * lambda");

        for (int p = 0; p < 1000; ++p) {
            const cvec u = test::random_unit(n, rng);
            if (std::real(u.dot(m * u)) > bf.objective_value * (1.0 + 1e-12)) {
                c.expect(false, "a random Rayleigh probe beat lambda_max");
                break;
            }
        }

        const power_bounds b = stationary_power_bounds(a, r);
        const double scale = std::max(b.upper, 1.0);
        c.expect(bf.objective_value - b.lower >= -1e-9 * scale, "lower bound violated");
        c.expect(b.upper - bf.objective_value >= -1e-9 * scale, "upper bound violated");
    }

    const double elapsed = seconds_since(t0);
    c.expect(elapsed < 10.0, "runtime exceeded 10 s");
    c.finish();
}

TEST_CASE("criterion 2: orthogonal equipower anchor at 10*log10(3) dB") {
    criterion_check c{2, "three orthogonal unit-power signatures, R = I"};
    cvec e1 = cvec::Zero(8), e2 = cvec::Zero(8), e3 = cvec::Zero(8);
    e1(0) = 1.0;
    e2(1) = 1.0;
    e3(2) = 1.0;
    const signature_set a = from_columns({e1, e2, e3});
    const beamformer bf = stationary_bf(a, cmat::Identity(3, 3));
    const power_bounds b = stationary_power_bounds(a, cmat::Identity(3, 3));

    c.expect(std::abs(bf.objective_value - b.upper / 3.0) <= 1e-12, "lambda_max is not tr/3");
    const double gap_db = 10.0 * std::log10(b.upper / bf.objective_value);
    c.expect(std::abs(gap_db - 10.0 * std::log10(3.0)) <= 1e-6,
             "gap to the coherent stationary power is not 4.771 dB");
    c.finish();
}

TEST_CASE("criterion 3: worst-case closed form equals the phase-grid minimum") {
    criterion_check c{3, "closed form vs 64^L grid on 200 instances, exact zero for equal pair"};
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(20260103);

    for (int trial = 0; trial < 200 && c.ok; ++trial) {
        const Eigen::Index l = (trial % 2 == 0) ? 2 : 3;
        const signature_set a = test::random_signatures(4, l, rng);
        const cvec g = test::random_unit(4, rng);
        const double closed = worst_case_power(g, a);
        const double grid = grid_worst_case(g, a, 64);
        double zsum = 0.0;
        for (Eigen::Index i = 0; i < l; ++i)
            zsum += std::abs(g.dot(a.signatures.col(i)));
        const double step = zsum * kPi / 64.0;
        const double bound = step * (2.0 * std::sqrt(closed) + step);
        c.expect(closed <= grid + 1e-12, "closed form exceeds the grid minimum");
        c.expect(grid - closed <= bound + 1e-12, "grid minimum above the resolution bound");
    }

    std::mt19937_64 rng2(7);
    const cvec x = test::random_cvec(6, rng2);
    const signature_set twin = from_columns({x, x});
    c.expect(worst_case_power(test::random_unit(6, rng2), twin) == 0.0,
             "equal-signature pair did not return exactly zero");

    const double elapsed = seconds_since(t0);
    c.expect(elapsed < 30.0, "runtime exceeded 30 s");
    c.finish();
}

TEST_CASE("criterion 4: DC iterations are monotone and solve the orthogonal anchor") {
    criterion_check c{4, "monotone DC traces; orthogonal (2,1) instance reaches gain 4"};
    std::mt19937_64 rng(20260104);

    for (int trial = 0; trial < 10; ++trial) {
        const Eigen::Index l = 2 + static_cast<Eigen::Index>(rng() % 3);
        const signature_set a = test::random_signatures(6, l, rng);
        const beamformer bf = worst_case_bf(a);
        for (const auto &trace : bf.diagnostics.objective_traces)
            for (std::size_t i = 1; i < trace.size(); ++i)
                c.expect(trace[i] >= trace[i - 1] - 1e-10, "DC objective decreased along a run");
    }

    cvec a1 = cvec::Zero(4), a2 = cvec::Zero(4);
    a1(0) = 2.0;
    a2(1) = 1.0;
    const signature_set a = from_columns({a1, a2});
    const beamformer bf = worst_case_bf(a);

    // Oracle: sweep the mixing angle between the two spans at 1e-3 steps.
    double oracle = 0.0;
    for (double alpha = 0.0; alpha <= kPi / 2.0 + 1e-12; alpha += 1e-3) {
        const double z1 = 2.0 * std::cos(alpha);
        const double z2 = std::sin(alpha);
        const double s = std::abs(z1 - z2);
        oracle = std::max(oracle, s * s);
    }
    c.expect(std::abs(bf.objective_value - 4.0) <= 1e-4, "worst-case gain is not 4");
    c.expect(std::abs(bf.objective_value - oracle) <= 1e-4, "disagrees with the sweep oracle");
    c.expect(std::abs(bf.g.dot(a1 / 2.0)) >= 1.0 - 1e-6, "not aligned with the strong path");
    c.finish();
}

TEST_CASE("criterion 5: zero-forcing leakage stays below 1e-14 relative") {
    criterion_check c{5, "ZF designs leak nothing on random feasible K=4 scenarios"};
    std::mt19937_64 rng(20260105);

    for (int trial = 0; trial < 10 && c.ok; ++trial) {
        auto s = random_feasible_scenario(16, 4, 2, rng, 0.1);
        std::vector<beamformer> designs;
        for (std::size_t k = 0; k < 4; ++k) {
            designs.push_back(zf_stationary_bf(s, k));
            designs.push_back(zf_worst_case_bf(s, k));
        }
        std::mt19937_64 draw_rng(derive_seed(99, static_cast<std::uint64_t>(trial)));
        for (std::size_t k = 0; k < 4 && c.ok; ++k) {
            for (std::size_t kp = 0; kp < 4; ++kp) {
                if (kp == k)
                    continue;
                double worst = 0.0;
                for (int d = 0; d < 1000; ++d) {
                    const cvec v = draw_phase_vector(s.users[kp].phases, 2, draw_rng);
                    const cvec h = s.users[kp].signatures.signatures * v;
                    const double hn = h.squaredNorm();
                    worst = std::max(worst,
                                     std::norm(designs[2 * k].g.dot(h)) / hn);
                    worst = std::max(worst,
                                     std::norm(designs[2 * k + 1].g.dot(h)) / hn);
                }
                c.expect(worst <= 1e-14, "normalized leakage exceeded 1e-14");
            }
        }
    }
    c.finish();
}

TEST_CASE("criterion 6: RZF approaches the SU and ZF solutions at the SNR extremes") {
    criterion_check c{6, "RZF limits and the Woodbury identity on 50 scenarios"};
    std::mt19937_64 rng(20260106);

    for (int trial = 0; trial < 50 && c.ok; ++trial) {
        auto s = random_feasible_scenario(12, 3, 2, rng, 1.0);
        const cvec g_su = stationary_bf(s.users[0].signatures, s.user_correlation(0)).g;
        const cvec g_zf = zf_stationary_bf(s, 0).g;

        for (double &p : s.symbol_powers)
            p = 1e-6; // rho = 1e6
        const cvec g_low = rzf_slnr_bf(s, 0).g;
        c.expect(std::abs(g_low.dot(g_su)) >= 1.0 - 1e-4, "low-SNR limit missed the SU solution");

        for (double &p : s.symbol_powers)
            p = 1e8; // rho = 1e-8
        const cvec g_high = rzf_slnr_bf(s, 0).g;
        c.expect(std::abs(g_high.dot(g_zf)) >= 1.0 - 1e-3, "high-SNR limit missed the ZF solution");

        // Woodbury route on the same interference matrix.
        const cmat ring = interference_matrix(s, 0);
        const double rho = 0.5;
        const cmat direct = (ring * ring.adjoint() + rho * cmat::Identity(12, 12)).inverse();
        Eigen::JacobiSVD<cmat> svd(ring, Eigen::ComputeThinU);
        const Eigen::Index r = svd.nonzeroSingularValues();
        const cmat u1 = svd.matrixU().leftCols(r);
        rvec inner(r);
        for (Eigen::Index i = 0; i < r; ++i) {
            const double s2 = svd.singularValues()(i) * svd.singularValues()(i);
            inner(i) = 1.0 / (rho / s2 + 1.0);
        }
        const cmat woodbury =
            (cmat::Identity(12, 12) - u1 * inner.cast<cplx>().asDiagonal() * u1.adjoint()) / rho;
        c.expect((direct - woodbury).norm() <= 1e-8 * direct.norm(),
                 "Woodbury identity above 1e-8 relative");
    }
    c.finish();
}

TEST_CASE("criterion 7: Monte-Carlo agreement with the analytic stationary gain") {
    criterion_check c{7, "1e5-draw mean within 2%; sample minimum above the worst case"};
    std::mt19937_64 rng(20260107);
    const signature_set a = test::random_signatures(16, 4, rng);
    const phase_model model = iid_uniform_phases{};
    const beamformer bf = stationary_bf(a, phase_correlation(model, 4));
    const auto ev = evaluate_su(bf, a, model, 100000, 42);

    double mean = 0.0, lo = std::numeric_limits<double>::infinity();
    for (double s : ev.samples) {
        mean += s;
        lo = std::min(lo, s);
    }
    mean /= static_cast<double>(ev.samples.size());

    c.expect(std::abs(mean - ev.stationary_gain) <= 0.02 * ev.stationary_gain,
             "sample mean off by more than 2%");
    c.expect(lo >= ev.worst_case_gain - 1e-9, "a sample fell below the closed-form worst case");
    c.finish();
}

TEST_CASE("criterion 8: qualitative NLOS and LOS regimes of the synthetic generator") {
    criterion_check c{8, "median gaps to the coherent genie in both regimes"};
    const auto t0 = std::chrono::steady_clock::now();

    scenario_config base;
    base.seed = 20260108;
    base.num_users = 1;
    base.paths_per_user = 20;
    base.array = {8, 8, 0.5}; // N = 64
    base.num_subcarriers = 16;
    base.num_locations = 100;

    const std::vector<design_criterion> designs = {
        design_criterion::coherent, design_criterion::uniform, design_criterion::stationary};

    scenario_config nlos = base;
    nlos.mode = propagation_mode::nlos_like;
    const auto nlos_rows = su_cdf_study(nlos, designs);
    const double nlos_coh = median_of(design_values(nlos_rows, design_criterion::coherent));
    const double nlos_uni = median_of(design_values(nlos_rows, design_criterion::uniform));
    const double nlos_sta = median_of(design_values(nlos_rows, design_criterion::stationary));

    std::printf("  NLOS medians [dB]: coherent %.2f, stationary %.2f, uniform %.2f\n", nlos_coh,
                nlos_sta, nlos_uni);
    c.expect(nlos_sta > nlos_uni, "stationary median not above the uniform median");
    c.expect(nlos_sta < nlos_coh, "stationary median not below the coherent median");
    c.expect(nlos_coh - nlos_sta >= 3.0, "NLOS gap to coherent below 3 dB");

    scenario_config los = base;
    los.mode = propagation_mode::los_like;
    los.rician_factor_db = 10.0;
    const auto los_rows = su_cdf_study(los, designs);
    const double los_coh = median_of(design_values(los_rows, design_criterion::coherent));
    const double los_sta = median_of(design_values(los_rows, design_criterion::stationary));

    std::printf("  LOS medians [dB]: coherent %.2f, stationary %.2f\n", los_coh, los_sta);
    c.expect(los_coh - los_sta <= 2.0, "LOS gap to coherent above 2 dB");

    const double elapsed = seconds_since(t0);
    c.expect(elapsed < 300.0, "runtime exceeded 5 minutes");
    c.finish();
}

TEST_CASE("criterion 9: CLI outputs are byte-identical across reruns") {
    criterion_check c{9, "cdf-study and sweep reproduce byte-identical files"};
    namespace fs = std::filesystem;
    const fs::path root = fs::temp_directory_path() / "noncobf_acceptance";
    fs::remove_all(root);

    const std::string su_scenario =
        "--seed 13 --set num_users=1 --set paths_per_user=4 --set array.n_horizontal=4 "
        "--set array.n_vertical=2 --set num_subcarriers=6 --set num_locations=5";
    const std::string mu_scenario =
        "--seed 13 --set num_users=2 --set paths_per_user=2 --set array.n_horizontal=4 "
        "--set array.n_vertical=2 --set num_subcarriers=6 --set num_locations=5 --draws 20";

    const std::vector<std::pair<std::string, std::string>> runs = {
        {"cdf-study", su_scenario},
        {"sweep", su_scenario},
        {"design-su", su_scenario + " --draws 20"},
        {"design-mu", mu_scenario},
        {"cdf-study", mu_scenario},
    };
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const auto &[cmd, scenario] = runs[i];
        const fs::path d1 = root / (cmd + std::to_string(i) + "_1");
        const fs::path d2 = root / (cmd + std::to_string(i) + "_2");
        c.expect(run_cli(cmd + " --out " + d1.string() + " " + scenario) == 0, cmd + " run 1 failed");
        c.expect(run_cli(cmd + " --out " + d2.string() + " " + scenario) == 0, cmd + " run 2 failed");
        for (const auto &entry : fs::directory_iterator(d1)) {
            const std::string name = entry.path().filename().string();
            c.expect(read_file(entry.path()) == read_file(d2 / name),
                     cmd + " output " + name + " differs between reruns");
        }
        c.expect(!fs::is_empty(d1), cmd + " produced no outputs");
    }
    c.finish();
}
