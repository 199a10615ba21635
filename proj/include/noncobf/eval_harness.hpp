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
// Monte-Carlo and analytic evaluation of beamformer designs: per-design
// gains and SINRs, frequency sweeps across the signal band, and empirical
// CDFs over user drops. The coherent baseline is a per-realization genie
// (matched filter to the drawn channel); all other designs are fixed
// vectors. Work items are reduced in index order, so results do not depend
// on the execution schedule.

#ifndef NONCOBF_EVAL_HARNESS_HPP
#define NONCOBF_EVAL_HARNESS_HPP

#include "noncobf/array_channel.hpp"
#include "noncobf/mu_beamformers.hpp"
#include "noncobf/scenario.hpp"
#include "noncobf/su_beamformers.hpp"
#include "noncobf/types.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace noncobf {

// ----------------------------------------------------------- empirical CDF

struct empirical_cdf_result {
    std::vector<double> values;        // sorted ascending
    std::vector<double> probabilities; // i/n
};

inline empirical_cdf_result empirical_cdf(std::vector<double> samples) {
    if (samples.empty())
        throw std::invalid_argument("empirical_cdf: need at least one sample");
    bool any_finite = false;
    for (double s : samples) {
        if (std::isnan(s))
            throw std::invalid_argument("empirical_cdf: NaN sample");
        any_finite = any_finite || std::isfinite(s);
    }
    if (!any_finite)
        throw std::invalid_argument("empirical_cdf: need at least one finite sample");
    std::sort(samples.begin(), samples.end());
    const auto n = samples.size();
    std::vector<double> probs(n);
    for (std::size_t i = 0; i < n; ++i)
        probs[i] = static_cast<double>(i + 1) / static_cast<double>(n);
    return {std::move(samples), std::move(probs)};
}

// Quantile with midpoint (Hazen) plotting positions: the median of
// {1,2,3,4} interpolates to 2.5.
inline double quantile(const std::vector<double> &sorted_values, double p) {
    if (sorted_values.empty())
        throw std::invalid_argument("quantile: empty sample set");
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("quantile: probability must lie in [0, 1]");
    const double n = static_cast<double>(sorted_values.size());
    const double h = p * n - 0.5;
    if (h <= 0.0)
        return sorted_values.front();
    if (h >= n - 1.0)
        return sorted_values.back();
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const double frac = h - std::floor(h);
    return sorted_values[lo] + frac * (sorted_values[lo + 1] - sorted_values[lo]);
}

// ------------------------------------------------------------ SU evaluation

struct su_evaluation {
    double stationary_gain = 0.0; // g^H A R A^H g
    double worst_case_gain = 0.0; // closed-form min over phases
    std::vector<double> samples;  // |g^H A v_i|^2, linear
};

// Evaluates a fixed beamformer against one user's signatures and phase
// model. Monte-Carlo samples require a sampling-capable model; the analytic
// fields work for any model.
inline su_evaluation evaluate_su(const beamformer &bf, const signature_set &a,
                                 const phase_model &model, std::size_t num_draws,
                                 std::uint64_t seed = 0) {
    if (bf.g.size() != a.num_antennas())
        throw std::invalid_argument("evaluate_su: beamformer length mismatch");
    const auto num_paths = static_cast<std::size_t>(a.num_paths());
    if (num_draws > 0 && !supports_sampling(model))
        throw unsupported_sampling_error(
            "evaluate_su: phase model defines second moments only; analytic evaluation "
            "is available but sampling is not");

    su_evaluation out;
    const cmat r = phase_correlation(model, num_paths);
    const cvec w = a.signatures.adjoint() * bf.g; // w_l = a_l^H g
    out.stationary_gain = std::real(w.dot(r * w)); // g^H A R A^H g = w^H R w
    out.worst_case_gain = worst_case_power(bf.g, a);

    if (num_draws > 0) {
        out.samples.resize(num_draws);
        std::mt19937_64 rng = make_rng(seed);
        for (std::size_t i = 0; i < num_draws; ++i) {
            const cvec v = draw_phase_vector(model, num_paths, rng);
            out.samples[i] = std::norm(w.dot(v)); // |g^H A v|^2 = |w^H v|^2
        }
    }
    return out;
}

// Per-draw coherent genie gains ||h_i||^2 on the same draw sequence that
// evaluate_su uses for a given seed.
inline std::vector<double> coherent_gain_samples(const signature_set &a, const phase_model &model,
                                                 std::size_t num_draws, std::uint64_t seed = 0) {
    if (!supports_sampling(model))
        throw unsupported_sampling_error("coherent_gain_samples: model cannot be sampled");
    const auto num_paths = static_cast<std::size_t>(a.num_paths());
    std::vector<double> out(num_draws);
    std::mt19937_64 rng = make_rng(seed);
    for (std::size_t i = 0; i < num_draws; ++i) {
        const cvec v = draw_phase_vector(model, num_paths, rng);
        out[i] = (a.signatures * v).squaredNorm();
    }
    return out;
}

// ------------------------------------------------------------ MU evaluation

struct mu_user_evaluation {
    double stationary_sinr = 0.0;     // analytic, uses R_k
    std::vector<double> sinr_samples; // linear, one per draw
};

// Per-draw SINR of user k:
//   p_k |g_k^H h_k|^2 / (sum_{k' != k} p_k' |g_k'^H h_k|^2 + sigma^2)
// with independent phase draws per user.
inline std::vector<mu_user_evaluation> evaluate_mu(const multiuser_scenario &scenario,
                                                   const std::vector<beamformer> &beamformers,
                                                   std::size_t num_draws, std::uint64_t seed = 0) {
    scenario.validate();
    const std::size_t num_users = scenario.num_users();
    if (beamformers.size() != num_users)
        throw std::invalid_argument("evaluate_mu: one beamformer per user required");
    for (const auto &bf : beamformers)
        if (bf.g.size() != scenario.users.front().signatures.num_antennas())
            throw std::invalid_argument("evaluate_mu: beamformer length mismatch");

    std::vector<mu_user_evaluation> out(num_users);

    // Analytic stationary SINR from the phase correlation matrices.
    for (std::size_t k = 0; k < num_users; ++k) {
        const cmat cov = scenario.users[k].signatures.signatures *
                         scenario.user_correlation(k) *
                         scenario.users[k].signatures.signatures.adjoint();
        const double signal =
            scenario.symbol_powers[k] * std::real(beamformers[k].g.dot(cov * beamformers[k].g));
        double interference = 0.0;
        for (std::size_t j = 0; j < num_users; ++j)
            if (j != k)
                interference += scenario.symbol_powers[j] *
                                std::real(beamformers[j].g.dot(cov * beamformers[j].g));
        out[k].stationary_sinr = signal / (interference + scenario.noise_variance);
    }

    if (num_draws == 0)
        return out;
    for (std::size_t k = 0; k < num_users; ++k)
        if (!supports_sampling(scenario.users[k].phases))
            throw unsupported_sampling_error("evaluate_mu: user phase model cannot be sampled");

    std::vector<std::mt19937_64> rngs;
    rngs.reserve(num_users);
    for (std::size_t k = 0; k < num_users; ++k)
        rngs.push_back(make_rng(seed, k));
    for (std::size_t k = 0; k < num_users; ++k)
        out[k].sinr_samples.resize(num_draws);

    for (std::size_t i = 0; i < num_draws; ++i) {
        for (std::size_t k = 0; k < num_users; ++k) {
            const auto paths = static_cast<std::size_t>(scenario.users[k].signatures.num_paths());
            const cvec v = draw_phase_vector(scenario.users[k].phases, paths, rngs[k]);
            const cvec h = scenario.users[k].signatures.signatures * v;
            const double signal = scenario.symbol_powers[k] * std::norm(beamformers[k].g.dot(h));
            double interference = 0.0;
            for (std::size_t j = 0; j < num_users; ++j)
                if (j != k)
                    interference +=
                        scenario.symbol_powers[j] * std::norm(beamformers[j].g.dot(h));
            out[k].sinr_samples[i] = signal / (interference + scenario.noise_variance);
        }
    }
    return out;
}

// ----------------------------------------------------------- design driver

// Designs one user's beamformer at a given frequency. The coherent design
// matches the realized channel at that frequency.
inline beamformer design_for_user(design_criterion kind, const synthetic_scenario &scen,
                                  std::size_t user, double frequency,
                                  const dc_options &opts = {}) {
    switch (kind) {
    case design_criterion::coherent:
        return coherent_bf(scen.true_channel(user, frequency));
    case design_criterion::uniform:
        return uniform_bf(scen.geometry.num_elements());
    case design_criterion::stationary: {
        const signature_set a = scen.signatures_for(user, frequency);
        return stationary_bf(a, phase_correlation(scen.model_for(user, frequency),
                                                  static_cast<std::size_t>(a.num_paths())));
    }
    case design_criterion::worst_case:
        return worst_case_bf(scen.signatures_for(user, frequency), opts);
    case design_criterion::zf_stationary:
        return zf_stationary_bf(scen.at_frequency(frequency), user);
    case design_criterion::zf_worst_case:
        return zf_worst_case_bf(scen.at_frequency(frequency), user, opts);
    case design_criterion::rzf_stationary:
        return rzf_slnr_bf(scen.at_frequency(frequency), user);
    }
    throw std::logic_error("design_for_user: unknown design criterion");
}

// -------------------------------------------------------- frequency sweeps

struct sweep_row {
    design_criterion design;
    double frequency_hz = 0.0;
    double gain = 0.0; // linear
};

inline std::vector<double> sweep_frequencies(const scenario_config &config, std::size_t n_points) {
    std::vector<double> f(n_points);
    const double f_lo = config.carrier_frequency_hz - 0.5 * config.bandwidth_hz;
    for (std::size_t i = 0; i < n_points; ++i)
        f[i] = f_lo + config.bandwidth_hz * static_cast<double>(i) /
                          static_cast<double>(n_points - 1);
    return f;
}

// Deterministic gain of each design across the band for one user. The
// coherent genie is re-matched at every frequency; non-coherent designs are
// computed once at the carrier unless config.recompute_per_frequency is set.
inline std::vector<sweep_row> frequency_sweep(const synthetic_scenario &scen,
                                              const std::vector<design_criterion> &designs,
                                              std::size_t n_points, std::size_t user = 0,
                                              const dc_options &opts = {}) {
    const scenario_config &config = scen.config;
    if (n_points < 2)
        throw std::invalid_argument("frequency_sweep: need at least two frequency points");
    if (user >= scen.user_paths.size())
        throw std::invalid_argument("frequency_sweep: user index out of range");
    const std::vector<double> freqs = sweep_frequencies(config, n_points);

    std::vector<beamformer> fixed;
    fixed.reserve(designs.size());
    for (design_criterion d : designs)
        fixed.push_back(d == design_criterion::coherent
                            ? uniform_bf(scen.geometry.num_elements()) // placeholder
                            : design_for_user(d, scen, user, config.carrier_frequency_hz, opts));

    std::vector<sweep_row> rows(designs.size() * n_points);
    parallel_for(n_points, [&](std::size_t i) {
        const double f = freqs[i];
        const cvec h = scen.true_channel(user, f);
        for (std::size_t d = 0; d < designs.size(); ++d) {
            double gain = 0.0;
            if (designs[d] == design_criterion::coherent) {
                gain = h.squaredNorm();
            } else if (config.recompute_per_frequency) {
                gain = std::norm(design_for_user(designs[d], scen, user, f, opts).g.dot(h));
            } else {
                gain = std::norm(fixed[d].g.dot(h));
            }
            rows[d * n_points + i] = {designs[d], f, gain};
        }
    });
    return rows;
}

inline std::vector<sweep_row> frequency_sweep(const scenario_config &config,
                                              const std::vector<design_criterion> &designs,
                                              std::size_t n_points, std::size_t user = 0,
                                              const dc_options &opts = {}) {
    return frequency_sweep(generate_scenario(config), designs, n_points, user, opts);
}

// -------------------------------------------------------------- CDF studies

struct cdf_table_row {
    design_criterion design;
    int user = -1; // -1: pooled over users/locations
    std::string metric;
    double value_db = 0.0;
    double probability = 0.0;
};

namespace detail {

inline void append_cdf_rows(std::vector<cdf_table_row> &rows, design_criterion design,
                            const std::string &metric, std::vector<double> samples_db) {
    const empirical_cdf_result cdf = empirical_cdf(std::move(samples_db));
    for (std::size_t i = 0; i < cdf.values.size(); ++i)
        rows.push_back({design, -1, metric, cdf.values[i], cdf.probabilities[i]});
}

} // namespace detail

// Single-user study: num_locations independent drops of one user; each
// design's deterministic gain is collected over all locations and
// subcarriers and pooled into one CDF per design.
inline std::vector<cdf_table_row> su_cdf_study(const scenario_config &config,
                                               const std::vector<design_criterion> &designs,
                                               const dc_options &opts = {}) {
    config.validate();
    const std::size_t locations = config.num_locations;
    const std::size_t n_freq = config.num_subcarriers;

    std::vector<std::vector<std::vector<double>>> gains(
        designs.size(), std::vector<std::vector<double>>(locations));

    parallel_for(locations, [&](std::size_t loc) {
        scenario_config local = config;
        local.num_users = 1;
        local.snr_db = {config.snr_db_for(0)};
        local.seed = derive_seed(config.seed, loc);
        const synthetic_scenario scen = generate_scenario(local);
        const std::vector<double> freqs =
            n_freq > 1 ? sweep_frequencies(local, n_freq)
                       : std::vector<double>{config.carrier_frequency_hz};

        std::vector<beamformer> fixed(designs.size());
        for (std::size_t d = 0; d < designs.size(); ++d)
            if (designs[d] != design_criterion::coherent)
                fixed[d] = design_for_user(designs[d], scen, 0, config.carrier_frequency_hz, opts);

        for (std::size_t d = 0; d < designs.size(); ++d)
            gains[d][loc].reserve(freqs.size());
        for (double f : freqs) {
            const cvec h = scen.true_channel(0, f);
            for (std::size_t d = 0; d < designs.size(); ++d) {
                double gain = 0.0;
                if (designs[d] == design_criterion::coherent)
                    gain = h.squaredNorm();
                else if (config.recompute_per_frequency)
                    gain = std::norm(design_for_user(designs[d], scen, 0, f, opts).g.dot(h));
                else
                    gain = std::norm(fixed[d].g.dot(h));
                gains[d][loc].push_back(gain);
            }
        }
    });

    std::vector<cdf_table_row> rows;
    for (std::size_t d = 0; d < designs.size(); ++d) {
        std::vector<double> pooled;
        pooled.reserve(locations * n_freq);
        for (const auto &per_loc : gains[d])
            for (double g : per_loc)
                pooled.push_back(to_db(g));
        detail::append_cdf_rows(rows, designs[d], "gain_db", std::move(pooled));
    }
    return rows;
}

// Multi-user study: num_locations independent selections of num_users
// users; per selection the per-user designs are evaluated at the carrier
// with num_draws phase draws, and SINRs are pooled per design.
inline std::vector<cdf_table_row> mu_cdf_study(const scenario_config &config,
                                               const std::vector<design_criterion> &designs,
                                               std::size_t num_draws,
                                               const dc_options &opts = {}) {
    config.validate();
    if (num_draws < 1)
        throw std::invalid_argument("mu_cdf_study: need at least one draw");
    const std::size_t selections = config.num_locations;
    const std::size_t num_users = config.num_users;

    struct selection_result {
        std::vector<std::vector<double>> sinr_db;            // per design, pooled users+draws
        std::vector<std::vector<double>> stationary_sinr_db; // per design, per user
    };
    std::vector<selection_result> results(selections);

    parallel_for(selections, [&](std::size_t sel) {
        scenario_config local = config;
        local.seed = derive_seed(config.seed, sel);
        const synthetic_scenario scen = generate_scenario(local);
        const multiuser_scenario mu = scen.at_frequency(config.carrier_frequency_hz);
        const std::uint64_t eval_seed = derive_seed(local.seed, 0x00e7a1);

        selection_result &res = results[sel];
        res.sinr_db.resize(designs.size());
        res.stationary_sinr_db.resize(designs.size());

        for (std::size_t d = 0; d < designs.size(); ++d) {
            if (designs[d] == design_criterion::coherent) {
                // Per-draw matched filters: every user's beam follows its own
                // channel realization; interference is whatever leaks.
                std::vector<std::mt19937_64> rngs;
                for (std::size_t k = 0; k < num_users; ++k)
                    rngs.push_back(make_rng(eval_seed, k));
                std::vector<cvec> h(num_users);
                res.sinr_db[d].reserve(num_users * num_draws);
                for (std::size_t i = 0; i < num_draws; ++i) {
                    std::vector<cvec> g(num_users);
                    for (std::size_t k = 0; k < num_users; ++k) {
                        const auto paths =
                            static_cast<std::size_t>(mu.users[k].signatures.num_paths());
                        const cvec v = draw_phase_vector(mu.users[k].phases, paths, rngs[k]);
                        h[k] = mu.users[k].signatures.signatures * v;
                        g[k] = h[k].normalized();
                    }
                    for (std::size_t k = 0; k < num_users; ++k) {
                        const double signal = mu.symbol_powers[k] * std::norm(g[k].dot(h[k]));
                        double interference = 0.0;
                        for (std::size_t j = 0; j < num_users; ++j)
                            if (j != k)
                                interference += mu.symbol_powers[j] * std::norm(g[j].dot(h[k]));
                        res.sinr_db[d].push_back(
                            to_db(signal / (interference + mu.noise_variance)));
                    }
                }
                continue;
            }

            std::vector<beamformer> bfs;
            bfs.reserve(num_users);
            for (std::size_t k = 0; k < num_users; ++k)
                bfs.push_back(
                    design_for_user(designs[d], scen, k, config.carrier_frequency_hz, opts));
            const auto evals = evaluate_mu(mu, bfs, num_draws, eval_seed);
            res.sinr_db[d].reserve(num_users * num_draws);
            for (std::size_t k = 0; k < num_users; ++k) {
                res.stationary_sinr_db[d].push_back(to_db(evals[k].stationary_sinr));
                for (double s : evals[k].sinr_samples)
                    res.sinr_db[d].push_back(to_db(s));
            }
        }
    });

    std::vector<cdf_table_row> rows;
    for (std::size_t d = 0; d < designs.size(); ++d) {
        std::vector<double> pooled;
        std::vector<double> pooled_stationary;
        for (const auto &res : results) {
            pooled.insert(pooled.end(), res.sinr_db[d].begin(), res.sinr_db[d].end());
            pooled_stationary.insert(pooled_stationary.end(), res.stationary_sinr_db[d].begin(),
                                     res.stationary_sinr_db[d].end());
        }
        detail::append_cdf_rows(rows, designs[d], "sinr_db", std::move(pooled));
        if (!pooled_stationary.empty())
            detail::append_cdf_rows(rows, designs[d], "stationary_sinr_db",
                                    std::move(pooled_stationary));
    }
    return rows;
}

} // namespace noncobf

#endif // NONCOBF_EVAL_HARNESS_HPP
