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
// Synthetic multipath scenario generator. Produces two qualitative regimes:
// NLOS-like (many comparable paths with an exponential power profile) and
// LOS-like (one dominant path plus weak scatterers), with users dropped
// uniformly in a disc around the base station. Deterministic given the seed.

#ifndef NONCOBF_SCENARIO_HPP
#define NONCOBF_SCENARIO_HPP

#include "noncobf/array_channel.hpp"
#include "noncobf/mu_beamformers.hpp"
#include "noncobf/types.hpp"

#include <cmath>
#include <string>

namespace noncobf {

enum class propagation_mode { nlos_like, los_like };

enum class phase_knowledge { iid_uniform, wrapped_gaussian, known };

struct array_config {
    std::size_t n_horizontal = 16;
    std::size_t n_vertical = 8;
    double spacing_wavelengths = 0.5;
};

struct scenario_config {
    std::uint64_t seed = 1;
    std::size_t num_users = 5;
    std::size_t paths_per_user = 20;     // lower end when a range is given
    std::size_t paths_per_user_max = 0;  // 0: fixed count; else uniform in [min, max]
    double cell_radius_m = 200.0;
    array_config array;
    double carrier_frequency_hz = 2.0e9;
    double bandwidth_hz = 10.0e6;
    std::size_t num_subcarriers = 51;
    propagation_mode mode = propagation_mode::nlos_like;
    double rician_factor_db = 10.0; // LOS-like only
    std::vector<double> snr_db = {10.0}; // scalar broadcasts to all users
    phase_knowledge phase_kind = phase_knowledge::iid_uniform;
    double phase_spread_rad = 0.0; // wrapped_gaussian only
    std::size_t num_locations = 100; // locations / user selections in CDF studies
    bool recompute_per_frequency = false; // redesign non-coherent beamformers per subcarrier

    void validate() const {
        if (num_users < 1)
            throw std::invalid_argument("scenario_config: num_users must be >= 1");
        if (paths_per_user < 1)
            throw std::invalid_argument("scenario_config: paths_per_user must be >= 1");
        if (paths_per_user_max != 0 && paths_per_user_max < paths_per_user)
            throw std::invalid_argument(
                "scenario_config: paths_per_user range must satisfy max >= min");
        if (!(cell_radius_m > 0.0))
            throw std::invalid_argument("scenario_config: cell_radius_m must be positive");
        if (array.n_horizontal < 1 || array.n_vertical < 1)
            throw std::invalid_argument("scenario_config: array dimensions must be >= 1");
        if (!(array.spacing_wavelengths > 0.0))
            throw std::invalid_argument("scenario_config: element spacing must be positive");
        if (!(carrier_frequency_hz > 0.0))
            throw std::invalid_argument("scenario_config: carrier frequency must be positive");
        if (!(bandwidth_hz > 0.0))
            throw std::invalid_argument("scenario_config: bandwidth must be positive");
        if (num_subcarriers < 1)
            throw std::invalid_argument("scenario_config: num_subcarriers must be >= 1");
        if (!std::isfinite(rician_factor_db))
            throw std::invalid_argument("scenario_config: rician factor must be finite");
        if (snr_db.empty() || (snr_db.size() != 1 && snr_db.size() != num_users))
            throw std::invalid_argument("scenario_config: snr_db must have 1 or num_users entries");
        if (!(phase_spread_rad >= 0.0))
            throw std::invalid_argument("scenario_config: phase spread must be >= 0");
        if (num_locations < 1)
            throw std::invalid_argument("scenario_config: num_locations must be >= 1");
    }

    double snr_db_for(std::size_t k) const { return snr_db.size() == 1 ? snr_db[0] : snr_db[k]; }
    std::size_t num_antennas() const { return array.n_horizontal * array.n_vertical; }
};

// A generated drop: geometry plus per-user path parameters. Signature sets
// and phase models are synthesized on demand at any subcarrier frequency.
struct synthetic_scenario {
    scenario_config config;
    array_geometry geometry;
    std::vector<std::vector<path_component>> user_paths;

    phase_model model_for(std::size_t k, double frequency, double time_s = 0.0) const {
        switch (config.phase_kind) {
        case phase_knowledge::iid_uniform:
            return iid_uniform_phases{};
        case phase_knowledge::known:
            return known_phases{path_phase_means(user_paths[k], frequency, time_s)};
        case phase_knowledge::wrapped_gaussian: {
            wrapped_gaussian_phases wg;
            wg.means_rad = path_phase_means(user_paths[k], frequency, time_s);
            wg.spreads_rad.reserve(user_paths[k].size());
            for (const auto &p : user_paths[k])
                wg.spreads_rad.push_back(p.phase_spread_rad);
            return wg;
        }
        }
        throw std::logic_error("synthetic_scenario: unknown phase knowledge kind");
    }

    signature_set signatures_for(std::size_t k, double frequency) const {
        return synthesize_signatures(user_paths[k], geometry, frequency);
    }

    // The realized (deterministic) channel at a frequency: phases at their
    // nominal means including the delay term.
    cvec true_channel(std::size_t k, double frequency, double time_s = 0.0) const {
        const signature_set a = signatures_for(k, frequency);
        const std::vector<double> mu = path_phase_means(user_paths[k], frequency, time_s);
        cvec v(static_cast<Eigen::Index>(mu.size()));
        for (std::size_t l = 0; l < mu.size(); ++l)
            v(static_cast<Eigen::Index>(l)) = std::polar(1.0, mu[l]);
        return a.signatures * v;
    }

    multiuser_scenario at_frequency(double frequency, double time_s = 0.0) const {
        multiuser_scenario s;
        s.noise_variance = 1.0;
        for (std::size_t k = 0; k < user_paths.size(); ++k) {
            s.users.push_back({signatures_for(k, frequency), model_for(k, frequency, time_s)});
            s.symbol_powers.push_back(std::pow(10.0, config.snr_db_for(k) / 10.0));
        }
        return s;
    }
};

namespace detail {

// Exponential power profile normalized to unit sum, 20 dB decay first->last.
inline std::vector<double> exponential_profile(std::size_t num_paths) {
    std::vector<double> w(num_paths, 1.0);
    if (num_paths > 1) {
        const double beta = std::log(100.0) / static_cast<double>(num_paths - 1);
        for (std::size_t l = 0; l < num_paths; ++l)
            w[l] = std::exp(-beta * static_cast<double>(l));
    }
    double sum = 0.0;
    for (double x : w)
        sum += x;
    for (double &x : w)
        x /= sum;
    return w;
}

} // namespace detail

inline constexpr double kBaseStationHeightM = 20.0;
inline constexpr double kUserHeightM = 1.5;

inline synthetic_scenario generate_scenario(const scenario_config &config) {
    config.validate();
    const double wavelength = kSpeedOfLight / config.carrier_frequency_hz;
    synthetic_scenario scen{config,
                            array_geometry::rectangular(config.array.n_horizontal,
                                                        config.array.n_vertical, wavelength,
                                                        config.array.spacing_wavelengths),
                            {}};
    scen.user_paths.resize(config.num_users);

    for (std::size_t k = 0; k < config.num_users; ++k) {
        std::mt19937_64 rng = make_rng(config.seed, k);
        std::uniform_real_distribution<double> uni01(0.0, 1.0);

        // Uniform drop in the disc.
        const double radius = config.cell_radius_m * std::sqrt(uni01(rng));
        const double bearing = kTwoPi * uni01(rng);
        const double los_azimuth = bearing > kPi ? bearing - kTwoPi : bearing;
        const double los_elevation =
            std::atan2(kUserHeightM - kBaseStationHeightM, std::max(radius, 1.0));

        std::size_t num_paths = config.paths_per_user;
        if (config.paths_per_user_max > config.paths_per_user) {
            std::uniform_int_distribution<std::size_t> count(config.paths_per_user,
                                                             config.paths_per_user_max);
            num_paths = count(rng);
        }
        std::vector<path_component> paths(num_paths);

        std::vector<double> powers;
        if (config.mode == propagation_mode::los_like && num_paths > 1) {
            const double kappa = std::pow(10.0, config.rician_factor_db / 10.0);
            powers.assign(num_paths, 0.0);
            powers[0] = kappa / (1.0 + kappa);
            const std::vector<double> tail = detail::exponential_profile(num_paths - 1);
            for (std::size_t l = 1; l < num_paths; ++l)
                powers[l] = tail[l - 1] / (1.0 + kappa);
        } else if (config.mode == propagation_mode::los_like) {
            powers = {1.0};
        } else {
            powers = detail::exponential_profile(num_paths);
        }

        for (std::size_t l = 0; l < num_paths; ++l) {
            path_component &p = paths[l];
            const bool is_los = config.mode == propagation_mode::los_like && l == 0;
            if (is_los) {
                p.azimuth_rad = los_azimuth;
                p.elevation_rad = los_elevation;
            } else {
                p.azimuth_rad = kPi * (2.0 * uni01(rng) - 1.0);
                p.elevation_rad = 0.25 * kPi * (2.0 * uni01(rng) - 1.0);
            }
            p.delay_s = 1.0e-6 * uni01(rng);
            p.nominal_phase_rad = kTwoPi * uni01(rng);
            p.phase_spread_rad =
                config.phase_kind == phase_knowledge::wrapped_gaussian ? config.phase_spread_rad
                                                                       : 0.0;
            p.doppler_hz = 0.0;
        }

        // Renormalize so the path gains sum to unit power exactly.
        double total = 0.0;
        for (double w : powers)
            total += w;
        for (std::size_t l = 0; l < num_paths; ++l)
            paths[l].gain_magnitude = std::sqrt(powers[l] / total);

        scen.user_paths[k] = std::move(paths);
    }
    return scen;
}

} // namespace noncobf

#endif // NONCOBF_SCENARIO_HPP
