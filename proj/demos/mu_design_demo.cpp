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
// Multi-user walkthrough: drop three users around an 8x4 array, design
// ZF-stationary, ZF-worst-case and regularized-ZF beamformers, and compare
// stationary SINRs against the single-user stationary design that ignores
// interference.

#include "noncobf/eval_harness.hpp"

#include <cstdio>

int main() {
    using namespace noncobf;

    scenario_config config;
    config.seed = 7;
    config.num_users = 3;
    config.paths_per_user = 4;
    config.array = {8, 4, 0.5};
    config.snr_db = {10.0};

    const synthetic_scenario scen = generate_scenario(config);
    const multiuser_scenario mu = scen.at_frequency(config.carrier_frequency_hz);

    const std::vector<design_criterion> designs = {
        design_criterion::stationary,
        design_criterion::zf_stationary,
        design_criterion::zf_worst_case,
        design_criterion::rzf_stationary,
    };

    std::printf("%-14s", "design");
    for (std::size_t k = 0; k < config.num_users; ++k)
        std::printf("   user %zu SINR [dB]", k);
    std::printf("\n");

    for (design_criterion d : designs) {
        std::vector<beamformer> bfs;
        for (std::size_t k = 0; k < config.num_users; ++k)
            bfs.push_back(design_for_user(d, scen, k, config.carrier_frequency_hz));
        const auto evals = evaluate_mu(mu, bfs, 0);
        std::printf("%-14s", design_name(d));
        for (const auto &ev : evals)
            std::printf("   %16.2f", to_db(ev.stationary_sinr));
        std::printf("\n");
    }
    return 0;
}
