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
// Minimal walkthrough: build a three-path user on an 8x4 array, design the
// four single-user beamformers, and print their stationary and worst-case
// gains.

#include "noncobf/eval_harness.hpp"

#include <cstdio>

int main() {
    using namespace noncobf;

    const double fc = 2.0e9;
    const array_geometry geometry = array_geometry::rectangular(8, 4, kSpeedOfLight / fc);

    std::vector<path_component> paths(3);
    paths[0] = {.gain_magnitude = 0.8, .delay_s = 0.1e-6, .azimuth_rad = 0.2, .elevation_rad = -0.1};
    paths[1] = {.gain_magnitude = 0.5, .delay_s = 0.4e-6, .azimuth_rad = -0.6, .elevation_rad = 0.05};
    paths[2] = {.gain_magnitude = 0.33, .delay_s = 0.7e-6, .azimuth_rad = 1.1, .elevation_rad = -0.3};

    const signature_set a = synthesize_signatures(paths, geometry, fc);
    const phase_model model = iid_uniform_phases{};
    const cmat r = phase_correlation(model, paths.size());

    std::vector<beamformer> designs;
    designs.push_back(coherent_bf(a.signatures * cvec::Ones(3)));
    designs.push_back(uniform_bf(geometry.num_elements()));
    designs.push_back(stationary_bf(a, r));
    designs.push_back(worst_case_bf(a));

    std::printf("%-12s %18s %18s\n", "design", "stationary [dB]", "worst-case [dB]");
    for (const auto &bf : designs) {
        const su_evaluation ev = evaluate_su(bf, a, model, 0);
        std::printf("%-12s %18.3f %18.3f\n", design_name(bf.criterion), to_db(ev.stationary_gain),
                    to_db(ev.worst_case_gain));
    }

    const power_bounds bounds = stationary_power_bounds(a, r);
    std::printf("\nstationary power bounds: %.3f dB <= lambda_max <= %.3f dB (rank %zu)\n",
                to_db(bounds.lower), to_db(bounds.upper), bounds.rank);
    return 0;
}
