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
// Multi-user designs. Zero forcing projects each user's signatures onto the
// orthogonal complement of every other user's signature span, which cancels
// inter-user interference for every phase realization; the single-user
// designs then apply unchanged to the deflated signatures. Regularized ZF
// maximizes the stationary signal-to-leakage-and-noise ratio instead, via a
// generalized eigenproblem.

#ifndef NONCOBF_MU_BEAMFORMERS_HPP
#define NONCOBF_MU_BEAMFORMERS_HPP

#include "noncobf/array_channel.hpp"
#include "noncobf/spectral_core.hpp"
#include "noncobf/su_beamformers.hpp"
#include "noncobf/types.hpp"

#include <cmath>

namespace noncobf {

struct user_channel {
    signature_set signatures;
    phase_model phases;
};

struct multiuser_scenario {
    std::vector<user_channel> users;
    std::vector<double> symbol_powers; // p_k, linear
    double noise_variance = 1.0;       // sigma^2, linear

    std::size_t num_users() const { return users.size(); }

    void validate() const {
        if (users.empty())
            throw std::invalid_argument("multiuser_scenario: need at least one user");
        if (symbol_powers.size() != users.size())
            throw std::invalid_argument("multiuser_scenario: one symbol power per user required");
        const Eigen::Index n = users.front().signatures.num_antennas();
        for (const auto &u : users)
            if (u.signatures.num_antennas() != n)
                throw std::invalid_argument("multiuser_scenario: users disagree on antenna count");
        for (double p : symbol_powers)
            if (!(p > 0.0) || !std::isfinite(p))
                throw std::invalid_argument("multiuser_scenario: symbol powers must be positive");
        if (!(noise_variance > 0.0) || !std::isfinite(noise_variance))
            throw std::invalid_argument("multiuser_scenario: noise variance must be positive");
    }

    cmat user_correlation(std::size_t k) const {
        return phase_correlation(users[k].phases,
                                 static_cast<std::size_t>(users[k].signatures.num_paths()));
    }
};

namespace detail {

inline void check_user_index(const multiuser_scenario &s, std::size_t k) {
    s.validate();
    if (k >= s.num_users())
        throw std::invalid_argument("user index out of range");
}

} // namespace detail

// Horizontal concatenation of every other user's signature matrix (N x 0
// for a single user).
inline cmat interference_matrix(const multiuser_scenario &scenario, std::size_t k) {
    detail::check_user_index(scenario, k);
    const Eigen::Index n = scenario.users.front().signatures.num_antennas();
    Eigen::Index total = 0;
    for (std::size_t j = 0; j < scenario.num_users(); ++j)
        if (j != k)
            total += scenario.users[j].signatures.num_paths();
    cmat ring(n, total);
    Eigen::Index col = 0;
    for (std::size_t j = 0; j < scenario.num_users(); ++j) {
        if (j == k)
            continue;
        const auto &a = scenario.users[j].signatures.signatures;
        ring.middleCols(col, a.cols()) = a;
        col += a.cols();
    }
    return ring;
}

// Projector onto the left null space of the interference matrix. Any unit
// beamformer in its range yields g^H A_k' v = 0 for all other users k' and
// all phase vectors v.
inline projector zf_prebeamformer(const multiuser_scenario &scenario, std::size_t k,
                                  double rank_tol = kDefaultRankTol) {
    return null_space_projector(interference_matrix(scenario, k), rank_tol);
}

namespace detail {

inline signature_set deflated_signatures(const multiuser_scenario &scenario, std::size_t k,
                                         const projector &p) {
    const auto &a = scenario.users[k].signatures;
    signature_set deflated;
    deflated.carrier_frequency = a.carrier_frequency;
    deflated.signatures = p.p * a.signatures;
    const double anorm = a.signatures.norm();
    if (deflated.signatures.norm() <= 1e-8 * anorm)
        throw zf_infeasible_error(k, scenario.num_users());
    return deflated;
}

} // namespace detail

// ZF-lifted stationary design: stationary beamformer of the deflated
// signature set P_k A_k, then mapped back through P_k (a numerical no-op by
// idempotence).
inline beamformer zf_stationary_bf(const multiuser_scenario &scenario, std::size_t k,
                                   double rank_tol = kDefaultRankTol) {
    detail::check_user_index(scenario, k);
    const projector p = zf_prebeamformer(scenario, k, rank_tol);
    const signature_set deflated = detail::deflated_signatures(scenario, k, p);
    beamformer bf = stationary_bf(deflated, scenario.user_correlation(k));
    bf.criterion = design_criterion::zf_stationary;
    bf.g = p.p * bf.g;
    bf.g.normalize();
    return bf;
}

// ZF-lifted worst-case design: the single-user DC algorithm on P_k a_{k,l}.
inline beamformer zf_worst_case_bf(const multiuser_scenario &scenario, std::size_t k,
                                   const dc_options &opts = {},
                                   double rank_tol = kDefaultRankTol) {
    detail::check_user_index(scenario, k);
    const projector p = zf_prebeamformer(scenario, k, rank_tol);
    const signature_set deflated = detail::deflated_signatures(scenario, k, p);
    beamformer bf = worst_case_bf(deflated, opts);
    bf.criterion = design_criterion::zf_worst_case;
    bf.g = p.p * bf.g;
    if (bf.g.norm() > 0.0)
        bf.g.normalize();
    bf.objective_value = worst_case_power(bf.g, deflated);
    return bf;
}

// Regularized ZF: dominant generalized eigenvector of
// (A_k R_k A_k^H, ring(A)_k ring(R)_k ring(A)_k^H + rho_k I), rho_k =
// sigma^2 / p_k. The objective is the achieved stationary SLNR.
inline beamformer rzf_slnr_bf(const multiuser_scenario &scenario, std::size_t k) {
    detail::check_user_index(scenario, k);
    const Eigen::Index n = scenario.users.front().signatures.num_antennas();
    const double rho = scenario.noise_variance / scenario.symbol_powers[k];

    cmat num = scenario.users[k].signatures.signatures * scenario.user_correlation(k) *
               scenario.users[k].signatures.signatures.adjoint();
    num = 0.5 * (num + num.adjoint()).eval();

    cmat den = rho * cmat::Identity(n, n);
    for (std::size_t j = 0; j < scenario.num_users(); ++j) {
        if (j == k)
            continue;
        const auto &aj = scenario.users[j].signatures.signatures;
        den += aj * scenario.user_correlation(j) * aj.adjoint();
    }
    den = 0.5 * (den + den.adjoint()).eval();

    beamformer bf;
    bf.criterion = design_criterion::rzf_stationary;
    bf.g = generalized_dominant_eigvec(num, den);
    const double signal = std::real(bf.g.dot(num * bf.g));
    const double leak_noise = std::real(bf.g.dot(den * bf.g));
    bf.objective_value = signal / leak_noise;
    return bf;
}

} // namespace noncobf

#endif // NONCOBF_MU_BEAMFORMERS_HPP
