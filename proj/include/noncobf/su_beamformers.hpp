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
// Single-user beamformer designs: coherent and uniform baselines, the
// stationary (average-power) eigen-beamformer with its trace bounds, and the
// worst-case design solved by difference-of-convex iterations over candidate
// strongest paths. The worst-case power itself has a closed form: with
// z_l = |g^H a_l|, independent per-path phases can shrink the sum to the
// polygon-inequality deficit max(0, max_l z_l - sum of the others), squared.

#ifndef NONCOBF_SU_BEAMFORMERS_HPP
#define NONCOBF_SU_BEAMFORMERS_HPP

#include "noncobf/array_channel.hpp"
#include "noncobf/spectral_core.hpp"
#include "noncobf/types.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>

namespace noncobf {

enum class design_criterion {
    coherent,
    uniform,
    stationary,
    worst_case,
    zf_stationary,
    zf_worst_case,
    rzf_stationary,
};

inline const char *design_name(design_criterion c) {
    switch (c) {
    case design_criterion::coherent: return "coherent";
    case design_criterion::uniform: return "uniform";
    case design_criterion::stationary: return "stationary";
    case design_criterion::worst_case: return "worstcase";
    case design_criterion::zf_stationary: return "zf-stationary";
    case design_criterion::zf_worst_case: return "zf-worstcase";
    case design_criterion::rzf_stationary: return "rzf";
    }
    return "unknown";
}

struct beamformer_diagnostics {
    int iterations = 0;
    bool converged = true;
    bool zero_worst_case = false;
    // One DC objective trace per (candidate path, restart) run.
    std::vector<std::vector<double>> objective_traces;
};

struct beamformer {
    cvec g;
    design_criterion criterion = design_criterion::uniform;
    double objective_value = 0.0;
    beamformer_diagnostics diagnostics;
};

// --------------------------------------------------------------- baselines

// Matched filter g = h/||h||; beamforming power ||h||^2.
inline beamformer coherent_bf(const cvec &h) {
    const double n = h.norm();
    if (n == 0.0)
        throw degenerate_channel_error("coherent_bf: zero channel vector");
    return {h / n, design_criterion::coherent, n * n, {}};
}

inline beamformer uniform_bf(std::size_t num_antennas) {
    if (num_antennas == 0)
        throw std::invalid_argument("uniform_bf: need at least one antenna");
    const auto n = static_cast<Eigen::Index>(num_antennas);
    return {cvec::Constant(n, 1.0 / std::sqrt(static_cast<double>(num_antennas))),
            design_criterion::uniform, 0.0, {}};
}

// -------------------------------------------------------------- stationary

// g = dominant eigenvector of A R A^H; objective = lambda_max = E|g^H h|^2.
inline beamformer stationary_bf(const signature_set &a, const cmat &r) {
    if (r.rows() != a.num_paths() || r.cols() != a.num_paths())
        throw std::invalid_argument("stationary_bf: correlation matrix size does not match the "
                                    "number of paths");
    cmat m = a.signatures * r * a.signatures.adjoint();
    m = 0.5 * (m + m.adjoint()).eval();
    eig_pair top = dominant_eigpair(hermitian_matrix(std::move(m)));
    if (top.degenerate)
        throw degenerate_channel_error("stationary_bf: A R A^H carries no energy");
    return {top.vector, design_criterion::stationary, top.value, {}};
}

struct power_bounds {
    double lower = 0.0;
    double upper = 0.0;       // tr(A R A^H), the coherent stationary power
    std::size_t rank = 0;     // numerical rank of A R A^H
};

// tr/rank <= lambda_max <= tr for the stationary power of the dominant mode.
inline power_bounds stationary_power_bounds(const signature_set &a, const cmat &r,
                                            double rank_tol = kDefaultRankTol) {
    if (r.rows() != a.num_paths() || r.cols() != a.num_paths())
        throw std::invalid_argument("stationary_power_bounds: correlation matrix size mismatch");
    cmat m = a.signatures * r * a.signatures.adjoint();
    m = 0.5 * (m + m.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<cmat> eig(m, Eigen::EigenvaluesOnly);
    const double lam_max = std::max(eig.eigenvalues().maxCoeff(), 0.0);
    if (lam_max == 0.0)
        return {0.0, 0.0, 0};
    std::size_t rank = 0;
    for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i)
        if (eig.eigenvalues()(i) > rank_tol * lam_max)
            ++rank;
    const double upper = std::real(m.trace());
    return {upper / static_cast<double>(rank), upper, rank};
}

// -------------------------------------------------------------- worst case

// Closed-form min over per-path phases of |sum_l g^H a_l e^{j eps_l}|^2.
inline double worst_case_power(const cvec &g, const signature_set &a) {
    if (g.size() != a.num_antennas())
        throw std::invalid_argument("worst_case_power: beamformer length mismatch");
    const Eigen::Index l = a.num_paths();
    double zmax = 0.0;
    double zsum = 0.0;
    for (Eigen::Index i = 0; i < l; ++i) {
        const double z = std::abs(a.signatures.col(i).dot(g)); // |a_i^H g| = |g^H a_i|
        zsum += z;
        zmax = std::max(zmax, z);
    }
    const double slack = zmax - (zsum - zmax);
    return slack > 0.0 ? slack * slack : 0.0;
}

// Phase vector attaining the worst case: the strongest amplitude is opposed
// by all others when it dominates; otherwise the amplitudes are split into
// three bundles closing a triangle (exact zero). Greedy balancing keeps the
// bundle imbalance below the largest amplitude, so the triangle always
// closes when the polygon inequality allows it.
inline std::vector<double> worst_case_phases(const cvec &g, const signature_set &a) {
    if (g.size() != a.num_antennas())
        throw std::invalid_argument("worst_case_phases: beamformer length mismatch");
    const auto l = static_cast<std::size_t>(a.num_paths());
    std::vector<double> z(l), base(l);
    for (std::size_t i = 0; i < l; ++i) {
        const cplx w = g.dot(a.signatures.col(static_cast<Eigen::Index>(i))); // g^H a_i
        z[i] = std::abs(w);
        base[i] = z[i] > 0.0 ? std::arg(w) : 0.0;
    }
    std::vector<std::size_t> order(l);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return z[i] > z[j]; });

    std::vector<double> theta(l, 0.0);
    const double za = z[order[0]];
    double zb = 0.0, zc = 0.0;
    std::vector<bool> in_b(l, false);
    for (std::size_t k = 1; k < l; ++k) {
        const std::size_t idx = order[k];
        if (zb <= zc) {
            zb += z[idx];
            in_b[idx] = true;
        } else {
            zc += z[idx];
        }
    }
    if (zb < zc) {
        std::swap(zb, zc);
        for (std::size_t k = 1; k < l; ++k)
            in_b[order[k]] = !in_b[order[k]];
    }

    if (za >= zb + zc || za == 0.0) {
        for (std::size_t k = 1; k < l; ++k)
            theta[order[k]] = kPi; // everyone opposes the strongest path
    } else {
        const auto clamp1 = [](double x) { return std::clamp(x, -1.0, 1.0); };
        const double beta = std::acos(clamp1((za * za + zb * zb - zc * zc) / (2.0 * za * zb)));
        const double gamma = zc > 0.0
                                 ? std::acos(clamp1((za * za + zc * zc - zb * zb) / (2.0 * za * zc)))
                                 : 0.0;
        for (std::size_t k = 1; k < l; ++k)
            theta[order[k]] = in_b[order[k]] ? kPi - beta : kPi + gamma;
    }

    std::vector<double> eps(l);
    for (std::size_t i = 0; i < l; ++i)
        eps[i] = theta[i] - base[i];
    return eps;
}

// --------------------------------------------------- DC inner convex solve

struct dc_options {
    int max_outer_iters = 100;
    int restarts = 4; // matched filter, stationary, uniform, random, then extra random
    double tol = 1e-8;
    int subgradient_iters = 2000;
    int polish_iters = 100; // upper bound; the polish breaks early once it stalls
    std::uint64_t seed = 1;
};

namespace detail {

// Surrogate phi(g) = -Re(c^H g) + sum_l |g^H a_l| over the others.
inline double dc_surrogate(const cvec &c, const cmat &others, const cvec &g) {
    double val = -std::real(c.dot(g)); // c^H g
    if (others.cols() > 0)
        val += (others.adjoint() * g).cwiseAbs().sum();
    return val;
}

// Minimizes g^H Q g - Re(c^H g) over ||g|| <= 1 with Q = others*diag(s)*others^H,
// s_l = 1/(2 w_l). Low-rank Woodbury form keeps each multiplier probe at
// O(N L + L^3).
inline cvec ball_quadratic_min(const cvec &c, const cmat &others, const rvec &w) {
    const Eigen::Index n = c.size();
    const double cn = c.norm();
    if (others.cols() == 0 || w.size() == 0) {
        if (cn == 0.0)
            return cvec::Zero(n);
        return c / cn;
    }
    if (cn == 0.0)
        return cvec::Zero(n); // pure penalty, minimized at the origin

    const cmat gram = others.adjoint() * others; // L x L
    const cvec rhs = others.adjoint() * c;       // A^H c

    const auto g_of = [&](double nu) -> cvec {
        // (Q + nu I)^{-1} c/2 = (c - A z) / (2 nu), z = (gram + 2 nu W)^{-1} A^H c
        cmat inner = gram;
        inner.diagonal() += (2.0 * nu * w).cast<cplx>();
        const cvec z = inner.ldlt().solve(rhs);
        return (c - others * z) / (2.0 * nu);
    };

    double nu_hi = std::max(0.5 * cn, 1e-30);
    if (g_of(nu_hi).norm() > 1.0)
        nu_hi *= 4.0; // guard against roundoff at the analytic bound
    double nu_lo = 1e-30 * std::max(cn, 1.0);
    if (g_of(nu_lo).norm() <= 1.0)
        return g_of(nu_lo); // interior (or numerically flat) optimum
    for (int it = 0; it < 200; ++it) {
        const double nu = std::sqrt(nu_lo * nu_hi);
        if (g_of(nu).norm() > 1.0)
            nu_lo = nu;
        else
            nu_hi = nu;
        if (nu_hi - nu_lo <= 1e-15 * nu_hi)
            break;
    }
    cvec g = g_of(nu_hi);
    const double gn = g.norm();
    if (gn > 1.0)
        g /= gn;
    return g;
}

} // namespace detail

// One convexified step of the DC iteration: linearizes |g^H a_main| at
// g_init with the subgradient direction c = a_main (a_main^H g_init)/|.|
// (c = a_main at the kink) and minimizes the convex surrogate
// -Re(c^H g) + sum_l |g^H a_l| on the unit ball. Projected subgradient
// descent with diminishing steps does the bulk of the work; a reweighted
// quadratic polish drives the remaining gap down. The returned point never
// scores worse than g_init on the surrogate.
inline cvec dc_inner_solve(const cvec &a_main, const cmat &a_others, const cvec &g_init,
                           double tol, const dc_options &opts = {}) {
    const Eigen::Index n = a_main.size();
    if (g_init.size() != n || (a_others.cols() > 0 && a_others.rows() != n))
        throw std::invalid_argument("dc_inner_solve: dimension mismatch");

    const cplx w0 = a_main.dot(g_init); // a_main^H g_init
    const cvec c = std::abs(w0) > 0.0 ? cvec(a_main * (w0 / std::abs(w0))) : cvec(a_main);

    cvec best = g_init;
    double best_val = detail::dc_surrogate(c, a_others, best);

    if (a_others.cols() == 0) {
        const double cn = c.norm();
        cvec g = cn > 0.0 ? cvec(c / cn) : cvec(cvec::Zero(n));
        if (detail::dc_surrogate(c, a_others, g) < best_val)
            return g;
        return best;
    }

    // Lipschitz bound of the surrogate on the ball.
    double lip = c.norm();
    for (Eigen::Index i = 0; i < a_others.cols(); ++i)
        lip += a_others.col(i).norm();
    const double step0 = lip > 0.0 ? 2.0 / lip : 1.0;

    cvec g = g_init;
    cvec w(a_others.cols()), sg(n);
    for (int it = 0; it < opts.subgradient_iters; ++it) {
        w.noalias() = a_others.adjoint() * g; // w_l = a_l^H g
        for (Eigen::Index i = 0; i < w.size(); ++i) {
            const double aw = std::abs(w(i));
            w(i) = aw > 0.0 ? w(i) / aw : cplx(0.0, 0.0);
        }
        sg.noalias() = a_others * w;
        sg -= c;
        g -= (step0 / std::sqrt(static_cast<double>(it + 1))) * sg;
        const double gn = g.norm();
        if (gn > 1.0)
            g /= gn;
        const double val = detail::dc_surrogate(c, a_others, g);
        if (val < best_val) {
            best_val = val;
            best = g;
        }
    }

    // Reweighted-quadratic polish (majorize |t| by t^2/(2w) + w/2).
    g = best;
    double delta = 1e-3 * std::max(lip, 1e-12);
    const double stall_tol = std::min(0.01 * tol, 1e-12 * (1.0 + std::abs(best_val)));
    double window_best = best_val;
    int since_progress = 0;
    for (int it = 0; it < opts.polish_iters; ++it) {
        rvec w(a_others.cols());
        for (Eigen::Index i = 0; i < a_others.cols(); ++i)
            w(i) = std::max(std::abs(a_others.col(i).dot(g)), delta);
        g = detail::ball_quadratic_min(c, a_others, w);
        const double val = detail::dc_surrogate(c, a_others, g);
        if (val < best_val) {
            best_val = val;
            best = g;
        }
        delta = std::max(delta * 0.25, 1e-15);
        if (delta > 1e-13)
            continue; // still tightening the majorizer
        if (window_best - best_val < stall_tol) {
            if (++since_progress >= 5)
                break;
        } else {
            since_progress = 0;
            window_best = best_val;
        }
    }
    return best;
}

// ------------------------------------------------------- worst-case design

// Max worst-case beamforming power: for each candidate strongest path l',
// run DC iterations on |g^H a_l'| - sum of |g^H a_l| over the others, from
// several starting points, and keep the best beamformer over all runs.
inline beamformer worst_case_bf(const signature_set &a, const dc_options &opts = {}) {
    const Eigen::Index n = a.num_antennas();
    const Eigen::Index num_paths = a.num_paths();
    if (num_paths < 1)
        throw std::invalid_argument("worst_case_bf: need at least one path");

    // Shared starting points: stationary (R = I) and uniform.
    std::optional<cvec> stationary_init;
    try {
        stationary_init = stationary_bf(a, cmat::Identity(num_paths, num_paths)).g;
    } catch (const degenerate_channel_error &) {
    }
    const cvec uniform_init = cvec::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
    std::mt19937_64 rng = make_rng(opts.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    beamformer result;
    result.criterion = design_criterion::worst_case;
    result.g = uniform_init;
    result.objective_value = -1.0;
    result.diagnostics.converged = true;
    int total_iters = 0;

    for (Eigen::Index lp = 0; lp < num_paths; ++lp) {
        const cvec a_main = a.signatures.col(lp);
        cmat others(n, num_paths - 1);
        for (Eigen::Index i = 0, j = 0; i < num_paths; ++i)
            if (i != lp)
                others.col(j++) = a.signatures.col(i);

        const auto dc_objective = [&](const cvec &g) {
            double f = std::abs(a_main.dot(g));
            if (others.cols() > 0)
                f -= (others.adjoint() * g).cwiseAbs().sum();
            return f;
        };

        for (int r = 0; r < std::max(opts.restarts, 1); ++r) {
            cvec g;
            if (r == 0 && a_main.norm() > 0.0)
                g = a_main / a_main.norm();
            else if (r == 1 && stationary_init)
                g = *stationary_init;
            else if (r == 2)
                g = uniform_init;
            else {
                g.resize(n);
                for (Eigen::Index i = 0; i < n; ++i)
                    g(i) = cplx(gauss(rng), gauss(rng));
                g.normalize();
            }

            std::vector<double> trace{dc_objective(g)};
            bool converged = false;
            for (int it = 0; it < opts.max_outer_iters; ++it) {
                g = dc_inner_solve(a_main, others, g, opts.tol, opts);
                ++total_iters;
                trace.push_back(dc_objective(g));
                const std::size_t m = trace.size();
                if (std::abs(trace[m - 1] - trace[m - 2]) < opts.tol) {
                    converged = true;
                    break;
                }
            }
            result.diagnostics.converged = result.diagnostics.converged && converged;
            result.diagnostics.objective_traces.push_back(std::move(trace));

            const double wc = worst_case_power(g, a);
            if (wc > result.objective_value) {
                result.objective_value = wc;
                result.g = g;
            }
        }
    }

    result.diagnostics.iterations = total_iters;
    if (result.g.norm() > 1e-12) {
        result.g.normalize();
        result.objective_value = worst_case_power(result.g, a);
    } else {
        result.g = uniform_init;
        result.objective_value = worst_case_power(result.g, a);
    }
    result.objective_value = std::max(result.objective_value, 0.0);
    result.diagnostics.zero_worst_case = result.objective_value == 0.0;
    return result;
}

} // namespace noncobf

#endif // NONCOBF_SU_BEAMFORMERS_HPP
