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
// Array geometry, steering vectors, per-path spatial signatures and phase
// models. A narrowband multipath channel is factored as h = A v where the
// columns of A are gain-scaled steering vectors and v stacks the unit-modulus
// per-path phase terms.

#ifndef NONCOBF_ARRAY_CHANNEL_HPP
#define NONCOBF_ARRAY_CHANNEL_HPP

#include "noncobf/types.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <variant>

namespace noncobf {

// ---------------------------------------------------------------- geometry

class array_geometry {
  public:
    // positions: one 3-vector per element, meters.
    array_geometry(std::vector<Eigen::Vector3d> positions, double reference_wavelength)
        : positions_(std::move(positions)), reference_wavelength_(reference_wavelength) {
        if (positions_.empty())
            throw std::invalid_argument("array_geometry: need at least one element");
        if (!(reference_wavelength_ > 0.0) || !std::isfinite(reference_wavelength_))
            throw std::invalid_argument("array_geometry: reference wavelength must be positive");
        for (const auto &p : positions_)
            if (!p.allFinite())
                throw std::invalid_argument("array_geometry: non-finite element position");
        for (std::size_t i = 0; i < positions_.size(); ++i)
            for (std::size_t j = i + 1; j < positions_.size(); ++j)
                if ((positions_[i] - positions_[j]).norm() == 0.0)
                    throw std::invalid_argument("array_geometry: duplicate element positions");
    }

    // Planar grid in the y-z plane (broadside along +x), centered on the
    // origin. n_horizontal along y, n_vertical along z.
    static array_geometry rectangular(std::size_t n_horizontal, std::size_t n_vertical,
                                      double reference_wavelength,
                                      double spacing_in_wavelengths = 0.5) {
        if (n_horizontal == 0 || n_vertical == 0)
            throw std::invalid_argument("array_geometry::rectangular: grid dimensions must be >= 1");
        if (!(spacing_in_wavelengths > 0.0))
            throw std::invalid_argument("array_geometry::rectangular: spacing must be positive");
        const double d = spacing_in_wavelengths * reference_wavelength;
        std::vector<Eigen::Vector3d> pos;
        pos.reserve(n_horizontal * n_vertical);
        const double y0 = 0.5 * static_cast<double>(n_horizontal - 1);
        const double z0 = 0.5 * static_cast<double>(n_vertical - 1);
        for (std::size_t iv = 0; iv < n_vertical; ++iv)
            for (std::size_t ih = 0; ih < n_horizontal; ++ih)
                pos.emplace_back(0.0, (static_cast<double>(ih) - y0) * d,
                                 (static_cast<double>(iv) - z0) * d);
        return array_geometry(std::move(pos), reference_wavelength);
    }

    std::size_t num_elements() const { return positions_.size(); }
    const std::vector<Eigen::Vector3d> &element_positions() const { return positions_; }
    double reference_wavelength() const { return reference_wavelength_; }

  private:
    std::vector<Eigen::Vector3d> positions_;
    double reference_wavelength_;
};

// Unit propagation direction for azimuth phi / elevation theta.
inline Eigen::Vector3d direction_vector(double azimuth, double elevation) {
    return {std::cos(elevation) * std::cos(azimuth), std::cos(elevation) * std::sin(azimuth),
            std::sin(elevation)};
}

// Plane-wave steering vector for isotropic elements:
// entry n = exp(-j 2 pi (f/c) <u, p_n>).
inline cvec steering_vector(const array_geometry &geometry, double azimuth, double elevation,
                            double frequency) {
    if (!std::isfinite(azimuth) || !std::isfinite(elevation))
        throw std::invalid_argument("steering_vector: non-finite angles");
    if (!(frequency > 0.0) || !std::isfinite(frequency))
        throw std::invalid_argument("steering_vector: frequency must be positive");
    const Eigen::Vector3d u = direction_vector(azimuth, elevation);
    const double k = kTwoPi * frequency / kSpeedOfLight;
    const std::size_t n = geometry.num_elements();
    cvec a(n);
    for (std::size_t i = 0; i < n; ++i)
        a(static_cast<Eigen::Index>(i)) = std::polar(1.0, -k * u.dot(geometry.element_positions()[i]));
    return a;
}

// ------------------------------------------------------------------- paths

struct path_component {
    double gain_magnitude = 1.0; // |alpha|, >= 0
    double delay_s = 0.0;
    double doppler_hz = 0.0;
    double azimuth_rad = 0.0;
    double elevation_rad = 0.0;
    double nominal_phase_rad = 0.0; // mean of the path phase (carries arg(alpha))
    double phase_spread_rad = 0.0;  // std of the path phase, >= 0

    void validate() const {
        if (!(gain_magnitude >= 0.0) || !std::isfinite(gain_magnitude))
            throw std::invalid_argument("path_component: gain magnitude must be >= 0");
        if (!(phase_spread_rad >= 0.0) || !std::isfinite(phase_spread_rad))
            throw std::invalid_argument("path_component: phase spread must be >= 0");
        if (!std::isfinite(azimuth_rad) || !std::isfinite(elevation_rad) ||
            !std::isfinite(nominal_phase_rad) || !std::isfinite(delay_s) ||
            !std::isfinite(doppler_hz))
            throw std::invalid_argument("path_component: non-finite parameter");
    }
};

struct signature_set {
    cmat signatures;         // N x L, column l = |alpha_l| * steering vector of path l
    double carrier_frequency = 0.0;

    Eigen::Index num_antennas() const { return signatures.rows(); }
    Eigen::Index num_paths() const { return signatures.cols(); }
};

// Column l = gain_l * steering(az_l, el_l, f). All deterministic phase (gain
// argument, delay term, Doppler at the evaluation time) lives in the phase
// means, see path_phase_means().
inline signature_set synthesize_signatures(const std::vector<path_component> &paths,
                                           const array_geometry &geometry, double frequency) {
    if (paths.empty())
        throw std::invalid_argument("synthesize_signatures: need at least one path");
    bool any_positive = false;
    for (const auto &p : paths) {
        p.validate();
        any_positive = any_positive || p.gain_magnitude > 0.0;
    }
    if (!any_positive)
        throw std::invalid_argument("synthesize_signatures: all path gains are zero");
    signature_set set;
    set.carrier_frequency = frequency;
    set.signatures.resize(static_cast<Eigen::Index>(geometry.num_elements()),
                          static_cast<Eigen::Index>(paths.size()));
    for (std::size_t l = 0; l < paths.size(); ++l)
        set.signatures.col(static_cast<Eigen::Index>(l)) =
            paths[l].gain_magnitude *
            steering_vector(geometry, paths[l].azimuth_rad, paths[l].elevation_rad, frequency);
    return set;
}

// Effective phase mean of each path at (frequency, time):
// mu_l(f, t) = nominal_phase_l - 2 pi f tau_l + 2 pi t nu_l.
inline std::vector<double> path_phase_means(const std::vector<path_component> &paths,
                                            double frequency, double time_s = 0.0) {
    std::vector<double> mu(paths.size());
    for (std::size_t l = 0; l < paths.size(); ++l)
        mu[l] = paths[l].nominal_phase_rad - kTwoPi * frequency * paths[l].delay_s +
                kTwoPi * time_s * paths[l].doppler_hz;
    return mu;
}

// ------------------------------------------------------------ phase models

struct iid_uniform_phases {};

struct known_phases {
    std::vector<double> phases_rad;
};

struct wrapped_gaussian_phases {
    std::vector<double> means_rad;
    std::vector<double> spreads_rad;
};

struct explicit_correlation {
    cmat correlation; // L x L, Hermitian PSD with unit diagonal
};

using phase_model =
    std::variant<iid_uniform_phases, known_phases, wrapped_gaussian_phases, explicit_correlation>;

namespace detail {

inline void check_model_dimension(std::size_t have, std::size_t want, const char *what) {
    if (have != want)
        throw std::invalid_argument(std::string("phase model dimension mismatch in ") + what +
                                    ": model has " + std::to_string(have) + ", expected " +
                                    std::to_string(want));
}

inline void validate_explicit_correlation(const cmat &r) {
    if (r.rows() != r.cols() || r.rows() < 1)
        throw std::invalid_argument("explicit_correlation: matrix must be square and non-empty");
    const double scale = r.cwiseAbs().maxCoeff();
    if ((r - r.adjoint()).cwiseAbs().maxCoeff() > 1e-8 * std::max(scale, 1.0))
        throw std::invalid_argument("explicit_correlation: matrix is not Hermitian");
    for (Eigen::Index i = 0; i < r.rows(); ++i)
        if (std::abs(r(i, i) - cplx(1.0, 0.0)) > 1e-8)
            throw std::invalid_argument("explicit_correlation: diagonal entries must equal 1");
    for (Eigen::Index i = 0; i < r.rows(); ++i)
        for (Eigen::Index j = 0; j < r.cols(); ++j)
            if (i != j && std::abs(r(i, j)) > 1.0 + 1e-8)
                throw std::invalid_argument(
                    "explicit_correlation: off-diagonal modulus exceeds 1");
    Eigen::SelfAdjointEigenSolver<cmat> eig((0.5 * (r + r.adjoint())).eval());
    if (eig.eigenvalues().minCoeff() < -1e-8 * std::max(eig.eigenvalues().maxCoeff(), 1.0))
        throw std::invalid_argument("explicit_correlation: matrix is not positive semidefinite");
}

} // namespace detail

// Phase correlation matrix R = E[v v^H] of the unit-modulus phase vector.
inline cmat phase_correlation(const phase_model &model, std::size_t num_paths) {
    const auto l = static_cast<Eigen::Index>(num_paths);
    if (num_paths == 0)
        throw std::invalid_argument("phase_correlation: need at least one path");
    return std::visit(
        [&](const auto &m) -> cmat {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, iid_uniform_phases>) {
                return cmat::Identity(l, l);
            } else if constexpr (std::is_same_v<T, known_phases>) {
                detail::check_model_dimension(m.phases_rad.size(), num_paths, "phase_correlation");
                cvec v0(l);
                for (Eigen::Index i = 0; i < l; ++i)
                    v0(i) = std::polar(1.0, m.phases_rad[static_cast<std::size_t>(i)]);
                return v0 * v0.adjoint();
            } else if constexpr (std::is_same_v<T, wrapped_gaussian_phases>) {
                detail::check_model_dimension(m.means_rad.size(), num_paths, "phase_correlation");
                detail::check_model_dimension(m.spreads_rad.size(), num_paths, "phase_correlation");
                cmat r(l, l);
                for (Eigen::Index i = 0; i < l; ++i) {
                    for (Eigen::Index j = 0; j < l; ++j) {
                        if (i == j) {
                            r(i, j) = 1.0;
                            continue;
                        }
                        const auto si = m.spreads_rad[static_cast<std::size_t>(i)];
                        const auto sj = m.spreads_rad[static_cast<std::size_t>(j)];
                        // Gaussian characteristic function: E e^{j(eps_i - eps_j)}
                        r(i, j) = std::polar(std::exp(-0.5 * (si * si + sj * sj)),
                                             m.means_rad[static_cast<std::size_t>(i)] -
                                                 m.means_rad[static_cast<std::size_t>(j)]);
                    }
                }
                return r;
            } else {
                static_assert(std::is_same_v<T, explicit_correlation>);
                detail::check_model_dimension(static_cast<std::size_t>(m.correlation.rows()),
                                              num_paths, "phase_correlation");
                detail::validate_explicit_correlation(m.correlation);
                return m.correlation;
            }
        },
        model);
}

// One random unit-modulus phase vector. ExplicitR carries only second
// moments, so it cannot be sampled.
inline cvec draw_phase_vector(const phase_model &model, std::size_t num_paths,
                              std::mt19937_64 &rng) {
    const auto l = static_cast<Eigen::Index>(num_paths);
    if (num_paths == 0)
        throw std::invalid_argument("draw_phase_vector: need at least one path");
    return std::visit(
        [&](const auto &m) -> cvec {
            using T = std::decay_t<decltype(m)>;
            cvec v(l);
            if constexpr (std::is_same_v<T, iid_uniform_phases>) {
                std::uniform_real_distribution<double> uni(0.0, kTwoPi);
                for (Eigen::Index i = 0; i < l; ++i)
                    v(i) = std::polar(1.0, uni(rng));
            } else if constexpr (std::is_same_v<T, known_phases>) {
                detail::check_model_dimension(m.phases_rad.size(), num_paths, "draw_phase_vector");
                for (Eigen::Index i = 0; i < l; ++i)
                    v(i) = std::polar(1.0, m.phases_rad[static_cast<std::size_t>(i)]);
            } else if constexpr (std::is_same_v<T, wrapped_gaussian_phases>) {
                detail::check_model_dimension(m.means_rad.size(), num_paths, "draw_phase_vector");
                detail::check_model_dimension(m.spreads_rad.size(), num_paths,
                                              "draw_phase_vector");
                std::normal_distribution<double> gauss(0.0, 1.0);
                for (Eigen::Index i = 0; i < l; ++i) {
                    const auto k = static_cast<std::size_t>(i);
                    const double s = m.spreads_rad[k];
                    v(i) = std::polar(1.0, m.means_rad[k] + (s > 0.0 ? s * gauss(rng) : 0.0));
                }
            } else {
                static_assert(std::is_same_v<T, explicit_correlation>);
                throw unsupported_sampling_error(
                    "draw_phase_vector: explicit correlation matrices define no joint "
                    "distribution to sample from");
            }
            return v;
        },
        model);
}

inline bool supports_sampling(const phase_model &model) {
    return !std::holds_alternative<explicit_correlation>(model);
}

// ----------------------------------------------------------- realizations

struct channel_realization {
    cvec h; // N
    cvec v; // L, unit-modulus entries
};

inline channel_realization realize_channel(const signature_set &set, const cvec &v) {
    if (v.size() != set.num_paths())
        throw std::invalid_argument("realize_channel: phase vector length does not match the "
                                    "number of signature columns");
    return {set.signatures * v, v};
}

} // namespace noncobf

#endif // NONCOBF_ARRAY_CHANNEL_HPP
