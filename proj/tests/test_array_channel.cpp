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

#include "noncobf/array_channel.hpp"
#include "test_util.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace noncobf;
using Catch::Approx;

namespace {
const double kLambda = kSpeedOfLight / 2.0e9;
}

TEST_CASE("rectangular factory builds a centered planar grid") {
    const auto geo = array_geometry::rectangular(16, 8, kLambda);
    REQUIRE(geo.num_elements() == 128);
    Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
    for (const auto &p : geo.element_positions()) {
        REQUIRE(p.x() == 0.0); // grid lives in the y-z plane
        centroid += p;
    }
    REQUIRE(centroid.norm() < 1e-12);

    REQUIRE_THROWS_AS(array_geometry::rectangular(0, 8, kLambda), std::invalid_argument);
    REQUIRE_THROWS_AS(array_geometry({{0, 0, 0}, {0, 0, 0}}, kLambda), std::invalid_argument);
}

TEST_CASE("steering vector: broadside, endfire and norm anchors") {
    const double f = kSpeedOfLight / kLambda;

    SECTION("direction orthogonal to the array plane gives all ones") {
        const auto geo = array_geometry::rectangular(4, 3, kLambda);
        const cvec a = steering_vector(geo, 0.0, 0.0, f);
        REQUIRE((a - cvec::Ones(12)).cwiseAbs().maxCoeff() < 1e-14);
    }

    SECTION("two elements lambda/2 apart along x, endfire along x") {
        const array_geometry geo({{0.0, 0.0, 0.0}, {0.5 * kLambda, 0.0, 0.0}}, kLambda);
        const cvec a = steering_vector(geo, 0.0, 0.0, f);
        REQUIRE(std::abs(a(0) - cplx(1.0, 0.0)) < 1e-14);
        REQUIRE(std::abs(a(1) - cplx(-1.0, 0.0)) < 1e-12);
    }

    SECTION("unit-modulus entries, squared norm N") {
        const auto geo = array_geometry::rectangular(16, 8, kLambda);
        const cvec a = steering_vector(geo, 0.83, -0.41, f);
        REQUIRE(a.squaredNorm() == Approx(128.0).margin(1e-9));
        for (Eigen::Index i = 0; i < a.size(); ++i)
            REQUIRE(std::abs(a(i)) == Approx(1.0).margin(1e-13));
    }

    SECTION("reversing the direction conjugates the steering vector") {
        const auto geo = array_geometry::rectangular(6, 2, kLambda);
        const cvec a = steering_vector(geo, 0.37, 0.21, f);
        const cvec b = steering_vector(geo, 0.37 + kPi, -0.21, f);
        REQUIRE((b - a.conjugate()).cwiseAbs().maxCoeff() < 1e-12);
    }

    SECTION("invalid arguments") {
        const auto geo = array_geometry::rectangular(2, 2, kLambda);
        REQUIRE_THROWS_AS(steering_vector(geo, 0.0, 0.0, 0.0), std::invalid_argument);
        REQUIRE_THROWS_AS(steering_vector(geo, std::nan(""), 0.0, 1e9), std::invalid_argument);
    }
}

TEST_CASE("synthesize_signatures scales steering columns by path gains") {
    const double f = kSpeedOfLight / kLambda;
    const auto geo = array_geometry::rectangular(8, 4, kLambda);
    const double sqrt_n = std::sqrt(32.0);

    SECTION("single broadside path with unit gain") {
        std::vector<path_component> paths(1);
        const signature_set a = synthesize_signatures(paths, geo, f);
        REQUIRE(a.num_paths() == 1);
        REQUIRE((a.signatures.col(0) - cvec::Ones(32)).cwiseAbs().maxCoeff() < 1e-13);
        REQUIRE(a.signatures.col(0).norm() == Approx(sqrt_n));
    }

    SECTION("identical paths produce identical columns") {
        std::vector<path_component> paths(2);
        paths[0].azimuth_rad = paths[1].azimuth_rad = 0.6;
        paths[0].elevation_rad = paths[1].elevation_rad = -0.2;
        paths[1].delay_s = 0.5e-6; // delays differ, signatures must not
        const signature_set a = synthesize_signatures(paths, geo, f);
        REQUIRE((a.signatures.col(0) - a.signatures.col(1)).cwiseAbs().maxCoeff() == 0.0);
    }

    SECTION("gains scale column norms") {
        std::vector<path_component> paths(2);
        paths[0].gain_magnitude = 1.0;
        paths[1].gain_magnitude = 0.5;
        paths[1].azimuth_rad = 1.2;
        const signature_set a = synthesize_signatures(paths, geo, f);
        REQUIRE(a.signatures.col(0).norm() == Approx(sqrt_n));
        REQUIRE(a.signatures.col(1).norm() == Approx(0.5 * sqrt_n));
    }

    SECTION("errors") {
        REQUIRE_THROWS_AS(synthesize_signatures({}, geo, f), std::invalid_argument);
        std::vector<path_component> zero(2);
        zero[0].gain_magnitude = zero[1].gain_magnitude = 0.0;
        REQUIRE_THROWS_AS(synthesize_signatures(zero, geo, f), std::invalid_argument);
    }
}

TEST_CASE("path_phase_means folds delay and Doppler terms") {
    std::vector<path_component> paths(2);
    paths[0].nominal_phase_rad = 0.3;
    paths[0].delay_s = 0.25e-6;
    paths[1].nominal_phase_rad = -1.1;
    paths[1].doppler_hz = 50.0;
    const auto mu = path_phase_means(paths, 2.0e9, 0.0);
    REQUIRE(mu[0] == Approx(0.3 - kTwoPi * 2.0e9 * 0.25e-6));
    REQUIRE(mu[1] == Approx(-1.1));
    const auto mu_t = path_phase_means(paths, 2.0e9, 1e-3);
    REQUIRE(mu_t[1] == Approx(-1.1 + kTwoPi * 1e-3 * 50.0));
}

TEST_CASE("phase_correlation for every model variant") {
    SECTION("iid uniform phases give the identity") {
        const cmat r = phase_correlation(iid_uniform_phases{}, 3);
        REQUIRE((r - cmat::Identity(3, 3)).cwiseAbs().maxCoeff() == 0.0);
    }

    SECTION("known zero phases give the all-ones matrix") {
        const cmat r = phase_correlation(known_phases{{0.0, 0.0}}, 2);
        REQUIRE((r - cmat::Ones(2, 2)).cwiseAbs().maxCoeff() < 1e-15);
    }

    SECTION("wrapped Gaussian off-diagonal matches the characteristic function") {
        const cmat r =
            phase_correlation(wrapped_gaussian_phases{{0.0, 0.0}, {0.3, 0.3}}, 2);
        REQUIRE(std::abs(r(0, 1) - cplx(std::exp(-0.09), 0.0)) < 1e-15);

        // Monte-Carlo oracle: sample mean of e^{j(eps1 - eps2)} over 1e6
        // Gaussian draws, accepted within 3 standard errors.
        std::mt19937_64 rng(12345);
        std::normal_distribution<double> gauss(0.0, 1.0);
        const std::size_t m = 1000000;
        cplx acc(0.0, 0.0);
        for (std::size_t i = 0; i < m; ++i)
            acc += std::polar(1.0, 0.3 * gauss(rng) - 0.3 * gauss(rng));
        acc /= static_cast<double>(m);
        const double standard_error = 1.0 / std::sqrt(static_cast<double>(m));
        REQUIRE(std::abs(acc - r(0, 1)) < 3.0 * standard_error);
    }

    SECTION("explicit correlation is validated then passed through") {
        cmat good(2, 2);
        good << 1.0, cplx(0.3, 0.4), cplx(0.3, -0.4), 1.0;
        const cmat r = phase_correlation(explicit_correlation{good}, 2);
        REQUIRE((r - good).cwiseAbs().maxCoeff() == 0.0);

        cmat bad_diag = good;
        bad_diag(0, 0) = 1.5;
        REQUIRE_THROWS_AS(phase_correlation(explicit_correlation{bad_diag}, 2),
                          std::invalid_argument);

        cmat not_herm = good;
        not_herm(0, 1) = cplx(0.3, 0.3);
        REQUIRE_THROWS_AS(phase_correlation(explicit_correlation{not_herm}, 2),
                          std::invalid_argument);

        cmat not_psd(2, 2); // off-diagonal modulus > 1 implies indefinite
        not_psd << 1.0, cplx(1.2, 0.0), cplx(1.2, 0.0), 1.0;
        REQUIRE_THROWS_AS(phase_correlation(explicit_correlation{not_psd}, 2),
                          std::invalid_argument);

        REQUIRE_THROWS_AS(phase_correlation(explicit_correlation{good}, 3),
                          std::invalid_argument);
    }

    SECTION("property: Hermitian, unit diagonal, eigenvalues >= -1e-8") {
        std::mt19937_64 rng(777);
        for (int trial = 0; trial < 20; ++trial) {
            const std::size_t l = 1 + static_cast<std::size_t>(rng() % 6);
            const cmat r = test::random_correlation(l, rng);
            REQUIRE((r - r.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
            for (std::size_t i = 0; i < l; ++i)
                REQUIRE(std::abs(r(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) -
                                 cplx(1.0, 0.0)) < 1e-12);
            Eigen::SelfAdjointEigenSolver<cmat> eig(r, Eigen::EigenvaluesOnly);
            REQUIRE(eig.eigenvalues().minCoeff() >= -1e-8);
        }
    }
}

TEST_CASE("draw_phase_vector sampling behavior") {
    SECTION("known phases are deterministic") {
        std::mt19937_64 rng(1);
        const cvec v = draw_phase_vector(known_phases{{0.0, kPi / 2.0}}, 2, rng);
        REQUIRE(std::abs(v(0) - cplx(1.0, 0.0)) < 1e-15);
        REQUIRE(std::abs(v(1) - cplx(0.0, 1.0)) < 1e-15);
    }

    SECTION("iid uniform second moments vanish off-diagonal") {
        std::mt19937_64 rng(42);
        const std::size_t m = 100000;
        cplx acc(0.0, 0.0);
        for (std::size_t i = 0; i < m; ++i) {
            const cvec v = draw_phase_vector(iid_uniform_phases{}, 2, rng);
            acc += v(0) * std::conj(v(1));
        }
        REQUIRE(std::abs(acc) / static_cast<double>(m) < 0.02);
    }

    SECTION("zero spread degenerates to the known model") {
        std::mt19937_64 rng(3);
        const cvec v =
            draw_phase_vector(wrapped_gaussian_phases{{0.4, -0.9}, {0.0, 0.0}}, 2, rng);
        std::mt19937_64 rng2(3);
        const cvec w = draw_phase_vector(known_phases{{0.4, -0.9}}, 2, rng2);
        REQUIRE((v - w).cwiseAbs().maxCoeff() == 0.0);
    }

    SECTION("explicit correlation cannot be sampled") {
        std::mt19937_64 rng(4);
        REQUIRE_THROWS_AS(
            draw_phase_vector(explicit_correlation{cmat::Identity(2, 2)}, 2, rng),
            unsupported_sampling_error);
    }

    SECTION("sampled covariance matches phase_correlation within 5/sqrt(M)") {
        const std::size_t m = 100000;
        const double tol = 5.0 / std::sqrt(static_cast<double>(m));
        const std::vector<phase_model> models = {
            iid_uniform_phases{},
            wrapped_gaussian_phases{{0.2, 1.4, -0.7}, {0.5, 0.1, 1.0}},
        };
        for (const auto &model : models) {
            const std::size_t l = 3;
            const cmat r = phase_correlation(model, l);
            std::mt19937_64 rng(99);
            cmat acc = cmat::Zero(l, l);
            for (std::size_t i = 0; i < m; ++i) {
                const cvec v = draw_phase_vector(model, l, rng);
                for (Eigen::Index p = 0; p < 3; ++p)
                    REQUIRE(std::abs(std::abs(v(p)) - 1.0) < 1e-12);
                acc += v * v.adjoint();
            }
            acc /= static_cast<double>(m);
            REQUIRE((acc - r).cwiseAbs().maxCoeff() < tol);
        }
    }
}

TEST_CASE("realize_channel is the exact factorization h = A v") {
    std::mt19937_64 rng(11);

    SECTION("anchors") {
        signature_set ones;
        ones.signatures = cmat::Ones(4, 1);
        const auto real1 = realize_channel(ones, cvec::Ones(1));
        REQUIRE((real1.h - cvec::Ones(4)).cwiseAbs().maxCoeff() == 0.0);

        signature_set twin;
        twin.signatures = cmat(4, 2);
        const cvec a = test::random_unit(4, rng);
        twin.signatures.col(0) = a;
        twin.signatures.col(1) = a;
        cvec v(2);
        v << 1.0, -1.0; // opposite phases on equal signatures
        REQUIRE(realize_channel(twin, v).h.norm() < 1e-15);
    }

    SECTION("definition and linearity") {
        const signature_set a = test::random_signatures(8, 3, rng);
        const cvec v = test::random_cvec(3, rng);
        const auto real = realize_channel(a, v);
        REQUIRE((real.h - a.signatures * v).norm() <= 1e-12 * a.signatures.norm());

        const cvec w = test::random_cvec(3, rng);
        const cvec h_sum = realize_channel(a, v + w).h;
        REQUIRE((h_sum - real.h - realize_channel(a, w).h).norm() < 1e-12 * h_sum.norm() + 1e-15);
    }

    SECTION("dimension mismatch") {
        const signature_set a = test::random_signatures(8, 3, rng);
        REQUIRE_THROWS_AS(realize_channel(a, cvec::Ones(2)), std::invalid_argument);
    }
}
