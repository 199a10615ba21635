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
// Complex linear-algebra kernels: dominant eigenpair of a Hermitian PSD
// matrix, SVD-based null-space projector, and the dominant generalized
// eigenvector of a (PSD, PD) pair.

#ifndef NONCOBF_SPECTRAL_CORE_HPP
#define NONCOBF_SPECTRAL_CORE_HPP

#include "noncobf/types.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace noncobf {

inline constexpr double kDefaultRankTol = 1e-10; // relative to sigma_max

// Hermitian matrix validated at construction:
// max|M - M^H| <= 1e-10 * max|M|.
class hermitian_matrix {
  public:
    explicit hermitian_matrix(cmat m) : m_(std::move(m)) {
        if (m_.rows() != m_.cols() || m_.rows() < 1)
            throw std::invalid_argument("hermitian_matrix: matrix must be square and non-empty");
        const double scale = m_.cwiseAbs().maxCoeff();
        if ((m_ - m_.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale)
            throw std::invalid_argument("hermitian_matrix: matrix is not Hermitian");
    }

    const cmat &matrix() const { return m_; }
    Eigen::Index size() const { return m_.rows(); }

  private:
    cmat m_;
};

struct eig_pair {
    double value = 0.0;
    cvec vector;
    bool degenerate = false; // true when the matrix had no energy (M ~ 0)
};

namespace detail {

// Canonical phase: the entry of largest modulus is made real non-negative.
inline void fix_eigvec_phase(cvec &v) {
    Eigen::Index imax = 0;
    v.cwiseAbs().maxCoeff(&imax);
    const cplx pivot = v(imax);
    if (std::abs(pivot) > 0.0)
        v *= std::conj(pivot) / std::abs(pivot);
    if (v.norm() > 0.0)
        v.normalize();
}

// Power iteration on M + shift*I; eigenvectors are unchanged by the shift
// and the shifted spectrum is positive, so the dominant mode wins.
inline eig_pair power_iteration_dominant(const cmat &m, double tol = 1e-12,
                                         int max_iters = 10000) {
    const Eigen::Index n = m.rows();
    const double shift = m.cwiseAbs().rowwise().sum().maxCoeff(); // >= rho(M)
    cvec v = cvec::Ones(n) / std::sqrt(static_cast<double>(n));
    // deterministic perturbation so v is not orthogonal to the dominant mode
    for (Eigen::Index i = 0; i < n; ++i)
        v(i) += cplx(1e-3 * std::cos(1.0 + 0.7 * static_cast<double>(i)),
                     1e-3 * std::sin(2.0 + 0.3 * static_cast<double>(i)));
    v.normalize();
    double lambda = 0.0;
    for (int it = 0; it < max_iters; ++it) {
        cvec w = m * v + shift * v;
        const double wn = w.norm();
        if (wn == 0.0)
            break;
        w /= wn;
        lambda = std::real(w.dot(m * w)); // Rayleigh quotient, Eigen dot conjugates lhs
        const double resid = (m * w - lambda * w).norm();
        v = w;
        if (resid <= tol * std::max(std::abs(lambda), 1.0))
            break;
    }
    return {lambda, v, false};
}

} // namespace detail

// Largest eigenvalue and eigenvector of a Hermitian PSD matrix. Dense
// decomposition up to 256x256, shifted power iteration beyond. Ties in the
// top eigenvalue are resolved by the decomposition ordering (non-unique).
inline eig_pair dominant_eigpair(const hermitian_matrix &m) {
    const Eigen::Index n = m.size();
    const double scale = m.matrix().cwiseAbs().maxCoeff();
    if (scale == 0.0) {
        cvec e1 = cvec::Zero(n);
        e1(0) = 1.0;
        return {0.0, e1, true};
    }

    eig_pair out;
    if (n <= 256) {
        Eigen::SelfAdjointEigenSolver<cmat> eig(m.matrix());
        if (eig.info() != Eigen::Success)
            throw std::runtime_error("dominant_eigpair: eigendecomposition failed");
        const double lam_max = eig.eigenvalues()(n - 1);
        if (eig.eigenvalues()(0) < -1e-8 * std::max(lam_max, 0.0) - 1e-14 * scale)
            throw std::invalid_argument("dominant_eigpair: matrix is not positive semidefinite");
        out.value = std::max(lam_max, 0.0);
        out.vector = eig.eigenvectors().col(n - 1);
    } else {
        out = detail::power_iteration_dominant(m.matrix());
        out.value = std::max(out.value, 0.0);
    }
    detail::fix_eigvec_phase(out.vector);
    out.degenerate = out.value == 0.0;
    return out;
}

inline eig_pair dominant_eigpair(const cmat &m) { return dominant_eigpair(hermitian_matrix(m)); }

// Orthogonal projector onto the orthogonal complement of a column span.
struct projector {
    cmat p;                       // N x N, Hermitian idempotent
    std::size_t rank_deflated = 0; // dimension projected out

    projector(cmat p_in, std::size_t rank) : p(std::move(p_in)), rank_deflated(rank) {
        const double scale = std::max(p.cwiseAbs().maxCoeff(), 1.0);
        if ((p - p.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale)
            throw std::invalid_argument("projector: matrix is not Hermitian");
        if ((p * p - p).cwiseAbs().maxCoeff() > 1e-10 * scale)
            throw std::invalid_argument("projector: matrix is not idempotent");
    }
};

// P = I - U1 U1^H with U1 the left singular vectors of the numerical rank of
// B (singular values <= tol * sigma_max count as zero). P B ~ 0.
inline projector null_space_projector(const cmat &b, double tol = kDefaultRankTol) {
    if (b.rows() < 1)
        throw std::invalid_argument("null_space_projector: matrix must have at least one row");
    if (!(tol > 0.0))
        throw std::invalid_argument("null_space_projector: tolerance must be positive");
    const Eigen::Index n = b.rows();
    if (b.cols() == 0 || b.cwiseAbs().maxCoeff() == 0.0)
        return projector(cmat::Identity(n, n), 0);

    Eigen::JacobiSVD<cmat> svd(b, Eigen::ComputeThinU);
    const double smax = svd.singularValues()(0);
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > tol * smax)
            ++rank;
    const cmat u1 = svd.matrixU().leftCols(rank);
    cmat p = cmat::Identity(n, n) - u1 * u1.adjoint();
    p = 0.5 * (p + p.adjoint()).eval(); // keep exactly Hermitian under roundoff
    return projector(std::move(p), static_cast<std::size_t>(rank));
}

// Dominant generalized eigenvector of (num, den) with den positive definite.
// Computed through the Cholesky whitening den = L L^H, which keeps the inner
// problem Hermitian; the result maximizes (g^H num g) / (g^H den g).
inline cvec generalized_dominant_eigvec(const hermitian_matrix &num, const hermitian_matrix &den) {
    if (num.size() != den.size())
        throw std::invalid_argument("generalized_dominant_eigvec: dimension mismatch");
    Eigen::SelfAdjointEigenSolver<cmat> den_eig(den.matrix(), Eigen::EigenvaluesOnly);
    const double dmax = den_eig.eigenvalues().maxCoeff();
    if (!(dmax > 0.0) || den_eig.eigenvalues().minCoeff() < 1e-12 * dmax)
        throw std::invalid_argument("generalized_dominant_eigvec: denominator is singular");

    Eigen::LLT<cmat> llt(den.matrix());
    if (llt.info() != Eigen::Success)
        throw std::invalid_argument("generalized_dominant_eigvec: Cholesky factorization failed");
    const cmat l = llt.matrixL();
    const cmat linv_num = l.triangularView<Eigen::Lower>().solve(num.matrix());
    cmat c = l.triangularView<Eigen::Lower>().solve(linv_num.adjoint()).adjoint().eval();
    c = 0.5 * (c + c.adjoint()).eval();

    eig_pair top = dominant_eigpair(hermitian_matrix(c));
    cvec g = l.adjoint().triangularView<Eigen::Upper>().solve(top.vector);
    g.normalize();
    detail::fix_eigvec_phase(g);
    return g;
}

inline cvec generalized_dominant_eigvec(const cmat &num, const cmat &den) {
    return generalized_dominant_eigvec(hermitian_matrix(num), hermitian_matrix(den));
}

} // namespace noncobf

#endif // NONCOBF_SPECTRAL_CORE_HPP
