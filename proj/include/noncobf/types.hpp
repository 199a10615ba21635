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

#ifndef NONCOBF_TYPES_HPP
#define NONCOBF_TYPES_HPP

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace noncobf {

using cplx = std::complex<double>;
using cvec = Eigen::VectorXcd;
using cmat = Eigen::MatrixXcd;
using rvec = Eigen::VectorXd;

inline constexpr double kSpeedOfLight = 299792458.0; // m/s
inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;

// A channel (or effective channel) with no usable energy left.
class degenerate_channel_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Zero-forcing left no degrees of freedom for the named user; the caller
// must move that user to a different time-frequency resource.
class zf_infeasible_error : public std::runtime_error {
  public:
    zf_infeasible_error(std::size_t user_index, std::size_t num_users)
        : std::runtime_error("zero-forcing infeasible: all signatures of user " +
                             std::to_string(user_index + 1) + " of " + std::to_string(num_users) +
                             " lie in the span of the other users' signatures"),
          user_index_(user_index) {}
    std::size_t user_index() const { return user_index_; }

  private:
    std::size_t user_index_;
};

// Requested random draws from a phase model that only defines second moments.
class unsupported_sampling_error : public std::logic_error {
  public:
    using std::logic_error::logic_error;
};

// splitmix64, used to derive independent seeds for per-task RNG streams.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64(splitmix64(seed) ^ (0x9e3779b97f4a7c15ULL * (stream + 1)));
}

inline std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream = 0) {
    return std::mt19937_64(derive_seed(seed, stream));
}

// Thread cap: NONCOBF_THREADS wins over hardware concurrency when set.
inline unsigned max_threads() {
    if (const char *env = std::getenv("NONCOBF_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1)
            return static_cast<unsigned>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

// Runs f(i) for i in [0, n). Work item i writes only its own output slot, so
// the result is identical to the sequential loop regardless of scheduling.
template <typename F>
void parallel_for(std::size_t n, F &&f) {
    const std::size_t nt = std::min<std::size_t>(max_threads(), n);
    if (nt <= 1) {
        for (std::size_t i = 0; i < n; ++i)
            f(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(nt);
    for (std::size_t t = 0; t < nt; ++t) {
        pool.emplace_back([n, nt, t, &f]() {
            for (std::size_t i = t; i < n; i += nt)
                f(i);
        });
    }
    for (auto &th : pool)
        th.join();
}

// 10*log10 with zero power coded as -inf (legitimate output for zero
// worst-case scenarios, not an error).
inline double to_db(double power) {
    if (power <= 0.0)
        return -std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(power);
}

} // namespace noncobf

#endif // NONCOBF_TYPES_HPP
