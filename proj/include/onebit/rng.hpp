// SPDX-License-Identifier: Apache-2.0
//
// onebit-mimo: uplink detection toolkit for massive MIMO with 1-bit ADCs
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

#pragma once

#include <Eigen/Core>

#include <complex>
#include <cstdint>
#include <random>

namespace onebit {

inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Tags separating the independent random streams of one Monte-Carlo trial.
enum class Phase : std::uint64_t
{
    channel = 1,
    pilot_noise = 2,
    data_symbols = 3,
    data_noise = 4,
};

/// Seeded random stream. Streams for a trial are derived from
/// (master seed, trial index, phase), never from execution order.
class Rng
{
  public:
    explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

    Rng(std::uint64_t master_seed, std::uint64_t trial, Phase phase)
        : engine_(splitmix64(splitmix64(splitmix64(master_seed) ^ trial) ^ static_cast<std::uint64_t>(phase)))
    {
    }

    std::mt19937_64 &engine() { return engine_; }

    double normal() { return normal_(engine_); }

    // CN(0, 1): real and imaginary parts each N(0, 1/2).
    template <typename Real = double> std::complex<Real> cn()
    {
        constexpr double s = 0.70710678118654752440;
        const double re = normal_(engine_) * s;
        const double im = normal_(engine_) * s;
        return {static_cast<Real>(re), static_cast<Real>(im)};
    }

    template <typename Derived> void fill_cn(Eigen::MatrixBase<Derived> &out)
    {
        using Real = typename Derived::Scalar::value_type;
        for (Eigen::Index j = 0; j < out.cols(); ++j)
            for (Eigen::Index i = 0; i < out.rows(); ++i)
                out(i, j) = cn<Real>();
    }

    std::size_t uniform_index(std::size_t n)
    {
        std::uniform_int_distribution<std::size_t> d(0, n - 1);
        return d(engine_);
    }

  private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

} // namespace onebit
