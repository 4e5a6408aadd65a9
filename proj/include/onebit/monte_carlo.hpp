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

// Monte-Carlo estimates of the moments that the closed forms predict. These go
// through the simulation path only (sample channels, add noise, quantize) and
// never touch Omega, zeta or eta.

#include "onebit/airlink.hpp"
#include "onebit/blmmse.hpp"
#include "onebit/channel.hpp"
#include "onebit/pilots.hpp"
#include "onebit/rng.hpp"

#include <cstdint>

namespace onebit::mc {

/// Empirical E[rp rp^H].
CMatrix<double> empirical_crp(const CovarianceSet<double> &cov, const PilotMatrix<double> &pm, double rho,
                              std::int64_t trials, std::uint64_t seed);

/// Empirical E[r rp^H] for a fixed data vector x.
CMatrix<double> empirical_crrp(const CovarianceSet<double> &cov, const PilotMatrix<double> &pm, double rho,
                               const CVector<double> &x, std::int64_t trials, std::uint64_t seed);

struct MeanEstimate
{
    std::complex<double> mean;
    double std_error = 0; // sqrt(E|v - mean|^2 / N)
};

/// Empirical mean of the MRC soft symbol of UE k over channel and noise draws,
/// using BLMMSE estimates from `state`.
MeanEstimate empirical_soft_mean(const CovarianceSet<double> &cov, const PilotMatrix<double> &pm,
                                 const EstimatorState<double> &state, const CVector<double> &x, Index k,
                                 std::int64_t trials, std::uint64_t seed);

} // namespace onebit::mc
