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

#include "onebit/monte_carlo.hpp"

namespace onebit::mc {

CMatrix<double> empirical_crp(const CovarianceSet<double> &cov, const PilotMatrix<double> &pm, double rho,
                              std::int64_t trials, std::uint64_t seed)
{
    const Index n = cov.antennas() * pm.tau();
    CMatrix<double> acc = CMatrix<double>::Zero(n, n);
    for (std::int64_t t = 0; t < trials; ++t)
    {
        const auto t64 = static_cast<std::uint64_t>(t);
        Rng ch(seed, t64, Phase::channel);
        Rng pn(seed, t64, Phase::pilot_noise);
        const auto h = sample_channels(cov, ch);
        const auto blk = uplink_pilot_block(h.H, pm, rho, pn);
        acc.selfadjointView<Eigen::Lower>().rankUpdate(blk.rp);
    }
    CMatrix<double> out = acc.selfadjointView<Eigen::Lower>();
    return out / static_cast<double>(trials);
}

CMatrix<double> empirical_crrp(const CovarianceSet<double> &cov, const PilotMatrix<double> &pm, double rho,
                               const CVector<double> &x, std::int64_t trials, std::uint64_t seed)
{
    CMatrix<double> acc = CMatrix<double>::Zero(cov.antennas(), cov.antennas() * pm.tau());
    for (std::int64_t t = 0; t < trials; ++t)
    {
        const auto t64 = static_cast<std::uint64_t>(t);
        Rng ch(seed, t64, Phase::channel);
        Rng pn(seed, t64, Phase::pilot_noise);
        Rng dn(seed, t64, Phase::data_noise);
        const auto h = sample_channels(cov, ch);
        const auto pilot = uplink_pilot_block(h.H, pm, rho, pn);
        const auto data = uplink_data_block(h.H, x, rho, dn);
        acc.noalias() += data.r * pilot.rp.adjoint();
    }
    return acc / static_cast<double>(trials);
}

MeanEstimate empirical_soft_mean(const CovarianceSet<double> &cov, const PilotMatrix<double> &pm,
                                 const EstimatorState<double> &state, const CVector<double> &x, Index k,
                                 std::int64_t trials, std::uint64_t seed)
{
    std::complex<double> sum = 0;
    double sum_sq = 0;
    for (std::int64_t t = 0; t < trials; ++t)
    {
        const auto t64 = static_cast<std::uint64_t>(t);
        Rng ch(seed, t64, Phase::channel);
        Rng pn(seed, t64, Phase::pilot_noise);
        Rng dn(seed, t64, Phase::data_noise);
        const auto h = sample_channels(cov, ch);
        const auto pilot = uplink_pilot_block(h.H, pm, state.rho, pn);
        const auto data = uplink_data_block(h.H, x, state.rho, dn);
        const CVector<double> hk = state.W[static_cast<std::size_t>(k)] * pilot.rp;
        const std::complex<double> v = hk.dot(data.r); // hk^H r
        sum += v;
        sum_sq += std::norm(v);
    }
    const double n = static_cast<double>(trials);
    const std::complex<double> mean = sum / n;
    const double var = std::max(0.0, sum_sq / n - std::norm(mean)) * n / std::max(1.0, n - 1);
    return {mean, std::sqrt(var / n)};
}

} // namespace onebit::mc
