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

#include "onebit/rng.hpp"
#include "onebit/types.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <ostream>
#include <vector>

namespace onebit {

inline constexpr int kOneRingQuadraturePoints = 2048;

/// One-ring spatial covariance of a uniform linear array with a uniform
/// power-angle spectrum over [center - spread, center + spread] (degrees).
///
/// Entry (m, n) is the angular average of exp(j 2 pi d (m - n) sin(phi)),
/// computed with a fixed midpoint rule, then scaled so that trace = M. The
/// result is Toeplitz-Hermitian by construction.
template <typename Real = double>
CMatrix<Real> one_ring_covariance(Index antennas, Real center_deg, Real spread_deg, Real spacing = Real(0.5),
                                  int quadrature_points = kOneRingQuadraturePoints)
{
    if (antennas < 1)
        throw UsageError("one_ring_covariance: antenna count must be >= 1");
    if (!(spread_deg > 0) || spread_deg > Real(180))
        throw UsageError("one_ring_covariance: angular spread must lie in (0, 180] degrees");
    if (!(spacing > 0))
        throw UsageError("one_ring_covariance: antenna spacing must be positive");

    const Real deg = std::numbers::pi_v<Real> / Real(180);
    const Real center = center_deg * deg;
    const Real spread = spread_deg * deg;
    const Real step = Real(2) * spread / Real(quadrature_points);

    std::vector<Real> sines(static_cast<std::size_t>(quadrature_points));
    for (int q = 0; q < quadrature_points; ++q)
        sines[static_cast<std::size_t>(q)] = std::sin(center - spread + (Real(q) + Real(0.5)) * step);

    // lag[d] = E[exp(j 2 pi spacing d sin phi)]
    CVector<Real> lag(antennas);
    const Real two_pi_d = Real(2) * std::numbers::pi_v<Real> * spacing;
    for (Index d = 0; d < antennas; ++d)
    {
        Real re = 0, im = 0;
        for (Real s : sines)
        {
            const Real arg = two_pi_d * Real(d) * s;
            re += std::cos(arg);
            im += std::sin(arg);
        }
        lag(d) = Complex<Real>(re, im) / Real(quadrature_points);
    }

    const Real trace = Real(antennas) * lag(0).real();
    const Real norm = Real(antennas) / trace;
    CMatrix<Real> c(antennas, antennas);
    for (Index m = 0; m < antennas; ++m)
    {
        c(m, m) = Complex<Real>(lag(0).real() * norm, 0);
        for (Index n = 0; n < m; ++n)
        {
            c(m, n) = lag(m - n) * norm;
            c(n, m) = std::conj(c(m, n));
        }
    }
    return c;
}

/// Principal Hermitian square root; eigenvalues below zero are clipped.
template <typename Real> CMatrix<Real> psd_sqrt(const CMatrix<Real> &c)
{
    Eigen::SelfAdjointEigenSolver<CMatrix<Real>> es(c);
    if (es.info() != Eigen::Success)
        throw NumericError("psd_sqrt: eigendecomposition failed");
    const RVector<Real> roots = es.eigenvalues().cwiseMax(Real(0)).cwiseSqrt();
    return es.eigenvectors() * roots.asDiagonal() * es.eigenvectors().adjoint();
}

/// Per-UE channel covariances C_{h_k}, with their square roots cached for sampling.
template <typename Real = double> class CovarianceSet
{
  public:
    explicit CovarianceSet(std::vector<CMatrix<Real>> per_ue) : per_ue_(std::move(per_ue))
    {
        if (per_ue_.empty())
            throw UsageError("CovarianceSet: need at least one UE");
        const Index m = per_ue_.front().rows();
        for (const auto &c : per_ue_)
        {
            if (c.rows() != m || c.cols() != m)
                throw UsageError("CovarianceSet: all covariances must be square with equal size");
            if ((c - c.adjoint()).cwiseAbs().maxCoeff() > Real(1e-12) * std::max<Real>(Real(1), c.cwiseAbs().maxCoeff()))
                throw UsageError("CovarianceSet: covariance is not Hermitian");
            roots_.push_back(psd_sqrt(c));
        }
    }

    Index antennas() const { return per_ue_.front().rows(); }
    Index users() const { return static_cast<Index>(per_ue_.size()); }
    const CMatrix<Real> &operator[](Index k) const { return per_ue_[static_cast<std::size_t>(k)]; }
    const std::vector<CMatrix<Real>> &per_ue() const { return per_ue_; }
    const CMatrix<Real> &root(Index k) const { return roots_[static_cast<std::size_t>(k)]; }

    /// blkdiag(C_{h_1}, ..., C_{h_K}), MK x MK.
    CMatrix<Real> block_diagonal() const
    {
        const Index m = antennas();
        CMatrix<Real> out = CMatrix<Real>::Zero(m * users(), m * users());
        for (Index k = 0; k < users(); ++k)
            out.block(k * m, k * m, m, m) = (*this)[k];
        return out;
    }

    /// Sum_k C_{h_k} w_k for per-UE complex weights.
    template <typename Weights> CMatrix<Real> weighted_sum(const Weights &w) const
    {
        CMatrix<Real> out = CMatrix<Real>::Zero(antennas(), antennas());
        for (Index k = 0; k < users(); ++k)
            out += (*this)[k] * Complex<Real>(w[k]);
        return out;
    }

  private:
    std::vector<CMatrix<Real>> per_ue_;
    std::vector<CMatrix<Real>> roots_;
};

enum class Scenario
{
    two_ue,       // centers at -60 and +60 degrees
    three_ue,     // centers at -60, 0, +60 degrees
    uncorrelated, // C_{h_k} = I_M for every UE
};

inline Scenario parse_scenario(const std::string &name)
{
    if (name == "two_ue")
        return Scenario::two_ue;
    if (name == "three_ue")
        return Scenario::three_ue;
    if (name == "uncorrelated")
        return Scenario::uncorrelated;
    throw UsageError("unknown scenario '" + name + "' (expected two_ue, three_ue or uncorrelated)");
}

inline const char *to_string(Scenario s)
{
    switch (s)
    {
    case Scenario::two_ue:
        return "two_ue";
    case Scenario::three_ue:
        return "three_ue";
    case Scenario::uncorrelated:
        return "uncorrelated";
    }
    return "?";
}

inline std::vector<double> scenario_center_angles(Scenario s)
{
    switch (s)
    {
    case Scenario::two_ue:
        return {-60.0, 60.0};
    case Scenario::three_ue:
        return {-60.0, 0.0, 60.0};
    case Scenario::uncorrelated:
        return {};
    }
    return {};
}

inline constexpr double kScenarioAngularSpreadDeg = 30.0;

template <typename Real = double> CovarianceSet<Real> scenario_covariances(const SystemConfig<Real> &cfg, Scenario s)
{
    if (s == Scenario::uncorrelated)
    {
        if (cfg.users < 1)
            throw UsageError("scenario_covariances: need at least one UE");
        return CovarianceSet<Real>(std::vector<CMatrix<Real>>(static_cast<std::size_t>(cfg.users),
                                                              CMatrix<Real>::Identity(cfg.antennas, cfg.antennas)));
    }
    const auto centers = scenario_center_angles(s);
    if (static_cast<Index>(centers.size()) != cfg.users)
        throw UsageError(std::string("scenario_covariances: scenario ") + to_string(s) + " needs K = " +
                         std::to_string(centers.size()) + ", got K = " + std::to_string(cfg.users));
    std::vector<CMatrix<Real>> per_ue;
    for (double c : centers)
        per_ue.push_back(one_ring_covariance<Real>(cfg.antennas, Real(c), Real(kScenarioAngularSpreadDeg)));
    return CovarianceSet<Real>(std::move(per_ue));
}

/// One channel draw H = [h_1, ..., h_K]; h = vec(H).
template <typename Real = double> struct ChannelRealization
{
    CMatrix<Real> H;

    CVector<Real> h() const { return H.reshaped(); }
};

/// h_k = C_{h_k}^{1/2} g_k with g_k ~ CN(0, I).
template <typename Real> ChannelRealization<Real> sample_channels(const CovarianceSet<Real> &cov, Rng &rng)
{
    const Index m = cov.antennas();
    ChannelRealization<Real> out{CMatrix<Real>(m, cov.users())};
    CVector<Real> g(m);
    for (Index k = 0; k < cov.users(); ++k)
    {
        rng.fill_cn(g);
        out.H.col(k).noalias() = cov.root(k) * g;
    }
    return out;
}

/// One row per matrix row; columns alternate real and imaginary parts.
template <typename Real> void write_matrix_csv(std::ostream &os, const CMatrix<Real> &c)
{
    os.precision(17);
    for (Index r = 0; r < c.rows(); ++r)
    {
        for (Index col = 0; col < c.cols(); ++col)
        {
            if (col)
                os << ',';
            os << c(r, col).real() << ',' << c(r, col).imag();
        }
        os << '\n';
    }
}

} // namespace onebit
