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

#include "onebit/types.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

namespace onebit {

inline bool is_odd_prime(Index n)
{
    if (n < 3 || n % 2 == 0)
        return false;
    for (Index d = 3; d * d <= n; d += 2)
        if (n % d == 0)
            return false;
    return true;
}

/// Root-`root` Zadoff-Chu sequence of odd prime length tau:
/// z[n] = exp(-j pi root n (n + 1) / tau).
template <typename Real = double> CVector<Real> zadoff_chu(Index tau, Index root)
{
    if (!is_odd_prime(tau))
        throw UsageError("zadoff_chu: length " + std::to_string(tau) + " is not an odd prime");
    if (root < 1 || root >= tau || std::gcd(root, tau) != 1)
        throw UsageError("zadoff_chu: root must satisfy 1 <= root < tau and gcd(root, tau) = 1");
    CVector<Real> z(tau);
    for (Index n = 0; n < tau; ++n)
    {
        // reduce the exponent mod 2 tau before scaling to keep the phase exact
        const Index e = (root * ((n * (n + 1)) % (2 * tau))) % (2 * tau);
        const Real phase = -std::numbers::pi_v<Real> * Real(e) / Real(tau);
        z(n) = Complex<Real>(std::cos(phase), std::sin(phase));
    }
    return z;
}

/// tau x K unit-modulus pilot matrix P with P^H P = tau I_K.
template <typename Real = double> struct PilotMatrix
{
    CMatrix<Real> P;
    Index root = 0; // 0 for the DFT fallback

    Index tau() const { return P.rows(); }
    Index users() const { return P.cols(); }
    Complex<Real> operator()(Index u, Index k) const { return P(u, k); }
};

/// Column k is the root sequence cyclically shifted by k * floor(tau / K).
template <typename Real = double> PilotMatrix<Real> pilot_matrix(Index tau, Index users, Index root = 1)
{
    if (users < 1)
        throw UsageError("pilot_matrix: need at least one UE");
    if (users > tau)
        throw UsageError("pilot_matrix: K = " + std::to_string(users) + " exceeds pilot length tau = " +
                         std::to_string(tau));
    const CVector<Real> z = zadoff_chu<Real>(tau, root);
    const Index stride = tau / users;
    PilotMatrix<Real> pm{CMatrix<Real>(tau, users), root};
    for (Index k = 0; k < users; ++k)
        for (Index u = 0; u < tau; ++u)
            pm.P(u, k) = z((u + k * stride) % tau);
    return pm;
}

/// DFT-column pilots for arbitrary tau: P(u, k) = exp(-j 2 pi u k / tau).
template <typename Real = double> PilotMatrix<Real> dft_pilot_matrix(Index tau, Index users)
{
    if (users < 1 || users > tau)
        throw UsageError("dft_pilot_matrix: need 1 <= K <= tau");
    PilotMatrix<Real> pm{CMatrix<Real>(tau, users), 0};
    for (Index k = 0; k < users; ++k)
        for (Index u = 0; u < tau; ++u)
        {
            const Real phase = Real(-2) * std::numbers::pi_v<Real> * Real((u * k) % tau) / Real(tau);
            pm.P(u, k) = Complex<Real>(std::cos(phase), std::sin(phase));
        }
    return pm;
}

/// Dense antenna-expanded pilots: Pbar = P (x) I_M and pbar_k = p_k (x) I_M.
/// Reference forms only; the estimator works on the Kronecker structure directly.
template <typename Real = double> struct ExpandedPilots
{
    CMatrix<Real> Pbar;               // M tau x M K
    std::vector<CMatrix<Real>> pbar;  // K blocks of M tau x M
};

template <typename Real> ExpandedPilots<Real> expand(const PilotMatrix<Real> &pm, Index antennas)
{
    if (antennas < 1)
        throw UsageError("expand: antenna count must be >= 1");
    const Index m = antennas;
    ExpandedPilots<Real> out;
    out.Pbar = CMatrix<Real>::Zero(pm.tau() * m, pm.users() * m);
    for (Index u = 0; u < pm.tau(); ++u)
        for (Index k = 0; k < pm.users(); ++k)
            out.Pbar.block(u * m, k * m, m, m).diagonal().setConstant(pm(u, k));
    for (Index k = 0; k < pm.users(); ++k)
        out.pbar.push_back(out.Pbar.middleCols(k * m, m));
    return out;
}

} // namespace onebit
