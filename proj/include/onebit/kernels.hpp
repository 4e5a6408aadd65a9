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

// Scalar kernels of the arcsine-law closed forms: Omega, alpha, beta, zeta, eta.
// Indices are 0-based: m, n antennas; u, v pilot slots; k UEs.

#include "onebit/channel.hpp"
#include "onebit/pilots.hpp"
#include "onebit/types.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace onebit {

inline constexpr double kCorrelationTolerance = 1e-9;

/// Omega(x) = (2 / pi) asin(x). Inputs within 1e-9 outside [-1, 1] are clamped;
/// anything further out is a bug in the caller's correlation coefficient.
template <typename Real> Real omega(Real x)
{
    if (!(std::abs(x) <= Real(1) + Real(kCorrelationTolerance)))
    {
        std::ostringstream msg;
        msg.precision(17);
        msg << "omega: argument " << x << " outside [-1, 1]";
        throw NumericError(msg.str());
    }
    const Real c = std::clamp(x, Real(-1), Real(1));
    return Real(2) / std::numbers::pi_v<Real> * std::asin(c);
}

struct ArcsineOmega
{
    template <typename Real> Real operator()(Real x) const { return omega(x); }
};

/// alpha_m = [rho sum_k C_{h_k} + I]_{m,m}
template <typename Real> RVector<Real> alpha(const CovarianceSet<Real> &cov, Real rho)
{
    RVector<Real> a = RVector<Real>::Ones(cov.antennas());
    for (Index k = 0; k < cov.users(); ++k)
        a += rho * cov[k].diagonal().real();
    return a;
}

/// beta_m = [rho sum_k C_{h_k} |x_k|^2 + I]_{m,m}
template <typename Real> RVector<Real> beta(const CovarianceSet<Real> &cov, Real rho, const CVector<Real> &x)
{
    if (x.size() != cov.users())
        throw UsageError("beta: x must have K entries");
    RVector<Real> b = RVector<Real>::Ones(cov.antennas());
    for (Index k = 0; k < cov.users(); ++k)
        b += rho * std::norm(x(k)) * cov[k].diagonal().real();
    return b;
}

/// zeta_{m,n,u,v} = rho / sqrt(alpha_m alpha_n) [sum_k C_{h_k}^T P_{u,k} P*_{v,k}]_{m,n}
template <typename Real>
Complex<Real> zeta(const CovarianceSet<Real> &cov, const PilotMatrix<Real> &pm, Real rho, Index m, Index n, Index u,
                   Index v)
{
    const RVector<Real> a = alpha(cov, rho);
    Complex<Real> acc(0);
    for (Index k = 0; k < cov.users(); ++k)
        acc += cov[k](n, m) * pm(u, k) * std::conj(pm(v, k));
    return rho / std::sqrt(a(m) * a(n)) * acc;
}

/// eta_{m,n,u} = rho / sqrt(alpha_n beta_m) [sum_k C_{h_k} x_k P_{u,k}]_{m,n}
template <typename Real>
Complex<Real> eta(const CovarianceSet<Real> &cov, const PilotMatrix<Real> &pm, Real rho, const CVector<Real> &x,
                  Index m, Index n, Index u)
{
    const RVector<Real> a = alpha(cov, rho);
    const RVector<Real> b = beta(cov, rho, x);
    Complex<Real> acc(0);
    for (Index k = 0; k < cov.users(); ++k)
        acc += cov[k](m, n) * x(k) * pm(u, k);
    return rho / std::sqrt(a(n) * b(m)) * acc;
}

} // namespace onebit
