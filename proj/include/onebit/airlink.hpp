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

#include "onebit/pilots.hpp"
#include "onebit/rng.hpp"
#include "onebit/types.hpp"

namespace onebit {

namespace detail {
template <typename Real> Real sign_plus(Real v) { return v < Real(0) ? Real(-1) : Real(1); }

inline void require(bool ok, const char *what)
{
    if (!ok)
        throw UsageError(what);
}
} // namespace detail

/// 1-bit quantizer Q(X) = sqrt((rho K + 1) / 2) (sgn Re X + j sgn Im X), sgn(0) = +1.
/// Every output entry has squared modulus rho K + 1.
template <typename Derived>
auto quantize(const Eigen::MatrixBase<Derived> &x, typename Derived::Scalar::value_type rho, Index users)
{
    using Real = typename Derived::Scalar::value_type;
    const Real a = quantizer_scale(rho, users);
    return x.unaryExpr([a](const Complex<Real> &v) {
                return Complex<Real>(a * detail::sign_plus(v.real()), a * detail::sign_plus(v.imag()));
            })
        .eval();
}

template <typename Real = double> struct ReceivedBlock
{
    CVector<Real> y; // unquantized
    CVector<Real> r; // Q(y)
    CVector<Real> x;
};

template <typename Real = double> struct PilotBlock
{
    CMatrix<Real> Yp;
    CVector<Real> yp; // vec(Yp)
    CVector<Real> rp; // Q(yp)
};

/// y = sqrt(rho) H x + z with an explicit noise vector (noiseless tests pass z = 0).
template <typename Real>
ReceivedBlock<Real> uplink_data_block(const CMatrix<Real> &H, const CVector<Real> &x, Real rho,
                                      const CVector<Real> &noise)
{
    detail::require(H.cols() == x.size(), "uplink_data_block: H has K columns, x must have K entries");
    detail::require(noise.size() == H.rows(), "uplink_data_block: noise must have M entries");
    ReceivedBlock<Real> b;
    b.x = x;
    b.y.noalias() = std::sqrt(rho) * (H * x);
    b.y += noise;
    b.r = quantize(b.y, rho, H.cols());
    return b;
}

template <typename Real>
ReceivedBlock<Real> uplink_data_block(const CMatrix<Real> &H, const CVector<Real> &x, Real rho, Rng &rng)
{
    CVector<Real> z(H.rows());
    rng.fill_cn(z);
    return uplink_data_block(H, x, rho, z);
}

/// Yp = sqrt(rho) H P^H + Zp, yp = vec(Yp), rp = Q(yp).
template <typename Real>
PilotBlock<Real> uplink_pilot_block(const CMatrix<Real> &H, const PilotMatrix<Real> &pm, Real rho,
                                    const CMatrix<Real> &noise)
{
    detail::require(H.cols() == pm.users(), "uplink_pilot_block: H and pilot matrix disagree on K");
    detail::require(noise.rows() == H.rows() && noise.cols() == pm.tau(),
                    "uplink_pilot_block: noise must be M x tau");
    PilotBlock<Real> b;
    b.Yp.noalias() = std::sqrt(rho) * (H * pm.P.adjoint());
    b.Yp += noise;
    b.yp = b.Yp.reshaped();
    b.rp = quantize(b.yp, rho, H.cols());
    return b;
}

template <typename Real>
PilotBlock<Real> uplink_pilot_block(const CMatrix<Real> &H, const PilotMatrix<Real> &pm, Real rho, Rng &rng)
{
    CMatrix<Real> z(H.rows(), pm.tau());
    rng.fill_cn(z);
    return uplink_pilot_block(H, pm, rho, z);
}

/// MRC soft symbols xhat = Hhat^H r.
template <typename Real> CVector<Real> mrc_soft_symbols(const CMatrix<Real> &Hhat, const CVector<Real> &r)
{
    detail::require(Hhat.rows() == r.size(), "mrc_soft_symbols: Hhat rows must match r length");
    return Hhat.adjoint() * r;
}

} // namespace onebit
