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

#include "onebit/channel.hpp"
#include "onebit/kernels.hpp"
#include "onebit/pilots.hpp"
#include "onebit/types.hpp"

#include <Eigen/Cholesky>

#include <cstdint>
#include <cstring>
#include <fstream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace onebit {

/// Diagonal of C_yp = rho Pbar* C_h Pbar^T + I under unit-modulus pilots:
/// entry u M + m equals rho sum_k [C_{h_k}]_{m,m} + 1 for every pilot slot u.
template <typename Real> RVector<Real> cyp_diag(const CovarianceSet<Real> &cov, Real rho, Index tau)
{
    const RVector<Real> per_antenna = alpha(cov, rho);
    return per_antenna.replicate(tau, 1);
}

/// C_rp = E[rp rp^H] from the arcsine law. Block (u, v) holds
/// (rho K + 1)(Omega(Re zeta) - j Omega(Im zeta)) with the diagonal pinned to rho K + 1.
template <typename Real, typename OmegaFn = ArcsineOmega>
CMatrix<Real> crp_closed_form(const CovarianceSet<Real> &cov, const PilotMatrix<Real> &pm, Real rho,
                              OmegaFn om = {})
{
    if (pm.users() != cov.users())
        throw UsageError("crp_closed_form: pilot matrix and covariance set disagree on K");
    const Index m_ant = cov.antennas();
    const Index tau = pm.tau();
    const Index users = cov.users();
    const Real scale = rho * Real(users) + Real(1);

    const RVector<Real> inv_sqrt_alpha = alpha(cov, rho).cwiseSqrt().cwiseInverse();
    std::vector<CMatrix<Real>> g; // rho D C_k^T D
    for (Index k = 0; k < users; ++k)
        g.push_back(rho * inv_sqrt_alpha.asDiagonal() * cov[k].transpose() * inv_sqrt_alpha.asDiagonal());

    CMatrix<Real> crp(m_ant * tau, m_ant * tau);
    CMatrix<Real> z(m_ant, m_ant);
    for (Index u = 0; u < tau; ++u)
        for (Index v = u; v < tau; ++v)
        {
            z.setZero();
            for (Index k = 0; k < users; ++k)
                z += g[k] * (pm(u, k) * std::conj(pm(v, k)));
            auto blk = crp.block(u * m_ant, v * m_ant, m_ant, m_ant);
            for (Index n = 0; n < m_ant; ++n)
                for (Index m = 0; m < m_ant; ++m)
                {
                    const Complex<Real> c = z(m, n);
                    blk(m, n) = scale * Complex<Real>(om(c.real()), -om(c.imag()));
                }
            if (u == v)
                blk.diagonal().setConstant(Complex<Real>(scale, 0));
            else
                crp.block(v * m_ant, u * m_ant, m_ant, m_ant) = blk.adjoint();
        }
    // diagonal blocks: mirror the strict lower triangle so the matrix is exactly Hermitian
    for (Index u = 0; u < tau; ++u)
    {
        auto blk = crp.block(u * m_ant, u * m_ant, m_ant, m_ant);
        for (Index n = 0; n < m_ant; ++n)
            for (Index m = n + 1; m < m_ant; ++m)
                blk(n, m) = std::conj(blk(m, n));
    }
    return crp;
}

/// Precomputed BLMMSE quantities for one (covariances, pilots, rho) triple.
///
/// `W[k]` is the M x M tau map rp -> hhat_k, i.e.
/// sqrt(rho) C_{h_k} pbar_k^T A_p C_rp^{-1}. C_rp^{-1} is never formed: all
/// solves go through the lower Cholesky factor.
template <typename Real = double> struct EstimatorState
{
    Index antennas = 0;
    Index users = 0;
    Index tau = 0;
    Real rho = 0;
    RVector<Real> Ap;          // diagonal of A_p, length M tau
    CMatrix<Real> Crp;         // M tau x M tau
    CMatrix<Real> chol;        // lower L with L L^H = C_rp (+ jitter when `jittered`)
    std::vector<CMatrix<Real>> W;
    bool jittered = false;

    /// C_rp^{-1} rhs via two triangular solves.
    template <typename Rhs> CMatrix<Real> solve(const Eigen::MatrixBase<Rhs> &rhs) const
    {
        CMatrix<Real> y = chol.template triangularView<Eigen::Lower>().solve(rhs);
        chol.template triangularView<Eigen::Lower>().adjoint().solveInPlace(y);
        return y;
    }
};

namespace detail {
template <typename Real> bool cholesky_lower(const CMatrix<Real> &a, CMatrix<Real> &out)
{
    Eigen::LLT<CMatrix<Real>> llt(a);
    if (llt.info() != Eigen::Success)
        return false;
    out = llt.matrixL();
    return true;
}
} // namespace detail

template <typename Real, typename OmegaFn = ArcsineOmega>
EstimatorState<Real> build_estimator(const CovarianceSet<Real> &cov, const PilotMatrix<Real> &pm, Real rho,
                                     OmegaFn om = {})
{
    EstimatorState<Real> st;
    st.antennas = cov.antennas();
    st.users = cov.users();
    st.tau = pm.tau();
    st.rho = rho;
    const Index m_ant = st.antennas;
    const Real scale = rho * Real(st.users) + Real(1);

    st.Ap = (Real(2) / std::numbers::pi_v<Real> * scale) * cyp_diag(cov, rho, st.tau).cwiseInverse();
    st.Ap = st.Ap.cwiseSqrt();
    st.Crp = crp_closed_form(cov, pm, rho, om);

    if (!detail::cholesky_lower(st.Crp, st.chol))
    {
        CMatrix<Real> jittered = st.Crp;
        jittered.diagonal().array() += Real(1e-9) * scale;
        if (!detail::cholesky_lower(jittered, st.chol))
            throw SingularMatrixError("build_estimator: C_rp is not positive definite even after jitter");
        st.jittered = true;
    }

    // rhs_k = (sqrt(rho) C_k pbar_k^T A_p)^H; block u is sqrt(rho) conj(P_uk) diag(A_p,u) C_k
    const Real sr = std::sqrt(rho);
    CMatrix<Real> rhs(m_ant * st.tau, m_ant);
    for (Index k = 0; k < st.users; ++k)
    {
        for (Index u = 0; u < st.tau; ++u)
            rhs.middleRows(u * m_ant, m_ant).noalias() =
                (sr * std::conj(pm(u, k))) * (st.Ap.segment(u * m_ant, m_ant).asDiagonal() * cov[k]);
        st.W.push_back(st.solve(rhs).adjoint());
    }
    return st;
}

/// Hhat with column k = W_k rp.
template <typename Real> CMatrix<Real> estimate(const EstimatorState<Real> &st, const CVector<Real> &rp)
{
    if (rp.size() != st.antennas * st.tau)
        throw UsageError("estimate: rp must have M tau entries");
    CMatrix<Real> hhat(st.antennas, st.users);
    for (Index k = 0; k < st.users; ++k)
        hhat.col(k).noalias() = st.W[static_cast<std::size_t>(k)] * rp;
    return hhat;
}

// ---------------------------------------------------------------------------
// On-disk cache

inline std::uint64_t fnv1a(const void *data, std::size_t n, std::uint64_t h = 0xcbf29ce484222325ULL)
{
    const auto *p = static_cast<const unsigned char *>(data);
    for (std::size_t i = 0; i < n; ++i)
    {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// Content hash of (covariances, pilots, rho) used to key cached estimator states.
template <typename Real>
std::uint64_t estimator_cache_key(const CovarianceSet<Real> &cov, const PilotMatrix<Real> &pm, Real rho)
{
    std::uint64_t h = fnv1a(&rho, sizeof rho);
    for (const auto &c : cov.per_ue())
        h = fnv1a(c.data(), sizeof(Complex<Real>) * static_cast<std::size_t>(c.size()), h);
    h = fnv1a(pm.P.data(), sizeof(Complex<Real>) * static_cast<std::size_t>(pm.P.size()), h);
    const std::uint64_t real_size = sizeof(Real);
    return fnv1a(&real_size, sizeof real_size, h);
}

namespace detail {
inline constexpr char kEstimatorMagic[8] = {'O', 'B', 'E', 'S', 'T', '0', '0', '1'};

template <typename T> void write_pod(std::ostream &os, const T &v) { os.write(reinterpret_cast<const char *>(&v), sizeof v); }
template <typename T> void read_pod(std::istream &is, T &v) { is.read(reinterpret_cast<char *>(&v), sizeof v); }

template <typename M> void write_dense(std::ostream &os, const M &a)
{
    write_pod(os, static_cast<std::int64_t>(a.rows()));
    write_pod(os, static_cast<std::int64_t>(a.cols()));
    os.write(reinterpret_cast<const char *>(a.data()), static_cast<std::streamsize>(sizeof(typename M::Scalar) * a.size()));
}

template <typename M> bool read_dense(std::istream &is, M &a)
{
    std::int64_t r = 0, c = 0;
    read_pod(is, r);
    read_pod(is, c);
    if (!is || r < 0 || c < 0)
        return false;
    a.resize(r, c);
    is.read(reinterpret_cast<char *>(a.data()), static_cast<std::streamsize>(sizeof(typename M::Scalar) * a.size()));
    return static_cast<bool>(is);
}
} // namespace detail

template <typename Real> void save_estimator(const std::string &path, const EstimatorState<Real> &st, std::uint64_t key)
{
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os)
        throw UsageError("save_estimator: cannot open " + path);
    os.write(detail::kEstimatorMagic, sizeof detail::kEstimatorMagic);
    detail::write_pod(os, key);
    detail::write_pod(os, static_cast<std::int64_t>(st.antennas));
    detail::write_pod(os, static_cast<std::int64_t>(st.users));
    detail::write_pod(os, static_cast<std::int64_t>(st.tau));
    detail::write_pod(os, st.rho);
    detail::write_pod(os, static_cast<std::uint8_t>(st.jittered));
    detail::write_dense(os, st.Ap);
    detail::write_dense(os, st.Crp);
    detail::write_dense(os, st.chol);
    for (const auto &w : st.W)
        detail::write_dense(os, w);
}

/// Returns nullopt when the file is missing, truncated, or keyed differently.
template <typename Real> std::optional<EstimatorState<Real>> load_estimator(const std::string &path, std::uint64_t key)
{
    std::ifstream is(path, std::ios::binary);
    if (!is)
        return std::nullopt;
    char magic[8];
    is.read(magic, sizeof magic);
    if (!is || std::memcmp(magic, detail::kEstimatorMagic, sizeof magic) != 0)
        return std::nullopt;
    std::uint64_t stored = 0;
    detail::read_pod(is, stored);
    if (stored != key)
        return std::nullopt;
    EstimatorState<Real> st;
    std::int64_t m = 0, k = 0, t = 0;
    std::uint8_t jit = 0;
    detail::read_pod(is, m);
    detail::read_pod(is, k);
    detail::read_pod(is, t);
    detail::read_pod(is, st.rho);
    detail::read_pod(is, jit);
    st.antennas = m;
    st.users = k;
    st.tau = t;
    st.jittered = jit != 0;
    if (!is || !detail::read_dense(is, st.Ap) || !detail::read_dense(is, st.Crp) || !detail::read_dense(is, st.chol))
        return std::nullopt;
    st.W.resize(static_cast<std::size_t>(k));
    for (auto &w : st.W)
        if (!detail::read_dense(is, w))
            return std::nullopt;
    return st;
}

} // namespace onebit
