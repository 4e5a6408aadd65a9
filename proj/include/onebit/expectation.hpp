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

#include "onebit/blmmse.hpp"
#include "onebit/constellation.hpp"
#include "onebit/kernels.hpp"

#include <string>
#include <vector>

namespace onebit {

/// C_rrp = E[r rp^H] for a fixed data vector x (M x M tau). Entry (m, u M + n)
/// is (rho K + 1)(Omega(Re eta_{m,n,u}) + j Omega(Im eta_{m,n,u})).
template <typename Real, typename OmegaFn = ArcsineOmega>
CMatrix<Real> crrp_closed_form(const CovarianceSet<Real> &cov, const PilotMatrix<Real> &pm, Real rho,
                               const CVector<Real> &x, OmegaFn om = {})
{
    if (x.size() != cov.users() || pm.users() != cov.users())
        throw UsageError("crrp_closed_form: x, pilots and covariances must agree on K");
    const Index m_ant = cov.antennas();
    const Real scale = rho * Real(cov.users()) + Real(1);
    const RVector<Real> inv_sqrt_alpha = alpha(cov, rho).cwiseSqrt().cwiseInverse();
    const RVector<Real> inv_sqrt_beta = beta(cov, rho, x).cwiseSqrt().cwiseInverse();

    std::vector<CMatrix<Real>> g; // rho diag(beta)^-1/2 C_k x_k diag(alpha)^-1/2
    for (Index k = 0; k < cov.users(); ++k)
        g.push_back((rho * x(k)) * (inv_sqrt_beta.asDiagonal() * cov[k] * inv_sqrt_alpha.asDiagonal()));

    CMatrix<Real> out(m_ant, m_ant * pm.tau());
    CMatrix<Real> e(m_ant, m_ant);
    for (Index u = 0; u < pm.tau(); ++u)
    {
        e.setZero();
        for (Index k = 0; k < cov.users(); ++k)
            e += g[static_cast<std::size_t>(k)] * pm(u, k);
        for (Index n = 0; n < m_ant; ++n)
            for (Index m = 0; m < m_ant; ++m)
                out(m, u * m_ant + n) = scale * Complex<Real>(om(e(m, n).real()), om(e(m, n).imag()));
    }
    return out;
}

/// Everything needed to evaluate E_k = sqrt(rho) tr(C_rp^{-1} A_p pbar_k^* C_{h_k} C_rrp)
/// for many data vectors. The per-UE matrix sqrt(rho) C_rp^{-1} A_p pbar_k^* C_{h_k}
/// is exactly W_k^H, so E_k = sum(conj(W_k) .* C_rrp) and no M tau x M tau
/// product is ever formed.
template <typename Real = double> class SoftSymbolExpectation
{
  public:
    SoftSymbolExpectation(const EstimatorState<Real> &state, const CovarianceSet<Real> &cov,
                          const PilotMatrix<Real> &pm)
        : cov_(cov), pm_(pm), rho_(state.rho)
    {
        if (state.users != cov.users() || state.antennas != cov.antennas() || state.tau != pm.tau())
            throw UsageError("SoftSymbolExpectation: estimator state does not match covariances/pilots");
        for (const auto &w : state.W)
            w_conj_.push_back(w.conjugate());
    }

    Index users() const { return cov_.users(); }
    Real rho() const { return rho_; }
    const CovarianceSet<Real> &covariances() const { return cov_; }
    const PilotMatrix<Real> &pilots() const { return pm_; }

    CMatrix<Real> crrp(const CVector<Real> &x) const { return crrp_closed_form(cov_, pm_, rho_, x); }

    /// E_k for UE k (0-based) given a precomputed C_rrp(x).
    Complex<Real> from_crrp(Index k, const CMatrix<Real> &crrp) const
    {
        return w_conj_[static_cast<std::size_t>(k)].cwiseProduct(crrp).sum();
    }

    Complex<Real> operator()(Index k, const CVector<Real> &x) const
    {
        if (k < 0 || k >= users())
            throw UsageError("expected_soft_symbol: UE index out of range");
        return from_crrp(k, crrp(x));
    }

  private:
    CovarianceSet<Real> cov_;
    PilotMatrix<Real> pm_;
    Real rho_;
    std::vector<CMatrix<Real>> w_conj_;
};

template <typename Real>
Complex<Real> expected_soft_symbol(Index k, const CVector<Real> &x, const SoftSymbolExpectation<Real> &precomp)
{
    return precomp(k, x);
}

/// E_k over every x in S^K for one UE, plus per-symbol class means.
///
/// x is encoded in radix L with UE 0 as the most significant digit:
/// enc = sum_k idx_k L^(K-1-k).
template <typename Real = double> struct ExpectationTable
{
    Index ue = 0;
    Index users = 0;    // K
    Index alphabet = 0; // L
    std::vector<Complex<Real>> entries;     // size L^K, indexed by encoding
    std::vector<Complex<Real>> class_means; // Ebar_{k,l}, size L

    Index size() const { return static_cast<Index>(entries.size()); }

    Index digit(Index encoding, Index user) const
    {
        Index e = encoding;
        for (Index j = users - 1; j > user; --j)
            e /= alphabet;
        return e % alphabet;
    }

    /// Encodings whose digit for `ue` equals l, in increasing order.
    std::vector<Index> class_members(Index l) const
    {
        std::vector<Index> out;
        for (Index e = 0; e < size(); ++e)
            if (digit(e, ue) == l)
                out.push_back(e);
        return out;
    }
};

inline Index encode_symbols(const std::vector<Index> &indices, Index alphabet)
{
    Index e = 0;
    for (Index d : indices)
    {
        if (d < 0 || d >= alphabet)
            throw UsageError("encode_symbols: symbol index out of range");
        e = e * alphabet + d;
    }
    return e;
}

template <typename Real> CVector<Real> decode_symbols(Index encoding, Index users, const Constellation<Real> &s)
{
    CVector<Real> x(users);
    for (Index k = users - 1; k >= 0; --k)
    {
        x(k) = s[encoding % s.size()];
        encoding /= s.size();
    }
    return x;
}

inline constexpr Index kDefaultTableBudget = 1'000'000;

inline Index checked_table_size(Index alphabet, Index users, Index budget)
{
    Index n = 1;
    for (Index k = 0; k < users; ++k)
    {
        n *= alphabet;
        if (n > budget)
            throw UsageError("expectation table size L^K = " + std::to_string(alphabet) + "^" + std::to_string(users) +
                             " exceeds the budget of " + std::to_string(budget) + " entries");
    }
    return n;
}

namespace detail {
template <typename Real> void fill_class_means(ExpectationTable<Real> &t)
{
    t.class_means.assign(static_cast<std::size_t>(t.alphabet), Complex<Real>(0));
    std::vector<Index> counts(static_cast<std::size_t>(t.alphabet), 0);
    for (Index e = 0; e < t.size(); ++e)
    {
        const auto l = static_cast<std::size_t>(t.digit(e, t.ue));
        t.class_means[l] += t.entries[static_cast<std::size_t>(e)];
        ++counts[l];
    }
    for (std::size_t l = 0; l < t.class_means.size(); ++l)
        t.class_means[l] /= Real(counts[l]);
}
} // namespace detail

/// Tables for every UE at once; C_rrp(x) is built once per x and shared.
template <typename Real>
std::vector<ExpectationTable<Real>> build_expectation_tables(const Constellation<Real> &s,
                                                             const SoftSymbolExpectation<Real> &precomp,
                                                             Index budget = kDefaultTableBudget)
{
    const Index users = precomp.users();
    const Index n = checked_table_size(s.size(), users, budget);
    std::vector<ExpectationTable<Real>> tables(static_cast<std::size_t>(users));
    for (Index k = 0; k < users; ++k)
    {
        auto &t = tables[static_cast<std::size_t>(k)];
        t.ue = k;
        t.users = users;
        t.alphabet = s.size();
        t.entries.resize(static_cast<std::size_t>(n));
    }
    for (Index e = 0; e < n; ++e)
    {
        const CMatrix<Real> c = precomp.crrp(decode_symbols(e, users, s));
        for (Index k = 0; k < users; ++k)
            tables[static_cast<std::size_t>(k)].entries[static_cast<std::size_t>(e)] = precomp.from_crrp(k, c);
    }
    for (auto &t : tables)
        detail::fill_class_means(t);
    return tables;
}

template <typename Real>
ExpectationTable<Real> build_expectation_table(Index k, const Constellation<Real> &s,
                                               const SoftSymbolExpectation<Real> &precomp,
                                               Index budget = kDefaultTableBudget)
{
    if (k < 0 || k >= precomp.users())
        throw UsageError("build_expectation_table: UE index out of range");
    const Index users = precomp.users();
    const Index n = checked_table_size(s.size(), users, budget);
    ExpectationTable<Real> t;
    t.ue = k;
    t.users = users;
    t.alphabet = s.size();
    t.entries.resize(static_cast<std::size_t>(n));
    for (Index e = 0; e < n; ++e)
        t.entries[static_cast<std::size_t>(e)] = precomp(k, decode_symbols(e, users, s));
    detail::fill_class_means(t);
    return t;
}

} // namespace onebit
