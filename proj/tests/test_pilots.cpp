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

#include "onebit/pilots.hpp"

#include <doctest.h>

using namespace onebit;
using cd = std::complex<double>;

TEST_CASE("zadoff-chu basics")
{
    const auto z = zadoff_chu<double>(5, 1);
    CHECK(std::abs(z(0) - cd(1, 0)) < 1e-15);
    CHECK((z.cwiseAbs().array() - 1.0).abs().maxCoeff() < 1e-12);
    // exp(-j pi * 1 * 1 * 2 / 5)
    CHECK(std::abs(z(1) - std::polar(1.0, -2 * std::numbers::pi / 5)) < 1e-14);
}

TEST_CASE("zadoff-chu: ideal cyclic autocorrelation (direct computation)")
{
    for (Index root : {1, 2, 7})
    {
        const auto z = zadoff_chu<double>(31, root);
        for (Index lag = 1; lag < 31; ++lag)
        {
            cd acc = 0;
            for (Index n = 0; n < 31; ++n)
                acc += z(n) * std::conj(z((n + lag) % 31));
            CHECK(std::abs(acc) <= 1e-9);
        }
    }
}

TEST_CASE("zadoff-chu argument checks")
{
    CHECK_THROWS_AS(zadoff_chu<double>(9, 1), UsageError);
    CHECK_THROWS_AS(zadoff_chu<double>(2, 1), UsageError);
    CHECK_THROWS_AS(zadoff_chu<double>(31, 0), UsageError);
    CHECK_THROWS_AS(zadoff_chu<double>(31, 31), UsageError);
}

TEST_CASE("pilot matrices are orthogonal and unit modulus")
{
    const std::pair<Index, Index> cases[] = {{5, 1}, {5, 2}, {13, 2}, {31, 2}, {31, 3}, {61, 2}, {61, 3}, {7, 7}};
    for (auto [tau, k] : cases)
    {
        const auto pm = pilot_matrix<double>(tau, k, 1);
        CHECK(pm.tau() == tau);
        CHECK(pm.users() == k);
        CHECK((pm.P.cwiseAbs().array() - 1.0).abs().maxCoeff() < 1e-12);
        const CMatrix<double> gram = pm.P.adjoint() * pm.P;
        CHECK((gram - double(tau) * CMatrix<double>::Identity(k, k)).cwiseAbs().maxCoeff() < 1e-9);
    }
    const auto one = pilot_matrix<double>(5, 1, 1);
    CHECK(std::abs(one.P.col(0).squaredNorm() - 5.0) < 1e-12);
    CHECK_THROWS_AS(pilot_matrix<double>(5, 6, 1), UsageError);
}

TEST_CASE("columns are cyclic shifts by floor(tau/K)")
{
    const auto pm = pilot_matrix<double>(31, 3, 1);
    const auto z = zadoff_chu<double>(31, 1);
    for (Index u = 0; u < 31; ++u)
    {
        CHECK(pm(u, 1) == z((u + 10) % 31));
        CHECK(pm(u, 2) == z((u + 20) % 31));
    }
}

TEST_CASE("DFT fallback for non-prime tau")
{
    const auto pm = dft_pilot_matrix<double>(8, 3);
    const CMatrix<double> gram = pm.P.adjoint() * pm.P;
    CHECK((gram - 8.0 * CMatrix<double>::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("Kronecker expansion")
{
    PilotMatrix<double> check{CMatrix<double>::Ones(2, 1), 0};
    const auto e = expand(check, 2);
    CMatrix<double> want(4, 2);
    want << 1, 0, 0, 1, 1, 0, 0, 1;
    CHECK(e.Pbar == want);

    const auto pm = pilot_matrix<double>(5, 2, 1);
    const auto big = expand(pm, 3);
    CHECK(big.Pbar.rows() == 15);
    CHECK(big.Pbar.cols() == 6);
    for (Index u = 0; u < 5; ++u)
        for (Index k = 0; k < 2; ++k)
        {
            const CMatrix<double> blk = big.Pbar.block(u * 3, k * 3, 3, 3);
            CHECK((blk - pm(u, k) * CMatrix<double>::Identity(3, 3)).cwiseAbs().maxCoeff() == 0.0);
        }
    for (Index k = 0; k < 2; ++k)
    {
        CHECK(big.pbar[k] == big.Pbar.middleCols(k * 3, 3));
        const CMatrix<double> g = big.pbar[k].adjoint() * big.pbar[k];
        CHECK((g - 5.0 * CMatrix<double>::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-12);
    }
    const CMatrix<double> full = big.Pbar.adjoint() * big.Pbar;
    CHECK((full - 5.0 * CMatrix<double>::Identity(6, 6)).cwiseAbs().maxCoeff() < 1e-12);
    // entrywise definition of P (x) I
    for (Index r = 0; r < 15; ++r)
        for (Index c = 0; c < 6; ++c)
            CHECK(big.Pbar(r, c) == (r % 3 == c % 3 ? pm(r / 3, c / 3) : cd(0, 0)));
}
