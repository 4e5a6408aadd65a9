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

#include "onebit/airlink.hpp"
#include "onebit/channel.hpp"

#include <doctest.h>

#include <random>

using namespace onebit;
using cd = std::complex<double>;

namespace {
CMatrix<double> random_matrix(Index r, Index c, std::uint64_t seed)
{
    Rng rng(seed);
    CMatrix<double> m(r, c);
    rng.fill_cn(m);
    return m;
}
} // namespace

TEST_CASE("quantize: sign evaluation")
{
    CVector<double> x(1);
    x << cd(3, -0.5);
    CHECK(std::abs(quantize(x, 1.0, 2)(0) - std::sqrt(1.5) * cd(1, -1)) < 1e-15);
    x << cd(0, 0);
    CHECK(quantize(x, 1.0, 1)(0) == cd(1, 1));
    x << cd(-0.0, -2);
    CHECK(quantize(x, 1.0, 1)(0) == cd(1, -1));
}

TEST_CASE("quantize: codomain, idempotence, positive scaling")
{
    const auto x = random_matrix(7, 5, 4);
    for (double rho : {0.1, 1.0, 100.0})
        for (Index k : {1, 2, 3})
        {
            const auto q = quantize(x, rho, k);
            const double a = std::sqrt((rho * k + 1) / 2);
            for (Index i = 0; i < q.size(); ++i)
            {
                CHECK(std::abs(std::abs(q(i).real()) - a) == 0.0);
                CHECK(std::abs(std::abs(q(i).imag()) - a) == 0.0);
            }
            CHECK((quantize(q, rho, k) - q).cwiseAbs().maxCoeff() == 0.0);
            const CMatrix<double> scaled = 3.7 * x;
            CHECK((quantize(scaled, rho, k) - q).cwiseAbs().maxCoeff() == 0.0);
        }
}

TEST_CASE("data block: noiseless hook and codomain")
{
    const auto H = random_matrix(4, 2, 8);
    CVector<double> x(2);
    x << cd(1, 1) / std::sqrt(2.0), cd(-1, 1) / std::sqrt(2.0);
    const auto b = uplink_data_block(H, x, 2.0, CVector<double>::Zero(4).eval());
    CHECK((b.y - std::sqrt(2.0) * H * x).cwiseAbs().maxCoeff() == 0.0);
    CHECK(b.r == quantize(b.y, 2.0, 2));

    Rng rng(1);
    const auto c = uplink_data_block(H, x, 1.0, rng);
    const double a = std::sqrt(1.5);
    for (Index i = 0; i < 4; ++i)
    {
        CHECK(std::abs(c.r(i).real()) == a);
        CHECK(std::abs(c.r(i).imag()) == a);
    }
    CHECK_THROWS_AS(uplink_data_block(H, CVector<double>::Zero(3).eval(), 1.0, rng), UsageError);
}

TEST_CASE("data block: pure noise has unit power")
{
    const CMatrix<double> H = CMatrix<double>::Zero(4, 2);
    CVector<double> x(2);
    x << cd(1, 0), cd(0, 1);
    Rng rng(2);
    double p = 0;
    const int n = 100000;
    for (int t = 0; t < n; ++t)
        p += uplink_data_block(H, x, 1.0, rng).y.squaredNorm();
    CHECK(std::abs(p / (4.0 * n) - 1.0) < 0.02);
}

TEST_CASE("pilot block: vectorization identity and rank-one structure")
{
    const auto pm = pilot_matrix<double>(5, 2, 1);
    const auto H = random_matrix(3, 2, 9);
    const double rho = 1.7;
    const auto b = uplink_pilot_block(H, pm, rho, CMatrix<double>::Zero(3, 5).eval());
    const auto e = expand(pm, 3);
    const CVector<double> h = H.reshaped();
    CHECK((b.yp - std::sqrt(rho) * e.Pbar.conjugate() * h).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(b.yp == b.Yp.reshaped());
    CHECK(b.rp == quantize(b.yp, rho, 2));

    PilotMatrix<double> ones{CMatrix<double>::Ones(5, 1), 0};
    const auto H1 = random_matrix(3, 1, 10);
    const auto b1 = uplink_pilot_block(H1, ones, rho, CMatrix<double>::Zero(3, 5).eval());
    for (Index u = 0; u < 5; ++u)
        CHECK((b1.Yp.col(u) - std::sqrt(rho) * H1.col(0)).cwiseAbs().maxCoeff() < 1e-15);

    Rng rng(3);
    CHECK_THROWS_AS(uplink_pilot_block(random_matrix(3, 3, 1), pm, rho, rng), UsageError);
}

TEST_CASE("pilot block: conditional second moment (Monte-Carlo)")
{
    const auto pm = pilot_matrix<double>(5, 2, 1);
    const auto H = random_matrix(2, 2, 12);
    const double rho = 1.0;
    const auto e = expand(pm, 2);
    const CVector<double> mean = std::sqrt(rho) * e.Pbar.conjugate() * H.reshaped();
    const CMatrix<double> want = mean * mean.adjoint() + CMatrix<double>::Identity(10, 10);

    CMatrix<double> acc = CMatrix<double>::Zero(10, 10);
    const int n = 100000;
    for (int t = 0; t < n; ++t)
    {
        Rng rng(77, static_cast<std::uint64_t>(t), Phase::pilot_noise);
        const auto b = uplink_pilot_block(H, pm, rho, rng);
        acc += b.yp * b.yp.adjoint();
    }
    CHECK((acc / double(n) - want).cwiseAbs().maxCoeff() < 0.03);
}

TEST_CASE("MRC soft symbols")
{
    CMatrix<double> sel = CMatrix<double>::Zero(4, 2);
    sel(0, 0) = 1;
    const auto r = random_matrix(4, 1, 3).col(0).eval();
    const auto xs = mrc_soft_symbols(sel, r);
    CHECK(xs(0) == r(0));
    CHECK(mrc_soft_symbols(sel, CVector<double>::Zero(4).eval()).cwiseAbs().maxCoeff() == 0.0);

    const auto H = random_matrix(16, 3, 21);
    const auto rr = random_matrix(16, 1, 22).col(0).eval();
    const auto fast = mrc_soft_symbols(H, rr);
    for (Index k = 0; k < 3; ++k)
    {
        cd naive = 0;
        for (Index m = 0; m < 16; ++m)
            naive += std::conj(H(m, k)) * rr(m);
        CHECK(std::abs(fast(k) - naive) < 1e-12);
    }
    CHECK_THROWS_AS(mrc_soft_symbols(H, CVector<double>::Zero(5).eval()), UsageError);
}
