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

#include "onebit/constellation.hpp"

#include <doctest.h>

#include <random>
#include <set>

using namespace onebit;
using cd = std::complex<double>;

TEST_CASE("qam16 points, order and power")
{
    const auto s = make_qam16();
    REQUIRE(s.size() == 16);
    const double a = 1 / std::sqrt(10.0);
    CHECK(s.find(cd(a, a)) >= 0);
    CHECK(s.find(cd(3 * a, 3 * a)) >= 0);
    // row-major over Re then Im
    CHECK(std::abs(s[0] - cd(-3 * a, -3 * a)) < 1e-15);
    CHECK(std::abs(s[1] - cd(-3 * a, -1 * a)) < 1e-15);
    CHECK(std::abs(s[4] - cd(-1 * a, -3 * a)) < 1e-15);
    CHECK(std::abs(s[15] - cd(3 * a, 3 * a)) < 1e-15);
    CHECK(std::abs(s.average_power() - 1.0) < 1e-12);

    std::set<std::pair<double, double>> distinct;
    for (const auto &p : s.symbols())
        distinct.insert({p.real(), p.imag()});
    CHECK(distinct.size() == 16);
}

TEST_CASE("qam16 has three amplitude levels")
{
    const auto s = make_qam16();
    const double levels[] = {std::sqrt(0.2), 1.0, std::sqrt(1.8)};
    int counts[3] = {0, 0, 0};
    for (const auto &p : s.symbols())
    {
        int hit = -1;
        for (int i = 0; i < 3; ++i)
            if (std::abs(std::abs(p) - levels[i]) < 1e-12)
                hit = i;
        REQUIRE(hit >= 0);
        ++counts[hit];
    }
    CHECK(counts[0] == 4);
    CHECK(counts[1] == 8);
    CHECK(counts[2] == 4);
}

TEST_CASE("qpsk and lookup by name")
{
    const auto q = make_qpsk();
    CHECK(q.size() == 4);
    CHECK(std::abs(q.average_power() - 1.0) < 1e-12);
    CHECK(make_constellation("qam16").label() == "qam16");
    CHECK(make_constellation("qpsk").label() == "qpsk");
    CHECK_THROWS_AS(make_constellation("qam64"), UsageError);
}

TEST_CASE("constellation invariants are enforced")
{
    CHECK_THROWS_AS(Constellation<double>({cd(1, 0)}, "one"), UsageError);
    CHECK_THROWS_AS(Constellation<double>({cd(1, 0), cd(1, 0)}, "dup"), UsageError);
    CHECK_THROWS_AS(Constellation<double>({cd(1, 0), cd(2, 0)}, "hot"), UsageError);
    CHECK_NOTHROW(Constellation<double>({cd(1, 0), cd(-1, 0)}, "bpsk"));
}

TEST_CASE("nearest")
{
    const auto s = make_qam16();
    const std::vector<cd> pts(s.symbols().begin(), s.symbols().end());
    CHECK(nearest(s[3], pts) == 3);
    CHECK(nearest(cd(0, 0), std::vector<cd>{cd(1, 0), cd(-1, 0)}) == 0);
    CHECK(nearest(cd(0.9, 0), std::vector<cd>{cd(0, 0), cd(1, 0), cd(2, 0)}) == 1);
    CHECK_THROWS_AS(nearest(cd(0, 0), std::vector<cd>{}), UsageError);
}

TEST_CASE("nearest: minimal distance and scale equivariance on random probes")
{
    std::mt19937_64 rng(7);
    std::normal_distribution<double> n(0, 1);
    const auto s = make_qam16();
    const std::vector<cd> pts(s.symbols().begin(), s.symbols().end());
    for (int i = 0; i < 2000; ++i)
    {
        const cd p(n(rng), n(rng));
        const Index got = nearest(p, pts);
        for (const auto &c : pts)
            CHECK(std::abs(p - pts[static_cast<std::size_t>(got)]) <= std::abs(p - c));

        const cd c(n(rng), n(rng));
        std::vector<cd> scaled;
        for (const auto &q : pts)
            scaled.push_back(c * q);
        CHECK(nearest(c * p, scaled) == got);
    }
}
