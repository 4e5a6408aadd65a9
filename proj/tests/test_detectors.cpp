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

#include "onebit/detectors.hpp"

#include <doctest.h>

#include <limits>

using namespace onebit;
using cd = std::complex<double>;

namespace {

// Synthetic table with random entries; detectors only look at the numbers.
ExpectationTable<double> random_table(Index ue, Index users, Index alphabet, std::uint64_t seed)
{
    Rng rng(seed);
    ExpectationTable<double> t;
    t.ue = ue;
    t.users = users;
    t.alphabet = alphabet;
    Index n = 1;
    for (Index k = 0; k < users; ++k)
        n *= alphabet;
    for (Index e = 0; e < n; ++e)
        t.entries.push_back(rng.cn() * 10.0);
    t.class_means.assign(static_cast<std::size_t>(alphabet), 0);
    for (Index e = 0; e < n; ++e)
        t.class_means[static_cast<std::size_t>(t.digit(e, ue))] += t.entries[static_cast<std::size_t>(e)] / double(n / alphabet);
    return t;
}

std::vector<Index> digits_of(Index e, Index users, Index alphabet)
{
    std::vector<Index> d(static_cast<std::size_t>(users));
    for (Index k = users - 1; k >= 0; --k)
    {
        d[static_cast<std::size_t>(k)] = e % alphabet;
        e /= alphabet;
    }
    return d;
}

// Naive oracles: plain loops over decoded digit vectors.
Index oracle_exhaustive(cd xhat, const ExpectationTable<double> &t)
{
    double best = std::numeric_limits<double>::infinity();
    Index arg = -1;
    for (Index e = 0; e < t.size(); ++e)
    {
        const double d = std::abs(xhat - t.entries[static_cast<std::size_t>(e)]);
        if (d < best)
        {
            best = d;
            arg = e;
        }
    }
    return digits_of(arg, t.users, t.alphabet)[static_cast<std::size_t>(t.ue)];
}

Index oracle_heuristic(cd xhat, const ExpectationTable<double> &t)
{
    double best = std::numeric_limits<double>::infinity();
    Index arg = -1;
    for (Index l = 0; l < t.alphabet; ++l)
    {
        const double d = std::abs(xhat - t.class_means[static_cast<std::size_t>(l)]);
        if (d < best)
        {
            best = d;
            arg = l;
        }
    }
    return arg;
}

// Filter the full table by the interferer digits, then scan.
Index oracle_genie(cd xhat, const std::vector<Index> &others, const ExpectationTable<double> &t)
{
    double best = std::numeric_limits<double>::infinity();
    Index arg = -1;
    for (Index e = 0; e < t.size(); ++e)
    {
        auto d = digits_of(e, t.users, t.alphabet);
        std::vector<Index> rest;
        for (Index k = 0; k < t.users; ++k)
            if (k != t.ue)
                rest.push_back(d[static_cast<std::size_t>(k)]);
        if (rest != others)
            continue;
        const double dist = std::abs(xhat - t.entries[static_cast<std::size_t>(e)]);
        if (dist < best)
        {
            best = dist;
            arg = d[static_cast<std::size_t>(t.ue)];
        }
    }
    return arg;
}

} // namespace

TEST_CASE("detectors match naive scans on random probes")
{
    for (Index ue : {0, 1})
    {
        const auto t = random_table(ue, 2, 16, 40 + ue);
        Rng rng(99);
        for (int i = 0; i < 1000; ++i)
        {
            const cd probe = rng.cn() * 12.0;
            const std::vector<Index> others{static_cast<Index>(rng.uniform_index(16))};
            const auto ex = detect_exhaustive(probe, t);
            const auto he = detect_heuristic(probe, t);
            const auto ge = detect_genie(probe, others, t);
            CHECK(ex.symbol_index == oracle_exhaustive(probe, t));
            CHECK(he.symbol_index == oracle_heuristic(probe, t));
            CHECK(ge.symbol_index == oracle_genie(probe, others, t));
            CHECK(ge.distance >= ex.distance);
            CHECK(ex.distance >= 0);
            CHECK(ex.strategy == Strategy::exhaustive);
            CHECK(he.strategy == Strategy::heuristic);
            CHECK(ge.strategy == Strategy::genie);
            CHECK(ex.ue == ue);
        }
    }
}

TEST_CASE("three-UE genie slice")
{
    const auto t = random_table(1, 3, 4, 7);
    Rng rng(3);
    for (int i = 0; i < 300; ++i)
    {
        const cd probe = rng.cn() * 12.0;
        const std::vector<Index> others{static_cast<Index>(rng.uniform_index(4)), static_cast<Index>(rng.uniform_index(4))};
        CHECK(detect_genie(probe, others, t).symbol_index == oracle_genie(probe, others, t));
        CHECK(detect_exhaustive(probe, t).symbol_index == oracle_exhaustive(probe, t));
    }
}

TEST_CASE("zero-distance probes")
{
    const auto t = random_table(0, 2, 16, 11);
    for (Index e : {0, 37, 200, 255})
    {
        const cd probe = t.entries[static_cast<std::size_t>(e)];
        const auto d = digits_of(e, 2, 16);
        CHECK(detect_exhaustive(probe, t).symbol_index == d[0]);
        CHECK(detect_exhaustive(probe, t).distance == 0.0);
        CHECK(detect_genie(probe, {d[1]}, t).symbol_index == d[0]);
        CHECK(detect_genie(probe, {d[1]}, t).distance == 0.0);
    }
    for (Index l = 0; l < 16; ++l)
        CHECK(detect_heuristic(t.class_means[static_cast<std::size_t>(l)], t).symbol_index == l);
}

TEST_CASE("single UE: all strategies agree")
{
    const auto t = random_table(0, 1, 16, 5);
    Rng rng(8);
    for (int i = 0; i < 1000; ++i)
    {
        const cd probe = rng.cn() * 12.0;
        const Index a = detect_exhaustive(probe, t).symbol_index;
        CHECK(detect_heuristic(probe, t).symbol_index == a);
        CHECK(detect_genie(probe, std::vector<Index>{}, t).symbol_index == a);
        CHECK(detect(Strategy::genie, probe, {}, t).symbol_index == a);
    }
}

TEST_CASE("ties resolve to the lowest index")
{
    ExpectationTable<double> t;
    t.ue = 0;
    t.users = 1;
    t.alphabet = 2;
    t.entries = {cd(1, 0), cd(-1, 0)};
    t.class_means = t.entries;
    CHECK(detect_exhaustive(cd(0, 0), t).symbol_index == 0);
    CHECK(detect_heuristic(cd(0, 0), t).symbol_index == 0);
    CHECK(detect_genie(cd(0, 0), std::vector<Index>{}, t).symbol_index == 0);
}

TEST_CASE("detector errors")
{
    ExpectationTable<double> empty;
    CHECK_THROWS_AS(detect_exhaustive(cd(0, 0), empty), UsageError);
    CHECK_THROWS_AS(detect_heuristic(cd(0, 0), empty), UsageError);

    const auto t = random_table(0, 2, 16, 1);
    CHECK_THROWS_AS(detect_genie(cd(0, 0), std::vector<Index>{16}, t), UsageError);
    CHECK_THROWS_AS(detect_genie(cd(0, 0), std::vector<Index>{1, 2}, t), UsageError);

    const auto s = make_qam16();
    CHECK_THROWS_AS(detect_genie(cd(0, 0), std::vector<cd>{cd(0.5, 0.5)}, t, s), UsageError);
    CHECK(detect_genie(cd(0, 0), std::vector<cd>{s[4]}, t, s).symbol_index ==
          detect_genie(cd(0, 0), std::vector<Index>{4}, t).symbol_index);
}

TEST_CASE("strategy names")
{
    for (auto s : {Strategy::exhaustive, Strategy::heuristic, Strategy::genie})
        CHECK(parse_strategy(to_string(s)) == s);
    CHECK_THROWS_AS(parse_strategy("oracle"), UsageError);
}
