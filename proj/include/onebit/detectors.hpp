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

#include "onebit/constellation.hpp"
#include "onebit/expectation.hpp"

#include <limits>
#include <vector>

namespace onebit {

enum class Strategy
{
    exhaustive, // nearest over all L^K expectations
    heuristic,  // nearest over the L class means
    genie,      // nearest over the L expectations consistent with the true interferers
};

inline const char *to_string(Strategy s)
{
    switch (s)
    {
    case Strategy::exhaustive:
        return "exhaustive";
    case Strategy::heuristic:
        return "heuristic";
    case Strategy::genie:
        return "genie";
    }
    return "?";
}

inline Strategy parse_strategy(const std::string &name)
{
    if (name == "exhaustive")
        return Strategy::exhaustive;
    if (name == "heuristic")
        return Strategy::heuristic;
    if (name == "genie")
        return Strategy::genie;
    throw UsageError("unknown strategy '" + name + "' (expected exhaustive, heuristic or genie)");
}

template <typename Real = double> struct DetectionResult
{
    Index ue = 0;
    Index symbol_index = 0; // l*, 0-based
    Strategy strategy = Strategy::exhaustive;
    Real distance = 0;
};

template <typename Real>
DetectionResult<Real> detect_exhaustive(const Complex<Real> &xhat, const ExpectationTable<Real> &table)
{
    if (table.entries.empty())
        throw UsageError("detect_exhaustive: empty expectation table");
    const Index best = nearest(xhat, std::span<const Complex<Real>>(table.entries));
    return {table.ue, table.digit(best, table.ue), Strategy::exhaustive,
            std::abs(xhat - table.entries[static_cast<std::size_t>(best)])};
}

template <typename Real>
DetectionResult<Real> detect_heuristic(const Complex<Real> &xhat, const ExpectationTable<Real> &table)
{
    if (table.class_means.empty())
        throw UsageError("detect_heuristic: table has no class means");
    const Index best = nearest(xhat, std::span<const Complex<Real>>(table.class_means));
    return {table.ue, best, Strategy::heuristic, std::abs(xhat - table.class_means[static_cast<std::size_t>(best)])};
}

/// Genie-aided search. `interferers` holds the K-1 true symbol indices of the
/// other UEs in increasing UE order.
template <typename Real>
DetectionResult<Real> detect_genie(const Complex<Real> &xhat, const std::vector<Index> &interferers,
                                   const ExpectationTable<Real> &table)
{
    if (static_cast<Index>(interferers.size()) != table.users - 1)
        throw UsageError("detect_genie: expected K-1 interferer symbols");
    std::vector<Index> digits;
    digits.reserve(static_cast<std::size_t>(table.users));
    for (Index j = 0, i = 0; j < table.users; ++j)
        digits.push_back(j == table.ue ? 0 : interferers[static_cast<std::size_t>(i++)]);
    for (Index d : digits)
        if (d < 0 || d >= table.alphabet)
            throw UsageError("detect_genie: interferer symbol index out of range");

    Index stride = 1;
    for (Index j = table.users - 1; j > table.ue; --j)
        stride *= table.alphabet;
    const Index base = encode_symbols(digits, table.alphabet);

    DetectionResult<Real> res{table.ue, 0, Strategy::genie, std::numeric_limits<Real>::infinity()};
    Real best = std::numeric_limits<Real>::infinity();
    for (Index l = 0; l < table.alphabet; ++l)
    {
        const Real d = std::norm(xhat - table.entries[static_cast<std::size_t>(base + l * stride)]);
        if (d < best)
        {
            best = d;
            res.symbol_index = l;
        }
    }
    res.distance = std::abs(xhat - table.entries[static_cast<std::size_t>(base + res.symbol_index * stride)]);
    return res;
}

/// Same as above with interferers given as symbol values; each must be in S.
template <typename Real>
DetectionResult<Real> detect_genie(const Complex<Real> &xhat, const std::vector<Complex<Real>> &interferers,
                                   const ExpectationTable<Real> &table, const Constellation<Real> &s)
{
    std::vector<Index> idx;
    for (const auto &v : interferers)
    {
        const Index l = s.find(v);
        if (l < 0)
            throw UsageError("detect_genie: interferer symbol is not in the constellation");
        idx.push_back(l);
    }
    return detect_genie(xhat, idx, table);
}

template <typename Real>
DetectionResult<Real> detect(Strategy s, const Complex<Real> &xhat, const std::vector<Index> &interferers,
                             const ExpectationTable<Real> &table)
{
    switch (s)
    {
    case Strategy::exhaustive:
        return detect_exhaustive(xhat, table);
    case Strategy::heuristic:
        return detect_heuristic(xhat, table);
    case Strategy::genie:
        return detect_genie(xhat, interferers, table);
    }
    throw UsageError("detect: unknown strategy");
}

} // namespace onebit
