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

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace onebit {

/// Finite data-symbol alphabet S = {s_0, ..., s_{L-1}} with unit average power.
///
/// Symbol order is part of the contract: expectation tables and CSV dumps index
/// symbols by their position here.
template <typename Real = double> class Constellation
{
  public:
    Constellation(std::vector<Complex<Real>> symbols, std::string label)
        : symbols_(std::move(symbols)), label_(std::move(label))
    {
        if (symbols_.size() < 2)
            throw UsageError("constellation needs at least 2 symbols");
        for (std::size_t i = 0; i < symbols_.size(); ++i)
            for (std::size_t j = i + 1; j < symbols_.size(); ++j)
                if (symbols_[i] == symbols_[j])
                    throw UsageError("constellation symbols must be distinct");
        if (std::abs(average_power() - Real(1)) > Real(1e-12))
            throw UsageError("constellation must have unit average power");
    }

    std::span<const Complex<Real>> symbols() const { return symbols_; }
    const Complex<Real> &operator[](Index l) const { return symbols_[static_cast<std::size_t>(l)]; }
    Index size() const { return static_cast<Index>(symbols_.size()); }
    const std::string &label() const { return label_; }

    Real average_power() const
    {
        Real acc = 0;
        for (const auto &s : symbols_)
            acc += std::norm(s);
        return acc / Real(symbols_.size());
    }

    // Index of a symbol matching `s` to within `tol`, or -1.
    Index find(const Complex<Real> &s, Real tol = Real(1e-9)) const
    {
        for (std::size_t l = 0; l < symbols_.size(); ++l)
            if (std::abs(symbols_[l] - s) <= tol)
                return static_cast<Index>(l);
        return -1;
    }

  private:
    std::vector<Complex<Real>> symbols_;
    std::string label_;
};

/// Normalized 16-QAM, row-major over Re in {-3,-1,1,3} then Im in {-3,-1,1,3},
/// scaled by 1/sqrt(10).
template <typename Real = double> Constellation<Real> make_qam16()
{
    const Real scale = Real(1) / std::sqrt(Real(10));
    constexpr int levels[] = {-3, -1, 1, 3};
    std::vector<Complex<Real>> pts;
    pts.reserve(16);
    for (int re : levels)
        for (int im : levels)
            pts.emplace_back(scale * Real(re), scale * Real(im));
    return Constellation<Real>(std::move(pts), "qam16");
}

/// QPSK (1/sqrt(2)){-1-j, -1+j, 1-j, 1+j}, same row-major convention.
template <typename Real = double> Constellation<Real> make_qpsk()
{
    const Real scale = Real(1) / std::sqrt(Real(2));
    std::vector<Complex<Real>> pts;
    for (int re : {-1, 1})
        for (int im : {-1, 1})
            pts.emplace_back(scale * Real(re), scale * Real(im));
    return Constellation<Real>(std::move(pts), "qpsk");
}

template <typename Real = double> Constellation<Real> make_constellation(std::string_view name)
{
    if (name == "qam16")
        return make_qam16<Real>();
    if (name == "qpsk")
        return make_qpsk<Real>();
    throw UsageError("unknown constellation '" + std::string(name) + "' (expected qam16 or qpsk)");
}

/// argmin_l |point - candidates[l]|, lowest index on ties.
template <typename Real> Index nearest(const Complex<Real> &point, std::span<const Complex<Real>> candidates)
{
    if (candidates.empty())
        throw UsageError("nearest: empty candidate list");
    Index best = 0;
    Real best_d = std::numeric_limits<Real>::infinity();
    for (std::size_t l = 0; l < candidates.size(); ++l)
    {
        const Real d = std::norm(point - candidates[l]);
        if (d < best_d)
        {
            best_d = d;
            best = static_cast<Index>(l);
        }
    }
    return best;
}

template <typename Real> Index nearest(const Complex<Real> &point, const std::vector<Complex<Real>> &candidates)
{
    return nearest(point, std::span<const Complex<Real>>(candidates));
}

} // namespace onebit
