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

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace onebit {

template <typename Real> using Complex = std::complex<Real>;
template <typename Real> using CMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real> using CVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;
template <typename Real> using RVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

using Index = Eigen::Index;

// Caller passed arguments outside an operation's domain.
class UsageError : public std::invalid_argument
{
  public:
    using std::invalid_argument::invalid_argument;
};

// A closed-form quantity violated a mathematical invariant (e.g. a correlation
// coefficient outside [-1, 1]). Signals a bug, not bad input.
class NumericError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

class SingularMatrixError : public NumericError
{
  public:
    using NumericError::NumericError;
};

// Scenario scalars shared by every stage of the pipeline. rho is linear SNR.
template <typename Real = double> struct SystemConfig
{
    Index antennas = 32;    // M
    Index users = 2;        // K
    Index pilot_length = 31; // tau
    Real rho = Real(1);
    std::uint64_t seed = 1;
};

// Per-entry quantizer amplitude sqrt((rho K + 1) / 2).
template <typename Real> Real quantizer_scale(Real rho, Index users)
{
    return std::sqrt((rho * Real(users) + Real(1)) / Real(2));
}

} // namespace onebit
