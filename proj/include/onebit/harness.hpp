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

#include "onebit/onebit.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace onebit {

/// Invalid experiment configuration. `key()` names the offending config key.
class ConfigError : public UsageError
{
  public:
    ConfigError(std::string key, const std::string &what) : UsageError(key + ": " + what), key_(std::move(key)) {}
    const std::string &key() const { return key_; }

  private:
    std::string key_;
};

inline constexpr Index kLargeProblemThreshold = 4096; // M tau above this needs allow_large

struct ExperimentConfig
{
    Index antennas = 32;
    Index users = 2;
    Index tau = 31;
    Index root = 1;
    std::string constellation = "qam16";
    Scenario scenario = Scenario::two_ue;
    std::vector<double> snr_db{0.0};
    std::int64_t trials = 2000;
    std::uint64_t seed = 1;
    std::vector<Strategy> strategies{Strategy::exhaustive, Strategy::heuristic, Strategy::genie};
    Index table_budget = kDefaultTableBudget;
    bool allow_large = false;
    std::string cache_dir; // empty: no on-disk cache
};

/// Throws ConfigError naming the first invalid key.
void validate_config(const ExperimentConfig &cfg);

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

/// Everything that depends on (config, rho) but not on the trial: covariances,
/// pilots, estimator, expectation tables for every UE.
struct OperatingPoint
{
    double rho = 1;
    CovarianceSet<double> cov;
    PilotMatrix<double> pilots;
    EstimatorState<double> estimator;
    std::vector<ExpectationTable<double>> tables;
};

/// Builds (or loads from cfg.cache_dir) the estimator and, when `with_tables`,
/// the expectation tables for all UEs.
OperatingPoint prepare_operating_point(const ExperimentConfig &cfg, double rho, bool with_tables = true);

// ---------------------------------------------------------------------------
// Scatter (per-trial soft symbols with fixed interferers)

struct ScatterSample
{
    std::int64_t trial = 0;
    std::complex<double> xhat;
    Index true_symbol = 0;
};

struct ScatterSymbolSummary
{
    Index symbol = 0;
    std::complex<double> expected;  // closed-form E_k
    std::complex<double> empirical; // trial mean of xhat_k
    double std_error = 0;
};

struct ScatterResult
{
    Index ue = 0;
    double snr_db = 0;
    std::vector<Index> interferers;
    std::vector<ScatterSample> samples;
    std::vector<ScatterSymbolSummary> summary;
};

/// For every s_l sent by UE `ue` with the other UEs fixed to `interferers`
/// (K-1 symbol indices), run cfg.trials independent trials at cfg.snr_db[0].
ScatterResult run_scatter_fixed(const ExperimentConfig &cfg, Index ue, const std::vector<Index> &interferers);

/// Full expectation table of UE `ue` at cfg.snr_db[0].
ExpectationTable<double> run_scatter_all(const ExperimentConfig &cfg, Index ue);

// ---------------------------------------------------------------------------
// SER

struct SerPoint
{
    Strategy strategy = Strategy::exhaustive;
    double snr_db = 0;
    std::uint64_t errors = 0;
    std::uint64_t count = 0;
    std::vector<std::uint64_t> ue_errors; // per UE; each UE contributes trials symbols
    double ser() const { return count ? static_cast<double>(errors) / static_cast<double>(count) : 0.0; }
    double std_error() const
    {
        const double p = ser();
        return count ? std::sqrt(p * (1 - p) / static_cast<double>(count)) : 0.0;
    }
};

struct SerResult
{
    std::vector<SerPoint> points; // SNR-major, strategies in cfg order

    const SerPoint &at(Strategy s, double snr_db) const;
};

using ProgressFn = std::function<void(const std::string &)>;

SerResult run_ser(const ExperimentConfig &cfg, const ProgressFn &progress = {});

// ---------------------------------------------------------------------------
// Closed form vs Monte-Carlo consistency checks

struct CheckResult
{
    std::string name;
    bool passed = false;
    std::string detail;
};

struct ValidateOptions
{
    Index users = 2;
    Scenario scenario = Scenario::two_ue;
    std::int64_t covariance_trials = 200000;
    std::int64_t mean_trials = 100000;
    std::uint64_t seed = 1;
    bool tamper_omega = false; // test hook: Omega without the 2/pi factor
};

std::vector<CheckResult> validate(const ValidateOptions &opts);

// ---------------------------------------------------------------------------
// CSV output; column sets are fixed.

void write_scatter_csv(std::ostream &os, const ScatterResult &r);          // trial,re_xhat,im_xhat,true_symbol_index
void write_scatter_summary_csv(std::ostream &os, const ScatterResult &r);  // l,re_E,im_E,re_mean,im_mean,stderr
void write_expectations_csv(std::ostream &os, const ExpectationTable<double> &t); // x_encoding,ue,re_E,im_E
void write_class_means_csv(std::ostream &os, const ExpectationTable<double> &t);  // ue,l,re_Ebar,im_Ebar
void write_ser_csv(std::ostream &os, const SerResult &r);     // strategy,snr_db,errors,count,ser,stderr
void write_ser_per_ue_csv(std::ostream &os, const SerResult &r); // strategy,snr_db,ue,errors,count,ser

} // namespace onebit
