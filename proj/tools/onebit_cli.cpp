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

// onebit: command-line front end for the experiment harness.
//
// Exit codes: 0 success, 1 validation failure or runtime error, 2 config error.

#include "onebit/harness.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitConfig = 2;

std::ofstream open_out(const std::string &path, const std::string &key)
{
    std::ofstream os(path);
    if (!os)
        throw onebit::ConfigError(key, "cannot open '" + path + "' for writing");
    return os;
}

void write_to(const std::string &path, const std::string &key, const auto &writer)
{
    if (path.empty() || path == "-")
    {
        writer(std::cout);
        return;
    }
    auto os = open_out(path, key);
    writer(os);
}

} // namespace

int main(int argc, char **argv)
{
    using namespace onebit;

    CLI::App app{"Uplink detection with 1-bit ADCs: closed-form expectations, BLMMSE, SER harness"};
    app.set_config("--config", "", "Flat key=value config file; command-line flags override it");
    app.require_subcommand(1);
    app.fallthrough();

    ExperimentConfig cfg;
    std::string scenario = "two_ue";
    std::vector<std::string> strategies{"exhaustive", "heuristic", "genie"};
    std::string out;
    std::string means_out;
    std::string per_ue_out;
    Index ue = 0;

    app.add_option("-M,--antennas", cfg.antennas, "Number of BS antennas M")->capture_default_str();
    app.add_option("-K,--users", cfg.users, "Number of UEs K")->capture_default_str();
    app.add_option("--tau", cfg.tau, "Pilot length (odd prime)")->capture_default_str();
    app.add_option("--root", cfg.root, "Zadoff-Chu root index")->capture_default_str();
    app.add_option("--constellation", cfg.constellation, "qam16 or qpsk")->capture_default_str();
    app.add_option("--scenario", scenario, "two_ue, three_ue or uncorrelated")->capture_default_str();
    app.add_option("--snr_db", cfg.snr_db, "SNR grid in dB (comma separated)")->delimiter(',')->capture_default_str();
    app.add_option("--trials", cfg.trials, "Monte-Carlo trials")->capture_default_str();
    app.add_option("--seed", cfg.seed, "Master seed")->capture_default_str();
    app.add_option("--strategies", strategies, "Subset of exhaustive,heuristic,genie")->delimiter(',');
    app.add_option("--table_budget", cfg.table_budget, "Max expectation-table entries")->capture_default_str();
    app.add_flag("--allow_large", cfg.allow_large, "Permit M*tau > 4096 (C_rp needs ~16 (M tau)^2 bytes)");
    app.add_option("--cache_dir", cfg.cache_dir, "Directory for cached estimator states and tables");
    app.add_option("--ue", ue, "Target UE (0-based)")->capture_default_str();
    app.add_option("-o,--out", out, "Primary CSV output ('-' for stdout)");
    app.add_option("--means_out", means_out, "Second CSV output (class means / scatter summary)");
    app.add_option("--per_ue_out", per_ue_out, "Per-UE SER breakdown CSV");

    auto *validate_cmd = app.add_subcommand("validate", "Closed-form vs Monte-Carlo consistency checks");
    ValidateOptions vopts;
    bool tamper = false;
    validate_cmd->add_option("--cov_trials", vopts.covariance_trials, "Trials for covariance oracles")
        ->capture_default_str();
    validate_cmd->add_option("--mean_trials", vopts.mean_trials, "Trials for the soft-symbol mean oracle")
        ->capture_default_str();
    validate_cmd->add_flag("--tamper_omega", tamper, "Test hook: drop the 2/pi factor of Omega")->group("");

    auto *scatter_cmd = app.add_subcommand("scatter", "Soft-symbol scatter data");
    std::string mode = "fixed";
    std::vector<Index> interferers;
    scatter_cmd->add_option("--mode", mode, "fixed (per-trial samples) or all (expectation table)")
        ->check(CLI::IsMember({"fixed", "all"}))
        ->capture_default_str();
    scatter_cmd->add_option("--interferers", interferers, "Symbol indices of the other UEs (fixed mode)")
        ->delimiter(',');

    auto *table_cmd = app.add_subcommand("expectation-table", "Closed-form expectations over all x in S^K");
    auto *ser_cmd = app.add_subcommand("ser", "SER versus SNR for the detection strategies");
    auto *cov_cmd = app.add_subcommand("covariance", "Export per-UE channel covariances as CSV");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try
    {
        cfg.scenario = parse_scenario(scenario);
        cfg.strategies.clear();
        for (const auto &s : strategies)
            cfg.strategies.push_back(parse_strategy(s));
    }
    catch (const UsageError &e)
    {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    }

    try
    {
        if (*validate_cmd)
        {
            vopts.users = cfg.users;
            vopts.scenario = cfg.scenario;
            vopts.seed = cfg.seed;
            vopts.tamper_omega = tamper;
            bool ok = true;
            for (const auto &c : validate(vopts))
            {
                std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
                ok = ok && c.passed;
            }
            return ok ? 0 : kExitValidation;
        }

        validate_config(cfg);
        if (cfg.antennas * cfg.tau > kLargeProblemThreshold)
            std::cerr << "warning: M*tau = " << cfg.antennas * cfg.tau
                      << "; dense C_rp and its factor need "
                      << (2 * 16 * cfg.antennas * cfg.tau * cfg.antennas * cfg.tau >> 20) << " MiB\n";

        if (*scatter_cmd && mode == "fixed")
        {
            const auto res = run_scatter_fixed(cfg, ue, interferers);
            write_to(out, "out", [&](std::ostream &os) { write_scatter_csv(os, res); });
            if (!means_out.empty())
                write_to(means_out, "means_out", [&](std::ostream &os) { write_scatter_summary_csv(os, res); });
            return 0;
        }
        if (*scatter_cmd || *table_cmd)
        {
            const auto table = run_scatter_all(cfg, ue);
            write_to(out, "out", [&](std::ostream &os) { write_expectations_csv(os, table); });
            if (!means_out.empty())
                write_to(means_out, "means_out", [&](std::ostream &os) { write_class_means_csv(os, table); });
            return 0;
        }
        if (*ser_cmd)
        {
            const auto res = run_ser(cfg, [](const std::string &msg) { std::cerr << msg << '\n'; });
            write_to(out, "out", [&](std::ostream &os) { write_ser_csv(os, res); });
            if (!per_ue_out.empty())
                write_to(per_ue_out, "per_ue_out", [&](std::ostream &os) { write_ser_per_ue_csv(os, res); });
            return 0;
        }
        if (*cov_cmd)
        {
            SystemConfig<double> sys{cfg.antennas, cfg.users, cfg.tau, 1.0, cfg.seed};
            const auto cov = scenario_covariances(sys, cfg.scenario);
            const std::string prefix = out.empty() ? "covariance" : out;
            for (Index k = 0; k < cov.users(); ++k)
            {
                const std::string path = prefix + "_ue" + std::to_string(k) + ".csv";
                write_to(path, "out", [&](std::ostream &os) { write_matrix_csv(os, cov[k]); });
            }
            return 0;
        }
    }
    catch (const ConfigError &e)
    {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    }
    return 0;
}
