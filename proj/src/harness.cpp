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

#include "onebit/harness.hpp"
#include "onebit/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>

namespace onebit {

void validate_config(const ExperimentConfig &cfg)
{
    if (cfg.antennas < 1)
        throw ConfigError("antennas", "must be >= 1");
    if (cfg.users < 1)
        throw ConfigError("users", "must be >= 1");
    if (!is_odd_prime(cfg.tau))
        throw ConfigError("tau", "must be an odd prime, got " + std::to_string(cfg.tau));
    if (cfg.tau < cfg.users)
        throw ConfigError("tau", "must be >= users");
    if (cfg.root < 1 || cfg.root >= cfg.tau || std::gcd(cfg.root, cfg.tau) != 1)
        throw ConfigError("root", "must be coprime with tau and in [1, tau)");
    if (cfg.constellation != "qam16" && cfg.constellation != "qpsk")
        throw ConfigError("constellation", "expected qam16 or qpsk, got '" + cfg.constellation + "'");
    const auto centers = scenario_center_angles(cfg.scenario);
    if (cfg.scenario != Scenario::uncorrelated && static_cast<Index>(centers.size()) != cfg.users)
        throw ConfigError("scenario", std::string(to_string(cfg.scenario)) + " requires users = " +
                                          std::to_string(centers.size()));
    if (cfg.snr_db.empty())
        throw ConfigError("snr_db", "SNR grid must not be empty");
    for (double v : cfg.snr_db)
        if (!std::isfinite(v))
            throw ConfigError("snr_db", "SNR values must be finite");
    if (cfg.trials < 1)
        throw ConfigError("trials", "must be >= 1");
    if (cfg.strategies.empty())
        throw ConfigError("strategies", "must name at least one strategy");
    if (cfg.table_budget < 1)
        throw ConfigError("table_budget", "must be >= 1");
    if (cfg.antennas * cfg.tau > kLargeProblemThreshold && !cfg.allow_large)
        throw ConfigError("allow_large", "M*tau = " + std::to_string(cfg.antennas * cfg.tau) + " exceeds " +
                                             std::to_string(kLargeProblemThreshold) +
                                             "; C_rp would need " +
                                             std::to_string(cfg.antennas * cfg.tau * cfg.antennas * cfg.tau * 16 >> 20) +
                                             " MiB per copy. Set allow_large to proceed");
}

namespace {

std::string hex_key(std::uint64_t k)
{
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << k;
    return os.str();
}

bool load_tables(const std::string &path, Index users, Index alphabet, Index size,
                 std::vector<ExpectationTable<double>> &out)
{
    std::ifstream is(path, std::ios::binary);
    if (!is)
        return false;
    out.assign(static_cast<std::size_t>(users), {});
    for (Index k = 0; k < users; ++k)
    {
        auto &t = out[static_cast<std::size_t>(k)];
        t.ue = k;
        t.users = users;
        t.alphabet = alphabet;
        t.entries.resize(static_cast<std::size_t>(size));
        t.class_means.resize(static_cast<std::size_t>(alphabet));
        is.read(reinterpret_cast<char *>(t.entries.data()), static_cast<std::streamsize>(size * sizeof(std::complex<double>)));
        is.read(reinterpret_cast<char *>(t.class_means.data()),
                static_cast<std::streamsize>(alphabet * sizeof(std::complex<double>)));
    }
    return static_cast<bool>(is);
}

void save_tables(const std::string &path, const std::vector<ExpectationTable<double>> &tables)
{
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    for (const auto &t : tables)
    {
        os.write(reinterpret_cast<const char *>(t.entries.data()),
                 static_cast<std::streamsize>(t.entries.size() * sizeof(std::complex<double>)));
        os.write(reinterpret_cast<const char *>(t.class_means.data()),
                 static_cast<std::streamsize>(t.class_means.size() * sizeof(std::complex<double>)));
    }
}

std::complex<double> soft_symbol(const CMatrix<double> &hhat, Index k, const CVector<double> &r)
{
    return hhat.col(k).dot(r);
}

} // namespace

OperatingPoint prepare_operating_point(const ExperimentConfig &cfg, double rho, bool with_tables)
{
    validate_config(cfg);
    SystemConfig<double> sys{cfg.antennas, cfg.users, cfg.tau, rho, cfg.seed};
    auto cov = scenario_covariances(sys, cfg.scenario);
    auto pm = pilot_matrix<double>(cfg.tau, cfg.users, cfg.root);

    const bool cached = !cfg.cache_dir.empty();
    const std::uint64_t key = estimator_cache_key(cov, pm, rho);
    namespace fs = std::filesystem;
    if (cached)
        fs::create_directories(cfg.cache_dir);
    const std::string est_path = cached ? (fs::path(cfg.cache_dir) / ("estimator_" + hex_key(key) + ".bin")).string() : "";

    std::optional<EstimatorState<double>> est;
    if (cached)
        est = load_estimator<double>(est_path, key);
    if (!est)
    {
        est = build_estimator(cov, pm, rho);
        if (cached)
            save_estimator(est_path, *est, key);
    }

    OperatingPoint op{rho, cov, pm, std::move(*est), {}};
    if (!with_tables)
        return op;

    const auto s = make_constellation<double>(cfg.constellation);
    const Index size = checked_table_size(s.size(), cfg.users, cfg.table_budget);
    const std::string table_path =
        cached ? (fs::path(cfg.cache_dir) /
                  ("tables_" + hex_key(fnv1a(s.label().data(), s.label().size(), key)) + ".bin"))
                     .string()
               : "";
    if (cached && load_tables(table_path, cfg.users, s.size(), size, op.tables))
        return op;
    op.tables = build_expectation_tables(s, SoftSymbolExpectation<double>(op.estimator, op.cov, op.pilots),
                                         cfg.table_budget);
    if (cached)
        save_tables(table_path, op.tables);
    return op;
}

ScatterResult run_scatter_fixed(const ExperimentConfig &cfg, Index ue, const std::vector<Index> &interferers)
{
    validate_config(cfg);
    if (ue < 0 || ue >= cfg.users)
        throw ConfigError("ue", "must be in [0, users)");
    const auto s = make_constellation<double>(cfg.constellation);
    if (static_cast<Index>(interferers.size()) != cfg.users - 1)
        throw ConfigError("interferers", "need exactly users - 1 symbol indices");
    for (Index i : interferers)
        if (i < 0 || i >= s.size())
            throw ConfigError("interferers", "symbol index " + std::to_string(i) + " out of range");

    const double rho = db_to_linear(cfg.snr_db.front());
    const auto op = prepare_operating_point(cfg, rho, false);
    const SoftSymbolExpectation<double> expect(op.estimator, op.cov, op.pilots);

    ScatterResult res;
    res.ue = ue;
    res.snr_db = cfg.snr_db.front();
    res.interferers = interferers;
    res.samples.reserve(static_cast<std::size_t>(s.size() * cfg.trials));

    CVector<double> x(cfg.users);
    for (Index k = 0, i = 0; k < cfg.users; ++k)
        if (k != ue)
            x(k) = s[interferers[static_cast<std::size_t>(i++)]];

    for (Index l = 0; l < s.size(); ++l)
    {
        x(ue) = s[l];
        std::complex<double> sum = 0;
        double sum_sq = 0;
        for (std::int64_t t = 0; t < cfg.trials; ++t)
        {
            const auto id = static_cast<std::uint64_t>(l * cfg.trials + t);
            Rng ch(cfg.seed, id, Phase::channel);
            Rng pn(cfg.seed, id, Phase::pilot_noise);
            Rng dn(cfg.seed, id, Phase::data_noise);
            const auto h = sample_channels(op.cov, ch);
            const auto pilot = uplink_pilot_block(h.H, op.pilots, rho, pn);
            const auto hhat = estimate(op.estimator, pilot.rp);
            const auto data = uplink_data_block(h.H, x, rho, dn);
            const auto v = soft_symbol(hhat, ue, data.r);
            res.samples.push_back({t, v, l});
            sum += v;
            sum_sq += std::norm(v);
        }
        const double n = static_cast<double>(cfg.trials);
        const auto mean = sum / n;
        const double var = n > 1 ? std::max(0.0, sum_sq / n - std::norm(mean)) * n / (n - 1) : 0.0;
        res.summary.push_back({l, expect(ue, x), mean, std::sqrt(var / n)});
    }
    return res;
}

ExpectationTable<double> run_scatter_all(const ExperimentConfig &cfg, Index ue)
{
    validate_config(cfg);
    if (ue < 0 || ue >= cfg.users)
        throw ConfigError("ue", "must be in [0, users)");
    const double rho = db_to_linear(cfg.snr_db.front());
    auto op = prepare_operating_point(cfg, rho, true);
    return std::move(op.tables[static_cast<std::size_t>(ue)]);
}

const SerPoint &SerResult::at(Strategy s, double snr_db) const
{
    for (const auto &p : points)
        if (p.strategy == s && p.snr_db == snr_db)
            return p;
    throw UsageError("SerResult::at: no point for that strategy and SNR");
}

SerResult run_ser(const ExperimentConfig &cfg, const ProgressFn &progress)
{
    validate_config(cfg);
    const auto s = make_constellation<double>(cfg.constellation);
    const Index users = cfg.users;
    SerResult res;

    for (double snr_db : cfg.snr_db)
    {
        const double rho = db_to_linear(snr_db);
        if (progress)
            progress("snr " + std::to_string(snr_db) + " dB: building estimator and tables");
        const auto op = prepare_operating_point(cfg, rho, true);

        const std::size_t first = res.points.size();
        for (Strategy st : cfg.strategies)
        {
            SerPoint p;
            p.strategy = st;
            p.snr_db = snr_db;
            p.ue_errors.assign(static_cast<std::size_t>(users), 0);
            res.points.push_back(std::move(p));
        }

        CVector<double> x(users);
        std::vector<Index> sent(static_cast<std::size_t>(users));
        std::vector<Index> others;
        for (std::int64_t t = 0; t < cfg.trials; ++t)
        {
            // streams depend on the trial only, so every SNR point sees the same draws
            const auto id = static_cast<std::uint64_t>(t);
            Rng ch(cfg.seed, id, Phase::channel);
            Rng pn(cfg.seed, id, Phase::pilot_noise);
            Rng sy(cfg.seed, id, Phase::data_symbols);
            Rng dn(cfg.seed, id, Phase::data_noise);

            const auto h = sample_channels(op.cov, ch);
            const auto pilot = uplink_pilot_block(h.H, op.pilots, rho, pn);
            const auto hhat = estimate(op.estimator, pilot.rp);
            for (Index k = 0; k < users; ++k)
            {
                sent[static_cast<std::size_t>(k)] = static_cast<Index>(sy.uniform_index(static_cast<std::size_t>(s.size())));
                x(k) = s[sent[static_cast<std::size_t>(k)]];
            }
            const auto data = uplink_data_block(h.H, x, rho, dn);
            const CVector<double> xhat = mrc_soft_symbols(hhat, data.r);

            for (Index k = 0; k < users; ++k)
            {
                others.clear();
                for (Index j = 0; j < users; ++j)
                    if (j != k)
                        others.push_back(sent[static_cast<std::size_t>(j)]);
                const auto &table = op.tables[static_cast<std::size_t>(k)];
                for (std::size_t i = 0; i < cfg.strategies.size(); ++i)
                {
                    auto &p = res.points[first + i];
                    const auto d = detect(cfg.strategies[i], xhat(k), others, table);
                    ++p.count;
                    if (d.symbol_index != sent[static_cast<std::size_t>(k)])
                    {
                        ++p.errors;
                        ++p.ue_errors[static_cast<std::size_t>(k)];
                    }
                }
            }
        }
        if (progress)
        {
            std::ostringstream os;
            os << "snr " << snr_db << " dB:";
            for (std::size_t i = first; i < res.points.size(); ++i)
                os << ' ' << to_string(res.points[i].strategy) << '=' << res.points[i].ser();
            progress(os.str());
        }
    }
    return res;
}

// ---------------------------------------------------------------------------

namespace {

struct TamperedOmega
{
    template <typename Real> Real operator()(Real x) const { return std::asin(std::clamp(x, Real(-1), Real(1))); }
};

CVector<double> validation_symbols(Index users)
{
    const double s = 1.0 / std::sqrt(10.0);
    const std::complex<double> pool[] = {{1 * s, 3 * s}, {-3 * s, 1 * s}, {-3 * s, 3 * s}, {1 * s, -1 * s}};
    CVector<double> x(users);
    for (Index k = 0; k < users; ++k)
        x(k) = pool[k % 4];
    return x;
}

std::string fmt_err(double err, double tol)
{
    std::ostringstream os;
    os << "max |closed - empirical| = " << err << " (tol " << tol << ")";
    return os.str();
}

} // namespace

std::vector<CheckResult> validate(const ValidateOptions &opts)
{
    std::vector<CheckResult> report;
    const double rho = 1.0;
    constexpr double tol = 0.02;

    auto run = [&report](const std::string &name, auto &&body) {
        try
        {
            report.push_back(body());
            report.back().name = name;
        }
        catch (const std::exception &e)
        {
            report.push_back({name, false, std::string("error: ") + e.what()});
        }
    };

    const Index small_tau = 5;
    SystemConfig<double> small{4, opts.users, small_tau, rho, opts.seed};
    const auto cov4 = scenario_covariances(small, opts.scenario);
    const auto pm5 = pilot_matrix<double>(small_tau, opts.users, 1);

    run("crp_diagonal", [&] {
        const auto crp = opts.tamper_omega ? crp_closed_form(cov4, pm5, rho, TamperedOmega{})
                                           : crp_closed_form(cov4, pm5, rho);
        const double target = rho * double(opts.users) + 1;
        const double err = (crp.diagonal().array() - target).abs().maxCoeff();
        const double herm = (crp - crp.adjoint()).cwiseAbs().maxCoeff();
        return CheckResult{"", err == 0.0 && herm == 0.0,
                           "diag error " + std::to_string(err) + ", hermitian error " + std::to_string(herm)};
    });

    run("crp_oracle", [&] {
        const auto crp = opts.tamper_omega ? crp_closed_form(cov4, pm5, rho, TamperedOmega{})
                                           : crp_closed_form(cov4, pm5, rho);
        const auto emp = mc::empirical_crp(cov4, pm5, rho, opts.covariance_trials, opts.seed);
        const double err = (crp - emp).cwiseAbs().maxCoeff();
        return CheckResult{"", err <= tol, fmt_err(err, tol)};
    });

    run("crrp_oracle", [&] {
        const auto x = validation_symbols(opts.users);
        const auto c = opts.tamper_omega ? crrp_closed_form(cov4, pm5, rho, x, TamperedOmega{})
                                         : crrp_closed_form(cov4, pm5, rho, x);
        const auto emp = mc::empirical_crrp(cov4, pm5, rho, x, opts.covariance_trials, opts.seed + 1);
        const double err = (c - emp).cwiseAbs().maxCoeff();
        return CheckResult{"", err <= tol, fmt_err(err, tol)};
    });

    run("expectation_oracle", [&] {
        SystemConfig<double> mid{8, opts.users, small_tau, rho, opts.seed};
        const auto cov8 = scenario_covariances(mid, opts.scenario);
        const auto st = opts.tamper_omega ? build_estimator(cov8, pm5, rho, TamperedOmega{})
                                          : build_estimator(cov8, pm5, rho);
        const SoftSymbolExpectation<double> expect(st, cov8, pm5);
        const auto x = validation_symbols(opts.users);
        bool ok = true;
        std::ostringstream os;
        for (Index k = 0; k < opts.users; ++k)
        {
            const auto closed = opts.tamper_omega ? expect.from_crrp(k, crrp_closed_form(cov8, pm5, rho, x, TamperedOmega{}))
                                                  : expect(k, x);
            const auto emp = mc::empirical_soft_mean(cov8, pm5, st, x, k, opts.mean_trials, opts.seed + 2 + k);
            const double err = std::abs(closed - emp.mean);
            const double allowed = std::max(0.02 * std::abs(closed), 3.0 * emp.std_error);
            ok = ok && err <= allowed;
            os << "ue " << k << ": E=" << closed << " mean=" << emp.mean << " err=" << err << " allowed=" << allowed
               << "; ";
        }
        return CheckResult{"", ok, os.str()};
    });

    return report;
}

// ---------------------------------------------------------------------------

void write_scatter_csv(std::ostream &os, const ScatterResult &r)
{
    os << "trial,re_xhat,im_xhat,true_symbol_index\n" << std::setprecision(17);
    for (const auto &s : r.samples)
        os << s.trial << ',' << s.xhat.real() << ',' << s.xhat.imag() << ',' << s.true_symbol << '\n';
}

void write_scatter_summary_csv(std::ostream &os, const ScatterResult &r)
{
    os << "l,re_E,im_E,re_mean,im_mean,stderr\n" << std::setprecision(17);
    for (const auto &s : r.summary)
        os << s.symbol << ',' << s.expected.real() << ',' << s.expected.imag() << ',' << s.empirical.real() << ','
           << s.empirical.imag() << ',' << s.std_error << '\n';
}

void write_expectations_csv(std::ostream &os, const ExpectationTable<double> &t)
{
    os << "x_encoding,ue,re_E,im_E\n" << std::setprecision(17);
    for (Index e = 0; e < t.size(); ++e)
    {
        const auto &v = t.entries[static_cast<std::size_t>(e)];
        os << e << ',' << t.ue << ',' << v.real() << ',' << v.imag() << '\n';
    }
}

void write_class_means_csv(std::ostream &os, const ExpectationTable<double> &t)
{
    os << "ue,l,re_Ebar,im_Ebar\n" << std::setprecision(17);
    for (std::size_t l = 0; l < t.class_means.size(); ++l)
        os << t.ue << ',' << l << ',' << t.class_means[l].real() << ',' << t.class_means[l].imag() << '\n';
}

void write_ser_csv(std::ostream &os, const SerResult &r)
{
    os << "strategy,snr_db,errors,count,ser,stderr\n" << std::setprecision(17);
    for (const auto &p : r.points)
        os << to_string(p.strategy) << ',' << p.snr_db << ',' << p.errors << ',' << p.count << ',' << p.ser() << ','
           << p.std_error() << '\n';
}

void write_ser_per_ue_csv(std::ostream &os, const SerResult &r)
{
    os << "strategy,snr_db,ue,errors,count,ser\n" << std::setprecision(17);
    for (const auto &p : r.points)
    {
        const std::uint64_t per_ue = p.ue_errors.empty() ? 0 : p.count / p.ue_errors.size();
        for (std::size_t k = 0; k < p.ue_errors.size(); ++k)
            os << to_string(p.strategy) << ',' << p.snr_db << ',' << k << ',' << p.ue_errors[k] << ',' << per_ue << ','
               << (per_ue ? static_cast<double>(p.ue_errors[k]) / static_cast<double>(per_ue) : 0.0) << '\n';
    }
}

} // namespace onebit
