// ncsimo: design reports, KL tables and BER sweeps for the two-slot
// noncoherent multiuser SIMO uplink and its baselines.

#include "ncsimo/config.hpp"
#include "ncsimo/errors.hpp"
#include "ncsimo/montecarlo.hpp"
#include "ncsimo/report.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <chrono>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace {

struct SweepOptions {
    std::string config_path;
    std::vector<std::pair<std::string, std::string>> overrides;
    unsigned workers = std::max(1U, std::thread::hardware_concurrency());
};

// Flags mirror config keys and are applied on top of the config file.
void add_sweep_flags(CLI::App* cmd, SweepOptions& opts) {
    cmd->add_option("--config", opts.config_path, "key = value config file (e.g. a manifest)");
    cmd->add_option("--workers", opts.workers, "worker threads (results do not depend on it)")
        ->check(CLI::PositiveNumber);
    const std::pair<const char*, const char*> flags[] = {
        {"--seed", "seed"},           {"--out", "out"},
        {"--scheme", "scheme"},       {"--m-list", "m_list"},
        {"--radius-m", "radius_m"},   {"--distance-m", "distance_m"},
        {"--users", "users"},         {"--trials", "trials"},
        {"--error-target", "error_target"}, {"--p-dbm", "p_dbm"},
    };
    for (const auto& [flag, key] : flags) {
        cmd->add_option_function<std::string>(
            flag, [&opts, key = std::string(key)](const std::string& v) {
                opts.overrides.emplace_back(key, v);
            },
            std::string("overrides config key '") + key + "'");
    }
}

ncsimo::SimConfig resolve_config(const SweepOptions& opts, ncsimo::SimConfig base) {
    ncsimo::SimConfig cfg =
        opts.config_path.empty() ? std::move(base) : ncsimo::load_config(opts.config_path, std::move(base));
    for (const auto& [key, value] : opts.overrides) {
        try {
            ncsimo::apply_setting(cfg, key, value);
        } catch (const ncsimo::ConfigError& e) {
            throw ncsimo::ConfigError(fmt::format("command line: {}", e.what()));
        }
    }
    cfg.validate();
    return cfg;
}

int run_sweep(const ncsimo::SimConfig& cfg, unsigned workers) {
    const auto start = std::chrono::steady_clock::now();
    const auto records = ncsimo::run_ber_sweep(cfg, workers);
    const auto files = ncsimo::emit_outputs(records, cfg, cfg.out);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    fmt::print("{:>9} {:>3} {:>5} {:>9} {:>12} {:>24} {:>6}\n", "scheme", "K", "M", "trials",
               "BER", "95% Wilson", "b/s/u");
    for (const auto& r : records) {
        fmt::print("{:>9} {:>3} {:>5} {:>9} {:>12.4e} [{:.3e}, {:.3e}] {:>6.3g}\n",
                   ncsimo::to_string(r.scheme), r.users, r.antennas, r.trials, r.ber, r.ci.low,
                   r.ci.high, r.bits_per_slot_per_user);
    }
    fmt::print("\nwrote {}, {}, {} ({:.1f} s)\n", files.csv.string(), files.manifest.string(),
               files.plot_script.string(), secs);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Noncoherent multiuser massive SIMO link simulator"};
    app.require_subcommand(1);

    std::string profile_path;
    std::optional<double> sigma2;
    auto* design = app.add_subcommand("design", "closed-form design report for a profile file");
    design->add_option("profile", profile_path, "profile file: 'P_dBm beta_dB' per line")->required();
    design->add_option("--sigma2", sigma2, "noise power in W (default: from radio defaults)");

    auto* kl = app.add_subcommand("kl", "pairwise KL distance table (CSV) for a profile file");
    kl->add_option("profile", profile_path, "profile file: 'P_dBm beta_dB' per line")->required();
    kl->add_option("--sigma2", sigma2, "noise power in W (default: from radio defaults)");

    SweepOptions ber_opts;
    auto* ber = app.add_subcommand("ber", "BER-versus-M sweep");
    add_sweep_flags(ber, ber_opts);

    SweepOptions base_opts;
    auto* baseline = app.add_subcommand("baseline", "BER sweep of the MED or ZF-LS baseline");
    add_sweep_flags(baseline, base_opts);

    CLI11_PARSE(app, argc, argv);

    try {
        const double noise = sigma2.value_or(ncsimo::noise_power(ncsimo::RadioParams{}));
        if (design->parsed()) {
            ncsimo::design_report(ncsimo::load_profiles(profile_path), noise, std::cout);
            return 0;
        }
        if (kl->parsed()) {
            ncsimo::kl_table(ncsimo::load_profiles(profile_path), noise, std::cout);
            return 0;
        }
        if (ber->parsed()) {
            return run_sweep(resolve_config(ber_opts, {}), ber_opts.workers);
        }
        if (baseline->parsed()) {
            ncsimo::SimConfig base;
            base.schemes = {ncsimo::Scheme::Med};
            const auto cfg = resolve_config(base_opts, base);
            for (const auto s : cfg.schemes) {
                if (s == ncsimo::Scheme::Proposed) {
                    throw ncsimo::ConfigError("baseline accepts schemes med and zf-train only");
                }
            }
            return run_sweep(cfg, base_opts.workers);
        }
    } catch (const ncsimo::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
