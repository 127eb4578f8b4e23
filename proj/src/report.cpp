#include "ncsimo/report.hpp"

#include "ncsimo/errors.hpp"
#include "ncsimo/modem.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace ncsimo {

namespace {

constexpr std::string_view kPlotScript = R"(#!/usr/bin/env python3
"""BER versus receive antenna count, one curve per (scheme, K, placement)."""
import csv
import sys
from collections import defaultdict
from pathlib import Path

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

here = Path(__file__).resolve().parent
src = Path(sys.argv[1]) if len(sys.argv) > 1 else here / "ber.csv"
dst = Path(sys.argv[2]) if len(sys.argv) > 2 else here / "ber_vs_m.png"

curves = defaultdict(list)
with open(src, newline="") as fh:
    for row in csv.DictReader(fh):
        key = (row["scheme"], row["K"], row["placement"], row["radius_m"])
        curves[key].append((int(row["M"]), float(row["ber"]),
                            float(row["wilson_lo"]), float(row["wilson_hi"])))

fig, ax = plt.subplots(figsize=(6, 4.5))
for (scheme, k, placement, radius), pts in sorted(curves.items()):
    pts.sort()
    m = [p[0] for p in pts]
    ber = [max(p[1], 1e-7) for p in pts]
    lo = [max(p[1] - p[2], 0.0) for p in pts]
    hi = [p[3] - p[1] for p in pts]
    ax.errorbar(m, ber, yerr=[lo, hi], marker="o", capsize=3,
                label=f"{scheme}, K={k}, {placement} {float(radius):g} m")
ax.set_yscale("log")
ax.set_xscale("log", base=2)
ax.set_xlabel("receive antennas M")
ax.set_ylabel("average BER")
ax.grid(True, which="both", alpha=0.3)
ax.legend()
fig.tight_layout()
fig.savefig(dst, dpi=150)
print(f"wrote {dst}")
)";

void write_file(const std::filesystem::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError(fmt::format("cannot open '{}' for writing", path.string()));
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) {
        throw IoError(fmt::format("failed writing '{}'", path.string()));
    }
}

} // namespace

std::string format_csv(std::span<const BerRecord> records) {
    std::string out(kCsvHeader);
    out += '\n';
    for (const auto& r : records) {
        out += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", to_string(r.scheme),
                           r.users, r.antennas, r.placement, r.radius_m, r.trials, r.bits,
                           r.bit_errors, r.ber, r.ci.low, r.ci.high, r.seed,
                           r.bits_per_slot_per_user, r.failures);
    }
    return out;
}

OutputFiles emit_outputs(std::span<const BerRecord> records, const SimConfig& cfg,
                         const std::filesystem::path& dir) {
    if (records.empty()) {
        throw std::invalid_argument("emit_outputs: no records to write");
    }
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw IoError(fmt::format("cannot create output directory '{}': {}", dir.string(),
                                  ec.message()));
    }
    OutputFiles files{dir / "ber.csv", dir / "manifest.txt", dir / "plot_ber.py"};

    std::string manifest = "# ncsimo run manifest; replay with: ncsimo ber --config manifest.txt\n";
    manifest += fmt::format("# noise_power_w {}\n", noise_power(cfg.radio));
    manifest += "# block b of every point uses streams keyed by (seed, b, role)\n";
    for (const auto& r : records) {
        manifest += fmt::format("# record scheme={} M={} trials={} seed={}\n", to_string(r.scheme),
                                r.antennas, r.trials, r.seed);
    }
    manifest += serialize_config(cfg);

    write_file(files.csv, format_csv(records));
    write_file(files.manifest, manifest);
    write_file(files.plot_script, kPlotScript);
    std::filesystem::permissions(files.plot_script, std::filesystem::perms::owner_exec,
                                 std::filesystem::perm_options::add, ec);
    return files;
}

std::vector<UserProfile> parse_profiles(std::istream& in, std::string_view source_name) {
    std::vector<UserProfile> profiles;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        for (auto& ch : line) {
            if (ch == ',') {
                ch = ' ';
            }
        }
        std::istringstream fields(line);
        double p_dbm = 0.0;
        double beta_db = 0.0;
        std::string extra;
        if (!(fields >> p_dbm)) {
            if (fields.eof() && line.find_first_not_of(" \t\r") == std::string::npos) {
                continue;
            }
            throw ConfigError(fmt::format("{}:{}: expected 'P_dBm beta_dB'", source_name, line_no));
        }
        if (!(fields >> beta_db) || (fields >> extra)) {
            throw ConfigError(fmt::format("{}:{}: expected exactly two numbers 'P_dBm beta_dB'",
                                          source_name, line_no));
        }
        if (!std::isfinite(p_dbm) || !std::isfinite(beta_db)) {
            throw ConfigError(fmt::format("{}:{}: values must be finite", source_name, line_no));
        }
        profiles.push_back({dbm_to_watts(p_dbm), db_to_linear(beta_db)});
    }
    if (profiles.empty()) {
        throw ConfigError(fmt::format("{}: no user profiles found", source_name));
    }
    return profiles;
}

std::vector<UserProfile> load_profiles(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError(fmt::format("cannot open profile file '{}'", path.string()));
    }
    return parse_profiles(in, path.string());
}

void design_report(std::span<const UserProfile> profiles, double sigma2, std::ostream& out) {
    const auto order = sort_users(profiles);
    const auto sorted = apply_order(profiles, order);
    const auto design = optimal_design(sorted, sigma2);

    fmt::print(out, "users: {}\nnoise power: {:.6g} W\n\n", profiles.size(), sigma2);
    fmt::print(out, "{:>5} {:>5} {:>13} {:>13} {:>13} {:>6}\n", "rank", "input", "P (W)", "beta",
               "P*beta", "level");
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        fmt::print(out, "{:>5} {:>5} {:>13.6g} {:>13.6g} {:>13.6g} {:>6}\n", i + 1, order[i] + 1,
                   sorted[i].power, sorted[i].beta, sorted[i].link_budget(), design.perm[i] + 1);
    }
    fmt::print(out, "\nd = {:.7g}\n", design.d);
    for (std::size_t k = 0; k < design.p.size(); ++k) {
        fmt::print(out, "p[{}] = {:.7g}  (E = {:g})\n", k + 1, design.p[k], design.energies[k]);
    }
    fmt::print(out, "\n{:>5} {:>16} {:>16} {:>13}\n", "rank", "slot1 power (W)", "slot2 power (W)",
               "budget (W)");
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const std::size_t k = design.perm[i];
        const double slot1 = 1.0 / (design.p[k] * sorted[i].beta);
        const double slot2 = design.p[k] * design.energies[k] * design.d * design.d / sorted[i].beta;
        fmt::print(out, "{:>5} {:>16.6g} {:>16.6g} {:>13.6g}\n", i + 1, slot1, slot2, sorted[i].power);
    }
    fmt::print(out, "\nobjective (ab/d^2) = {:.9g}\n", design_objective(design, sigma2));
    if (profiles.size() <= 6) {
        const SubConstellationSet set(profiles.size(), design.d);
        const auto kl = min_kl_over_codebook(design, set, sigma2);
        fmt::print(out, "min KL (per antenna) = {:.9g} between c = {:.6g}{:+.6g}j and c~ = {:.6g}{:+.6g}j\n",
                   kl.value, kl.point.real(), kl.point.imag(), kl.other_point.real(),
                   kl.other_point.imag());
    } else {
        fmt::print(out, "min KL certificate skipped (K > 6)\n");
    }
}

void kl_table(std::span<const UserProfile> profiles, double sigma2, std::ostream& out) {
    if (profiles.size() > 3) {
        throw UnsupportedSize("KL table supports at most 3 users");
    }
    const auto sorted = apply_order(profiles, sort_users(profiles));
    const auto design = optimal_design(sorted, sigma2);
    const SubConstellationSet set(sorted.size(), design.d);
    const auto codebook = build_codebook(design, sorted, set);
    std::vector<double> beta;
    for (const auto& p : sorted) {
        beta.push_back(p.beta);
    }
    fmt::print(out, "i,j,c_re,c_im,ct_re,ct_im,kl\n");
    const auto points = set.sum_points();
    for (std::size_t i = 0; i < codebook.size(); ++i) {
        for (std::size_t j = 0; j < codebook.size(); ++j) {
            const auto kl = kl_distance(codebook[i].x, codebook[j].x, beta, sigma2);
            fmt::print(out, "{},{},{},{},{},{},{}\n", i, j, points[i].real(), points[i].imag(),
                       points[j].real(), points[j].imag(), kl.value);
        }
    }
}

} // namespace ncsimo
