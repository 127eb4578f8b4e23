#pragma once

#include "ncsimo/config.hpp"
#include "ncsimo/linkdesign.hpp"
#include "ncsimo/montecarlo.hpp"

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ncsimo {

inline constexpr std::string_view kCsvHeader =
    "scheme,K,M,placement,radius_m,trials,bits,bit_errors,ber,wilson_lo,wilson_hi,seed,"
    "bits_per_slot_per_user,failures";

/// Header plus one row per record, fixed column order.
std::string format_csv(std::span<const BerRecord> records);

struct OutputFiles {
    std::filesystem::path csv;
    std::filesystem::path manifest;
    std::filesystem::path plot_script;
};

/// Writes ber.csv, manifest.txt (the resolved config, loadable with
/// --config for replay) and plot_ber.py into `dir`. Refuses an empty record
/// list; throws IoError when the directory or a file cannot be written.
OutputFiles emit_outputs(std::span<const BerRecord> records, const SimConfig& cfg,
                         const std::filesystem::path& dir);

/// Profile file: one user per line, "P_dBm beta_dB" separated by whitespace
/// or a comma; '#' starts a comment. Values are returned in linear units.
std::vector<UserProfile> parse_profiles(std::istream& in, std::string_view source_name);
std::vector<UserProfile> load_profiles(const std::filesystem::path& path);

/// Sorted mapping table, d, p, assignment, per-user slot powers and the
/// minimum-KL pair of the resulting codebook.
void design_report(std::span<const UserProfile> profiles, double sigma2, std::ostream& out);

/// Single-antenna KL distance D(c_i || c_j) for every ordered codeword pair,
/// as CSV. Limited to K <= 3.
void kl_table(std::span<const UserProfile> profiles, double sigma2, std::ostream& out);

} // namespace ncsimo
