#pragma once

#include "ncsimo/channel.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace ncsimo {

enum class Scheme { Proposed, Med, ZfTrain };

std::string_view to_string(Scheme scheme);
Scheme parse_scheme(std::string_view name);

/// Monte Carlo run description. Powers are in dBm here and converted to
/// watts by power_watts(); everything downstream works in linear units.
struct SimConfig {
    std::vector<Scheme> schemes{Scheme::Proposed};
    std::size_t num_users = 2;
    std::vector<std::size_t> antennas{16, 32, 64, 128};
    RadiusPolicy placement = UniformAnnulus{1000.0};
    std::vector<double> power_dbm{25.0};  // one value broadcasts to all users
    RadioParams radio;
    std::uint64_t trials = 1'000'000;     // cap on simulated blocks per point
    std::uint64_t error_target = 200;     // 0 disables early stopping
    std::uint64_t seed = 1;
    std::string out = "results";

    /// Throws ConfigError describing the first violated constraint.
    void validate() const;
    std::vector<double> power_watts() const;
};

/// Sets one `key = value` setting. Throws ConfigError for unknown keys or
/// malformed values (without location; callers add it).
void apply_setting(SimConfig& cfg, std::string_view key, std::string_view value);

/// Reads `key = value` lines; '#' starts a comment. Errors are reported as
/// "<source>:<line>: ..." and the result is validated.
SimConfig parse_config(std::istream& in, std::string_view source_name, SimConfig base = {});
SimConfig load_config(const std::filesystem::path& path, SimConfig base = {});

/// Canonical text form accepted by parse_config, every key written out.
std::string serialize_config(const SimConfig& cfg);

} // namespace ncsimo
