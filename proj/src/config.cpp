#include "ncsimo/config.hpp"

#include "ncsimo/errors.hpp"

#include <fmt/format.h>
#include <fmt/ranges.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <map>

namespace ncsimo {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_list(std::string_view s) {
    std::vector<std::string_view> items;
    while (true) {
        const auto comma = s.find(',');
        items.push_back(trim(s.substr(0, comma)));
        if (comma == std::string_view::npos) {
            break;
        }
        s.remove_prefix(comma + 1);
    }
    return items;
}

double parse_double(std::string_view key, std::string_view text) {
    double value = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end || !std::isfinite(value)) {
        throw ConfigError(fmt::format("key '{}': '{}' is not a finite number", key, text));
    }
    return value;
}

std::uint64_t parse_uint(std::string_view key, std::string_view text) {
    std::uint64_t value = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec == std::errc{} && ptr == end) {
        return value;
    }
    // Accept integral values in scientific notation, e.g. 1e5.
    const double as_double = parse_double(key, text);
    if (as_double < 0.0 || as_double != std::floor(as_double) || as_double > 1.8e19) {
        throw ConfigError(fmt::format("key '{}': '{}' is not a nonnegative integer", key, text));
    }
    return static_cast<std::uint64_t>(as_double);
}

using Setter = std::function<void(SimConfig&, std::string_view, std::string_view)>;

const std::map<std::string_view, Setter>& setters() {
    static const std::map<std::string_view, Setter> table = {
        {"scheme",
         [](SimConfig& c, std::string_view, std::string_view v) {
             c.schemes.clear();
             for (const auto item : split_list(v)) {
                 c.schemes.push_back(parse_scheme(item));
             }
         }},
        {"users",
         [](SimConfig& c, std::string_view k, std::string_view v) {
             c.num_users = static_cast<std::size_t>(parse_uint(k, v));
         }},
        {"m_list",
         [](SimConfig& c, std::string_view k, std::string_view v) {
             c.antennas.clear();
             for (const auto item : split_list(v)) {
                 c.antennas.push_back(static_cast<std::size_t>(parse_uint(k, item)));
             }
         }},
        {"radius_m",
         [](SimConfig& c, std::string_view k, std::string_view v) {
             c.placement = UniformAnnulus{parse_double(k, v)};
         }},
        {"distance_m",
         [](SimConfig& c, std::string_view k, std::string_view v) {
             c.placement = FixedDistance{parse_double(k, v)};
         }},
        {"p_dbm",
         [](SimConfig& c, std::string_view k, std::string_view v) {
             c.power_dbm.clear();
             for (const auto item : split_list(v)) {
                 c.power_dbm.push_back(parse_double(k, item));
             }
         }},
        {"carrier_hz", [](SimConfig& c, std::string_view k, std::string_view v) { c.radio.carrier_hz = parse_double(k, v); }},
        {"ref_distance_m", [](SimConfig& c, std::string_view k, std::string_view v) { c.radio.ref_distance_m = parse_double(k, v); }},
        {"pathloss_exponent", [](SimConfig& c, std::string_view k, std::string_view v) { c.radio.pathloss_exponent = parse_double(k, v); }},
        {"shadowing_db", [](SimConfig& c, std::string_view k, std::string_view v) { c.radio.shadowing_db = parse_double(k, v); }},
        {"bandwidth_hz", [](SimConfig& c, std::string_view k, std::string_view v) { c.radio.bandwidth_hz = parse_double(k, v); }},
        {"noise_figure_db", [](SimConfig& c, std::string_view k, std::string_view v) { c.radio.noise_figure_db = parse_double(k, v); }},
        {"temperature_k", [](SimConfig& c, std::string_view k, std::string_view v) { c.radio.temperature_k = parse_double(k, v); }},
        {"boltzmann", [](SimConfig& c, std::string_view k, std::string_view v) { c.radio.boltzmann = parse_double(k, v); }},
        {"trials", [](SimConfig& c, std::string_view k, std::string_view v) { c.trials = parse_uint(k, v); }},
        {"error_target", [](SimConfig& c, std::string_view k, std::string_view v) { c.error_target = parse_uint(k, v); }},
        {"seed", [](SimConfig& c, std::string_view k, std::string_view v) { c.seed = parse_uint(k, v); }},
        {"out", [](SimConfig& c, std::string_view, std::string_view v) { c.out = std::string(v); }},
    };
    return table;
}

} // namespace

std::string_view to_string(Scheme scheme) {
    switch (scheme) {
    case Scheme::Proposed: return "proposed";
    case Scheme::Med: return "med";
    case Scheme::ZfTrain: return "zf-train";
    }
    return "unknown";
}

Scheme parse_scheme(std::string_view name) {
    for (const auto scheme : {Scheme::Proposed, Scheme::Med, Scheme::ZfTrain}) {
        if (name == to_string(scheme)) {
            return scheme;
        }
    }
    throw ConfigError(fmt::format("unknown scheme '{}' (expected proposed, med or zf-train)", name));
}

void SimConfig::validate() const {
    if (schemes.empty()) {
        throw ConfigError("at least one scheme is required");
    }
    if (num_users == 0 || num_users > 6) {
        throw ConfigError(fmt::format("users must be in [1, 6], got {}", num_users));
    }
    if (antennas.empty()) {
        throw ConfigError("m_list must contain at least one antenna count");
    }
    for (const auto m : antennas) {
        if (m == 0) {
            throw ConfigError("antenna counts must be positive");
        }
    }
    for (const auto scheme : schemes) {
        if (scheme == Scheme::ZfTrain) {
            for (const auto m : antennas) {
                if (m < num_users) {
                    throw ConfigError("zf-train needs at least as many antennas as users");
                }
            }
        }
    }
    if (power_dbm.size() != 1 && power_dbm.size() != num_users) {
        throw ConfigError(fmt::format("p_dbm must have 1 or {} entries, got {}", num_users,
                                      power_dbm.size()));
    }
    if (trials < 1) {
        throw ConfigError("trials must be at least 1");
    }
    try {
        radio.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (const auto* fixed = std::get_if<FixedDistance>(&placement)) {
        if (fixed->meters < radio.ref_distance_m) {
            throw ConfigError("distance_m must be at least ref_distance_m");
        }
    } else if (std::get<UniformAnnulus>(placement).radius_m < radio.ref_distance_m) {
        throw ConfigError("radius_m must be at least ref_distance_m");
    }
}

std::vector<double> SimConfig::power_watts() const {
    std::vector<double> watts(num_users);
    for (std::size_t u = 0; u < num_users; ++u) {
        watts[u] = dbm_to_watts(power_dbm.size() == 1 ? power_dbm.front() : power_dbm[u]);
    }
    return watts;
}

void apply_setting(SimConfig& cfg, std::string_view key, std::string_view value) {
    const auto& table = setters();
    const auto it = table.find(key);
    if (it == table.end()) {
        throw ConfigError(fmt::format("unknown key '{}'", key));
    }
    if (value.empty()) {
        throw ConfigError(fmt::format("key '{}' has an empty value", key));
    }
    it->second(cfg, key, value);
}

SimConfig parse_config(std::istream& in, std::string_view source_name, SimConfig base) {
    SimConfig cfg = std::move(base);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view text(line);
        if (const auto hash = text.find('#'); hash != std::string_view::npos) {
            text = text.substr(0, hash);
        }
        text = trim(text);
        if (text.empty()) {
            continue;
        }
        const auto eq = text.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError(fmt::format("{}:{}: expected 'key = value'", source_name, line_no));
        }
        try {
            apply_setting(cfg, trim(text.substr(0, eq)), trim(text.substr(eq + 1)));
        } catch (const ConfigError& e) {
            throw ConfigError(fmt::format("{}:{}: {}", source_name, line_no, e.what()));
        }
    }
    try {
        cfg.validate();
    } catch (const ConfigError& e) {
        throw ConfigError(fmt::format("{}: {}", source_name, e.what()));
    }
    return cfg;
}

SimConfig load_config(const std::filesystem::path& path, SimConfig base) {
    std::ifstream in(path);
    if (!in) {
        throw IoError(fmt::format("cannot open config file '{}'", path.string()));
    }
    return parse_config(in, path.string(), std::move(base));
}

std::string serialize_config(const SimConfig& cfg) {
    std::vector<std::string_view> names;
    for (const auto s : cfg.schemes) {
        names.push_back(to_string(s));
    }
    std::string out;
    auto put = [&out](std::string_view key, const auto& value) {
        out += fmt::format("{} = {}\n", key, value);
    };
    put("scheme", fmt::format("{}", fmt::join(names, ",")));
    put("users", cfg.num_users);
    put("m_list", fmt::format("{}", fmt::join(cfg.antennas, ",")));
    if (const auto* fixed = std::get_if<FixedDistance>(&cfg.placement)) {
        put("distance_m", fixed->meters);
    } else {
        put("radius_m", std::get<UniformAnnulus>(cfg.placement).radius_m);
    }
    put("p_dbm", fmt::format("{}", fmt::join(cfg.power_dbm, ",")));
    put("carrier_hz", cfg.radio.carrier_hz);
    put("ref_distance_m", cfg.radio.ref_distance_m);
    put("pathloss_exponent", cfg.radio.pathloss_exponent);
    put("shadowing_db", cfg.radio.shadowing_db);
    put("bandwidth_hz", cfg.radio.bandwidth_hz);
    put("noise_figure_db", cfg.radio.noise_figure_db);
    put("temperature_k", cfg.radio.temperature_k);
    put("boltzmann", cfg.radio.boltzmann);
    put("trials", cfg.trials);
    put("error_target", cfg.error_target);
    put("seed", cfg.seed);
    put("out", cfg.out);
    return out;
}

} // namespace ncsimo
