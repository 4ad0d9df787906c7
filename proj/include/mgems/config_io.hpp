#pragma once

#include "mgems/model.hpp"
#include "mgems/profiles.hpp"
#include "mgems/scenarios.hpp"

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mgems {

/// Malformed or unreadable config. path() names the offending key ("battery.soc_min"),
/// or the file when the whole document is unreadable.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string path, const std::string& what);
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

/// Everything a config file carries: the microgrid itself, ingestion options
/// and named custom scenarios.
struct LoadedConfig {
    MicrogridConfig config;
    PriceUnit price_unit = PriceUnit::Currency;
    std::vector<Scenario> scenarios;
};

/// Parses INI text. Sections mirror MicrogridConfig ([pv], [wind], ..., [simulation]);
/// custom scenarios live in [scenario.NAME] sections. `base_dir` resolves
/// emissions.factors_file.
LoadedConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = {});

LoadedConfig load_config_file(const std::filesystem::path& path);

} // namespace mgems
