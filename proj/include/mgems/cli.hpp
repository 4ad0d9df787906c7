#pragma once

#include "mgems/profiles.hpp"

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace mgems {

inline constexpr std::string_view kToolVersion = "1.0.0";

/// Exit statuses shared by every subcommand.
enum ExitCode : int {
    kExitOk = 0,
    kExitValidation = 2,
    kExitIo = 3,
    kExitInvariant = 4,
};

/// Everything one invocation needs. Flags override config-file values.
struct RunManifest {
    std::filesystem::path config_path;
    std::filesystem::path profile_path;
    ProfileMode mode = ProfileMode::Generation;
    std::filesystem::path out_dir;
    // Built-in ids (S1..S4), custom names from the config, or "all".
    std::vector<std::string> scenarios;
    std::optional<std::size_t> steps;
    std::optional<std::size_t> outage_start;
    std::optional<double> outage_hours;
    unsigned jobs = 1;
    bool random_free = true;
    std::string tool_version{kToolVersion};
};

/// Writes trace.csv, report.json and manifest.json to out_dir.
int cmd_simulate(const RunManifest& manifest, std::ostream& out, std::ostream& err);

/// Writes <name>/trace.csv and <name>/report.json for the base and every
/// selected scenario, plus matrix.csv and manifest.json.
int cmd_scenarios(const RunManifest& manifest, std::ostream& out, std::ostream& err);

/// Validates config and profile and prints a human-readable summary.
int cmd_validate(const RunManifest& manifest, std::ostream& out, std::ostream& err);

} // namespace mgems
