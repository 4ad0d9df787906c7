#include "mgems/cli.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <string>

namespace {

void add_common(CLI::App* cmd, mgems::RunManifest& m, std::string& mode, bool needs_profile)
{
    cmd->add_option("--config", m.config_path, "INI configuration file")->required();
    auto* profile = cmd->add_option("--profile", m.profile_path, "hourly profile CSV");
    if (needs_profile)
        profile->required();
    cmd->add_option("--mode", mode, "profile columns: generation (pv_kw,wind_kw) or resource (irradiance,wind speed)")
        ->check(CLI::IsMember({"generation", "resource"}));
    cmd->add_option("--steps", m.steps, "truncate the horizon to the first N steps");
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Community microgrid energy-management simulator"};
    app.set_version_flag("--version", std::string(mgems::kToolVersion));
    app.require_subcommand(1);

    mgems::RunManifest m;
    std::string mode = "generation";

    auto* simulate = app.add_subcommand("simulate", "run one horizon and write trace.csv and report.json");
    add_common(simulate, m, mode, true);
    simulate->add_option("--out", m.out_dir, "output directory")->required();

    auto* scenarios = app.add_subcommand("scenarios", "run the base case plus scenarios and write matrix.csv");
    add_common(scenarios, m, mode, true);
    scenarios->add_option("--out", m.out_dir, "output directory")->required();
    scenarios->add_option("--scenarios", m.scenarios, "comma list of S1..S4, custom names, or all")
        ->delimiter(',')
        ->required();
    scenarios->add_option("--outage-start", m.outage_start, "first step of the S3 outage window");
    scenarios->add_option("--outage-hours", m.outage_hours, "length of the S3 outage window in hours")
        ->check(CLI::PositiveNumber);
    scenarios->add_option("--jobs", m.jobs, "worker threads across scenarios")->check(CLI::Range(1u, 256u));

    auto* validate = app.add_subcommand("validate", "check config and profile and print a summary");
    add_common(validate, m, mode, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : mgems::kExitValidation;
    }
    m.mode = mode == "resource" ? mgems::ProfileMode::Resource : mgems::ProfileMode::Generation;

    if (simulate->parsed())
        return mgems::cmd_simulate(m, std::cout, std::cerr);
    if (scenarios->parsed())
        return mgems::cmd_scenarios(m, std::cout, std::cerr);
    return mgems::cmd_validate(m, std::cout, std::cerr);
}
