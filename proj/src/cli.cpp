#include "mgems/cli.hpp"

#include "mgems/config_io.hpp"
#include "mgems/dispatch.hpp"
#include "mgems/format.hpp"
#include "mgems/metrics.hpp"
#include "mgems/report_io.hpp"
#include "mgems/scenarios.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>

namespace mgems {

namespace {

/// Aborts a command with a specific exit status.
struct CommandFailure {
    int code;
    std::string message;
};

std::string read_file(const std::filesystem::path& path, const char* what)
{
    std::error_code ec;
    if (!std::filesystem::is_regular_file(path, ec))
        throw CommandFailure{kExitIo, std::string("cannot read ") + what + " file: " + path.string()};
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw CommandFailure{kExitIo, std::string("cannot read ") + what + " file: " + path.string()};
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::filesystem::path& path, const std::string& content)
{
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec)
        throw CommandFailure{kExitIo, "cannot create directory " + path.parent_path().string() + ": " + ec.message()};
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << content;
    out.close();
    if (!out)
        throw CommandFailure{kExitIo, "cannot write " + path.string()};
}

LoadedConfig load_valid_config(const RunManifest& m, std::ostream& err)
{
    const std::string text = read_file(m.config_path, "config");
    LoadedConfig loaded;
    try {
        loaded = parse_config(text, m.config_path.parent_path());
    } catch (const ConfigError& e) {
        throw CommandFailure{kExitValidation, "config error: " + std::string(e.what())};
    }
    const auto report = validate_config(loaded.config);
    if (!report.empty()) {
        for (const auto& v : report)
            err << "invalid " << v.path << ": " << v.message << '\n';
        throw CommandFailure{kExitValidation, "configuration failed validation"};
    }
    return loaded;
}

std::vector<StepInput> load_inputs(const RunManifest& m, const LoadedConfig& loaded)
{
    const std::string text = read_file(m.profile_path, "profile");
    std::vector<StepInput> inputs;
    try {
        if (m.mode == ProfileMode::Generation) {
            inputs = parse_generation_profile(text, loaded.price_unit);
        } else {
            const auto rows = parse_resource_profile(text, loaded.price_unit);
            inputs = resource_to_inputs(rows, loaded.config);
        }
    } catch (const ProfileError& e) {
        throw CommandFailure{kExitValidation, "profile " + m.profile_path.string() + ": " + e.what()};
    }
    if (m.steps) {
        if (*m.steps == 0)
            throw CommandFailure{kExitValidation, "empty horizon: --steps must be >= 1"};
        if (*m.steps < inputs.size())
            inputs.resize(*m.steps);
    }
    if (inputs.empty())
        throw CommandFailure{kExitValidation, "empty horizon: profile has no data rows"};
    return inputs;
}

void require_clean(const std::vector<StepInput>& inputs, const std::vector<StepResult>& trace,
                   const MicrogridConfig& config, const std::string& label)
{
    const auto violations = audit_trace(inputs, trace, config);
    if (!violations.empty()) {
        std::ostringstream os;
        os << "invariant breach in " << label << " at step " << violations.front().step << ": "
           << violations.front().what;
        throw CommandFailure{kExitInvariant, os.str()};
    }
}

std::string manifest_text(const RunManifest& m, const std::string& command)
{
    nlohmann::ordered_json j;
    j["command"] = command;
    j["tool_version"] = m.tool_version;
    j["config"] = m.config_path.generic_string();
    j["profile"] = m.profile_path.generic_string();
    j["profile_mode"] = std::string(to_string(m.mode));
    j["output_directory"] = m.out_dir.generic_string();
    j["scenarios"] = m.scenarios;
    j["steps"] = m.steps ? nlohmann::ordered_json(*m.steps) : nlohmann::ordered_json(nullptr);
    j["random_free"] = m.random_free;
    return j.dump(2) + '\n';
}

template <class Fn>
int guarded(std::ostream& err, Fn&& body)
{
    try {
        return body();
    } catch (const CommandFailure& f) {
        err << "error: " << f.message << '\n';
        return f.code;
    } catch (const InvariantError& e) {
        err << "error: invariant breach: " << e.what() << '\n';
        return kExitInvariant;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    }
}

std::vector<Scenario> select_scenarios(const RunManifest& m, const LoadedConfig& loaded,
                                       const std::vector<StepInput>& inputs)
{
    const double threshold = resolve_threshold(inputs, loaded.config.ems);
    ScenarioDefaults defaults;
    defaults.step_hours = loaded.config.step_hours;
    defaults.outage_start = m.outage_start.value_or(evening_peak_start(inputs, threshold));
    defaults.outage_hours = m.outage_hours.value_or(6.0);

    std::vector<std::string> names;
    for (const auto& name : m.scenarios) {
        if (name == "all") {
            for (const char* id : {"S1", "S2", "S3", "S4"})
                names.emplace_back(id);
            for (const auto& s : loaded.scenarios)
                names.push_back(s.name);
        } else {
            names.push_back(name);
        }
    }

    std::vector<Scenario> out;
    for (const auto& name : names) {
        const bool seen = std::any_of(out.begin(), out.end(), [&](const Scenario& s) { return s.name == name; });
        if (seen)
            continue;
        if (const auto id = builtin_id_from_string(name)) {
            out.push_back(builtin_scenario(*id, defaults));
            continue;
        }
        const auto it = std::find_if(loaded.scenarios.begin(), loaded.scenarios.end(),
                                     [&](const Scenario& s) { return s.name == name; });
        if (it == loaded.scenarios.end())
            throw CommandFailure{kExitValidation, "unknown scenario '" + name + "'"};
        out.push_back(*it);
    }
    return out;
}

} // namespace

int cmd_simulate(const RunManifest& m, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        const auto loaded = load_valid_config(m, err);
        const auto inputs = load_inputs(m, loaded);
        const auto& config = loaded.config;

        const double threshold = resolve_threshold(inputs, config.ems);
        const auto trace = run_horizon(inputs, initial_battery_state(config.battery), threshold, config);
        require_clean(inputs, trace, config, "simulation");
        const auto report = build_report(trace, inputs, threshold, config);

        // Everything is computed before the first byte is written.
        const std::string trace_text = trace_csv(inputs, trace, threshold);
        const std::string report_body = report_text(report);
        write_file(m.out_dir / "trace.csv", trace_text);
        write_file(m.out_dir / "report.json", report_body);
        write_file(m.out_dir / "manifest.json", manifest_text(m, "simulate"));
        out << "simulated " << inputs.size() << " steps; wrote trace.csv and report.json to " << m.out_dir.string()
            << '\n';
        return static_cast<int>(kExitOk);
    });
}

int cmd_scenarios(const RunManifest& m, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        const auto loaded = load_valid_config(m, err);
        const auto inputs = load_inputs(m, loaded);
        if (m.scenarios.empty())
            throw CommandFailure{kExitValidation, "no scenarios selected (use --scenarios LIST|all)"};
        const auto scenarios = select_scenarios(m, loaded, inputs);

        const auto outcomes = run_matrix(inputs, loaded.config, scenarios, m.jobs);
        const auto& base = outcomes.at(std::string(kBaseScenarioName));
        if (!base.ok())
            throw CommandFailure{kExitValidation, "base case failed: " + base.error};

        std::vector<std::pair<std::filesystem::path, std::string>> files;
        std::size_t failed = 0;
        for (const auto& [name, o] : outcomes) {
            if (!o.ok()) {
                err << "scenario " << name << " failed: " << o.error << '\n';
                ++failed;
                continue;
            }
            const auto cfg = name == kBaseScenarioName
                                 ? loaded.config
                                 : apply_scenario(inputs, loaded.config,
                                                  *std::find_if(scenarios.begin(), scenarios.end(),
                                                                [&](const Scenario& s) { return s.name == name; }))
                                       .second;
            require_clean(o.inputs, o.trace, cfg, "scenario " + name);
            files.emplace_back(m.out_dir / name / "trace.csv", trace_csv(o.inputs, o.trace, o.report->threshold));
            files.emplace_back(m.out_dir / name / "report.json", report_text(*o.report));
        }
        files.emplace_back(m.out_dir / "matrix.csv", matrix_csv(outcomes));
        files.emplace_back(m.out_dir / "manifest.json", manifest_text(m, "scenarios"));
        for (const auto& [path, text] : files)
            write_file(path, text);

        out << "ran base + " << scenarios.size() << " scenario(s); wrote matrix.csv to " << m.out_dir.string()
            << '\n';
        // Siblings of a failed scenario are still written; the status flags the failure.
        return static_cast<int>(failed == 0 ? kExitOk : kExitValidation);
    });
}

int cmd_validate(const RunManifest& m, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        const auto loaded = load_valid_config(m, err);
        const auto& c = loaded.config;
        out << "config: " << m.config_path.string() << " OK\n";
        out << "  pv: " << format_number(c.pv.capacity_kw) << " kW (derating " << format_number(c.pv.derating_factor)
            << ")\n";
        out << "  wind: " << format_number(c.wind.capacity_kw) << " kW ("
            << format_number(c.wind.capacity_kw / c.wind.unit_rated_kw) << " x "
            << format_number(c.wind.unit_rated_kw) << " kW)\n";
        out << "  diesel: " << format_number(c.diesel.capacity_kw) << " kW\n";
        out << "  battery: " << format_number(c.battery.capacity_kwh) << " kWh, soc band ["
            << format_number(c.battery.soc_min) << ", " << format_number(c.battery.soc_max) << "], "
            << format_number(c.battery.max_charge_kw) << " kW charge / "
            << format_number(c.battery.max_discharge_kw) << " kW discharge\n";
        out << "  grid: import <= " << format_number(c.grid.import_limit_kw) << " kW, export <= "
            << format_number(c.grid.export_limit_kw) << " kW\n";
        if (loaded.price_unit == PriceUnit::Cents)
            out << "  price unit: cents/kWh in profile, converted to currency/kWh (/100)\n";
        else
            out << "  price unit: currency/kWh\n";

        if (m.profile_path.empty()) {
            out << "profile: none given; threshold not resolved\n";
            return static_cast<int>(kExitOk);
        }
        const auto inputs = load_inputs(m, loaded);
        const double threshold = resolve_threshold(inputs, c.ems);
        out << "profile: " << m.profile_path.string() << " (" << to_string(m.mode) << " mode), horizon "
            << inputs.size() << " steps x " << format_number(c.step_hours) << " h\n";
        out << "threshold: " << format_number(threshold);
        switch (c.ems.threshold_mode) {
        case ThresholdMode::FixedPrice:
            out << " currency/kWh (fixed-price)\n";
            break;
        case ThresholdMode::PricePercentile:
            out << " currency/kWh (price-percentile " << format_number(*c.ems.percentile) << ")\n";
            break;
        case ThresholdMode::LoadThreshold:
            out << " kW (load-threshold)\n";
            break;
        }
        return static_cast<int>(kExitOk);
    });
}

} // namespace mgems
