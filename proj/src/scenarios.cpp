#include "mgems/scenarios.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace mgems {

std::string_view to_string(ScenarioId id)
{
    switch (id) {
    case ScenarioId::S1:
        return "S1";
    case ScenarioId::S2:
        return "S2";
    case ScenarioId::S3:
        return "S3";
    case ScenarioId::S4:
        return "S4";
    case ScenarioId::Custom:
        return "Custom";
    }
    return "unknown";
}

std::optional<ScenarioId> builtin_id_from_string(std::string_view text)
{
    if (text == "S1")
        return ScenarioId::S1;
    if (text == "S2")
        return ScenarioId::S2;
    if (text == "S3")
        return ScenarioId::S3;
    if (text == "S4")
        return ScenarioId::S4;
    return std::nullopt;
}

Scenario identity_scenario(std::string name)
{
    Scenario s;
    s.name = std::move(name);
    return s;
}

std::size_t evening_peak_start(std::span<const StepInput> inputs, double threshold)
{
    std::size_t start = 0;
    bool found = false;
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        const bool above = inputs[i].price > threshold;
        const bool prev_above = i > 0 && inputs[i - 1].price > threshold;
        if (above && !prev_above) {
            start = i;
            found = true;
        }
    }
    return found ? start : 0;
}

Scenario builtin_scenario(ScenarioId id, const ScenarioDefaults& defaults)
{
    Scenario s;
    s.id = id;
    s.name = std::string(to_string(id));
    switch (id) {
    case ScenarioId::S1:
        s.demand_multiplier = 1.05;
        break;
    case ScenarioId::S2:
        s.pv_multiplier = 0.80;
        s.wind_multiplier = 0.60;
        break;
    case ScenarioId::S3: {
        if (!(defaults.step_hours > 0.0) || !(defaults.outage_hours > 0.0))
            throw std::invalid_argument("builtin_scenario: outage needs positive step and duration");
        const double steps = defaults.outage_hours / defaults.step_hours;
        s.outage_window = OutageWindow{defaults.outage_start, static_cast<std::size_t>(std::llround(steps))};
        if (s.outage_window->duration == 0)
            throw std::invalid_argument("builtin_scenario: outage shorter than one step");
        break;
    }
    case ScenarioId::S4:
        s.fuel_price_multiplier = 2.0;
        break;
    case ScenarioId::Custom:
        throw std::invalid_argument("builtin_scenario: Custom is not a built-in");
    }
    return s;
}

void check_scenario(const Scenario& s, std::size_t steps)
{
    auto positive = [&](double v, const char* what) {
        if (!(std::isfinite(v) && v > 0.0)) {
            std::ostringstream os;
            os << "scenario " << s.name << ": " << what << " must be > 0";
            throw std::invalid_argument(os.str());
        }
    };
    positive(s.demand_multiplier, "demand_multiplier");
    positive(s.pv_multiplier, "pv_multiplier");
    positive(s.wind_multiplier, "wind_multiplier");
    positive(s.fuel_price_multiplier, "fuel_price_multiplier");
    if (s.outage_window) {
        const auto& w = *s.outage_window;
        if (w.duration == 0 || w.start >= steps || w.duration > steps - w.start) {
            std::ostringstream os;
            os << "scenario " << s.name << ": outage window [" << w.start << ", " << w.start + w.duration
               << ") does not fit a horizon of " << steps << " steps";
            throw std::invalid_argument(os.str());
        }
    }
    if (s.price_series) {
        if (s.price_series->size() != steps)
            throw std::invalid_argument("scenario " + s.name + ": price_series length does not match horizon");
        for (double p : *s.price_series)
            if (!(std::isfinite(p) && p >= 0.0))
                throw std::invalid_argument("scenario " + s.name + ": price_series holds a negative price");
    }
}

std::pair<std::vector<StepInput>, MicrogridConfig> apply_scenario(std::span<const StepInput> inputs,
                                                                   const MicrogridConfig& config,
                                                                   const Scenario& s)
{
    check_scenario(s, inputs.size());
    std::vector<StepInput> out(inputs.begin(), inputs.end());
    MicrogridConfig cfg = config;

    // Multipliers of exactly 1 are skipped so the identity scenario is bit-exact.
    for (std::size_t i = 0; i < out.size(); ++i) {
        auto& in = out[i];
        if (s.demand_multiplier != 1.0)
            in.demand_kw *= s.demand_multiplier;
        if (s.pv_multiplier != 1.0)
            in.pv_kw *= s.pv_multiplier;
        if (s.wind_multiplier != 1.0)
            in.wind_kw *= s.wind_multiplier;
        if (s.price_series)
            in.price = (*s.price_series)[i];
        if (s.outage_window && i >= s.outage_window->start && i < s.outage_window->start + s.outage_window->duration)
            in.grid_available = false;
    }
    if (s.fuel_price_multiplier != 1.0)
        cfg.diesel.fuel_cost_per_kwh *= s.fuel_price_multiplier;
    return {std::move(out), cfg};
}

std::vector<std::string> delta_metric_names()
{
    return {"operating_cost", "npc",          "lcoe",         "renewable_fraction", "imported_kwh",
            "exported_kwh",   "dg_kwh",       "unserved_kwh", "curtailed_kwh",      "uptime_fraction",
            "outage_hours",   "net_co2_kg"};
}

std::map<std::string, std::optional<double>> metric_values(const SimulationReport& r)
{
    return {
        {"operating_cost", r.economics.operating_cost},
        {"npc", r.economics.npc},
        {"lcoe", r.economics.lcoe},
        {"renewable_fraction", r.economics.renewable_fraction},
        {"imported_kwh", r.energy.imported_kwh},
        {"exported_kwh", r.energy.exported_kwh},
        {"dg_kwh", r.energy.dg_kwh},
        {"unserved_kwh", r.energy.unserved_kwh},
        {"curtailed_kwh", r.energy.curtailed_kwh},
        {"uptime_fraction", r.reliability.uptime_fraction},
        {"outage_hours", r.reliability.outage_hours},
        {"net_co2_kg", at(r.emissions.net_kg, Pollutant::CO2)},
    };
}

ScenarioOutcome simulate_case(std::string name, ScenarioId id, std::vector<StepInput> inputs,
                              const MicrogridConfig& config)
{
    ScenarioOutcome out;
    out.name = std::move(name);
    out.id = id;
    out.inputs = std::move(inputs);
    const double threshold = resolve_threshold(out.inputs, config.ems);
    out.trace = run_horizon(out.inputs, initial_battery_state(config.battery), threshold, config);
    out.report = build_report(out.trace, out.inputs, threshold, config);
    return out;
}

namespace {

ScenarioOutcome run_one(std::span<const StepInput> base_inputs, const MicrogridConfig& base_config,
                        const Scenario& s)
{
    try {
        auto [inputs, cfg] = apply_scenario(base_inputs, base_config, s);
        return simulate_case(s.name, s.id, std::move(inputs), cfg);
    } catch (const std::exception& e) {
        ScenarioOutcome failed;
        failed.name = s.name;
        failed.id = s.id;
        failed.error = e.what();
        return failed;
    }
}

} // namespace

std::map<std::string, ScenarioOutcome> run_matrix(std::span<const StepInput> base_inputs,
                                                  const MicrogridConfig& base_config,
                                                  std::span<const Scenario> scenarios, unsigned threads)
{
    std::set<std::string> names{std::string(kBaseScenarioName)};
    for (const auto& s : scenarios)
        if (!names.insert(s.name).second)
            throw std::invalid_argument("run_matrix: duplicate scenario name '" + s.name + "'");

    // Slot 0 is the base case; each worker writes only its own slots.
    std::vector<Scenario> cases;
    cases.reserve(scenarios.size() + 1);
    cases.push_back(identity_scenario(std::string(kBaseScenarioName)));
    cases.insert(cases.end(), scenarios.begin(), scenarios.end());
    std::vector<ScenarioOutcome> slots(cases.size());

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < cases.size(); i = next++)
            slots[i] = run_one(base_inputs, base_config, cases[i]);
    };
    const unsigned n = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(cases.size())));
    if (n == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(n);
        for (unsigned t = 0; t < n; ++t)
            pool.emplace_back(worker);
    }

    std::map<std::string, ScenarioOutcome> result;
    const ScenarioOutcome& base = slots.front();
    const auto base_values = base.ok() ? metric_values(*base.report) : std::map<std::string, std::optional<double>>{};
    for (std::size_t i = 1; i < slots.size(); ++i) {
        auto& o = slots[i];
        if (o.ok()) {
            const auto values = metric_values(*o.report);
            for (const auto& name : delta_metric_names()) {
                std::optional<double> delta;
                const auto b = base_values.find(name);
                const auto& v = values.at(name);
                if (b != base_values.end() && b->second && v && *b->second != 0.0)
                    delta = percent_change(*b->second, *v);
                o.deltas[name] = delta;
            }
        }
    }
    for (auto& o : slots)
        result.emplace(o.name, std::move(o));
    return result;
}

} // namespace mgems
