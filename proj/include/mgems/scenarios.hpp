#pragma once

#include "mgems/dispatch.hpp"
#include "mgems/metrics.hpp"
#include "mgems/model.hpp"
#include "mgems/profiles.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mgems {

enum class ScenarioId { S1, S2, S3, S4, Custom };

std::string_view to_string(ScenarioId id);
std::optional<ScenarioId> builtin_id_from_string(std::string_view text);

struct OutageWindow {
    std::size_t start = 0;
    std::size_t duration = 0;

    friend bool operator==(const OutageWindow&, const OutageWindow&) = default;
};

/// A perturbation of the base case. Identity multipliers leave inputs untouched.
struct Scenario {
    ScenarioId id = ScenarioId::Custom;
    std::string name;
    double demand_multiplier = 1.0;
    double pv_multiplier = 1.0;
    double wind_multiplier = 1.0;
    double fuel_price_multiplier = 1.0;
    std::optional<OutageWindow> outage_window;
    // Replaces the price column when set; length must match the horizon.
    std::optional<std::vector<double>> price_series;
};

Scenario identity_scenario(std::string name = "identity");

/// Knobs the built-in grid-failure scenario needs from the run it is applied to.
struct ScenarioDefaults {
    double step_hours = 1.0;
    std::size_t outage_start = 0;
    double outage_hours = 6.0;
};

/// First step of the last run of above-threshold prices, i.e. the evening peak block.
/// Falls back to 0 when no price exceeds the threshold.
std::size_t evening_peak_start(std::span<const StepInput> inputs, double threshold);

Scenario builtin_scenario(ScenarioId id, const ScenarioDefaults& defaults = {});

/// Throws std::invalid_argument when a multiplier is not positive or the scenario
/// does not fit a horizon of `steps` steps.
void check_scenario(const Scenario& s, std::size_t steps);

std::pair<std::vector<StepInput>, MicrogridConfig> apply_scenario(std::span<const StepInput> inputs,
                                                                   const MicrogridConfig& config,
                                                                   const Scenario& s);

/// Metrics compared across scenarios, in report order.
std::vector<std::string> delta_metric_names();
std::map<std::string, std::optional<double>> metric_values(const SimulationReport& report);

struct ScenarioOutcome {
    std::string name;
    ScenarioId id = ScenarioId::Custom;
    std::vector<StepInput> inputs;
    std::vector<StepResult> trace;
    std::optional<SimulationReport> report;
    // percent_change against the base run; empty where the base value is 0 or missing
    std::map<std::string, std::optional<double>> deltas;
    std::string error;

    bool ok() const { return report.has_value(); }
};

inline constexpr std::string_view kBaseScenarioName = "base";

/// Simulates one prepared case end to end.
ScenarioOutcome simulate_case(std::string name, ScenarioId id, std::vector<StepInput> inputs,
                              const MicrogridConfig& config);

/// Runs the base case plus every scenario, keyed by name. `threads` <= 1 runs
/// sequentially; results never depend on it. A failing scenario records its
/// error and leaves its siblings alone.
std::map<std::string, ScenarioOutcome> run_matrix(std::span<const StepInput> base_inputs,
                                                  const MicrogridConfig& base_config,
                                                  std::span<const Scenario> scenarios, unsigned threads = 1);

} // namespace mgems
