#pragma once

#include "mgems/dispatch.hpp"
#include "mgems/metrics.hpp"
#include "mgems/profiles.hpp"
#include "mgems/scenarios.hpp"

#include <map>
#include <span>
#include <string>

#include <json.hpp>

namespace mgems {

inline constexpr int kReportSchemaVersion = 1;

inline constexpr std::string_view kTraceHeader =
    "index,demand_kw,price,grid_available,pv_kw,wind_kw,pv_used_kw,wind_used_kw,curtailed_kw,"
    "battery_charge_kw,battery_discharge_kw,dg_kw,grid_import_kw,grid_export_kw,unserved_kw,mode,soc,"
    "energy_kwh,threshold";

/// One row per step: inputs, allocation, end-of-step battery state, threshold.
std::string trace_csv(std::span<const StepInput> inputs, std::span<const StepResult> trace, double threshold);

nlohmann::ordered_json report_json(const SimulationReport& report);

/// Pretty-printed report_json plus trailing newline.
std::string report_text(const SimulationReport& report);

/// Percent deltas against the base, one row per non-base outcome. Failed
/// scenarios carry status "error" and the message.
std::string matrix_csv(const std::map<std::string, ScenarioOutcome>& outcomes);

} // namespace mgems
