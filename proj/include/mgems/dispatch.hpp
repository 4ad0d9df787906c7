#pragma once

#include "mgems/model.hpp"
#include "mgems/profiles.hpp"

#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mgems {

/// Thrown when an operation would break a physical invariant. Always a caller bug.
class InvariantError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Stored battery energy. energy_kwh is authoritative; soc is energy over nominal capacity.
struct BatteryState {
    double soc = 0.0;
    double energy_kwh = 0.0;

    static BatteryState at_soc(double soc, const BatterySpec& spec);
    static BatteryState from_energy(double energy_kwh, const BatterySpec& spec);

    friend bool operator==(const BatteryState&, const BatteryState&) = default;
};

BatteryState initial_battery_state(const BatterySpec& spec);

enum class Intent { Charge, Discharge };
enum class Gate { Permit, Decline };
enum class GridMode { GridConnected, Islanded };

std::string_view to_string(GridMode mode);

/// Power allocation for one step. Every field is a nonnegative magnitude in kW.
struct DispatchDecision {
    double pv_used_kw = 0.0;
    double wind_used_kw = 0.0;
    double curtailed_kw = 0.0;
    double battery_charge_kw = 0.0;
    double battery_discharge_kw = 0.0;
    double dg_kw = 0.0;
    double grid_import_kw = 0.0;
    double grid_export_kw = 0.0;
    double unserved_kw = 0.0;
    GridMode mode = GridMode::GridConnected;

    friend bool operator==(const DispatchDecision&, const DispatchDecision&) = default;
};

struct SurplusResult {
    double surplus_kw = 0.0;
    double surplus_kwh = 0.0;
};

/// Decision taken during a step together with the battery state at the end of it.
struct StepResult {
    DispatchDecision decision;
    BatteryState state;

    friend bool operator==(const StepResult&, const StepResult&) = default;
};

/// Peak-shaving threshold for the configured mode. In load-threshold mode the
/// returned value is the load threshold in kW.
double price_threshold(std::span<const double> prices, const EmsConfig& ems);

/// Convenience overload that pulls the price column out of a profile.
double resolve_threshold(std::span<const StepInput> inputs, const EmsConfig& ems);

/// Discharge iff value > threshold.
Intent shaving_intent(double price, double threshold);

/// Intent for a step under the configured mode: price against threshold, or
/// demand against the load threshold.
Intent step_intent(const StepInput& input, double threshold, const EmsConfig& ems);

Gate soc_gate(const BatteryState& state, Intent intent, const BatterySpec& spec);

/// Instantaneous and per-step surplus of renewables plus the given battery output over demand.
SurplusResult surplus(const StepInput& input, double battery_available_discharge_kw, double dt_h);

/// Largest terminal charge power that keeps soc <= soc_max over dt_h.
double charge_headroom_kw(const BatteryState& state, const BatterySpec& spec, double dt_h);

/// Largest terminal discharge power that keeps soc >= soc_min over dt_h.
double discharge_headroom_kw(const BatteryState& state, const BatterySpec& spec, double dt_h);

/// Advances stored energy with the roundtrip loss split evenly between directions.
BatteryState step_battery(const BatteryState& state, double charge_kw, double discharge_kw, double dt_h,
                          const BatterySpec& spec);

/// One EMS step: peak-shaving intent, SOC gating, then the grid-interaction priority order.
StepResult dispatch_step(const BatteryState& state, const StepInput& input, double threshold,
                         const MicrogridConfig& config);

/// Left fold of dispatch_step. The threshold must already be resolved over the full horizon.
std::vector<StepResult> run_horizon(std::span<const StepInput> inputs, const BatteryState& initial,
                                    double threshold, const MicrogridConfig& config);

/// Supply minus load side of the balance equation, in kW. Zero for a consistent decision.
double balance_residual_kw(const DispatchDecision& decision, const StepInput& input);

inline constexpr double kBalanceTolerance = 1e-6;

struct TraceViolation {
    std::size_t step = 0;
    std::string what;
};

/// Checks balance, sign, mutual-exclusion, islanding and SOC-band invariants of a trace.
std::vector<TraceViolation> audit_trace(std::span<const StepInput> inputs, std::span<const StepResult> trace,
                                        const MicrogridConfig& config);

} // namespace mgems
