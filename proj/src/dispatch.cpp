#include "mgems/dispatch.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mgems {

namespace {

constexpr double kSocTolerance = 1e-9;
constexpr double kPowerTolerance = 1e-9;

} // namespace

BatteryState BatteryState::at_soc(double soc, const BatterySpec& spec)
{
    return {soc, soc * spec.capacity_kwh};
}

BatteryState BatteryState::from_energy(double energy_kwh, const BatterySpec& spec)
{
    // A zero-capacity battery has no meaningful soc; pin it to the floor.
    const double soc = spec.capacity_kwh > 0.0 ? energy_kwh / spec.capacity_kwh : spec.soc_min;
    return {soc, energy_kwh};
}

BatteryState initial_battery_state(const BatterySpec& spec)
{
    return BatteryState::at_soc(initial_soc(spec), spec);
}

std::string_view to_string(GridMode mode)
{
    return mode == GridMode::GridConnected ? "grid-connected" : "islanded";
}

double price_threshold(std::span<const double> prices, const EmsConfig& ems)
{
    switch (ems.threshold_mode) {
    case ThresholdMode::FixedPrice:
        if (!ems.fixed_threshold)
            throw std::invalid_argument("price_threshold: fixed_threshold not set");
        return *ems.fixed_threshold;
    case ThresholdMode::LoadThreshold:
        if (!ems.load_threshold_kw)
            throw std::invalid_argument("price_threshold: load_threshold_kw not set");
        return *ems.load_threshold_kw;
    case ThresholdMode::PricePercentile: {
        if (!ems.percentile)
            throw std::invalid_argument("price_threshold: percentile not set");
        const double q = *ems.percentile;
        if (!(q >= 0.0 && q <= 1.0))
            throw std::invalid_argument("price_threshold: percentile must lie in [0, 1]");
        if (prices.empty())
            throw std::invalid_argument("price_threshold: empty price sequence");
        std::vector<double> sorted(prices.begin(), prices.end());
        std::sort(sorted.begin(), sorted.end());
        // lower interpolation: the sample at or just below the fractional rank
        const auto rank = static_cast<std::size_t>(std::floor(q * static_cast<double>(sorted.size() - 1)));
        return sorted[rank];
    }
    }
    throw std::invalid_argument("price_threshold: unknown mode");
}

double resolve_threshold(std::span<const StepInput> inputs, const EmsConfig& ems)
{
    std::vector<double> prices;
    prices.reserve(inputs.size());
    for (const auto& in : inputs)
        prices.push_back(in.price);
    return price_threshold(prices, ems);
}

Intent shaving_intent(double price, double threshold)
{
    return price > threshold ? Intent::Discharge : Intent::Charge;
}

Intent step_intent(const StepInput& input, double threshold, const EmsConfig& ems)
{
    if (ems.threshold_mode == ThresholdMode::LoadThreshold)
        return shaving_intent(input.demand_kw, threshold);
    return shaving_intent(input.price, threshold);
}

Gate soc_gate(const BatteryState& state, Intent intent, const BatterySpec& spec)
{
    if (intent == Intent::Charge && state.soc >= spec.soc_max)
        return Gate::Decline;
    if (intent == Intent::Discharge && state.soc <= spec.soc_min)
        return Gate::Decline;
    return Gate::Permit;
}

SurplusResult surplus(const StepInput& input, double battery_available_discharge_kw, double dt_h)
{
    if (!(dt_h > 0.0))
        throw std::invalid_argument("surplus: dt_h must be > 0");
    const double kw = input.pv_kw + input.wind_kw + battery_available_discharge_kw - input.demand_kw;
    return {kw, kw * dt_h};
}

double charge_headroom_kw(const BatteryState& state, const BatterySpec& spec, double dt_h)
{
    if (spec.capacity_kwh <= 0.0)
        return 0.0;
    const double room_kwh = std::max(0.0, spec.soc_max * spec.capacity_kwh - state.energy_kwh);
    return std::min(spec.max_charge_kw, room_kwh / (std::sqrt(spec.roundtrip_efficiency) * dt_h));
}

double discharge_headroom_kw(const BatteryState& state, const BatterySpec& spec, double dt_h)
{
    if (spec.capacity_kwh <= 0.0)
        return 0.0;
    const double avail_kwh = std::max(0.0, state.energy_kwh - spec.soc_min * spec.capacity_kwh);
    return std::min(spec.max_discharge_kw, avail_kwh * std::sqrt(spec.roundtrip_efficiency) / dt_h);
}

BatteryState step_battery(const BatteryState& state, double charge_kw, double discharge_kw, double dt_h,
                          const BatterySpec& spec)
{
    if (charge_kw < 0.0 || discharge_kw < 0.0)
        throw InvariantError("step_battery: negative power");
    if (charge_kw > 0.0 && discharge_kw > 0.0)
        throw InvariantError("step_battery: simultaneous charge and discharge");
    if (charge_kw > spec.max_charge_kw + kPowerTolerance || discharge_kw > spec.max_discharge_kw + kPowerTolerance)
        throw InvariantError("step_battery: power exceeds battery rating");
    if (charge_kw == 0.0 && discharge_kw == 0.0)
        return state;

    const double split = std::sqrt(spec.roundtrip_efficiency);
    const double energy = state.energy_kwh + charge_kw * split * dt_h - discharge_kw / split * dt_h;
    const BatteryState next = BatteryState::from_energy(energy, spec);
    if (next.soc < spec.soc_min - kSocTolerance || next.soc > spec.soc_max + kSocTolerance) {
        std::ostringstream os;
        os << "step_battery: soc " << next.soc << " leaves [" << spec.soc_min << ", " << spec.soc_max << "]";
        throw InvariantError(os.str());
    }
    return next;
}

StepResult dispatch_step(const BatteryState& state, const StepInput& input, double threshold,
                         const MicrogridConfig& config)
{
    const auto& bat = config.battery;
    const double dt = config.step_hours;

    DispatchDecision d;
    d.mode = input.grid_available ? GridMode::GridConnected : GridMode::Islanded;

    // While islanded the price signal is moot: surplus always charges.
    const Intent intent = input.grid_available ? step_intent(input, threshold, config.ems) : Intent::Charge;

    const double charge_room =
        soc_gate(state, Intent::Charge, bat) == Gate::Permit ? charge_headroom_kw(state, bat, dt) : 0.0;
    const double discharge_room =
        soc_gate(state, Intent::Discharge, bat) == Gate::Permit ? discharge_headroom_kw(state, bat, dt) : 0.0;

    const double renewables = input.pv_kw + input.wind_kw;
    // Battery contribution is left out here; it is what the surplus decides.
    const double net = surplus(input, 0.0, dt).surplus_kw;
    double renewables_used = renewables;

    if (net >= 0.0) {
        double residual = net;
        if (intent == Intent::Charge) {
            d.battery_charge_kw = std::min(residual, charge_room);
            residual -= d.battery_charge_kw;
        }
        if (input.grid_available) {
            d.grid_export_kw = std::min(residual, config.grid.export_limit_kw);
            residual -= d.grid_export_kw;
        }
        d.curtailed_kw = residual;
        renewables_used = renewables - residual;
    } else {
        double deficit = -net;
        d.battery_discharge_kw = std::min(deficit, discharge_room);
        deficit -= d.battery_discharge_kw;
        if (input.grid_available) {
            d.grid_import_kw = std::min(deficit, config.grid.import_limit_kw);
            deficit -= d.grid_import_kw;
        } else if (deficit > 0.0) {
            d.dg_kw = std::min(deficit, config.diesel.capacity_kw);
            deficit -= d.dg_kw;
            // Minimum loading: push the DG up to its floor by backing off the
            // battery first, then curtailing renewables. If the load cannot
            // absorb the floor the DG runs below it.
            const double floor_kw = config.diesel.min_loading_fraction * config.diesel.capacity_kw;
            if (d.dg_kw > 0.0 && d.dg_kw < floor_kw) {
                double extra = floor_kw - d.dg_kw;
                const double from_battery = std::min(extra, d.battery_discharge_kw);
                d.battery_discharge_kw -= from_battery;
                extra -= from_battery;
                const double from_renewables = std::min(extra, renewables_used);
                renewables_used -= from_renewables;
                d.curtailed_kw += from_renewables;
                d.dg_kw += from_battery + from_renewables;
            }
        }
        d.unserved_kw = deficit;
    }

    // Wind is curtailed before PV.
    d.pv_used_kw = std::min(input.pv_kw, renewables_used);
    d.wind_used_kw = std::max(0.0, renewables_used - d.pv_used_kw);

    StepResult out;
    out.decision = d;
    out.state = step_battery(state, d.battery_charge_kw, d.battery_discharge_kw, dt, bat);
    return out;
}

std::vector<StepResult> run_horizon(std::span<const StepInput> inputs, const BatteryState& initial,
                                    double threshold, const MicrogridConfig& config)
{
    if (inputs.empty())
        throw std::invalid_argument("run_horizon: empty horizon");
    std::vector<StepResult> trace;
    trace.reserve(inputs.size());
    BatteryState state = initial;
    for (const auto& in : inputs) {
        trace.push_back(dispatch_step(state, in, threshold, config));
        state = trace.back().state;
    }
    return trace;
}

double balance_residual_kw(const DispatchDecision& d, const StepInput& input)
{
    const double supply = d.pv_used_kw + d.wind_used_kw + d.battery_discharge_kw + d.dg_kw + d.grid_import_kw;
    const double load = (input.demand_kw - d.unserved_kw) + d.battery_charge_kw + d.grid_export_kw;
    return supply - load;
}

std::vector<TraceViolation> audit_trace(std::span<const StepInput> inputs, std::span<const StepResult> trace,
                                        const MicrogridConfig& config)
{
    std::vector<TraceViolation> out;
    if (inputs.size() != trace.size()) {
        out.push_back({0, "trace and inputs differ in length"});
        return out;
    }
    const auto& bat = config.battery;
    for (std::size_t i = 0; i < trace.size(); ++i) {
        const auto& d = trace[i].decision;
        auto fail = [&](std::string what) { out.push_back({i, std::move(what)}); };

        for (double v : {d.pv_used_kw, d.wind_used_kw, d.curtailed_kw, d.battery_charge_kw, d.battery_discharge_kw,
                         d.dg_kw, d.grid_import_kw, d.grid_export_kw, d.unserved_kw})
            if (!(v >= 0.0)) {
                fail("negative power");
                break;
            }
        if (std::abs(balance_residual_kw(d, inputs[i])) > kBalanceTolerance)
            fail("power balance residual exceeds tolerance");
        if (d.battery_charge_kw > 0.0 && d.battery_discharge_kw > 0.0)
            fail("simultaneous charge and discharge");
        if (d.grid_import_kw > 0.0 && d.grid_export_kw > 0.0)
            fail("simultaneous import and export");
        if (d.mode == GridMode::Islanded && (d.grid_import_kw > 0.0 || d.grid_export_kw > 0.0))
            fail("grid exchange while islanded");
        if (d.dg_kw > 0.0 && d.mode != GridMode::Islanded)
            fail("diesel running while grid-connected");
        if (bat.capacity_kwh > 0.0) {
            const double soc = trace[i].state.soc;
            if (soc < bat.soc_min - kSocTolerance || soc > bat.soc_max + kSocTolerance)
                fail("soc outside band");
        }
    }
    return out;
}

} // namespace mgems
