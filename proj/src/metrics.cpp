#include "mgems/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mgems {

EnergyTotals operator+(const EnergyTotals& a, const EnergyTotals& b)
{
    return {a.imported_kwh + b.imported_kwh,
            a.exported_kwh + b.exported_kwh,
            a.dg_kwh + b.dg_kwh,
            a.pv_kwh + b.pv_kwh,
            a.wind_kwh + b.wind_kwh,
            a.battery_charge_kwh + b.battery_charge_kwh,
            a.battery_discharge_kwh + b.battery_discharge_kwh,
            a.served_kwh + b.served_kwh,
            a.unserved_kwh + b.unserved_kwh,
            a.curtailed_kwh + b.curtailed_kwh};
}

EnergyTotals operator*(const EnergyTotals& t, double f)
{
    return {t.imported_kwh * f,      t.exported_kwh * f,          t.dg_kwh * f,     t.pv_kwh * f,
            t.wind_kwh * f,          t.battery_charge_kwh * f,    t.battery_discharge_kwh * f,
            t.served_kwh * f,        t.unserved_kwh * f,          t.curtailed_kwh * f};
}

std::pair<EnergyTotals, ReliabilityStats> accumulate(std::span<const StepResult> trace,
                                                     std::span<const StepInput> inputs, double dt_h)
{
    if (trace.size() != inputs.size())
        throw std::invalid_argument("accumulate: trace and inputs differ in length");

    EnergyTotals e;
    ReliabilityStats r;
    std::size_t clean_steps = 0;
    bool in_outage = false;
    for (std::size_t i = 0; i < trace.size(); ++i) {
        const auto& d = trace[i].decision;
        const auto& in = inputs[i];
        e.imported_kwh += d.grid_import_kw * dt_h;
        e.exported_kwh += d.grid_export_kw * dt_h;
        e.dg_kwh += d.dg_kw * dt_h;
        e.pv_kwh += in.pv_kw * dt_h;
        e.wind_kwh += in.wind_kw * dt_h;
        e.battery_charge_kwh += d.battery_charge_kw * dt_h;
        e.battery_discharge_kwh += d.battery_discharge_kw * dt_h;
        e.served_kwh += (in.demand_kw - d.unserved_kw) * dt_h;
        e.unserved_kwh += d.unserved_kw * dt_h;
        e.curtailed_kwh += d.curtailed_kw * dt_h;

        if (!in.grid_available) {
            if (!in_outage)
                ++r.outage_count;
            r.outage_hours += dt_h;
        }
        in_outage = !in.grid_available;
        if (d.unserved_kw == 0.0)
            ++clean_steps;
    }
    r.uptime_fraction =
        trace.empty() ? 1.0 : static_cast<double>(clean_steps) / static_cast<double>(trace.size());
    return {e, r};
}

double annualization_factor(std::size_t steps, double dt_h)
{
    if (steps == 0 || !(dt_h > 0.0))
        throw std::invalid_argument("annualization_factor: empty horizon");
    return kHoursPerYear / (static_cast<double>(steps) * dt_h);
}

double fixed_om_cost(const MicrogridConfig& c)
{
    return c.pv.capacity_kw * c.pv.om_cost + c.wind.capacity_kw * c.wind.om_cost +
           c.battery.capacity_kwh * c.battery.om_cost;
}

double operating_cost(std::span<const StepResult> trace, std::span<const StepInput> inputs,
                      const MicrogridConfig& config, double annualization)
{
    if (trace.size() != inputs.size())
        throw std::invalid_argument("operating_cost: trace and inputs differ in length");
    const double dt = config.step_hours;
    double grid = 0.0;
    double dg_kwh = 0.0;
    double dg_hours = 0.0;
    for (std::size_t i = 0; i < trace.size(); ++i) {
        const auto& d = trace[i].decision;
        const double price = inputs[i].price;
        grid += d.grid_import_kw * price * dt;
        grid -= d.grid_export_kw * price * config.grid.sell_price_ratio * dt;
        dg_kwh += d.dg_kw * dt;
        if (d.dg_kw > 0.0)
            dg_hours += dt;
    }
    const double fuel = dg_kwh * config.diesel.fuel_cost_per_kwh;
    const double dg_om = dg_hours * config.diesel.capacity_kw * config.diesel.om_cost;
    return (grid + fuel + dg_om) * annualization + fixed_om_cost(config);
}

double capex(const MicrogridConfig& c)
{
    const double converter_kw = std::max(c.battery.max_charge_kw, c.battery.max_discharge_kw);
    return c.pv.capacity_kw * c.pv.capital_cost + c.wind.capacity_kw * c.wind.capital_cost +
           c.diesel.capacity_kw * c.diesel.capital_cost + c.battery.capacity_kwh * c.battery.capital_cost +
           converter_kw * c.economics.converter_capital_cost;
}

namespace {

// Replacements at every multiple of the component life strictly inside the
// project, then linear salvage of the remaining life at the end.
double replacement_flows(double unit_cost, double lifetime, double r, int project_years)
{
    if (unit_cost == 0.0 || !(lifetime > 0.0))
        return 0.0;
    const double horizon = static_cast<double>(project_years);
    double pv = 0.0;
    double last_install = 0.0;
    for (double year = lifetime; year < horizon; year += lifetime) {
        pv += unit_cost / std::pow(1.0 + r, year);
        last_install = year;
    }
    const double remaining = lifetime - (horizon - last_install);
    if (remaining > 0.0)
        pv -= unit_cost * (remaining / lifetime) / std::pow(1.0 + r, horizon);
    return pv;
}

} // namespace

double replacement_present_value(const MicrogridConfig& c)
{
    const double r = c.economics.discount_rate;
    const int years = c.economics.project_lifetime_years;
    return replacement_flows(c.pv.capacity_kw * c.pv.replacement_cost, c.pv.lifetime_years, r, years) +
           replacement_flows(c.wind.capacity_kw * c.wind.capital_cost, c.wind.lifetime_years, r, years) +
           replacement_flows(c.battery.capacity_kwh * c.battery.capital_cost, c.battery.lifetime_years, r, years);
}

double npc(double annual_cost, double capex, double discount_rate, int lifetime_years)
{
    if (lifetime_years < 1)
        throw std::invalid_argument("npc: lifetime_years must be >= 1");
    double total = capex;
    for (int y = 1; y <= lifetime_years; ++y)
        total += annual_cost / std::pow(1.0 + discount_rate, y);
    return total;
}

double capital_recovery_factor(double discount_rate, int lifetime_years)
{
    if (lifetime_years < 1)
        throw std::invalid_argument("capital_recovery_factor: lifetime_years must be >= 1");
    if (discount_rate == 0.0)
        return 1.0 / lifetime_years;
    const double g = std::pow(1.0 + discount_rate, lifetime_years);
    return discount_rate * g / (g - 1.0);
}

double lcoe(double npc, double discount_rate, int lifetime_years, double annual_served_kwh)
{
    if (!(annual_served_kwh > 0.0))
        throw std::domain_error("lcoe: no energy served");
    return npc * capital_recovery_factor(discount_rate, lifetime_years) / annual_served_kwh;
}

double renewable_fraction(const EnergyTotals& t)
{
    if (!(t.served_kwh > 0.0))
        throw std::domain_error("renewable_fraction: no energy served");
    // Battery losses are not netted out: energy is counted once, as delivered
    // renewable generation, whichever path it takes to the load.
    const double delivered = t.pv_kwh + t.wind_kwh - t.curtailed_kwh;
    return std::clamp(delivered / t.served_kwh, 0.0, 1.0);
}

double percent_change(double base, double next)
{
    if (base == 0.0)
        throw std::domain_error("percent_change: base is zero");
    return (next - base) / std::abs(base) * 100.0;
}

EmissionSummary emissions(const EnergyTotals& t, const EmissionFactors& f)
{
    EmissionSummary s;
    for (Pollutant p : kPollutants) {
        double net = t.dg_kwh * at(f.dg, p) + t.imported_kwh * at(f.grid, p);
        if (f.export_offset_enabled)
            net -= t.exported_kwh * at(f.grid, p);
        at(s.net_kg, p) = net;
    }
    return s;
}

SimulationReport build_report(std::span<const StepResult> trace, std::span<const StepInput> inputs,
                              double threshold, const MicrogridConfig& config)
{
    SimulationReport rep;
    rep.steps = trace.size();
    rep.step_hours = config.step_hours;
    rep.threshold = threshold;
    rep.annualization_factor = annualization_factor(trace.size(), config.step_hours);

    auto [energy, reliability] = accumulate(trace, inputs, config.step_hours);
    rep.energy = energy;
    rep.reliability = reliability;

    const auto& econ = config.economics;
    const EnergyTotals yearly = energy * rep.annualization_factor;
    rep.economics.operating_cost = operating_cost(trace, inputs, config, rep.annualization_factor);
    rep.economics.capex = capex(config);
    rep.economics.npc = npc(rep.economics.operating_cost, rep.economics.capex + replacement_present_value(config),
                            econ.discount_rate, econ.project_lifetime_years);
    if (yearly.served_kwh > 0.0) {
        rep.economics.lcoe = lcoe(rep.economics.npc, econ.discount_rate, econ.project_lifetime_years,
                                  yearly.served_kwh);
        rep.economics.renewable_fraction = renewable_fraction(energy);
    }
    rep.emissions = emissions(yearly, config.emissions);
    return rep;
}

} // namespace mgems
