#pragma once

#include "mgems/dispatch.hpp"
#include "mgems/model.hpp"
#include "mgems/profiles.hpp"

#include <optional>
#include <span>
#include <utility>

namespace mgems {

inline constexpr double kHoursPerYear = 8760.0;

/// Energy over the simulated horizon, kWh. pv_kwh and wind_kwh are available
/// generation before curtailment.
struct EnergyTotals {
    double imported_kwh = 0.0;
    double exported_kwh = 0.0;
    double dg_kwh = 0.0;
    double pv_kwh = 0.0;
    double wind_kwh = 0.0;
    double battery_charge_kwh = 0.0;
    double battery_discharge_kwh = 0.0;
    double served_kwh = 0.0;
    double unserved_kwh = 0.0;
    double curtailed_kwh = 0.0;

    friend bool operator==(const EnergyTotals&, const EnergyTotals&) = default;
};

EnergyTotals operator+(const EnergyTotals& a, const EnergyTotals& b);
EnergyTotals operator*(const EnergyTotals& t, double factor);

struct ReliabilityStats {
    std::size_t outage_count = 0;
    double outage_hours = 0.0;
    double uptime_fraction = 1.0;

    friend bool operator==(const ReliabilityStats&, const ReliabilityStats&) = default;
};

/// Yearly economics. lcoe and renewable_fraction are empty when nothing was served.
struct EconomicSummary {
    double operating_cost = 0.0;
    double capex = 0.0;
    double npc = 0.0;
    std::optional<double> lcoe;
    std::optional<double> renewable_fraction;
};

/// Net yearly mass per pollutant, kg. Negative only with export offsets enabled.
struct EmissionSummary {
    PollutantVector net_kg{};
};

/// Aggregate outcome of one simulated horizon.
struct SimulationReport {
    std::size_t steps = 0;
    double step_hours = 1.0;
    double annualization_factor = 1.0;
    double threshold = 0.0;
    EnergyTotals energy;
    ReliabilityStats reliability;
    EconomicSummary economics;
    EmissionSummary emissions;
};

std::pair<EnergyTotals, ReliabilityStats> accumulate(std::span<const StepResult> trace,
                                                     std::span<const StepInput> inputs, double dt_h);

/// Scale from a horizon to one year (365 for a single hourly day).
double annualization_factor(std::size_t steps, double dt_h);

/// Net grid purchases, fuel and DG O&M over the horizon times `annualization`,
/// plus the fixed yearly O&M of PV, wind and battery.
double operating_cost(std::span<const StepResult> trace, std::span<const StepInput> inputs,
                      const MicrogridConfig& config, double annualization = 1.0);

/// Fixed yearly O&M of PV, wind and battery.
double fixed_om_cost(const MicrogridConfig& config);

/// Installed cost of every component at its configured size. The converter is
/// sized to the larger battery power rating.
double capex(const MicrogridConfig& config);

/// Discounted replacement outlays within the project life minus discounted salvage.
double replacement_present_value(const MicrogridConfig& config);

double npc(double annual_cost, double capex, double discount_rate, int lifetime_years);

double capital_recovery_factor(double discount_rate, int lifetime_years);

double lcoe(double npc, double discount_rate, int lifetime_years, double annual_served_kwh);

double renewable_fraction(const EnergyTotals& totals);

/// (next - base) / |base| x 100.
double percent_change(double base, double next);

EmissionSummary emissions(const EnergyTotals& totals, const EmissionFactors& factors);

SimulationReport build_report(std::span<const StepResult> trace, std::span<const StepInput> inputs,
                              double threshold, const MicrogridConfig& config);

} // namespace mgems
