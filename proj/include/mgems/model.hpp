#pragma once

#include <array>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mgems {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Photovoltaic array. Output is capacity x derating x normalized irradiance.
struct PvSpec {
    double capacity_kw = 0.0;
    double derating_factor = 0.8;
    double capital_cost = 1300.0;     // currency/kW
    double replacement_cost = 1300.0; // currency/kW
    double om_cost = 10.0;            // currency/kW/yr
    double lifetime_years = 20.0;
};

/// Wind farm made of identical turbines rated at unit_rated_kw each.
struct WindSpec {
    double capacity_kw = 0.0;
    double unit_rated_kw = 3.0;
    double cut_in_ms = 4.0;
    double cut_out_ms = 24.0;
    double rated_speed_ms = 12.0; // fixture assumption
    double hub_height_m = 15.0;
    double anemometer_height_m = 15.0;
    double shear_exponent = 1.0 / 7.0;
    double capital_cost = 2300.0; // currency/kW
    double om_cost = 207.0;       // currency/kW/yr
    double lifetime_years = 20.0;
};

struct DieselSpec {
    double capacity_kw = 60.0;
    double capital_cost = 400.0; // currency/kW
    double om_cost = 0.03;       // currency/h/kW
    // Required input, NaN until configured.
    double fuel_cost_per_kwh = kNaN;
    double min_loading_fraction = 0.0;
};

struct BatterySpec {
    double capacity_kwh = 0.0;
    double roundtrip_efficiency = 0.9;
    double depth_of_discharge = 0.8;
    double soc_min = 0.2;
    double soc_max = 0.8;
    double max_charge_kw = 0.0;
    double max_discharge_kw = 0.0;
    double capital_cost = 700.0; // currency/kWh, also used as replacement cost
    double om_cost = 10.0;       // currency/kWh/yr
    double lifetime_years = 10.0;
    // Starting state of charge; soc_min when unset.
    std::optional<double> initial_soc;
};

struct GridSpec {
    double import_limit_kw = 0.0;
    double export_limit_kw = 0.0;
    double sell_price_ratio = 1.0;
};

enum class ThresholdMode { FixedPrice, PricePercentile, LoadThreshold };

std::string_view to_string(ThresholdMode mode);
std::optional<ThresholdMode> threshold_mode_from_string(std::string_view text);

/// Peak-shaving trigger. Only the parameter of the active mode may be set.
struct EmsConfig {
    ThresholdMode threshold_mode = ThresholdMode::FixedPrice;
    std::optional<double> fixed_threshold;   // currency/kWh
    std::optional<double> percentile;        // fraction of the sorted price column
    std::optional<double> load_threshold_kw; // kW
};

struct EconomicsConfig {
    double discount_rate = kNaN; // required
    int project_lifetime_years = 0; // required
    double converter_efficiency = 0.95;
    double converter_capital_cost = 300.0; // currency/kW
};

enum class Pollutant : std::size_t { CO2 = 0, CO, UH, PM, SO2, NO2 };

inline constexpr std::size_t kPollutantCount = 6;
inline constexpr std::array<Pollutant, kPollutantCount> kPollutants = {
    Pollutant::CO2, Pollutant::CO, Pollutant::UH, Pollutant::PM, Pollutant::SO2, Pollutant::NO2};

std::string_view to_string(Pollutant p);

/// Mass per pollutant, indexed by Pollutant.
using PollutantVector = std::array<double, kPollutantCount>;

inline double& at(PollutantVector& v, Pollutant p) { return v[static_cast<std::size_t>(p)]; }
inline double at(const PollutantVector& v, Pollutant p) { return v[static_cast<std::size_t>(p)]; }

struct EmissionFactors {
    PollutantVector dg{};   // kg per kWh of DG output
    PollutantVector grid{}; // kg per kWh imported
    bool export_offset_enabled = false;
};

struct MicrogridConfig {
    PvSpec pv;
    WindSpec wind;
    DieselSpec diesel;
    BatterySpec battery;
    GridSpec grid;
    EmsConfig ems;
    EconomicsConfig economics;
    EmissionFactors emissions;
    double step_hours = 1.0;
};

struct Violation {
    std::string path;
    std::string message;

    friend bool operator==(const Violation&, const Violation&) = default;
};

using ValidationReport = std::vector<Violation>;

/// Checks every type invariant. Violations are returned, never thrown.
ValidationReport validate_config(const MicrogridConfig& config);

/// Battery state of charge at the start of a run.
double initial_soc(const BatterySpec& battery);

} // namespace mgems
