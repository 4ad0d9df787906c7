#pragma once

#include "mgems/dispatch.hpp"
#include "mgems/model.hpp"
#include "mgems/profiles.hpp"

#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace mgems::fx {

inline std::filesystem::path data_dir() { return MGEMS_DATA_DIR; }
inline std::filesystem::path golden_dir() { return MGEMS_GOLDEN_DIR; }

inline std::string read_text(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

// Community day: hourly load (kW) and price (cents/kWh), hours 1..24.
inline constexpr std::array<double, 24> kDayDemand = {
    99.96,  73.5,   70.56,   69.972,  92.904, 93.492, 102.9,  161.7,  135.24, 88.2,   87.024, 87.024,
    88.2,   170.52, 161.7,   164.052, 182.28, 185.22, 211.68, 226.38, 235.2,  129.36, 128.184, 94.08};
inline constexpr std::array<double, 24> kDayPriceCents = {
    12.168, 12.24,  8.496,  9.36,   11.52,  15.12,  22.896, 22.752, 25.92, 25.2,   27,   26.64,
    26.424, 21.6,   23.184, 22.968, 23.256, 26.28,  28.872, 26.496, 28.08, 20.52,  18,   12.6};
// Currency prices as written in data/community_day.csv.
inline constexpr std::array<double, 24> kDayPrice = {
    0.12168, 0.1224,  0.08496, 0.0936,  0.1152,  0.1512,  0.22896, 0.22752, 0.2592,  0.252,  0.27,  0.2664,
    0.26424, 0.216,   0.23184, 0.22968, 0.23256, 0.2628,  0.28872, 0.26496, 0.2808,  0.2052, 0.18,  0.126};
// Synthetic renewable output, peaks at 263.3 kW (hour 13) and bottoms at 5.18 kW (hour 4).
inline constexpr std::array<double, 24> kDayPv = {0,   0,   0,   0,   0,   5,  20, 18, 70, 130, 175, 205,
                                                  218.3, 203, 180, 140, 95, 35, 5,  0,  0,  0,   0,   0};
inline constexpr std::array<double, 24> kDayWind = {60, 150, 90,  5.18, 20,  30,  40,  10,  50,  50,  45,  45,
                                                    45, 55,  75,  110,  150, 115, 140, 140, 135, 100, 70,  60};

inline std::vector<StepInput> day_inputs()
{
    std::vector<StepInput> v;
    for (std::size_t i = 0; i < 24; ++i)
        v.push_back({i, kDayDemand[i], kDayPrice[i], true, kDayPv[i], kDayWind[i]});
    return v;
}

/// Component data of the shipped reference config, fixed-price mode at 0.25.
inline MicrogridConfig reference_config()
{
    MicrogridConfig c;
    c.pv.capacity_kw = 300;
    c.wind.capacity_kw = 150;
    c.diesel.capacity_kw = 60;
    c.diesel.fuel_cost_per_kwh = 0.30;
    c.battery.capacity_kwh = 500;
    c.battery.max_charge_kw = 120;
    c.battery.max_discharge_kw = 120;
    c.grid.import_limit_kw = 300;
    c.grid.export_limit_kw = 200;
    c.ems.threshold_mode = ThresholdMode::FixedPrice;
    c.ems.fixed_threshold = 0.25;
    c.economics.discount_rate = 0.08;
    c.economics.project_lifetime_years = 25;
    return c;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi)
{
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline bool coin(std::mt19937_64& rng, double p) { return std::bernoulli_distribution(p)(rng); }

/// A valid config with randomized sizes, band, efficiency and EMS mode.
inline MicrogridConfig random_config(std::mt19937_64& rng)
{
    MicrogridConfig c;
    c.step_hours = coin(rng, 0.7) ? 1.0 : (coin(rng, 0.5) ? 0.25 : 0.5);
    c.pv.capacity_kw = uniform(rng, 0, 400);
    c.wind.capacity_kw = 3.0 * std::floor(uniform(rng, 0, 80));
    c.diesel.capacity_kw = coin(rng, 0.1) ? 0.0 : uniform(rng, 0, 150);
    c.diesel.fuel_cost_per_kwh = uniform(rng, 0.1, 1.0);
    c.diesel.min_loading_fraction = coin(rng, 0.5) ? 0.0 : uniform(rng, 0, 0.5);
    auto& b = c.battery;
    b.capacity_kwh = coin(rng, 0.1) ? 0.0 : uniform(rng, 1, 1000);
    b.roundtrip_efficiency = uniform(rng, 0.6, 1.0);
    b.depth_of_discharge = 1.0;
    b.soc_min = uniform(rng, 0.0, 0.4);
    b.soc_max = uniform(rng, b.soc_min + 0.05, 1.0);
    b.max_charge_kw = uniform(rng, 0, 300);
    b.max_discharge_kw = uniform(rng, 0, 300);
    if (coin(rng, 0.5))
        b.initial_soc = uniform(rng, b.soc_min, b.soc_max);
    c.grid.import_limit_kw = uniform(rng, 0, 400);
    c.grid.export_limit_kw = uniform(rng, 0, 400);
    switch (std::uniform_int_distribution<int>(0, 2)(rng)) {
    case 0:
        c.ems.threshold_mode = ThresholdMode::FixedPrice;
        c.ems.fixed_threshold = uniform(rng, 0, 0.4);
        break;
    case 1:
        c.ems.threshold_mode = ThresholdMode::PricePercentile;
        c.ems.percentile = uniform(rng, 0.05, 0.95);
        break;
    default:
        c.ems.threshold_mode = ThresholdMode::LoadThreshold;
        c.ems.load_threshold_kw = uniform(rng, 0, 300);
        break;
    }
    c.economics.discount_rate = uniform(rng, 0, 0.15);
    c.economics.project_lifetime_years = std::uniform_int_distribution<int>(1, 30)(rng);
    return c;
}

/// Random demand, price, renewables and outage blocks.
inline std::vector<StepInput> random_inputs(std::mt19937_64& rng, std::size_t n)
{
    std::vector<StepInput> v(n);
    bool up = true;
    for (std::size_t i = 0; i < n; ++i) {
        if (coin(rng, up ? 0.05 : 0.3))
            up = !up;
        v[i].index = i;
        v[i].demand_kw = coin(rng, 0.05) ? 0.0 : uniform(rng, 0, 400);
        v[i].price = uniform(rng, 0, 0.4);
        v[i].grid_available = up;
        v[i].pv_kw = coin(rng, 0.3) ? 0.0 : uniform(rng, 0, 400);
        v[i].wind_kw = coin(rng, 0.2) ? 0.0 : uniform(rng, 0, 250);
    }
    return v;
}

} // namespace mgems::fx
