#include "mgems/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mgems {

std::string_view to_string(ThresholdMode mode)
{
    switch (mode) {
    case ThresholdMode::FixedPrice:
        return "fixed-price";
    case ThresholdMode::PricePercentile:
        return "price-percentile";
    case ThresholdMode::LoadThreshold:
        return "load-threshold";
    }
    return "unknown";
}

std::optional<ThresholdMode> threshold_mode_from_string(std::string_view text)
{
    if (text == "fixed-price")
        return ThresholdMode::FixedPrice;
    if (text == "price-percentile")
        return ThresholdMode::PricePercentile;
    if (text == "load-threshold")
        return ThresholdMode::LoadThreshold;
    return std::nullopt;
}

std::string_view to_string(Pollutant p)
{
    switch (p) {
    case Pollutant::CO2:
        return "CO2";
    case Pollutant::CO:
        return "CO";
    case Pollutant::UH:
        return "UH";
    case Pollutant::PM:
        return "PM";
    case Pollutant::SO2:
        return "SO2";
    case Pollutant::NO2:
        return "NO2";
    }
    return "unknown";
}

double initial_soc(const BatterySpec& battery)
{
    return battery.initial_soc.value_or(battery.soc_min);
}

namespace {

class Checker {
public:
    explicit Checker(ValidationReport& out) : out_(out) {}

    void require(bool ok, std::string path, std::string message)
    {
        if (!ok)
            out_.push_back({std::move(path), std::move(message)});
    }

    // NaN fails every comparison, so finite() guards each numeric check.
    void nonnegative(double v, const std::string& path)
    {
        require(std::isfinite(v) && v >= 0.0, path, "must be >= 0 (got " + str(v) + ")");
    }

    void positive(double v, const std::string& path)
    {
        require(std::isfinite(v) && v > 0.0, path, "must be > 0 (got " + str(v) + ")");
    }

    void unit_interval_open_closed(double v, const std::string& path)
    {
        require(std::isfinite(v) && v > 0.0 && v <= 1.0, path,
                "must satisfy 0 < x <= 1 (got " + str(v) + ")");
    }

    static std::string str(double v)
    {
        std::ostringstream os;
        os << v;
        return os.str();
    }

private:
    ValidationReport& out_;
};

void check_pv(Checker& c, const PvSpec& pv)
{
    c.nonnegative(pv.capacity_kw, "pv.capacity_kw");
    c.unit_interval_open_closed(pv.derating_factor, "pv.derating_factor");
    c.nonnegative(pv.capital_cost, "pv.capital_cost");
    c.nonnegative(pv.replacement_cost, "pv.replacement_cost");
    c.nonnegative(pv.om_cost, "pv.om_cost");
    c.positive(pv.lifetime_years, "pv.lifetime_years");
}

void check_wind(Checker& c, const WindSpec& w)
{
    c.nonnegative(w.capacity_kw, "wind.capacity_kw");
    c.positive(w.unit_rated_kw, "wind.unit_rated_kw");
    c.require(std::isfinite(w.cut_in_ms) && std::isfinite(w.rated_speed_ms) &&
                  std::isfinite(w.cut_out_ms) && 0.0 < w.cut_in_ms &&
                  w.cut_in_ms < w.rated_speed_ms && w.rated_speed_ms < w.cut_out_ms,
              "wind.speeds", "must satisfy 0 < cut_in_ms < rated_speed_ms < cut_out_ms");
    if (std::isfinite(w.capacity_kw) && w.capacity_kw >= 0.0 && std::isfinite(w.unit_rated_kw) &&
        w.unit_rated_kw > 0.0) {
        const double units = w.capacity_kw / w.unit_rated_kw;
        c.require(std::abs(units - std::round(units)) <= 1e-9 * std::max(1.0, units),
                  "wind.capacity_kw", "must be an integer multiple of unit_rated_kw");
    }
    c.positive(w.hub_height_m, "wind.hub_height_m");
    c.positive(w.anemometer_height_m, "wind.anemometer_height_m");
    c.nonnegative(w.shear_exponent, "wind.shear_exponent");
    c.nonnegative(w.capital_cost, "wind.capital_cost");
    c.nonnegative(w.om_cost, "wind.om_cost");
    c.positive(w.lifetime_years, "wind.lifetime_years");
}

void check_diesel(Checker& c, const DieselSpec& dg)
{
    c.nonnegative(dg.capacity_kw, "diesel.capacity_kw");
    c.nonnegative(dg.capital_cost, "diesel.capital_cost");
    c.nonnegative(dg.om_cost, "diesel.om_cost");
    if (std::isnan(dg.fuel_cost_per_kwh))
        c.require(false, "diesel.fuel_cost_per_kwh", "is required");
    else
        c.nonnegative(dg.fuel_cost_per_kwh, "diesel.fuel_cost_per_kwh");
    c.require(std::isfinite(dg.min_loading_fraction) && dg.min_loading_fraction >= 0.0 &&
                  dg.min_loading_fraction <= 1.0,
              "diesel.min_loading_fraction", "must satisfy 0 <= x <= 1");
}

void check_battery(Checker& c, const BatterySpec& b)
{
    c.nonnegative(b.capacity_kwh, "battery.capacity_kwh");
    c.unit_interval_open_closed(b.roundtrip_efficiency, "battery.roundtrip_efficiency");
    c.unit_interval_open_closed(b.depth_of_discharge, "battery.depth_of_discharge");
    const bool band_ok = std::isfinite(b.soc_min) && std::isfinite(b.soc_max) && 0.0 <= b.soc_min &&
                         b.soc_min < b.soc_max && b.soc_max <= 1.0;
    c.require(band_ok, "battery.soc_band", "must satisfy 0 <= soc_min < soc_max <= 1");
    if (band_ok && std::isfinite(b.depth_of_discharge))
        c.require(b.soc_max - b.soc_min <= b.depth_of_discharge + 1e-12, "battery.soc_band",
                  "soc_max - soc_min must not exceed depth_of_discharge");
    c.nonnegative(b.max_charge_kw, "battery.max_charge_kw");
    c.nonnegative(b.max_discharge_kw, "battery.max_discharge_kw");
    c.nonnegative(b.capital_cost, "battery.capital_cost");
    c.nonnegative(b.om_cost, "battery.om_cost");
    c.positive(b.lifetime_years, "battery.lifetime_years");
    if (b.initial_soc && band_ok)
        c.require(std::isfinite(*b.initial_soc) && *b.initial_soc >= b.soc_min &&
                      *b.initial_soc <= b.soc_max,
                  "battery.initial_soc", "must lie inside [soc_min, soc_max]");
}

void check_grid(Checker& c, const GridSpec& g)
{
    c.nonnegative(g.import_limit_kw, "grid.import_limit_kw");
    c.nonnegative(g.export_limit_kw, "grid.export_limit_kw");
    c.nonnegative(g.sell_price_ratio, "grid.sell_price_ratio");
}

void check_ems(Checker& c, const EmsConfig& e)
{
    const bool fixed = e.threshold_mode == ThresholdMode::FixedPrice;
    const bool pct = e.threshold_mode == ThresholdMode::PricePercentile;
    const bool load = e.threshold_mode == ThresholdMode::LoadThreshold;

    auto active = [&](const std::optional<double>& v, bool is_active, const std::string& path) {
        if (is_active) {
            c.require(v.has_value(), path, "is required in " + std::string(to_string(e.threshold_mode)) +
                                               " mode");
        } else {
            c.require(!v.has_value(), path,
                      "must not be set in " + std::string(to_string(e.threshold_mode)) + " mode");
        }
    };
    active(e.fixed_threshold, fixed, "ems.fixed_threshold");
    active(e.percentile, pct, "ems.percentile");
    active(e.load_threshold_kw, load, "ems.load_threshold_kw");

    if (fixed && e.fixed_threshold)
        c.nonnegative(*e.fixed_threshold, "ems.fixed_threshold");
    if (pct && e.percentile)
        c.require(std::isfinite(*e.percentile) && *e.percentile > 0.0 && *e.percentile < 1.0,
                  "ems.percentile", "must satisfy 0 < x < 1");
    if (load && e.load_threshold_kw)
        c.nonnegative(*e.load_threshold_kw, "ems.load_threshold_kw");
}

void check_economics(Checker& c, const EconomicsConfig& e)
{
    if (std::isnan(e.discount_rate))
        c.require(false, "economics.discount_rate", "is required");
    else
        c.nonnegative(e.discount_rate, "economics.discount_rate");
    c.require(e.project_lifetime_years >= 1, "economics.project_lifetime_years", "must be >= 1");
    c.unit_interval_open_closed(e.converter_efficiency, "economics.converter_efficiency");
    c.nonnegative(e.converter_capital_cost, "economics.converter_capital_cost");
}

void check_emissions(Checker& c, const EmissionFactors& f)
{
    for (Pollutant p : kPollutants) {
        const std::string name(to_string(p));
        c.nonnegative(at(f.dg, p), "emissions.dg_" + name);
        c.nonnegative(at(f.grid, p), "emissions.grid_" + name);
    }
}

} // namespace

ValidationReport validate_config(const MicrogridConfig& config)
{
    ValidationReport report;
    Checker c(report);
    check_pv(c, config.pv);
    check_wind(c, config.wind);
    check_diesel(c, config.diesel);
    check_battery(c, config.battery);
    check_grid(c, config.grid);
    check_ems(c, config.ems);
    check_economics(c, config.economics);
    check_emissions(c, config.emissions);
    c.positive(config.step_hours, "step_hours");
    return report;
}

} // namespace mgems
