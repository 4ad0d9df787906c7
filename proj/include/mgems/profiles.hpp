#pragma once

#include "mgems/model.hpp"

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace mgems {

/// One time step of exogenous state. Powers in kW, price in currency/kWh.
struct StepInput {
    std::size_t index = 0;
    double demand_kw = 0.0;
    double price = 0.0;
    bool grid_available = true;
    double pv_kw = 0.0;
    double wind_kw = 0.0;

    friend bool operator==(const StepInput&, const StepInput&) = default;
};

/// Raw weather row, converted to StepInput by resource_to_inputs().
struct ResourceRow {
    std::size_t index = 0;
    double demand_kw = 0.0;
    double price = 0.0;
    bool grid_available = true;
    double irradiance_wm2 = 0.0;
    double wind_speed_ms = 0.0;

    friend bool operator==(const ResourceRow&, const ResourceRow&) = default;
};

enum class ProfileMode { Generation, Resource };
enum class PriceUnit { Currency, Cents };

std::string_view to_string(ProfileMode mode);
std::string_view to_string(PriceUnit unit);

inline constexpr std::string_view kGenerationHeader = "index,demand_kw,price,grid_available,pv_kw,wind_kw";
inline constexpr std::string_view kResourceHeader =
    "index,demand_kw,price,grid_available,irradiance_wm2,wind_speed_ms";

/// Parse failure. line and column are 1-based; column is 0 for whole-row errors.
class ProfileError : public std::runtime_error {
public:
    ProfileError(std::size_t line, std::size_t column, std::string field, const std::string& what);

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }
    const std::string& field() const noexcept { return field_; }

private:
    std::size_t line_;
    std::size_t column_;
    std::string field_;
};

using ParsedProfile = std::variant<std::vector<StepInput>, std::vector<ResourceRow>>;

/// Parses a comma-separated profile. Records are renumbered 0..n-1 in file order;
/// prices given in cents are divided by 100.
ParsedProfile parse_profile(std::string_view text, ProfileMode mode, PriceUnit unit = PriceUnit::Currency);

std::vector<StepInput> parse_generation_profile(std::string_view text, PriceUnit unit = PriceUnit::Currency);
std::vector<ResourceRow> parse_resource_profile(std::string_view text, PriceUnit unit = PriceUnit::Currency);

/// Writes the profile back in the same format (currency prices, shortest round-trip numbers).
std::string serialize_profile(std::span<const StepInput> rows);
std::string serialize_profile(std::span<const ResourceRow> rows);

/// Derated PV output for a global horizontal irradiance, clamped at 1000 W/m2.
double pv_power(double irradiance_wm2, const PvSpec& spec);

/// Hub-height shear correction followed by a cubic power curve with hard cut-out.
double wind_power(double speed_ms, const WindSpec& spec);

double hub_height_speed(double speed_ms, const WindSpec& spec);

std::vector<StepInput> resource_to_inputs(std::span<const ResourceRow> rows, const MicrogridConfig& config);

} // namespace mgems
