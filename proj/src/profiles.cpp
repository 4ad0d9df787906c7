#include "mgems/profiles.hpp"

#include "mgems/format.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <sstream>

namespace mgems {

std::string_view to_string(ProfileMode mode)
{
    return mode == ProfileMode::Generation ? "generation" : "resource";
}

std::string_view to_string(PriceUnit unit)
{
    return unit == PriceUnit::Currency ? "currency" : "cents";
}

namespace {

std::string location(std::size_t line, std::size_t column)
{
    std::ostringstream os;
    os << "line " << line;
    if (column > 0)
        os << ", column " << column;
    return os.str();
}

} // namespace

ProfileError::ProfileError(std::size_t line, std::size_t column, std::string field, const std::string& what)
    : std::runtime_error(location(line, column) + (field.empty() ? "" : " (" + field + ")") + ": " + what),
      line_(line), column_(column), field_(std::move(field))
{
}

namespace {

constexpr std::size_t kColumns = 6;

std::string_view trim(std::string_view s)
{
    const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
    while (!s.empty() && is_space(s.front()))
        s.remove_prefix(1);
    while (!s.empty() && is_space(s.back()))
        s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_fields(std::string_view line)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            out.push_back(trim(line.substr(start)));
            break;
        }
        out.push_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
    return out;
}

/// Walks the text line by line, checks the header, hands each data row's fields to the callback.
template <class RowFn>
void for_each_row(std::string_view text, std::string_view header, RowFn&& on_row)
{
    // UTF-8 byte order mark
    if (text.starts_with("\xEF\xBB\xBF"))
        text.remove_prefix(3);

    std::size_t line_no = 0;
    bool seen_header = false;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos)
            nl = text.size();
        std::string_view line = text.substr(pos, nl - pos);
        pos = nl + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.remove_suffix(1);
        if (trim(line).empty())
            continue;

        if (!seen_header) {
            if (trim(line) != header)
                throw ProfileError(line_no, 0, "", "expected header '" + std::string(header) + "'");
            seen_header = true;
            continue;
        }
        auto fields = split_fields(line);
        if (fields.size() != kColumns) {
            std::ostringstream os;
            os << "expected " << kColumns << " fields, found " << fields.size();
            throw ProfileError(line_no, 0, "", os.str());
        }
        on_row(line_no, fields);
    }
    if (!seen_header)
        throw ProfileError(1, 0, "", "missing header row");
}

class RowReader {
public:
    RowReader(std::size_t line, const std::vector<std::string_view>& fields, std::string_view header)
        : line_(line), fields_(fields), names_(split_fields(header))
    {
    }

    std::size_t index(std::size_t col) const
    {
        const auto s = fields_[col];
        std::size_t v = 0;
        const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || p != s.data() + s.size() || s.empty())
            fail(col, "not a nonnegative integer: '" + std::string(s) + "'");
        return v;
    }

    double number(std::size_t col) const
    {
        const auto s = fields_[col];
        double v = 0.0;
        const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || p != s.data() + s.size() || s.empty() || !std::isfinite(v))
            fail(col, "not a finite number: '" + std::string(s) + "'");
        return v;
    }

    double nonnegative(std::size_t col) const
    {
        const double v = number(col);
        if (v < 0.0)
            fail(col, "must be >= 0, got " + std::string(fields_[col]));
        return v;
    }

    bool flag(std::size_t col) const
    {
        const auto s = fields_[col];
        if (s == "1")
            return true;
        if (s == "0")
            return false;
        fail(col, "expected 1 or 0, got '" + std::string(s) + "'");
    }

private:
    [[noreturn]] void fail(std::size_t col, const std::string& what) const
    {
        throw ProfileError(line_, col + 1, std::string(names_[col]), what);
    }

    std::size_t line_;
    const std::vector<std::string_view>& fields_;
    std::vector<std::string_view> names_;
};

double to_currency(double price, PriceUnit unit)
{
    return unit == PriceUnit::Cents ? price / 100.0 : price;
}

} // namespace

std::vector<StepInput> parse_generation_profile(std::string_view text, PriceUnit unit)
{
    std::vector<StepInput> rows;
    for_each_row(text, kGenerationHeader, [&](std::size_t line, const auto& fields) {
        RowReader r(line, fields, kGenerationHeader);
        StepInput in;
        r.index(0);
        in.index = rows.size();
        in.demand_kw = r.nonnegative(1);
        in.price = to_currency(r.nonnegative(2), unit);
        in.grid_available = r.flag(3);
        in.pv_kw = r.nonnegative(4);
        in.wind_kw = r.nonnegative(5);
        rows.push_back(in);
    });
    return rows;
}

std::vector<ResourceRow> parse_resource_profile(std::string_view text, PriceUnit unit)
{
    std::vector<ResourceRow> rows;
    for_each_row(text, kResourceHeader, [&](std::size_t line, const auto& fields) {
        RowReader r(line, fields, kResourceHeader);
        ResourceRow row;
        r.index(0);
        row.index = rows.size();
        row.demand_kw = r.nonnegative(1);
        row.price = to_currency(r.nonnegative(2), unit);
        row.grid_available = r.flag(3);
        row.irradiance_wm2 = r.nonnegative(4);
        row.wind_speed_ms = r.nonnegative(5);
        rows.push_back(row);
    });
    return rows;
}

ParsedProfile parse_profile(std::string_view text, ProfileMode mode, PriceUnit unit)
{
    if (mode == ProfileMode::Generation)
        return parse_generation_profile(text, unit);
    return parse_resource_profile(text, unit);
}

std::string serialize_profile(std::span<const StepInput> rows)
{
    std::string out(kGenerationHeader);
    out += '\n';
    for (const auto& r : rows) {
        out += std::to_string(r.index) + ',' + format_number(r.demand_kw) + ',' + format_number(r.price) + ',' +
               (r.grid_available ? "1" : "0") + ',' + format_number(r.pv_kw) + ',' + format_number(r.wind_kw) +
               '\n';
    }
    return out;
}

std::string serialize_profile(std::span<const ResourceRow> rows)
{
    std::string out(kResourceHeader);
    out += '\n';
    for (const auto& r : rows) {
        out += std::to_string(r.index) + ',' + format_number(r.demand_kw) + ',' + format_number(r.price) + ',' +
               (r.grid_available ? "1" : "0") + ',' + format_number(r.irradiance_wm2) + ',' +
               format_number(r.wind_speed_ms) + '\n';
    }
    return out;
}

double pv_power(double irradiance_wm2, const PvSpec& spec)
{
    if (!(irradiance_wm2 >= 0.0))
        throw std::invalid_argument("pv_power: irradiance must be >= 0");
    constexpr double kReferenceIrradiance = 1000.0;
    return spec.capacity_kw * spec.derating_factor * std::min(irradiance_wm2 / kReferenceIrradiance, 1.0);
}

double hub_height_speed(double speed_ms, const WindSpec& spec)
{
    if (spec.hub_height_m == spec.anemometer_height_m)
        return speed_ms;
    return speed_ms * std::pow(spec.hub_height_m / spec.anemometer_height_m, spec.shear_exponent);
}

double wind_power(double speed_ms, const WindSpec& spec)
{
    if (!(speed_ms >= 0.0))
        throw std::invalid_argument("wind_power: wind speed must be >= 0");
    const double v = hub_height_speed(speed_ms, spec);
    if (v < spec.cut_in_ms || v >= spec.cut_out_ms)
        return 0.0;
    if (v >= spec.rated_speed_ms)
        return spec.capacity_kw;
    const double ci3 = spec.cut_in_ms * spec.cut_in_ms * spec.cut_in_ms;
    const double r3 = spec.rated_speed_ms * spec.rated_speed_ms * spec.rated_speed_ms;
    return spec.capacity_kw * (v * v * v - ci3) / (r3 - ci3);
}

std::vector<StepInput> resource_to_inputs(std::span<const ResourceRow> rows, const MicrogridConfig& config)
{
    std::vector<StepInput> out;
    out.reserve(rows.size());
    for (const auto& r : rows) {
        StepInput in;
        in.index = r.index;
        in.demand_kw = r.demand_kw;
        in.price = r.price;
        in.grid_available = r.grid_available;
        in.pv_kw = pv_power(r.irradiance_wm2, config.pv);
        in.wind_kw = wind_power(r.wind_speed_ms, config.wind);
        out.push_back(in);
    }
    return out;
}

} // namespace mgems
