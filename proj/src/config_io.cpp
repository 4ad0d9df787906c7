#include "mgems/config_io.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace mgems {

ConfigError::ConfigError(std::string path, const std::string& what)
    : std::runtime_error(path.empty() ? what : path + ": " + what), path_(std::move(path))
{
}

namespace {

namespace pt = boost::property_tree;

std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

double parse_double(std::string_view text, const std::string& path)
{
    text = trim(text);
    double v = 0.0;
    const auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc{} || p != text.data() + text.size() || !std::isfinite(v))
        throw ConfigError(path, "not a finite number: '" + std::string(text) + "'");
    return v;
}

long long parse_integer(std::string_view text, const std::string& path)
{
    text = trim(text);
    long long v = 0;
    const auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc{} || p != text.data() + text.size())
        throw ConfigError(path, "not an integer: '" + std::string(text) + "'");
    return v;
}

bool parse_bool(std::string_view text, const std::string& path)
{
    text = trim(text);
    if (text == "true" || text == "1")
        return true;
    if (text == "false" || text == "0")
        return false;
    throw ConfigError(path, "expected true/false, got '" + std::string(text) + "'");
}

std::vector<double> parse_list(std::string_view text, const std::string& path)
{
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto comma = text.find(',', start);
        if (comma == std::string_view::npos)
            comma = text.size();
        out.push_back(parse_double(text.substr(start, comma - start), path));
        start = comma + 1;
    }
    return out;
}

/// Binds keys of one INI section to setters and rejects keys nobody claimed.
class SectionReader {
public:
    SectionReader(const pt::ptree& section, std::string name) : section_(section), name_(std::move(name)) {}

    void number(const std::string& key, double& target)
    {
        handlers_[key] = [this, &target, key](const std::string& v) { target = parse_double(v, path(key)); };
    }

    void optional_number(const std::string& key, std::optional<double>& target)
    {
        handlers_[key] = [this, &target, key](const std::string& v) { target = parse_double(v, path(key)); };
    }

    void custom(const std::string& key, std::function<void(const std::string&, const std::string&)> fn)
    {
        handlers_[key] = [this, fn = std::move(fn), key](const std::string& v) { fn(v, path(key)); };
    }

    void run() const
    {
        for (const auto& [key, child] : section_) {
            const auto it = handlers_.find(key);
            if (it == handlers_.end())
                throw ConfigError(path(key), "unknown key");
            it->second(child.get_value<std::string>());
        }
    }

    std::string path(const std::string& key) const { return name_ + "." + key; }

private:
    const pt::ptree& section_;
    std::string name_;
    std::map<std::string, std::function<void(const std::string&)>> handlers_;
};

void read_pv(const pt::ptree& s, PvSpec& pv)
{
    SectionReader r(s, "pv");
    r.number("capacity_kw", pv.capacity_kw);
    r.number("derating_factor", pv.derating_factor);
    r.number("capital_cost", pv.capital_cost);
    r.number("replacement_cost", pv.replacement_cost);
    r.number("om_cost", pv.om_cost);
    r.number("lifetime_years", pv.lifetime_years);
    r.run();
}

void read_wind(const pt::ptree& s, WindSpec& w)
{
    SectionReader r(s, "wind");
    r.number("capacity_kw", w.capacity_kw);
    r.number("unit_rated_kw", w.unit_rated_kw);
    r.number("cut_in_ms", w.cut_in_ms);
    r.number("cut_out_ms", w.cut_out_ms);
    r.number("rated_speed_ms", w.rated_speed_ms);
    r.number("hub_height_m", w.hub_height_m);
    r.number("anemometer_height_m", w.anemometer_height_m);
    r.number("shear_exponent", w.shear_exponent);
    r.number("capital_cost", w.capital_cost);
    r.number("om_cost", w.om_cost);
    r.number("lifetime_years", w.lifetime_years);
    r.run();
}

void read_diesel(const pt::ptree& s, DieselSpec& dg)
{
    SectionReader r(s, "diesel");
    r.number("capacity_kw", dg.capacity_kw);
    r.number("capital_cost", dg.capital_cost);
    r.number("om_cost", dg.om_cost);
    r.number("fuel_cost_per_kwh", dg.fuel_cost_per_kwh);
    r.number("min_loading_fraction", dg.min_loading_fraction);
    r.run();
}

void read_battery(const pt::ptree& s, BatterySpec& b)
{
    SectionReader r(s, "battery");
    r.number("capacity_kwh", b.capacity_kwh);
    r.number("roundtrip_efficiency", b.roundtrip_efficiency);
    r.number("depth_of_discharge", b.depth_of_discharge);
    r.number("soc_min", b.soc_min);
    r.number("soc_max", b.soc_max);
    r.number("max_charge_kw", b.max_charge_kw);
    r.number("max_discharge_kw", b.max_discharge_kw);
    r.number("capital_cost", b.capital_cost);
    r.number("om_cost", b.om_cost);
    r.number("lifetime_years", b.lifetime_years);
    r.optional_number("initial_soc", b.initial_soc);
    r.run();
}

void read_grid(const pt::ptree& s, GridSpec& g)
{
    SectionReader r(s, "grid");
    r.number("import_limit_kw", g.import_limit_kw);
    r.number("export_limit_kw", g.export_limit_kw);
    r.number("sell_price_ratio", g.sell_price_ratio);
    r.run();
}

void read_ems(const pt::ptree& s, EmsConfig& e)
{
    SectionReader r(s, "ems");
    r.custom("threshold_mode", [&](const std::string& v, const std::string& path) {
        const auto mode = threshold_mode_from_string(trim(v));
        if (!mode)
            throw ConfigError(path, "expected fixed-price, price-percentile or load-threshold, got '" + v + "'");
        e.threshold_mode = *mode;
    });
    r.optional_number("fixed_threshold", e.fixed_threshold);
    r.optional_number("percentile", e.percentile);
    r.optional_number("load_threshold_kw", e.load_threshold_kw);
    r.run();
}

void read_economics(const pt::ptree& s, EconomicsConfig& e)
{
    SectionReader r(s, "economics");
    r.number("discount_rate", e.discount_rate);
    r.custom("project_lifetime_years", [&](const std::string& v, const std::string& path) {
        const long long years = parse_integer(v, path);
        if (years < 1 || years > 1000)
            throw ConfigError(path, "must lie in [1, 1000]");
        e.project_lifetime_years = static_cast<int>(years);
    });
    r.number("converter_efficiency", e.converter_efficiency);
    r.number("converter_capital_cost", e.converter_capital_cost);
    r.run();
}

void bind_factors(SectionReader& r, EmissionFactors& f)
{
    for (Pollutant p : kPollutants) {
        std::string name(to_string(p));
        for (auto& c : name)
            c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        r.number("dg_" + name, at(f.dg, p));
        r.number("grid_" + name, at(f.grid, p));
    }
    r.custom("export_offset_enabled",
             [&](const std::string& v, const std::string& path) { f.export_offset_enabled = parse_bool(v, path); });
}

pt::ptree read_ini(std::string_view text, const std::string& origin)
{
    pt::ptree tree;
    std::istringstream in{std::string(text)};
    try {
        pt::ini_parser::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        std::ostringstream os;
        os << "line " << e.line() << ": " << e.message();
        throw ConfigError(origin, os.str());
    }
    return tree;
}

std::string slurp(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError(path.string(), "cannot open file");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void read_emissions(const pt::ptree& s, EmissionFactors& f, const std::filesystem::path& base_dir)
{
    // A reference factor set may come from a separate file; keys in this
    // section override it.
    if (const auto file = s.get_optional<std::string>(pt::ptree::path_type("factors_file", '\0'))) {
        const auto path = base_dir / std::string(trim(*file));
        const auto tree = read_ini(slurp(path), path.string());
        for (const auto& [name, section] : tree) {
            if (name != "emissions")
                throw ConfigError(path.string(), "unexpected section [" + name + "]");
            SectionReader r(section, "emissions");
            bind_factors(r, f);
            r.run();
        }
    }
    SectionReader r(s, "emissions");
    bind_factors(r, f);
    r.custom("factors_file", [](const std::string&, const std::string&) {});
    r.run();
}

void read_simulation(const pt::ptree& s, MicrogridConfig& c, PriceUnit& unit)
{
    SectionReader r(s, "simulation");
    r.number("step_hours", c.step_hours);
    r.custom("price_unit", [&](const std::string& v, const std::string& path) {
        const auto t = trim(v);
        if (t == "currency")
            unit = PriceUnit::Currency;
        else if (t == "cents")
            unit = PriceUnit::Cents;
        else
            throw ConfigError(path, "expected currency or cents, got '" + v + "'");
    });
    r.run();
}

Scenario read_scenario(const pt::ptree& s, const std::string& section_name, const std::string& name)
{
    Scenario sc;
    sc.id = ScenarioId::Custom;
    sc.name = name;
    std::optional<double> start;
    std::optional<double> steps;
    SectionReader r(s, section_name);
    r.number("demand_multiplier", sc.demand_multiplier);
    r.number("pv_multiplier", sc.pv_multiplier);
    r.number("wind_multiplier", sc.wind_multiplier);
    r.number("fuel_price_multiplier", sc.fuel_price_multiplier);
    r.custom("outage_start", [&](const std::string& v, const std::string& path) {
        const auto n = parse_integer(v, path);
        if (n < 0)
            throw ConfigError(path, "must be >= 0");
        start = static_cast<double>(n);
    });
    r.custom("outage_steps", [&](const std::string& v, const std::string& path) {
        const auto n = parse_integer(v, path);
        if (n < 1)
            throw ConfigError(path, "must be >= 1");
        steps = static_cast<double>(n);
    });
    r.custom("price_series", [&](const std::string& v, const std::string& path) {
        sc.price_series = parse_list(v, path);
    });
    r.run();
    if (start.has_value() != steps.has_value())
        throw ConfigError(section_name, "outage_start and outage_steps must be given together");
    if (start)
        sc.outage_window = OutageWindow{static_cast<std::size_t>(*start), static_cast<std::size_t>(*steps)};
    return sc;
}

} // namespace

LoadedConfig parse_config(std::string_view text, const std::filesystem::path& base_dir)
{
    const auto tree = read_ini(text, "config");
    LoadedConfig out;
    auto& c = out.config;
    constexpr std::string_view kScenarioPrefix = "scenario.";

    for (const auto& [name, section] : tree) {
        if (name == "pv")
            read_pv(section, c.pv);
        else if (name == "wind")
            read_wind(section, c.wind);
        else if (name == "diesel")
            read_diesel(section, c.diesel);
        else if (name == "battery")
            read_battery(section, c.battery);
        else if (name == "grid")
            read_grid(section, c.grid);
        else if (name == "ems")
            read_ems(section, c.ems);
        else if (name == "economics")
            read_economics(section, c.economics);
        else if (name == "emissions")
            read_emissions(section, c.emissions, base_dir);
        else if (name == "simulation")
            read_simulation(section, c, out.price_unit);
        else if (name.starts_with(kScenarioPrefix) && name.size() > kScenarioPrefix.size()) {
            const std::string scenario_name = name.substr(kScenarioPrefix.size());
            if (scenario_name == kBaseScenarioName || builtin_id_from_string(scenario_name))
                throw ConfigError(name, "scenario name is reserved");
            out.scenarios.push_back(read_scenario(section, name, scenario_name));
        } else if (!section.empty() || !section.data().empty()) {
            // Top-level keys outside a section, or an unknown section.
            throw ConfigError(name, section.empty() ? "key outside any section" : "unknown section");
        }
    }
    return out;
}

LoadedConfig load_config_file(const std::filesystem::path& path)
{
    return parse_config(slurp(path), path.parent_path());
}

} // namespace mgems
