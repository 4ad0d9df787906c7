#include "mgems/report_io.hpp"

#include "mgems/format.hpp"

namespace mgems {

std::string trace_csv(std::span<const StepInput> inputs, std::span<const StepResult> trace, double threshold)
{
    if (inputs.size() != trace.size())
        throw std::invalid_argument("trace_csv: inputs and trace differ in length");
    std::string out(kTraceHeader);
    out += '\n';
    const std::string thr = format_number(threshold);
    for (std::size_t i = 0; i < trace.size(); ++i) {
        const auto& in = inputs[i];
        const auto& d = trace[i].decision;
        const auto& s = trace[i].state;
        out += std::to_string(in.index);
        for (double v : {in.demand_kw, in.price}) {
            out += ',';
            out += format_number(v);
        }
        out += in.grid_available ? ",1" : ",0";
        for (double v : {in.pv_kw, in.wind_kw, d.pv_used_kw, d.wind_used_kw, d.curtailed_kw, d.battery_charge_kw,
                         d.battery_discharge_kw, d.dg_kw, d.grid_import_kw, d.grid_export_kw, d.unserved_kw}) {
            out += ',';
            out += format_number(v);
        }
        out += ',';
        out += to_string(d.mode);
        out += ',' + format_number(s.soc) + ',' + format_number(s.energy_kwh) + ',' + thr + '\n';
    }
    return out;
}

namespace {

nlohmann::ordered_json optional_number(const std::optional<double>& v)
{
    return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

} // namespace

nlohmann::ordered_json report_json(const SimulationReport& r)
{
    using json = nlohmann::ordered_json;
    json j;
    j["schema_version"] = kReportSchemaVersion;
    j["horizon"] = {
        {"steps", r.steps},
        {"step_hours", r.step_hours},
        {"annualization_factor", r.annualization_factor},
        {"threshold", r.threshold},
    };
    const auto& e = r.energy;
    j["energy_totals"] = {
        {"imported_kwh", e.imported_kwh},
        {"exported_kwh", e.exported_kwh},
        {"dg_kwh", e.dg_kwh},
        {"pv_kwh", e.pv_kwh},
        {"wind_kwh", e.wind_kwh},
        {"battery_charge_kwh", e.battery_charge_kwh},
        {"battery_discharge_kwh", e.battery_discharge_kwh},
        {"served_kwh", e.served_kwh},
        {"unserved_kwh", e.unserved_kwh},
        {"curtailed_kwh", e.curtailed_kwh},
    };
    j["reliability_stats"] = {
        {"outage_count", r.reliability.outage_count},
        {"outage_hours", r.reliability.outage_hours},
        {"uptime_fraction", r.reliability.uptime_fraction},
    };
    j["economic_summary"] = {
        {"operating_cost", r.economics.operating_cost},
        {"capex", r.economics.capex},
        {"npc", r.economics.npc},
        {"lcoe", optional_number(r.economics.lcoe)},
        {"renewable_fraction", optional_number(r.economics.renewable_fraction)},
    };
    json em = json::object();
    for (Pollutant p : kPollutants)
        em[std::string(to_string(p))] = at(r.emissions.net_kg, p);
    j["emission_summary"] = {{"net_kg", em}};
    return j;
}

std::string report_text(const SimulationReport& report)
{
    return report_json(report).dump(2) + '\n';
}

namespace {

std::string csv_quote(const std::string& s)
{
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += "\"\"";
        else if (c == '\n' || c == '\r')
            out += ' ';
        else
            out += c;
    }
    return out + '"';
}

} // namespace

std::string matrix_csv(const std::map<std::string, ScenarioOutcome>& outcomes)
{
    const auto metrics = delta_metric_names();
    std::string out = "scenario,status";
    for (const auto& m : metrics)
        out += ",delta_pct_" + m;
    out += ",error\n";
    for (const auto& [name, o] : outcomes) {
        if (name == kBaseScenarioName)
            continue;
        out += name;
        out += o.ok() ? ",ok" : ",error";
        for (const auto& m : metrics) {
            out += ',';
            if (!o.ok())
                continue;
            const auto it = o.deltas.find(m);
            out += (it != o.deltas.end() && it->second) ? format_number(*it->second) : "n/a";
        }
        out += ',';
        if (!o.ok())
            out += csv_quote(o.error);
        out += '\n';
    }
    return out;
}

} // namespace mgems
