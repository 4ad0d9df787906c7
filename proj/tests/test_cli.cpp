#include "mgems/cli.hpp"

#include "mgems/report_io.hpp"
#include "support/fixtures.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <sstream>

using namespace mgems;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name)
{
    const auto p = fs::temp_directory_path() / ("mgems_cli_" + name);
    fs::remove_all(p);
    return p;
}

RunManifest fixture_manifest(const fs::path& out)
{
    RunManifest m;
    m.config_path = fx::data_dir() / "microgrid.ini";
    m.profile_path = fx::data_dir() / "community_day.csv";
    m.out_dir = out;
    return m;
}

struct Run {
    int code;
    std::string out;
    std::string err;
};

template <class Fn>
Run run(Fn fn, const RunManifest& m)
{
    std::ostringstream out, err;
    const int code = fn(m, out, err);
    return {code, out.str(), err.str()};
}

bool updating() { return std::getenv("MGEMS_UPDATE_GOLDEN") != nullptr; }

void check_golden(const fs::path& produced, const std::string& golden_name)
{
    const auto golden = fx::golden_dir() / golden_name;
    if (updating()) {
        fs::create_directories(golden.parent_path());
        fs::copy_file(produced, golden, fs::copy_options::overwrite_existing);
        return;
    }
    ASSERT_TRUE(fs::exists(golden)) << golden << " missing; rerun with MGEMS_UPDATE_GOLDEN=1";
    EXPECT_EQ(fx::read_text(produced), fx::read_text(golden)) << golden_name;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p)
{
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(fx::read_text(p));
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> f;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ','))
            f.push_back(cell);
        rows.push_back(f);
    }
    return rows;
}

} // namespace

TEST(CmdSimulate, FixtureMatchesGolden)
{
    const auto out = fresh_dir("simulate");
    const auto r = run(cmd_simulate, fixture_manifest(out));
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const auto rows = read_csv(out / "trace.csv");
    EXPECT_EQ(rows.size(), 25u);
    const auto report = nlohmann::json::parse(fx::read_text(out / "report.json"));
    EXPECT_EQ(report["schema_version"], kReportSchemaVersion);
    EXPECT_EQ(report["reliability_stats"]["uptime_fraction"], 1.0);
    EXPECT_TRUE(fs::exists(out / "manifest.json"));
    check_golden(out / "trace.csv", "simulate/trace.csv");
    check_golden(out / "report.json", "simulate/report.json");
}

TEST(CmdSimulate, TraceColumnsSumToReportTotals)
{
    const auto out = fresh_dir("sums");
    ASSERT_EQ(run(cmd_simulate, fixture_manifest(out)).code, kExitOk);
    const auto rows = read_csv(out / "trace.csv");
    const auto report = nlohmann::json::parse(fx::read_text(out / "report.json"));
    const auto& header = rows.front();
    auto column_sum = [&](const std::string& name) {
        const auto col = std::find(header.begin(), header.end(), name) - header.begin();
        double s = 0;
        for (std::size_t i = 1; i < rows.size(); ++i)
            s += std::stod(rows[i][col]);
        return s;
    };
    const auto& e = report["energy_totals"];
    EXPECT_NEAR(column_sum("grid_import_kw"), e["imported_kwh"].get<double>(), 1e-6);
    EXPECT_NEAR(column_sum("grid_export_kw"), e["exported_kwh"].get<double>(), 1e-6);
    EXPECT_NEAR(column_sum("dg_kw"), e["dg_kwh"].get<double>(), 1e-6);
    EXPECT_NEAR(column_sum("pv_kw"), e["pv_kwh"].get<double>(), 1e-6);
    EXPECT_NEAR(column_sum("wind_kw"), e["wind_kwh"].get<double>(), 1e-6);
    EXPECT_NEAR(column_sum("battery_charge_kw"), e["battery_charge_kwh"].get<double>(), 1e-6);
    EXPECT_NEAR(column_sum("battery_discharge_kw"), e["battery_discharge_kwh"].get<double>(), 1e-6);
    EXPECT_NEAR(column_sum("curtailed_kw"), e["curtailed_kwh"].get<double>(), 1e-6);
    EXPECT_NEAR(column_sum("unserved_kw"), e["unserved_kwh"].get<double>(), 1e-6);
    EXPECT_NEAR(column_sum("demand_kw") - column_sum("unserved_kw"), e["served_kwh"].get<double>(), 1e-6);
}

TEST(CmdSimulate, MissingProfileIsIoError)
{
    const auto out = fresh_dir("missing");
    auto m = fixture_manifest(out);
    m.profile_path = fx::data_dir() / "no_such_profile.csv";
    const auto r = run(cmd_simulate, m);
    EXPECT_EQ(r.code, kExitIo);
    EXPECT_NE(r.err.find("no_such_profile.csv"), std::string::npos);
    EXPECT_FALSE(fs::exists(out));
}

TEST(CmdSimulate, ZeroStepsIsEmptyHorizon)
{
    const auto out = fresh_dir("zero");
    auto m = fixture_manifest(out);
    m.steps = 0;
    const auto r = run(cmd_simulate, m);
    EXPECT_EQ(r.code, kExitValidation);
    EXPECT_NE(r.err.find("empty horizon"), std::string::npos);
    EXPECT_FALSE(fs::exists(out));
}

TEST(CmdSimulate, StepsTruncates)
{
    const auto out = fresh_dir("steps");
    auto m = fixture_manifest(out);
    m.steps = 6;
    ASSERT_EQ(run(cmd_simulate, m).code, kExitOk);
    EXPECT_EQ(read_csv(out / "trace.csv").size(), 7u);
}

TEST(CmdSimulate, InvalidConfigWritesNothing)
{
    const auto dir = fresh_dir("badcfg");
    fs::create_directories(dir);
    auto text = fx::read_text(fx::data_dir() / "microgrid.ini");
    text.replace(text.find("soc_min = 0.2"), 13, "soc_min = 0.9");
    text.replace(text.find("factors_file = "), 15, "factors_file = " + (fx::data_dir() / "").string());
    {
        std::ofstream(dir / "bad.ini") << text;
    }
    auto m = fixture_manifest(dir / "out");
    m.config_path = dir / "bad.ini";
    const auto r = run(cmd_simulate, m);
    EXPECT_EQ(r.code, kExitValidation);
    EXPECT_FALSE(fs::exists(dir / "out"));
}

TEST(CmdSimulate, ProfileErrorIsValidation)
{
    const auto dir = fresh_dir("badprofile");
    fs::create_directories(dir);
    std::ofstream(dir / "p.csv") << kGenerationHeader << "\n0,-5,0.1,1,0,0\n";
    auto m = fixture_manifest(dir / "out");
    m.profile_path = dir / "p.csv";
    const auto r = run(cmd_simulate, m);
    EXPECT_EQ(r.code, kExitValidation);
    EXPECT_NE(r.err.find("demand_kw"), std::string::npos);
    EXPECT_NE(r.err.find("line 2"), std::string::npos);
}

TEST(CmdSimulate, ResourceMode)
{
    const auto out = fresh_dir("resource");
    auto m = fixture_manifest(out);
    m.profile_path = fx::data_dir() / "community_day_resource.csv";
    m.mode = ProfileMode::Resource;
    ASSERT_EQ(run(cmd_simulate, m).code, kExitOk);
    EXPECT_EQ(read_csv(out / "trace.csv").size(), 25u);
}

TEST(CmdScenarios, TwoScenariosGiveThreeReports)
{
    const auto out = fresh_dir("s1s4");
    auto m = fixture_manifest(out);
    m.scenarios = {"S1", "S4"};
    ASSERT_EQ(run(cmd_scenarios, m).code, kExitOk);
    for (const char* name : {"base", "S1", "S4"}) {
        EXPECT_TRUE(fs::exists(out / name / "report.json")) << name;
        EXPECT_TRUE(fs::exists(out / name / "trace.csv")) << name;
    }
    EXPECT_FALSE(fs::exists(out / "S2"));
    const auto rows = read_csv(out / "matrix.csv");
    EXPECT_EQ(rows.size(), 3u);
}

TEST(CmdScenarios, AllMatchesGolden)
{
    const auto out = fresh_dir("all");
    auto m = fixture_manifest(out);
    m.scenarios = {"all"};
    m.jobs = 2;
    const auto r = run(cmd_scenarios, m);
    ASSERT_EQ(r.code, kExitOk) << r.err;
    for (const char* name : {"base", "S1", "S2", "S3", "S4", "evening_spike"})
        EXPECT_TRUE(fs::exists(out / name / "report.json")) << name;
    check_golden(out / "matrix.csv", "scenarios_all/matrix.csv");
    check_golden(out / "S3" / "trace.csv", "scenarios_all/S3_trace.csv");
}

TEST(CmdScenarios, UnknownScenario)
{
    const auto out = fresh_dir("unknown");
    auto m = fixture_manifest(out);
    m.scenarios = {"S9"};
    const auto r = run(cmd_scenarios, m);
    EXPECT_EQ(r.code, kExitValidation);
    EXPECT_NE(r.err.find("S9"), std::string::npos);
    EXPECT_FALSE(fs::exists(out));
}

TEST(CmdScenarios, OutageOverride)
{
    const auto out = fresh_dir("override");
    auto m = fixture_manifest(out);
    m.scenarios = {"S3"};
    m.outage_start = 2;
    m.outage_hours = 3;
    ASSERT_EQ(run(cmd_scenarios, m).code, kExitOk);
    const auto rows = read_csv(out / "S3" / "trace.csv");
    for (std::size_t i = 1; i < rows.size(); ++i)
        EXPECT_EQ(rows[i][3], (i - 1 >= 2 && i - 1 < 5) ? "0" : "1") << i;
}

TEST(CmdScenarios, FailingScenarioIsMarked)
{
    const auto out = fresh_dir("fail");
    auto m = fixture_manifest(out);
    m.scenarios = {"S1", "S3"};
    m.outage_start = 22;
    const auto r = run(cmd_scenarios, m);
    EXPECT_EQ(r.code, kExitValidation);
    EXPECT_TRUE(fs::exists(out / "S1" / "report.json"));
    EXPECT_FALSE(fs::exists(out / "S3"));
    EXPECT_NE(fx::read_text(out / "matrix.csv").find("S3,error,"), std::string::npos);
}

TEST(CmdValidate, ShippedFixture)
{
    auto m = fixture_manifest({});
    const auto r = run(cmd_validate, m);
    EXPECT_EQ(r.code, kExitOk) << r.err;
    EXPECT_NE(r.out.find("threshold: 0.2628 "), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("horizon 24 steps"), std::string::npos);
    EXPECT_NE(r.out.find("battery: 500 kWh"), std::string::npos);
}

TEST(CmdValidate, CentsConversionNoted)
{
    auto m = fixture_manifest({});
    m.config_path = fx::data_dir() / "microgrid_cents.ini";
    m.profile_path = fx::data_dir() / "community_day_cents.csv";
    const auto r = run(cmd_validate, m);
    EXPECT_EQ(r.code, kExitOk) << r.err;
    EXPECT_NE(r.out.find("(/100)"), std::string::npos) << r.out;
}

TEST(CmdValidate, InvertedBandIsOneViolationLine)
{
    const auto dir = fresh_dir("band");
    fs::create_directories(dir);
    auto text = fx::read_text(fx::data_dir() / "microgrid.ini");
    text.replace(text.find("soc_min = 0.2"), 13, "soc_min = 0.5");
    text.replace(text.find("soc_max = 0.8"), 13, "soc_max = 0.4");
    std::ofstream(dir / "c.ini") << text;
    fs::copy_file(fx::data_dir() / "emission_factors_reference.ini", dir / "emission_factors_reference.ini");
    auto m = fixture_manifest({});
    m.config_path = dir / "c.ini";
    const auto r = run(cmd_validate, m);
    EXPECT_EQ(r.code, kExitValidation);
    std::istringstream lines(r.err);
    std::string line;
    int violations = 0;
    while (std::getline(lines, line))
        if (line.starts_with("invalid "))
            ++violations;
    EXPECT_EQ(violations, 1) << r.err;
    EXPECT_NE(r.err.find("battery.soc_band"), std::string::npos);
}

TEST(CmdValidate, MissingConfig)
{
    auto m = fixture_manifest({});
    m.config_path = "/nonexistent/cfg.ini";
    const auto r = run(cmd_validate, m);
    EXPECT_EQ(r.code, kExitIo);
    EXPECT_NE(r.err.find("/nonexistent/cfg.ini"), std::string::npos);
}

TEST(Determinism, RepeatedRunsAreBitIdentical)
{
    for (bool scen : {false, true}) {
        const auto a = fresh_dir(scen ? "det_s_a" : "det_a");
        const auto b = fresh_dir(scen ? "det_s_b" : "det_b");
        auto ma = fixture_manifest(a);
        auto mb = fixture_manifest(b);
        if (scen) {
            ma.scenarios = mb.scenarios = {"all"};
            mb.jobs = 4;
        }
        const auto fn = scen ? cmd_scenarios : cmd_simulate;
        ASSERT_EQ(run(fn, ma).code, kExitOk);
        ASSERT_EQ(run(fn, mb).code, kExitOk);
        for (const auto& entry : fs::recursive_directory_iterator(a)) {
            if (!entry.is_regular_file() || entry.path().filename() == "manifest.json")
                continue;
            const auto rel = fs::relative(entry.path(), a);
            EXPECT_EQ(fx::read_text(entry.path()), fx::read_text(b / rel)) << rel;
        }
    }
}
