#include "gridcap/metrics.hpp"
#include "gridcap/scenario.hpp"

#include "fixtures.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <sstream>

using namespace gridcap;
namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct Exec {
    int code;
    std::string out;
    std::string err;
};

/// Runs the gridcap executable, capturing both streams through files.
Exec run_cli(const std::string& args, const std::string& env = {})
{
    static int counter = 0;
    const auto dir = fixtures::scratch_dir("exec_" + std::to_string(counter++));
    const auto out = dir / "stdout.txt";
    const auto err = dir / "stderr.txt";
    const std::string cmd = env + (env.empty() ? "" : " ") + "\"" + GRIDCAP_CLI + "\" " + args + " >\"" + out.string() +
                            "\" 2>\"" + err.string() + "\"";
    const int status = std::system(cmd.c_str());
    const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return {code, read_file(out), read_file(err)};
}

std::string quoted(const fs::path& p) { return "\"" + p.string() + "\""; }

std::string scn(const std::string& name) { return quoted(fixtures::scenario_path(name)); }

class Pipeline : public ::testing::Test {
protected:
    static void SetUpTestSuite()
    {
        dataset_ = new fs::path(fixtures::scratch_dir("pipeline_dataset"));
        data::write_system_inputs(fixtures::micro_dataset(), *dataset_);
    }
    static void TearDownTestSuite()
    {
        delete dataset_;
        dataset_ = nullptr;
    }
    static std::string dataset() { return quoted(*dataset_); }

    static fs::path* dataset_;
};

fs::path* Pipeline::dataset_ = nullptr;

} // namespace

TEST(Executable, ValidatesBundledToyDataset)
{
    const auto r = run_cli("validate --dataset " + quoted(fixtures::source_dir() / "data" / "toy") + " --scenario " +
                           scn("ref") + " --scenario " + scn("ze_h2_demand"));
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("rows"), std::string::npos);
    EXPECT_NE(r.out.find("scenario ref: ok"), std::string::npos);
}

TEST(Executable, UsageErrorExitCode)
{
    EXPECT_EQ(run_cli("").code, 1);
    EXPECT_EQ(run_cli("plan").code, 1);
    EXPECT_EQ(run_cli("frobnicate").code, 1);
}

TEST_F(Pipeline, UnknownSolverFromEnvironment)
{
    const auto out = fixtures::scratch_dir("pipeline_env");
    const auto r = run_cli("plan --dataset " + dataset() + " --scenario " + scn("ze") + " --out " + quoted(out),
                           "GRIDCAP_SOLVER=nosuch");
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("nosuch"), std::string::npos);
}

TEST_F(Pipeline, PlanReportCompareDispatch)
{
    const auto out = fixtures::scratch_dir("pipeline_out");
    auto r = run_cli("plan --dataset " + dataset() + " --scenario " + scn("ref") + " --scenario " + scn("ze") +
                     " --scenario " + scn("ze_h2_demand") + " --jobs 3 --system-lcoh --out " + quoted(out));
    ASSERT_EQ(r.code, 0) << r.err;

    const auto ref = scenario::load_result(out / "ref" / "result.json");
    const auto ze = scenario::load_result(out / "ze" / "result.json");
    const auto h2 = scenario::load_result(out / "ze_h2_demand" / "result.json");
    ASSERT_TRUE(ref.optimal() && ze.optimal() && h2.optimal());
    EXPECT_LE(ref.objective, ze.objective * (1 + 1e-8));
    EXPECT_LE(ze.objective, h2.objective * (1 + 1e-8));
    EXPECT_LE(ze.emissions_tonnes, 1e-6 * std::max(1.0, ref.emissions_tonnes));
    EXPECT_GT(h2.h2_demand_mwh, 0.0);

    // The system-delta LCOH comes from the baseline solved alongside.
    ASSERT_TRUE(fs::exists(out / "ze_h2_demand" / "baseline_result.json"));
    const auto report = nlohmann::json::parse(read_file(out / "ze_h2_demand" / "report.json"));
    ASSERT_TRUE(report.contains("metrics"));
    const auto base = scenario::load_result(out / "ze_h2_demand" / "baseline_result.json");
    const double expected = metrics::compute_lcoh_system(h2, base);
    EXPECT_NEAR(report["metrics"]["lcoh_system_usd_per_mwh"].get<double>(), expected, 1e-6 * std::abs(expected));

    const auto rep = fixtures::scratch_dir("pipeline_report");
    r = run_cli("report --result " + quoted(out / "ze_h2_demand" / "result.json") + " --baseline " +
                quoted(out / "ze_h2_demand" / "baseline_result.json") + " --out " + quoted(rep));
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(read_file(rep / "ze_h2_demand" / "report.json"), read_file(out / "ze_h2_demand" / "report.json"));

    r = run_cli("compare --result " + quoted(out / "ref" / "report.json") + " --result " +
                quoted(out / "ze" / "result.json") + " --out " + quoted(out));
    ASSERT_EQ(r.code, 0) << r.err;
    const auto table = read_file(out / "compare.csv");
    EXPECT_EQ(table.rfind("# gridcap-compare/1", 0), 0u);
    EXPECT_NE(table.find("metric,base,scenario,base_value,value,delta,percent_change"), std::string::npos);

    r = run_cli("dispatch --dataset " + dataset() + " --scenario " + scn("ze") + " --result " +
                quoted(out / "ze" / "result.json") + " --out " + quoted(out));
    ASSERT_EQ(r.code, 0) << r.err;
    const auto dispatch = nlohmann::json::parse(read_file(out / "ze" / "dispatch.json"));
    EXPECT_EQ(dispatch["hours"].get<int>(), 8760);
    EXPECT_GE(dispatch["unserved_percent"].get<double>(), 0.0);

    r = run_cli("dispatch --dataset " + dataset() + " --scenario " + scn("ze") + " --result " +
                quoted(out / "ze" / "result.json") + " --scale 0.5 --out " + quoted(out));
    ASSERT_EQ(r.code, 0) << r.err;
    const auto halved = nlohmann::json::parse(read_file(out / "ze" / "dispatch.json"));
    EXPECT_GT(halved["unserved_percent"].get<double>(), 0.0);
}

TEST_F(Pipeline, InfeasibleScenarioReportsDiagnostic)
{
    const auto dir = fixtures::scratch_dir("pipeline_stuck");
    const auto scenario_file = dir / "stuck.json";
    std::ofstream(scenario_file) << R"({
  "name": "stuck",
  "emission_cap": {"mode": "absolute", "tonnes": 0},
  "tech_flags": {"vre_gen": false, "fossil_generation": false, "dac": false},
  "reserve": {"enabled": false}
})";
    const auto r = run_cli("plan --dataset " + dataset() + " --scenario " + quoted(scenario_file) + " --out " +
                           quoted(dir / "out"));
    EXPECT_EQ(r.code, 2) << r.err;
    EXPECT_NE(r.err.find("infeasible"), std::string::npos) << r.err;
    EXPECT_NE(r.err.find("balance"), std::string::npos) << r.err;
}

TEST_F(Pipeline, ExportMpsIsStableAcrossProcesses)
{
    const auto a = fixtures::scratch_dir("pipeline_mps_a");
    const auto b = fixtures::scratch_dir("pipeline_mps_b");
    const std::string args = "export-mps --dataset " + dataset() + " --scenario " + scn("ze_h2_demand") + " --out ";
    ASSERT_EQ(run_cli(args + quoted(a)).code, 0);
    ASSERT_EQ(run_cli(args + quoted(b), "GRIDCAP_SOLVER=simplex").code, 0);
    EXPECT_EQ(read_file(a / "ze_h2_demand.mps"), read_file(b / "ze_h2_demand.mps"));
}
