#include "gridcap/cli.hpp"
#include "gridcap/scenario.hpp"

#include "fixtures.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

using namespace gridcap;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run(const std::vector<std::string>& args)
{
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run_command(args, out, err);
    return {code, out.str(), err.str()};
}

std::string read_file(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// The micro dataset on disk, written once per process.
const fs::path& micro_dir()
{
    static const fs::path dir = [] {
        auto d = fixtures::scratch_dir("cli_micro");
        data::write_system_inputs(fixtures::micro_dataset(), d);
        return d;
    }();
    return dir;
}

fs::path write_scenario(const std::string& name, const std::string& json)
{
    const auto path = fixtures::scratch_dir("cli_scn_" + name) / (name + ".json");
    std::ofstream(path) << json;
    return path;
}

std::string scn(const std::string& name) { return fixtures::scenario_path(name).string(); }

} // namespace

TEST(Cli, NoSubcommandIsUsageError) { EXPECT_EQ(run({}).code, cli::kValidation); }

TEST(Cli, UnknownOptionIsUsageError)
{
    EXPECT_EQ(run({"plan", "--dataset", micro_dir().string(), "--frobnicate"}).code, cli::kValidation);
}

TEST(Cli, HelpIsOk) { EXPECT_EQ(run({"--help"}).code, cli::kOk); }

TEST(Cli, ValidateDataset)
{
    const auto r = run({"validate", "--dataset", micro_dir().string(), "--scenario", scn("ze")});
    EXPECT_EQ(r.code, cli::kOk) << r.err;
    EXPECT_NE(r.out.find("projects.csv"), std::string::npos);
    EXPECT_NE(r.out.find("scenario ze: ok"), std::string::npos);
}

TEST(Cli, ValidateMissingDataset)
{
    const auto r = run({"validate", "--dataset", "/nonexistent/gridcap"});
    EXPECT_EQ(r.code, cli::kValidation);
    EXPECT_NE(r.err.find("validation error"), std::string::npos);
}

TEST(Cli, BadScenarioFile)
{
    const auto path = write_scenario("bad", R"({"name": "bad", "blue_h2": true, "tech_flags": {"ccs": false}})");
    const auto r = run({"validate", "--dataset", micro_dir().string(), "--scenario", path.string()});
    EXPECT_EQ(r.code, cli::kValidation);
    EXPECT_NE(r.err.find("blue_h2"), std::string::npos);
}

TEST(Cli, UnknownSolver)
{
    const auto out = fixtures::scratch_dir("cli_solver");
    const auto r = run({"plan", "--dataset", micro_dir().string(), "--scenario", scn("ze"), "--solver", "cplex", "--out",
                        out.string()});
    EXPECT_EQ(r.code, cli::kValidation);
}

TEST(Cli, ExportMpsIsDeterministic)
{
    const auto a = fixtures::scratch_dir("cli_mps_a");
    const auto b = fixtures::scratch_dir("cli_mps_b");
    ASSERT_EQ(run({"export-mps", "--dataset", micro_dir().string(), "--scenario", scn("ze"), "--out", a.string()}).code,
              cli::kOk);
    ASSERT_EQ(run({"export-mps", "--dataset", micro_dir().string(), "--scenario", scn("ze"), "--out", b.string()}).code,
              cli::kOk);
    const auto text = read_file(a / "ze.mps");
    EXPECT_FALSE(text.empty());
    EXPECT_EQ(text, read_file(b / "ze.mps"));
}

TEST(Cli, PlanReportCompare)
{
    const auto out = fixtures::scratch_dir("cli_plan");
    auto r = run({"plan", "--dataset", micro_dir().string(), "--scenario", scn("ze"), "--scenario", scn("r80"), "--out",
                  out.string()});
    ASSERT_EQ(r.code, cli::kOk) << r.err;
    EXPECT_NE(r.out.find("ze: optimal"), std::string::npos);
    for (const char* f : {"result.json", "capacity.csv", "energy.csv", "storage.csv", "trade.csv", "costs.csv",
                          "report.csv", "report.json"}) {
        EXPECT_TRUE(fs::exists(out / "ze" / f)) << f;
    }

    const auto again = fixtures::scratch_dir("cli_report");
    r = run({"report", "--result", (out / "ze" / "result.json").string(), "--out", again.string()});
    ASSERT_EQ(r.code, cli::kOk) << r.err;
    EXPECT_EQ(read_file(again / "ze" / "report.json"), read_file(out / "ze" / "report.json"));

    r = run({"compare", "--result", (out / "ze" / "report.json").string(), "--result",
             (out / "r80" / "report.json").string(), "--out", out.string()});
    ASSERT_EQ(r.code, cli::kOk) << r.err;
    EXPECT_NE(read_file(out / "compare.csv").find("costs.total,ze,r80"), std::string::npos);

    r = run({"compare", "--result", (out / "ze" / "report.json").string(), "--out", out.string()});
    EXPECT_EQ(r.code, cli::kValidation);
}

TEST(Cli, InfeasiblePlanExitCode)
{
    const auto path = write_scenario("stuck", R"({
  "name": "stuck",
  "emission_cap": {"mode": "absolute", "tonnes": 0},
  "tech_flags": {"vre_gen": false, "fossil_generation": false, "dac": false}
})");
    const auto out = fixtures::scratch_dir("cli_stuck");
    const auto r = run({"plan", "--dataset", micro_dir().string(), "--scenario", path.string(), "--out", out.string()});
    EXPECT_EQ(r.code, cli::kInfeasible) << r.err;
    EXPECT_NE(r.err.find("infeasible"), std::string::npos);
    const auto saved = scenario::load_result(out / "stuck" / "result.json");
    EXPECT_EQ(saved.status, lp::Status::infeasible);
}

TEST(Cli, DuplicateScenarioNames)
{
    const auto out = fixtures::scratch_dir("cli_dup");
    const auto r = run({"plan", "--dataset", micro_dir().string(), "--scenario", scn("ze"), "--scenario", scn("ze"),
                        "--out", out.string()});
    EXPECT_EQ(r.code, cli::kValidation);
}
