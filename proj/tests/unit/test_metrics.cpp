#include "gridcap/errors.hpp"
#include "gridcap/metrics.hpp"

#include "fixtures.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

using namespace gridcap;
using namespace gridcap::metrics;
using data::Kind;

namespace {

std::string read_file(const std::filesystem::path& p)
{
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::size_t count_lines(const std::string& text)
{
    return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

/// One zone, flat load, a clean generator at a constant 20 $/MWh and an
/// electrolyzer candidate.
std::shared_ptr<model::ModelInputs> clean_system(double h2_mw)
{
    auto in = std::make_shared<model::ModelInputs>(fixtures::blank_inputs(1, 1, 4, 1, 100.0));
    in->projects.push_back(fixtures::thermal("clean", 0, 0.0, 20.0));
    model::ProjectInput ely;
    ely.id = "ely";
    ely.kind = Kind::p2g;
    ely.technology = "electrolyzer";
    ely.candidate = true;
    ely.efficiency = 0.7;
    ely.annual_capex = 50000.0;
    ely.fixed_om = 5000.0;
    in->projects.push_back(ely);
    if (h2_mw > 0.0) in->h2_load = {std::vector<double>(in->num_timepoints(), h2_mw)};
    return in;
}

} // namespace

TEST(Lcoe, FlatLoadExample) { EXPECT_DOUBLE_EQ(compute_lcoe(8760.0, 8760.0), 1.0); }

TEST(Lcoe, ZeroDemandIsAnError) { EXPECT_THROW(compute_lcoe(100.0, 0.0), ValidationError); }

TEST(Lcoe, FromResult)
{
    auto in = std::make_shared<model::ModelInputs>(fixtures::blank_inputs(1, 1, 24, 1, 1.0));
    auto gen = fixtures::thermal("gen", 0, 0.0, 1.0);
    gen.candidate = false;
    gen.existing = 5.0;
    in->projects.push_back(gen);
    const auto r = scenario::run_inputs("flat", in);
    ASSERT_TRUE(r.optimal());
    EXPECT_NEAR(compute_lcoe(r), 1.0, 1e-12);
}

TEST(Lcoh, ConventionalZeroCapex)
{
    EXPECT_NEAR(compute_lcoh_conventional(0.0, 40.0, 0.0, 1000.0, 0.70, LcohMode::eq2), 57.142857, 1e-5);
    EXPECT_NEAR(compute_lcoh_conventional(0.0, 40.0, 500.0, 1000.0, 0.70, LcohMode::eq1), 57.142857, 1e-5);
}

TEST(Lcoh, Eq1MatchesEq2WithoutPowerSectorHydrogen)
{
    for (double cap : {0.0, 1e5, 3e7}) {
        EXPECT_NEAR(compute_lcoh_conventional(cap, 35.0, 0.0, 2e5, 0.65, LcohMode::eq1),
                    compute_lcoh_conventional(cap, 35.0, 0.0, 2e5, 0.65, LcohMode::eq2), 1e-9);
    }
}

TEST(Lcoh, AffineInCapacityCost)
{
    const double a = compute_lcoh_conventional(1e6, 40.0, 0.0, 1e4, 0.7, LcohMode::eq2);
    const double b = compute_lcoh_conventional(2e6, 40.0, 0.0, 1e4, 0.7, LcohMode::eq2);
    const double c = compute_lcoh_conventional(3e6, 40.0, 0.0, 1e4, 0.7, LcohMode::eq2);
    EXPECT_NEAR(b - a, c - b, 1e-9);
    EXPECT_NEAR(b - a, 100.0, 1e-9);
}

TEST(Lcoh, Errors)
{
    EXPECT_THROW(compute_lcoh_conventional(1.0, 40.0, 10.0, 0.0, 0.7, LcohMode::eq2), ValidationError);
    EXPECT_THROW(compute_lcoh_conventional(1.0, 40.0, 0.0, 10.0, 0.0, LcohMode::eq1), ValidationError);
    EXPECT_THROW(compute_lcoh_system(10.0, 5.0, 0.0), ValidationError);
}

TEST(Lcoh, SystemDelta) { EXPECT_DOUBLE_EQ(compute_lcoh_system(1500.0, 1000.0, 10.0), 50.0); }

TEST(Lcoh, PerKilogram)
{
    EXPECT_NEAR(usd_per_mwh_to_usd_per_kg(58.0), 1.9333, 1e-4);
    EXPECT_NEAR(usd_per_kg_to_usd_per_mwh(usd_per_mwh_to_usd_per_kg(58.0)), 58.0, 1e-12);
}

TEST(GrayLcoh, Examples)
{
    EXPECT_NEAR(compute_gray_lcoh({387.0, 0.0, 1.0, 1.0}), 44.18, 0.005);
    EXPECT_NEAR(compute_gray_lcoh({0.0, 13.68, 0.7, 1.0}), 66.68, 0.01);
    EXPECT_DOUBLE_EQ(compute_gray_lcoh({0.0, 0.0, 0.7, 1.0}), 0.0);
    EXPECT_THROW(compute_gray_lcoh({1.0, 1.0, 0.0, 1.0}), ValidationError);
}

TEST(Units, HydrogenConversions)
{
    EXPECT_NEAR(convert_h2(124, H2Unit::megatonne, H2Unit::twh), 4133.3, 0.05);
    EXPECT_NEAR(convert_h2(1, H2Unit::mwh, H2Unit::kg), 30.0, 1e-9);
    EXPECT_NEAR(convert_h2(1, H2Unit::kg, H2Unit::mj), 120.0, 1e-9);
    EXPECT_NEAR(convert_h2(convert_h2(12.5, H2Unit::kg, H2Unit::mwh), H2Unit::mwh, H2Unit::kg), 12.5, 1e-12);
    EXPECT_NEAR(convert_h2(2.0, "Mt", "TWh"), convert_h2(2.0, H2Unit::megatonne, H2Unit::twh), 1e-9);
    EXPECT_THROW(convert_h2(1.0, "barrel", "kg"), ValidationError);
    for (auto u : {H2Unit::kg, H2Unit::tonne, H2Unit::gj, H2Unit::twh}) {
        const auto parsed = parse_h2_unit(to_string(u));
        ASSERT_TRUE(parsed);
        EXPECT_EQ(*parsed, u);
    }
}

TEST(CostReport, SystemLcohMatchesEq2OnDecoupledToy)
{
    const auto base = scenario::run_inputs("base", clean_system(0.0));
    const auto with = scenario::run_inputs("with", clean_system(70.0));
    ASSERT_TRUE(base.optimal());
    ASSERT_TRUE(with.optimal());
    const auto rep = make_cost_report(with, &base);
    ASSERT_TRUE(rep.lcoh_system && rep.lcoh_eq2 && rep.lcoh_eq1);
    EXPECT_LE(fixtures::rel_diff(*rep.lcoh_system, *rep.lcoh_eq2), 1e-6);
    // 20 / 0.7 for electricity plus (50000 + 5000) x 100 MW over 70 MW x 8760 h.
    EXPECT_NEAR(*rep.lcoh_system, 20.0 / 0.7 + 55000.0 * 100.0 / (70.0 * 8760.0), 1e-6);
    EXPECT_NEAR(*rep.lcoh_eq1, *rep.lcoh_eq2 + (rep.lcoe - 20.0) / 0.7, 1e-6);
}

TEST(CostReport, CategoriesSumToObjective)
{
    const auto r = scenario::run_scenario(fixtures::bundled("ze_h2_demand"), fixtures::micro_dataset());
    ASSERT_TRUE(r.optimal()) << r.message;
    const auto rep = make_cost_report(r);
    EXPECT_LE(fixtures::rel_diff(rep.breakdown.total(), rep.objective), 1e-9);
    ASSERT_TRUE(rep.cost_of_energy);
    EXPECT_NEAR(*rep.cost_of_energy, rep.breakdown.total() / (rep.demand_mwh + rep.hd_mwh), 1e-9);
    EXPECT_FALSE(rep.lcoh_system);
}

TEST(CostReport, NeedsOptimalResult)
{
    scenario::ScenarioResult r;
    r.status = lp::Status::infeasible;
    EXPECT_THROW(make_cost_report(r), ValidationError);
}

TEST(Report, FilesAndDeterminism)
{
    const auto r = scenario::run_inputs("with", clean_system(70.0));
    ASSERT_TRUE(r.optimal());
    const auto rep = make_cost_report(r);
    const auto a = fixtures::scratch_dir("report_a");
    const auto b = fixtures::scratch_dir("report_b");
    const auto files = emit_report(r, rep, a);
    emit_report(r, rep, b);
    EXPECT_EQ(files.size(), 7u);
    for (const auto& f : files) EXPECT_EQ(read_file(f), read_file(b / f.filename())) << f.filename();

    const auto capacity = read_file(a / "capacity.csv");
    EXPECT_EQ(count_lines(capacity), 1 + data::kAllKinds.size() * r.zones.size());

    const auto c = fixtures::scratch_dir("report_c");
    emit_report(r, rep, c, {true});
    const auto filtered = read_file(c / "capacity.csv");
    EXPECT_EQ(count_lines(filtered), 3u);
    EXPECT_NE(filtered.find(",p2g,"), std::string::npos);
}

TEST(Report, CompareTable)
{
    const auto base = scenario::run_inputs("low", clean_system(35.0));
    const auto high = scenario::run_inputs("high", clean_system(70.0));
    ASSERT_TRUE(base.optimal() && high.optimal());
    const auto da = fixtures::scratch_dir("compare_a");
    const auto db = fixtures::scratch_dir("compare_b");
    emit_report(base, make_cost_report(base), da);
    emit_report(high, make_cost_report(high), db);
    const auto va = load_report_values(da / "report.json");
    const auto vb = load_report_values(db / "report.json");
    EXPECT_EQ(va.scenario, "low");
    const auto table = compare_reports({va, vb});
    EXPECT_EQ(table.rfind(std::string("# ") + kCompareSchema, 0), 0u);
    EXPECT_NE(table.find("costs.investment,low,high,"), std::string::npos) << table;
    EXPECT_THROW(compare_reports({va}), ValidationError);
}
