#include "gridcap/errors.hpp"
#include "gridcap/scenario.hpp"

#include "fixtures.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

using namespace gridcap;
using namespace gridcap::scenario;
using data::Kind;

namespace {

const model::ProjectInput& find(const model::ModelInputs& in, const std::string& id)
{
    const auto it = std::find_if(in.projects.begin(), in.projects.end(), [&](const auto& p) { return p.id == id; });
    if (it == in.projects.end()) throw std::runtime_error("no project " + id);
    return *it;
}

const model::CapacityGroup* group(const model::ModelInputs& in, const std::string& name)
{
    for (const auto& g : in.groups) {
        if (g.name == name) return &g;
    }
    return nullptr;
}

std::string minimal(const std::string& extra)
{
    return R"({"name": "t")" + std::string(extra.empty() ? "" : ", ") + extra + "}";
}

/// One zone, four 6-hour timepoints, flat 100 MW load.
std::shared_ptr<model::ModelInputs> tiny_system()
{
    auto in = std::make_shared<model::ModelInputs>(fixtures::blank_inputs(1, 1, 4, 6, 100.0));
    return in;
}

} // namespace

TEST(Parse, BundledLibraryLoads)
{
    const auto names = library_names();
    EXPECT_GE(names.size(), 20u);
    for (const auto& n : names) {
        const auto c = load_scenario(fixtures::scenario_path(n));
        EXPECT_EQ(c.name, n);
        const auto again = parse_scenario(to_json(c));
        EXPECT_EQ(to_json(again), to_json(c)) << n;
    }
}

TEST(Parse, Defaults)
{
    const auto c = parse_scenario(minimal(""));
    EXPECT_EQ(c.emission_cap.mode, EmissionCap::Mode::none);
    EXPECT_FALSE(c.decoupled);
    EXPECT_FALSE(c.blue_h2);
    EXPECT_TRUE(c.reserve.enabled);
    EXPECT_DOUBLE_EQ(c.reserve.margin, 0.15);
    EXPECT_EQ(c.layout, Layout::representative);
}

TEST(Parse, RejectsUnknownKeysAndBadTypes)
{
    EXPECT_THROW(parse_scenario(minimal(R"("colour": 1)")), ValidationError);
    EXPECT_THROW(parse_scenario(minimal(R"("blue_h2": "yes")")), ValidationError);
    EXPECT_THROW(parse_scenario(minimal(R"("coupling": "loose")")), ValidationError);
    EXPECT_THROW(parse_scenario(minimal(R"("emission_cap": {"mode": "soft"})")), ValidationError);
    EXPECT_THROW(parse_scenario(minimal(R"("network_expansion": {"steam": false})")), ValidationError);
    EXPECT_THROW(parse_scenario("{not json"), ValidationError);
    EXPECT_THROW(parse_scenario(R"({"description": "nameless"})"), ValidationError);
}

TEST(Validate, Contradictions)
{
    EXPECT_THROW(parse_scenario(minimal(R"("blue_h2": true, "tech_flags": {"ccs": false})")), ValidationError);
    EXPECT_THROW(parse_scenario(minimal(R"("blue_h2": true, "tech_flags": {"fossil_h2": false})")), ValidationError);
    EXPECT_THROW(parse_scenario(minimal(R"("coupling": "decoupled")")), ValidationError);
    EXPECT_THROW(parse_scenario(minimal(R"("cap_scope": "zonal")")), ValidationError);
    EXPECT_THROW(parse_scenario(minimal(R"("h2_demand": {"annual_twh": 1}, "tech_flags": {"hydrogen": false})")),
                 ValidationError);
    EXPECT_THROW(parse_scenario(minimal(R"("nuclear_min_gen": 1.5)")), ValidationError);
    EXPECT_THROW(parse_scenario(minimal(R"("emission_cap": {"mode": "absolute", "tonnes": -1})")), ValidationError);
    EXPECT_THROW(parse_scenario(minimal(R"("capacity_caps": [{"name": "x", "members": [], "mw": 1}])")),
                 ValidationError);
    EXPECT_NO_THROW(parse_scenario(minimal(R"("blue_h2": true, "h2_demand": {"annual_twh": 1})")));
}

TEST(Library, ZeroEmissionBaseline)
{
    const auto c = fixtures::bundled("ze");
    EXPECT_EQ(c.emission_cap.mode, EmissionCap::Mode::absolute);
    EXPECT_DOUBLE_EQ(c.emission_cap.tonnes, 0.0);
    EXPECT_FALSE(c.tech_flags.at("fossil_generation"));
    EXPECT_EQ(c.tech_flags.count("hydrogen"), 0u);
    EXPECT_DOUBLE_EQ(c.h2_demand.annual_twh, 0.0);
    const auto nuc = std::find_if(c.capacity_caps.begin(), c.capacity_caps.end(),
                                  [](const auto& cap) { return cap.name == "nuclear"; });
    ASSERT_NE(nuc, c.capacity_caps.end());
    EXPECT_DOUBLE_EQ(nuc->mw, 120000.0);

    const auto in = apply_scenario(c, fixtures::mini_dataset());
    ASSERT_TRUE(in.carbon_cap);
    EXPECT_DOUBLE_EQ(*in.carbon_cap, 0.0);
    EXPECT_TRUE(in.h2_load.empty());
    EXPECT_FALSE(find(in, "gascc_w").candidate);
    EXPECT_TRUE(find(in, "p2g_e").candidate);
    EXPECT_TRUE(find(in, "cavern_e").candidate);
    EXPECT_FALSE(find(in, "smr_w").candidate);
}

TEST(Library, WithoutHydrogen)
{
    const auto in = apply_scenario(fixtures::bundled("ze_wo_h2"), fixtures::mini_dataset());
    for (const auto& p : in.projects) {
        if (data::is_hydrogen_kind(p.kind)) EXPECT_FALSE(p.candidate) << p.id;
    }
    EXPECT_TRUE(find(in, "battery_e").candidate);
}

TEST(Library, NuclearSensitivity)
{
    const auto c = fixtures::bundled("ze_nuclear");
    ASSERT_TRUE(c.nuclear_min_gen);
    EXPECT_DOUBLE_EQ(*c.nuclear_min_gen, 0.5);
    const auto in = apply_scenario(c, fixtures::mini_dataset());
    EXPECT_DOUBLE_EQ(find(in, "nuclear_w").min_gen_fraction, 0.5);
    const auto* g = group(in, "nuclear");
    ASSERT_NE(g, nullptr);
    EXPECT_DOUBLE_EQ(g->max_new, 500000.0 - find(in, "nuclear_w").existing);
}

TEST(Library, FractionOfBaseCap)
{
    auto ds = fixtures::mini_dataset();
    const auto in = apply_scenario(fixtures::bundled("r80"), ds);
    ASSERT_TRUE(in.carbon_cap);
    EXPECT_NEAR(*in.carbon_cap, 0.2 * *ds.settings.base_year_emissions_tonnes, 1e-6);
    ds.settings.base_year_emissions_tonnes.reset();
    EXPECT_THROW(apply_scenario(fixtures::bundled("r80"), ds), ValidationError);
}

TEST(Library, FrozenNetwork)
{
    const auto in = apply_scenario(fixtures::bundled("ze_wo_new_grid"), fixtures::mini_dataset());
    for (const auto& l : in.links) {
        if (l.commodity == data::Commodity::electricity) EXPECT_FALSE(l.expandable) << l.id;
        if (l.commodity == data::Commodity::hydrogen) EXPECT_TRUE(l.expandable) << l.id;
    }
}

TEST(Library, HydrogenDemandProfile)
{
    const auto c = fixtures::bundled("ze_h2_demand");
    const auto ds = fixtures::mini_dataset();
    const auto in = apply_scenario(c, ds);
    ASSERT_EQ(in.h2_load.size(), in.num_zones());
    double total = 0.0;
    std::vector<double> per_zone(in.num_zones(), 0.0);
    for (std::size_t z = 0; z < in.num_zones(); ++z) {
        for (std::size_t t = 0; t < in.num_timepoints(); ++t) per_zone[z] += in.scale(static_cast<int>(t)) * in.h2_load[z][t];
        total += per_zone[z];
    }
    EXPECT_NEAR(total, c.h2_demand.annual_twh * 1e6, 1e-6 * total);
    EXPECT_NEAR(per_zone[0] / total, ds.h2_shares.at("east"), 1e-9);
}

TEST(Library, DecoupledFleet)
{
    const auto in = apply_scenario(fixtures::bundled("ze_h2_demand_decouple"), fixtures::mini_dataset());
    EXPECT_TRUE(in.h2_decoupled);
    const auto& clone = find(in, "p2g_e_hta");
    EXPECT_TRUE(clone.industrial);
    EXPECT_DOUBLE_EQ(clone.existing, 0.0);
    EXPECT_DOUBLE_EQ(clone.reserve_credit, 0.0);
    EXPECT_THROW(find(in, "fuelcell_e_hta"), std::runtime_error);
}

TEST(Forbids, GroupsAndDefaults)
{
    const auto ds = fixtures::mini_dataset();
    const auto& smr = ds.projects[static_cast<std::size_t>(ds.project_index("smr_w"))];
    const auto& gas = ds.projects[static_cast<std::size_t>(ds.project_index("gascc_w"))];
    const auto& dac = ds.projects[static_cast<std::size_t>(ds.project_index("dac_e"))];
    const auto& ely = ds.projects[static_cast<std::size_t>(ds.project_index("p2g_e"))];
    const auto ze = fixtures::bundled("ze");
    EXPECT_TRUE(forbids(ze, smr));
    EXPECT_TRUE(forbids(ze, gas));
    EXPECT_TRUE(forbids(ze, dac));
    EXPECT_FALSE(forbids(ze, ely));
    const auto blue = fixtures::bundled("ze_h2_demand_blue");
    EXPECT_FALSE(forbids(blue, smr));
    EXPECT_FALSE(forbids(blue, dac));
    EXPECT_TRUE(forbids(fixtures::bundled("ze_wo_h2"), ely));
    // Technology keys win over group keys.
    auto c = parse_scenario(minimal(R"("tech_flags": {"hydrogen": false, "electrolyzer": true})"));
    EXPECT_FALSE(forbids(c, ely));
}

TEST(Consistency, ForbiddenCandidateIsRejected)
{
    const auto ds = fixtures::mini_dataset();
    auto in = apply_scenario(fixtures::bundled("ze_h2_demand_blue"), ds);
    const auto ze = fixtures::bundled("ze_h2_demand");
    EXPECT_THROW(check_consistency(ze, in), ValidationError);
    in = apply_scenario(ze, ds);
    EXPECT_NO_THROW(check_consistency(ze, in));
}

TEST(Consistency, CostOverride)
{
    const auto ds = fixtures::mini_dataset();
    auto c = fixtures::bundled("ze");
    const auto base = apply_scenario(c, ds);
    c.cost_overrides.push_back({"electrolyzer", std::nullopt, std::nullopt, std::nullopt, std::nullopt, std::nullopt,
                                2.0, 1.0, 0.6});
    const auto in = apply_scenario(c, ds);
    EXPECT_NEAR(find(in, "p2g_e").annual_capex, 2.0 * find(base, "p2g_e").annual_capex, 1e-6);
    EXPECT_DOUBLE_EQ(find(in, "p2g_e").efficiency, 0.6);
    EXPECT_DOUBLE_EQ(find(in, "battery_e").annual_capex, find(base, "battery_e").annual_capex);
}

TEST(Run, CheapCoalServesEverything)
{
    auto in = tiny_system();
    auto coal = fixtures::thermal("coal", 0, 1000.0, 1.0);
    coal.emission_factor = 0.1;
    in->projects.push_back(coal);
    in->projects.push_back(fixtures::vre("solar", 0, 500000.0, {0.0, 1.0, 1.0, 0.0}));
    const auto r = run_inputs("coal", in);
    ASSERT_TRUE(r.optimal());
    EXPECT_NEAR(r.projects[0].annual_output, 100.0 * 8760.0, 1e-3);
    EXPECT_NEAR(r.projects[1].new_capacity, 0.0, 1e-9);
    EXPECT_GT(r.emissions_tonnes, 0.0);
}

TEST(Run, BatteryMustSpanTheNight)
{
    auto in = tiny_system();
    in->projects.push_back(fixtures::vre("solar", 0, 50000.0, {0.0, 1.0, 1.0, 0.0}));
    auto bat = fixtures::storage("bat", 0, Kind::battery, 10000.0, 1000.0, 0.95, 0.95);
    in->projects.push_back(bat);
    in->carbon_cap = 0.0;
    auto r = run_inputs("night", in);
    ASSERT_TRUE(r.optimal());
    EXPECT_GT(r.projects[1].new_capacity, 99.0);

    in->projects[1].candidate = false;
    r = run_inputs("night", in);
    EXPECT_EQ(r.status, lp::Status::infeasible);
    EXPECT_FALSE(r.message.empty());
}

TEST(Run, DeterministicSerialization)
{
    const auto ds = fixtures::micro_dataset();
    const auto c = fixtures::bundled("ze");
    const auto a = run_scenario(c, ds);
    const auto b = run_scenario(c, ds);
    ASSERT_TRUE(a.optimal()) << a.message;
    EXPECT_EQ(to_json(a), to_json(b));
    const auto back = result_from_json(to_json(a));
    EXPECT_EQ(to_json(back), to_json(a));
}

TEST(Run, ConservationOnMicro)
{
    const auto r = run_scenario(fixtures::bundled("ze_h2_demand"), fixtures::micro_dataset());
    ASSERT_TRUE(r.optimal()) << r.message;
    EXPECT_LE(check_conservation(*r.inputs, *r.assembly, r.solution.x).worst(), 1e-6);
    EXPECT_GT(r.h2_demand_mwh, 0.0);
    const auto costs = compute_costs(*r.inputs, *r.assembly, r.solution.x);
    EXPECT_LE(fixtures::rel_diff(costs.total(), r.objective), 1e-9);
}

TEST(Dispatch, OverbuiltSystemServesAll)
{
    auto in = fixtures::blank_inputs(1, 1, 24, 1, 100.0);
    auto gas = fixtures::thermal("gas", 0, 0.0, 10.0);
    gas.candidate = false;
    gas.existing = 150.0;
    in.projects.push_back(gas);
    const auto rep = dispatch_inputs(in);
    ASSERT_EQ(rep.status, lp::Status::optimal);
    EXPECT_NEAR(rep.unserved_percent, 0.0, 1e-9);
    EXPECT_NEAR(rep.demand_mwh, 876000.0, 1e-6);

    DispatchOptions half;
    half.generation_scale = 0.5;
    const auto short_rep = dispatch_inputs(in, half);
    ASSERT_EQ(short_rep.status, lp::Status::optimal);
    EXPECT_NEAR(short_rep.unserved_percent, 25.0, 1e-6);
}

TEST(Dispatch, CapExcessIsReportedNotThrown)
{
    auto in = fixtures::blank_inputs(1, 1, 4, 1, 100.0);
    auto gas = fixtures::thermal("gas", 0, 0.0, 10.0);
    gas.candidate = false;
    gas.existing = 150.0;
    gas.emission_factor = 0.05;
    in.projects.push_back(gas);
    in.carbon_cap = 0.0;
    const auto rep = dispatch_inputs(in);
    ASSERT_EQ(rep.status, lp::Status::optimal);
    EXPECT_GT(rep.cap_excess_tonnes + rep.unserved_mwh, 0.0);
}

TEST(Conservation, DetectsBrokenSolution)
{
    auto in = tiny_system();
    in->projects.push_back(fixtures::thermal("gas", 0, 1000.0, 1.0));
    auto r = run_inputs("gas", in);
    ASSERT_TRUE(r.optimal());
    auto x = r.solution.x;
    EXPECT_LE(check_conservation(*in, *r.assembly, x).worst(), 1e-9);
    x[static_cast<std::size_t>(r.assembly->projects[0].activity[0].index)] += 5.0;
    EXPECT_GT(check_conservation(*in, *r.assembly, x).power, 1e-3);
}
