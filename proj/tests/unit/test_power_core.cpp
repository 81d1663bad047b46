#include "gridcap/formulas.hpp"
#include "gridcap/model.hpp"

#include "fixtures.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace gridcap;
using namespace gridcap::model;
using data::Kind;

namespace {

struct Run {
    Assembly a;
    lp::Solution s;

    double at(lp::Var v) const { return s.value(v); }
    double activity(std::size_t p, std::size_t t) const { return at(a.projects[p].activity[t]); }
    double capacity(const ModelInputs& in, std::size_t p) const
    {
        return a.projects[p].capacity(in.projects[p]).evaluate(s.x);
    }
};

Run solve_inputs(const ModelInputs& in)
{
    Run r{build_model(in), {}};
    r.s = lp::solve(r.a.model);
    return r;
}

ProjectInput existing_plant(const std::string& id, int zone, double mw, double vom = 1.0)
{
    auto p = fixtures::thermal(id, zone, 0.0, vom);
    p.candidate = false;
    p.existing = mw;
    return p;
}

} // namespace

TEST(Formulas, StorageStateChange)
{
    EXPECT_DOUBLE_EQ(gridcap::power_core::storage_state_change(0, 0, 0.9, 0.9, 1, 1), 0.0);
    EXPECT_NEAR(gridcap::power_core::storage_state_change(10, 0, 0.9, 0.9, 1, 1), 9.0, 1e-12);
    EXPECT_NEAR(gridcap::power_core::storage_state_change(0, 9, 0.9, 0.9, 1, 1), -10.0, 1e-12);
}

TEST(Formulas, DeliveredFlowAndReserve)
{
    EXPECT_NEAR(gridcap::power_core::delivered_flow(100, 0.053), 94.7, 1e-12);
    EXPECT_NEAR(gridcap::power_core::reserve_requirement(100, 0.15), 115.0, 1e-12);
}

TEST(Generators, MinimumGenerationBoundsFixedCapacity)
{
    auto in = fixtures::blank_inputs(1, 1, 4, 1, 50.0);
    auto coal = existing_plant("coal", 0, 100.0);
    coal.min_gen_fraction = 0.4;
    in.projects.push_back(coal);
    const auto a = build_model(in);
    for (auto v : a.projects[0].activity) {
        EXPECT_DOUBLE_EQ(a.model.variable(v).lower, 40.0);
        EXPECT_DOUBLE_EQ(a.model.variable(v).upper, 100.0);
    }
}

TEST(Generators, NuclearAtFullMinimumIsFixed)
{
    auto in = fixtures::blank_inputs(1, 1, 4, 1, 100.0);
    auto nuc = existing_plant("nuc", 0, 100.0);
    nuc.kind = Kind::nuclear;
    nuc.min_gen_fraction = 1.0;
    in.projects.push_back(nuc);
    const auto r = solve_inputs(in);
    ASSERT_TRUE(r.s.optimal());
    for (std::size_t t = 0; t < 4; ++t) EXPECT_NEAR(r.activity(0, t), 100.0, 1e-9);
}

TEST(Generators, MinimumGenerationWithNewCapacity)
{
    auto in = fixtures::blank_inputs(1, 1, 2, 1, 0.0);
    in.demand[0] = {100.0, 10.0};
    auto coal = fixtures::thermal("coal", 0, 1000.0, 1.0);
    coal.min_gen_fraction = 0.4;
    in.projects.push_back(coal);
    in.projects.push_back(fixtures::thermal("peaker", 0, 50000.0, 1.0));
    const auto r = solve_inputs(in);
    ASSERT_TRUE(r.s.optimal());
    const double cap = r.capacity(in, 0);
    for (std::size_t t = 0; t < 2; ++t) EXPECT_GE(r.activity(0, t) + 1e-7, 0.4 * cap);
    // Coal can be at most 10 / 0.4 = 25 MW so that it can still turn down to 10.
    EXPECT_NEAR(cap, 25.0, 1e-6);
}

TEST(Generators, RampLimitBetweenConsecutiveTimepoints)
{
    auto in = fixtures::blank_inputs(1, 1, 2, 1, 0.0);
    in.demand[0] = {100.0, 20.0};
    auto coal = existing_plant("coal", 0, 100.0, 1.0);
    coal.ramp_fraction = 0.3;
    in.projects.push_back(coal);
    in.projects.push_back(existing_plant("peaker", 0, 200.0, 100.0));
    const auto r = solve_inputs(in);
    ASSERT_TRUE(r.s.optimal());
    EXPECT_NEAR(r.activity(0, 1), 20.0, 1e-6);
    EXPECT_NEAR(r.activity(0, 0), 50.0, 1e-6);
    EXPECT_LE(std::abs(r.activity(0, 0) - r.activity(0, 1)), 30.0 + 1e-6);
}

TEST(Generators, VreLimitedByCapacityFactor)
{
    auto in = fixtures::blank_inputs(1, 1, 3, 1, 0.0);
    in.projects.push_back(fixtures::vre("wind", 0, 0.0, {0.2, 0.5, 1.0}));
    in.projects.back().candidate = false;
    in.projects.back().existing = 100.0;
    const auto a = build_model(in);
    EXPECT_DOUBLE_EQ(a.model.variable(a.projects[0].activity[0]).upper, 20.0);
    EXPECT_DOUBLE_EQ(a.model.variable(a.projects[0].activity[1]).upper, 50.0);
    EXPECT_DOUBLE_EQ(a.model.variable(a.projects[0].activity[2]).upper, 100.0);
}

TEST(Generators, HydroMonthlyBudget)
{
    auto in = fixtures::blank_inputs(1, 1, 4, 1, 100.0);
    auto hydro = existing_plant("hydro", 0, 100.0, 0.0);
    hydro.kind = Kind::hydro;
    hydro.hydro_cf.fill(0.5);
    in.projects.push_back(hydro);
    in.projects.push_back(existing_plant("gas", 0, 200.0, 50.0));
    const auto r = solve_inputs(in);
    ASSERT_TRUE(r.s.optimal());
    double hydro_mwh = 0.0;
    for (std::size_t t = 0; t < 4; ++t) hydro_mwh += in.scale(static_cast<int>(t)) * r.activity(0, t);
    EXPECT_NEAR(hydro_mwh, 0.5 * 100.0 * 8760.0, 1e-3);
}

TEST(Storage, RecursionHoldsAtOptimum)
{
    auto in = fixtures::blank_inputs(1, 2, 4, 1, 0.0);
    in.demand[0] = {10, 80, 10, 80, 20, 90, 20, 90};
    in.projects.push_back(fixtures::vre("solar", 0, 20000.0, {1, 0, 1, 0, 1, 0, 1, 0}));
    in.projects.push_back(fixtures::storage("bat", 0, Kind::battery, 5000.0, 1000.0, 0.9, 0.9));
    in.projects.push_back(existing_plant("gas", 0, 200.0, 200.0));
    const auto r = solve_inputs(in);
    ASSERT_TRUE(r.s.optimal());
    const auto& pv = r.a.projects[1];
    EXPECT_GT(r.capacity(in, 1), 1.0);
    for (int t = 0; t < 8; ++t) {
        const int prev = in.time.previous_in_horizon(t);
        const double delta = gridcap::power_core::storage_state_change(r.at(pv.charge[static_cast<std::size_t>(prev)]),
                                                              r.at(pv.activity[static_cast<std::size_t>(prev)]), 0.9,
                                                              0.9, 1.0, 1.0);
        EXPECT_NEAR(r.at(pv.state[static_cast<std::size_t>(t)]) - r.at(pv.state[static_cast<std::size_t>(prev)]), delta,
                    1e-6);
    }
}

TEST(Storage, IdleStateIsConstant)
{
    auto in = fixtures::blank_inputs(1, 1, 4, 1, 50.0);
    auto bat = fixtures::storage("bat", 0, Kind::battery, 0.0, 0.0, 0.9, 0.9);
    bat.candidate = false;
    bat.existing = 10.0;
    bat.duration_hours = 4.0;
    in.projects.push_back(bat);
    in.projects.push_back(existing_plant("gas", 0, 100.0, 1.0));
    const auto r = solve_inputs(in);
    ASSERT_TRUE(r.s.optimal());
    const auto& pv = r.a.projects[0];
    for (std::size_t t = 0; t < 4; ++t) {
        EXPECT_NEAR(r.at(pv.charge[t]), 0.0, 1e-9);
        EXPECT_NEAR(r.at(pv.activity[t]), 0.0, 1e-9);
    }
    for (std::size_t t = 1; t < 4; ++t) EXPECT_NEAR(r.at(pv.state[t]), r.at(pv.state[t - 1]), 1e-9);
}

TEST(Storage, FixedDurationTiesEnergyToPower)
{
    auto in = fixtures::blank_inputs(1, 1, 2, 1, 0.0);
    auto bat = fixtures::storage("bat", 0, Kind::battery, 100.0, 10.0, 1.0, 1.0);
    bat.duration_hours = 4.0;
    bat.existing = 5.0;
    in.projects.push_back(bat);
    const auto a = build_model(in);
    ProjectVars pv = a.projects[0];
    std::vector<double> x(a.model.num_vars(), 0.0);
    x[static_cast<std::size_t>(pv.new_capacity.index)] = 3.0;
    EXPECT_DOUBLE_EQ(pv.energy_capacity(in.projects[0]).evaluate(x), 32.0);
    EXPECT_FALSE(pv.new_energy.valid());
}

TEST(Transmission, LossyImport)
{
    auto in = fixtures::blank_inputs(2, 1, 1, 1, 0.0);
    in.demand[1] = {100.0};
    in.projects.push_back(existing_plant("gen", 0, 500.0, 1.0));
    in.links.push_back({"ac", data::Commodity::electricity, 0, 1, 0.053, 200.0, false, 0.0, 0.0});
    const auto r = solve_inputs(in);
    ASSERT_TRUE(r.s.optimal());
    const double flow = r.at(r.a.links[0].flow[0]);
    EXPECT_NEAR(flow, 100.0 / 0.947, 1e-6);
    EXPECT_NEAR(gridcap::power_core::delivered_flow(flow, 0.053), 100.0, 1e-6);
    EXPECT_NEAR(r.at(r.a.links[0].to_loss[0]), 0.053 * flow, 1e-6);
    EXPECT_NEAR(r.activity(0, 0), flow, 1e-6);
}

TEST(Transmission, ReverseFlowChargesTheFromSide)
{
    auto in = fixtures::blank_inputs(2, 1, 1, 1, 0.0);
    in.demand[0] = {49.35};
    in.projects.push_back(existing_plant("gen", 1, 500.0, 1.0));
    in.links.push_back({"ac", data::Commodity::electricity, 0, 1, 0.013, 200.0, false, 0.0, 0.0});
    const auto r = solve_inputs(in);
    ASSERT_TRUE(r.s.optimal());
    EXPECT_NEAR(r.at(r.a.links[0].flow[0]), -50.0, 1e-6);
    EXPECT_GE(r.at(r.a.links[0].from_loss[0]), 0.65 - 1e-6);
    EXPECT_NEAR(r.at(r.a.links[0].to_loss[0]), 0.0, 1e-6);
}

TEST(Transmission, IdleLinkHasNoLoss)
{
    auto in = fixtures::blank_inputs(2, 1, 1, 1, 50.0);
    in.projects.push_back(existing_plant("g0", 0, 100.0, 1.0));
    in.projects.push_back(existing_plant("g1", 1, 100.0, 1.0));
    in.links.push_back({"ac", data::Commodity::electricity, 0, 1, 0.05, 100.0, false, 0.0, 0.0});
    const auto r = solve_inputs(in);
    ASSERT_TRUE(r.s.optimal());
    EXPECT_NEAR(r.at(r.a.links[0].flow[0]), 0.0, 1e-9);
    EXPECT_NEAR(r.at(r.a.links[0].from_loss[0]), 0.0, 1e-9);
    EXPECT_NEAR(r.at(r.a.links[0].to_loss[0]), 0.0, 1e-9);
}

TEST(Balance, DacAndElectrolyzerLoads)
{
    auto in = fixtures::blank_inputs(1, 1, 1, 1, 100.0);
    in.projects.push_back(existing_plant("gen", 0, 500.0, 1.0));
    auto r = solve_inputs(in);
    ASSERT_TRUE(r.s.optimal());
    EXPECT_NEAR(r.activity(0, 0), 100.0, 1e-9);

    ProjectInput dac;
    dac.id = "dac";
    dac.kind = Kind::dac;
    dac.technology = "dac";
    dac.existing = 1.0;
    dac.ele_per_tonne = 1.5;
    in.projects.push_back(dac);
    in.sites.push_back({0, "onshore", lp::kInf, 0.0});
    in.carbon_cap = -in.scale(0);
    r = solve_inputs(in);
    ASSERT_TRUE(r.s.optimal());
    EXPECT_NEAR(r.activity(1, 0), 1.0, 1e-9);
    EXPECT_NEAR(r.activity(0, 0), 101.5, 1e-9);

    ProjectInput p2g;
    p2g.id = "ely";
    p2g.kind = Kind::p2g;
    p2g.technology = "ely";
    p2g.existing = 10.0;
    p2g.efficiency = 0.7;
    in.projects.push_back(p2g);
    in.h2_load = {{7.0}};
    r = solve_inputs(in);
    ASSERT_TRUE(r.s.optimal());
    EXPECT_NEAR(r.activity(2, 0), 10.0, 1e-9);
    EXPECT_NEAR(r.activity(0, 0), 111.5, 1e-9);
}

TEST(Reserve, FirmCapacityCoversMargin)
{
    auto in = fixtures::blank_inputs(1, 1, 4, 1, 0.0);
    in.demand[0] = {40, 100, 70, 60};
    auto gas = fixtures::thermal("gas", 0, 1000.0, 1.0);
    gas.reserve_credit = 1.0;
    in.projects.push_back(gas);
    in.reserve = {true, 0.15, false};
    const auto r = solve_inputs(in);
    ASSERT_TRUE(r.s.optimal());
    EXPECT_NEAR(r.capacity(in, 0), 115.0, 1e-6);
}

TEST(Reserve, ZeroCreditContributesNothing)
{
    auto in = fixtures::blank_inputs(1, 1, 1, 1, 100.0);
    auto wind = fixtures::vre("wind", 0, 1.0, {1.0});
    in.projects.push_back(wind);
    auto gas = fixtures::thermal("gas", 0, 1000.0, 100.0);
    gas.reserve_credit = 1.0;
    in.projects.push_back(gas);
    in.reserve = {true, 0.15, false};
    const auto r = solve_inputs(in);
    ASSERT_TRUE(r.s.optimal());
    EXPECT_NEAR(r.capacity(in, 1), 115.0, 1e-6);
    EXPECT_NEAR(r.activity(1, 0), 0.0, 1e-6);
}

TEST(Reserve, PartialCreditsAddUp)
{
    auto in = fixtures::blank_inputs(1, 1, 1, 1, 100.0);
    auto firm = existing_plant("firm", 0, 80.0, 50.0);
    firm.reserve_credit = 1.0;
    in.projects.push_back(firm);
    auto wind = fixtures::vre("wind", 0, 0.0, {1.0});
    wind.candidate = false;
    wind.existing = 70.0;
    wind.reserve_credit = 0.5;
    in.projects.push_back(wind);
    auto peaker = fixtures::thermal("peaker", 0, 1000.0, 100.0);
    peaker.reserve_credit = 1.0;
    in.projects.push_back(peaker);
    in.reserve = {true, 0.15, false};
    auto r = solve_inputs(in);
    ASSERT_TRUE(r.s.optimal());
    EXPECT_NEAR(r.capacity(in, 2), 0.0, 1e-6);

    in.projects[1].reserve_credit = 0.0;
    r = solve_inputs(in);
    ASSERT_TRUE(r.s.optimal());
    EXPECT_NEAR(r.capacity(in, 2), 35.0, 1e-6);
}

TEST(Reserve, ZonalRequirement)
{
    auto in = fixtures::blank_inputs(2, 1, 1, 1, 0.0);
    in.demand = {{100.0}, {50.0}};
    for (int z = 0; z < 2; ++z) {
        auto gas = fixtures::thermal("gas" + std::to_string(z), z, 1000.0 * (z + 1), 1.0);
        gas.reserve_credit = 1.0;
        in.projects.push_back(gas);
    }
    in.links.push_back({"ac", data::Commodity::electricity, 0, 1, 0.0, 1000.0, false, 0.0, 0.0});
    in.reserve = {true, 0.15, true};
    const auto r = solve_inputs(in);
    ASSERT_TRUE(r.s.optimal());
    EXPECT_NEAR(r.capacity(in, 0), 115.0, 1e-6);
    EXPECT_NEAR(r.capacity(in, 1), 57.5, 1e-6);
}
