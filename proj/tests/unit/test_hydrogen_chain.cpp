#include "gridcap/errors.hpp"
#include "gridcap/formulas.hpp"
#include "gridcap/metrics.hpp"
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
};

Run solve_inputs(const ModelInputs& in)
{
    Run r{build_model(in), {}};
    r.s = lp::solve(r.a.model);
    return r;
}

ProjectInput h2_asset(const std::string& id, int zone, Kind kind, double existing, double efficiency = 1.0)
{
    ProjectInput p;
    p.id = id;
    p.zone = zone;
    p.kind = kind;
    p.technology = id;
    p.existing = existing;
    p.efficiency = efficiency;
    return p;
}

ProjectInput cheap_power(int zone)
{
    auto p = fixtures::thermal("power" + std::to_string(zone), zone, 0.0, 1.0);
    p.candidate = false;
    p.existing = 10000.0;
    return p;
}

} // namespace

TEST(Conversion, PowerToGas)
{
    EXPECT_NEAR(gridcap::hydrogen_chain::p2g_output(100, 0.70), 70.0, 1e-12);
    EXPECT_NEAR(gridcap::hydrogen_chain::p2g_output(100, 0.55), 55.0, 1e-12);
    EXPECT_DOUBLE_EQ(gridcap::hydrogen_chain::p2g_output(0, 0.7), 0.0);
}

TEST(Conversion, GasToPower)
{
    EXPECT_NEAR(gridcap::hydrogen_chain::g2p_output(100, 0.60), 60.0, 1e-12);
    EXPECT_NEAR(gridcap::hydrogen_chain::g2p_output(100, 0.40), 40.0, 1e-12);
}

TEST(Conversion, FossilFuelBurn) { EXPECT_NEAR(gridcap::hydrogen_chain::fossil_fuel_burn_mmbtu(70, 0.7), 341.2, 1e-9); }

TEST(Conversion, G2pFuelBoundedByCapacityOverEfficiency)
{
    auto in = fixtures::blank_inputs(1, 1, 1, 1, 100.0);
    in.projects.push_back(h2_asset("fc", 0, Kind::g2p_fuel_cell, 100.0, 0.5));
    in.projects.push_back(h2_asset("smr", 0, Kind::smr, 1000.0, 1.0));
    auto r = solve_inputs(in);
    ASSERT_TRUE(r.s.optimal());
    EXPECT_NEAR(r.activity(0, 0), 100.0, 1e-9);
    EXPECT_NEAR(r.activity(1, 0), 200.0, 1e-9);

    in.projects[0].existing = 50.0;
    r = solve_inputs(in);
    EXPECT_EQ(r.s.status, lp::Status::infeasible);
}

TEST(Fossil, ProductionAndFuelBurn)
{
    auto in = fixtures::blank_inputs(1, 1, 1, 1, 0.0);
    auto smr = h2_asset("smr", 0, Kind::smr, 100.0, 0.7);
    smr.fuel = "gas";
    smr.fuel_price = 5.0;
    in.projects.push_back(smr);
    in.h2_load = {{70.0}};
    auto r = solve_inputs(in);
    ASSERT_TRUE(r.s.optimal());
    EXPECT_NEAR(r.activity(0, 0), 70.0, 1e-9);
    EXPECT_NEAR(r.at(r.a.projects[0].fuel_burn[0]), 341.2, 1e-9);

    in.h2_load = {{120.0}};
    r = solve_inputs(in);
    EXPECT_EQ(r.s.status, lp::Status::infeasible);
}

TEST(Balance, ElectrolyzerMeetsDemand)
{
    auto in = fixtures::blank_inputs(1, 1, 1, 1, 0.0);
    in.projects.push_back(h2_asset("ely", 0, Kind::p2g, 100.0, 0.7));
    in.projects.push_back(cheap_power(0));
    in.h2_load = {{70.0}};
    const auto r = solve_inputs(in);
    ASSERT_TRUE(r.s.optimal());
    EXPECT_NEAR(gridcap::hydrogen_chain::p2g_output(r.activity(0, 0), 0.7), 70.0, 1e-9);
}

TEST(Balance, SurplusGoesToStorage)
{
    auto in = fixtures::blank_inputs(1, 1, 2, 1, 0.0);
    in.projects.push_back(h2_asset("ely", 0, Kind::p2g, 100.0, 0.7));
    auto power = cheap_power(0);
    power.existing = 100.0;
    in.projects.push_back(power);
    in.projects.push_back(h2_asset("tank", 0, Kind::h2_storage_tank, 1e6));
    in.h2_load = {{50.0, 20.0}};
    // Electricity is free for the electrolyzer only in the first timepoint.
    in.demand[0] = {0.0, 100.0};
    const auto r = solve_inputs(in);
    ASSERT_TRUE(r.s.optimal());
    EXPECT_NEAR(gridcap::hydrogen_chain::p2g_output(r.activity(0, 0), 0.7), 70.0, 1e-6);
    EXPECT_NEAR(r.at(r.a.projects[2].charge[0]), 20.0, 1e-6);
    EXPECT_NEAR(r.activity(2, 1), 20.0, 1e-6);
}

TEST(Balance, ImportOnly)
{
    auto in = fixtures::blank_inputs(2, 1, 1, 1, 0.0);
    in.projects.push_back(h2_asset("ely", 0, Kind::p2g, 100.0, 1.0));
    in.projects.push_back(cheap_power(0));
    in.links.push_back({"pipe", data::Commodity::hydrogen, 0, 1, 0.0, 50.0, false, 0.0, 0.0});
    in.h2_load = {{0.0}, {10.0}};
    const auto r = solve_inputs(in);
    ASSERT_TRUE(r.s.optimal());
    EXPECT_NEAR(r.at(r.a.links[0].flow[0]), 10.0, 1e-9);
}

TEST(Pipeline, LossAndCapacityBound)
{
    auto in = fixtures::blank_inputs(2, 1, 1, 1, 0.0);
    in.projects.push_back(h2_asset("ely", 0, Kind::p2g, 1000.0, 1.0));
    in.projects.push_back(cheap_power(0));
    in.links.push_back({"pipe", data::Commodity::hydrogen, 0, 1, 0.013, 100.0, false, 0.0, 0.0});
    in.h2_load = {{0.0}, {98.7}};
    const auto r = solve_inputs(in);
    ASSERT_TRUE(r.s.optimal());
    EXPECT_NEAR(r.at(r.a.links[0].flow[0]), 100.0, 1e-6);
    // At full capacity the loss bound cap x loss binds exactly.
    EXPECT_NEAR(r.at(r.a.links[0].to_loss[0]), 1.3, 1e-6);

    in.h2_load = {{0.0}, {99.0}};
    EXPECT_EQ(solve_inputs(in).s.status, lp::Status::infeasible);
}

TEST(Pipeline, ZeroLengthIsLossless)
{
    data::Link l;
    l.loss_rate_per_1000km = 0.013;
    l.length_km = 0.0;
    EXPECT_DOUBLE_EQ(data::derive_link_loss(l.loss_rate_per_1000km, l.length_km), 0.0);
    auto in = fixtures::blank_inputs(2, 1, 1, 1, 0.0);
    in.links.push_back({"pipe", data::Commodity::hydrogen, 0, 1, 0.0, 100.0, false, 0.0, 0.0});
    const auto a = build_model(in);
    EXPECT_TRUE(a.links[0].to_loss.empty());
}

TEST(Storage, UndergroundLinksAcrossHorizons)
{
    // Summer surplus stored for winter in a single underground site.
    auto in = fixtures::blank_inputs(1, 2, 1, 1, 0.0);
    in.demand[0] = {0.0, 0.0};
    auto ely = h2_asset("ely", 0, Kind::p2g, 100.0, 1.0);
    in.projects.push_back(ely);
    auto solar = fixtures::vre("solar", 0, 0.0, {1.0, 0.0});
    solar.candidate = false;
    solar.existing = 100.0;
    in.projects.push_back(solar);
    auto cavern = h2_asset("cavern", 0, Kind::h2_storage_underground, 0.0);
    cavern.candidate = true;
    cavern.annual_capex_energy = 0.01;
    in.projects.push_back(cavern);
    in.h2_load = {{50.0, 50.0}};
    const auto r = solve_inputs(in);
    ASSERT_TRUE(r.s.optimal());
    const double s = in.scale(0);
    EXPECT_NEAR(r.at(r.a.projects[2].charge[0]), 50.0, 1e-6);
    EXPECT_NEAR(r.activity(2, 1), 50.0, 1e-6);
    EXPECT_NEAR(r.at(r.a.projects[2].new_capacity), 50.0 * s, 1e-3);
}

TEST(DemandProfile, FlatOneZone)
{
    const auto in = fixtures::blank_inputs(1, 1, 24, 1, 10.0);
    const auto load = gridcap::hydrogen_chain::build_h2_demand_profile(8.76e6, {1.0}, gridcap::hydrogen_chain::DemandMode::flat,
                                                              in.demand, in.time);
    for (double v : load[0]) EXPECT_NEAR(v, 1000.0, 1e-9);
}

TEST(DemandProfile, ShapedUniformEqualsFlat)
{
    const auto in = fixtures::blank_inputs(2, 2, 6, 2, 30.0);
    const std::vector<double> shares{0.25, 0.75};
    const auto flat = gridcap::hydrogen_chain::build_h2_demand_profile(1e6, shares, gridcap::hydrogen_chain::DemandMode::flat,
                                                              in.demand, in.time);
    const auto shaped = gridcap::hydrogen_chain::build_h2_demand_profile(1e6, shares, gridcap::hydrogen_chain::DemandMode::shaped,
                                                                in.demand, in.time);
    for (std::size_t z = 0; z < 2; ++z) {
        for (std::size_t t = 0; t < in.time.size(); ++t) EXPECT_NEAR(shaped[z][t], flat[z][t], 1e-9);
    }
}

TEST(DemandProfile, ShapedPreservesAnnualTotal)
{
    auto in = fixtures::blank_inputs(1, 2, 4, 1, 0.0);
    in.demand[0] = {1, 2, 3, 4, 5, 6, 7, 8};
    const auto load = gridcap::hydrogen_chain::build_h2_demand_profile(2e6, {1.0}, gridcap::hydrogen_chain::DemandMode::shaped,
                                                              in.demand, in.time);
    double total = 0.0;
    for (std::size_t t = 0; t < 8; ++t) {
        total += in.scale(static_cast<int>(t)) * load[0][t];
        EXPECT_NEAR(load[0][t] / in.demand[0][t], load[0][0] / in.demand[0][0], 1e-12);
    }
    EXPECT_NEAR(total, 2e6, 1e-6);
}

TEST(DemandProfile, Errors)
{
    const auto in = fixtures::blank_inputs(1, 1, 4, 1, 0.0);
    EXPECT_THROW(gridcap::hydrogen_chain::build_h2_demand_profile(1e6, {1.0}, gridcap::hydrogen_chain::DemandMode::shaped, in.demand,
                                                         in.time),
                 ValidationError);
    EXPECT_THROW(gridcap::hydrogen_chain::build_h2_demand_profile(1e6, {0.5}, gridcap::hydrogen_chain::DemandMode::flat, in.demand,
                                                         in.time),
                 ValidationError);
    EXPECT_THROW(gridcap::hydrogen_chain::build_h2_demand_profile(-1.0, {1.0}, gridcap::hydrogen_chain::DemandMode::flat, in.demand,
                                                         in.time),
                 ValidationError);
}

TEST(DemandProfile, NationalDemandInEnergyTerms)
{
    EXPECT_NEAR(metrics::convert_h2(124, metrics::H2Unit::megatonne, metrics::H2Unit::twh), 4133.33, 0.01);
}

TEST(Decoupled, IndustrialFleetServesDedicatedBalance)
{
    auto in = fixtures::blank_inputs(1, 1, 1, 1, 0.0);
    auto shared = h2_asset("ely", 0, Kind::p2g, 100.0, 1.0);
    auto industrial = h2_asset("ely_hta", 0, Kind::p2g, 100.0, 1.0);
    industrial.industrial = true;
    in.projects.push_back(shared);
    in.projects.push_back(industrial);
    in.projects.push_back(cheap_power(0));
    in.h2_load = {{40.0}};
    in.h2_decoupled = true;
    const auto r = solve_inputs(in);
    ASSERT_TRUE(r.s.optimal());
    EXPECT_NEAR(r.activity(0, 0), 0.0, 1e-9);
    EXPECT_NEAR(r.activity(1, 0), 40.0, 1e-9);
    EXPECT_GE(r.a.h2_industrial_balance[0][0], 0);
}
