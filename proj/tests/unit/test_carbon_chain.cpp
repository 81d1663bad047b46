#include "gridcap/formulas.hpp"
#include "gridcap/model.hpp"
#include "gridcap/units.hpp"

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

ProjectInput emitter(const std::string& id, int zone, double mw, double ef, double min_gen = 0.0)
{
    auto p = fixtures::thermal(id, zone, 0.0, 1.0);
    p.candidate = false;
    p.existing = mw;
    p.emission_factor = ef;
    p.min_gen_fraction = min_gen;
    return p;
}

ProjectInput capture(const std::string& id, int zone, Kind kind, double existing, int parent = -1, double rate = 0.0)
{
    ProjectInput p;
    p.id = id;
    p.zone = zone;
    p.kind = kind;
    p.technology = id;
    p.existing = existing;
    p.parent = parent;
    p.capture_rate = rate;
    return p;
}

/// Weighted annual net emissions recomputed from the solution.
double net_emissions(const ModelInputs& in, const Run& r)
{
    double total = 0.0;
    for (std::size_t i = 0; i < in.projects.size(); ++i) {
        const auto& p = in.projects[i];
        const auto& pv = r.a.projects[i];
        for (std::size_t t = 0; t < in.num_timepoints(); ++t) {
            const double s = in.scale(static_cast<int>(t));
            const double burn = pv.fuel_burn.empty() ? 0.0 : r.at(pv.fuel_burn[t]);
            const double captured = (p.kind == Kind::ccs_retrofit || p.kind == Kind::dac) ? r.at(pv.activity[t]) : 0.0;
            total += s * gridcap::carbon_chain::net_emission(burn, p.emission_factor, captured);
        }
    }
    return total;
}

} // namespace

TEST(Formulas, CaptureLimit)
{
    EXPECT_NEAR(gridcap::carbon_chain::capture_limit(100, 0.1, 0.85), 8.5, 1e-12);
    EXPECT_NEAR(gridcap::carbon_chain::capture_limit(100, 0.1, 0.95), 9.5, 1e-12);
    EXPECT_DOUBLE_EQ(gridcap::carbon_chain::capture_limit(0, 0.1, 0.85), 0.0);
}

TEST(Formulas, NetEmission)
{
    EXPECT_NEAR(gridcap::carbon_chain::net_emission(100, 0.1, 8.5), 1.5, 1e-12);
    EXPECT_DOUBLE_EQ(gridcap::carbon_chain::net_emission(0, 0, 2), -2.0);
    EXPECT_DOUBLE_EQ(gridcap::carbon_chain::net_emission(50, 0, 0), 0.0);
}

TEST(Capture, RateLimitsRetrofit)
{
    // Fuel burn of 100 MMBtu/h at EF 0.1 gives 10 t/h gross.
    auto in = fixtures::blank_inputs(1, 1, 1, 1, 100.0 / units::kMmbtuPerMwh);
    in.projects.push_back(emitter("gas", 0, 100.0, 0.1));
    in.projects.push_back(capture("ccs", 0, Kind::ccs_retrofit, 100.0, 0, 0.85));
    in.sites.push_back({0, "onshore", lp::kInf, 0.0});
    const double s = in.scale(0);

    in.carbon_cap = 1.5 * s;
    auto r = solve_inputs(in);
    ASSERT_TRUE(r.s.optimal());
    EXPECT_NEAR(r.at(r.a.projects[0].fuel_burn[0]), 100.0, 1e-6);
    EXPECT_NEAR(r.activity(1, 0), 8.5, 1e-6);
    EXPECT_NEAR(net_emissions(in, r), 1.5 * s, 1e-3);

    in.carbon_cap = 1.4 * s;
    EXPECT_EQ(solve_inputs(in).s.status, lp::Status::infeasible);

    in.projects[1].capture_rate = 0.95;
    in.carbon_cap = 0.5 * s;
    r = solve_inputs(in);
    ASSERT_TRUE(r.s.optimal());
    EXPECT_NEAR(r.activity(1, 0), 9.5, 1e-6);
}

TEST(Capture, NoBurnNoCapture)
{
    auto in = fixtures::blank_inputs(1, 1, 1, 1, 0.0);
    in.projects.push_back(emitter("gas", 0, 100.0, 0.1));
    in.projects.push_back(capture("ccs", 0, Kind::ccs_retrofit, 100.0, 0, 0.85));
    in.sites.push_back({0, "onshore", lp::kInf, 0.0});
    const auto a = build_model(in);
    const auto r = lp::solve(a.model);
    ASSERT_TRUE(r.optimal());
    EXPECT_NEAR(r.value(a.projects[1].activity[0]), 0.0, 1e-9);
}

TEST(Sites, LocalInjection)
{
    auto in = fixtures::blank_inputs(1, 1, 1, 1, 0.0);
    in.projects.push_back(capture("dac", 0, Kind::dac, 10.0));
    in.sites.push_back({0, "onshore", lp::kInf, 0.0});
    in.carbon_cap = -10.0 * in.scale(0);
    const auto r = solve_inputs(in);
    ASSERT_TRUE(r.s.optimal());
    EXPECT_NEAR(r.at(r.a.sites[0].injection[0]), 10.0, 1e-9);
}

TEST(Sites, ExportToNeighbourWithSite)
{
    auto in = fixtures::blank_inputs(2, 1, 1, 1, 0.0);
    in.projects.push_back(capture("dac", 0, Kind::dac, 10.0));
    in.sites.push_back({1, "onshore", lp::kInf, 0.0});
    in.links.push_back({"co2", data::Commodity::co2, 0, 1, 0.0, 100.0, false, 0.0, 0.0});
    in.carbon_cap = -10.0 * in.scale(0);
    const auto r = solve_inputs(in);
    ASSERT_TRUE(r.s.optimal());
    EXPECT_NEAR(r.at(r.a.links[0].flow[0]), 10.0, 1e-9);
    EXPECT_NEAR(r.at(r.a.sites[0].injection[0]), 10.0, 1e-9);
}

TEST(Sites, CaptureWithNowhereToGoIsInfeasible)
{
    auto in = fixtures::blank_inputs(1, 1, 1, 1, 0.0);
    in.projects.push_back(capture("dac", 0, Kind::dac, 10.0));
    in.carbon_cap = -10.0 * in.scale(0);
    EXPECT_EQ(solve_inputs(in).s.status, lp::Status::infeasible);
}

TEST(Sites, CumulativeCapacity)
{
    auto in = fixtures::blank_inputs(1, 1, 1, 1, 0.0);
    in.projects.push_back(capture("dac", 0, Kind::dac, 10.0));
    const double s = in.scale(0);
    in.sites.push_back({0, "onshore", 100.0 * s, 0.0});
    in.carbon_cap = -120.0 * s;
    in.projects[0].existing = 200.0;
    EXPECT_EQ(solve_inputs(in).s.status, lp::Status::infeasible);

    in.carbon_cap = -100.0 * s;
    const auto r = solve_inputs(in);
    ASSERT_TRUE(r.s.optimal());
    EXPECT_NEAR(r.at(r.a.sites[0].injection[0]) * s, 100.0 * s, 1e-3);
}

TEST(Sites, InjectionCapacityIsPriced)
{
    auto in = fixtures::blank_inputs(1, 1, 1, 1, 0.0);
    in.projects.push_back(capture("dac", 0, Kind::dac, 10.0));
    in.sites.push_back({0, "onshore", lp::kInf, 1000.0});
    in.carbon_cap = -4.0 * in.scale(0);
    const auto r = solve_inputs(in);
    ASSERT_TRUE(r.s.optimal());
    EXPECT_NEAR(r.at(r.a.sites[0].new_capacity), 4.0, 1e-9);
    EXPECT_NEAR(r.s.objective, 4000.0, 1e-6);
}

TEST(ZeroCap, MustRunEmitterIsInfeasible)
{
    auto in = fixtures::blank_inputs(1, 1, 2, 1, 50.0);
    in.projects.push_back(emitter("coal", 0, 100.0, 0.0953, 0.4));
    in.projects.push_back(fixtures::vre("solar", 0, 1000.0, {1.0, 0.5}));
    in.carbon_cap = 0.0;
    EXPECT_EQ(solve_inputs(in).s.status, lp::Status::infeasible);
}

TEST(ZeroCap, DacOffsetsResidualEmissions)
{
    auto in = fixtures::blank_inputs(1, 1, 2, 1, 50.0);
    in.projects.push_back(emitter("coal", 0, 100.0, 0.0953, 0.4));
    auto dac = capture("dac", 0, Kind::dac, 0.0);
    dac.candidate = true;
    dac.annual_capex = 50000.0;
    dac.ele_per_tonne = 1.5;
    in.projects.push_back(dac);
    in.sites.push_back({0, "onshore", lp::kInf, 0.0});
    in.carbon_cap = 0.0;
    const auto r = solve_inputs(in);
    ASSERT_TRUE(r.s.optimal());
    EXPECT_LE(net_emissions(in, r), 1e-6 * in.scale(0));
    EXPECT_GT(r.at(r.a.projects[1].new_capacity), 0.0);
}

TEST(ZeroCap, UnburnedFossilIsFine)
{
    auto in = fixtures::blank_inputs(1, 1, 2, 1, 50.0);
    in.projects.push_back(emitter("gas", 0, 100.0, 0.0531));
    in.projects.push_back(fixtures::vre("wind", 0, 1000.0, {1.0, 1.0}));
    in.carbon_cap = 0.0;
    const auto r = solve_inputs(in);
    ASSERT_TRUE(r.s.optimal());
    for (std::size_t t = 0; t < 2; ++t) EXPECT_NEAR(r.activity(0, t), 0.0, 1e-9);
}

TEST(Cap, ZonalSplitFollowsDemand)
{
    auto in = fixtures::blank_inputs(2, 1, 1, 1, 0.0);
    in.demand = {{30.0}, {10.0}};
    in.projects.push_back(emitter("g0", 0, 100.0, 1.0));
    in.projects.push_back(emitter("g1", 1, 100.0, 1.0));
    in.projects.push_back(fixtures::vre("w0", 0, 1e6, {1.0}));
    in.projects.push_back(fixtures::vre("w1", 1, 1e6, {1.0}));
    const double cap = 20.0 * units::kMmbtuPerMwh * in.scale(0);
    in.carbon_cap = cap;
    in.cap_zonal = true;
    const auto a = build_model(in);
    const auto z0 = a.model.find_constraint("carbon_cap_z0");
    const auto z1 = a.model.find_constraint("carbon_cap_z1");
    ASSERT_TRUE(z0 && z1);
    EXPECT_NEAR(a.model.constraints()[static_cast<std::size_t>(*z0)].rhs, 0.75 * cap, 1e-6);
    EXPECT_NEAR(a.model.constraints()[static_cast<std::size_t>(*z1)].rhs, 0.25 * cap, 1e-6);

    const auto r = lp::solve(a.model);
    ASSERT_TRUE(r.optimal());
    EXPECT_NEAR(r.value(a.projects[0].activity[0]), 15.0, 1e-6);
    EXPECT_NEAR(r.value(a.projects[1].activity[0]), 5.0, 1e-6);
}
