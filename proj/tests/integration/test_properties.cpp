#include "gridcap/metrics.hpp"
#include "gridcap/scenario.hpp"

#include "fixtures.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace gridcap;
using data::Kind;

namespace {

/// Two zones, two horizons of six timepoints, random demand, weather and
/// costs, with every chain represented: generation, storage, hydrogen, links,
/// capture and a carbon cap that leaves some room.
std::shared_ptr<model::ModelInputs> random_system(unsigned seed, double cost_scale = 1.0)
{
    std::mt19937 gen(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto in = std::make_shared<model::ModelInputs>(fixtures::blank_inputs(2, 2, 6, 4, 0.0));
    const std::size_t nt = in->num_timepoints();
    for (auto& zone : in->demand) {
        for (auto& d : zone) d = 50.0 + 100.0 * u(gen);
    }
    in->h2_load.assign(2, std::vector<double>(nt, 0.0));
    for (auto& v : in->h2_load[1]) v = 20.0 * u(gen);

    auto& P = in->projects;
    for (int z = 0; z < 2; ++z) {
        const std::string s = std::to_string(z);
        auto gas = fixtures::thermal("gas" + s, z, cost_scale * (40e3 + 40e3 * u(gen)), cost_scale * (2 + 3 * u(gen)));
        gas.fuel_price = cost_scale * (4.0 + 4.0 * u(gen));
        gas.efficiency = 0.5;
        gas.emission_factor = 0.0531;
        gas.existing = 30.0;
        gas.min_gen_fraction = 0.2;
        gas.ramp_fraction = 0.5;
        P.push_back(gas);
        std::vector<double> cf(nt);
        for (std::size_t t = 0; t < nt; ++t) cf[t] = (t / 6 == 0 ? 0.6 : 0.2) * u(gen);
        P.push_back(fixtures::vre("vre" + s, z, cost_scale * (60e3 + 40e3 * u(gen)), cf));
        auto bat = fixtures::storage("bat" + s, z, Kind::battery, cost_scale * 10e3, cost_scale * 10e3, 0.92, 0.92);
        bat.duration_hours = 4.0;
        P.push_back(bat);
        auto ely = fixtures::storage("ely" + s, z, Kind::p2g, cost_scale * 40e3, 0.0, 1.0, 1.0);
        ely.efficiency = 0.7;
        P.push_back(ely);
        auto fc = fixtures::storage("fc" + s, z, Kind::g2p_fuel_cell, cost_scale * 80e3, 0.0, 1.0, 1.0);
        fc.efficiency = 0.55;
        fc.reserve_credit = 1.0;
        P.push_back(fc);
        P.push_back(fixtures::storage("tank" + s, z, Kind::h2_storage_tank, 0.0, cost_scale * 1e3, 0.95, 1.0));
    }
    auto dac = fixtures::storage("dac", 0, Kind::dac, cost_scale * 500e3, 0.0, 1.0, 1.0);
    dac.ele_per_tonne = 1.5;
    P.push_back(dac);
    in->links.push_back({"ac", data::Commodity::electricity, 0, 1, 0.03, 40.0, true, lp::kInf, cost_scale * 5e3});
    in->links.push_back({"h2", data::Commodity::hydrogen, 0, 1, 0.01, 0.0, true, lp::kInf, cost_scale * 2e3});
    in->links.push_back({"co2", data::Commodity::co2, 1, 0, 0.0, 0.0, true, lp::kInf, cost_scale * 1e3});
    in->sites.push_back({0, "onshore", lp::kInf, 0.0});
    in->carbon_cap = 0.3 * 60.0 * 0.0531 / 0.5 * 3.412 * 8760.0 * u(gen);
    in->reserve = {true, 0.15, false};
    return in;
}

constexpr unsigned kSeeds[] = {1, 2, 3, 5, 8, 13, 21, 34};

} // namespace

TEST(Properties, ConservationAndCostClosure)
{
    for (unsigned seed : kSeeds) {
        const auto r = scenario::run_inputs("random", random_system(seed));
        ASSERT_TRUE(r.optimal()) << "seed " << seed << ": " << r.message;
        const auto c = scenario::check_conservation(*r.inputs, *r.assembly, r.solution.x);
        EXPECT_LE(c.worst(), 1e-6) << "seed " << seed;
        EXPECT_LE(fixtures::rel_diff(r.costs.total(), r.objective), 1e-6) << "seed " << seed;
        EXPECT_LE(lp::max_violation(r.assembly->model, r.solution.x), 1e-6) << "seed " << seed;
    }
}

TEST(Properties, ObjectiveIsHomogeneousInCosts)
{
    for (unsigned seed : {4u, 9u}) {
        const auto one = scenario::run_inputs("x1", random_system(seed, 1.0));
        const auto two = scenario::run_inputs("x2", random_system(seed, 2.0));
        ASSERT_TRUE(one.optimal() && two.optimal());
        EXPECT_LE(fixtures::rel_diff(2.0 * one.objective, two.objective), 1e-6) << "seed " << seed;
        EXPECT_LE(fixtures::rel_diff(2.0 * metrics::compute_lcoe(one), metrics::compute_lcoe(two)), 1e-6);
    }
}

TEST(Properties, RemovingCandidatesNeverHelps)
{
    for (unsigned seed : {6u, 7u, 11u}) {
        const auto full = scenario::run_inputs("full", random_system(seed));
        ASSERT_TRUE(full.optimal());
        for (const std::string prefix : {"bat", "ely", "vre", "tank"}) {
            auto in = random_system(seed);
            for (auto& p : in->projects) {
                if (p.id.rfind(prefix, 0) == 0) p.max_new = 0.0;
            }
            const auto r = scenario::run_inputs("without_" + prefix, in);
            if (!r.optimal()) continue;
            EXPECT_GE(r.objective, full.objective * (1 - 1e-8)) << "seed " << seed << " without " << prefix;
        }
    }
}

TEST(Properties, TighterCapNeverHelps)
{
    for (unsigned seed : {10u, 12u}) {
        double previous = -lp::kInf;
        const double base_cap = *random_system(seed)->carbon_cap;
        for (double f : {4.0, 1.0, 0.5, 0.0}) {
            auto in = random_system(seed);
            in->carbon_cap = f * base_cap;
            const auto r = scenario::run_inputs("cap", in);
            ASSERT_TRUE(r.optimal()) << "seed " << seed << " factor " << f;
            EXPECT_GE(r.objective, previous * (1 - 1e-8));
            EXPECT_LE(r.emissions_tonnes, f * base_cap + 1e-6 * std::max(1.0, base_cap));
            previous = r.objective;
        }
    }
}

TEST(Properties, BackendsAgreeOnSmallInstances)
{
    for (unsigned seed : {1u, 2u}) {
        auto in = std::make_shared<model::ModelInputs>(fixtures::blank_inputs(1, 1, 4, 6, 0.0));
        std::mt19937 gen(seed);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (auto& d : in->demand[0]) d = 20.0 + 80.0 * u(gen);
        in->projects.push_back(fixtures::thermal("base", 0, 200e3 * (1 + u(gen)), 5.0));
        in->projects.push_back(fixtures::thermal("peak", 0, 50e3 * (1 + u(gen)), 60.0));
        in->projects.push_back(fixtures::vre("vre", 0, 80e3, {0.1, 0.7, 0.6, 0.2}));
        auto bat = fixtures::storage("bat", 0, Kind::battery, 20e3, 20e3, 0.9, 0.9);
        bat.duration_hours = 4.0;
        in->projects.push_back(bat);
        const auto highs = scenario::run_inputs("highs", in, {"highs", 1e-9});
        const auto dense = scenario::run_inputs("simplex", in, {"simplex", 1e-9});
        ASSERT_TRUE(highs.optimal() && dense.optimal()) << dense.message;
        EXPECT_LE(fixtures::rel_diff(highs.objective, dense.objective), 1e-7) << "seed " << seed;
    }
}

TEST(Properties, RunsAreDeterministic)
{
    const auto a = scenario::run_inputs("same", random_system(99));
    const auto b = scenario::run_inputs("same", random_system(99));
    ASSERT_TRUE(a.optimal());
    EXPECT_EQ(scenario::to_json(a), scenario::to_json(b));
    EXPECT_EQ(lp::export_mps(a.assembly->model), lp::export_mps(b.assembly->model));
    EXPECT_EQ(metrics::report_json(a, metrics::make_cost_report(a)), metrics::report_json(b, metrics::make_cost_report(b)));
}
