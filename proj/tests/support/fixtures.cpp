#include "fixtures.hpp"

#include "gridcap/temporal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include <unistd.h>

namespace gridcap::fixtures {

namespace fs = std::filesystem;
using data::Kind;

fs::path source_dir() { return fs::path(GRIDCAP_SOURCE_DIR); }

fs::path scenario_path(const std::string& name) { return source_dir() / "scenarios" / (name + ".json"); }

fs::path scratch_dir(const std::string& name)
{
    // Tests run as parallel processes, so each process gets its own tree.
    const fs::path dir =
        fs::temp_directory_path() / ("gridcap_test_" + std::to_string(::getpid())) / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

model::ModelInputs blank_inputs(int zones, int horizons, int tps_per_horizon, int hours_in_tmp, double demand_mw)
{
    model::ModelInputs in;
    std::vector<temporal::Horizon> hs;
    for (int h = 0; h < horizons; ++h) hs.push_back({h, 0, temporal::DayKind::calendar, 0});
    in.time = temporal::TemporalStructure::uniform({}, hs, tps_per_horizon, hours_in_tmp);
    for (int z = 0; z < zones; ++z) in.zones.push_back("z" + std::to_string(z));
    in.demand.assign(static_cast<std::size_t>(zones), std::vector<double>(in.time.size(), demand_mw));
    return in;
}

model::ProjectInput thermal(const std::string& id, int zone, double annual_capex, double variable_om)
{
    model::ProjectInput p;
    p.id = id;
    p.zone = zone;
    p.kind = Kind::thermal_gen;
    p.technology = id;
    p.fuel = "fuel";
    p.candidate = true;
    p.annual_capex = annual_capex;
    p.variable_om = variable_om;
    return p;
}

model::ProjectInput vre(const std::string& id, int zone, double annual_capex, std::vector<double> cf)
{
    model::ProjectInput p;
    p.id = id;
    p.zone = zone;
    p.kind = Kind::vre_gen;
    p.technology = id;
    p.candidate = true;
    p.annual_capex = annual_capex;
    p.capacity_factor = std::move(cf);
    return p;
}

model::ProjectInput storage(const std::string& id, int zone, Kind kind, double annual_capex, double annual_capex_energy,
                            double charge_eff, double discharge_eff)
{
    model::ProjectInput p;
    p.id = id;
    p.zone = zone;
    p.kind = kind;
    p.technology = id;
    p.candidate = true;
    p.annual_capex = annual_capex;
    p.annual_capex_energy = annual_capex_energy;
    p.charge_efficiency = charge_eff;
    p.discharge_efficiency = discharge_eff;
    return p;
}

namespace {

data::Project project(std::string id, std::string zone, Kind kind, std::string tech, bool candidate)
{
    data::Project p;
    p.id = std::move(id);
    p.zone = std::move(zone);
    p.kind = kind;
    p.technology = std::move(tech);
    p.candidate = candidate;
    return p;
}

void add_cost(data::SystemDataset& ds, const std::string& tech, double capital, double capital_energy, double fom,
              double fom_energy, double vom, double life)
{
    data::CostRecord c;
    c.technology = tech;
    c.capital = capital;
    c.capital_energy = capital_energy;
    c.fixed_om = fom;
    c.fixed_om_energy = fom_energy;
    c.variable_om = vom;
    c.lifetime_years = life;
    ds.costs[tech] = c;
}

} // namespace

data::SystemDataset mini_dataset()
{
    data::SystemDataset ds;
    ds.source = "<mini>";
    ds.settings.base_year_emissions_tonnes = 1.0e6;
    ds.zones = {{"east", "East", true, 0.0}, {"west", "West", false, 0.0}};

    // $/MW (or $/MWh, $ per tonne/h), overnight.
    add_cost(ds, "gas_ct", 550e3, 0, 15e3, 0, 4.0, 30);
    add_cost(ds, "gas_cc", 800e3, 0, 20e3, 0, 3.0, 30);
    add_cost(ds, "coal", 800e3, 0, 30e3, 0, 3.0, 30);
    add_cost(ds, "nuclear", 2800e3, 0, 100e3, 0, 2.0, 40);
    add_cost(ds, "onshore_wind", 800e3, 0, 30e3, 0, 0.0, 25);
    add_cost(ds, "offshore_wind", 1800e3, 0, 60e3, 0, 0.0, 25);
    add_cost(ds, "solar_pv", 350e3, 0, 12e3, 0, 0.0, 25);
    add_cost(ds, "hydro", 1500e3, 0, 25e3, 0, 1.0, 50);
    add_cost(ds, "battery", 150e3, 150e3, 5e3, 2e3, 0.5, 15);
    add_cost(ds, "pumped_hydro", 800e3, 15e3, 10e3, 0, 0.5, 50);
    add_cost(ds, "electrolyzer", 400e3, 0, 8e3, 0, 0.5, 20);
    add_cost(ds, "fuel_cell", 1000e3, 0, 20e3, 0, 1.0, 20);
    add_cost(ds, "h2_turbine", 500e3, 0, 10e3, 0, 2.0, 30);
    add_cost(ds, "h2_cavern", 0, 800, 0, 10, 0.0, 40);
    add_cost(ds, "h2_tank", 0, 12e3, 0, 200, 0.0, 25);
    add_cost(ds, "smr", 700e3, 0, 25e3, 0, 1.0, 25);
    add_cost(ds, "ccs_gas", 2.8e6, 0, 80e3, 0, 10.0, 30);
    add_cost(ds, "ccs_smr", 1.5e6, 0, 45e3, 0, 8.0, 25);
    add_cost(ds, "dac", 6.0e6, 0, 240e3, 0, 20.0, 25);
    add_cost(ds, "co2_storage_onshore", 150e3, 0, 5e3, 0, 0.0, 30);

    auto& P = ds.projects;
    {
        auto p = project("gasct_e", "east", Kind::thermal_gen, "gas_ct", false);
        p.fuel = "gas";
        p.efficiency = 0.33;
        p.existing_capacity = 250;
        P.push_back(p);
    }
    {
        auto p = project("wind_e", "east", Kind::vre_gen, "onshore_wind", true);
        p.max_new_capacity = 5000;
        P.push_back(p);
    }
    {
        auto p = project("solar_e", "east", Kind::vre_gen, "solar_pv", true);
        p.max_new_capacity = 5000;
        P.push_back(p);
    }
    {
        auto p = project("hydro_e", "east", Kind::hydro, "hydro", true);
        p.existing_capacity = 200;
        p.max_new_capacity = 1000;
        P.push_back(p);
    }
    {
        auto p = project("phs_e", "east", Kind::pumped_hydro, "pumped_hydro", true);
        p.charge_efficiency = p.discharge_efficiency = 0.87;
        p.duration_hours = 8;
        p.existing_capacity = 50;
        p.max_new_capacity = 200;
        P.push_back(p);
    }
    {
        auto p = project("battery_e", "east", Kind::battery, "battery", true);
        p.charge_efficiency = p.discharge_efficiency = 0.92;
        p.duration_hours = 4;
        P.push_back(p);
    }
    {
        auto p = project("p2g_e", "east", Kind::p2g, "electrolyzer", true);
        p.efficiency = 0.7;
        P.push_back(p);
    }
    {
        auto p = project("fuelcell_e", "east", Kind::g2p_fuel_cell, "fuel_cell", true);
        p.efficiency = 0.55;
        P.push_back(p);
    }
    {
        auto p = project("cavern_e", "east", Kind::h2_storage_underground, "h2_cavern", true);
        p.charge_efficiency = 0.98;
        P.push_back(p);
    }
    {
        auto p = project("tank_e", "east", Kind::h2_storage_tank, "h2_tank", true);
        p.charge_efficiency = 0.95;
        P.push_back(p);
    }
    {
        auto p = project("dac_e", "east", Kind::dac, "dac", true);
        p.ele_per_tonne = 1.5;
        P.push_back(p);
    }
    {
        auto p = project("gasct_w", "west", Kind::thermal_gen, "gas_ct", false);
        p.fuel = "gas";
        p.efficiency = 0.33;
        p.existing_capacity = 350;
        P.push_back(p);
    }
    {
        auto p = project("gascc_w", "west", Kind::thermal_gen, "gas_cc", true);
        p.fuel = "gas";
        p.efficiency = 0.55;
        p.ramp_fraction = 0.6;
        P.push_back(p);
    }
    {
        auto p = project("nuclear_w", "west", Kind::nuclear, "nuclear", true);
        p.fuel = "uranium";
        p.efficiency = 0.33;
        p.min_gen_fraction = 1.0;
        p.existing_capacity = 100;
        p.max_new_capacity = 1500;
        P.push_back(p);
    }
    {
        auto p = project("offwind_w", "west", Kind::vre_gen, "offshore_wind", true);
        p.max_new_capacity = 2500;
        P.push_back(p);
    }
    {
        auto p = project("solar_w", "west", Kind::vre_gen, "solar_pv", true);
        p.max_new_capacity = 6000;
        P.push_back(p);
    }
    {
        auto p = project("battery_w", "west", Kind::battery, "battery", true);
        p.charge_efficiency = p.discharge_efficiency = 0.92;
        p.duration_hours = 4;
        P.push_back(p);
    }
    {
        auto p = project("p2g_w", "west", Kind::p2g, "electrolyzer", true);
        p.efficiency = 0.7;
        P.push_back(p);
    }
    {
        auto p = project("h2ct_w", "west", Kind::g2p_turbine, "h2_turbine", true);
        p.efficiency = 0.4;
        P.push_back(p);
    }
    {
        auto p = project("smr_w", "west", Kind::smr, "smr", true);
        p.fuel = "gas";
        p.efficiency = 0.74;
        P.push_back(p);
    }
    {
        auto p = project("ccs_gas_w", "west", Kind::ccs_retrofit, "ccs_gas", true);
        p.parent = "gascc_w";
        p.capture_rate = 0.9;
        p.ele_per_tonne = 0.3;
        P.push_back(p);
    }
    {
        auto p = project("ccs_smr_w", "west", Kind::ccs_retrofit, "ccs_smr", true);
        p.parent = "smr_w";
        p.capture_rate = 0.9;
        p.ele_per_tonne = 0.12;
        P.push_back(p);
    }

    auto link = [&](std::string id, data::Commodity c, std::string from, std::string to, double existing,
                    double loss, double capital) {
        data::Link l;
        l.id = std::move(id);
        l.commodity = c;
        l.from = std::move(from);
        l.to = std::move(to);
        l.length_km = 800;
        l.existing_capacity = existing;
        l.loss_rate_per_1000km = loss;
        l.capital_cost_per_unit_km = capital;
        l.lifetime_years = 40;
        ds.links.push_back(l);
    };
    link("ac_ew", data::Commodity::electricity, "east", "west", 200, 0.03, 1200);
    link("h2_ew", data::Commodity::hydrogen, "east", "west", 0, 0.01, 400);
    link("co2_we", data::Commodity::co2, "west", "east", 0, 0.0, 300000);

    ds.fuel_prices["gas"]["*"] = 8.0;
    ds.fuel_prices["gas"]["east"] = 7.0;
    ds.fuel_prices["uranium"]["*"] = 0.7;
    ds.emission_factors = {{"gas", 0.0531}, {"uranium", 0.0}};
    ds.co2_sites.push_back({"east", "onshore", 5.0e7});
    ds.h2_shares = {{"east", 0.4}, {"west", 0.6}};
    const double hydro_cf[12] = {0.30, 0.28, 0.35, 0.45, 0.55, 0.65, 0.70, 0.68, 0.55, 0.45, 0.38, 0.32};
    for (int m = 1; m <= 12; ++m) ds.hydro_cf["hydro_e"][m] = hydro_cf[m - 1];

    std::mt19937 gen(2050);
    auto noise = [&]() { return static_cast<double>(gen()) / 4294967296.0 - 0.5; };
    const double two_pi = 2.0 * std::numbers::pi;
    const std::map<std::string, std::pair<double, double>> load{{"east", {600.0, -0.05}}, {"west", {900.0, 0.12}}};
    const std::map<std::string, std::string> vre_kind{
        {"wind_e", "onshore"}, {"solar_e", "solar"}, {"offwind_w", "offshore"}, {"solar_w", "solar"}};
    std::map<std::string, double> level;
    int doy = 0;
    for (int month = 1; month <= 12; ++month) {
        for (int day = 1; day <= temporal::days_in_month(month); ++day, ++doy) {
            const double weather = 1.0 + 0.6 * noise();
            for (const auto& [zone, shape] : load) {
                const double season = 1.0 + shape.second * std::cos(two_pi * (doy - 200) / 365.0) +
                                      0.08 * std::cos(two_pi * (doy - 15) / 365.0 * 2.0);
                for (int h = 0; h < 24; ++h) {
                    const double daily = 1.0 + 0.18 * std::sin(two_pi * (h - 9) / 24.0);
                    ds.demand[zone].set(month, day, h, shape.first * season * daily * (1.0 + 0.04 * noise()));
                }
            }
            for (const auto& [id, kind] : vre_kind) {
                for (int h = 0; h < 24; ++h) {
                    double cf = 0.0;
                    if (kind == "solar") {
                        const double sun = std::max(0.0, std::sin(std::numbers::pi * (h - 6) / 12.0));
                        cf = sun * (0.75 + 0.2 * std::cos(two_pi * (doy - 172) / 365.0)) * std::min(1.0, 0.6 + 0.4 * weather);
                    } else {
                        const double seasonal =
                            (kind == "offshore" ? 0.42 : 0.34) + 0.14 * std::cos(two_pi * (doy - 20) / 365.0);
                        double& l = level.try_emplace(id, seasonal).first->second;
                        l = 0.7 * l + 0.3 * seasonal * weather * (1.0 + 0.1 * std::cos(two_pi * h / 24.0));
                        cf = l;
                    }
                    ds.capacity_factors[id].set(month, day, h, std::clamp(cf, 0.0, 1.0));
                }
            }
        }
    }
    for (auto& z : ds.zones) {
        for (const auto& [m, d] : ds.demand[z.id].days()) {
            for (int h = 0; h < 24; ++h) z.peak_load_mw = std::max(z.peak_load_mw, ds.demand[z.id].at(m, d, h));
        }
    }
    return ds;
}

data::SystemDataset micro_dataset()
{
    auto ds = mini_dataset();
    ds.source = "<micro>";
    ds.settings.base_year_emissions_tonnes = 5.0e5;
    ds.zones.resize(1);
    ds.links.clear();
    const std::set<std::string> keep{"gasct_e", "solar_e", "wind_e", "battery_e", "p2g_e", "fuelcell_e", "tank_e", "dac_e"};
    std::erase_if(ds.projects, [&](const data::Project& p) { return !keep.count(p.id); });
    ds.demand.erase("west");
    ds.capacity_factors.erase("offwind_w");
    ds.capacity_factors.erase("solar_w");
    ds.hydro_cf.clear();
    ds.h2_shares = {{"east", 1.0}};
    return ds;
}

scenario::ScenarioConfig bundled(const std::string& name) { return scenario::load_scenario(scenario_path(name)); }

double rel_diff(double a, double b) { return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)}); }

} // namespace gridcap::fixtures
