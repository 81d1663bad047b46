#include "gridcap/errors.hpp"
#include "gridcap/system_data.hpp"

#include "fixtures.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <sstream>

using namespace gridcap;
using namespace gridcap::data;
namespace fs = std::filesystem;

namespace {

SystemDataset one_generator()
{
    SystemDataset ds;
    ds.zones = {{"solo", "Solo", false, 0.0}};
    Project p;
    p.id = "gen";
    p.zone = "solo";
    p.kind = Kind::thermal_gen;
    p.technology = "gas_ct";
    p.candidate = true;
    p.fuel = "gas";
    p.efficiency = 0.33;
    ds.projects.push_back(p);
    CostRecord c;
    c.technology = "gas_ct";
    c.capital = 550e3;
    c.fixed_om = 15e3;
    c.variable_om = 4.0;
    c.lifetime_years = 30;
    ds.costs["gas_ct"] = c;
    ds.fuel_prices["gas"]["*"] = 5.0;
    ds.emission_factors["gas"] = 0.0531;
    temporal::HourlySeries load;
    for (int m = 1; m <= 12; ++m) {
        for (int d = 1; d <= temporal::days_in_month(m); ++d) {
            for (int h = 0; h < 24; ++h) load.set(m, d, h, 100.0);
        }
    }
    ds.demand["solo"] = load;
    return ds;
}

std::string read_file(const fs::path& p)
{
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& p, const std::string& text)
{
    std::ofstream out(p);
    out << text;
}

std::string load_error(const fs::path& dir)
{
    try {
        load_system_inputs(dir);
    } catch (const ValidationError& e) {
        return e.what();
    }
    return "";
}

} // namespace

TEST(CapitalRecovery, ElectrolyzerExample) { EXPECT_NEAR(annualize_capital(1245, 25, 0.08), 116.63, 0.01); }

TEST(CapitalRecovery, BatteryEnergyExample) { EXPECT_NEAR(annualize_capital(111, 15, 0.08), 12.97, 0.01); }

TEST(CapitalRecovery, OneYearAtZeroRate) { EXPECT_DOUBLE_EQ(annualize_capital(777, 1, 0.0), 777.0); }

TEST(CapitalRecovery, ZeroRateIsStraightLine) { EXPECT_DOUBLE_EQ(annualize_capital(1000, 20, 0.0), 50.0); }

TEST(CapitalRecovery, Factors)
{
    EXPECT_NEAR(capital_recovery_factor(25, 0.08), 0.09368, 1e-5);
    EXPECT_NEAR(capital_recovery_factor(15, 0.08), 0.11683, 1e-5);
}

TEST(CapitalRecovery, RejectsBadInputs)
{
    EXPECT_THROW(capital_recovery_factor(0.5, 0.08), ValidationError);
    EXPECT_THROW(capital_recovery_factor(10, -0.01), ValidationError);
}

TEST(LinkLoss, Examples)
{
    EXPECT_DOUBLE_EQ(derive_link_loss(0.053, 1000), 0.053);
    EXPECT_NEAR(derive_link_loss(0.013, 500), 0.0065, 1e-15);
    EXPECT_DOUBLE_EQ(derive_link_loss(0.2, 0), 0.0);
}

TEST(LinkLoss, TooLong)
{
    EXPECT_THROW(derive_link_loss(0.05, 20000), ValidationError);
    EXPECT_THROW(derive_link_loss(-0.01, 100), ValidationError);
}

TEST(Kinds, RoundTripNames)
{
    for (Kind k : kAllKinds) {
        const auto parsed = parse_kind(to_string(k));
        ASSERT_TRUE(parsed);
        EXPECT_EQ(*parsed, k);
    }
    EXPECT_FALSE(parse_kind("fusion"));
    EXPECT_EQ(parse_commodity("co2"), Commodity::co2);
}

TEST(Kinds, Classification)
{
    EXPECT_TRUE(is_electric_storage(Kind::battery));
    EXPECT_TRUE(is_electric_storage(Kind::pumped_hydro));
    EXPECT_TRUE(is_h2_storage(Kind::h2_storage_underground));
    EXPECT_TRUE(is_g2p(Kind::g2p_turbine));
    EXPECT_TRUE(is_fossil_h2(Kind::gasification));
    EXPECT_TRUE(burns_fuel(Kind::smr));
    EXPECT_FALSE(burns_fuel(Kind::vre_gen));
    EXPECT_FALSE(is_generator(Kind::battery));
}

TEST(Loader, MinimalDataset)
{
    const auto dir = fixtures::scratch_dir("sd_minimal");
    write_system_inputs(one_generator(), dir);
    const auto ds = load_system_inputs(dir);
    EXPECT_EQ(ds.zones.size(), 1u);
    ASSERT_EQ(ds.projects.size(), 1u);
    EXPECT_EQ(ds.projects[0].id, "gen");
    EXPECT_NEAR(ds.annual_demand_mwh("solo"), 876000.0, 1e-6);
    EXPECT_EQ(ds.fuel_price("gas", "solo"), 5.0);
}

TEST(Loader, UnknownZoneNamesFileRowAndZone)
{
    const auto dir = fixtures::scratch_dir("sd_badzone");
    write_system_inputs(one_generator(), dir);
    auto text = read_file(dir / "projects.csv");
    const auto pos = text.find(",solo,");
    ASSERT_NE(pos, std::string::npos);
    text.replace(pos, 6, ",XX,");
    write_file(dir / "projects.csv", text);
    const auto msg = load_error(dir);
    EXPECT_NE(msg.find("projects.csv"), std::string::npos) << msg;
    EXPECT_NE(msg.find(":2"), std::string::npos) << msg;
    EXPECT_NE(msg.find("XX"), std::string::npos) << msg;
}

TEST(Loader, MissingTable)
{
    const auto dir = fixtures::scratch_dir("sd_missing");
    write_system_inputs(one_generator(), dir);
    fs::remove(dir / "costs.csv");
    EXPECT_NE(load_error(dir).find("costs.csv"), std::string::npos);
}

TEST(Loader, MissingDirectory) { EXPECT_THROW(load_system_inputs("/nonexistent/gridcap"), ValidationError); }

TEST(Loader, UnknownTechnology)
{
    const auto dir = fixtures::scratch_dir("sd_tech");
    auto ds = one_generator();
    ds.projects[0].technology = "gas_cc";
    write_system_inputs(ds, dir);
    EXPECT_NE(load_error(dir).find("gas_cc"), std::string::npos);
}

TEST(Loader, IncompleteDemand)
{
    const auto dir = fixtures::scratch_dir("sd_demand");
    write_system_inputs(one_generator(), dir);
    auto text = read_file(dir / "demand.csv");
    const auto last = text.rfind('\n', text.size() - 2);
    write_file(dir / "demand.csv", text.substr(0, last + 1));
    EXPECT_FALSE(load_error(dir).empty());
}

TEST(Loader, NegativeValueRejected)
{
    const auto dir = fixtures::scratch_dir("sd_negative");
    write_system_inputs(one_generator(), dir);
    write_file(dir / "fuel_prices.csv", "fuel,zone,price_per_mmbtu\ngas,*,-1\n");
    EXPECT_FALSE(load_error(dir).empty());
}

TEST(Loader, BlankExistingCellsAreZero)
{
    const auto dir = fs::path(fixtures::source_dir()) / "data" / "toy";
    const auto ds = load_system_inputs(dir);
    // Row sum of the existing-capacity sheet, blanks counting as zero.
    std::ifstream in(dir / "existing_capacity.csv");
    std::string line;
    std::getline(in, line);
    double sheet = 0.0;
    while (std::getline(in, line)) {
        std::stringstream ss(line);
        std::string cell;
        std::getline(ss, cell, ',');
        while (std::getline(ss, cell, ',')) {
            if (!cell.empty()) sheet += std::stod(cell);
        }
    }
    double loaded = 0.0;
    for (const auto& p : ds.projects) loaded += p.existing_capacity;
    EXPECT_GT(sheet, 0.0);
    EXPECT_DOUBLE_EQ(loaded, sheet);
    EXPECT_DOUBLE_EQ(ds.projects[static_cast<std::size_t>(ds.project_index("coal_n"))].existing_capacity, 0.0);
}

TEST(Loader, ToyDatasetCrossReferences)
{
    const auto ds = load_system_inputs(fs::path(fixtures::source_dir()) / "data" / "toy");
    EXPECT_EQ(ds.zones.size(), 2u);
    for (const auto& p : ds.projects) {
        EXPECT_GE(ds.zone_index(p.zone), 0);
        EXPECT_NO_THROW(ds.cost(p.technology));
        if (burns_fuel(p.kind)) EXPECT_TRUE(ds.fuel_price(p.fuel, p.zone));
    }
    double share = 0.0;
    for (const auto& [z, s] : ds.h2_shares) share += s;
    EXPECT_NEAR(share, 1.0, 1e-9);
    const auto totals = ds.system_daily_totals();
    EXPECT_EQ(totals.size(), 12u);
    EXPECT_EQ(totals.at(2).size(), 28u);
}

TEST(Loader, WriteLoadRoundTrip)
{
    const auto original = fixtures::mini_dataset();
    const auto dir = fixtures::scratch_dir("sd_roundtrip");
    write_system_inputs(original, dir);
    const auto ds = load_system_inputs(dir);
    ASSERT_EQ(ds.projects.size(), original.projects.size());
    for (std::size_t i = 0; i < ds.projects.size(); ++i) {
        const auto& a = original.projects[i];
        const auto& b = ds.projects[i];
        EXPECT_EQ(a.id, b.id);
        EXPECT_EQ(a.kind, b.kind);
        EXPECT_EQ(a.parent, b.parent);
        EXPECT_DOUBLE_EQ(a.existing_capacity, b.existing_capacity) << a.id;
        EXPECT_DOUBLE_EQ(a.efficiency, b.efficiency) << a.id;
        EXPECT_EQ(a.max_new_capacity, b.max_new_capacity) << a.id;
    }
    ASSERT_EQ(ds.links.size(), original.links.size());
    for (std::size_t i = 0; i < ds.links.size(); ++i) {
        EXPECT_EQ(ds.links[i].commodity, original.links[i].commodity);
        EXPECT_DOUBLE_EQ(ds.links[i].length_km, original.links[i].length_km);
    }
    for (const auto& z : original.zones) {
        EXPECT_NEAR(ds.annual_demand_mwh(z.id), original.annual_demand_mwh(z.id),
                    1e-9 * original.annual_demand_mwh(z.id));
    }
    EXPECT_EQ(ds.settings.base_year_emissions_tonnes, original.settings.base_year_emissions_tonnes);
    EXPECT_EQ(ds.costs.size(), original.costs.size());
    EXPECT_EQ(ds.co2_sites.size(), original.co2_sites.size());

    // Writing the loaded copy again gives the same files.
    const auto again = fixtures::scratch_dir("sd_roundtrip2");
    write_system_inputs(ds, again);
    for (const auto& entry : fs::directory_iterator(dir)) {
        EXPECT_EQ(read_file(entry.path()), read_file(again / entry.path().filename())) << entry.path().filename();
    }
}
