#pragma once

#include "gridcap/lp.hpp"
#include "gridcap/temporal.hpp"

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gridcap::data {

enum class Commodity { electricity, hydrogen, co2 };

enum class Kind {
    thermal_gen,
    vre_gen,
    hydro,
    nuclear,
    battery,
    pumped_hydro,
    p2g,
    g2p_fuel_cell,
    g2p_turbine,
    h2_storage_tank,
    h2_storage_underground,
    smr,
    gasification,
    ccs_retrofit,
    dac,
};

inline constexpr std::array<Kind, 15> kAllKinds{
    Kind::thermal_gen, Kind::vre_gen,       Kind::hydro,           Kind::nuclear,
    Kind::battery,     Kind::pumped_hydro,  Kind::p2g,             Kind::g2p_fuel_cell,
    Kind::g2p_turbine, Kind::h2_storage_tank, Kind::h2_storage_underground, Kind::smr,
    Kind::gasification, Kind::ccs_retrofit, Kind::dac,
};

std::string_view to_string(Kind kind);
std::string_view to_string(Commodity commodity);
std::optional<Kind> parse_kind(std::string_view text);
std::optional<Commodity> parse_commodity(std::string_view text);

bool is_electric_storage(Kind k);
bool is_h2_storage(Kind k);
bool is_g2p(Kind k);
bool is_fossil_h2(Kind k);
bool is_hydrogen_kind(Kind k);
/// Kinds that burn fuel and therefore need a fuel price and emission factor.
bool burns_fuel(Kind k);
/// Kinds with a gross power output constrained by capacity.
bool is_generator(Kind k);

struct CO2Site {
    std::string zone;
    std::string kind; // onshore | offshore
    double capacity_tonnes = lp::kInf;
};

struct Zone {
    std::string id;
    std::string name;
    bool underground_h2_allowed = false;
    double peak_load_mw = 0.0;
};

struct Link {
    std::string id;
    Commodity commodity = Commodity::electricity;
    std::string from;
    std::string to;
    double length_km = 0.0;
    double existing_capacity = 0.0;
    bool expandable = true;
    double loss_rate_per_1000km = 0.0;
    double capital_cost_per_unit_km = 0.0;
    double lifetime_years = 1.0;
    double max_new_capacity = lp::kInf;
};

struct Project {
    std::string id;
    std::string zone;
    Kind kind = Kind::thermal_gen;
    std::string technology;
    bool candidate = false;
    std::string fuel;
    double efficiency = 1.0;
    double charge_efficiency = 1.0;
    double discharge_efficiency = 1.0;
    double min_gen_fraction = 0.0;
    double ramp_fraction = 1.0;
    std::string parent;
    double capture_rate = 0.0;
    double ele_per_tonne = 0.0;
    double max_new_capacity = lp::kInf;
    /// Optional injection/withdrawal limit for hydrogen storage, MW.
    double power_limit = lp::kInf;
    /// Fixed energy-to-power ratio for electric storage; 0 lets energy be sized freely.
    double duration_hours = 0.0;
    /// MW (MWh for hydrogen storage, tonne/h for capture).
    double existing_capacity = 0.0;
};

/// Costs per MW (or MWh, or tonne/h); capital figures are overnight.
struct CostRecord {
    std::string technology;
    double capital = 0.0;
    double capital_energy = 0.0;
    double fixed_om = 0.0;
    double fixed_om_energy = 0.0;
    double variable_om = 0.0;
    double lifetime_years = 1.0;
};

struct Settings {
    temporal::Period period;
    std::optional<double> base_year_emissions_tonnes;
};

struct SystemDataset {
    std::string source;
    Settings settings;
    std::vector<Zone> zones;
    std::vector<Link> links;
    std::vector<Project> projects;
    std::map<std::string, CostRecord> costs;
    /// fuel -> zone ("*" for any zone) -> $/MMBtu
    std::map<std::string, std::map<std::string, double>> fuel_prices;
    /// fuel -> tonne CO2 per MMBtu
    std::map<std::string, double> emission_factors;
    std::map<std::string, temporal::HourlySeries> demand;
    std::map<std::string, temporal::HourlySeries> capacity_factors;
    /// project -> month (1..12) -> monthly average capacity factor
    std::map<std::string, std::map<int, double>> hydro_cf;
    /// zone -> share of national hydrogen demand
    std::map<std::string, double> h2_shares;
    std::vector<CO2Site> co2_sites;
    /// Per-table data row counts.
    std::map<std::string, std::size_t> row_counts;

    int zone_index(std::string_view id) const;
    int project_index(std::string_view id) const;
    const CostRecord& cost(std::string_view technology) const;
    /// Zone-specific price, falling back to "*".
    std::optional<double> fuel_price(std::string_view fuel, std::string_view zone) const;
    double annual_demand_mwh(std::string_view zone) const;
    /// Calendar-day totals of system demand (all zones summed), per month.
    std::map<int, temporal::DailyTotals> system_daily_totals() const;
};

/// Reads and cross-checks a directory of CSV tables.
SystemDataset load_system_inputs(const std::filesystem::path& directory);

/// Writes the dataset back out in the same table layout.
void write_system_inputs(const SystemDataset& dataset, const std::filesystem::path& directory);

/// Capital recovery: capital x r(1+r)^n / ((1+r)^n - 1), or capital / n at r = 0.
double annualize_capital(double capital, double lifetime_years, double discount_rate);
double capital_recovery_factor(double lifetime_years, double discount_rate);

/// rate x length / 1000; throws when the fraction reaches 1.
double derive_link_loss(double loss_rate_per_1000km, double length_km);

} // namespace gridcap::data
