#include "gridcap/system_data.hpp"

#include "gridcap/csv.hpp"
#include "gridcap/errors.hpp"
#include "gridcap/units.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace gridcap::data {

namespace fs = std::filesystem;

namespace {

struct KindName {
    Kind kind;
    std::string_view name;
};

constexpr std::array<KindName, 15> kKindNames{{
    {Kind::thermal_gen, "thermal_gen"},
    {Kind::vre_gen, "vre_gen"},
    {Kind::hydro, "hydro"},
    {Kind::nuclear, "nuclear"},
    {Kind::battery, "battery"},
    {Kind::pumped_hydro, "pumped_hydro"},
    {Kind::p2g, "p2g"},
    {Kind::g2p_fuel_cell, "g2p_fuel_cell"},
    {Kind::g2p_turbine, "g2p_turbine"},
    {Kind::h2_storage_tank, "h2_storage_tank"},
    {Kind::h2_storage_underground, "h2_storage_underground"},
    {Kind::smr, "smr"},
    {Kind::gasification, "gasification"},
    {Kind::ccs_retrofit, "ccs_retrofit"},
    {Kind::dac, "dac"},
}};

std::string num(double v)
{
    if (v == lp::kInf) return "unbounded";
    return lp::format_number(v);
}

void check_range(const csv::Row& row, std::string_view column, double v, double lo, double hi, bool lo_open)
{
    const bool bad = std::isnan(v) || (lo_open ? v <= lo : v < lo) || v > hi;
    if (bad) {
        throw ValidationError(row.where() + ": column '" + std::string(column) + "' = " + num(v) + " outside " +
                              (lo_open ? "(" : "[") + num(lo) + ", " + num(hi) + "]");
    }
}

void check_nonneg(const csv::Row& row, std::string_view column, double v)
{
    if (std::isnan(v) || v < 0.0) {
        throw ValidationError(row.where() + ": column '" + std::string(column) + "' must be non-negative");
    }
}

std::optional<csv::Table> read_optional(const fs::path& dir, const char* name)
{
    if (!fs::exists(dir / name)) return std::nullopt;
    return csv::read(dir / name);
}

void read_hourly(const csv::Table& t, std::string_view key_column, std::string_view value_column,
                 std::map<std::string, temporal::HourlySeries>& out, double lo, double hi)
{
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        csv::Row row(t, i);
        const std::string key(row.text(key_column));
        const int month = row.integer("month");
        const int day = row.integer("day");
        const int hour = row.integer("hour");
        const double value = row.number(value_column);
        check_range(row, value_column, value, lo, hi, false);
        auto& series = out[key];
        if (month >= 1 && month <= 12 && day >= 1 && day <= temporal::days_in_month(month) && hour >= 0 && hour < 24 &&
            series.has(month, day, hour)) {
            throw ValidationError(row.where() + ": duplicate value for " + key + " month " + std::to_string(month) +
                                  " day " + std::to_string(day) + " hour " + std::to_string(hour));
        }
        try {
            series.set(month, day, hour, value);
        } catch (const ValidationError& e) {
            throw ValidationError(row.where() + ": " + e.what());
        }
    }
}

void require_full_year(const temporal::HourlySeries& series, const std::string& what)
{
    auto totals = series.daily_totals(); // throws on incomplete days
    std::size_t days = 0;
    for (const auto& [m, list] : totals) days += list.size();
    if (days != static_cast<std::size_t>(temporal::kDaysPerYear)) {
        throw ValidationError(what + " covers " + std::to_string(days) + " complete days; 365 are required");
    }
}

} // namespace

std::string_view to_string(Kind kind)
{
    for (const auto& k : kKindNames) {
        if (k.kind == kind) return k.name;
    }
    return "unknown";
}

std::optional<Kind> parse_kind(std::string_view text)
{
    for (const auto& k : kKindNames) {
        if (k.name == text) return k.kind;
    }
    return std::nullopt;
}

std::string_view to_string(Commodity c)
{
    switch (c) {
    case Commodity::electricity: return "electricity";
    case Commodity::hydrogen: return "hydrogen";
    case Commodity::co2: return "co2";
    }
    return "electricity";
}

std::optional<Commodity> parse_commodity(std::string_view text)
{
    if (text == "electricity") return Commodity::electricity;
    if (text == "hydrogen") return Commodity::hydrogen;
    if (text == "co2") return Commodity::co2;
    return std::nullopt;
}

bool is_electric_storage(Kind k) { return k == Kind::battery || k == Kind::pumped_hydro; }
bool is_h2_storage(Kind k) { return k == Kind::h2_storage_tank || k == Kind::h2_storage_underground; }
bool is_g2p(Kind k) { return k == Kind::g2p_fuel_cell || k == Kind::g2p_turbine; }
bool is_fossil_h2(Kind k) { return k == Kind::smr || k == Kind::gasification; }
bool is_hydrogen_kind(Kind k) { return k == Kind::p2g || is_g2p(k) || is_h2_storage(k); }
bool burns_fuel(Kind k) { return k == Kind::thermal_gen || k == Kind::nuclear || is_fossil_h2(k); }
bool is_generator(Kind k)
{
    return k == Kind::thermal_gen || k == Kind::vre_gen || k == Kind::hydro || k == Kind::nuclear;
}

// ---------------------------------------------------------------------------

int SystemDataset::zone_index(std::string_view id) const
{
    for (std::size_t i = 0; i < zones.size(); ++i) {
        if (zones[i].id == id) return static_cast<int>(i);
    }
    return -1;
}

int SystemDataset::project_index(std::string_view id) const
{
    for (std::size_t i = 0; i < projects.size(); ++i) {
        if (projects[i].id == id) return static_cast<int>(i);
    }
    return -1;
}

const CostRecord& SystemDataset::cost(std::string_view technology) const
{
    auto it = costs.find(std::string(technology));
    if (it == costs.end()) {
        throw ValidationError("no cost record for technology '" + std::string(technology) + "'");
    }
    return it->second;
}

std::optional<double> SystemDataset::fuel_price(std::string_view fuel, std::string_view zone) const
{
    auto f = fuel_prices.find(std::string(fuel));
    if (f == fuel_prices.end()) return std::nullopt;
    if (auto z = f->second.find(std::string(zone)); z != f->second.end()) return z->second;
    if (auto z = f->second.find("*"); z != f->second.end()) return z->second;
    return std::nullopt;
}

double SystemDataset::annual_demand_mwh(std::string_view zone) const
{
    auto it = demand.find(std::string(zone));
    if (it == demand.end()) return 0.0;
    double total = 0.0;
    for (const auto& [month, days] : it->second.daily_totals()) {
        for (const auto& [day, v] : days) total += v;
    }
    return total;
}

std::map<int, temporal::DailyTotals> SystemDataset::system_daily_totals() const
{
    std::map<std::pair<int, int>, double> sum;
    for (const auto& [zone, series] : demand) {
        for (const auto& [month, days] : series.daily_totals()) {
            for (const auto& [day, v] : days) sum[{month, day}] += v;
        }
    }
    std::map<int, temporal::DailyTotals> out;
    for (const auto& [key, v] : sum) out[key.first].emplace_back(key.second, v);
    return out;
}

// ---------------------------------------------------------------------------

double capital_recovery_factor(double lifetime_years, double discount_rate)
{
    if (!(lifetime_years >= 1.0)) {
        throw ValidationError("lifetime must be at least 1 year");
    }
    if (!(discount_rate >= 0.0)) {
        throw ValidationError("discount rate must be non-negative");
    }
    if (discount_rate == 0.0) return 1.0 / lifetime_years;
    const double g = std::pow(1.0 + discount_rate, lifetime_years);
    return discount_rate * g / (g - 1.0);
}

double annualize_capital(double capital, double lifetime_years, double discount_rate)
{
    return capital * capital_recovery_factor(lifetime_years, discount_rate);
}

double derive_link_loss(double loss_rate_per_1000km, double length_km)
{
    if (!(loss_rate_per_1000km >= 0.0) || !(length_km >= 0.0)) {
        throw ValidationError("link loss inputs must be non-negative");
    }
    const double fraction = loss_rate_per_1000km * length_km / 1000.0;
    if (fraction >= 1.0) {
        throw ValidationError("link too long: loss fraction " + num(fraction) + " reaches 1");
    }
    return fraction;
}

// ---------------------------------------------------------------------------

SystemDataset load_system_inputs(const fs::path& dir)
{
    if (!fs::is_directory(dir)) {
        throw ValidationError("dataset directory not found: " + dir.string());
    }
    SystemDataset ds;
    ds.source = dir.string();

    // settings
    if (auto t = read_optional(dir, "settings.csv")) {
        for (std::size_t i = 0; i < t->rows.size(); ++i) {
            csv::Row row(*t, i);
            const std::string key(row.text("key"));
            if (key == "discount_rate") {
                ds.settings.period.discount_rate = row.number("value");
                check_nonneg(row, "value", ds.settings.period.discount_rate);
            } else if (key == "dollar_year") {
                ds.settings.period.dollar_year = row.integer("value");
            } else if (key == "period") {
                ds.settings.period.label = std::string(row.text("value"));
            } else if (key == "base_year_emissions_tonnes") {
                ds.settings.base_year_emissions_tonnes = row.number("value");
                check_nonneg(row, "value", *ds.settings.base_year_emissions_tonnes);
            } else {
                throw ValidationError(row.where() + ": unknown setting '" + key + "'");
            }
        }
        ds.row_counts["settings.csv"] = t->rows.size();
    }

    // zones
    {
        const auto t = csv::read(dir / "zones.csv");
        for (std::size_t i = 0; i < t.rows.size(); ++i) {
            csv::Row row(t, i);
            Zone z;
            z.id = std::string(row.text("zone"));
            z.name = std::string(row.text_or_empty("name"));
            if (z.name.empty()) z.name = z.id;
            z.underground_h2_allowed = row.flag("underground_h2_allowed");
            if (z.id.empty()) throw ValidationError(row.where() + ": empty zone id");
            if (ds.zone_index(z.id) >= 0) throw ValidationError(row.where() + ": duplicate zone '" + z.id + "'");
            ds.zones.push_back(std::move(z));
        }
        ds.row_counts["zones.csv"] = t.rows.size();
        if (ds.zones.empty()) throw ValidationError(t.path + ": no zones");
    }
    auto require_zone = [&](const csv::Row& row, const std::string& zone) {
        if (ds.zone_index(zone) < 0) {
            throw ValidationError(row.where() + ": unknown zone '" + zone + "'");
        }
    };

    // costs
    {
        const auto t = csv::read(dir / "costs.csv");
        for (std::size_t i = 0; i < t.rows.size(); ++i) {
            csv::Row row(t, i);
            CostRecord c;
            c.technology = std::string(row.text("technology"));
            const std::string unit(row.text_or_empty("unit"));
            double scale = 1.0;
            if (unit == "kw") {
                scale = units::kKwPerMw;
            } else if (!(unit.empty() || unit == "mw" || unit == "tonne_per_hour")) {
                throw ValidationError(row.where() + ": unknown unit '" + unit + "' (kw, mw or tonne_per_hour)");
            }
            c.capital = row.number_or("capital", 0.0) * scale;
            c.capital_energy = row.number_or("capital_energy", 0.0) * scale;
            c.fixed_om = row.number_or("fixed_om", 0.0) * scale;
            c.fixed_om_energy = row.number_or("fixed_om_energy", 0.0) * scale;
            c.variable_om = row.number_or("variable_om", 0.0);
            c.lifetime_years = row.number("lifetime_years");
            for (auto [name, v] : {std::pair{"capital", c.capital}, {"capital_energy", c.capital_energy},
                                   {"fixed_om", c.fixed_om}, {"fixed_om_energy", c.fixed_om_energy},
                                   {"variable_om", c.variable_om}}) {
                check_nonneg(row, name, v);
            }
            if (!(c.lifetime_years >= 1.0)) throw ValidationError(row.where() + ": lifetime_years must be >= 1");
            if (!ds.costs.emplace(c.technology, c).second) {
                throw ValidationError(row.where() + ": duplicate technology '" + c.technology + "'");
            }
        }
        ds.row_counts["costs.csv"] = t.rows.size();
    }

    // projects
    {
        const auto t = csv::read(dir / "projects.csv");
        for (std::size_t i = 0; i < t.rows.size(); ++i) {
            csv::Row row(t, i);
            Project p;
            p.id = std::string(row.text("project"));
            p.zone = std::string(row.text("zone"));
            const auto kind = parse_kind(row.text("kind"));
            if (!kind) throw ValidationError(row.where() + ": unknown kind '" + std::string(row.text("kind")) + "'");
            p.kind = *kind;
            p.technology = std::string(row.text_or_empty("technology"));
            if (p.technology.empty()) p.technology = std::string(to_string(p.kind));
            p.candidate = row.flag("candidate");
            p.fuel = std::string(row.text_or_empty("fuel"));
            p.efficiency = row.number_or("efficiency", 1.0);
            p.charge_efficiency = row.number_or("charge_efficiency", 1.0);
            p.discharge_efficiency = row.number_or("discharge_efficiency", 1.0);
            p.min_gen_fraction = row.number_or("min_gen_fraction", 0.0);
            p.ramp_fraction = row.number_or("ramp_fraction", 1.0);
            p.parent = std::string(row.text_or_empty("parent"));
            p.capture_rate = row.number_or("capture_rate", 0.0);
            p.ele_per_tonne = row.number_or("ele_per_tonne", 0.0);
            p.max_new_capacity = row.number_or("max_new_capacity", lp::kInf);
            p.power_limit = row.number_or("power_limit", lp::kInf);
            p.duration_hours = row.number_or("duration_hours", 0.0);

            if (p.id.empty()) throw ValidationError(row.where() + ": empty project id");
            if (ds.project_index(p.id) >= 0) throw ValidationError(row.where() + ": duplicate project '" + p.id + "'");
            require_zone(row, p.zone);
            if (!ds.costs.count(p.technology)) {
                throw ValidationError(row.where() + ": project '" + p.id + "' uses technology '" + p.technology +
                                      "' missing from costs.csv");
            }
            check_range(row, "efficiency", p.efficiency, 0.0, 1.0, true);
            check_range(row, "charge_efficiency", p.charge_efficiency, 0.0, 1.0, true);
            check_range(row, "discharge_efficiency", p.discharge_efficiency, 0.0, 1.0, true);
            check_range(row, "min_gen_fraction", p.min_gen_fraction, 0.0, 1.0, false);
            check_range(row, "ramp_fraction", p.ramp_fraction, 0.0, 1.0, true);
            check_nonneg(row, "ele_per_tonne", p.ele_per_tonne);
            check_nonneg(row, "max_new_capacity", p.max_new_capacity);
            check_nonneg(row, "power_limit", p.power_limit);
            check_nonneg(row, "duration_hours", p.duration_hours);
            if (p.kind == Kind::ccs_retrofit) {
                check_range(row, "capture_rate", p.capture_rate, 0.0, 1.0, true);
                const int parent = ds.project_index(p.parent);
                if (parent < 0) {
                    throw ValidationError(row.where() + ": CCS project '" + p.id + "' references unknown parent '" +
                                          p.parent + "' (parents must be listed first)");
                }
                const auto& par = ds.projects[static_cast<std::size_t>(parent)];
                if (!burns_fuel(par.kind) || par.kind == Kind::nuclear) {
                    throw ValidationError(row.where() + ": CCS parent '" + p.parent + "' does not burn fossil fuel");
                }
                if (par.zone != p.zone) {
                    throw ValidationError(row.where() + ": CCS project '" + p.id + "' must share its parent's zone");
                }
            }
            if (burns_fuel(p.kind) && p.fuel.empty()) {
                throw ValidationError(row.where() + ": project '" + p.id + "' burns fuel but has no fuel");
            }
            if (p.kind == Kind::h2_storage_underground &&
                !ds.zones[static_cast<std::size_t>(ds.zone_index(p.zone))].underground_h2_allowed) {
                throw ValidationError(row.where() + ": zone '" + p.zone + "' has no underground hydrogen site");
            }
            ds.projects.push_back(std::move(p));
        }
        ds.row_counts["projects.csv"] = t.rows.size();
    }

    // existing capacity sheet: zone plus one column per technology, blanks = 0
    if (auto t = read_optional(dir, "existing_capacity.csv")) {
        t->require_column("zone");
        for (std::size_t i = 0; i < t->rows.size(); ++i) {
            csv::Row row(*t, i);
            const std::string zone(row.text("zone"));
            require_zone(row, zone);
            for (const auto& tech : t->header) {
                if (tech == "zone") continue;
                const double mw = row.number_or(tech, 0.0);
                check_nonneg(row, tech, mw);
                if (mw == 0.0) continue;
                int match = -1;
                for (std::size_t p = 0; p < ds.projects.size(); ++p) {
                    if (ds.projects[p].zone == zone && ds.projects[p].technology == tech) {
                        if (match >= 0) {
                            throw ValidationError(row.where() + ": existing " + tech + " in " + zone +
                                                  " matches several projects");
                        }
                        match = static_cast<int>(p);
                    }
                }
                if (match < 0) {
                    throw ValidationError(row.where() + ": existing " + tech + " in " + zone +
                                          " has no project in projects.csv");
                }
                ds.projects[static_cast<std::size_t>(match)].existing_capacity += mw;
            }
        }
        ds.row_counts["existing_capacity.csv"] = t->rows.size();
    }

    // fuel prices and emission factors
    if (auto t = read_optional(dir, "fuel_prices.csv")) {
        for (std::size_t i = 0; i < t->rows.size(); ++i) {
            csv::Row row(*t, i);
            const std::string fuel(row.text("fuel"));
            std::string zone(row.text_or_empty("zone"));
            if (zone.empty()) zone = "*";
            if (zone != "*") require_zone(row, zone);
            const double price = row.number("price_per_mmbtu");
            check_nonneg(row, "price_per_mmbtu", price);
            if (!ds.fuel_prices[fuel].emplace(zone, price).second) {
                throw ValidationError(row.where() + ": duplicate price for " + fuel + " in " + zone);
            }
        }
        ds.row_counts["fuel_prices.csv"] = t->rows.size();
    }
    if (auto t = read_optional(dir, "emission_factors.csv")) {
        for (std::size_t i = 0; i < t->rows.size(); ++i) {
            csv::Row row(*t, i);
            const double ef = row.number("tonnes_per_mmbtu");
            check_nonneg(row, "tonnes_per_mmbtu", ef);
            if (!ds.emission_factors.emplace(std::string(row.text("fuel")), ef).second) {
                throw ValidationError(row.where() + ": duplicate emission factor");
            }
        }
        ds.row_counts["emission_factors.csv"] = t->rows.size();
    }
    for (const auto& p : ds.projects) {
        if (!burns_fuel(p.kind)) continue;
        if (!ds.fuel_price(p.fuel, p.zone)) {
            throw ValidationError("fuel_prices.csv: no price for fuel '" + p.fuel + "' in zone '" + p.zone +
                                  "' (needed by project '" + p.id + "')");
        }
        if (!ds.emission_factors.count(p.fuel)) {
            throw ValidationError("emission_factors.csv: no emission factor for fuel '" + p.fuel +
                                  "' (needed by project '" + p.id + "'; there is no default)");
        }
    }

    // links
    if (auto t = read_optional(dir, "links.csv")) {
        std::set<std::string> ids;
        for (std::size_t i = 0; i < t->rows.size(); ++i) {
            csv::Row row(*t, i);
            Link l;
            l.id = std::string(row.text("link"));
            const auto c = parse_commodity(row.text("commodity"));
            if (!c) throw ValidationError(row.where() + ": unknown commodity '" + std::string(row.text("commodity")) + "'");
            l.commodity = *c;
            l.from = std::string(row.text("from_zone"));
            l.to = std::string(row.text("to_zone"));
            l.length_km = row.number("length_km");
            l.existing_capacity = row.number_or("existing_capacity", 0.0);
            l.expandable = row.flag("expandable", true);
            l.loss_rate_per_1000km = row.number_or("loss_rate_per_1000km", 0.0);
            l.capital_cost_per_unit_km = row.number_or("capital_cost_per_unit_km", 0.0);
            l.lifetime_years = row.number_or("lifetime_years", 1.0);
            l.max_new_capacity = row.number_or("max_new_capacity", lp::kInf);
            if (!ids.insert(l.id).second) throw ValidationError(row.where() + ": duplicate link '" + l.id + "'");
            require_zone(row, l.from);
            require_zone(row, l.to);
            if (l.from == l.to) throw ValidationError(row.where() + ": link '" + l.id + "' connects a zone to itself");
            check_nonneg(row, "length_km", l.length_km);
            check_nonneg(row, "existing_capacity", l.existing_capacity);
            check_nonneg(row, "capital_cost_per_unit_km", l.capital_cost_per_unit_km);
            check_nonneg(row, "max_new_capacity", l.max_new_capacity);
            if (!(l.lifetime_years >= 1.0)) throw ValidationError(row.where() + ": lifetime_years must be >= 1");
            try {
                derive_link_loss(l.loss_rate_per_1000km, l.length_km);
            } catch (const ValidationError& e) {
                throw ValidationError(row.where() + ": " + e.what());
            }
            ds.links.push_back(std::move(l));
        }
        ds.row_counts["links.csv"] = t->rows.size();
    }

    // demand
    {
        const auto t = csv::read(dir / "demand.csv");
        for (std::size_t i = 0; i < t.rows.size(); ++i) require_zone(csv::Row(t, i), std::string(csv::Row(t, i).text("zone")));
        read_hourly(t, "zone", "demand_mw", ds.demand, 0.0, lp::kInf);
        ds.row_counts["demand.csv"] = t.rows.size();
        for (auto& z : ds.zones) {
            auto it = ds.demand.find(z.id);
            if (it == ds.demand.end()) throw ValidationError(t.path + ": no demand for zone '" + z.id + "'");
            require_full_year(it->second, t.path + ": zone '" + z.id + "'");
            for (const auto& [m, d] : it->second.days()) {
                for (int h = 0; h < 24; ++h) z.peak_load_mw = std::max(z.peak_load_mw, it->second.at(m, d, h));
            }
        }
    }

    // capacity factors
    if (auto t = read_optional(dir, "capacity_factors.csv")) {
        for (std::size_t i = 0; i < t->rows.size(); ++i) {
            csv::Row row(*t, i);
            const std::string id(row.text("project"));
            const int p = ds.project_index(id);
            if (p < 0) throw ValidationError(row.where() + ": unknown project '" + id + "'");
            if (ds.projects[static_cast<std::size_t>(p)].kind != Kind::vre_gen) {
                throw ValidationError(row.where() + ": project '" + id + "' is not a vre_gen");
            }
        }
        read_hourly(*t, "project", "capacity_factor", ds.capacity_factors, 0.0, 1.0);
        ds.row_counts["capacity_factors.csv"] = t->rows.size();
    }
    for (const auto& p : ds.projects) {
        if (p.kind != Kind::vre_gen) continue;
        auto it = ds.capacity_factors.find(p.id);
        if (it == ds.capacity_factors.end()) {
            throw ValidationError("capacity_factors.csv: no series for VRE project '" + p.id + "'");
        }
        require_full_year(it->second, "capacity_factors.csv: project '" + p.id + "'");
    }

    // hydro monthly capacity factors
    if (auto t = read_optional(dir, "hydro_cf.csv")) {
        for (std::size_t i = 0; i < t->rows.size(); ++i) {
            csv::Row row(*t, i);
            const std::string id(row.text("project"));
            const int p = ds.project_index(id);
            if (p < 0 || ds.projects[static_cast<std::size_t>(p)].kind != Kind::hydro) {
                throw ValidationError(row.where() + ": '" + id + "' is not a hydro project");
            }
            const int month = row.integer("month");
            if (month < 1 || month > 12) throw ValidationError(row.where() + ": month out of range");
            const double cf = row.number("capacity_factor");
            check_range(row, "capacity_factor", cf, 0.0, 1.0, false);
            if (!ds.hydro_cf[id].emplace(month, cf).second) {
                throw ValidationError(row.where() + ": duplicate month for '" + id + "'");
            }
        }
        ds.row_counts["hydro_cf.csv"] = t->rows.size();
    }
    for (const auto& p : ds.projects) {
        if (p.kind == Kind::hydro && ds.hydro_cf[p.id].size() != 12) {
            throw ValidationError("hydro_cf.csv: hydro project '" + p.id + "' needs 12 monthly capacity factors");
        }
    }

    // hydrogen demand shares
    if (auto t = read_optional(dir, "h2_demand.csv")) {
        double total = 0.0;
        for (std::size_t i = 0; i < t->rows.size(); ++i) {
            csv::Row row(*t, i);
            const std::string zone(row.text("zone"));
            require_zone(row, zone);
            const double share = row.number("annual_share");
            check_range(row, "annual_share", share, 0.0, 1.0, false);
            if (!ds.h2_shares.emplace(zone, share).second) throw ValidationError(row.where() + ": duplicate zone");
            total += share;
        }
        if (!t->rows.empty() && std::abs(total - 1.0) > 1e-6) {
            throw ValidationError(t->path + ": annual_share sums to " + num(total) + ", expected 1");
        }
        ds.row_counts["h2_demand.csv"] = t->rows.size();
    }

    // CO2 storage sites
    if (auto t = read_optional(dir, "co2_sites.csv")) {
        for (std::size_t i = 0; i < t->rows.size(); ++i) {
            csv::Row row(*t, i);
            CO2Site s;
            s.zone = std::string(row.text("zone"));
            require_zone(row, s.zone);
            s.kind = std::string(row.text("kind"));
            if (s.kind != "onshore" && s.kind != "offshore") {
                throw ValidationError(row.where() + ": CO2 site kind must be onshore or offshore");
            }
            s.capacity_tonnes = row.number("capacity_tonnes");
            check_nonneg(row, "capacity_tonnes", s.capacity_tonnes);
            ds.co2_sites.push_back(std::move(s));
        }
        ds.row_counts["co2_sites.csv"] = t->rows.size();
    }
    return ds;
}

// ---------------------------------------------------------------------------

void write_system_inputs(const SystemDataset& ds, const fs::path& dir)
{
    fs::create_directories(dir);
    using Rows = std::vector<std::vector<std::string>>;

    {
        Rows rows{{"discount_rate", num(ds.settings.period.discount_rate)},
                  {"dollar_year", std::to_string(ds.settings.period.dollar_year)},
                  {"period", ds.settings.period.label}};
        if (ds.settings.base_year_emissions_tonnes) {
            rows.push_back({"base_year_emissions_tonnes", num(*ds.settings.base_year_emissions_tonnes)});
        }
        csv::write(dir / "settings.csv", {"key", "value"}, rows);
    }
    {
        Rows rows;
        for (const auto& z : ds.zones) rows.push_back({z.id, z.name, z.underground_h2_allowed ? "1" : "0"});
        csv::write(dir / "zones.csv", {"zone", "name", "underground_h2_allowed"}, rows);
    }
    {
        Rows rows;
        for (const auto& [tech, c] : ds.costs) {
            rows.push_back({tech, num(c.capital), num(c.capital_energy), num(c.fixed_om), num(c.fixed_om_energy),
                            num(c.variable_om), num(c.lifetime_years), "mw"});
        }
        csv::write(dir / "costs.csv",
                   {"technology", "capital", "capital_energy", "fixed_om", "fixed_om_energy", "variable_om",
                    "lifetime_years", "unit"},
                   rows);
    }
    {
        Rows rows;
        std::set<std::string> techs;
        for (const auto& p : ds.projects) {
            rows.push_back({p.id, p.zone, std::string(to_string(p.kind)), p.technology, p.candidate ? "1" : "0", p.fuel,
                            num(p.efficiency), num(p.charge_efficiency), num(p.discharge_efficiency),
                            num(p.min_gen_fraction), num(p.ramp_fraction), p.parent, num(p.capture_rate),
                            num(p.ele_per_tonne), num(p.max_new_capacity), num(p.power_limit),
                            num(p.duration_hours)});
            if (p.existing_capacity > 0.0) techs.insert(p.technology);
        }
        csv::write(dir / "projects.csv",
                   {"project", "zone", "kind", "technology", "candidate", "fuel", "efficiency", "charge_efficiency",
                    "discharge_efficiency", "min_gen_fraction", "ramp_fraction", "parent", "capture_rate",
                    "ele_per_tonne", "max_new_capacity", "power_limit", "duration_hours"},
                   rows);

        std::vector<std::string> header{"zone"};
        header.insert(header.end(), techs.begin(), techs.end());
        Rows sheet;
        for (const auto& z : ds.zones) {
            std::vector<std::string> r{z.id};
            for (const auto& tech : techs) {
                double mw = 0.0;
                for (const auto& p : ds.projects) {
                    if (p.zone == z.id && p.technology == tech) mw += p.existing_capacity;
                }
                r.push_back(mw == 0.0 ? std::string() : num(mw));
            }
            sheet.push_back(std::move(r));
        }
        csv::write(dir / "existing_capacity.csv", header, sheet);
    }
    {
        Rows rows;
        for (const auto& [fuel, zones] : ds.fuel_prices) {
            for (const auto& [zone, price] : zones) rows.push_back({fuel, zone, num(price)});
        }
        csv::write(dir / "fuel_prices.csv", {"fuel", "zone", "price_per_mmbtu"}, rows);
        Rows ef;
        for (const auto& [fuel, v] : ds.emission_factors) ef.push_back({fuel, num(v)});
        csv::write(dir / "emission_factors.csv", {"fuel", "tonnes_per_mmbtu"}, ef);
    }
    {
        Rows rows;
        for (const auto& l : ds.links) {
            rows.push_back({l.id, std::string(to_string(l.commodity)), l.from, l.to, num(l.length_km),
                            num(l.existing_capacity), l.expandable ? "1" : "0", num(l.loss_rate_per_1000km),
                            num(l.capital_cost_per_unit_km), num(l.lifetime_years), num(l.max_new_capacity)});
        }
        csv::write(dir / "links.csv",
                   {"link", "commodity", "from_zone", "to_zone", "length_km", "existing_capacity", "expandable",
                    "loss_rate_per_1000km", "capital_cost_per_unit_km", "lifetime_years", "max_new_capacity"},
                   rows);
    }
    auto write_hourly = [&](const char* file, const char* key_col, const char* value_col,
                            const std::map<std::string, temporal::HourlySeries>& series) {
        Rows rows;
        for (const auto& [key, s] : series) {
            for (const auto& [m, d] : s.days()) {
                for (int h = 0; h < 24; ++h) {
                    if (s.has(m, d, h)) {
                        rows.push_back({key, std::to_string(m), std::to_string(d), std::to_string(h), num(s.at(m, d, h))});
                    }
                }
            }
        }
        csv::write(dir / file, {key_col, "month", "day", "hour", value_col}, rows);
    };
    write_hourly("demand.csv", "zone", "demand_mw", ds.demand);
    write_hourly("capacity_factors.csv", "project", "capacity_factor", ds.capacity_factors);
    {
        Rows rows;
        for (const auto& [p, months] : ds.hydro_cf) {
            for (const auto& [m, cf] : months) rows.push_back({p, std::to_string(m), num(cf)});
        }
        csv::write(dir / "hydro_cf.csv", {"project", "month", "capacity_factor"}, rows);
    }
    {
        Rows rows;
        for (const auto& [z, s] : ds.h2_shares) rows.push_back({z, num(s)});
        csv::write(dir / "h2_demand.csv", {"zone", "annual_share"}, rows);
    }
    {
        Rows rows;
        for (const auto& s : ds.co2_sites) rows.push_back({s.zone, s.kind, num(s.capacity_tonnes)});
        csv::write(dir / "co2_sites.csv", {"zone", "kind", "capacity_tonnes"}, rows);
    }
}

} // namespace gridcap::data
