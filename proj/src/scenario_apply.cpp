#include "gridcap/errors.hpp"
#include "gridcap/scenario.hpp"

#include <algorithm>
#include <cmath>

namespace gridcap::scenario {

using data::Kind;

namespace {

std::optional<bool> lookup(const ScenarioConfig& c, const std::string& key)
{
    if (key.empty()) return std::nullopt;
    const auto it = c.tech_flags.find(key);
    if (it == c.tech_flags.end()) return std::nullopt;
    return it->second;
}

bool forbids_kind(const ScenarioConfig& c, Kind kind, const std::string& technology, const std::string& fuel,
                  std::optional<Kind> parent_kind)
{
    for (const auto& key : {technology, std::string(data::to_string(kind)), fuel}) {
        if (auto v = lookup(c, key)) return !*v;
    }
    auto group = [&](const char* name, bool member, bool fallback) -> std::optional<bool> {
        if (!member) return std::nullopt;
        if (auto v = lookup(c, name)) return !*v;
        return fallback ? std::optional<bool>(true) : std::nullopt;
    };
    if (auto v = group("hydrogen", data::is_hydrogen_kind(kind), false)) return *v;
    if (auto v = group("fossil_generation", kind == Kind::thermal_gen, false)) return *v;
    if (auto v = group("fossil_h2", data::is_fossil_h2(kind), !c.blue_h2)) return *v;
    if (auto v = group("ccs", kind == Kind::ccs_retrofit, false)) return *v;
    if (auto v = group("dac", kind == Kind::dac, false)) return *v;
    if (kind == Kind::ccs_retrofit && parent_kind && data::is_fossil_h2(*parent_kind) && !c.blue_h2) return true;
    return false;
}

double default_credit(Kind k)
{
    switch (k) {
    case Kind::thermal_gen:
    case Kind::nuclear:
    case Kind::hydro:
    case Kind::g2p_fuel_cell:
    case Kind::g2p_turbine: return 1.0;
    default: return 0.0;
    }
}

data::CostRecord effective_cost(const ScenarioConfig& c, const data::CostRecord& base)
{
    data::CostRecord r = base;
    for (const auto& o : c.cost_overrides) {
        if (o.technology != base.technology) continue;
        if (o.capital) r.capital = *o.capital;
        if (o.capital_energy) r.capital_energy = *o.capital_energy;
        if (o.fixed_om) r.fixed_om = *o.fixed_om;
        if (o.fixed_om_energy) r.fixed_om_energy = *o.fixed_om_energy;
        if (o.variable_om) r.variable_om = *o.variable_om;
        r.capital *= o.capital_multiplier;
        r.capital_energy *= o.capital_multiplier;
        r.fixed_om *= o.fixed_om_multiplier;
        r.fixed_om_energy *= o.fixed_om_multiplier;
    }
    return r;
}

temporal::TemporalStructure make_time(const data::SystemDataset& ds, Layout layout)
{
    if (layout == Layout::full_year) return temporal::TemporalStructure::full_year(ds.settings.period);
    return temporal::TemporalStructure::representative(ds.settings.period,
                                                       temporal::select_representative_days(ds.system_daily_totals()));
}

/// (month, day, hour) of the calendar hour a timepoint was drawn from.
struct Source {
    int month;
    int day;
    int hour;
};

std::vector<Source> timepoint_sources(const temporal::TemporalStructure& time)
{
    std::vector<Source> out;
    out.reserve(time.size());
    for (const auto& tp : time.timepoints()) {
        const auto& h = time.horizons()[static_cast<std::size_t>(tp.horizon)];
        if (h.month < 1 || h.source_day < 1) {
            throw ValidationError("timepoint " + std::to_string(tp.id) + " has no calendar source day");
        }
        out.push_back({h.month, h.source_day, tp.hour_of_day});
    }
    return out;
}

std::vector<double> sample(const temporal::HourlySeries& series, const std::vector<Source>& src, const std::string& what)
{
    std::vector<double> out;
    out.reserve(src.size());
    for (const auto& s : src) {
        if (!series.has(s.month, s.day, s.hour)) {
            throw ValidationError(what + ": no value for month " + std::to_string(s.month) + " day " +
                                  std::to_string(s.day) + " hour " + std::to_string(s.hour));
        }
        out.push_back(series.at(s.month, s.day, s.hour));
    }
    return out;
}

bool matches(const model::ProjectInput& p, const std::vector<std::string>& members)
{
    return std::any_of(members.begin(), members.end(), [&](const std::string& m) {
        return m == p.technology || m == data::to_string(p.kind);
    });
}

void add_decoupled_fleet(model::ModelInputs& in)
{
    const std::size_t n = in.projects.size();
    in.projects.reserve(2 * n);
    std::vector<int> clone_of(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& p = in.projects[i];
        bool clone = p.kind == Kind::p2g || data::is_fossil_h2(p.kind);
        if (p.kind == Kind::ccs_retrofit && p.parent >= 0) clone = clone_of[static_cast<std::size_t>(p.parent)] >= 0;
        if (!clone || !p.candidate) continue;
        model::ProjectInput c = p;
        c.id = p.id + "_hta";
        c.existing = 0.0;
        c.existing_energy = 0.0;
        c.industrial = true;
        c.reserve_credit = 0.0;
        if (c.parent >= 0) c.parent = clone_of[static_cast<std::size_t>(c.parent)];
        clone_of[i] = static_cast<int>(in.projects.size());
        in.projects.push_back(std::move(c));
        if (std::isfinite(p.max_new)) {
            in.groups.push_back({p.id + "_joint", {static_cast<int>(i), clone_of[i]}, p.max_new});
        }
    }
}

} // namespace

bool forbids(const ScenarioConfig& config, const data::Project& project)
{
    return forbids_kind(config, project.kind, project.technology, project.fuel, std::nullopt);
}

void check_consistency(const ScenarioConfig& config, const model::ModelInputs& inputs)
{
    for (const auto& p : inputs.projects) {
        if (!p.candidate || !(p.max_new > 0.0)) continue;
        std::optional<Kind> parent;
        if (p.parent >= 0) parent = inputs.projects[static_cast<std::size_t>(p.parent)].kind;
        if (forbids_kind(config, p.kind, p.technology, p.fuel, parent)) {
            throw ValidationError("scenario '" + config.name + "' forbids " + std::string(data::to_string(p.kind)) +
                                  " but project '" + p.id + "' is a candidate");
        }
    }
    for (const auto& l : inputs.links) {
        const auto it = config.network_expansion.find(l.commodity);
        if (it != config.network_expansion.end() && !it->second && l.expandable) {
            throw ValidationError("scenario '" + config.name + "' freezes the " +
                                  std::string(data::to_string(l.commodity)) + " network but link '" + l.id +
                                  "' is expandable");
        }
    }
}

model::ModelInputs apply_scenario(const ScenarioConfig& config, const data::SystemDataset& ds)
{
    return apply_scenario(config, ds, config.layout);
}

model::ModelInputs apply_scenario(const ScenarioConfig& config, const data::SystemDataset& ds, Layout layout)
{
    validate(config);
    model::ModelInputs in;
    in.time = make_time(ds, layout);
    const auto src = timepoint_sources(in.time);
    const double r = ds.settings.period.discount_rate;

    for (const auto& z : ds.zones) {
        in.zones.push_back(z.id);
        const auto it = ds.demand.find(z.id);
        if (it == ds.demand.end()) throw ValidationError("zone '" + z.id + "' has no demand series");
        in.demand.push_back(sample(it->second, src, "demand of zone '" + z.id + "'"));
    }

    for (const auto& p : ds.projects) {
        model::ProjectInput pi;
        pi.id = p.id;
        pi.zone = ds.zone_index(p.zone);
        pi.kind = p.kind;
        pi.technology = p.technology;
        pi.fuel = p.fuel;
        pi.efficiency = p.efficiency;
        pi.charge_efficiency = p.charge_efficiency;
        pi.discharge_efficiency = p.discharge_efficiency;
        pi.min_gen_fraction = p.min_gen_fraction;
        pi.ramp_fraction = p.ramp_fraction;
        pi.parent = p.parent.empty() ? -1 : ds.project_index(p.parent);
        pi.capture_rate = p.capture_rate;
        pi.ele_per_tonne = p.ele_per_tonne;
        pi.existing = p.existing_capacity;
        pi.power_limit = p.power_limit;
        pi.duration_hours = p.duration_hours;

        std::optional<Kind> parent_kind;
        if (pi.parent >= 0) parent_kind = ds.projects[static_cast<std::size_t>(pi.parent)].kind;
        pi.candidate = p.candidate && !forbids_kind(config, p.kind, p.technology, p.fuel, parent_kind);
        pi.max_new = pi.candidate ? p.max_new_capacity : 0.0;
        pi.max_new_energy = pi.candidate ? lp::kInf : 0.0;

        const auto cost = effective_cost(config, ds.cost(p.technology));
        pi.annual_capex = data::annualize_capital(cost.capital, cost.lifetime_years, r);
        pi.annual_capex_energy = data::annualize_capital(cost.capital_energy, cost.lifetime_years, r);
        pi.fixed_om = cost.fixed_om;
        pi.fixed_om_energy = cost.fixed_om_energy;
        pi.variable_om = cost.variable_om;
        for (const auto& o : config.cost_overrides) {
            if (o.technology == p.technology && o.efficiency) pi.efficiency = *o.efficiency;
        }

        if (data::burns_fuel(p.kind)) {
            pi.fuel_price = ds.fuel_price(p.fuel, p.zone).value_or(0.0);
            const auto ef = ds.emission_factors.find(p.fuel);
            pi.emission_factor = ef == ds.emission_factors.end() ? 0.0 : ef->second;
        }
        pi.reserve_credit = default_credit(p.kind);
        if (const auto it = config.reserve.credits.find(std::string(data::to_string(p.kind)));
            it != config.reserve.credits.end()) {
            pi.reserve_credit = it->second;
        }
        if (p.kind == Kind::nuclear && config.nuclear_min_gen) pi.min_gen_fraction = *config.nuclear_min_gen;
        if (p.kind == Kind::ccs_retrofit && config.ccs_capture_rate) pi.capture_rate = *config.ccs_capture_rate;

        if (p.kind == Kind::vre_gen) {
            const auto it = ds.capacity_factors.find(p.id);
            if (it == ds.capacity_factors.end()) throw ValidationError("VRE project '" + p.id + "' has no capacity factors");
            pi.capacity_factor = sample(it->second, src, "capacity factor of '" + p.id + "'");
        }
        if (p.kind == Kind::hydro) {
            const auto it = ds.hydro_cf.find(p.id);
            if (it == ds.hydro_cf.end()) throw ValidationError("hydro project '" + p.id + "' has no monthly capacity factors");
            for (const auto& [month, cf] : it->second) pi.hydro_cf[static_cast<std::size_t>(month)] = cf;
        }
        in.projects.push_back(std::move(pi));
    }

    if (config.decoupled) add_decoupled_fleet(in);

    for (const auto& cap : config.capacity_caps) {
        model::CapacityGroup g;
        g.name = cap.name;
        double existing = 0.0;
        for (std::size_t i = 0; i < in.projects.size(); ++i) {
            if (!matches(in.projects[i], cap.members)) continue;
            g.projects.push_back(static_cast<int>(i));
            existing += in.projects[i].existing;
        }
        g.max_new = std::max(0.0, cap.mw - existing);
        if (!g.projects.empty()) in.groups.push_back(std::move(g));
    }

    for (const auto& l : ds.links) {
        model::LinkInput li;
        li.id = l.id;
        li.commodity = l.commodity;
        li.from = ds.zone_index(l.from);
        li.to = ds.zone_index(l.to);
        li.loss = data::derive_link_loss(l.loss_rate_per_1000km, l.length_km);
        li.existing = l.existing_capacity;
        const auto frozen = config.network_expansion.find(l.commodity);
        li.expandable = l.expandable && (frozen == config.network_expansion.end() || frozen->second);
        li.max_new = l.max_new_capacity;
        li.annual_capex = data::annualize_capital(l.capital_cost_per_unit_km * l.length_km, l.lifetime_years, r);
        in.links.push_back(li);
    }

    for (const auto& s : ds.co2_sites) {
        model::SiteInput si;
        si.zone = ds.zone_index(s.zone);
        si.kind = s.kind;
        si.capacity_tonnes = s.capacity_tonnes;
        const auto it = ds.costs.find("co2_storage_" + s.kind);
        if (it != ds.costs.end()) {
            const auto cost = effective_cost(config, it->second);
            si.annual_capex = data::annualize_capital(cost.capital, cost.lifetime_years, r) + cost.fixed_om;
        }
        in.sites.push_back(si);
    }

    if (config.h2_demand.annual_twh > 0.0) {
        std::vector<double> shares(in.zones.size(), 0.0);
        if (!ds.h2_shares.empty()) {
            for (std::size_t z = 0; z < in.zones.size(); ++z) {
                const auto it = ds.h2_shares.find(in.zones[z]);
                if (it != ds.h2_shares.end()) shares[z] = it->second;
            }
        } else {
            double total = 0.0;
            for (std::size_t z = 0; z < in.zones.size(); ++z) {
                shares[z] = ds.annual_demand_mwh(in.zones[z]);
                total += shares[z];
            }
            if (total <= 0.0) throw ValidationError("hydrogen demand shares: no electricity demand to split by");
            for (auto& s : shares) s /= total;
        }
        in.h2_load = hydrogen_chain::build_h2_demand_profile(config.h2_demand.annual_twh * 1e6, shares,
                                                             config.h2_demand.mode, in.demand, in.time);
    }
    in.h2_decoupled = config.decoupled;

    const auto& cap = config.emission_cap;
    if (cap.mode == EmissionCap::Mode::absolute) {
        in.carbon_cap = cap.tonnes;
    } else if (cap.mode == EmissionCap::Mode::fraction_of_base) {
        const auto base = cap.base_tonnes ? cap.base_tonnes : ds.settings.base_year_emissions_tonnes;
        if (!base) {
            throw ValidationError("scenario '" + config.name +
                                  "': fraction_of_base cap needs base_tonnes or the dataset's base_year_emissions_tonnes");
        }
        in.carbon_cap = cap.fraction * *base;
    }
    in.cap_zonal = config.cap_zonal;
    in.reserve = {config.reserve.enabled, config.reserve.margin, config.reserve.zonal};

    check_consistency(config, in);
    model::validate_inputs(in);
    return in;
}

} // namespace gridcap::scenario
