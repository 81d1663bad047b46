#include "gridcap/errors.hpp"
#include "gridcap/formulas.hpp"
#include "gridcap/model.hpp"
#include "gridcap/units.hpp"

#include <cmath>

namespace gridcap {

namespace hydrogen_chain {

double p2g_output(double electricity_in, double efficiency) { return electricity_in * efficiency; }

double g2p_output(double hydrogen_in, double efficiency) { return hydrogen_in * efficiency; }

double fossil_fuel_burn_mmbtu(double production_mwh, double efficiency)
{
    return production_mwh * units::kMmbtuPerMwh / efficiency;
}

std::vector<std::vector<double>> build_h2_demand_profile(double annual_mwh, const std::vector<double>& zone_shares,
                                                         DemandMode mode,
                                                         const std::vector<std::vector<double>>& demand,
                                                         const temporal::TemporalStructure& time)
{
    if (!(annual_mwh >= 0.0) || !std::isfinite(annual_mwh)) {
        throw ValidationError("annual hydrogen demand must be finite and >= 0");
    }
    double share_sum = 0.0;
    for (double s : zone_shares) {
        if (!(s >= 0.0)) throw ValidationError("hydrogen demand shares must be >= 0");
        share_sum += s;
    }
    if (std::abs(share_sum - 1.0) > 1e-6) {
        throw ValidationError("hydrogen demand shares sum to " + std::to_string(share_sum) + ", expected 1");
    }
    const std::size_t nt = time.size();
    std::vector<std::vector<double>> out(zone_shares.size(), std::vector<double>(nt, 0.0));
    for (std::size_t z = 0; z < zone_shares.size(); ++z) {
        const double zone_total = zone_shares[z] * annual_mwh;
        if (mode == DemandMode::flat) {
            for (std::size_t t = 0; t < nt; ++t) out[z][t] = zone_total / units::kHoursPerYear;
            continue;
        }
        if (z >= demand.size() || demand[z].size() != nt) {
            throw ValidationError("shaped hydrogen demand needs an electricity demand row per zone");
        }
        double weighted = 0.0;
        for (std::size_t t = 0; t < nt; ++t) weighted += time.timepoints()[t].scale() * demand[z][t];
        if (weighted <= 0.0) {
            if (zone_total == 0.0) continue;
            throw ValidationError("shaped hydrogen demand: zone " + std::to_string(z) +
                                  " has zero electricity demand to follow");
        }
        for (std::size_t t = 0; t < nt; ++t) out[z][t] = zone_total * demand[z][t] / weighted;
    }
    return out;
}

} // namespace hydrogen_chain

namespace model::hydrogen_chain {

using data::Kind;

namespace {

constexpr const char* kSrc = "hydrogen_chain";

void add_p2g(Assembly& a, Ledger& ledger, const ModelInputs& in, std::size_t index)
{
    const auto& p = in.projects[index];
    auto& pv = a.projects[index];
    auto& m = a.model;
    const auto cap = pv.capacity(p);
    const auto z = static_cast<std::size_t>(p.zone);
    auto& h2 = p.industrial ? ledger.h2_industrial : ledger.h2;
    for (std::size_t t = 0; t < in.num_timepoints(); ++t) {
        const std::string sfx = "_" + p.id + tp_suffix(static_cast<int>(t));
        lp::Var input = m.add_var("h2_p2ginput" + sfx);
        pv.activity.push_back(input);
        limit_by_capacity(m, input, cap, 1.0, "h2_p2gmax" + sfx, kSrc);
        ledger.power[z][t].add(input, -1.0);
        h2[z][t].add(input, p.efficiency);
        ledger.objective.add(input, in.scale(static_cast<int>(t)) * p.variable_om);
    }
}

void add_g2p(Assembly& a, Ledger& ledger, const ModelInputs& in, std::size_t index)
{
    const auto& p = in.projects[index];
    auto& pv = a.projects[index];
    auto& m = a.model;
    const auto cap = pv.capacity(p);
    const auto z = static_cast<std::size_t>(p.zone);
    for (std::size_t t = 0; t < in.num_timepoints(); ++t) {
        const std::string sfx = "_" + p.id + tp_suffix(static_cast<int>(t));
        lp::Var gen = m.add_var("h2_g2pgen" + sfx);
        pv.activity.push_back(gen);
        limit_by_capacity(m, gen, cap, 1.0, "h2_g2pmax" + sfx, kSrc);
        ledger.power[z][t].add(gen);
        ledger.h2[z][t].add(gen, -1.0 / p.efficiency);
        ledger.objective.add(gen, in.scale(static_cast<int>(t)) * p.variable_om);
    }
}

void add_storage(Assembly& a, Ledger& ledger, const ModelInputs& in, std::size_t index)
{
    const auto& p = in.projects[index];
    auto& pv = a.projects[index];
    auto& m = a.model;
    const auto energy = pv.energy_capacity(p);
    const auto z = static_cast<std::size_t>(p.zone);
    const auto& time = in.time;
    const int nt = static_cast<int>(in.num_timepoints());
    for (int t = 0; t < nt; ++t) {
        const std::string sfx = "_" + p.id + tp_suffix(t);
        lp::Var charge = m.add_var("h2_charge" + sfx, 0.0, p.power_limit);
        lp::Var discharge = m.add_var("h2_discharge" + sfx, 0.0, p.power_limit);
        lp::Var state = m.add_var("h2_state" + sfx);
        pv.charge.push_back(charge);
        pv.activity.push_back(discharge);
        pv.state.push_back(state);
        limit_by_capacity(m, state, energy, 1.0, "h2_statemax" + sfx, kSrc);
        ledger.h2[z][static_cast<std::size_t>(t)].add(discharge).add(charge, -1.0);
        ledger.objective.add(discharge, in.scale(t) * p.variable_om);
    }
    // Chronological across all horizons of the period, weighted, cyclic over the year.
    for (int t = 0; t < nt; ++t) {
        const int prev = time.previous_in_period(t);
        const double s = in.scale(prev);
        lp::LinearExpr e(pv.state[static_cast<std::size_t>(t)]);
        e.add(pv.state[static_cast<std::size_t>(prev)], -1.0);
        e.add(pv.charge[static_cast<std::size_t>(prev)], -p.charge_efficiency * s);
        e.add(pv.activity[static_cast<std::size_t>(prev)], s / p.discharge_efficiency);
        m.add_constraint("h2_soc_" + p.id + tp_suffix(t), e, lp::Sense::eq, 0.0, kSrc);
    }
}

void add_fossil(Assembly& a, Ledger& ledger, const ModelInputs& in, std::size_t index)
{
    const auto& p = in.projects[index];
    auto& pv = a.projects[index];
    auto& m = a.model;
    const auto cap = pv.capacity(p);
    const auto z = static_cast<std::size_t>(p.zone);
    auto& h2 = p.industrial ? ledger.h2_industrial : ledger.h2;
    for (std::size_t t = 0; t < in.num_timepoints(); ++t) {
        const std::string sfx = "_" + p.id + tp_suffix(static_cast<int>(t));
        const double s = in.scale(static_cast<int>(t));
        lp::Var prod = m.add_var("h2_fossilprod" + sfx);
        lp::Var fuel = m.add_var("h2_fuel" + sfx);
        pv.activity.push_back(prod);
        pv.fuel_burn.push_back(fuel);
        limit_by_capacity(m, prod, cap, 1.0, "h2_fossilmax" + sfx, kSrc);
        lp::LinearExpr def(fuel);
        def.add(prod, -units::kMmbtuPerMwh / p.efficiency);
        m.add_constraint("h2_fueldef" + sfx, def, lp::Sense::eq, 0.0, kSrc);
        h2[z][t].add(prod);
        ledger.objective.add(prod, s * p.variable_om).add(fuel, s * p.fuel_price);
        if (p.emission_factor > 0.0) ledger.emissions[z][t].add(fuel, p.emission_factor);
    }
}

} // namespace

void add(Assembly& a, Ledger& ledger, const ModelInputs& in)
{
    for (std::size_t i = 0; i < in.projects.size(); ++i) {
        const auto k = in.projects[i].kind;
        if (k == Kind::p2g) {
            add_capacity(a, ledger, in, i);
            add_p2g(a, ledger, in, i);
        } else if (data::is_g2p(k)) {
            add_capacity(a, ledger, in, i);
            add_g2p(a, ledger, in, i);
        } else if (data::is_h2_storage(k)) {
            add_capacity(a, ledger, in, i);
            add_storage(a, ledger, in, i);
        } else if (data::is_fossil_h2(k)) {
            add_capacity(a, ledger, in, i);
            add_fossil(a, ledger, in, i);
        }
    }
    for (std::size_t l = 0; l < in.links.size(); ++l) {
        if (in.links[l].commodity == data::Commodity::hydrogen) add_link(a, ledger.h2, in, l, "h2");
    }
}

void add_balances(Assembly& a, Ledger& ledger, const ModelInputs& in)
{
    auto& m = a.model;
    const std::size_t nz = in.num_zones();
    const std::size_t nt = in.num_timepoints();
    const bool dispatch = in.unserved_penalty > 0.0;
    a.h2_balance.assign(nz, std::vector<int>(nt, -1));
    a.h2_industrial_balance.assign(nz, std::vector<int>(nt, -1));
    if (dispatch) a.h2_unserved.assign(nz, std::vector<lp::Var>(nt));
    for (std::size_t z = 0; z < nz; ++z) {
        for (std::size_t t = 0; t < nt; ++t) {
            const double load = in.h2_load.empty() ? 0.0 : in.h2_load[z][t];
            const std::string sfx = "_" + in.zones[z] + tp_suffix(static_cast<int>(t));
            auto& served = in.h2_decoupled ? ledger.h2_industrial[z][t] : ledger.h2[z][t];
            if (dispatch && load > 0.0) {
                a.h2_unserved[z][t] = m.add_var("h2_unserved" + sfx, 0.0, load,
                                                in.scale(static_cast<int>(t)) * in.unserved_penalty);
                served.add(a.h2_unserved[z][t]);
            }
            const double shared_load = in.h2_decoupled ? 0.0 : load;
            if (!ledger.h2[z][t].empty() || shared_load > 0.0) {
                a.h2_balance[z][t] = m.add_constraint("h2_balance" + sfx, ledger.h2[z][t], lp::Sense::eq, shared_load, kSrc);
            }
            if (!ledger.h2_industrial[z][t].empty() || (in.h2_decoupled && load > 0.0)) {
                a.h2_industrial_balance[z][t] = m.add_constraint("h2_industrial" + sfx, ledger.h2_industrial[z][t],
                                                                 lp::Sense::eq, in.h2_decoupled ? load : 0.0, kSrc);
            }
        }
    }
}

} // namespace model::hydrogen_chain

} // namespace gridcap
