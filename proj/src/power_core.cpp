#include "gridcap/formulas.hpp"
#include "gridcap/model.hpp"
#include "gridcap/units.hpp"

#include <algorithm>
#include <map>

namespace gridcap {

namespace power_core {

double storage_state_change(double charge, double discharge, double charge_eff, double discharge_eff, double hours,
                            double weight)
{
    return (charge * charge_eff - discharge / discharge_eff) * hours * weight;
}

double delivered_flow(double flow, double loss_fraction) { return flow * (1.0 - loss_fraction); }

double reserve_requirement(double peak_load, double margin) { return (1.0 + margin) * peak_load; }

} // namespace power_core

namespace model::power_core {

using data::Kind;

namespace {

constexpr const char* kSrc = "power_core";

void add_generator(Assembly& a, Ledger& ledger, const ModelInputs& in, std::size_t index)
{
    const auto& p = in.projects[index];
    auto& pv = a.projects[index];
    auto& m = a.model;
    const auto cap = pv.capacity(p);
    const auto& time = in.time;
    const int nt = static_cast<int>(in.num_timepoints());
    const auto z = static_cast<std::size_t>(p.zone);
    const bool thermal = p.kind == Kind::thermal_gen || p.kind == Kind::nuclear;

    for (int t = 0; t < nt; ++t) {
        const std::string sfx = "_" + p.id + tp_suffix(t);
        const double s = in.scale(t);
        lp::Var gross = m.add_var("power_gross" + sfx);
        pv.activity.push_back(gross);
        const double avail = p.kind == Kind::vre_gen ? p.capacity_factor[static_cast<std::size_t>(t)] : 1.0;
        limit_by_capacity(m, gross, cap, avail, "power_maxgen" + sfx, kSrc);
        if (p.min_gen_fraction > 0.0 && p.kind != Kind::vre_gen) {
            if (cap.empty()) {
                const auto& v = m.variable(gross);
                m.set_bounds(gross, std::min(v.upper, p.min_gen_fraction * cap.constant()), v.upper);
            } else {
                lp::LinearExpr e(gross);
                e.add(cap, -p.min_gen_fraction);
                m.add_constraint("power_mingen" + sfx, e, lp::Sense::ge, 0.0, kSrc);
            }
        }
        ledger.power[z][static_cast<std::size_t>(t)].add(gross);
        ledger.objective.add(gross, s * p.variable_om);

        if (thermal) {
            lp::Var fuel = m.add_var("power_fuel" + sfx);
            pv.fuel_burn.push_back(fuel);
            lp::LinearExpr def(fuel);
            def.add(gross, -units::kMmbtuPerMwh / p.efficiency);
            m.add_constraint("power_fueldef" + sfx, def, lp::Sense::eq, 0.0, kSrc);
            ledger.objective.add(fuel, s * p.fuel_price);
            if (p.emission_factor > 0.0) ledger.emissions[z][static_cast<std::size_t>(t)].add(fuel, p.emission_factor);
        }
    }

    // Ramp limits between consecutive timepoints of one horizon.
    if (p.kind != Kind::vre_gen) {
        for (int t = 0; t < nt; ++t) {
            const auto& tp = time.timepoints()[static_cast<std::size_t>(t)];
            const double step = p.ramp_fraction * tp.hours_in_tmp;
            if (step >= 1.0) continue;
            const auto members = time.horizon_timepoints(tp.horizon);
            if (t == members.front()) continue;
            const std::string sfx = "_" + p.id + tp_suffix(t);
            lp::LinearExpr up(pv.activity[static_cast<std::size_t>(t)]);
            up.add(pv.activity[static_cast<std::size_t>(t - 1)], -1.0);
            lp::LinearExpr down(pv.activity[static_cast<std::size_t>(t - 1)]);
            down.add(pv.activity[static_cast<std::size_t>(t)], -1.0);
            up.add(cap, -step);
            down.add(cap, -step);
            m.add_constraint("power_rampup" + sfx, up, lp::Sense::le, 0.0, kSrc);
            m.add_constraint("power_rampdown" + sfx, down, lp::Sense::le, 0.0, kSrc);
        }
    }

    // Monthly energy budget for hydro.
    if (p.kind == Kind::hydro) {
        std::map<int, std::vector<int>> by_month;
        for (int t = 0; t < nt; ++t) by_month[time.month_of(t)].push_back(t);
        for (const auto& [month, tps] : by_month) {
            double hours = 0.0;
            lp::LinearExpr e;
            for (int t : tps) {
                hours += in.scale(t);
                e.add(pv.activity[static_cast<std::size_t>(t)], in.scale(t));
            }
            double cf = p.hydro_cf[static_cast<std::size_t>(month)];
            if (month == 0) {
                cf = 0.0;
                for (int k = 1; k <= 12; ++k) cf += p.hydro_cf[static_cast<std::size_t>(k)] / 12.0;
            }
            e.add(cap, -cf * hours);
            m.add_constraint("power_hydrobudget_" + p.id + "_m" + std::to_string(month), e, lp::Sense::le, 0.0, kSrc);
        }
    }
}

void add_storage(Assembly& a, Ledger& ledger, const ModelInputs& in, std::size_t index)
{
    const auto& p = in.projects[index];
    auto& pv = a.projects[index];
    auto& m = a.model;
    const auto cap = pv.capacity(p);
    const auto energy = pv.energy_capacity(p);
    const auto& time = in.time;
    const int nt = static_cast<int>(in.num_timepoints());
    const auto z = static_cast<std::size_t>(p.zone);

    for (int t = 0; t < nt; ++t) {
        const std::string sfx = "_" + p.id + tp_suffix(t);
        lp::Var charge = m.add_var("power_charge" + sfx);
        lp::Var discharge = m.add_var("power_discharge" + sfx);
        lp::Var state = m.add_var("power_state" + sfx);
        pv.charge.push_back(charge);
        pv.activity.push_back(discharge);
        pv.state.push_back(state);
        limit_by_capacity(m, charge, cap, 1.0, "power_chargemax" + sfx, kSrc);
        limit_by_capacity(m, discharge, cap, 1.0, "power_dischargemax" + sfx, kSrc);
        limit_by_capacity(m, state, energy, 1.0, "power_statemax" + sfx, kSrc);
        ledger.power[z][static_cast<std::size_t>(t)].add(discharge).add(charge, -1.0);
        ledger.objective.add(discharge, in.scale(t) * p.variable_om);
    }
    // Intra-day cycling: the state after the last hour of a representative day
    // feeds its first hour. Physical hours, no weight.
    for (int t = 0; t < nt; ++t) {
        const int prev = time.previous_in_horizon(t);
        const double h = time.timepoints()[static_cast<std::size_t>(prev)].hours_in_tmp;
        lp::LinearExpr e(pv.state[static_cast<std::size_t>(t)]);
        e.add(pv.state[static_cast<std::size_t>(prev)], -1.0);
        e.add(pv.charge[static_cast<std::size_t>(prev)], -p.charge_efficiency * h);
        e.add(pv.activity[static_cast<std::size_t>(prev)], h / p.discharge_efficiency);
        m.add_constraint("power_soc_" + p.id + tp_suffix(t), e, lp::Sense::eq, 0.0, kSrc);
    }
}

} // namespace

void add(Assembly& a, Ledger& ledger, const ModelInputs& in)
{
    for (std::size_t i = 0; i < in.projects.size(); ++i) {
        const auto k = in.projects[i].kind;
        if (data::is_generator(k)) {
            add_capacity(a, ledger, in, i);
            add_generator(a, ledger, in, i);
        } else if (data::is_electric_storage(k)) {
            add_capacity(a, ledger, in, i);
            add_storage(a, ledger, in, i);
        }
    }
    for (std::size_t l = 0; l < in.links.size(); ++l) {
        if (in.links[l].commodity == data::Commodity::electricity) add_link(a, ledger.power, in, l, "power");
    }
}

void add_balances(Assembly& a, Ledger& ledger, const ModelInputs& in)
{
    auto& m = a.model;
    const std::size_t nz = in.num_zones();
    const std::size_t nt = in.num_timepoints();
    const bool dispatch = in.unserved_penalty > 0.0;
    a.power_balance.assign(nz, std::vector<int>(nt, -1));
    if (dispatch) {
        a.unserved.assign(nz, std::vector<lp::Var>(nt));
        a.oversupply.assign(nz, std::vector<lp::Var>(nt));
    }
    for (std::size_t z = 0; z < nz; ++z) {
        for (std::size_t t = 0; t < nt; ++t) {
            auto& e = ledger.power[z][t];
            const double load = in.demand[z][t];
            const std::string sfx = "_" + in.zones[z] + tp_suffix(static_cast<int>(t));
            if (dispatch) {
                const double s = in.scale(static_cast<int>(t));
                a.unserved[z][t] = m.add_var("power_unserved" + sfx, 0.0, load, s * in.unserved_penalty);
                a.oversupply[z][t] = m.add_var("power_oversupply" + sfx, 0.0, lp::kInf, s * in.unserved_penalty);
                e.add(a.unserved[z][t]).add(a.oversupply[z][t], -1.0);
            }
            if (e.empty() && load == 0.0) continue;
            a.power_balance[z][t] = m.add_constraint("power_balance" + sfx, e, lp::Sense::eq, load, kSrc);
        }
    }

    if (!in.reserve.enabled || dispatch) return;
    if (in.reserve.zonal) {
        for (std::size_t z = 0; z < nz; ++z) {
            const double peak = *std::max_element(in.demand[z].begin(), in.demand[z].end());
            m.add_constraint("power_reserve_" + in.zones[z], ledger.firm_capacity[z], lp::Sense::ge,
                             gridcap::power_core::reserve_requirement(peak, in.reserve.margin), kSrc);
        }
    } else {
        double peak = 0.0;
        for (std::size_t t = 0; t < nt; ++t) {
            double sum = 0.0;
            for (std::size_t z = 0; z < nz; ++z) sum += in.demand[z][t];
            peak = std::max(peak, sum);
        }
        lp::LinearExpr firm;
        for (const auto& f : ledger.firm_capacity) firm.add(f);
        m.add_constraint("power_reserve", firm, lp::Sense::ge,
                         gridcap::power_core::reserve_requirement(peak, in.reserve.margin), kSrc);
    }
}

} // namespace model::power_core

} // namespace gridcap
