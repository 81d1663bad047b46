#include "gridcap/formulas.hpp"
#include "gridcap/model.hpp"

#include <cmath>

namespace gridcap {

namespace carbon_chain {

double capture_limit(double fuel_burn_mmbtu, double emission_factor, double capture_rate)
{
    return capture_rate * emission_factor * fuel_burn_mmbtu;
}

double net_emission(double fuel_burn_mmbtu, double emission_factor, double captured)
{
    return fuel_burn_mmbtu * emission_factor - captured;
}

} // namespace carbon_chain

namespace model::carbon_chain {

using data::Kind;

namespace {

constexpr const char* kSrc = "carbon_chain";

void add_capture(Assembly& a, Ledger& ledger, const ModelInputs& in, std::size_t index)
{
    const auto& p = in.projects[index];
    auto& pv = a.projects[index];
    auto& m = a.model;
    const auto cap = pv.capacity(p);
    const auto z = static_cast<std::size_t>(p.zone);
    const bool ccs = p.kind == Kind::ccs_retrofit;
    for (std::size_t t = 0; t < in.num_timepoints(); ++t) {
        const std::string sfx = "_" + p.id + tp_suffix(static_cast<int>(t));
        lp::Var capture = m.add_var("carbon_capture" + sfx);
        pv.activity.push_back(capture);
        limit_by_capacity(m, capture, cap, 1.0, "carbon_capturemax" + sfx, kSrc);
        if (ccs) {
            const auto& parent = in.projects[static_cast<std::size_t>(p.parent)];
            const auto& burn = a.projects[static_cast<std::size_t>(p.parent)].fuel_burn;
            lp::LinearExpr e(capture);
            if (!burn.empty()) e.add(burn[t], -p.capture_rate * parent.emission_factor);
            m.add_constraint("carbon_capturerate" + sfx, e, lp::Sense::le, 0.0, kSrc);
        }
        ledger.power[z][t].add(capture, -p.ele_per_tonne);
        ledger.co2[z][t].add(capture);
        ledger.emissions[z][t].add(capture, -1.0);
        ledger.objective.add(capture, in.scale(static_cast<int>(t)) * p.variable_om);
    }
}

void add_site(Assembly& a, Ledger& ledger, const ModelInputs& in, std::size_t index)
{
    const auto& s = in.sites[index];
    auto& sv = a.sites[index];
    auto& m = a.model;
    const auto z = static_cast<std::size_t>(s.zone);
    const std::string id = in.zones[z] + "_" + s.kind;
    if (s.annual_capex > 0.0) {
        sv.new_capacity = m.add_var("carbon_injectcap_" + id);
        ledger.objective.add(sv.new_capacity, s.annual_capex);
    }
    lp::LinearExpr cumulative;
    for (std::size_t t = 0; t < in.num_timepoints(); ++t) {
        const std::string sfx = "_" + id + tp_suffix(static_cast<int>(t));
        lp::Var inj = m.add_var("carbon_inject" + sfx);
        sv.injection.push_back(inj);
        if (sv.new_capacity.valid()) {
            lp::LinearExpr e(inj);
            e.add(sv.new_capacity, -1.0);
            m.add_constraint("carbon_injectmax" + sfx, e, lp::Sense::le, 0.0, kSrc);
        }
        ledger.co2[z][t].add(inj, -1.0);
        cumulative.add(inj, in.scale(static_cast<int>(t)));
    }
    if (std::isfinite(s.capacity_tonnes)) {
        m.add_constraint("carbon_storagecap_" + id, cumulative, lp::Sense::le, s.capacity_tonnes, kSrc);
    }
}

} // namespace

void add(Assembly& a, Ledger& ledger, const ModelInputs& in)
{
    for (std::size_t i = 0; i < in.projects.size(); ++i) {
        const auto k = in.projects[i].kind;
        if (k == Kind::ccs_retrofit || k == Kind::dac) {
            add_capacity(a, ledger, in, i);
            add_capture(a, ledger, in, i);
        }
    }
    for (std::size_t s = 0; s < in.sites.size(); ++s) add_site(a, ledger, in, s);
    for (std::size_t l = 0; l < in.links.size(); ++l) {
        if (in.links[l].commodity == data::Commodity::co2) add_link(a, ledger.co2, in, l, "carbon");
    }
}

void add_balances(Assembly& a, Ledger& ledger, const ModelInputs& in)
{
    auto& m = a.model;
    const std::size_t nz = in.num_zones();
    const std::size_t nt = in.num_timepoints();
    a.co2_balance.assign(nz, std::vector<int>(nt, -1));
    for (std::size_t z = 0; z < nz; ++z) {
        for (std::size_t t = 0; t < nt; ++t) {
            if (ledger.co2[z][t].empty()) continue;
            a.co2_balance[z][t] = m.add_constraint("carbon_balance_" + in.zones[z] + tp_suffix(static_cast<int>(t)),
                                                   ledger.co2[z][t], lp::Sense::eq, 0.0, kSrc);
        }
    }
    if (!in.carbon_cap) return;

    // Weighted emissions plus pipeline leakage, per zone.
    std::vector<lp::LinearExpr> zone_total(nz);
    for (std::size_t z = 0; z < nz; ++z) {
        for (std::size_t t = 0; t < nt; ++t) zone_total[z].add(ledger.emissions[z][t], in.scale(static_cast<int>(t)));
    }
    for (std::size_t l = 0; l < in.links.size(); ++l) {
        const auto& link = in.links[l];
        const auto& lv = a.links[l];
        if (link.commodity != data::Commodity::co2) continue;
        for (std::size_t t = 0; t < lv.from_loss.size(); ++t) {
            const double s = in.scale(static_cast<int>(t));
            zone_total[static_cast<std::size_t>(link.from)].add(lv.from_loss[t], s);
            zone_total[static_cast<std::size_t>(link.to)].add(lv.to_loss[t], s);
        }
    }

    const bool dispatch = in.unserved_penalty > 0.0;
    if (in.cap_zonal && !dispatch) {
        double total_demand = 0.0;
        std::vector<double> zone_demand(nz, 0.0);
        for (std::size_t z = 0; z < nz; ++z) {
            for (std::size_t t = 0; t < nt; ++t) zone_demand[z] += in.scale(static_cast<int>(t)) * in.demand[z][t];
            total_demand += zone_demand[z];
        }
        for (std::size_t z = 0; z < nz; ++z) {
            const double share = total_demand > 0.0 ? zone_demand[z] / total_demand : 1.0 / static_cast<double>(nz);
            if (zone_total[z].empty() && *in.carbon_cap * share >= 0.0) continue;
            m.add_constraint("carbon_cap_" + in.zones[z], zone_total[z], lp::Sense::le, *in.carbon_cap * share, kSrc);
        }
        return;
    }
    lp::LinearExpr total;
    for (const auto& e : zone_total) total.add(e);
    if (dispatch) {
        a.cap_slack = m.add_var("carbon_capslack", 0.0, lp::kInf, in.unserved_penalty);
        total.add(a.cap_slack, -1.0);
    }
    if (total.empty()) return;
    m.add_constraint("carbon_cap", total, lp::Sense::le, *in.carbon_cap, kSrc);
}

} // namespace model::carbon_chain

} // namespace gridcap
