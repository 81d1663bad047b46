#include "gridcap/errors.hpp"
#include "gridcap/model.hpp"

#include <cmath>

namespace gridcap::model {

using data::Kind;

lp::LinearExpr ProjectVars::capacity(const ProjectInput& p) const
{
    lp::LinearExpr e;
    e.add_constant(p.existing);
    if (new_capacity.valid()) e.add(new_capacity);
    return e;
}

lp::LinearExpr ProjectVars::energy_capacity(const ProjectInput& p) const
{
    if (data::is_h2_storage(p.kind)) return capacity(p);
    if (p.duration_hours > 0.0) {
        lp::LinearExpr e;
        e.add(capacity(p), p.duration_hours);
        return e;
    }
    lp::LinearExpr e;
    e.add_constant(p.existing_energy);
    if (new_energy.valid()) e.add(new_energy);
    return e;
}

lp::LinearExpr LinkVars::capacity(const LinkInput& l) const
{
    lp::LinearExpr e;
    e.add_constant(l.existing);
    if (new_capacity.valid()) e.add(new_capacity);
    return e;
}

std::string module_prefix(Kind kind)
{
    if (kind == Kind::p2g || data::is_g2p(kind) || data::is_h2_storage(kind) || data::is_fossil_h2(kind)) return "h2";
    if (kind == Kind::ccs_retrofit || kind == Kind::dac) return "carbon";
    return "power";
}

std::string module_prefix(data::Commodity commodity)
{
    switch (commodity) {
    case data::Commodity::electricity: return "power";
    case data::Commodity::hydrogen: return "h2";
    case data::Commodity::co2: return "carbon";
    }
    return "power";
}

std::string tp_suffix(int tp) { return "_t" + std::to_string(tp); }

void limit_by_capacity(lp::Model& m, lp::Var v, const lp::LinearExpr& capacity, double coef, const std::string& name,
                       const std::string& source)
{
    if (capacity.empty()) {
        const auto& var = m.variable(v);
        m.set_bounds(v, var.lower, std::min(var.upper, std::max(var.lower, coef * capacity.constant())));
        return;
    }
    lp::LinearExpr e(v);
    e.add(capacity, -coef);
    m.add_constraint(name, e, lp::Sense::le, 0.0, source);
}

void add_capacity(Assembly& a, Ledger& ledger, const ModelInputs& in, std::size_t index)
{
    const auto& p = in.projects[index];
    auto& pv = a.projects[index];
    auto& m = a.model;
    const std::string prefix = module_prefix(p.kind);
    const bool h2_store = data::is_h2_storage(p.kind);
    const bool free_energy = data::is_electric_storage(p.kind) && p.duration_hours <= 0.0;

    if (p.candidate && p.max_new > 0.0) {
        pv.new_capacity = m.add_var(prefix + (h2_store ? "_newenergy_" : "_new_") + p.id, 0.0, p.max_new);
        double per_unit = h2_store ? p.annual_capex_energy + p.fixed_om_energy : p.annual_capex + p.fixed_om;
        if (data::is_electric_storage(p.kind) && p.duration_hours > 0.0) {
            per_unit += p.duration_hours * (p.annual_capex_energy + p.fixed_om_energy);
        }
        ledger.objective.add(pv.new_capacity, per_unit);
    }
    if (free_energy && p.candidate && p.max_new_energy > 0.0) {
        pv.new_energy = m.add_var(prefix + "_newenergy_" + p.id, 0.0, p.max_new_energy);
        ledger.objective.add(pv.new_energy, p.annual_capex_energy + p.fixed_om_energy);
    }
    if (h2_store) {
        a.existing_fixed_cost += p.existing * p.fixed_om_energy;
    } else {
        a.existing_fixed_cost += p.existing * p.fixed_om;
        if (data::is_electric_storage(p.kind)) {
            a.existing_fixed_cost += (p.duration_hours > 0.0 ? p.existing * p.duration_hours : p.existing_energy) *
                                     p.fixed_om_energy;
        }
    }
    if (p.reserve_credit > 0.0 && !h2_store) {
        ledger.firm_capacity[static_cast<std::size_t>(p.zone)].add(pv.capacity(p), p.reserve_credit);
    }
}

void add_link(Assembly& a, std::vector<std::vector<lp::LinearExpr>>& balance, const ModelInputs& in,
              std::size_t index, const std::string& prefix)
{
    const auto& l = in.links[index];
    auto& lv = a.links[index];
    auto& m = a.model;
    const std::string src = prefix == "power" ? "power_core" : prefix == "h2" ? "hydrogen_chain" : "carbon_chain";
    if (l.expandable && l.max_new > 0.0) {
        lv.new_capacity = m.add_var(prefix + "_linknew_" + l.id, 0.0, l.max_new, 0.0);
    }
    const auto cap = lv.capacity(l);
    const std::size_t n = in.num_timepoints();
    for (std::size_t t = 0; t < n; ++t) {
        const std::string sfx = "_" + l.id + tp_suffix(static_cast<int>(t));
        lp::Var flow = lv.new_capacity.valid() ? m.add_var(prefix + "_flow" + sfx, -lp::kInf, lp::kInf)
                                               : m.add_var(prefix + "_flow" + sfx, -l.existing, l.existing);
        lv.flow.push_back(flow);
        if (lv.new_capacity.valid()) {
            lp::LinearExpr up(flow);
            up.add(cap, -1.0);
            m.add_constraint(prefix + "_flowmax" + sfx, up, lp::Sense::le, 0.0, src);
            lp::LinearExpr down(flow, -1.0);
            down.add(cap, -1.0);
            m.add_constraint(prefix + "_flowmin" + sfx, down, lp::Sense::le, 0.0, src);
        }
        lp::LinearExpr exported(flow);
        lp::LinearExpr imported(flow);
        if (l.loss > 0.0) {
            lp::Var from_loss = m.add_var(prefix + "_fromloss" + sfx);
            lp::Var to_loss = m.add_var(prefix + "_toloss" + sfx);
            lv.from_loss.push_back(from_loss);
            lv.to_loss.push_back(to_loss);
            lp::LinearExpr fl(from_loss);
            fl.add(flow, l.loss);
            m.add_constraint(prefix + "_fromlossmin" + sfx, fl, lp::Sense::ge, 0.0, src);
            limit_by_capacity(m, from_loss, cap, l.loss, prefix + "_fromlossmax" + sfx, src);
            lp::LinearExpr tl(to_loss);
            tl.add(flow, -l.loss);
            m.add_constraint(prefix + "_tolossmin" + sfx, tl, lp::Sense::ge, 0.0, src);
            limit_by_capacity(m, to_loss, cap, l.loss, prefix + "_tolossmax" + sfx, src);
            exported.add(from_loss);
            imported.add(to_loss, -1.0);
        }
        balance[static_cast<std::size_t>(l.from)][t].add(exported, -1.0);
        balance[static_cast<std::size_t>(l.to)][t].add(imported, 1.0);
    }
    if (lv.new_capacity.valid()) m.add_cost(lv.new_capacity, l.annual_capex);
}

void validate_inputs(const ModelInputs& in)
{
    const std::size_t nz = in.zones.size();
    const std::size_t nt = in.time.size();
    if (nz == 0) throw ValidationError("model has no zones");
    if (nt == 0) throw ValidationError("model has no timepoints");
    auto check_grid = [&](const std::vector<std::vector<double>>& g, const char* what, bool allow_empty) {
        if (allow_empty && g.empty()) return;
        if (g.size() != nz) throw ValidationError(std::string(what) + " must have one row per zone");
        for (const auto& row : g) {
            if (row.size() != nt) throw ValidationError(std::string(what) + " must have one value per timepoint");
            for (double v : row) {
                if (!(v >= 0.0) || !std::isfinite(v)) throw ValidationError(std::string(what) + " values must be finite and >= 0");
            }
        }
    };
    check_grid(in.demand, "demand", false);
    check_grid(in.h2_load, "hydrogen load", true);
    for (std::size_t i = 0; i < in.projects.size(); ++i) {
        const auto& p = in.projects[i];
        if (p.zone < 0 || static_cast<std::size_t>(p.zone) >= nz) throw ValidationError("project '" + p.id + "' has a bad zone");
        if (p.kind == Kind::vre_gen && p.capacity_factor.size() != nt) {
            throw ValidationError("VRE project '" + p.id + "' needs one capacity factor per timepoint");
        }
        if (p.kind == Kind::ccs_retrofit) {
            if (p.parent < 0 || static_cast<std::size_t>(p.parent) >= i) {
                throw ValidationError("CCS project '" + p.id + "' must follow its parent");
            }
            if (in.projects[static_cast<std::size_t>(p.parent)].zone != p.zone) {
                throw ValidationError("CCS project '" + p.id + "' must share its parent's zone");
            }
        }
        if (!(p.efficiency > 0.0 && p.efficiency <= 1.0) || !(p.charge_efficiency > 0.0 && p.charge_efficiency <= 1.0) ||
            !(p.discharge_efficiency > 0.0 && p.discharge_efficiency <= 1.0)) {
            throw ValidationError("project '" + p.id + "' has an efficiency outside (0, 1]");
        }
        if (!(p.existing >= 0.0) || !(p.existing_energy >= 0.0)) {
            throw ValidationError("project '" + p.id + "' has negative existing capacity");
        }
    }
    for (const auto& l : in.links) {
        if (l.from < 0 || l.to < 0 || static_cast<std::size_t>(l.from) >= nz || static_cast<std::size_t>(l.to) >= nz ||
            l.from == l.to) {
            throw ValidationError("link '" + l.id + "' has bad endpoints");
        }
        if (!(l.loss >= 0.0 && l.loss < 1.0)) throw ValidationError("link '" + l.id + "' loss must be in [0, 1)");
    }
    for (const auto& s : in.sites) {
        if (s.zone < 0 || static_cast<std::size_t>(s.zone) >= nz) throw ValidationError("CO2 site has a bad zone");
    }
}

Assembly build_model(const ModelInputs& in)
{
    validate_inputs(in);
    Assembly a;
    Ledger ledger;
    const std::size_t nz = in.num_zones();
    const std::size_t nt = in.num_timepoints();
    auto grid = [&]() { return std::vector<std::vector<lp::LinearExpr>>(nz, std::vector<lp::LinearExpr>(nt)); };
    ledger.power = grid();
    ledger.h2 = grid();
    ledger.h2_industrial = grid();
    ledger.co2 = grid();
    ledger.emissions = grid();
    ledger.firm_capacity.assign(nz, {});
    a.projects.resize(in.projects.size());
    a.links.resize(in.links.size());
    a.sites.resize(in.sites.size());

    power_core::add(a, ledger, in);
    hydrogen_chain::add(a, ledger, in);
    carbon_chain::add(a, ledger, in);

    // Capacity groups (scenario caps on total new build).
    for (const auto& g : in.groups) {
        lp::LinearExpr e;
        for (int p : g.projects) {
            const auto& v = a.projects.at(static_cast<std::size_t>(p)).new_capacity;
            if (v.valid()) e.add(v);
        }
        if (!e.empty() && std::isfinite(g.max_new)) {
            a.model.add_constraint("power_capgroup_" + g.name, e, lp::Sense::le, g.max_new, "scenario");
        }
    }

    power_core::add_balances(a, ledger, in);
    hydrogen_chain::add_balances(a, ledger, in);
    carbon_chain::add_balances(a, ledger, in);

    a.model.add_cost(ledger.objective);
    a.model.add_objective_constant(a.existing_fixed_cost);
    return a;
}

} // namespace gridcap::model
