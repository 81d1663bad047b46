#include "gridcap/errors.hpp"
#include "gridcap/scenario.hpp"
#include "gridcap/units.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace gridcap::scenario {

using data::Kind;
using nlohmann::ordered_json;

namespace {

double val(const std::vector<double>& x, lp::Var v) { return v.valid() ? x[static_cast<std::size_t>(v.index)] : 0.0; }

double weighted_sum(const model::ModelInputs& in, const std::vector<double>& x, const std::vector<lp::Var>& vars)
{
    double total = 0.0;
    for (std::size_t t = 0; t < vars.size(); ++t) total += in.scale(static_cast<int>(t)) * val(x, vars[t]);
    return total;
}

double weighted_grid(const model::ModelInputs& in, const std::vector<std::vector<double>>& grid)
{
    double total = 0.0;
    for (const auto& row : grid) {
        for (std::size_t t = 0; t < row.size(); ++t) total += in.scale(static_cast<int>(t)) * row[t];
    }
    return total;
}

double weighted_vars(const model::ModelInputs& in, const std::vector<double>& x,
                     const std::vector<std::vector<lp::Var>>& grid)
{
    double total = 0.0;
    for (const auto& row : grid) total += weighted_sum(in, x, row);
    return total;
}

double energy_capacity(const model::ProjectInput& p, const model::ProjectVars& v, const std::vector<double>& x)
{
    const double total = p.existing + val(x, v.new_capacity);
    if (data::is_h2_storage(p.kind)) return total;
    if (!data::is_electric_storage(p.kind)) return 0.0;
    if (p.duration_hours > 0.0) return total * p.duration_hours;
    return p.existing_energy + val(x, v.new_energy);
}

ProjectResult project_result(const model::ModelInputs& in, const model::Assembly& a, const std::vector<double>& x,
                             std::size_t i)
{
    const auto& p = in.projects[i];
    const auto& v = a.projects[i];
    ProjectResult r;
    r.id = p.id;
    r.zone = in.zones[static_cast<std::size_t>(p.zone)];
    r.kind = p.kind;
    r.technology = p.technology;
    r.existing = p.existing;
    r.new_capacity = val(x, v.new_capacity);
    r.total = r.existing + r.new_capacity;
    r.energy_capacity = energy_capacity(p, v, x);
    const double activity = weighted_sum(in, x, v.activity);
    r.annual_fuel_mmbtu = weighted_sum(in, x, v.fuel_burn);
    if (p.kind == Kind::p2g) {
        r.annual_input = activity;
        r.annual_output = activity * p.efficiency;
    } else if (data::is_g2p(p.kind)) {
        r.annual_output = activity;
        r.annual_input = activity / p.efficiency;
    } else if (data::is_electric_storage(p.kind) || data::is_h2_storage(p.kind)) {
        r.annual_output = activity;
        r.annual_input = weighted_sum(in, x, v.charge);
    } else if (p.kind == Kind::ccs_retrofit || p.kind == Kind::dac) {
        r.annual_output = activity;
        r.annual_input = activity * p.ele_per_tonne;
        r.annual_emissions = -activity;
    } else {
        r.annual_output = activity;
    }
    if (data::burns_fuel(p.kind)) r.annual_emissions = r.annual_fuel_mmbtu * p.emission_factor;
    return r;
}

std::vector<std::string> elastic_diagnostics(const model::ModelInputs& inputs, const RunOptions& options)
{
    model::ModelInputs elastic = inputs;
    elastic.unserved_penalty = 1e6;
    std::vector<std::string> out;
    model::Assembly a;
    try {
        a = model::build_model(elastic);
    } catch (const std::exception& e) {
        return {std::string("elastic re-solve could not be built: ") + e.what()};
    }
    const auto sol = lp::solve(a.model, {options.tolerance, lp::kInf}, options.solver);
    if (!sol.optimal()) return {"elastic re-solve is also " + std::string(lp::to_string(sol.status)) + ": " + sol.message};
    const double tol = 1e-6;
    std::size_t count = 0;
    auto report = [&](const std::string& what, const std::vector<std::vector<lp::Var>>& grid) {
        for (std::size_t z = 0; z < grid.size(); ++z) {
            double worst = 0.0;
            int worst_t = -1;
            double annual = 0.0;
            for (std::size_t t = 0; t < grid[z].size(); ++t) {
                const double v = val(sol.x, grid[z][t]);
                annual += elastic.scale(static_cast<int>(t)) * v;
                if (v > worst) {
                    worst = v;
                    worst_t = static_cast<int>(t);
                }
            }
            if (worst <= tol) continue;
            ++count;
            std::ostringstream ss;
            ss << what << " balance violated in zone " << elastic.zones[z] << ": worst shortfall " << worst
               << " MW at t" << worst_t << ", " << annual << " MWh per year";
            out.push_back(ss.str());
        }
    };
    report("power", a.unserved);
    report("power surplus", a.oversupply);
    report("hydrogen", a.h2_unserved);
    const double slack = val(sol.x, a.cap_slack);
    if (slack > tol) {
        std::ostringstream ss;
        ss << "carbon cap exceeded by " << slack << " tonnes per year";
        out.push_back(ss.str());
        ++count;
    }
    if (count == 0) {
        out.push_back("no balance shortfall in the elastic re-solve; the conflict lies in the reserve margin, "
                      "storage cycling or capacity limits");
    }
    return out;
}

ordered_json cost_json(const CostBreakdown& c)
{
    return {{"investment", c.investment}, {"fixed_om", c.fixed_om}, {"variable_om", c.variable_om},
            {"fuel", c.fuel},             {"penalty", c.penalty},   {"total", c.total()}};
}

} // namespace

CostBreakdown compute_costs(const model::ModelInputs& in, const model::Assembly& a, const std::vector<double>& x)
{
    CostBreakdown c;
    for (std::size_t i = 0; i < in.projects.size(); ++i) {
        const auto& p = in.projects[i];
        const auto& v = a.projects[i];
        const double built = val(x, v.new_capacity);
        if (data::is_h2_storage(p.kind)) {
            c.investment += built * p.annual_capex_energy;
            c.fixed_om += (p.existing + built) * p.fixed_om_energy;
        } else {
            c.investment += built * p.annual_capex;
            c.fixed_om += (p.existing + built) * p.fixed_om;
            if (data::is_electric_storage(p.kind)) {
                if (p.duration_hours > 0.0) {
                    c.investment += built * p.duration_hours * p.annual_capex_energy;
                    c.fixed_om += (p.existing + built) * p.duration_hours * p.fixed_om_energy;
                } else {
                    const double built_energy = val(x, v.new_energy);
                    c.investment += built_energy * p.annual_capex_energy;
                    c.fixed_om += (p.existing_energy + built_energy) * p.fixed_om_energy;
                }
            }
        }
        c.variable_om += weighted_sum(in, x, v.activity) * p.variable_om;
        c.fuel += weighted_sum(in, x, v.fuel_burn) * p.fuel_price;
    }
    for (std::size_t l = 0; l < in.links.size(); ++l) c.investment += val(x, a.links[l].new_capacity) * in.links[l].annual_capex;
    for (std::size_t s = 0; s < in.sites.size(); ++s) c.investment += val(x, a.sites[s].new_capacity) * in.sites[s].annual_capex;
    if (in.unserved_penalty > 0.0) {
        const double slack = weighted_vars(in, x, a.unserved) + weighted_vars(in, x, a.oversupply) +
                             weighted_vars(in, x, a.h2_unserved);
        c.penalty = in.unserved_penalty * (slack + val(x, a.cap_slack));
    }
    return c;
}

ScenarioResult run_inputs(const std::string& name, std::shared_ptr<const model::ModelInputs> inputs,
                          const RunOptions& options)
{
    ScenarioResult r;
    r.name = name;
    r.inputs = inputs;
    r.decoupled = inputs->h2_decoupled;
    r.zones = inputs->zones;
    auto assembly = std::make_shared<model::Assembly>(model::build_model(*inputs));
    r.assembly = assembly;
    r.num_variables = assembly->model.num_vars();
    r.num_constraints = assembly->model.num_constraints();
    r.solution = lp::solve(assembly->model, {options.tolerance, lp::kInf}, options.solver);
    r.status = r.solution.status;
    r.message = r.solution.message;
    if (r.status == lp::Status::infeasible) r.diagnostics = elastic_diagnostics(*inputs, options);
    if (!r.optimal()) return r;

    const auto& in = *inputs;
    const auto& a = *assembly;
    const auto& x = r.solution.x;
    r.objective = r.solution.objective;
    double p2g_capacity = 0.0;
    double p2g_weighted_eff = 0.0;
    for (std::size_t i = 0; i < in.projects.size(); ++i) {
        auto pr = project_result(in, a, x, i);
        const auto& p = in.projects[i];
        if (p.kind == Kind::p2g) {
            r.electrolyzer_capacity_cost += pr.new_capacity * p.annual_capex + pr.total * p.fixed_om;
            p2g_capacity += pr.total;
            p2g_weighted_eff += pr.total * p.efficiency;
            if (r.electrolyzer_efficiency == 0.0) r.electrolyzer_efficiency = p.efficiency;
        }
        if (data::is_g2p(p.kind)) r.h2_for_power_mwh += pr.annual_input;
        if (p.kind == Kind::ccs_retrofit || p.kind == Kind::dac) r.captured_tonnes += pr.annual_output;
        r.emissions_tonnes += pr.annual_emissions;
        r.projects.push_back(std::move(pr));
    }
    if (p2g_capacity > 0.0) r.electrolyzer_efficiency = p2g_weighted_eff / p2g_capacity;
    for (std::size_t l = 0; l < in.links.size(); ++l) {
        const auto& link = in.links[l];
        const auto& lv = a.links[l];
        LinkResult lr;
        lr.id = link.id;
        lr.commodity = link.commodity;
        lr.from = in.zones[static_cast<std::size_t>(link.from)];
        lr.to = in.zones[static_cast<std::size_t>(link.to)];
        lr.existing = link.existing;
        lr.new_capacity = val(x, lv.new_capacity);
        for (std::size_t t = 0; t < lv.flow.size(); ++t) {
            const double s = in.scale(static_cast<int>(t));
            const double f = val(x, lv.flow[t]);
            if (f > 0.0) lr.annual_forward += s * f;
            if (f < 0.0) lr.annual_backward -= s * f;
        }
        lr.annual_losses = weighted_sum(in, x, lv.from_loss) + weighted_sum(in, x, lv.to_loss);
        if (link.commodity == data::Commodity::co2) r.emissions_tonnes += lr.annual_losses;
        r.links.push_back(std::move(lr));
    }
    for (const auto& sv : a.sites) r.injected_tonnes += weighted_sum(in, x, sv.injection);
    r.demand_mwh = weighted_grid(in, in.demand);
    r.h2_demand_mwh = weighted_grid(in, in.h2_load);
    r.unserved_mwh = weighted_vars(in, x, a.unserved);
    r.costs = compute_costs(in, a, x);
    return r;
}

ScenarioResult run_scenario(const ScenarioConfig& config, const data::SystemDataset& dataset, const RunOptions& options)
{
    auto inputs = std::make_shared<const model::ModelInputs>(apply_scenario(config, dataset));
    return run_inputs(config.name, inputs, options);
}

std::string to_json(const ScenarioResult& r)
{
    ordered_json j;
    j["name"] = r.name;
    j["status"] = lp::to_string(r.status);
    j["message"] = r.message;
    j["diagnostics"] = r.diagnostics;
    j["solver"] = r.solution.solver;
    j["objective"] = r.objective;
    j["model"] = {{"variables", r.num_variables}, {"constraints", r.num_constraints}};
    j["decoupled"] = r.decoupled;
    j["zones"] = r.zones;
    j["totals"] = {{"demand_mwh", r.demand_mwh},
                   {"h2_demand_mwh", r.h2_demand_mwh},
                   {"h2_for_power_mwh", r.h2_for_power_mwh},
                   {"emissions_tonnes", r.emissions_tonnes},
                   {"captured_tonnes", r.captured_tonnes},
                   {"injected_tonnes", r.injected_tonnes},
                   {"unserved_mwh", r.unserved_mwh}};
    j["costs"] = cost_json(r.costs);
    j["electrolyzer"] = {{"capacity_cost", r.electrolyzer_capacity_cost}, {"efficiency", r.electrolyzer_efficiency}};
    ordered_json projects = ordered_json::array();
    for (const auto& p : r.projects) {
        projects.push_back({{"id", p.id},
                            {"zone", p.zone},
                            {"kind", data::to_string(p.kind)},
                            {"technology", p.technology},
                            {"existing", p.existing},
                            {"new", p.new_capacity},
                            {"total", p.total},
                            {"energy_capacity", p.energy_capacity},
                            {"annual_output", p.annual_output},
                            {"annual_input", p.annual_input},
                            {"annual_fuel_mmbtu", p.annual_fuel_mmbtu},
                            {"annual_emissions", p.annual_emissions}});
    }
    j["projects"] = projects;
    ordered_json links = ordered_json::array();
    for (const auto& l : r.links) {
        links.push_back({{"id", l.id},
                         {"commodity", data::to_string(l.commodity)},
                         {"from", l.from},
                         {"to", l.to},
                         {"existing", l.existing},
                         {"new", l.new_capacity},
                         {"annual_forward", l.annual_forward},
                         {"annual_backward", l.annual_backward},
                         {"annual_losses", l.annual_losses}});
    }
    j["links"] = links;
    return j.dump(2) + "\n";
}

ScenarioResult result_from_json(std::string_view text, const std::string& origin)
{
    ScenarioResult r;
    try {
        const auto j = nlohmann::json::parse(text);
        r.name = j.at("name").get<std::string>();
        const auto status = j.at("status").get<std::string>();
        r.status = status == "optimal"      ? lp::Status::optimal
                   : status == "infeasible" ? lp::Status::infeasible
                   : status == "unbounded"  ? lp::Status::unbounded
                                            : lp::Status::error;
        r.message = j.at("message").get<std::string>();
        r.diagnostics = j.at("diagnostics").get<std::vector<std::string>>();
        r.solution.solver = j.at("solver").get<std::string>();
        r.objective = j.at("objective").get<double>();
        r.num_variables = j.at("model").at("variables").get<std::size_t>();
        r.num_constraints = j.at("model").at("constraints").get<std::size_t>();
        r.decoupled = j.at("decoupled").get<bool>();
        r.zones = j.at("zones").get<std::vector<std::string>>();
        const auto& t = j.at("totals");
        r.demand_mwh = t.at("demand_mwh").get<double>();
        r.h2_demand_mwh = t.at("h2_demand_mwh").get<double>();
        r.h2_for_power_mwh = t.at("h2_for_power_mwh").get<double>();
        r.emissions_tonnes = t.at("emissions_tonnes").get<double>();
        r.captured_tonnes = t.at("captured_tonnes").get<double>();
        r.injected_tonnes = t.at("injected_tonnes").get<double>();
        r.unserved_mwh = t.at("unserved_mwh").get<double>();
        const auto& c = j.at("costs");
        r.costs.investment = c.at("investment").get<double>();
        r.costs.fixed_om = c.at("fixed_om").get<double>();
        r.costs.variable_om = c.at("variable_om").get<double>();
        r.costs.fuel = c.at("fuel").get<double>();
        r.costs.penalty = c.at("penalty").get<double>();
        r.electrolyzer_capacity_cost = j.at("electrolyzer").at("capacity_cost").get<double>();
        r.electrolyzer_efficiency = j.at("electrolyzer").at("efficiency").get<double>();
        for (const auto& p : j.at("projects")) {
            ProjectResult pr;
            pr.id = p.at("id").get<std::string>();
            pr.zone = p.at("zone").get<std::string>();
            const auto kind = data::parse_kind(p.at("kind").get<std::string>());
            if (!kind) throw ValidationError(origin + ": unknown kind in project '" + pr.id + "'");
            pr.kind = *kind;
            pr.technology = p.at("technology").get<std::string>();
            pr.existing = p.at("existing").get<double>();
            pr.new_capacity = p.at("new").get<double>();
            pr.total = p.at("total").get<double>();
            pr.energy_capacity = p.at("energy_capacity").get<double>();
            pr.annual_output = p.at("annual_output").get<double>();
            pr.annual_input = p.at("annual_input").get<double>();
            pr.annual_fuel_mmbtu = p.at("annual_fuel_mmbtu").get<double>();
            pr.annual_emissions = p.at("annual_emissions").get<double>();
            r.projects.push_back(std::move(pr));
        }
        for (const auto& l : j.at("links")) {
            LinkResult lr;
            lr.id = l.at("id").get<std::string>();
            const auto commodity = data::parse_commodity(l.at("commodity").get<std::string>());
            if (!commodity) throw ValidationError(origin + ": unknown commodity in link '" + lr.id + "'");
            lr.commodity = *commodity;
            lr.from = l.at("from").get<std::string>();
            lr.to = l.at("to").get<std::string>();
            lr.existing = l.at("existing").get<double>();
            lr.new_capacity = l.at("new").get<double>();
            lr.annual_forward = l.at("annual_forward").get<double>();
            lr.annual_backward = l.at("annual_backward").get<double>();
            lr.annual_losses = l.at("annual_losses").get<double>();
            r.links.push_back(std::move(lr));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(origin + ": malformed result file: " + e.what());
    }
    r.solution.status = r.status;
    r.solution.objective = r.objective;
    return r;
}

ScenarioResult load_result(const std::filesystem::path& path)
{
    std::ifstream f(path);
    if (!f) throw ValidationError(path.string() + ": cannot open result file");
    std::stringstream ss;
    ss << f.rdbuf();
    return result_from_json(ss.str(), path.string());
}

PlannedCapacity planned_capacity(const ScenarioResult& result)
{
    if (!result.optimal()) throw ValidationError("result '" + result.name + "' is not optimal; no capacities to fix");
    PlannedCapacity out;
    for (const auto& p : result.projects) {
        out.project_total[p.id] = p.total;
        out.project_energy[p.id] = p.energy_capacity;
    }
    for (const auto& l : result.links) out.link_total[l.id] = l.existing + l.new_capacity;
    return out;
}

PlannedCapacity load_planned_capacity(const std::filesystem::path& path)
{
    return planned_capacity(load_result(path));
}

DispatchReport dispatch_inputs(model::ModelInputs in, const DispatchOptions& options)
{
    if (!(options.generation_scale >= 0.0)) throw ValidationError("generation scale must be >= 0");
    double max_variable = 0.0;
    for (auto& p : in.projects) {
        p.candidate = false;
        p.max_new = 0.0;
        p.max_new_energy = 0.0;
        if (data::is_generator(p.kind) || data::is_g2p(p.kind)) p.existing *= options.generation_scale;
        double cost = p.variable_om;
        if (data::burns_fuel(p.kind)) cost += p.fuel_price * units::kMmbtuPerMwh / p.efficiency;
        max_variable = std::max(max_variable, cost);
    }
    for (auto& l : in.links) l.expandable = false;
    for (auto& s : in.sites) s.annual_capex = 0.0;
    in.groups.clear();
    in.reserve.enabled = false;
    in.unserved_penalty = 1e4 * std::max(1.0, max_variable);

    auto shared = std::make_shared<const model::ModelInputs>(std::move(in));
    const auto r = run_inputs("dispatch", shared, options.run);
    DispatchReport rep;
    rep.status = r.status;
    rep.message = r.message;
    rep.hours = shared->num_timepoints();
    rep.penalty = shared->unserved_penalty;
    rep.demand_mwh = weighted_grid(*shared, shared->demand);
    rep.h2_demand_mwh = weighted_grid(*shared, shared->h2_load);
    if (!r.optimal()) return rep;
    const auto& x = r.solution.x;
    rep.unserved_mwh = weighted_vars(*shared, x, r.assembly->unserved);
    rep.oversupply_mwh = weighted_vars(*shared, x, r.assembly->oversupply);
    rep.h2_unserved_mwh = weighted_vars(*shared, x, r.assembly->h2_unserved);
    rep.unserved_percent = rep.demand_mwh > 0.0 ? 100.0 * rep.unserved_mwh / rep.demand_mwh : 0.0;
    rep.emissions_tonnes = r.emissions_tonnes;
    rep.cap_excess_tonnes = val(x, r.assembly->cap_slack);
    return rep;
}

DispatchReport dispatch_validation(const ScenarioConfig& config, const data::SystemDataset& dataset,
                                   const PlannedCapacity& planned, const DispatchOptions& options)
{
    auto in = apply_scenario(config, dataset, Layout::full_year);
    for (auto& p : in.projects) {
        const auto it = planned.project_total.find(p.id);
        if (it == planned.project_total.end()) {
            throw ValidationError("planned result has no capacity for project '" + p.id + "'");
        }
        p.existing = it->second;
        if (data::is_electric_storage(p.kind) && p.duration_hours <= 0.0) {
            p.existing_energy = planned.project_energy.at(p.id);
        }
    }
    for (auto& l : in.links) {
        const auto it = planned.link_total.find(l.id);
        if (it == planned.link_total.end()) throw ValidationError("planned result has no capacity for link '" + l.id + "'");
        l.existing = it->second;
    }
    return dispatch_inputs(std::move(in), options);
}

std::string to_json(const DispatchReport& r)
{
    ordered_json j;
    j["status"] = lp::to_string(r.status);
    j["message"] = r.message;
    j["hours"] = r.hours;
    j["penalty_per_mwh"] = r.penalty;
    j["demand_mwh"] = r.demand_mwh;
    j["unserved_mwh"] = r.unserved_mwh;
    j["unserved_percent"] = r.unserved_percent;
    j["oversupply_mwh"] = r.oversupply_mwh;
    j["h2_demand_mwh"] = r.h2_demand_mwh;
    j["h2_unserved_mwh"] = r.h2_unserved_mwh;
    j["emissions_tonnes"] = r.emissions_tonnes;
    j["cap_excess_tonnes"] = r.cap_excess_tonnes;
    return j.dump(2) + "\n";
}

double ConservationReport::worst() const
{
    return std::max({power, hydrogen, co2, power_annual, hydrogen_annual, co2_annual});
}

ConservationReport check_conservation(const model::ModelInputs& in, const model::Assembly& a,
                                      const std::vector<double>& x)
{
    const std::size_t nz = in.num_zones();
    const std::size_t nt = in.num_timepoints();
    using Grid = std::vector<std::vector<double>>;
    Grid power(nz, std::vector<double>(nt, 0.0));
    Grid h2(nz, std::vector<double>(nt, 0.0));
    Grid h2_ind(nz, std::vector<double>(nt, 0.0));
    Grid co2(nz, std::vector<double>(nt, 0.0));

    for (std::size_t i = 0; i < in.projects.size(); ++i) {
        const auto& p = in.projects[i];
        const auto& v = a.projects[i];
        const auto z = static_cast<std::size_t>(p.zone);
        auto& h2_side = p.industrial ? h2_ind : h2;
        for (std::size_t t = 0; t < nt; ++t) {
            const double act = v.activity.empty() ? 0.0 : val(x, v.activity[t]);
            const double chg = v.charge.empty() ? 0.0 : val(x, v.charge[t]);
            if (data::is_generator(p.kind)) {
                power[z][t] += act;
            } else if (data::is_electric_storage(p.kind)) {
                power[z][t] += act - chg;
            } else if (p.kind == Kind::p2g) {
                power[z][t] -= act;
                h2_side[z][t] += hydrogen_chain::p2g_output(act, p.efficiency);
            } else if (data::is_g2p(p.kind)) {
                power[z][t] += act;
                h2[z][t] -= act / p.efficiency;
            } else if (data::is_h2_storage(p.kind)) {
                h2[z][t] += act - chg;
            } else if (data::is_fossil_h2(p.kind)) {
                h2_side[z][t] += act;
            } else if (p.kind == Kind::ccs_retrofit || p.kind == Kind::dac) {
                power[z][t] -= act * p.ele_per_tonne;
                co2[z][t] += act;
            }
        }
    }
    for (std::size_t l = 0; l < in.links.size(); ++l) {
        const auto& link = in.links[l];
        const auto& lv = a.links[l];
        Grid& g = link.commodity == data::Commodity::electricity ? power : link.commodity == data::Commodity::hydrogen ? h2 : co2;
        for (std::size_t t = 0; t < nt; ++t) {
            const double f = val(x, lv.flow[t]);
            const double fl = lv.from_loss.empty() ? 0.0 : val(x, lv.from_loss[t]);
            const double tl = lv.to_loss.empty() ? 0.0 : val(x, lv.to_loss[t]);
            g[static_cast<std::size_t>(link.from)][t] -= f + fl;
            g[static_cast<std::size_t>(link.to)][t] += f - tl;
        }
    }
    for (std::size_t s = 0; s < in.sites.size(); ++s) {
        const auto z = static_cast<std::size_t>(in.sites[s].zone);
        for (std::size_t t = 0; t < nt; ++t) co2[z][t] -= val(x, a.sites[s].injection[t]);
    }

    ConservationReport rep;
    auto check = [&](const Grid& net, auto load_of, auto slack_of, double& worst, double& annual_worst) {
        for (std::size_t z = 0; z < nz; ++z) {
            double net_annual = 0.0;
            double load_annual = 0.0;
            for (std::size_t t = 0; t < nt; ++t) {
                const double load = load_of(z, t);
                const double residual = net[z][t] + slack_of(z, t) - load;
                worst = std::max(worst, std::abs(residual) / std::max(1.0, std::abs(load)));
                const double s = in.scale(static_cast<int>(t));
                net_annual += s * residual;
                load_annual += s * std::abs(load);
            }
            annual_worst = std::max(annual_worst, std::abs(net_annual) / std::max(1.0, load_annual));
        }
    };
    auto grid_var = [&](const std::vector<std::vector<lp::Var>>& g, std::size_t z, std::size_t t) {
        return g.empty() ? 0.0 : val(x, g[z][t]);
    };
    auto h2_load = [&](std::size_t z, std::size_t t) { return in.h2_load.empty() ? 0.0 : in.h2_load[z][t]; };

    check(
        power, [&](std::size_t z, std::size_t t) { return in.demand[z][t]; },
        [&](std::size_t z, std::size_t t) { return grid_var(a.unserved, z, t) - grid_var(a.oversupply, z, t); },
        rep.power, rep.power_annual);
    check(
        h2, [&](std::size_t z, std::size_t t) { return in.h2_decoupled ? 0.0 : h2_load(z, t); },
        [&](std::size_t z, std::size_t t) { return in.h2_decoupled ? 0.0 : grid_var(a.h2_unserved, z, t); },
        rep.hydrogen, rep.hydrogen_annual);
    double ind = 0.0;
    double ind_annual = 0.0;
    check(
        h2_ind, [&](std::size_t z, std::size_t t) { return in.h2_decoupled ? h2_load(z, t) : 0.0; },
        [&](std::size_t z, std::size_t t) { return in.h2_decoupled ? grid_var(a.h2_unserved, z, t) : 0.0; }, ind,
        ind_annual);
    rep.hydrogen = std::max(rep.hydrogen, ind);
    rep.hydrogen_annual = std::max(rep.hydrogen_annual, ind_annual);
    check(
        co2, [](std::size_t, std::size_t) { return 0.0; }, [](std::size_t, std::size_t) { return 0.0; }, rep.co2,
        rep.co2_annual);
    return rep;
}

std::vector<std::string> library_names()
{
    return {"ref",
            "r80",
            "r90",
            "ze",
            "ref_wo_h2",
            "r80_wo_h2",
            "r90_wo_h2",
            "ze_wo_h2",
            "ze_wo_battery",
            "ze_wo_pumped_hydro",
            "ze_wo_onshore_wind",
            "ze_wo_underground",
            "ze_wo_tank",
            "ze_wo_fuel_cell",
            "ze_wo_h2_turbine",
            "ze_wo_offshore_wind",
            "ze_wo_new_grid",
            "ze_wo_new_pipeline",
            "ze_wo_new_grid_and_pipeline",
            "ze_nuclear",
            "ze_ccs_dac",
            "ze_h2_demand",
            "ze_h2_demand_flat",
            "ze_h2_demand_decouple",
            "ze_h2_demand_blue",
            "ze_zonal_cap"};
}

} // namespace gridcap::scenario
