#pragma once

#include "gridcap/lp.hpp"
#include "gridcap/system_data.hpp"
#include "gridcap/temporal.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace gridcap::model {

/// One project with costs already annualized and series already mapped onto
/// the timepoints of the model.
struct ProjectInput {
    std::string id;
    int zone = 0;
    data::Kind kind = data::Kind::thermal_gen;
    std::string technology;
    std::string fuel;
    double efficiency = 1.0;
    double charge_efficiency = 1.0;
    double discharge_efficiency = 1.0;
    double min_gen_fraction = 0.0;
    double ramp_fraction = 1.0;
    int parent = -1;
    double capture_rate = 0.0;
    double ele_per_tonne = 0.0;

    /// MW of power (MWh for hydrogen storage, tonne/h for capture).
    double existing = 0.0;
    bool candidate = false;
    double max_new = lp::kInf;
    /// Separately sized energy (electric storage with duration_hours = 0).
    double existing_energy = 0.0;
    double max_new_energy = lp::kInf;
    double power_limit = lp::kInf;
    double duration_hours = 0.0;

    /// $/unit/year, already annualized.
    double annual_capex = 0.0;
    double annual_capex_energy = 0.0;
    double fixed_om = 0.0;
    double fixed_om_energy = 0.0;
    /// $ per MWh of output (per tonne for capture, per MWh input for P2G).
    double variable_om = 0.0;
    double fuel_price = 0.0;
    double emission_factor = 0.0;
    double reserve_credit = 0.0;
    /// Decoupled mode: serves the dedicated hard-to-abate hydrogen balance.
    bool industrial = false;

    /// Per timepoint, VRE only.
    std::vector<double> capacity_factor;
    /// Index 1..12; index 0 is used for horizons that stand for every month.
    std::array<double, 13> hydro_cf{};
};

struct LinkInput {
    std::string id;
    data::Commodity commodity = data::Commodity::electricity;
    int from = 0;
    int to = 0;
    double loss = 0.0;
    double existing = 0.0;
    bool expandable = false;
    double max_new = lp::kInf;
    double annual_capex = 0.0;
};

struct SiteInput {
    int zone = 0;
    std::string kind;
    double capacity_tonnes = lp::kInf;
    /// Injection-rate capacity cost, $/(tonne/h)/year; 0 = unlimited free injection.
    double annual_capex = 0.0;
};

struct CapacityGroup {
    std::string name;
    std::vector<int> projects;
    double max_new = lp::kInf;
};

struct ReserveInput {
    bool enabled = false;
    double margin = 0.15;
    bool zonal = false;
};

struct ModelInputs {
    temporal::TemporalStructure time;
    std::vector<std::string> zones;
    std::vector<ProjectInput> projects;
    std::vector<LinkInput> links;
    std::vector<SiteInput> sites;
    /// [zone][timepoint], MW
    std::vector<std::vector<double>> demand;
    /// [zone][timepoint], MW of hydrogen (LHV)
    std::vector<std::vector<double>> h2_load;
    /// Load_H2 is met by the dedicated industrial balance instead of the shared one.
    bool h2_decoupled = false;
    std::optional<double> carbon_cap;
    bool cap_zonal = false;
    std::vector<CapacityGroup> groups;
    ReserveInput reserve;
    /// > 0 switches on penalized unserved/oversupply slacks (dispatch runs).
    double unserved_penalty = 0.0;

    std::size_t num_zones() const { return zones.size(); }
    std::size_t num_timepoints() const { return time.size(); }
    double scale(int tp) const { return time.timepoints()[static_cast<std::size_t>(tp)].scale(); }
};

/// Throws ValidationError when the inputs are inconsistent (sizes, ranges).
void validate_inputs(const ModelInputs& in);

struct ProjectVars {
    lp::Var new_capacity;
    lp::Var new_energy;
    /// Main activity per timepoint: gross output, P2G input, fossil H2
    /// production, capture rate or storage discharge.
    std::vector<lp::Var> activity;
    std::vector<lp::Var> fuel_burn;
    std::vector<lp::Var> charge;
    std::vector<lp::Var> state;

    lp::LinearExpr capacity(const ProjectInput& p) const;
    lp::LinearExpr energy_capacity(const ProjectInput& p) const;
};

struct LinkVars {
    lp::Var new_capacity;
    std::vector<lp::Var> flow;
    std::vector<lp::Var> from_loss;
    std::vector<lp::Var> to_loss;

    lp::LinearExpr capacity(const LinkInput& l) const;
};

struct SiteVars {
    lp::Var new_capacity;
    std::vector<lp::Var> injection;
};

/// LP plus the handles needed to read results back.
struct Assembly {
    lp::Model model;
    std::vector<ProjectVars> projects;
    std::vector<LinkVars> links;
    std::vector<SiteVars> sites;
    /// [zone][tp]; invalid when not in dispatch mode.
    std::vector<std::vector<lp::Var>> unserved;
    std::vector<std::vector<lp::Var>> oversupply;
    std::vector<std::vector<lp::Var>> h2_unserved;
    lp::Var cap_slack;
    /// [zone][tp] row ids, -1 when the balance was not needed.
    std::vector<std::vector<int>> power_balance;
    std::vector<std::vector<int>> h2_balance;
    std::vector<std::vector<int>> h2_industrial_balance;
    std::vector<std::vector<int>> co2_balance;
    /// Fixed O&M of existing capacity, also in the objective constant.
    double existing_fixed_cost = 0.0;
};

/// Builds the full LP: power_core, hydrogen_chain and carbon_chain terms,
/// the zonal balances, carbon cap, reserve, capacity groups and objective.
Assembly build_model(const ModelInputs& in);

/// Net contribution of every project and link to each zonal balance,
/// accumulated while the modules emit their constraints.
struct Ledger {
    std::vector<std::vector<lp::LinearExpr>> power;       // net supply - exports + imports
    std::vector<std::vector<lp::LinearExpr>> h2;          // shared balance
    std::vector<std::vector<lp::LinearExpr>> h2_industrial;
    std::vector<std::vector<lp::LinearExpr>> co2;         // capture + import - export
    std::vector<std::vector<lp::LinearExpr>> emissions;   // per zone, per tp, tonnes/h
    std::vector<lp::LinearExpr> firm_capacity;            // reserve credit x capacity, per zone
    lp::LinearExpr objective;
};

/// Module entry points, called in this order by build_model.
namespace power_core {
void add(Assembly& a, Ledger& ledger, const ModelInputs& in);
void add_balances(Assembly& a, Ledger& ledger, const ModelInputs& in);
} // namespace power_core

namespace hydrogen_chain {
void add(Assembly& a, Ledger& ledger, const ModelInputs& in);
void add_balances(Assembly& a, Ledger& ledger, const ModelInputs& in);
} // namespace hydrogen_chain

namespace carbon_chain {
void add(Assembly& a, Ledger& ledger, const ModelInputs& in);
void add_balances(Assembly& a, Ledger& ledger, const ModelInputs& in);
} // namespace carbon_chain

/// Shared helpers for the module builders.
std::string module_prefix(data::Kind kind);
std::string module_prefix(data::Commodity commodity);
std::string tp_suffix(int tp);
/// activity <= coef x capacity; a bound when capacity is fixed, a row otherwise.
void limit_by_capacity(lp::Model& m, lp::Var v, const lp::LinearExpr& capacity, double coef, const std::string& name,
                       const std::string& source);
/// New-capacity variables, their annualized cost, fixed O&M of existing
/// capacity and the project's reserve contribution.
void add_capacity(Assembly& a, Ledger& ledger, const ModelInputs& in, std::size_t project_index);
/// Adds flow, loss variables and limits for one link; updates the zone ledgers.
void add_link(Assembly& a, std::vector<std::vector<lp::LinearExpr>>& balance, const ModelInputs& in,
              std::size_t link_index, const std::string& prefix);

} // namespace gridcap::model
