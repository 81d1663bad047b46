#pragma once

#include "gridcap/formulas.hpp"
#include "gridcap/lp.hpp"
#include "gridcap/model.hpp"
#include "gridcap/system_data.hpp"

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace gridcap::scenario {

struct EmissionCap {
    enum class Mode { none, fraction_of_base, absolute };
    Mode mode = Mode::none;
    double fraction = 0.0;
    /// Falls back to the dataset's base_year_emissions_tonnes setting.
    std::optional<double> base_tonnes;
    double tonnes = 0.0;
};

/// Cap on total installed capacity of the member technologies (or kinds).
struct CapacityCap {
    std::string name;
    std::vector<std::string> members;
    double mw = 0.0;
};

/// Absolute values replace the cost record; multipliers scale it.
struct CostOverride {
    std::string technology;
    std::optional<double> capital;
    std::optional<double> capital_energy;
    std::optional<double> fixed_om;
    std::optional<double> fixed_om_energy;
    std::optional<double> variable_om;
    double capital_multiplier = 1.0;
    double fixed_om_multiplier = 1.0;
    std::optional<double> efficiency;
};

struct H2DemandConfig {
    double annual_twh = 0.0;
    hydrogen_chain::DemandMode mode = hydrogen_chain::DemandMode::shaped;
};

struct ReserveConfig {
    bool enabled = true;
    double margin = 0.15;
    bool zonal = false;
    /// kind name -> capacity credit, overriding the defaults.
    std::map<std::string, double> credits;
};

enum class Layout { representative, full_year };

struct ScenarioConfig {
    std::string name;
    std::string description;
    EmissionCap emission_cap;
    bool cap_zonal = false;
    /// Keys: kind, technology, fuel, or group ("hydrogen", "fossil_generation",
    /// "fossil_h2", "ccs", "dac"). false forbids new capacity.
    std::map<std::string, bool> tech_flags;
    std::vector<CapacityCap> capacity_caps;
    std::optional<double> nuclear_min_gen;
    std::optional<double> ccs_capture_rate;
    H2DemandConfig h2_demand;
    bool decoupled = false;
    /// true allows SMR/gasification (with CCS), false or unset forbids them.
    bool blue_h2 = false;
    std::map<data::Commodity, bool> network_expansion;
    ReserveConfig reserve;
    std::vector<CostOverride> cost_overrides;
    Layout layout = Layout::representative;
};

ScenarioConfig load_scenario(const std::filesystem::path& path);
ScenarioConfig parse_scenario(std::string_view json_text, const std::string& origin = "<memory>");
std::string to_json(const ScenarioConfig& config);

/// Throws ValidationError on contradictory or out-of-range settings.
void validate(const ScenarioConfig& config);

/// true when the scenario forbids new capacity of this project.
bool forbids(const ScenarioConfig& config, const data::Project& project);

/// Throws ValidationError when the inputs still carry new capacity the
/// scenario forbids.
void check_consistency(const ScenarioConfig& config, const model::ModelInputs& inputs);

/// Filters candidates, installs caps and cap parameters, builds the hydrogen
/// demand profile and the coupling wiring.
model::ModelInputs apply_scenario(const ScenarioConfig& config, const data::SystemDataset& dataset);
model::ModelInputs apply_scenario(const ScenarioConfig& config, const data::SystemDataset& dataset, Layout layout);

struct RunOptions {
    std::string solver;
    double tolerance = 1e-6;
};

struct ProjectResult {
    std::string id;
    std::string zone;
    data::Kind kind = data::Kind::thermal_gen;
    std::string technology;
    double existing = 0.0;
    double new_capacity = 0.0;
    double total = 0.0;
    double energy_capacity = 0.0;
    /// Weighted annual activity (MWh, MWh-H2 or tonnes).
    double annual_output = 0.0;
    double annual_input = 0.0;
    double annual_fuel_mmbtu = 0.0;
    double annual_emissions = 0.0;
};

struct LinkResult {
    std::string id;
    data::Commodity commodity = data::Commodity::electricity;
    std::string from;
    std::string to;
    double existing = 0.0;
    double new_capacity = 0.0;
    double annual_forward = 0.0;
    double annual_backward = 0.0;
    double annual_losses = 0.0;
};

struct CostBreakdown {
    double investment = 0.0;
    double fixed_om = 0.0;
    double variable_om = 0.0;
    double fuel = 0.0;
    double penalty = 0.0;

    double total() const { return investment + fixed_om + variable_om + fuel + penalty; }
};

struct ScenarioResult {
    std::string name;
    lp::Status status = lp::Status::error;
    std::string message;
    std::vector<std::string> diagnostics;
    double objective = 0.0;
    std::size_t num_variables = 0;
    std::size_t num_constraints = 0;

    std::vector<ProjectResult> projects;
    std::vector<LinkResult> links;
    std::vector<std::string> zones;
    double demand_mwh = 0.0;
    /// HD: weighted hydrogen demand of hard-to-abate sectors, MWh-H2.
    double h2_demand_mwh = 0.0;
    /// ED: weighted hydrogen burned for power, MWh-H2.
    double h2_for_power_mwh = 0.0;
    double emissions_tonnes = 0.0;
    double captured_tonnes = 0.0;
    double injected_tonnes = 0.0;
    double unserved_mwh = 0.0;
    CostBreakdown costs;
    /// Annualized capital + fixed O&M of electrolyzers, $/y.
    double electrolyzer_capacity_cost = 0.0;
    double electrolyzer_efficiency = 0.0;
    bool decoupled = false;

    std::shared_ptr<const model::ModelInputs> inputs;
    std::shared_ptr<const model::Assembly> assembly;
    lp::Solution solution;

    bool optimal() const { return status == lp::Status::optimal; }
};

/// Cost categories recomputed from primal values and cost inputs.
CostBreakdown compute_costs(const model::ModelInputs& in, const model::Assembly& a, const std::vector<double>& x);

/// Solves prepared inputs and post-processes the solution.
ScenarioResult run_inputs(const std::string& name, std::shared_ptr<const model::ModelInputs> inputs,
                          const RunOptions& options = {});
ScenarioResult run_scenario(const ScenarioConfig& config, const data::SystemDataset& dataset,
                            const RunOptions& options = {});

/// Stable JSON serialization of the result (no model internals).
std::string to_json(const ScenarioResult& result);
/// Reads a serialized result back; the model handles stay empty.
ScenarioResult result_from_json(std::string_view text, const std::string& origin = "<memory>");
ScenarioResult load_result(const std::filesystem::path& path);

/// Capacities read back from a serialized result, by project / link id.
struct PlannedCapacity {
    std::map<std::string, double> project_total;
    std::map<std::string, double> project_energy;
    std::map<std::string, double> link_total;
};
PlannedCapacity planned_capacity(const ScenarioResult& result);
PlannedCapacity load_planned_capacity(const std::filesystem::path& result_json);

struct DispatchOptions {
    RunOptions run;
    /// Multiplies the capacity of every generating kind (sensitivity use).
    double generation_scale = 1.0;
};

struct DispatchReport {
    lp::Status status = lp::Status::error;
    std::string message;
    double demand_mwh = 0.0;
    double unserved_mwh = 0.0;
    double unserved_percent = 0.0;
    double h2_demand_mwh = 0.0;
    double h2_unserved_mwh = 0.0;
    double oversupply_mwh = 0.0;
    double emissions_tonnes = 0.0;
    double cap_excess_tonnes = 0.0;
    double penalty = 0.0;
    std::size_t hours = 0;
};

/// Operations-only run over the full calendar year with capacities fixed at
/// the planned values; unserved energy goes to penalized slacks.
DispatchReport dispatch_validation(const ScenarioConfig& config, const data::SystemDataset& dataset,
                                   const PlannedCapacity& planned, const DispatchOptions& options = {});
/// Same, on prepared full-year inputs whose capacities are already fixed.
DispatchReport dispatch_inputs(model::ModelInputs inputs, const DispatchOptions& options = {});

std::string to_json(const DispatchReport& report);

/// Largest scaled residual of each zonal balance and of the weighted annual
/// ledgers, recomputed from primal values.
struct ConservationReport {
    double power = 0.0;
    double hydrogen = 0.0;
    double co2 = 0.0;
    double power_annual = 0.0;
    double hydrogen_annual = 0.0;
    double co2_annual = 0.0;

    double worst() const;
};
ConservationReport check_conservation(const model::ModelInputs& in, const model::Assembly& a,
                                      const std::vector<double>& x);

/// The bundled scenario names.
std::vector<std::string> library_names();

} // namespace gridcap::scenario
