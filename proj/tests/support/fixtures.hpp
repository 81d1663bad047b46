#pragma once

#include "gridcap/model.hpp"
#include "gridcap/scenario.hpp"
#include "gridcap/system_data.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace gridcap::fixtures {

/// Repository root, for the bundled scenarios and data.
std::filesystem::path source_dir();
std::filesystem::path scenario_path(const std::string& name);
/// Fresh empty directory under a per-process tree in the system temp dir.
std::filesystem::path scratch_dir(const std::string& name);

/// Inputs with uniform weights, flat demand and no projects.
model::ModelInputs blank_inputs(int zones, int horizons, int tps_per_horizon, int hours_in_tmp = 1,
                                double demand_mw = 0.0);

model::ProjectInput thermal(const std::string& id, int zone, double annual_capex, double variable_om);
model::ProjectInput vre(const std::string& id, int zone, double annual_capex, std::vector<double> cf);
model::ProjectInput storage(const std::string& id, int zone, data::Kind kind, double annual_capex,
                            double annual_capex_energy, double charge_eff, double discharge_eff);

/// Two-zone synthetic system with every kind the bundled scenarios refer to,
/// complete 8760-hour series and a deterministic weather draw.
data::SystemDataset mini_dataset();
/// East zone of the mini system only, with a reduced fleet; solves in seconds.
data::SystemDataset micro_dataset();

/// Loads one of the bundled scenario files.
scenario::ScenarioConfig bundled(const std::string& name);

/// Relative difference |a - b| / max(1, |a|, |b|).
double rel_diff(double a, double b);

} // namespace gridcap::fixtures
