#pragma once

#include "gridcap/temporal.hpp"

#include <vector>

namespace gridcap {

namespace power_core {
/// State change of a storage asset over one timepoint.
double storage_state_change(double charge, double discharge, double charge_eff, double discharge_eff, double hours,
                            double weight);
/// Energy arriving at the far end of a lossy link.
double delivered_flow(double flow, double loss_fraction);
/// Credited capacity required for a peak load and reserve margin.
double reserve_requirement(double peak_load, double margin);
} // namespace power_core

namespace hydrogen_chain {
enum class DemandMode { shaped, flat };

double p2g_output(double electricity_in, double efficiency);
double g2p_output(double hydrogen_in, double efficiency);
/// MMBtu of fuel burned to produce `production` MWh of hydrogen.
double fossil_fuel_burn_mmbtu(double production_mwh, double efficiency);

/// Load_H2 per [zone][timepoint] in MW. Shaped mode follows each zone's
/// electricity demand; flat mode spreads the zone's share evenly over 8760 h.
std::vector<std::vector<double>> build_h2_demand_profile(double annual_mwh, const std::vector<double>& zone_shares,
                                                         DemandMode mode,
                                                         const std::vector<std::vector<double>>& demand,
                                                         const temporal::TemporalStructure& time);
} // namespace hydrogen_chain

namespace carbon_chain {
/// Upper bound on CCS capture for a parent burning `fuel_burn` MMBtu.
double capture_limit(double fuel_burn_mmbtu, double emission_factor, double capture_rate);
/// Ledger entry: burn x EF - capture (DAC: burn 0).
double net_emission(double fuel_burn_mmbtu, double emission_factor, double captured);
} // namespace carbon_chain

} // namespace gridcap
