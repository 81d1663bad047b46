#pragma once

#include "gridcap/scenario.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gridcap::metrics {

enum class LcohMode { eq1, eq2 };

/// Total annualized cost / weighted served electricity demand, $/MWh.
double compute_lcoe(double total_cost, double served_demand_mwh);
/// Uses the result's recomputed cost breakdown and served demand.
double compute_lcoe(const scenario::ScenarioResult& result);

/// eq1: (Cap_E + LCOE (ED + HD) / eta) / (ED + HD); eq2: (Cap_E + LCOE HD / eta) / HD.
double compute_lcoh_conventional(double capacity_cost, double lcoe, double ed_mwh, double hd_mwh, double efficiency,
                                 LcohMode mode);

/// (total cost with hydrogen demand - baseline total cost) / HD.
double compute_lcoh_system(double total_with_demand, double total_baseline, double hd_mwh);
double compute_lcoh_system(const scenario::ScenarioResult& with_demand, const scenario::ScenarioResult& baseline);

struct GrayH2Params {
    /// $/kW of hydrogen output per year.
    double fixed_cost = 0.0;
    /// $/MMBtu
    double fuel_price = 0.0;
    double efficiency = 1.0;
    double capacity_factor = 1.0;
};

/// fixed_cost / 8.76 + fuel_price x 3.412 / efficiency, $/MWh-H2.
double compute_gray_lcoh(const GrayH2Params& params);

enum class H2Unit { kg, tonne, kilotonne, megatonne, mj, gj, kwh, mwh, gwh, twh };

std::optional<H2Unit> parse_h2_unit(std::string_view text);
std::string_view to_string(H2Unit unit);
/// Hydrogen quantity conversion on the lower heating value (1 kg = 120 MJ).
double convert_h2(double value, H2Unit from, H2Unit to);
/// String form; throws ValidationError on an unknown unit.
double convert_h2(double value, std::string_view from, std::string_view to);
/// $/MWh-H2 to $/kg.
double usd_per_mwh_to_usd_per_kg(double usd_per_mwh);
double usd_per_kg_to_usd_per_mwh(double usd_per_kg);

struct CostReport {
    std::string scenario;
    scenario::CostBreakdown breakdown;
    double objective = 0.0;
    double demand_mwh = 0.0;
    double hd_mwh = 0.0;
    double ed_mwh = 0.0;
    double lcoe = 0.0;
    /// Total cost / (electricity demand + HD), when HD > 0.
    std::optional<double> cost_of_energy;
    double electrolyzer_capacity_cost = 0.0;
    double electrolyzer_efficiency = 0.0;
    std::optional<double> lcoh_eq1;
    std::optional<double> lcoh_eq2;
    std::optional<double> lcoh_system;
};

/// Needs an optimal result. `baseline` (same dataset, no hydrogen demand)
/// enables the system-delta LCOH and prices eq2 electricity at its LCOE.
CostReport make_cost_report(const scenario::ScenarioResult& result,
                            const scenario::ScenarioResult* baseline = nullptr);

struct ReportOptions {
    bool nonzero_only = false;
};

/// Writes capacity.csv, energy.csv, storage.csv, trade.csv, costs.csv,
/// report.csv and report.json into `directory`; returns the file paths.
std::vector<std::filesystem::path> emit_report(const scenario::ScenarioResult& result, const CostReport& report,
                                               const std::filesystem::path& directory,
                                               const ReportOptions& options = {});

std::string report_json(const scenario::ScenarioResult& result, const CostReport& report);
std::string report_csv(const CostReport& report);

/// One metric of a serialized report, flattened to "section.key".
struct ReportValues {
    std::string scenario;
    std::vector<std::pair<std::string, double>> values;
};
ReportValues load_report_values(const std::filesystem::path& report_or_result_json);

/// Long-format comparison of each later report against the first:
/// metric, base, scenario, value, delta, percent change.
std::string compare_reports(const std::vector<ReportValues>& reports);

inline constexpr const char* kCompareSchema = "gridcap-compare/1";

} // namespace gridcap::metrics
