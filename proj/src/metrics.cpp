#include "gridcap/metrics.hpp"

#include "gridcap/csv.hpp"
#include "gridcap/errors.hpp"
#include "gridcap/units.hpp"

#include <json.hpp>

#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace gridcap::metrics {

using nlohmann::ordered_json;
using scenario::ScenarioResult;

namespace {

void require_positive(double v, const std::string& what)
{
    if (!(v > 0.0) || !std::isfinite(v)) throw ValidationError(what + " must be > 0");
}

std::string num(double v) { return lp::format_number(v); }

struct UnitInfo {
    H2Unit unit;
    const char* name;
    double kwh;
};

constexpr double kKgKwh = units::kH2KwhPerKg;

const std::array<UnitInfo, 10> kUnits{{
    {H2Unit::kg, "kg", kKgKwh},
    {H2Unit::tonne, "t", kKgKwh * 1e3},
    {H2Unit::kilotonne, "kt", kKgKwh * 1e6},
    {H2Unit::megatonne, "Mt", kKgKwh * 1e9},
    {H2Unit::mj, "MJ", 1.0 / units::kMjPerKwh},
    {H2Unit::gj, "GJ", 1e3 / units::kMjPerKwh},
    {H2Unit::kwh, "kWh", 1.0},
    {H2Unit::mwh, "MWh", 1e3},
    {H2Unit::gwh, "GWh", 1e6},
    {H2Unit::twh, "TWh", 1e9},
}};

const UnitInfo& info(H2Unit u)
{
    for (const auto& i : kUnits) {
        if (i.unit == u) return i;
    }
    throw ValidationError("unknown hydrogen unit");
}

void write_text(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
    out << text;
    if (!out) throw std::runtime_error(path.string() + ": write failed");
}

void flatten(const nlohmann::json& node, const std::string& prefix, std::vector<std::pair<std::string, double>>& out)
{
    if (node.is_object()) {
        for (const auto& [k, v] : node.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, out);
    } else if (node.is_number()) {
        out.emplace_back(prefix, node.get<double>());
    }
}

} // namespace

double compute_lcoe(double total_cost, double served_demand_mwh)
{
    require_positive(served_demand_mwh, "served electricity demand");
    return total_cost / served_demand_mwh;
}

double compute_lcoe(const ScenarioResult& result)
{
    if (!result.optimal()) throw ValidationError("LCOE needs an optimal result");
    return compute_lcoe(result.costs.total(), result.demand_mwh - result.unserved_mwh);
}

double compute_lcoh_conventional(double capacity_cost, double lcoe, double ed_mwh, double hd_mwh, double efficiency,
                                 LcohMode mode)
{
    if (!(efficiency > 0.0 && efficiency <= 1.0)) throw ValidationError("electrolyzer efficiency must be in (0, 1]");
    if (ed_mwh < 0.0 || hd_mwh < 0.0) throw ValidationError("hydrogen energy quantities must be >= 0");
    if (mode == LcohMode::eq2) {
        require_positive(hd_mwh, "hydrogen demand HD");
        return (capacity_cost + lcoe * hd_mwh / efficiency) / hd_mwh;
    }
    const double h = ed_mwh + hd_mwh;
    require_positive(h, "total hydrogen ED + HD");
    return (capacity_cost + lcoe * h / efficiency) / h;
}

double compute_lcoh_system(double total_with_demand, double total_baseline, double hd_mwh)
{
    require_positive(hd_mwh, "hydrogen demand HD");
    return (total_with_demand - total_baseline) / hd_mwh;
}

double compute_lcoh_system(const ScenarioResult& with_demand, const ScenarioResult& baseline)
{
    if (!with_demand.optimal() || !baseline.optimal()) throw ValidationError("system LCOH needs two optimal results");
    return compute_lcoh_system(with_demand.costs.total(), baseline.costs.total(), with_demand.h2_demand_mwh);
}

double compute_gray_lcoh(const GrayH2Params& p)
{
    if (!(p.efficiency > 0.0 && p.efficiency <= 1.0)) throw ValidationError("fuel-to-hydrogen efficiency must be in (0, 1]");
    if (p.capacity_factor != 1.0) throw ValidationError("gray hydrogen cost assumes a capacity factor of 1");
    const double mwh_per_kw_year = units::kHoursPerYear / units::kKwPerMw;
    return p.fixed_cost / mwh_per_kw_year + p.fuel_price * units::kMmbtuPerMwh / p.efficiency;
}

std::optional<H2Unit> parse_h2_unit(std::string_view text)
{
    for (const auto& i : kUnits) {
        if (text == i.name) return i.unit;
    }
    std::string lower(text);
    for (auto& ch : lower) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    if (lower == "tonne" || lower == "tonnes") return H2Unit::tonne;
    if (lower == "million_tonnes" || lower == "mt") return H2Unit::megatonne;
    for (const auto& i : kUnits) {
        std::string name(i.name);
        for (auto& ch : name) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
        if (lower == name && i.unit != H2Unit::megatonne) return i.unit;
    }
    return std::nullopt;
}

std::string_view to_string(H2Unit unit) { return info(unit).name; }

double convert_h2(double value, H2Unit from, H2Unit to) { return value * info(from).kwh / info(to).kwh; }

double convert_h2(double value, std::string_view from, std::string_view to)
{
    const auto f = parse_h2_unit(from);
    const auto t = parse_h2_unit(to);
    if (!f || !t) {
        throw ValidationError("unsupported hydrogen unit pair '" + std::string(from) + "' -> '" + std::string(to) + "'");
    }
    return convert_h2(value, *f, *t);
}

double usd_per_mwh_to_usd_per_kg(double usd_per_mwh) { return usd_per_mwh * kKgKwh / 1e3; }

double usd_per_kg_to_usd_per_mwh(double usd_per_kg) { return usd_per_kg * 1e3 / kKgKwh; }

CostReport make_cost_report(const ScenarioResult& r, const ScenarioResult* baseline)
{
    if (!r.optimal()) throw ValidationError("cost report needs an optimal result for '" + r.name + "'");
    CostReport c;
    c.scenario = r.name;
    c.breakdown = r.costs;
    c.objective = r.objective;
    c.demand_mwh = r.demand_mwh - r.unserved_mwh;
    c.hd_mwh = r.h2_demand_mwh;
    c.ed_mwh = r.h2_for_power_mwh;
    c.lcoe = compute_lcoe(r);
    c.electrolyzer_capacity_cost = r.electrolyzer_capacity_cost;
    c.electrolyzer_efficiency = r.electrolyzer_efficiency;
    if (c.hd_mwh > 0.0) c.cost_of_energy = r.costs.total() / (c.demand_mwh + c.hd_mwh);
    if (c.electrolyzer_efficiency > 0.0) {
        if (c.ed_mwh + c.hd_mwh > 0.0) {
            c.lcoh_eq1 = compute_lcoh_conventional(c.electrolyzer_capacity_cost, c.lcoe, c.ed_mwh, c.hd_mwh,
                                                   c.electrolyzer_efficiency, LcohMode::eq1);
        }
        if (c.hd_mwh > 0.0) {
            // Against a baseline, electricity for the electrolyzers is priced at the baseline grid cost.
            const double lcoe = baseline ? compute_lcoe(*baseline) : c.lcoe;
            c.lcoh_eq2 = compute_lcoh_conventional(c.electrolyzer_capacity_cost, lcoe, c.ed_mwh, c.hd_mwh,
                                                   c.electrolyzer_efficiency, LcohMode::eq2);
        }
    }
    if (baseline && c.hd_mwh > 0.0) c.lcoh_system = compute_lcoh_system(r, *baseline);
    return c;
}

std::string report_json(const ScenarioResult& r, const CostReport& c)
{
    ordered_json j;
    j["schema"] = "gridcap-report/1";
    j["scenario"] = c.scenario;
    j["status"] = lp::to_string(r.status);
    j["definitions"] = {
        {"lcoe", "total annualized cost / weighted served electricity demand (electrolyzer consumption excluded)"},
        {"cost_of_energy", "total annualized cost / (weighted served electricity demand + hydrogen demand HD)"},
        {"lcoh_eq1", "(Cap_E + LCOE (ED + HD) / eta) / (ED + HD)"},
        {"lcoh_eq2", "(Cap_E + LCOE HD / eta) / HD"},
        {"lcoh_system", "(total cost with hydrogen demand - baseline total cost) / HD"}};
    j["costs"] = {{"investment", c.breakdown.investment}, {"fixed_om", c.breakdown.fixed_om},
                  {"variable_om", c.breakdown.variable_om}, {"fuel", c.breakdown.fuel},
                  {"penalty", c.breakdown.penalty},       {"total", c.breakdown.total()},
                  {"objective", c.objective}};
    ordered_json m;
    m["demand_mwh"] = c.demand_mwh;
    m["hd_mwh"] = c.hd_mwh;
    m["ed_mwh"] = c.ed_mwh;
    m["lcoe_usd_per_mwh"] = c.lcoe;
    if (c.cost_of_energy) m["cost_of_energy_usd_per_mwh"] = *c.cost_of_energy;
    m["electrolyzer_capacity_cost"] = c.electrolyzer_capacity_cost;
    m["electrolyzer_efficiency"] = c.electrolyzer_efficiency;
    auto lcoh = [&](const char* key, const std::optional<double>& v) {
        if (!v) return;
        m[std::string(key) + "_usd_per_mwh"] = *v;
        m[std::string(key) + "_usd_per_kg"] = usd_per_mwh_to_usd_per_kg(*v);
    };
    lcoh("lcoh_eq1", c.lcoh_eq1);
    lcoh("lcoh_eq2", c.lcoh_eq2);
    lcoh("lcoh_system", c.lcoh_system);
    m["emissions_tonnes"] = r.emissions_tonnes;
    m["captured_tonnes"] = r.captured_tonnes;
    m["injected_tonnes"] = r.injected_tonnes;
    j["metrics"] = m;
    return j.dump(2) + "\n";
}

std::string report_csv(const CostReport& c)
{
    std::vector<std::tuple<std::string, double, std::string>> rows{
        {"investment", c.breakdown.investment, "usd_per_year"},
        {"fixed_om", c.breakdown.fixed_om, "usd_per_year"},
        {"variable_om", c.breakdown.variable_om, "usd_per_year"},
        {"fuel", c.breakdown.fuel, "usd_per_year"},
        {"penalty", c.breakdown.penalty, "usd_per_year"},
        {"total_cost", c.breakdown.total(), "usd_per_year"},
        {"demand", c.demand_mwh, "mwh"},
        {"hd", c.hd_mwh, "mwh_h2"},
        {"ed", c.ed_mwh, "mwh_h2"},
        {"lcoe", c.lcoe, "usd_per_mwh"},
    };
    if (c.cost_of_energy) rows.emplace_back("cost_of_energy", *c.cost_of_energy, "usd_per_mwh");
    auto lcoh = [&](const char* key, const std::optional<double>& v) {
        if (!v) return;
        rows.emplace_back(key, *v, "usd_per_mwh_h2");
        rows.emplace_back(key, usd_per_mwh_to_usd_per_kg(*v), "usd_per_kg");
    };
    lcoh("lcoh_eq1", c.lcoh_eq1);
    lcoh("lcoh_eq2", c.lcoh_eq2);
    lcoh("lcoh_system", c.lcoh_system);
    std::ostringstream out;
    out << "scenario,metric,value,unit\n";
    for (const auto& [k, v, u] : rows) out << c.scenario << "," << k << "," << num(v) << "," << u << "\n";
    return out.str();
}

std::vector<std::filesystem::path> emit_report(const ScenarioResult& r, const CostReport& c,
                                               const std::filesystem::path& dir, const ReportOptions& options)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw std::runtime_error(dir.string() + ": " + ec.message());
    std::vector<std::filesystem::path> written;
    auto put = [&](const char* name, const std::string& text) {
        write_text(dir / name, text);
        written.push_back(dir / name);
    };

    struct Agg {
        double existing = 0, added = 0, total = 0, output = 0, input = 0;
    };
    std::map<std::pair<std::string, data::Kind>, Agg> agg;
    for (const auto& p : r.projects) {
        auto& a = agg[{p.zone, p.kind}];
        a.existing += p.existing;
        a.added += p.new_capacity;
        a.total += p.total;
        a.output += p.annual_output;
        a.input += p.annual_input;
    }
    std::ostringstream cap;
    std::ostringstream energy;
    cap << "scenario,zone,kind,existing,new,total\n";
    energy << "scenario,zone,kind,annual_output,annual_input\n";
    for (const auto& zone : r.zones) {
        for (const auto kind : data::kAllKinds) {
            const auto it = agg.find({zone, kind});
            const Agg a = it == agg.end() ? Agg{} : it->second;
            if (!options.nonzero_only || a.total > 0.0) {
                cap << r.name << "," << zone << "," << data::to_string(kind) << "," << num(a.existing) << ","
                    << num(a.added) << "," << num(a.total) << "\n";
            }
            if (!options.nonzero_only || a.output != 0.0 || a.input != 0.0) {
                energy << r.name << "," << zone << "," << data::to_string(kind) << "," << num(a.output) << ","
                       << num(a.input) << "\n";
            }
        }
    }
    put("capacity.csv", cap.str());
    put("energy.csv", energy.str());

    std::ostringstream storage;
    storage << "scenario,project,zone,kind,power,energy\n";
    for (const auto& p : r.projects) {
        if (!data::is_electric_storage(p.kind) && !data::is_h2_storage(p.kind)) continue;
        if (options.nonzero_only && p.total <= 0.0) continue;
        const double power = data::is_h2_storage(p.kind) ? 0.0 : p.total;
        storage << r.name << "," << p.id << "," << p.zone << "," << data::to_string(p.kind) << "," << num(power) << ","
                << num(p.energy_capacity) << "\n";
    }
    put("storage.csv", storage.str());

    std::ostringstream trade;
    trade << "scenario,link,commodity,from,to,existing,new,annual_forward,annual_backward,annual_losses\n";
    for (const auto& l : r.links) {
        if (options.nonzero_only && l.existing + l.new_capacity <= 0.0) continue;
        trade << r.name << "," << l.id << "," << data::to_string(l.commodity) << "," << l.from << "," << l.to << ","
              << num(l.existing) << "," << num(l.new_capacity) << "," << num(l.annual_forward) << ","
              << num(l.annual_backward) << "," << num(l.annual_losses) << "\n";
    }
    put("trade.csv", trade.str());

    std::ostringstream costs;
    costs << "scenario,category,usd_per_year\n";
    for (const auto& [k, v] : std::vector<std::pair<const char*, double>>{{"investment", c.breakdown.investment},
                                                                           {"fixed_om", c.breakdown.fixed_om},
                                                                           {"variable_om", c.breakdown.variable_om},
                                                                           {"fuel", c.breakdown.fuel},
                                                                           {"penalty", c.breakdown.penalty}}) {
        costs << r.name << "," << k << "," << num(v) << "\n";
    }
    put("costs.csv", costs.str());
    put("report.csv", report_csv(c));
    put("report.json", report_json(r, c));
    return written;
}

ReportValues load_report_values(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw ValidationError(path.string() + ": cannot open");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
    ReportValues out;
    if (j.contains("scenario")) {
        out.scenario = j["scenario"].get<std::string>();
    } else if (j.contains("name")) {
        out.scenario = j["name"].get<std::string>();
    } else {
        throw ValidationError(path.string() + ": not a report or result file");
    }
    if (j.contains("objective") && j["objective"].is_number()) out.values.emplace_back("objective", j["objective"].get<double>());
    for (const char* section : {"costs", "totals", "metrics"}) {
        if (j.contains(section)) flatten(j[section], section, out.values);
    }
    return out;
}

std::string compare_reports(const std::vector<ReportValues>& reports)
{
    if (reports.size() < 2) throw ValidationError("compare needs at least two reports");
    std::ostringstream out;
    out << "# " << kCompareSchema << "\n";
    out << "metric,base,scenario,base_value,value,delta,percent_change\n";
    const auto& base = reports.front();
    for (std::size_t k = 1; k < reports.size(); ++k) {
        const auto& other = reports[k];
        std::map<std::string, double> values(other.values.begin(), other.values.end());
        for (const auto& [metric, b] : base.values) {
            const auto it = values.find(metric);
            if (it == values.end()) continue;
            const double delta = it->second - b;
            out << metric << "," << base.scenario << "," << other.scenario << "," << num(b) << "," << num(it->second)
                << "," << num(delta) << ",";
            if (b != 0.0) out << num(100.0 * delta / std::abs(b));
            out << "\n";
        }
    }
    return out.str();
}

} // namespace gridcap::metrics
