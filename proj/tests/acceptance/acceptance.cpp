// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include "gridcap/metrics.hpp"
#include "gridcap/scenario.hpp"
#include "gridcap/temporal.hpp"

#include "fixtures.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

using namespace gridcap;
using data::Kind;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what)
    {
        if (!ok) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
};

double rel(double a, double b) { return fixtures::rel_diff(a, b); }

/// a <= b up to a relative tolerance.
bool leq(double a, double b, double tol) { return a - b <= tol * std::max({1.0, std::abs(a), std::abs(b)}); }

std::string read_file(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Every optimal solve passes through here so the conservation criterion covers
// all instances solved by the other criteria.
struct ConservationLog {
    int instances = 0;
    double worst = 0.0;
    std::string worst_name;
    std::vector<std::string> inexact_hours;
};

ConservationLog g_conservation;

void record(const scenario::ScenarioResult& r)
{
    if (!r.optimal() || !r.inputs || !r.assembly) return;
    const auto c = scenario::check_conservation(*r.inputs, *r.assembly, r.solution.x);
    ++g_conservation.instances;
    if (c.worst() >= g_conservation.worst) {
        g_conservation.worst = c.worst();
        g_conservation.worst_name = r.name;
    }
    if (r.inputs->time.weighted_hours() != temporal::Rational(temporal::kHoursPerYear)) {
        g_conservation.inexact_hours.push_back(r.name);
    }
}

scenario::ScenarioResult solve(const std::string& name, std::shared_ptr<model::ModelInputs> in)
{
    auto r = scenario::run_inputs(name, std::move(in));
    record(r);
    return r;
}

scenario::ScenarioResult solve(const scenario::ScenarioConfig& c, const data::SystemDataset& ds,
                               const std::string& label)
{
    auto r = scenario::run_scenario(c, ds);
    r.name = label + "/" + r.name;
    record(r);
    return r;
}

struct Summary {
    lp::Status status = lp::Status::error;
    double objective = 0.0;
    double emissions = 0.0;
};

/// Bundled scenarios solved on the mini dataset, each once.
const Summary& mini_run(const std::string& name)
{
    static const auto ds = fixtures::mini_dataset();
    static std::map<std::string, Summary> cache;
    if (auto it = cache.find(name); it != cache.end()) return it->second;
    const auto r = solve(fixtures::bundled(name), ds, "mini");
    return cache[name] = {r.status, r.objective, r.emissions_tonnes};
}

double objective_or_inf(const Summary& s)
{
    if (s.status == lp::Status::optimal) return s.objective;
    return s.status == lp::Status::infeasible ? lp::kInf : std::nan("");
}

// 1. A two-technology screening problem against a grid search and the
// screening-curve optimum.
Outcome oracle_equivalence()
{
    Outcome o;
    const std::vector<double> load{100.0, 80.0, 60.0, 20.0};
    struct Tech {
        double capex;
        double vom;
    };
    const Tech base{300e3, 10.0};
    const Tech peak{50e3, 80.0};

    auto in = std::make_shared<model::ModelInputs>(fixtures::blank_inputs(1, 1, 4, 1, 0.0));
    in->demand[0] = load;
    in->projects.push_back(fixtures::thermal("base", 0, base.capex, base.vom));
    in->projects.push_back(fixtures::thermal("peak", 0, peak.capex, peak.vom));
    const double s = in->scale(0);

    const auto start = std::chrono::steady_clock::now();
    const auto r = solve("oracle", in);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    o.require(r.optimal(), "LP solved");
    if (!r.optimal()) return o;

    // Screening curves: each load slice goes to the technology with the lower
    // cost at that slice's duration.
    auto sorted = load;
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    double hand = 0.0;
    double hand_base = 0.0;
    for (std::size_t k = 0; k < sorted.size(); ++k) {
        const double height = sorted[k] - (k + 1 < sorted.size() ? sorted[k + 1] : 0.0);
        const double hours = static_cast<double>(k + 1) * s;
        const double cb = base.capex + base.vom * hours;
        const double cp = peak.capex + peak.vom * hours;
        hand += height * std::min(cb, cp);
        if (cb <= cp) hand_base += height;
    }

    auto dispatch_cost = [&](double kb, double kp) {
        double cost = kb * base.capex + kp * peak.capex;
        for (double d : load) {
            if (kb + kp < d - 1e-9) return lp::kInf;
            const double gb = std::min(kb, d);
            cost += s * (gb * base.vom + (d - gb) * peak.vom);
        }
        return cost;
    };
    const double top = sorted.front();
    double grid_best = lp::kInf;
    for (int i = 0; i < 20; ++i) {
        for (int j = 0; j < 20; ++j) grid_best = std::min(grid_best, dispatch_cost(top * i / 19.0, top * j / 19.0));
    }

    const double lp_base = r.projects[0].total;
    o.detail << "LP " << r.objective << ", hand optimum " << hand << " (rel diff " << rel(r.objective, hand)
             << "), grid best " << grid_best << ", base " << lp_base << " MW vs " << hand_base << " MW, " << seconds
             << " s";
    o.require(r.objective <= grid_best * (1 + 1e-12), "LP <= grid search");
    o.require(rel(r.objective, hand) <= 1e-4, "LP within 1e-4 of hand optimum");
    o.require(seconds < 1.0, "runtime < 1 s");
    return o;
}

// 3. Seasonal toy: summer-rich VRE, flat demand, one cavern zone.
std::shared_ptr<model::ModelInputs> seasonal_toy(bool with_h2, double electrolyzer_capex_scale, double h2_load = 0.0,
                                                 bool decoupled = false)
{
    auto in = std::make_shared<model::ModelInputs>(fixtures::blank_inputs(1, 2, 4, 6, 100.0));
    in->projects.push_back(fixtures::vre("vre", 0, 100e3, {0.85, 0.8, 0.9, 0.75, 0.12, 0.1, 0.15, 0.1}));
    if (with_h2) {
        auto ely = fixtures::storage("ely", 0, Kind::p2g, 50e3 * electrolyzer_capex_scale, 0.0, 1.0, 1.0);
        ely.efficiency = 0.7;
        in->projects.push_back(ely);
        if (decoupled) {
            auto clone = ely;
            clone.id = "ely_hta";
            clone.industrial = true;
            in->projects.push_back(clone);
        }
        in->projects.push_back(fixtures::storage("cavern", 0, Kind::h2_storage_underground, 0.0, 1.0, 0.98, 1.0));
        auto fc = fixtures::storage("fc", 0, Kind::g2p_fuel_cell, 100e3, 0.0, 1.0, 1.0);
        fc.efficiency = 0.55;
        in->projects.push_back(fc);
    }
    if (h2_load > 0.0) {
        in->h2_load = {std::vector<double>(in->num_timepoints(), h2_load)};
        in->h2_decoupled = decoupled;
    }
    return in;
}

Outcome hydrogen_value()
{
    Outcome o;
    const auto with = solve("seasonal_h2", seasonal_toy(true, 1.0));
    const auto without = solve("seasonal_wo_h2", seasonal_toy(false, 1.0));
    const auto costly = solve("seasonal_h2_costly", seasonal_toy(true, 100.0));
    const auto costly_without = solve("seasonal_wo_h2_costly", seasonal_toy(false, 100.0));
    o.require(with.optimal() && without.optimal() && costly.optimal() && costly_without.optimal(), "all optimal");
    if (!o.pass) return o;
    const double gain = 1.0 - with.objective / without.objective;
    double ely_costly = 0.0;
    for (const auto& p : costly.projects) {
        if (p.kind == Kind::p2g) ely_costly += p.total;
    }
    o.detail << "with H2 " << with.objective << " < without " << without.objective << " (" << 100.0 * gain
             << "% lower); electrolyzer x100: " << costly.objective << " vs " << costly_without.objective
             << " (rel diff " << rel(costly.objective, costly_without.objective) << ", electrolyzer " << ely_costly
             << " MW)";
    o.require(with.objective < without.objective * (1 - 1e-6), "strictly lower with H2");
    o.require(rel(costly.objective, costly_without.objective) <= 1e-6, "costly electrolyzer leaves objective unchanged");
    return o;
}

// 4. Scenario monotonicity on the mini dataset.
Outcome monotonicity()
{
    Outcome o;
    const double tol = 1e-8;
    const std::vector<std::string> chain{"ref", "r80", "r90", "ze"};
    for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
        const double a = objective_or_inf(mini_run(chain[i]));
        const double b = objective_or_inf(mini_run(chain[i + 1]));
        o.require(mini_run(chain[i]).status == lp::Status::optimal, chain[i] + " optimal");
        o.require(leq(a, b, tol), chain[i] + " <= " + chain[i + 1]);
    }
    const double ze = objective_or_inf(mini_run("ze"));
    o.detail << "ref " << mini_run("ref").objective << " <= r80 " << mini_run("r80").objective << " <= r90 "
             << mini_run("r90").objective << " <= ze " << ze << ";";
    const std::vector<std::string> removals{"ze_wo_h2",
                                            "ze_wo_battery",
                                            "ze_wo_pumped_hydro",
                                            "ze_wo_underground",
                                            "ze_wo_tank",
                                            "ze_wo_fuel_cell",
                                            "ze_wo_h2_turbine",
                                            "ze_wo_offshore_wind",
                                            "ze_wo_onshore_wind",
                                            "ze_wo_new_grid",
                                            "ze_wo_new_pipeline",
                                            "ze_wo_new_grid_and_pipeline",
                                            "ze_zonal_cap"};
    int infeasible = 0;
    for (const auto& name : removals) {
        const auto& s = mini_run(name);
        const double v = objective_or_inf(s);
        if (s.status == lp::Status::infeasible) ++infeasible;
        o.require(s.status == lp::Status::optimal || s.status == lp::Status::infeasible, name + " solved");
        o.require(leq(ze, v, tol), "ze <= " + name);
    }
    o.detail << " ze <= each of " << removals.size() << " restricted variants (" << infeasible << " infeasible)";
    return o;
}

// 5. System-delta LCOH identity on a decoupled toy and coupled <= decoupled.
Outcome lcoh_identity()
{
    Outcome o;
    auto clean = [](double h2_mw) {
        auto in = std::make_shared<model::ModelInputs>(fixtures::blank_inputs(1, 1, 4, 1, 100.0));
        in->projects.push_back(fixtures::thermal("clean", 0, 0.0, 20.0));
        auto ely = fixtures::storage("ely_hta", 0, Kind::p2g, 50e3, 0.0, 1.0, 1.0);
        ely.efficiency = 0.7;
        ely.fixed_om = 5e3;
        ely.industrial = true;
        in->projects.push_back(ely);
        if (h2_mw > 0.0) {
            in->h2_load = {std::vector<double>(in->num_timepoints(), h2_mw)};
            in->h2_decoupled = true;
        }
        return in;
    };
    const auto base = solve("decoupled_toy_base", clean(0.0));
    const auto with = solve("decoupled_toy", clean(70.0));
    o.require(base.optimal() && with.optimal(), "decoupled toy optimal");
    if (!o.pass) return o;
    const auto rep = metrics::make_cost_report(with, &base);
    o.require(rep.lcoh_system && rep.lcoh_eq2, "both LCOH variants present");
    if (!o.pass) return o;
    const double d = rel(*rep.lcoh_system, *rep.lcoh_eq2);
    o.detail << "system-delta " << *rep.lcoh_system << " vs eq2 " << *rep.lcoh_eq2 << " (rel diff " << d << ");";
    o.require(d <= 1e-6, "identity within 1e-6");

    struct Pair {
        std::string label;
        std::function<double()> coupled;
        std::function<double()> decoupled;
    };
    const auto micro = fixtures::micro_dataset();
    auto micro_run = [&](const std::string& name) {
        const auto r = solve(fixtures::bundled(name), micro, "micro");
        return objective_or_inf({r.status, r.objective, 0.0});
    };
    auto toy_run = [&](bool decoupled) {
        const auto r = solve(decoupled ? "seasonal_decoupled" : "seasonal_coupled", seasonal_toy(true, 1.0, 30.0, decoupled));
        return objective_or_inf({r.status, r.objective, 0.0});
    };
    const std::vector<Pair> pairs{
        {"seasonal toy", [&] { return toy_run(false); }, [&] { return toy_run(true); }},
        {"micro", [&] { return micro_run("ze_h2_demand"); }, [&] { return micro_run("ze_h2_demand_decouple"); }},
        {"mini", [&] { return objective_or_inf(mini_run("ze_h2_demand")); },
         [&] { return objective_or_inf(mini_run("ze_h2_demand_decouple")); }},
    };
    for (const auto& p : pairs) {
        const double c = p.coupled();
        const double dc = p.decoupled();
        o.detail << " " << p.label << " coupled " << c << " <= decoupled " << dc << ";";
        o.require(std::isfinite(c), p.label + " coupled optimal");
        o.require(leq(c, dc, 1e-7), p.label + " coupled <= decoupled");
    }
    return o;
}

// 6. Zero cap with a must-run emitter, then with DAC.
Outcome zero_cap()
{
    Outcome o;
    auto build = [](bool dac) {
        auto in = std::make_shared<model::ModelInputs>(fixtures::blank_inputs(1, 2, 4, 3, 60.0));
        auto coal = fixtures::thermal("coal", 0, 0.0, 2.0);
        coal.candidate = false;
        coal.existing = 100.0;
        coal.min_gen_fraction = 0.4;
        coal.efficiency = 0.38;
        coal.emission_factor = 0.0953;
        in->projects.push_back(coal);
        in->projects.push_back(fixtures::vre("solar", 0, 60e3, {0.0, 0.6, 0.9, 0.3, 0.0, 0.5, 0.8, 0.2}));
        auto bat = fixtures::storage("battery", 0, Kind::battery, 20e3, 20e3, 0.92, 0.92);
        bat.duration_hours = 6.0;
        in->projects.push_back(bat);
        if (dac) {
            auto d = fixtures::storage("dac", 0, Kind::dac, 600e3, 0.0, 1.0, 1.0);
            d.ele_per_tonne = 1.5;
            in->projects.push_back(d);
            in->sites.push_back({0, "onshore", lp::kInf, 0.0});
        }
        in->carbon_cap = 0.0;
        return in;
    };
    const auto stuck = solve("zero_cap_must_run", build(false));
    const auto fixed = solve("zero_cap_dac", build(true));
    o.detail << "without capture: " << lp::to_string(stuck.status);
    o.require(stuck.status == lp::Status::infeasible, "must-run emitter infeasible");
    o.require(fixed.optimal(), "DAC restores feasibility");
    if (fixed.optimal()) {
        o.detail << "; with DAC: optimal, net emissions " << fixed.emissions_tonnes << " t, captured "
                 << fixed.captured_tonnes << " t";
        o.require(fixed.emissions_tonnes <= 1e-6, "net emissions <= 1e-6");
    }
    return o;
}

// 7. Unit anchors.
Outcome anchors()
{
    Outcome o;
    const double twh = metrics::convert_h2(124.0, metrics::H2Unit::megatonne, metrics::H2Unit::twh);
    const double per_kg = metrics::usd_per_mwh_to_usd_per_kg(58.0);
    const double gray = metrics::compute_gray_lcoh({387.0, 0.0, 1.0, 1.0});
    o.detail << "124 Mt = " << twh << " TWh; 58 $/MWh = " << per_kg << " $/kg; 387 $/kW/y = " << gray << " $/MWh";
    o.require(std::abs(twh - 4133.0) / 4133.0 <= 0.01, "124 Mt within 1% of 4133 TWh");
    o.require(std::abs(per_kg - 1.933) / 1.933 <= 0.005, "58 $/MWh within 0.5% of 1.933 $/kg");
    o.require(std::abs(gray - 44.18) / 44.18 <= 0.001, "gray capacity term within 0.1% of 44.18");
    return o;
}

// 8. Full-year dispatch of a planned system.
Outcome dispatch()
{
    Outcome o;
    const auto ds = fixtures::micro_dataset();
    const auto config = fixtures::bundled("ze");
    const auto plan = solve(config, ds, "micro");
    o.require(plan.optimal(), "plan optimal");
    if (!plan.optimal()) return o;
    const auto planned = scenario::planned_capacity(plan);
    const auto full = scenario::dispatch_validation(config, ds, planned);
    scenario::DispatchOptions half_options;
    half_options.generation_scale = 0.5;
    scenario::DispatchReport half;
    bool threw = false;
    try {
        half = scenario::dispatch_validation(config, ds, planned, half_options);
    } catch (const std::exception& e) {
        threw = true;
        o.detail << "exception: " << e.what() << "; ";
    }
    o.detail << full.hours << " h, unserved " << full.unserved_percent << "%; generation x0.5: unserved "
             << half.unserved_percent << "%";
    o.require(full.status == lp::Status::optimal && full.hours == 8760, "full dispatch solved over 8760 h");
    o.require(full.unserved_percent <= 1e-6, "0% unserved");
    o.require(!threw && half.status == lp::Status::optimal, "halved dispatch reported without error");
    o.require(half.unserved_percent > 0.0, "halved capacity leaves unserved energy");
    return o;
}

// 9. Byte-identical MPS exports and reports across two runs.
Outcome determinism()
{
    Outcome o;
    const auto ds = fixtures::micro_dataset();
    const auto config = fixtures::bundled("ze_h2_demand");
    std::vector<std::string> mps;
    std::vector<fs::path> dirs;
    for (int run = 0; run < 2; ++run) {
        const auto inputs = scenario::apply_scenario(config, ds);
        mps.push_back(lp::export_mps(model::build_model(inputs).model, config.name));
        const auto r = solve(config, ds, "micro");
        o.require(r.optimal(), "run optimal");
        if (!r.optimal()) return o;
        dirs.push_back(fixtures::scratch_dir("acceptance_determinism_" + std::to_string(run)));
        metrics::emit_report(r, metrics::make_cost_report(r), dirs.back());
        std::ofstream(dirs.back() / "result.json", std::ios::binary) << scenario::to_json(r);
    }
    o.require(mps[0] == mps[1], "MPS identical");
    int files = 0;
    for (const auto& entry : fs::directory_iterator(dirs[0])) {
        ++files;
        o.require(read_file(entry.path()) == read_file(dirs[1] / entry.path().filename()),
                  entry.path().filename().string() + " identical");
    }
    o.detail << "MPS " << mps[0].size() << " bytes and " << files << " report files identical";
    return o;
}

// 2. Conservation over every instance solved above, plus exact 8760 h weights.
Outcome conservation()
{
    Outcome o;
    const auto rep = temporal::TemporalStructure::representative({}, [] {
        std::vector<temporal::RepresentativeDays> days;
        for (int m = 1; m <= 12; ++m) days.push_back({m, 10, 15, 20});
        return days;
    }());
    const auto full = temporal::TemporalStructure::full_year({});
    const temporal::Rational year(temporal::kHoursPerYear);
    o.detail << g_conservation.instances << " solved instances, worst scaled residual " << g_conservation.worst << " ("
             << g_conservation.worst_name << "); weights: representative " << rep.weighted_hours() << ", full year "
             << full.weighted_hours();
    o.require(g_conservation.instances > 0, "instances recorded");
    o.require(g_conservation.worst <= 1e-6, "residuals <= 1e-6");
    o.require(g_conservation.inexact_hours.empty(), "every instance covers 8760 h exactly");
    o.require(rep.weighted_hours() == year && full.weighted_hours() == year, "8760 h exactly in rational arithmetic");
    return o;
}

} // namespace

int main()
{
    struct Criterion {
        int id;
        const char* name;
        Outcome (*check)();
    };
    // Conservation runs last so it sees every instance the others solved.
    const std::vector<Criterion> order{
        {1, "oracle equivalence", oracle_equivalence},
        {3, "hydrogen value direction", hydrogen_value},
        {4, "scenario monotonicity", monotonicity},
        {5, "LCOH identity and coupling direction", lcoh_identity},
        {6, "zero-cap logic", zero_cap},
        {7, "unit anchors", anchors},
        {8, "dispatch validation", dispatch},
        {9, "determinism", determinism},
        {2, "conservation", conservation},
    };
    std::map<int, std::string> lines;
    bool all = true;
    for (const auto& c : order) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.check();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail << " [exception: " << e.what() << "]";
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::ostringstream line;
        line << (o.pass ? "PASS" : "FAIL") << " " << c.id << " " << c.name << ": " << o.detail.str() << " ["
             << seconds << " s]";
        lines[c.id] = line.str();
        all = all && o.pass;
    }
    for (const auto& [id, line] : lines) std::cout << line << "\n";
    return all ? 0 : 1;
}
