#include "gridcap/cli.hpp"

#include "gridcap/errors.hpp"
#include "gridcap/lp.hpp"
#include "gridcap/metrics.hpp"
#include "gridcap/scenario.hpp"
#include "gridcap/system_data.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <fstream>
#include <iostream>
#include <mutex>
#include <set>
#include <thread>

namespace gridcap::cli {

namespace fs = std::filesystem;

namespace {

struct Manifest {
    std::string dataset;
    std::vector<std::string> scenarios;
    std::string out = ".";
    std::string solver;
    double tolerance = 1e-6;
    int jobs = 1;
    std::vector<std::string> results;
    std::string baseline;
    double generation_scale = 1.0;
    bool nonzero_only = false;
    bool system_lcoh = false;
};

int exit_for(lp::Status s)
{
    switch (s) {
    case lp::Status::optimal: return kOk;
    case lp::Status::infeasible:
    case lp::Status::unbounded: return kInfeasible;
    case lp::Status::error: return kInternal;
    }
    return kInternal;
}

void write_file(const fs::path& path, const std::string& text)
{
    fs::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error(path.string() + ": cannot open for writing");
    f << text;
    if (!f) throw std::runtime_error(path.string() + ": write failed");
}

std::vector<scenario::ScenarioConfig> load_scenarios(const Manifest& m)
{
    if (m.scenarios.empty()) throw ValidationError("at least one --scenario is required");
    std::vector<scenario::ScenarioConfig> out;
    std::set<std::string> names;
    for (const auto& path : m.scenarios) {
        out.push_back(scenario::load_scenario(path));
        if (!names.insert(out.back().name).second) {
            throw ValidationError("scenario name '" + out.back().name + "' appears twice in this invocation");
        }
    }
    return out;
}

data::SystemDataset load_dataset(const Manifest& m)
{
    if (m.dataset.empty()) throw ValidationError("--dataset is required");
    return data::load_system_inputs(m.dataset);
}

scenario::RunOptions run_options(const Manifest& m)
{
    if (!(m.tolerance > 0.0)) throw ValidationError("--tol must be > 0");
    if (!m.solver.empty()) lp::make_solver(m.solver);
    return {m.solver, m.tolerance};
}

int cmd_validate(const Manifest& m, std::ostream& out, std::ostream&)
{
    const auto ds = load_dataset(m);
    out << "dataset " << ds.source << ": ok\n";
    for (const auto& [table, rows] : ds.row_counts) out << "  " << table << ": " << rows << " rows\n";
    for (const auto& path : m.scenarios) {
        const auto config = scenario::load_scenario(path);
        const auto inputs = scenario::apply_scenario(config, ds);
        out << "scenario " << config.name << ": ok (" << inputs.projects.size() << " projects, "
            << inputs.num_timepoints() << " timepoints)\n";
    }
    return kOk;
}

int cmd_plan(const Manifest& m, std::ostream& out, std::ostream& err)
{
    const auto ds = load_dataset(m);
    const auto configs = load_scenarios(m);
    const auto options = run_options(m);
    std::vector<int> codes(configs.size(), kOk);
    std::vector<std::string> logs(configs.size());
    std::atomic<std::size_t> next{0};

    auto work = [&]() {
        for (std::size_t i = next++; i < configs.size(); i = next++) {
            const auto& config = configs[i];
            std::ostringstream log;
            try {
                const auto result = scenario::run_scenario(config, ds, options);
                const fs::path dir = fs::path(m.out) / config.name;
                write_file(dir / "result.json", scenario::to_json(result));
                if (result.optimal()) {
                    std::optional<scenario::ScenarioResult> baseline;
                    if (m.system_lcoh && result.h2_demand_mwh > 0.0) {
                        auto base_config = config;
                        base_config.name = config.name + "_baseline";
                        base_config.h2_demand = {};
                        base_config.decoupled = false;
                        baseline = scenario::run_scenario(base_config, ds, options);
                        write_file(dir / "baseline_result.json", scenario::to_json(*baseline));
                        if (!baseline->optimal()) {
                            log << config.name << ": baseline without hydrogen demand is "
                                << lp::to_string(baseline->status) << "\n";
                            baseline.reset();
                        }
                    }
                    const auto report = metrics::make_cost_report(result, baseline ? &*baseline : nullptr);
                    metrics::emit_report(result, report, dir, {m.nonzero_only});
                } else {
                    log << config.name << ": " << lp::to_string(result.status) << ": " << result.message << "\n";
                    for (const auto& d : result.diagnostics) log << "  " << d << "\n";
                }
                codes[i] = exit_for(result.status);
            } catch (const ValidationError& e) {
                log << config.name << ": " << e.what() << "\n";
                codes[i] = kValidation;
            } catch (const std::exception& e) {
                log << config.name << ": internal error: " << e.what() << "\n";
                codes[i] = kInternal;
            }
            logs[i] = log.str();
        }
    };
    const int jobs = std::clamp(m.jobs, 1, static_cast<int>(configs.size()));
    std::vector<std::thread> pool;
    for (int k = 1; k < jobs; ++k) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();

    int code = kOk;
    for (std::size_t i = 0; i < configs.size(); ++i) {
        err << logs[i];
        out << configs[i].name << ": " << (codes[i] == kOk ? "optimal" : "failed") << "\n";
        code = std::max(code, codes[i]);
    }
    return code;
}

int cmd_dispatch(const Manifest& m, std::ostream& out, std::ostream& err)
{
    const auto ds = load_dataset(m);
    const auto configs = load_scenarios(m);
    if (configs.size() != 1) throw ValidationError("dispatch takes exactly one --scenario");
    if (m.results.size() != 1) throw ValidationError("dispatch takes exactly one --result");
    const auto planned = scenario::load_planned_capacity(m.results.front());
    scenario::DispatchOptions options;
    options.run = run_options(m);
    options.generation_scale = m.generation_scale;
    const auto report = scenario::dispatch_validation(configs.front(), ds, planned, options);
    write_file(fs::path(m.out) / configs.front().name / "dispatch.json", scenario::to_json(report));
    if (report.status != lp::Status::optimal) {
        err << configs.front().name << ": dispatch " << lp::to_string(report.status) << ": " << report.message << "\n";
        return exit_for(report.status);
    }
    out << configs.front().name << ": unserved " << report.unserved_percent << "% of demand\n";
    return kOk;
}

int cmd_report(const Manifest& m, std::ostream& out, std::ostream&)
{
    if (m.results.empty()) throw ValidationError("report needs --result");
    std::optional<scenario::ScenarioResult> baseline;
    if (!m.baseline.empty()) baseline = scenario::load_result(m.baseline);
    for (const auto& path : m.results) {
        const auto result = scenario::load_result(path);
        const auto report = metrics::make_cost_report(result, baseline ? &*baseline : nullptr);
        const auto files = metrics::emit_report(result, report, fs::path(m.out) / result.name, {m.nonzero_only});
        out << result.name << ": " << files.size() << " files\n";
    }
    return kOk;
}

int cmd_compare(const Manifest& m, std::ostream& out, std::ostream&)
{
    if (m.results.size() < 2) throw ValidationError("compare needs at least two --result files");
    std::vector<metrics::ReportValues> values;
    for (const auto& path : m.results) values.push_back(metrics::load_report_values(path));
    const fs::path path = fs::path(m.out) / "compare.csv";
    write_file(path, metrics::compare_reports(values));
    out << "wrote " << path.string() << "\n";
    return kOk;
}

int cmd_export(const Manifest& m, std::ostream& out, std::ostream&)
{
    const auto ds = load_dataset(m);
    for (const auto& config : load_scenarios(m)) {
        const auto inputs = scenario::apply_scenario(config, ds);
        const auto assembly = model::build_model(inputs);
        const fs::path path = fs::path(m.out) / (config.name + ".mps");
        write_file(path, lp::export_mps(assembly.model, config.name));
        out << "wrote " << path.string() << " (" << assembly.model.num_vars() << " columns, "
            << assembly.model.num_constraints() << " rows)\n";
    }
    return kOk;
}

} // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    Manifest m;
    CLI::App app{"gridcap: sector-coupled capacity expansion planning"};
    app.require_subcommand(1);
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--out", m.out, "Output directory");
        sub->add_option("--solver", m.solver, "LP backend (highs, simplex)");
        sub->add_option("--tol", m.tolerance, "Feasibility tolerance");
    };
    auto* validate = app.add_subcommand("validate", "Check a dataset and optional scenarios");
    validate->add_option("--dataset", m.dataset)->required();
    validate->add_option("--scenario", m.scenarios);
    add_common(validate);

    auto* plan = app.add_subcommand("plan", "Solve capacity expansion for each scenario");
    plan->add_option("--dataset", m.dataset)->required();
    plan->add_option("--scenario", m.scenarios)->required();
    plan->add_option("--jobs", m.jobs, "Scenarios solved concurrently");
    plan->add_flag("--nonzero", m.nonzero_only, "Drop zero rows from the CSV reports");
    plan->add_flag("--system-lcoh", m.system_lcoh, "Also solve without hydrogen demand for the system-delta LCOH");
    add_common(plan);

    auto* dispatch = app.add_subcommand("dispatch", "Full-year dispatch with planned capacities fixed");
    dispatch->add_option("--dataset", m.dataset)->required();
    dispatch->add_option("--scenario", m.scenarios)->required();
    dispatch->add_option("--result", m.results, "result.json of the planning run")->required();
    dispatch->add_option("--scale", m.generation_scale, "Multiplier on generating capacity");
    add_common(dispatch);

    auto* report = app.add_subcommand("report", "Write CSV/JSON reports for saved results");
    report->add_option("--result", m.results)->required();
    report->add_option("--baseline", m.baseline, "Result without hydrogen demand");
    report->add_flag("--nonzero", m.nonzero_only);
    add_common(report);

    auto* compare = app.add_subcommand("compare", "Compare two or more reports or results");
    compare->add_option("--result", m.results)->required();
    add_common(compare);

    auto* mps = app.add_subcommand("export-mps", "Write the LP of each scenario in MPS format");
    mps->add_option("--dataset", m.dataset)->required();
    mps->add_option("--scenario", m.scenarios)->required();
    add_common(mps);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return kValidation;
    }

    try {
        if (*validate) return cmd_validate(m, out, err);
        if (*plan) return cmd_plan(m, out, err);
        if (*dispatch) return cmd_dispatch(m, out, err);
        if (*report) return cmd_report(m, out, err);
        if (*compare) return cmd_compare(m, out, err);
        if (*mps) return cmd_export(m, out, err);
    } catch (const ValidationError& e) {
        err << "validation error: " << e.what() << "\n";
        return kValidation;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kInternal;
    }
    return kInternal;
}

int run_command(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return run_command(args, std::cout, std::cerr);
}

} // namespace gridcap::cli
