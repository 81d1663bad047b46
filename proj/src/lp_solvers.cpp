#include "gridcap/errors.hpp"
#include "gridcap/lp.hpp"

#pragma GCC diagnostic push
#pragma GCC diagnostic ignored "-Wunused-parameter"
#include "Highs.h"
#pragma GCC diagnostic pop

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <sstream>

namespace gridcap::lp {

namespace {

// The HiGHS task scheduler is process-global; concurrent scenario runs take
// turns inside the engine.
std::mutex& highs_mutex()
{
    static std::mutex m;
    return m;
}

HighsLp to_highs(const Model& model, bool zero_objective)
{
    HighsLp lp;
    const auto& vars = model.variables();
    const auto& rows = model.constraints();
    lp.num_col_ = static_cast<HighsInt>(vars.size());
    lp.num_row_ = static_cast<HighsInt>(rows.size());
    lp.sense_ = ObjSense::kMinimize;
    lp.offset_ = zero_objective ? 0.0 : model.objective_constant();
    for (const auto& v : vars) {
        lp.col_cost_.push_back(zero_objective ? 0.0 : v.cost);
        lp.col_lower_.push_back(v.lower);
        lp.col_upper_.push_back(v.upper);
    }
    for (const auto& r : rows) {
        lp.row_lower_.push_back(r.sense == Sense::le ? -kHighsInf : r.rhs);
        lp.row_upper_.push_back(r.sense == Sense::ge ? kHighsInf : r.rhs);
    }
    std::vector<std::vector<std::pair<HighsInt, double>>> cols(vars.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (const auto& t : rows[i].terms) {
            auto& col = cols[static_cast<std::size_t>(t.var)];
            if (!col.empty() && col.back().first == static_cast<HighsInt>(i)) {
                col.back().second += t.coef;
            } else {
                col.emplace_back(static_cast<HighsInt>(i), t.coef);
            }
        }
    }
    lp.a_matrix_.format_ = MatrixFormat::kColwise;
    lp.a_matrix_.num_col_ = lp.num_col_;
    lp.a_matrix_.num_row_ = lp.num_row_;
    lp.a_matrix_.start_.assign(1, 0);
    for (const auto& col : cols) {
        for (const auto& [row, value] : col) {
            lp.a_matrix_.index_.push_back(row);
            lp.a_matrix_.value_.push_back(value);
        }
        lp.a_matrix_.start_.push_back(static_cast<HighsInt>(lp.a_matrix_.index_.size()));
    }
    return lp;
}

class HighsSolver final : public Solver {
public:
    std::string name() const override { return "highs"; }

    Solution run(const Model& model, const SolveOptions& options) const override
    {
        std::lock_guard<std::mutex> lock(highs_mutex());
        Solution sol;
        sol.solver = name();
        if (model.num_vars() == 0) {
            sol.status = Status::optimal;
            sol.objective = model.objective_constant();
            return sol;
        }
        auto status = run_once(model, options, false, true, sol);
        if (status == HighsModelStatus::kUnboundedOrInfeasible) {
            status = run_once(model, options, false, false, sol);
        }
        if (status == HighsModelStatus::kUnboundedOrInfeasible) {
            Solution probe;
            const auto feas = run_once(model, options, true, false, probe);
            status = feas == HighsModelStatus::kOptimal ? HighsModelStatus::kUnbounded : HighsModelStatus::kInfeasible;
        }
        switch (status) {
        case HighsModelStatus::kOptimal: sol.status = Status::optimal; break;
        case HighsModelStatus::kInfeasible: sol.status = Status::infeasible; break;
        case HighsModelStatus::kUnbounded: sol.status = Status::unbounded; break;
        default:
            sol.status = Status::error;
            sol.message = "HiGHS returned model status '" + Highs().modelStatusToString(status) + "'";
        }
        return sol;
    }

private:
    static HighsModelStatus run_once(const Model& model, const SolveOptions& options, bool zero_objective,
                                     bool presolve, Solution& sol)
    {
        Highs highs;
        highs.setOptionValue("output_flag", false);
        highs.setOptionValue("threads", 1);
        highs.setOptionValue("presolve", presolve ? "choose" : "off");
        const double feas = std::min(1e-7, options.tolerance * 0.1);
        highs.setOptionValue("primal_feasibility_tolerance", feas);
        highs.setOptionValue("dual_feasibility_tolerance", feas);
        if (std::isfinite(options.time_limit)) highs.setOptionValue("time_limit", options.time_limit);
        if (highs.passModel(to_highs(model, zero_objective)) == HighsStatus::kError) {
            sol.message = "HiGHS rejected the model";
            return HighsModelStatus::kModelError;
        }
        if (highs.run() == HighsStatus::kError) {
            sol.message = "HiGHS run failed";
            return HighsModelStatus::kSolveError;
        }
        const auto status = highs.getModelStatus();
        if (status == HighsModelStatus::kOptimal) {
            const auto& s = highs.getSolution();
            sol.x = s.col_value;
            sol.duals = s.row_dual;
        }
        return status;
    }
};

// Dense two-phase primal simplex with Bland's rule. Meant for small models
// and as an independent check on the main engine.
class DenseSimplex final : public Solver {
public:
    std::string name() const override { return "simplex"; }

    Solution run(const Model& model, const SolveOptions& options) const override;

private:
    static constexpr double kPivotEps = 1e-9;
    static constexpr std::size_t kMaxEntries = 15'000'000;
};

Solution DenseSimplex::run(const Model& model, const SolveOptions& options) const
{
    Solution sol;
    sol.solver = name();
    const auto& vars = model.variables();
    const auto& rows = model.constraints();

    // x_j = offset_j + sum(sign * y_k), y >= 0.
    struct Map {
        double offset = 0.0;
        int pos = -1;
        int neg = -1;
    };
    std::vector<Map> map(vars.size());
    int ny = 0;
    std::vector<std::pair<int, double>> upper_rows; // y_k <= value
    for (std::size_t j = 0; j < vars.size(); ++j) {
        const auto& v = vars[j];
        if (v.lower != -kInf) {
            map[j].offset = v.lower;
            map[j].pos = ny++;
            if (v.upper != kInf) upper_rows.emplace_back(map[j].pos, v.upper - v.lower);
        } else if (v.upper != kInf) {
            map[j].offset = v.upper;
            map[j].neg = ny++;
        } else {
            map[j].pos = ny++;
            map[j].neg = ny++;
        }
    }

    const std::size_t m = rows.size() + upper_rows.size();
    std::size_t n_slack = upper_rows.size();
    for (const auto& r : rows) {
        if (r.sense != Sense::eq) ++n_slack;
    }
    const std::size_t n_struct = static_cast<std::size_t>(ny) + n_slack;
    const std::size_t n_cols = n_struct + m; // one artificial per row
    const std::size_t width = n_cols + 1;
    if (m * width > kMaxEntries) {
        sol.status = Status::error;
        sol.message = "model too large for the dense simplex backend (" + std::to_string(m) + " rows, " +
                      std::to_string(n_cols) + " columns)";
        return sol;
    }

    std::vector<double> tab(m * width, 0.0);
    auto at = [&](std::size_t i, std::size_t j) -> double& { return tab[i * width + j]; };
    std::vector<std::size_t> basis(m);

    std::size_t slack = static_cast<std::size_t>(ny);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        double rhs = r.rhs;
        for (const auto& t : r.terms) {
            const auto& mp = map[static_cast<std::size_t>(t.var)];
            rhs -= t.coef * mp.offset;
            if (mp.pos >= 0) at(i, static_cast<std::size_t>(mp.pos)) += t.coef;
            if (mp.neg >= 0) at(i, static_cast<std::size_t>(mp.neg)) -= t.coef;
        }
        if (r.sense == Sense::le) at(i, slack++) = 1.0;
        if (r.sense == Sense::ge) at(i, slack++) = -1.0;
        at(i, n_cols) = rhs;
    }
    for (std::size_t k = 0; k < upper_rows.size(); ++k) {
        const std::size_t i = rows.size() + k;
        at(i, static_cast<std::size_t>(upper_rows[k].first)) = 1.0;
        at(i, slack++) = 1.0;
        at(i, n_cols) = upper_rows[k].second;
    }
    double rhs_scale = 1.0;
    for (std::size_t i = 0; i < m; ++i) {
        if (at(i, n_cols) < 0.0) {
            for (std::size_t j = 0; j < width; ++j) at(i, j) = -at(i, j);
        }
        rhs_scale = std::max(rhs_scale, std::abs(at(i, n_cols)));
        at(i, n_struct + i) = 1.0;
        basis[i] = n_struct + i;
    }

    std::vector<double> cost(n_cols, 0.0);
    auto pivot = [&](std::size_t r, std::size_t c, std::vector<double>& red) {
        const double p = at(r, c);
        for (std::size_t j = 0; j < width; ++j) at(r, j) /= p;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == r) continue;
            const double f = at(i, c);
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < width; ++j) at(i, j) -= f * at(r, j);
            at(i, c) = 0.0;
        }
        const double f = red[c];
        if (f != 0.0) {
            for (std::size_t j = 0; j < width; ++j) red[j] -= f * at(r, j);
            red[c] = 0.0;
        }
        basis[r] = c;
    };
    auto reduced_costs = [&]() {
        std::vector<double> red(width, 0.0);
        for (std::size_t j = 0; j < n_cols; ++j) red[j] = cost[j];
        for (std::size_t i = 0; i < m; ++i) {
            const double cb = cost[basis[i]];
            if (cb == 0.0) continue;
            for (std::size_t j = 0; j < width; ++j) red[j] -= cb * at(i, j);
        }
        return red;
    };
    const std::size_t max_iter = 50 * (m + n_cols) + 1000;

    // 0 = optimal, 1 = unbounded, 2 = iteration limit
    auto iterate = [&](std::vector<double>& red, std::size_t allowed_cols) {
        for (std::size_t it = 0; it < max_iter; ++it) {
            std::size_t enter = allowed_cols;
            for (std::size_t j = 0; j < allowed_cols; ++j) {
                if (red[j] < -kPivotEps) {
                    enter = j;
                    break;
                }
            }
            if (enter == allowed_cols) return 0;
            double best = kInf;
            for (std::size_t i = 0; i < m; ++i) {
                const double a = at(i, enter);
                if (a > kPivotEps) best = std::min(best, at(i, n_cols) / a);
            }
            std::size_t leave = m;
            for (std::size_t i = 0; i < m && best < kInf; ++i) {
                const double a = at(i, enter);
                if (a <= kPivotEps || at(i, n_cols) / a > best + 1e-12 * (1.0 + std::abs(best))) continue;
                if (leave == m || basis[i] < basis[leave]) leave = i;
            }
            if (leave == m) return 1;
            pivot(leave, enter, red);
        }
        return 2;
    };

    // Phase 1
    for (std::size_t i = 0; i < m; ++i) cost[n_struct + i] = 1.0;
    auto red = reduced_costs();
    if (iterate(red, n_cols) == 2) {
        sol.status = Status::error;
        sol.message = "dense simplex hit its iteration limit in phase 1";
        return sol;
    }
    double infeas = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        if (basis[i] >= n_struct) infeas += at(i, n_cols);
    }
    if (infeas > options.tolerance * rhs_scale) {
        sol.status = Status::infeasible;
        return sol;
    }
    // Drive remaining artificials out of the basis where possible.
    for (std::size_t i = 0; i < m; ++i) {
        if (basis[i] < n_struct) continue;
        for (std::size_t j = 0; j < n_struct; ++j) {
            if (std::abs(at(i, j)) > kPivotEps) {
                pivot(i, j, red);
                break;
            }
        }
    }

    // Phase 2
    std::fill(cost.begin(), cost.end(), 0.0);
    for (std::size_t j = 0; j < vars.size(); ++j) {
        if (map[j].pos >= 0) cost[static_cast<std::size_t>(map[j].pos)] += vars[j].cost;
        if (map[j].neg >= 0) cost[static_cast<std::size_t>(map[j].neg)] -= vars[j].cost;
    }
    red = reduced_costs();
    const int outcome = iterate(red, n_struct);
    if (outcome == 1) {
        sol.status = Status::unbounded;
        return sol;
    }
    if (outcome == 2) {
        sol.status = Status::error;
        sol.message = "dense simplex hit its iteration limit in phase 2";
        return sol;
    }

    std::vector<double> y(static_cast<std::size_t>(ny), 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        if (basis[i] < static_cast<std::size_t>(ny)) y[basis[i]] = at(i, n_cols);
    }
    sol.x.resize(vars.size());
    for (std::size_t j = 0; j < vars.size(); ++j) {
        double v = map[j].offset;
        if (map[j].pos >= 0) v += y[static_cast<std::size_t>(map[j].pos)];
        if (map[j].neg >= 0) v -= y[static_cast<std::size_t>(map[j].neg)];
        sol.x[j] = v;
    }
    sol.status = Status::optimal;
    return sol;
}

} // namespace

std::unique_ptr<Solver> make_solver(std::string_view name)
{
    if (name == "highs") return std::make_unique<HighsSolver>();
    if (name == "simplex") return std::make_unique<DenseSimplex>();
    throw ValidationError("unknown solver '" + std::string(name) + "' (choose highs or simplex)");
}

std::vector<std::string> solver_names() { return {"highs", "simplex"}; }

std::string default_solver_name()
{
    const char* env = std::getenv("GRIDCAP_SOLVER");
    return (env && *env) ? std::string(env) : std::string("highs");
}

Solution solve(const Model& model, const SolveOptions& options, std::string_view solver)
{
    const std::string chosen = solver.empty() ? default_solver_name() : std::string(solver);
    auto engine = make_solver(chosen);
    Solution sol;
    try {
        sol = engine->run(model, options);
    } catch (const std::exception& e) {
        sol = Solution{};
        sol.solver = chosen;
        sol.status = Status::error;
        sol.message = std::string("solver threw: ") + e.what();
        return sol;
    }
    if (sol.status != Status::optimal) {
        if (sol.message.empty() && sol.status == Status::infeasible) sol.message = "no solution satisfies all constraints";
        if (sol.message.empty() && sol.status == Status::unbounded) sol.message = "objective is unbounded below";
        return sol;
    }

    if (sol.x.size() != model.num_vars()) {
        sol.status = Status::error;
        sol.message = "solver returned " + std::to_string(sol.x.size()) + " primal values for " +
                      std::to_string(model.num_vars()) + " variables";
        return sol;
    }
    // Snap values that sit within tolerance outside a bound back onto it.
    for (std::size_t j = 0; j < sol.x.size(); ++j) {
        const auto& v = model.variables()[j];
        const double slack_tol = options.tolerance * std::max(1.0, std::abs(sol.x[j]));
        if (sol.x[j] < v.lower && v.lower - sol.x[j] <= slack_tol) sol.x[j] = v.lower;
        if (sol.x[j] > v.upper && sol.x[j] - v.upper <= slack_tol) sol.x[j] = v.upper;
    }
    sol.max_violation = max_violation(model, sol.x);
    if (!(sol.max_violation <= options.tolerance)) {
        std::ostringstream msg;
        msg << "solution fails the residual check: max scaled violation " << sol.max_violation << " > tolerance "
            << options.tolerance;
        for (std::size_t i = 0; i < model.num_constraints(); ++i) {
            if (model.scaled_violation(static_cast<int>(i), sol.x) == sol.max_violation) {
                msg << " (row " << model.constraints()[i].name << ")";
                break;
            }
        }
        sol.status = Status::error;
        sol.message = msg.str();
        return sol;
    }
    sol.objective = model.objective_value(sol.x);
    return sol;
}

} // namespace gridcap::lp
