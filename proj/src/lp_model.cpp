#include "gridcap/errors.hpp"
#include "gridcap/lp.hpp"

#include <algorithm>
#include <cmath>

namespace gridcap::lp {

namespace {

void check_name(const std::string& name, std::string_view what)
{
    if (name.empty()) {
        throw AssemblyError(std::string(what) + " name is empty");
    }
    if (std::any_of(name.begin(), name.end(), [](char c) { return c == ' ' || c == '\t' || c == '\n'; })) {
        throw AssemblyError(std::string(what) + " name contains whitespace: '" + name + "'");
    }
}

} // namespace

LinearExpr& LinearExpr::add(Var v, double coef)
{
    if (!v.valid()) {
        throw AssemblyError("expression references an unregistered variable");
    }
    terms_.push_back({v.index, coef});
    return *this;
}

LinearExpr& LinearExpr::add(const LinearExpr& other, double scale)
{
    for (const auto& t : other.terms_) terms_.push_back({t.var, t.coef * scale});
    constant_ += other.constant_ * scale;
    return *this;
}

double LinearExpr::evaluate(const std::vector<double>& x) const
{
    double sum = constant_;
    for (const auto& t : terms_) sum += t.coef * x.at(static_cast<std::size_t>(t.var));
    return sum;
}

// ---------------------------------------------------------------------------

Var Model::add_var(std::string name, double lower, double upper, double cost)
{
    check_name(name, "variable");
    if (std::isnan(lower) || std::isnan(upper) || lower > upper || lower == kInf || upper == -kInf) {
        throw AssemblyError("variable '" + name + "' has invalid bounds");
    }
    if (!std::isfinite(cost)) {
        throw AssemblyError("variable '" + name + "' has a non-finite cost");
    }
    const int index = static_cast<int>(vars_.size());
    auto [it, inserted] = var_index_.emplace(name, index);
    if (!inserted) {
        throw AssemblyError("duplicate variable name '" + name + "'");
    }
    vars_.push_back(Variable{std::move(name), lower, upper, cost});
    return Var{index};
}

int Model::add_constraint(std::string name, const LinearExpr& expr, Sense sense, double rhs, std::string source)
{
    check_name(name, "constraint");
    if (name == "obj") {
        throw AssemblyError("constraint name 'obj' is reserved for the objective row");
    }
    if (!std::isfinite(rhs) || !std::isfinite(expr.constant())) {
        throw AssemblyError("constraint '" + name + "' has a non-finite right-hand side");
    }
    // Merge repeated variables, keeping first-appearance order.
    std::vector<Term> merged;
    std::unordered_map<int, std::size_t> slot;
    for (const auto& t : expr.terms()) {
        check_var(t.var);
        if (!std::isfinite(t.coef)) {
            throw AssemblyError("constraint '" + name + "' has a non-finite coefficient on '" +
                                vars_[static_cast<std::size_t>(t.var)].name + "'");
        }
        auto [it, inserted] = slot.emplace(t.var, merged.size());
        if (inserted) {
            merged.push_back(t);
        } else {
            merged[it->second].coef += t.coef;
        }
    }
    merged.erase(std::remove_if(merged.begin(), merged.end(), [](const Term& t) { return t.coef == 0.0; }),
                 merged.end());

    const int index = static_cast<int>(rows_.size());
    auto [it, inserted] = row_index_.emplace(name, index);
    if (!inserted) {
        const auto& first = rows_[static_cast<std::size_t>(it->second)].source;
        throw AssemblyError("duplicate constraint name '" + name + "' (first added by " +
                            (first.empty() ? std::string("<unnamed>") : first) + ", again by " +
                            (source.empty() ? std::string("<unnamed>") : source) + ")");
    }
    rows_.push_back(Constraint{std::move(name), std::move(merged), sense, rhs - expr.constant(), std::move(source)});
    return index;
}

void Model::add_cost(Var v, double coef)
{
    check_var(v.index);
    if (!std::isfinite(coef)) {
        throw AssemblyError("non-finite cost on '" + vars_[static_cast<std::size_t>(v.index)].name + "'");
    }
    vars_[static_cast<std::size_t>(v.index)].cost += coef;
}

void Model::add_cost(const LinearExpr& expr, double scale)
{
    for (const auto& t : expr.terms()) add_cost(Var{t.var}, t.coef * scale);
    objective_constant_ += expr.constant() * scale;
}

void Model::set_bounds(Var v, double lower, double upper)
{
    check_var(v.index);
    auto& var = vars_[static_cast<std::size_t>(v.index)];
    if (std::isnan(lower) || std::isnan(upper) || lower > upper) {
        throw AssemblyError("variable '" + var.name + "' has invalid bounds");
    }
    var.lower = lower;
    var.upper = upper;
}

std::size_t Model::num_nonzeros() const
{
    std::size_t n = 0;
    for (const auto& r : rows_) n += r.terms.size();
    return n;
}

const Variable& Model::variable(Var v) const
{
    check_var(v.index);
    return vars_[static_cast<std::size_t>(v.index)];
}

std::optional<Var> Model::find_var(std::string_view name) const
{
    auto it = var_index_.find(std::string(name));
    if (it == var_index_.end()) return std::nullopt;
    return Var{it->second};
}

std::optional<int> Model::find_constraint(std::string_view name) const
{
    auto it = row_index_.find(std::string(name));
    if (it == row_index_.end()) return std::nullopt;
    return it->second;
}

double Model::objective_value(const std::vector<double>& x) const
{
    double sum = objective_constant_;
    for (std::size_t j = 0; j < vars_.size(); ++j) sum += vars_[j].cost * x.at(j);
    return sum;
}

double Model::row_activity(int row, const std::vector<double>& x) const
{
    double sum = 0.0;
    for (const auto& t : rows_.at(static_cast<std::size_t>(row)).terms) sum += t.coef * x.at(static_cast<std::size_t>(t.var));
    return sum;
}

double Model::scaled_violation(int row, const std::vector<double>& x) const
{
    const auto& r = rows_.at(static_cast<std::size_t>(row));
    const double activity = row_activity(row, x);
    double v = 0.0;
    switch (r.sense) {
    case Sense::le: v = std::max(0.0, activity - r.rhs); break;
    case Sense::ge: v = std::max(0.0, r.rhs - activity); break;
    case Sense::eq: v = std::abs(activity - r.rhs); break;
    }
    return v / std::max(1.0, std::abs(r.rhs));
}

void Model::check_var(int index) const
{
    if (index < 0 || index >= static_cast<int>(vars_.size())) {
        throw AssemblyError("unknown variable handle " + std::to_string(index));
    }
}

double max_violation(const Model& model, const std::vector<double>& x)
{
    if (x.size() != model.num_vars()) return kInf;
    double worst = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        const auto& v = model.variables()[j];
        if (!std::isfinite(x[j])) return kInf;
        if (x[j] < v.lower) worst = std::max(worst, (v.lower - x[j]) / std::max(1.0, std::abs(v.lower)));
        if (x[j] > v.upper) worst = std::max(worst, (x[j] - v.upper) / std::max(1.0, std::abs(v.upper)));
    }
    for (std::size_t i = 0; i < model.num_constraints(); ++i) {
        worst = std::max(worst, model.scaled_violation(static_cast<int>(i), x));
    }
    return worst;
}

std::string_view to_string(Status status)
{
    switch (status) {
    case Status::optimal: return "optimal";
    case Status::infeasible: return "infeasible";
    case Status::unbounded: return "unbounded";
    case Status::error: return "error";
    }
    return "error";
}

} // namespace gridcap::lp
