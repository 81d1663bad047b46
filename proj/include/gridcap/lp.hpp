#pragma once

#include <cstddef>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace gridcap::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Sense { le, eq, ge };

struct Var {
    int index = -1;
    bool valid() const { return index >= 0; }
    friend bool operator==(Var a, Var b) { return a.index == b.index; }
};

struct Term {
    int var = -1;
    double coef = 0.0;
};

/// Linear expression with an optional constant; the constant moves to the
/// right-hand side when the expression becomes a constraint.
class LinearExpr {
public:
    LinearExpr() = default;
    LinearExpr(Var v, double coef = 1.0) { add(v, coef); }

    LinearExpr& add(Var v, double coef = 1.0);
    LinearExpr& add(const LinearExpr& other, double scale = 1.0);
    LinearExpr& add_constant(double c)
    {
        constant_ += c;
        return *this;
    }

    const std::vector<Term>& terms() const { return terms_; }
    double constant() const { return constant_; }
    bool empty() const { return terms_.empty(); }

    double evaluate(const std::vector<double>& x) const;

private:
    std::vector<Term> terms_;
    double constant_ = 0.0;
};

struct Variable {
    std::string name;
    double lower = 0.0;
    double upper = kInf;
    double cost = 0.0;
};

struct Constraint {
    std::string name;
    std::vector<Term> terms;
    Sense sense = Sense::le;
    double rhs = 0.0;
    std::string source;
};

/// Variable/constraint registry plus linear objective (minimization).
class Model {
public:
    Var add_var(std::string name, double lower = 0.0, double upper = kInf, double cost = 0.0);
    int add_constraint(std::string name, const LinearExpr& expr, Sense sense, double rhs, std::string source = {});

    void add_cost(Var v, double coef);
    void add_cost(const LinearExpr& expr, double scale = 1.0);
    void add_objective_constant(double c) { objective_constant_ += c; }
    void set_bounds(Var v, double lower, double upper);

    std::size_t num_vars() const { return vars_.size(); }
    std::size_t num_constraints() const { return rows_.size(); }
    std::size_t num_nonzeros() const;

    const std::vector<Variable>& variables() const { return vars_; }
    const std::vector<Constraint>& constraints() const { return rows_; }
    const Variable& variable(Var v) const;
    double objective_constant() const { return objective_constant_; }

    std::optional<Var> find_var(std::string_view name) const;
    std::optional<int> find_constraint(std::string_view name) const;

    double objective_value(const std::vector<double>& x) const;
    double row_activity(int row, const std::vector<double>& x) const;
    /// Violation of the row scaled by max(1, |rhs|); 0 when satisfied.
    double scaled_violation(int row, const std::vector<double>& x) const;

private:
    void check_var(int index) const;

    std::vector<Variable> vars_;
    std::vector<Constraint> rows_;
    std::unordered_map<std::string, int> var_index_;
    std::unordered_map<std::string, int> row_index_;
    double objective_constant_ = 0.0;
};

// ---------------------------------------------------------------------------

enum class Status { optimal, infeasible, unbounded, error };

std::string_view to_string(Status status);

struct Solution {
    Status status = Status::error;
    double objective = 0.0;
    std::vector<double> x;
    std::vector<double> duals;
    std::string message;
    std::string solver;
    double max_violation = 0.0;

    bool optimal() const { return status == Status::optimal; }
    double value(Var v) const { return x.at(static_cast<std::size_t>(v.index)); }
};

struct SolveOptions {
    double tolerance = 1e-6;
    double time_limit = kInf;
};

class Solver {
public:
    virtual ~Solver() = default;
    virtual std::string name() const = 0;
    /// Raw engine call; solve() below adds the residual check.
    virtual Solution run(const Model& model, const SolveOptions& options) const = 0;
};

std::unique_ptr<Solver> make_solver(std::string_view name);
std::vector<std::string> solver_names();
/// GRIDCAP_SOLVER when set, otherwise "highs".
std::string default_solver_name();

/// Solves and checks the answer against the model: when the engine claims
/// optimality, bounds and rows must hold within tolerance x max(1, |rhs|) or
/// the status becomes error. The objective is recomputed from the primals.
Solution solve(const Model& model, const SolveOptions& options = {}, std::string_view solver = {});

/// Largest scaled row or bound violation of x.
double max_violation(const Model& model, const std::vector<double>& x);

// ---------------------------------------------------------------------------

/// Fixed-format MPS text. Identical models give identical bytes.
std::string export_mps(const Model& model, std::string_view name = "GRIDCAP");
void write_mps(const Model& model, const std::string& path, std::string_view name = "GRIDCAP");

/// Formats a double in its shortest round-trip form; -0 becomes 0.
std::string format_number(double value);

} // namespace gridcap::lp
