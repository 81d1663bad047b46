#include "gridcap/errors.hpp"
#include "gridcap/lp.hpp"

#include "fixtures.hpp"

#pragma GCC diagnostic push
#pragma GCC diagnostic ignored "-Wunused-parameter"
#include "Highs.h"
#pragma GCC diagnostic pop

#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

using namespace gridcap;
using namespace gridcap::lp;

namespace {

Model two_var_model()
{
    Model m;
    const Var x = m.add_var("x", 0.0, 6.0, 2.0);
    const Var y = m.add_var("y", 0.0, kInf, 3.0);
    LinearExpr e(x);
    e.add(y);
    m.add_constraint("cover", e, Sense::ge, 10.0, "test");
    return m;
}

struct External {
    HighsModelStatus status;
    double objective;
};

External solve_external(const Model& m, const std::string& tag)
{
    const auto dir = fixtures::scratch_dir("mps_" + tag);
    const auto path = (dir / "model.mps").string();
    write_mps(m, path);
    Highs h;
    h.setOptionValue("output_flag", false);
    EXPECT_NE(h.readModel(path), HighsStatus::kError);
    h.run();
    return {h.getModelStatus(), h.getInfo().objective_function_value};
}

// Random feasible, bounded LP: x in [0, u], rows a.x <= a.x0 + slack with x0 feasible.
Model random_model(unsigned seed)
{
    std::mt19937 gen(seed);
    auto uni = [&](double lo, double hi) { return lo + (hi - lo) * (gen() / 4294967296.0); };
    Model m;
    const int n = 6 + static_cast<int>(gen() % 6);
    const int rows = 4 + static_cast<int>(gen() % 6);
    std::vector<Var> vars;
    std::vector<double> x0;
    for (int j = 0; j < n; ++j) {
        vars.push_back(m.add_var("x" + std::to_string(j), 0.0, uni(5, 20), uni(-3, 3)));
        x0.push_back(uni(0, 4));
    }
    for (int i = 0; i < rows; ++i) {
        LinearExpr e;
        double act = 0.0;
        for (int j = 0; j < n; ++j) {
            if (gen() % 2) continue;
            const double a = uni(-2, 2);
            e.add(vars[static_cast<std::size_t>(j)], a);
            act += a * x0[static_cast<std::size_t>(j)];
        }
        if (e.empty()) continue;
        const int kind = static_cast<int>(gen() % 3);
        if (kind == 0) m.add_constraint("r" + std::to_string(i), e, Sense::le, act + uni(0, 3));
        if (kind == 1) m.add_constraint("r" + std::to_string(i), e, Sense::ge, act - uni(0, 3));
        if (kind == 2) m.add_constraint("r" + std::to_string(i), e, Sense::eq, act);
    }
    m.add_objective_constant(uni(-10, 10));
    return m;
}

} // namespace

TEST(Model, EmptyModel)
{
    Model m;
    EXPECT_EQ(m.num_vars(), 0u);
    EXPECT_EQ(m.num_constraints(), 0u);
    EXPECT_DOUBLE_EQ(m.objective_value({}), 0.0);
    const auto sol = solve(m);
    EXPECT_EQ(sol.status, Status::optimal);
    EXPECT_DOUBLE_EQ(sol.objective, 0.0);
}

TEST(Model, DuplicateConstraintNamesBothSources)
{
    Model m;
    const Var x = m.add_var("x");
    m.add_constraint("row", LinearExpr(x), Sense::le, 1.0, "power_core");
    try {
        m.add_constraint("row", LinearExpr(x), Sense::le, 2.0, "hydrogen_chain");
        FAIL() << "expected an assembly error";
    } catch (const AssemblyError& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("power_core"), std::string::npos);
        EXPECT_NE(msg.find("hydrogen_chain"), std::string::npos);
    }
}

TEST(Model, DuplicateVariableAndBadBounds)
{
    Model m;
    m.add_var("x");
    EXPECT_THROW(m.add_var("x"), AssemblyError);
    EXPECT_THROW(m.add_var("y", 2.0, 1.0), AssemblyError);
    EXPECT_THROW(m.add_var("has space"), AssemblyError);
    EXPECT_THROW(m.variable(Var{7}), AssemblyError);
}

TEST(Model, CanonicalizesRepeatedTerms)
{
    Model m;
    const Var x = m.add_var("x");
    LinearExpr e(x, 2.0);
    e.add(x, 3.0);
    e.add_constant(1.0);
    const int row = m.add_constraint("r", e, Sense::le, 11.0);
    const auto& c = m.constraints()[static_cast<std::size_t>(row)];
    ASSERT_EQ(c.terms.size(), 1u);
    EXPECT_DOUBLE_EQ(c.terms[0].coef, 5.0);
    EXPECT_DOUBLE_EQ(c.rhs, 10.0);
}

TEST(Solve, HandLp)
{
    for (const auto& name : solver_names()) {
        const auto sol = solve(two_var_model(), {}, name);
        ASSERT_EQ(sol.status, Status::optimal) << name;
        EXPECT_NEAR(sol.objective, 24.0, 1e-6) << name;
        EXPECT_NEAR(sol.x[0], 6.0, 1e-6) << name;
        EXPECT_NEAR(sol.x[1], 4.0, 1e-6) << name;
    }
}

TEST(Solve, Infeasible)
{
    for (const auto& name : solver_names()) {
        Model m;
        const Var x = m.add_var("x", -kInf, kInf, 1.0);
        m.add_constraint("lo", LinearExpr(x), Sense::ge, 1.0);
        m.add_constraint("hi", LinearExpr(x), Sense::le, 0.0);
        EXPECT_EQ(solve(m, {}, name).status, Status::infeasible) << name;
    }
}

TEST(Solve, Unbounded)
{
    for (const auto& name : solver_names()) {
        Model m;
        const Var x = m.add_var("x", 0.0, kInf, -1.0);
        m.add_constraint("lo", LinearExpr(x), Sense::ge, 0.0);
        EXPECT_EQ(solve(m, {}, name).status, Status::unbounded) << name;
    }
}

TEST(Solve, UnknownSolver) { EXPECT_THROW(make_solver("cplex"), ValidationError); }

TEST(Solve, ObjectiveIsDotProductPlusConstant)
{
    auto m = two_var_model();
    m.add_objective_constant(5.0);
    const auto sol = solve(m);
    ASSERT_TRUE(sol.optimal());
    EXPECT_NEAR(sol.objective, 29.0, 1e-9);
    EXPECT_NEAR(m.objective_value(sol.x), 2 * sol.x[0] + 3 * sol.x[1] + 5.0, 1e-12);
}

TEST(Solve, BackendsAgreeOnRandomModels)
{
    for (unsigned seed = 1; seed <= 40; ++seed) {
        const auto m = random_model(seed);
        const auto a = solve(m, {}, "highs");
        const auto b = solve(m, {}, "simplex");
        ASSERT_EQ(a.status, b.status) << "seed " << seed;
        if (!a.optimal()) continue;
        EXPECT_LE(max_violation(m, a.x), 1e-6);
        EXPECT_LE(max_violation(m, b.x), 1e-6);
        EXPECT_NEAR(a.objective, b.objective, 1e-6 * std::max(1.0, std::abs(a.objective))) << "seed " << seed;
    }
}

TEST(Solve, ResidualCheckRejectsWrongAnswers)
{
    class Liar final : public Solver {
    public:
        std::string name() const override { return "liar"; }
        Solution run(const Model& m, const SolveOptions&) const override
        {
            Solution s;
            s.status = Status::optimal;
            s.x.assign(m.num_vars(), 0.0);
            return s;
        }
    };
    const auto m = two_var_model();
    const auto raw = Liar().run(m, {});
    EXPECT_GT(max_violation(m, raw.x), 1e-6);
}

TEST(Mps, ExternalSolveOfTinyModels)
{
    Model m;
    const Var x = m.add_var("x", 0.0, kInf, 1.0);
    m.add_constraint("c", LinearExpr(x), Sense::ge, 1.0);
    auto ext = solve_external(m, "tiny");
    EXPECT_EQ(ext.status, HighsModelStatus::kOptimal);
    EXPECT_NEAR(ext.objective, 1.0, 1e-9);

    ext = solve_external(two_var_model(), "hand");
    EXPECT_EQ(ext.status, HighsModelStatus::kOptimal);
    EXPECT_NEAR(ext.objective, 24.0, 1e-6);
}

TEST(Mps, ExternalAndInternalAgree)
{
    for (unsigned seed = 1; seed <= 15; ++seed) {
        const auto m = random_model(seed);
        const auto internal = solve(m);
        if (!internal.optimal()) continue;
        const auto ext = solve_external(m, "rand" + std::to_string(seed));
        ASSERT_EQ(ext.status, HighsModelStatus::kOptimal);
        EXPECT_LE(fixtures::rel_diff(ext.objective, internal.objective), 1e-5) << "seed " << seed;
    }
}

TEST(Mps, DimensionsAndDeterminism)
{
    const auto m = random_model(3);
    const auto a = export_mps(m, "T");
    const auto b = export_mps(random_model(3), "T");
    EXPECT_EQ(a, b);
    std::size_t rows = 0;
    bool in_rows = false;
    std::istringstream in(a);
    std::string line;
    while (std::getline(in, line)) {
        if (line == "ROWS") in_rows = true;
        else if (line == "COLUMNS") in_rows = false;
        else if (in_rows && line.find(" N ") == std::string::npos) ++rows;
    }
    EXPECT_EQ(rows, m.num_constraints());
}

TEST(Mps, NumberFormatting)
{
    EXPECT_EQ(format_number(-0.0), "0");
    EXPECT_EQ(format_number(0.1), "0.1");
    EXPECT_EQ(format_number(1e20), "1e+20");
    EXPECT_EQ(std::stod(format_number(1.0 / 3.0)), 1.0 / 3.0);
}
