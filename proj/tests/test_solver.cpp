#include "aasrdl/eval.hpp"
#include "aasrdl/solver.hpp"
#include "oracles.hpp"
#include "support.hpp"

#include <cmath>
#include <filesystem>

using namespace aasrdl;
using namespace aasrdl::testing;

namespace {

Constraint constraint(const Model& m, std::string_view text) { return make_constraint(parse_e(text, m.datadict), m.datadict); }

void expect_verifies(const Constraint& c, const SolveResult& r)
{
    ASSERT_TRUE(r.sat());
    ASSERT_EQ(r.values.size(), c.vars.size());
    EXPECT_TRUE(eval_bool(*c.formula, r.values));
    for (std::size_t s = 0; s < c.vars.size(); ++s) {
        const auto& d = c.vars[s];
        EXPECT_EQ(r.values[s].type(), d.type);
        if (d.min) EXPECT_GE(r.values[s].to_double(), d.min->to_double()) << d.name;
        if (d.max) EXPECT_LE(r.values[s].to_double(), d.max->to_double()) << d.name;
    }
}

std::string z3_path()
{
    for (const char* p : {"/usr/local/bin/z3", "/usr/bin/z3"})
        if (std::filesystem::exists(p)) return std::string(p) + " -in";
    return {};
}

Model linear_model(const oracle::LinearProblem& p)
{
    std::string decls;
    for (std::size_t i = 0; i < p.names.size(); ++i)
        decls += "var " + p.names[i] + " : int32 init " + std::to_string(p.lo[i]) + " min " +
                 (p.lo[i] < 0 ? "-" : "") + std::to_string(std::abs(p.lo[i])) + " max " + (p.hi[i] < 0 ? "-" : "") +
                 std::to_string(std::abs(p.hi[i])) + ";";
    return dict_model(decls);
}

} // namespace

TEST(Solver, OpenIntervalWitness)
{
    Model m = dict_model("input N2 : int32 init 0 min 0 max 1000;");
    auto c = constraint(m, "N2 > 200 && N2 < 500");
    auto r = solve(c);
    expect_verifies(c, r);
    std::int32_t w = r.witness.at("N2").as_int32();
    EXPECT_GT(w, 200);
    EXPECT_LT(w, 500);
}

TEST(Solver, EmptyInterval)
{
    Model m = dict_model("var x : int32 init 0; var y : float64 init 0.0;");
    EXPECT_TRUE(solve(constraint(m, "x > 0 && x < 0")).unsat());
    EXPECT_TRUE(solve(constraint(m, "y > 0.0 && y < 0.0")).unsat());
    EXPECT_TRUE(solve(constraint(m, "x > 0 && x < 1")).unsat());
}

TEST(Solver, NonlinearSquareRootOfTwo)
{
    Model m = dict_model("var x : float64 init 0.0 min 0.0 max 10.0;");
    auto c = constraint(m, "x * x == 2.0");
    auto r = solve(c);
    if (r.sat()) {
        double w = r.witness.at("x").as_float64();
        EXPECT_LE(std::fabs(w * w - 2.0), 1e-9);
    } else {
        EXPECT_TRUE(r.unknown());
        EXPECT_EQ(r.reason, "nonlinear");
    }
}

TEST(Solver, BoundaryInclusiveOverlap)
{
    Model m = dict_model("var x : float64 init 0.0;");
    auto c = constraint(m, "x <= 0.0 && x >= 0.0");
    auto r = solve(c);
    expect_verifies(c, r);
    EXPECT_EQ(r.witness.at("x").as_float64(), 0.0);
}

TEST(Solver, StrictFloatBoundsUseInterior)
{
    Model m = dict_model("var x : float64 init 0.0; var f : float32 init 0.0;");
    auto c = constraint(m, "x > 0.1 && x < 0.2");
    auto r = solve(c);
    expect_verifies(c, r);
    double w = r.witness.at("x").as_float64();
    EXPECT_NEAR(w, 0.15, 1e-12);
    auto narrow = constraint(m, "f > 0.5 && f < 0.50001");
    expect_verifies(narrow, solve(narrow));
}

TEST(Solver, BooleansAndEqualities)
{
    Model m = dict_model("var p : bool init false; var q : bool init false; var n : int32 init 0;");
    EXPECT_TRUE(solve(constraint(m, "p && !p")).unsat());
    auto c = constraint(m, "(p == q) && p != !q || n == 3");
    expect_verifies(c, solve(c));
    EXPECT_TRUE(solve(constraint(m, "(p == q) && (p != q)")).unsat());
    EXPECT_TRUE(solve(constraint(m, "2 * n == 7")).unsat());
    auto eq = constraint(m, "3 * n + 1 == 10");
    auto r = solve(eq);
    expect_verifies(eq, r);
    EXPECT_EQ(r.witness.at("n").as_int32(), 3);
}

TEST(Solver, DomainBoundsMatter)
{
    Model m = dict_model("var x : int32 init 0 min 0 max 100;");
    EXPECT_TRUE(solve(constraint(m, "x > 200")).unsat());
    EXPECT_TRUE(solve(constraint(m, "x < 0 || x > 100")).unsat());
}

TEST(Solver, MixedIntFloat)
{
    Model m = dict_model("var i : int32 init 0 min -50 max 50; var d : float64 init 0.0 min -1.0 max 1.0;");
    auto c = constraint(m, "i + d > 10.5 && i < 11 && d < 0.75");
    auto r = solve(c);
    expect_verifies(c, r);
    EXPECT_TRUE(solve(constraint(m, "i + d > 51.5")).unsat());
}

TEST(Solver, NonlinearIntegerSampling)
{
    Model m = dict_model("var n : int32 init 0 min 0 max 1000;");
    auto c = constraint(m, "n % 7 == 3 && n > 100");
    auto r = solve(c);
    expect_verifies(c, r);
}

TEST(Solver, NeverUnsatWhenEnumerationFindsSolution)
{
    // nonlinear fragment on small domains: Unsat must be backed by enumeration
    Model m = dict_model("var a : int32 init 0 min -6 max 6; var b : int32 init 0 min -6 max 6;");
    const char* texts[] = {"a * b == 12",      "a % 4 == 3 && b > a", "abs(a - b) == 11", "a * a + b * b == 72",
                           "a * b == 13",      "a / 3 == 2 && b < 0", "a * b > 36",       "abs(a) + abs(b) < 1"};
    for (const char* t : texts) {
        auto c = constraint(m, t);
        auto r = solve(c);
        bool any = false;
        for (int a = -6; a <= 6 && !any; ++a)
            for (int b = -6; b <= 6 && !any; ++b)
                any = eval_bool(*c.formula, std::vector<Value>{Value::int32(a), Value::int32(b)});
        if (r.sat()) expect_verifies(c, r);
        if (r.unsat()) EXPECT_FALSE(any) << t;
        if (any) EXPECT_FALSE(r.unsat()) << t;
        if (!any) EXPECT_FALSE(r.sat()) << t;
    }
}

TEST(Solver, RandomLinearAgreesWithEnumeration)
{
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 250; ++trial) {
        auto p = oracle::random_linear(rng, 3, 40);
        Model m = linear_model(p);
        auto c = constraint(m, p.text);
        auto r = solve(c);
        auto truth = oracle::enumerate(p);
        ASSERT_FALSE(r.unknown()) << p.text << " reason " << r.reason;
        EXPECT_EQ(r.sat(), truth.has_value()) << p.text;
        if (r.sat()) {
            expect_verifies(c, r);
            std::vector<std::int64_t> x;
            for (const auto& v : r.values) x.push_back(v.as_int32());
            EXPECT_TRUE(oracle::eval_formula(*p.f, x)) << p.text;
        }
    }
}

TEST(Solver, Deterministic)
{
    Model m = dict_model("var x : float64 init 0.0 min 0.0 max 10.0; var n : int32 init 0 min 0 max 99;");
    auto c = constraint(m, "x * x > 3.0 && n % 5 == 4");
    auto a = solve(c), b = solve(c);
    ASSERT_EQ(a.kind, b.kind);
    if (a.sat()) EXPECT_EQ(a.values, b.values);
}

TEST(SmtLib, ScriptShape)
{
    Model m = dict_model("input N2 : int32 init 0 min 0 max 1000; var f : float32 init 0.0;");
    std::string s = emit_smtlib(constraint(m, "N2 > 200 && N2 < 500 && f < 1.5"));
    EXPECT_NE(s.find("(declare-fun N2 () Int)"), std::string::npos);
    EXPECT_NE(s.find("(declare-fun f () Real)"), std::string::npos);
    EXPECT_NE(s.find("(<= 0 N2)"), std::string::npos);
    EXPECT_NE(s.find("(<= N2 1000)"), std::string::npos);
    EXPECT_NE(s.find("(> N2 200)"), std::string::npos);
    EXPECT_EQ(s.find("(check-sat)"), s.rfind("(check-sat)"));
    EXPECT_NE(s.find("(get-model)"), std::string::npos);
}

TEST(SmtLib, ParseCannedOutput)
{
    Model m = dict_model("input N2 : int32 init 0 min 0 max 1000; var r : float64 init 0.0;");
    auto c = constraint(m, "N2 > 200 && N2 < 500 && r < -0.25");
    auto sat = parse_solver_output(c, "sat\n(\n  (define-fun N2 () Int\n    201)\n  (define-fun r () Real (- (/ 1.0 2.0)))\n)\n");
    expect_verifies(c, sat);
    EXPECT_EQ(sat.witness.at("N2").as_int32(), 201);
    EXPECT_EQ(sat.witness.at("r").as_float64(), -0.5);
    EXPECT_TRUE(parse_solver_output(c, "unsat\n(error \"model is not available\")\n").unsat());
    auto wrong = parse_solver_output(c, "sat\n((define-fun N2 () Int 7) (define-fun r () Real 0.0))\n");
    EXPECT_TRUE(wrong.unknown());
    EXPECT_TRUE(parse_solver_output(c, "").unknown());
    EXPECT_TRUE(parse_solver_output(c, "unknown\n").unknown());
}

TEST(SmtLib, ExternalSolverAgrees)
{
    std::string z3 = z3_path();
    if (z3.empty()) GTEST_SKIP() << "no external solver installed";
    Model m = dict_model("input N2 : int32 init 0 min 0 max 1000; var p : bool init false; "
                         "var Ax : float64 init 0.0; var Ay : float64 init 0.0; var Az : float64 init 0.0;");
    auto interval = constraint(m, "N2 > 200 && N2 < 500");
    auto r = solve_external(interval, z3);
    expect_verifies(interval, r);
    EXPECT_TRUE(solve_external(constraint(m, "p && !p"), z3).unsat());
    auto conjunction = constraint(m, "Ax > 0 && Ay > 0 && Az > 0");
    expect_verifies(conjunction, solve_external(conjunction, z3));
    auto divmod = constraint(m, "N2 % 7 == 3 && N2 / 7 == 20");
    auto dm = solve_external(divmod, z3);
    expect_verifies(divmod, dm);
    EXPECT_EQ(dm.witness.at("N2").as_int32(), 143);

    SolveOptions via;
    via.external_solver = z3;
    EXPECT_TRUE(solve(constraint(m, "N2 > 2000"), via).unsat());

    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 40; ++trial) {
        auto p = oracle::random_linear(rng, 3, 30);
        Model lm = linear_model(p);
        auto c = constraint(lm, p.text);
        auto ours = solve(c);
        auto theirs = solve_external(c, z3);
        ASSERT_FALSE(theirs.unknown()) << p.text << " " << theirs.reason;
        EXPECT_EQ(ours.kind, theirs.kind) << p.text;
    }
}
