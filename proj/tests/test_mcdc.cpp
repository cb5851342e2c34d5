#include "aasrdl/eval.hpp"
#include "aasrdl/mcdc.hpp"
#include "aasrdl/printer.hpp"
#include "oracles.hpp"
#include "support.hpp"

#include <bitset>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>

using namespace aasrdl;
using namespace aasrdl::testing;

namespace {

std::vector<Value> inputs_of(const Model& m, const TestSuite& s, const TestCase& t)
{
    std::vector<Value> v;
    for (const auto& d : m.datadict.vars) v.push_back(d.initial_value());
    for (std::size_t i = 0; i < s.input_slots.size(); ++i) v[s.input_slots[i]] = t.inputs[i];
    return v;
}

Model module_model(const std::string& decls, const std::string& task, const std::string& in = "")
{
    return parse_or_die("model m datadict { " + decls + " } module u { in { " + in + " } out { } task { " + task +
                        " } } mode M init { guard true; procedure period 1 { call u; } }");
}

void check_unique_cause(const TestSuite& s)
{
    for (const auto& o : s.obligations) {
        if (o.status != Obligation::Status::Solved) continue;
        const auto& d = s.decisions[o.decision];
        EXPECT_EQ(o.pair[0] ^ o.pair[1], 1u << o.condition);
        EXPECT_TRUE((o.pair[0] >> o.condition) & 1u);
        EXPECT_NE(decision_outcome(d.expr, o.pair[0]), decision_outcome(d.expr, o.pair[1]));
        EXPECT_EQ(s.tests[o.tests[0]].vector, o.pair[0]);
        EXPECT_EQ(s.tests[o.tests[1]].vector, o.pair[1]);
    }
}

void check_tests_verify(const Model& m, const TestSuite& s)
{
    for (const auto& t : s.tests) {
        auto values = inputs_of(m, s, t);
        EXPECT_TRUE(eval_bool(*t.path_constraint, values)) << to_string(*t.path_constraint);
        EXPECT_TRUE(replay(m, s, t)) << s.unit << " " << s.decisions[t.decision].location.to_string();
    }
}

// Golden-file comparison, refreshed with UPDATE_GOLDEN=1.
void expect_golden(const std::string& name, const std::string& actual)
{
    std::string path = source_path("tests/golden/" + name);
    if (std::getenv("UPDATE_GOLDEN")) {
        std::ofstream(path, std::ios::binary) << actual;
        return;
    }
    EXPECT_EQ(actual, slurp(path));
}

} // namespace

TEST(Conditions, Decomposition)
{
    Model m = dict_model("var a : int32 init 0; var p : bool init false; var q : bool init false;");
    auto d = parse_e("a > 0 && !(p || a == 3) || !q", m.datadict);
    auto cs = decompose_conditions(d);
    ASSERT_EQ(cs.size(), 4u);
    EXPECT_EQ(to_string(*cs[0]), "a > 0");
    EXPECT_EQ(to_string(*cs[1]), "p");
    EXPECT_EQ(to_string(*cs[2]), "a == 3");
    EXPECT_EQ(to_string(*cs[3]), "!q");
    // outcome against direct evaluation of the tree for every vector
    for (std::uint32_t v = 0; v < 16; ++v) {
        bool c0 = v & 1, c1 = v & 2, c2 = v & 4, c3 = v & 8;
        EXPECT_EQ(decision_outcome(d, v), (c0 && !(c1 || c2)) || c3);
    }
}

TEST(Conditions, ConjunctionPairs)
{
    Model m = dict_model("var Ax : float64 init 0.0; var Ay : float64 init 0.0; var Az : float64 init 0.0;");
    Decision d;
    d.expr = parse_e("Ax>0 && Ay>0 && Az>0", m.datadict);
    d.conditions = decompose_conditions(d.expr);
    auto obs = mcdc_obligations(d);
    ASSERT_EQ(obs.size(), 3u);
    std::set<std::uint32_t> vectors;
    for (const auto& o : obs) {
        EXPECT_EQ(o.pair[0], 7u);
        vectors.insert(o.pair[0]);
        vectors.insert(o.pair[1]);
    }
    EXPECT_EQ(vectors, (std::set<std::uint32_t>{7u, 6u, 5u, 3u}));
}

TEST(Conditions, DisjunctionPairs)
{
    Model m = dict_model("var p : bool init false; var q : bool init false;");
    auto e = parse_e("p || q", m.datadict);
    // truth-table oracle: pairs differ in bit i and flip the outcome
    for (std::size_t i = 0; i < 2; ++i) {
        auto pairs = mcdc_pairs(e, i);
        std::vector<std::pair<std::uint32_t, std::uint32_t>> expected;
        for (std::uint32_t v = 0; v < 4; ++v) {
            std::uint32_t w = v ^ (1u << i);
            bool ov = (v & 1) || (v & 2), ow = (w & 1) || (w & 2);
            if ((v >> i) & 1u && ov != ow) expected.emplace_back(v, w);
        }
        EXPECT_EQ(pairs, expected);
    }
    EXPECT_EQ(mcdc_pairs(e, 0), (std::vector<std::pair<std::uint32_t, std::uint32_t>>{{1u, 0u}}));
    EXPECT_EQ(mcdc_pairs(e, 1), (std::vector<std::pair<std::uint32_t, std::uint32_t>>{{2u, 0u}}));
}

TEST(Paths, Enumeration)
{
    Model one = module_model("var x : int32 init 0; var y : int32 init 0;", "if (x > 3) { y = 1; }");
    auto ps = enumerate_paths(one, one.modules[0].task);
    ASSERT_EQ(ps.size(), 2u);
    EXPECT_EQ(to_string(*ps[0].constraint), "x > 3");
    EXPECT_EQ(to_string(*ps[1].constraint), "!(x > 3)");

    Model sub = module_model("var x : int32 init 0; var y : int32 init 0;", "y = x + 1; if (y > 0) { y = 2; }");
    auto qs = enumerate_paths(sub, sub.modules[0].task);
    ASSERT_EQ(qs.size(), 2u);
    EXPECT_EQ(to_string(*qs[0].constraint), "x + 1 > 0");

    Model straight = module_model("var x : int32 init 0;", "x = 1; x = x * 2;");
    auto rs = enumerate_paths(straight, straight.modules[0].task);
    ASSERT_EQ(rs.size(), 1u);
    EXPECT_EQ(to_string(*rs[0].constraint), "true");
    EXPECT_TRUE(rs[0].branches.empty());
}

TEST(Paths, CountAndCalls)
{
    Model m = parse_or_die(R"(model m
datadict { var a : int32 init 0; var b : int32 init 0; var c : int32 init 0; }
module inner { in { a } out { b } task { if (a > 1) { b = 1; } else { b = 2; } } }
module u { in { a, b, c } out { b, c } task {
  if (c > 0) { c = 1; }
  call inner;
  if (b == 1) { c = 3; }
} }
mode M init { guard true; procedure period 1 { call u; } })");
    auto ps = enumerate_paths(m, m.find_module("u")->task);
    EXPECT_EQ(ps.size(), 8u);
    auto limited = enumerate_paths(m, m.find_module("u")->task, 3);
    EXPECT_EQ(limited.size(), 3u);
    // substitution through the inlined call makes b == 1 depend on a
    std::size_t sat = 0;
    for (const auto& p : ps) {
        for (int a = -3; a <= 3; ++a)
            for (int c = -1; c <= 1; ++c)
                sat += eval_bool(*p.constraint, std::vector<Value>{Value::int32(a), Value::int32(0), Value::int32(c)});
    }
    EXPECT_EQ(sat, 7u * 3u) << "paths must partition the input space";
}

TEST(Generate, ThreeWayConjunction)
{
    Model m = load_model("slow.arl");
    TestSuite s = generate_tests(m, "module_1_1");
    ASSERT_EQ(s.tests.size(), 4u);
    EXPECT_EQ(s.input_names, (std::vector<std::string>{"Ax", "Ay", "Az"}));
    // rows of the table as constraints over the witness
    const char* rows[] = {"Ax>0 && Ay>0 && Az>0", "!(Ax>0) && Ay>0 && Az>0", "Ax>0 && !(Ay>0) && Az>0",
                          "Ax>0 && Ay>0 && !(Az>0)"};
    const std::uint32_t vectors[] = {7, 6, 5, 3};
    const bool outcomes[] = {true, false, false, false};
    for (std::size_t r = 0; r < 4; ++r) {
        EXPECT_EQ(s.tests[r].vector, vectors[r]);
        EXPECT_EQ(s.tests[r].expected, outcomes[r]);
        EXPECT_TRUE(eval_bool(*parse_e(rows[r], m.datadict), inputs_of(m, s, s.tests[r]))) << rows[r];
    }
    check_unique_cause(s);
    check_tests_verify(m, s);
    EXPECT_EQ(coverage_percent(s), 100.0);
    std::string csv = export_tests(s);
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "Ax,Ay,Az,expected_decision,decision_location");
}

TEST(Generate, ContradictionIsInfeasible)
{
    Model m = module_model("input x : int32 init 0; var y : int32 init 0;", "if (x > 0 && x < 0) { y = 1; }", "x");
    TestSuite s = generate_tests(m, "u");
    ASSERT_EQ(s.obligations.size(), 2u);
    for (const auto& o : s.obligations) {
        EXPECT_EQ(o.status, Obligation::Status::Infeasible);
        EXPECT_TRUE(o.coupled);
    }
    EXPECT_TRUE(s.tests.empty());
    EXPECT_EQ(coverage_percent(s, false), 100.0);
    EXPECT_EQ(coverage_percent(s, true), 0.0);
    EXPECT_NE(coverage_report(s).find("coupled"), std::string::npos);
}

TEST(Generate, PathConflictIsInfeasible)
{
    Model m = module_model("input N2 : int32 init 0 min 0 max 1000; input f : bool init false; var y : int32 init 0;",
                           "if (N2 > 500) { if (N2 < 100 || f) { y = 1; } }", "N2, f");
    TestSuite s = generate_tests(m, "u");
    ASSERT_EQ(s.decisions.size(), 2u);
    const Decision& inner = s.decisions[1];
    EXPECT_EQ(to_string(*inner.expr), "N2 < 100 || f");
    for (const auto& o : s.obligations) {
        if (o.decision != inner.id) continue;
        if (o.condition == 0)
            EXPECT_EQ(o.status, Obligation::Status::Infeasible);
        else
            EXPECT_EQ(o.status, Obligation::Status::Solved);
    }
    check_tests_verify(m, s);
}

TEST(Generate, KPlusOneForIndependentConjunctions)
{
    for (int k = 1; k <= 6; ++k) {
        std::string decls, cond, in;
        for (int i = 0; i < k; ++i) {
            std::string v = "v" + std::to_string(i);
            decls += "input " + v + " : int32 init 0 min -5 max 5; ";
            cond += (i ? " && " : "") + v + " > " + std::to_string(i - 2);
            in += (i ? ", " : "") + v;
        }
        decls += "var y : int32 init 0;";
        Model m = module_model(decls, "if (" + cond + ") { y = 1; }", in);
        TestSuite s = generate_tests(m, "u");
        EXPECT_EQ(s.tests.size(), static_cast<std::size_t>(k + 1)) << cond;
        check_unique_cause(s);
        check_tests_verify(m, s);
    }
}

TEST(Generate, SingleCondition)
{
    Model m = module_model("input a : int32 init 0; var y : int32 init 0;", "if (a > 0) { y = 1; }", "a");
    TestSuite s = generate_tests(m, "u");
    EXPECT_EQ(s.obligations.size(), 1u);
    EXPECT_EQ(s.tests.size(), 2u);
}

TEST(Generate, UnknownModule)
{
    Model m = load_model("slow.arl");
    EXPECT_THROW((void)generate_tests(m, "module_9"), std::invalid_argument);
}

TEST(Generate, SubstitutionThroughAssignments)
{
    Model m = module_model("input x : int32 init 0 min -100 max 100; var y : int32 init 0; var z : int32 init 0;",
                           "y = x * 2 + 1; if (y > 7 && x < 10) { z = 1; }", "x");
    TestSuite s = generate_tests(m, "u");
    EXPECT_EQ(s.tests.size(), 3u);
    EXPECT_EQ(s.input_names, (std::vector<std::string>{"x"}));
    check_tests_verify(m, s);
}

TEST(Generate, PaddingWithInitialValues)
{
    Model m = module_model("input a : int32 init 4; input b : int32 init 9; var y : int32 init 0;",
                           "if (a > 0) { y = 1; }", "a, b");
    TestSuite s = generate_tests(m, "u");
    ASSERT_EQ(s.input_names, (std::vector<std::string>{"a", "b"}));
    for (const auto& t : s.tests) EXPECT_EQ(t.inputs[1].as_int32(), 9);
}

TEST(Generate, InfeasibleAgreesWithEnumeration)
{
    // random decisions over three int inputs with 20-value domains, behind a
    // random guard that also perturbs one input
    std::mt19937_64 rng(77);
    std::size_t checked = 0, infeasible = 0;
    for (int trial = 0; trial < 60; ++trial) {
        oracle::LinearProblem p;
        do {
            p = oracle::random_linear(rng, 3, 20);
        } while (p.names.size() < 2);
        // count leaves; skip trees with more than four conditions
        std::function<bool(const oracle::Formula&)> has_conn = [&](const oracle::Formula& f) {
            if (f.kind == oracle::Formula::And || f.kind == oracle::Formula::Or) return true;
            return f.kind == oracle::Formula::Not && has_conn(*f.a);
        };
        std::vector<const oracle::Formula*> leaves;
        std::function<void(const oracle::Formula&)> collect = [&](const oracle::Formula& f) {
            if (!has_conn(f)) {
                leaves.push_back(&f);
                return;
            }
            if (f.a) collect(*f.a);
            if (f.b) collect(*f.b);
        };
        collect(*p.f);
        if (leaves.size() > 4) continue;

        std::int64_t gate = p.lo[0] + static_cast<std::int64_t>(rng() % 20);
        std::string decls, in;
        for (std::size_t i = 0; i < p.names.size(); ++i) {
            decls += "input " + p.names[i] + " : int32 init " + std::to_string(p.lo[i]) + " min " +
                     std::to_string(p.lo[i]) + " max " + std::to_string(p.hi[i]) + "; ";
            in += (i ? ", " : "") + p.names[i];
        }
        decls += "var y : int32 init 0;";
        std::string task = "if (" + p.names[0] + " >= " + (gate < 0 ? "0 - " + std::to_string(-gate) : std::to_string(gate)) +
                           ") { " + p.names[1] + " = " + p.names[1] + " + 3; } if (" + p.text + ") { y = 1; }";
        auto parsed = parse_model("model m datadict { " + decls + " } module u { in { " + in + " } out { " + in +
                                      ", y } task { " + task + " } } mode M init { guard true; procedure period 1 { call u; } }",
                                  "t.arl");
        ASSERT_TRUE(parsed.ok()) << (parsed.diagnostics.empty() ? "" : parsed.diagnostics[0].to_string());
        Model m = std::move(*parsed.value);
        TestSuite s = generate_tests(m, "u");
        const Decision* dec = nullptr;
        for (const auto& d : s.decisions)
            if (d.conditions.size() == leaves.size() && to_string(*d.expr) != to_string(*s.decisions[0].expr)) dec = &d;
        if (!dec) dec = &s.decisions.back();
        ASSERT_EQ(dec->conditions.size(), leaves.size());

        // every reachable condition vector by running the inputs natively
        std::set<std::uint32_t> seen;
        std::vector<std::int64_t> x = p.lo;
        while (true) {
            std::vector<std::int64_t> post = x;
            if (post[0] >= gate) post[1] += 3;
            std::uint32_t v = 0;
            for (std::size_t i = 0; i < leaves.size(); ++i)
                if (oracle::eval_formula(*leaves[i], post)) v |= 1u << i;
            seen.insert(v);
            std::size_t i = 0;
            while (i < x.size() && x[i] == p.hi[i]) x[i] = p.lo[i], ++i;
            if (i == x.size()) break;
            ++x[i];
        }
        for (const auto& o : s.obligations) {
            if (o.decision != dec->id) continue;
            bool feasible = false;
            for (const auto& [a, b] : mcdc_pairs(dec->expr, o.condition)) feasible = feasible || (seen.count(a) && seen.count(b));
            ASSERT_NE(o.status, Obligation::Status::Unknown) << p.text;
            EXPECT_EQ(o.status == Obligation::Status::Solved, feasible) << p.text << " condition " << o.condition;
            ++checked;
            infeasible += !feasible;
        }
        check_unique_cause(s);
        check_tests_verify(m, s);
    }
    EXPECT_GT(checked, 50u);
    EXPECT_GT(infeasible, 0u);
}

TEST(Generate, ReplayEveryModelSuite)
{
    for (const char* name : {"slow.arl", "engine_start.arl", "lowoil.arl", "spacecraft.arl", "exclusive.arl"}) {
        Model m = load_model(name);
        McdcOptions o;
        o.scope = McdcScope::Modes;
        for (const auto& s : generate_all(m, o)) {
            check_unique_cause(s);
            check_tests_verify(m, s);
            EXPECT_TRUE(s.notes.empty()) << name << " " << s.unit;
        }
    }
}

TEST(Generate, ModeScopeHarvestsGuardsAndTransitions)
{
    Model m = load_model("slow.arl");
    McdcOptions o;
    o.scope = McdcScope::Modes;
    auto suites = generate_all(m, o);
    ASSERT_EQ(suites.size(), m.modules.size() + m.modes.size());
    const TestSuite& slow = suites[m.modules.size()];
    EXPECT_EQ(slow.unit, "mode_SLOW");
    ASSERT_EQ(slow.decisions.size(), 3u);
    EXPECT_EQ(to_string(*slow.decisions[0].expr), "ES == ES_SLOW");
    EXPECT_EQ(to_string(*slow.decisions[1].expr), "N2 < 500");
    EXPECT_EQ(to_string(*slow.decisions[2].expr), "N2 > 200");
    // N2 > 200 is only tried once N2 < 500 failed, so it cannot be false there
    EXPECT_EQ(slow.obligations[2].status, Obligation::Status::Infeasible);
    EXPECT_EQ(generate_all(m, {}).size(), m.modules.size());
}

TEST(Export, EmptySuiteIsHeaderOnly)
{
    Model m = load_model("slow.arl");
    TestSuite s = generate_tests(m, "module_1_2");
    EXPECT_EQ(export_tests(s), "N2,expected_decision,decision_location\n");
}

TEST(Export, TwoDecisionsGolden)
{
    Model m = parse_or_die(R"(model m
datadict { input a : int32 init 0 min -10 max 10; input b : int32 init 0 min -10 max 10; var y : int32 init 0; }
module u { in { a, b } out { y } task {
  if (a > 2 || b < 0) { y = 1; }
  if (a + b == 4) { y = 2; }
} }
mode M init { guard true; procedure period 1 { call u; } })",
                           "two.arl");
    TestSuite s = generate_tests(m, "u");
    std::string csv = export_tests(s);
    expect_golden("two_decisions.tests.csv", csv);
    EXPECT_EQ(csv, export_tests(generate_tests(m, "u")));
    // rows grouped by decision location
    std::size_t first_b = csv.find("two.arl:5:");
    EXPECT_GT(first_b, csv.rfind("two.arl:4:"));
}

TEST(Export, DedupFoldsIdenticalValuations)
{
    Model m = parse_or_die(R"(model m
datadict { input a : int32 init 0 min -10 max 10; var y : int32 init 0; }
module u { in { a } out { y } task {
  if (a > 2) { y = 1; }
  if (a > 2) { y = 2; }
} }
mode M init { guard true; procedure period 1 { call u; } })");
    TestSuite plain = generate_tests(m, "u");
    McdcOptions o;
    o.dedup = true;
    TestSuite folded = generate_tests(m, "u", o);
    EXPECT_EQ(plain.tests.size(), 4u);
    EXPECT_LT(folded.tests.size(), plain.tests.size());
    for (const auto& ob : folded.obligations) {
        ASSERT_EQ(ob.status, Obligation::Status::Solved);
        EXPECT_LT(ob.tests[0], folded.tests.size());
        EXPECT_LT(ob.tests[1], folded.tests.size());
    }
    std::string csv = export_tests(folded);
    EXPECT_NE(csv.find(';'), std::string::npos);
}
