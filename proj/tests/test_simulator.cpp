#include "aasrdl/simulator.hpp"
#include "support.hpp"

#include <bit>
#include <cmath>

using namespace aasrdl;
using namespace aasrdl::testing;

namespace {

EnvProfile profile_of(const Model& m, const std::string& json)
{
    EnvProfile p;
    auto errs = load_profile(json, m.datadict, p);
    if (!errs.empty()) throw std::runtime_error(errs.front());
    return p;
}

int slot(const Model& m, const std::string& name) { return *m.datadict.find_var(name); }

} // namespace

TEST(BaseTick, Gcd)
{
    auto with_periods = [](const std::string& procs) {
        return base_tick(parse_or_die("model m datadict { } mode A init { guard true; " + procs + " }"));
    };
    EXPECT_EQ(with_periods("procedure period 5 { }"), 5);
    EXPECT_EQ(with_periods("procedure period 4 { } procedure period 6 { }"), 2);
    EXPECT_EQ(with_periods("procedure period 7 { } procedure period 13 { }"), 1);
    EXPECT_EQ(with_periods(""), 1);
}

TEST(Run, CounterHorizon)
{
    Model m = load_model("counter.arl");
    Trace t = run(m, default_profile(m.datadict), {false, false, 10});
    ASSERT_EQ(t.size(), 11u);
    EXPECT_EQ(t.status.kind, TraceStatus::Kind::Completed);
    for (std::size_t i = 0; i < t.size(); ++i) {
        EXPECT_EQ(t.snapshots[i].cycle, static_cast<std::int64_t>(i));
        EXPECT_EQ(t.snapshots[i].time_ms, static_cast<std::int64_t>(i));
        EXPECT_EQ(t.value(i, 0).as_int32(), static_cast<std::int32_t>(i + 1));
    }
    // after cycles 0..9 have run, x holds 10
    EXPECT_EQ(t.value(9, 0).as_int32(), 10);
}

TEST(Run, ModeSwitchAtCycleEnd)
{
    Model m = load_model("slow.arl");
    EnvProfile p = profile_of(m, R"({"horizon": 3, "inputs": {"N2": {"kind": "constant", "value": 600},
        "Ax": {"kind": "constant", "value": 0.0}, "Ay": {"kind": "constant", "value": 0.0},
        "Az": {"kind": "constant", "value": 0.0}}})");
    Trace t = run(m, p);
    ASSERT_EQ(t.size(), 4u);
    EXPECT_EQ(t.mode_at(0), "SLOW");
    EXPECT_EQ(t.mode_at(1), "NORMAL");
    EXPECT_EQ(t.mode_at(2), "NORMAL");
    // the action that switched also ran in cycle 0
    EXPECT_EQ(t.value(0, slot(m, "ES")).as_int32(), 2);
    EXPECT_EQ(t.snapshots[1].time_ms, 5);
    // module_1_2 ran in SLOW during cycle 0
    EXPECT_EQ(t.value(0, slot(m, "Thrust")).as_float64(), 300.0);
}

TEST(Run, PriorityOrder)
{
    Model m = load_model("slow.arl");
    EnvProfile p = profile_of(m, R"({"horizon": 1, "inputs": {"N2": {"kind": "constant", "value": 300},
        "Ax": {"kind": "constant", "value": 0.0}, "Ay": {"kind": "constant", "value": 0.0},
        "Az": {"kind": "constant", "value": 0.0}}})");
    Trace t = run(m, p);
    EXPECT_EQ(t.mode_at(1), "BEYONDSLOW");
}

TEST(Run, RollbackKeepsStateBitIdentical)
{
    Model m = load_model("lowoil.arl");
    Trace blocked = run(m, profile_of(m, slurp(source_path("models/lowoil_blocked.json"))), {false, true, -1});
    ASSERT_EQ(blocked.status.kind, TraceStatus::Kind::Completed);
    for (std::size_t i = 0; i < blocked.size(); ++i) {
        EXPECT_EQ(blocked.mode_at(i), "STAND");
        EXPECT_EQ(blocked.value(i, slot(m, "ES")).as_int32(), 0);
        EXPECT_EQ(blocked.value(i, slot(m, "Starts")).as_int32(), 0) << "call inside a rolled-back action leaked";
    }
    ASSERT_FALSE(blocked.log.empty());
    EXPECT_NE(blocked.log[0].find("rolled back"), std::string::npos);

    // same cycles without any transition at all
    Model bare = parse_or_die(R"(model lowoil
datadict { input LowOil : int32 init 0 min 0 max 1; var ES : int32 init 0 min 0 max 8;
  var Starts : int32 init 0 min 0 max 100000; }
mode STAND init { guard true; })");
    Trace ref = run(bare, profile_of(bare, slurp(source_path("models/lowoil_blocked.json"))));
    ASSERT_EQ(ref.size(), blocked.size());
    for (std::size_t i = 0; i < ref.values.size(); ++i) EXPECT_TRUE(ref.values[i].identical(blocked.values[i]));
}

TEST(Run, LowerPriorityTriedAfterRollback)
{
    Model m = parse_or_die(R"(model m
datadict { var k : int32 init 0; }
mode A init { guard true;
  transition priority 1 to B when true do { k = 5; };
  transition priority 2 to C when true do { k = 7; }; }
mode B { guard k == 99; }
mode C { guard k == 7; })");
    Trace t = run(m, default_profile(m.datadict), {false, false, 1});
    EXPECT_EQ(t.mode_at(0), "A");
    EXPECT_EQ(t.value(0, 0).as_int32(), 7);
    EXPECT_EQ(t.mode_at(1), "C");
}

TEST(Run, GuardViolationBreakpoint)
{
    Model m = load_model("lowoil.arl");
    Trace t = run(m, profile_of(m, slurp(source_path("models/lowoil_breakpoint.json"))));
    EXPECT_EQ(t.status.kind, TraceStatus::Kind::GuardViolation);
    EXPECT_EQ(t.status.to_string(), "GuardViolation(GROUND_START, 1000)");
    EXPECT_EQ(t.size(), 1000u);
    std::string csv = export_trace(t);
    EXPECT_EQ(csv.substr(csv.size() - 45), "# status: GuardViolation(GROUND_START, 1000)\n");
}

TEST(Run, RuntimeErrorAborts)
{
    Model m = parse_or_die(R"(model m
datadict { var d : int32 init 3; var y : int32 init 0; }
module w { in { d } out { d, y } task { d = d - 1; y = 10 / d; } }
mode A init { guard true; procedure period 1 { call w; } })");
    Trace t = run(m, default_profile(m.datadict), {false, false, 10});
    EXPECT_EQ(t.status.kind, TraceStatus::Kind::RuntimeError);
    EXPECT_EQ(t.status.error, EvalErrorKind::DivisionByZero);
    EXPECT_EQ(t.status.cycle, 2);
    EXPECT_EQ(t.size(), 2u);
    EXPECT_NE(t.status.to_string().find("DivisionByZero"), std::string::npos);
}

TEST(Run, BoundsWarningsAndStrict)
{
    Model m = parse_or_die(R"(model m
datadict { var x : int32 init 0 min 0 max 3; }
module w { in { x } out { x } task { x = x + 1; } }
mode A init { guard true; procedure period 1 { call w; } })");
    Trace lax = run(m, default_profile(m.datadict), {false, false, 5});
    EXPECT_EQ(lax.status.kind, TraceStatus::Kind::Completed);
    EXPECT_FALSE(lax.warnings.empty());
    Trace strict = run(m, default_profile(m.datadict), {true, false, 5});
    EXPECT_EQ(strict.status.kind, TraceStatus::Kind::BoundsViolation);
    EXPECT_EQ(strict.status.cycle, 3);
    EXPECT_EQ(strict.status.to_string(), "BoundsViolation(x, 3)");
}

TEST(Run, StopSignal)
{
    Model m = load_model("counter.arl");
    EnvProfile p = profile_of(m, R"({"horizon": 100, "stop": "x >= 4", "inputs": {}})");
    Trace t = run(m, p);
    EXPECT_EQ(t.status.kind, TraceStatus::Kind::StoppedBySignal);
    EXPECT_EQ(t.size(), 4u);
}

TEST(Run, ProcedureFrequency)
{
    Model m = parse_or_die(R"(model m
datadict { var a : int32 init 0; var b : int32 init 0; var c : int32 init 0; }
module ia { in { a } out { a } task { a = a + 1; } }
module ib { in { b } out { b } task { b = b + 1; } }
module ic { in { c } out { c } task { c = c + 1; } }
mode M init { guard true;
  procedure period 4 { call ia; }
  procedure period 6 { call ib; }
  procedure period 10 { call ic; } })");
    const std::int64_t tick = base_tick(m);
    ASSERT_EQ(tick, 2);
    for (std::int64_t horizon : {0, 1, 7, 30, 101}) {
        Trace t = run(m, default_profile(m.datadict), {false, false, horizon});
        std::size_t last = t.size() - 1;
        EXPECT_EQ(t.value(last, 0).as_int32(), horizon * tick / 4 + 1);
        EXPECT_EQ(t.value(last, 1).as_int32(), horizon * tick / 6 + 1);
        EXPECT_EQ(t.value(last, 2).as_int32(), horizon * tick / 10 + 1);
    }
}

TEST(Run, ModeChangesOnlyBetweenSnapshots)
{
    // a variable written only by SLOW's procedure records which mode ran the cycle
    Model m = parse_or_die(R"(model m
datadict { input u : float64 init 0.0 min 0.0 max 1.0; var tag : int32 init 0; var ES : int32 init 0; }
module ta { in { } out { tag } task { tag = 1; } }
module tb { in { } out { tag } task { tag = 2; } }
mode A init { guard true; procedure period 1 { call ta; } transition priority 1 to B when u > 0.7; }
mode B { guard true; procedure period 1 { call tb; } transition priority 1 to A when u < 0.3; })");
    EnvProfile p = profile_of(m, R"({"seed": 5, "horizon": 300, "inputs": {"u": {"kind": "uniform", "lo": 0, "hi": 1}}})");
    Trace t = run(m, p);
    std::size_t switches = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        EXPECT_EQ(t.value(i, 1).as_int32(), t.mode_at(i) == "A" ? 1 : 2);
        if (i > 0 && t.mode_at(i) != t.mode_at(i - 1)) ++switches;
    }
    EXPECT_GT(switches, 10u);
}

TEST(Run, DeterministicUnderSeed)
{
    Model m = load_model("spacecraft.arl");
    EnvProfile p = profile_of(m, slurp(source_path("models/spacecraft.json")));
    p.seed = 17;
    Trace a = run(m, p), b = run(m, p);
    ASSERT_EQ(a.values.size(), b.values.size());
    for (std::size_t i = 0; i < a.values.size(); ++i) EXPECT_TRUE(a.values[i].identical(b.values[i]));
    p.seed = 18;
    Trace c = run(m, p);
    bool differs = false;
    for (std::size_t i = 0; i < a.values.size(); ++i) differs = differs || !a.values[i].identical(c.values[i]);
    EXPECT_TRUE(differs);
}

TEST(Run, Float32Divergence)
{
    Model m = parse_or_die(R"(model acc
datadict { var s32 : float32 init 0.0; var s64 : float64 init 0.0; }
module add { in { s32, s64 } out { s32, s64 } task { s32 = s32 + 0.1; s64 = s64 + 0.1; } }
mode M init { guard true; procedure period 1 { call add; } })");
    Trace t = run(m, default_profile(m.datadict), {false, false, 999});
    ASSERT_EQ(t.size(), 1000u);
    double d = std::fabs(static_cast<double>(t.value(999, 0).as_float32()) - t.value(999, 1).as_float64());
    EXPECT_GT(d, 1e-5);
}

TEST(Profile, Stimuli)
{
    Model m = parse_or_die(R"(model m
datadict { input c : int32 init 2 min 0 max 10; input u : float64 init 0.0 min -1.0 max 1.0;
  input n : float32 init 0.0 min -0.5 max 0.5; input s : int32 init 9; input coin : bool init false; }
mode A init { guard true; })");
    EnvProfile p = profile_of(m, R"({"seed": 3, "horizon": 2000, "inputs": {
        "c": {"kind": "constant", "value": 4},
        "u": {"kind": "uniform", "lo": -1.0, "hi": 1.0},
        "n": {"kind": "normal", "mean": 0.0, "stddev": 1.0},
        "s": {"kind": "timeseries", "points": [[5, 1], [10, 2]]},
        "coin": {"kind": "uniform"}}})");
    Trace t = run(m, p);
    double sum_u = 0;
    std::size_t heads = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        EXPECT_EQ(t.value(i, 0).as_int32(), 4);
        double u = t.value(i, 1).as_float64();
        EXPECT_GE(u, -1.0);
        EXPECT_LT(u, 1.0);
        sum_u += u;
        float n = t.value(i, 2).as_float32();
        EXPECT_GE(n, -0.5f);
        EXPECT_LE(n, 0.5f);
        std::int32_t s = t.value(i, 3).as_int32();
        EXPECT_EQ(s, i < 5 ? 9 : i < 10 ? 1 : 2);
        heads += t.value(i, 4).as_bool();
    }
    EXPECT_NEAR(sum_u / static_cast<double>(t.size()), 0.0, 0.06);
    EXPECT_NEAR(static_cast<double>(heads) / static_cast<double>(t.size()), 0.5, 0.05);
}

TEST(Profile, Errors)
{
    Model m = parse_or_die(R"(model m datadict { input x : int32 init 0 min 0 max 5; var y : int32 init 0; }
mode A init { guard true; })");
    EnvProfile p;
    EXPECT_FALSE(load_profile("{", m.datadict, p).empty());
    EXPECT_FALSE(load_profile(R"({"inputs": {}})", m.datadict, p).empty()) << "missing stimulus";
    EXPECT_FALSE(load_profile(R"({"inputs": {"x": {"kind": "constant", "value": 0}, "y": {"kind": "constant", "value": 1}}})",
                              m.datadict, p)
                     .empty())
        << "stimulus for a non-input";
    EXPECT_FALSE(load_profile(R"({"inputs": {"x": {"kind": "constant", "value": 9}}})", m.datadict, p).empty())
        << "out of bounds";
    EXPECT_FALSE(load_profile(R"({"inputs": {"x": {"kind": "wobble"}}})", m.datadict, p).empty());
    EXPECT_TRUE(load_profile(R"({"inputs": {"x": {"kind": "constant", "value": 5}}})", m.datadict, p).empty());
}

TEST(Export, CsvShape)
{
    Model m = parse_or_die(R"(model m datadict { var f : float32 init 0.1; var b : bool init true; }
mode A init { guard true; })");
    Trace t = run(m, default_profile(m.datadict), {false, false, 1});
    EXPECT_EQ(export_trace(t), "cycle,time_ms,mode,f,b\n0,0,A,0.1,true\n1,1,A,0.1,true\n# status: Completed\n");
}
