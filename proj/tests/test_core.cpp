#include "aasrdl/eval.hpp"
#include "aasrdl/typecheck.hpp"
#include "support.hpp"

#include <bit>
#include <cmath>
#include <limits>

using namespace aasrdl;
using namespace aasrdl::testing;

namespace {

std::vector<Value> initial(const Model& m)
{
    std::vector<Value> v;
    for (const auto& d : m.datadict.vars) v.push_back(d.initial_value());
    return v;
}

Value eval_text(const Model& m, std::string_view text, std::vector<Value> values = {})
{
    if (values.empty()) values = initial(m);
    return eval_expr(*parse_e(text, m.datadict), values);
}

} // namespace

TEST(Eval, IntegerPrecedence)
{
    Model m = dict_model("");
    Value v = eval_text(m, "2 + 3 * 4");
    ASSERT_EQ(v.type(), Type::Int32);
    EXPECT_EQ(v.as_int32(), 14);
}

TEST(Eval, StabilityAtomAtRest)
{
    Model m = dict_model("var Ax : float64 init 0.0; var Ay : float64 init 0.0; var Az : float64 init 0.0;");
    EXPECT_TRUE(eval_text(m, "sqrt(Ax*Ax+Ay*Ay+Az*Az) <= 0.1").as_bool());
}

TEST(Eval, TruncatingIntegerDivisionAndModulo)
{
    Model m = dict_model("");
    EXPECT_EQ(eval_text(m, "-7 / 2").as_int32(), -3);
    EXPECT_EQ(eval_text(m, "-7 % 3").as_int32(), -1);
    EXPECT_EQ(eval_text(m, "7 % -3").as_int32(), 1);
    // brute force against the C++ operators, which truncate as well
    for (int a = -9; a <= 9; ++a)
        for (int b = -4; b <= 4; ++b) {
            if (b == 0) continue;
            std::string lit_a = a < 0 ? "(0 - " + std::to_string(-a) + ")" : std::to_string(a);
            std::string lit_b = b < 0 ? "(0 - " + std::to_string(-b) + ")" : std::to_string(b);
            EXPECT_EQ(eval_text(m, lit_a + " / " + lit_b).as_int32(), a / b);
            EXPECT_EQ(eval_text(m, lit_a + " % " + lit_b).as_int32(), a % b);
        }
}

TEST(Eval, RuntimeErrors)
{
    Model m = dict_model("var big : int32 init 2147483647; var z : int32 init 0; var neg : float64 init -1.0;");
    auto kind_of = [&](std::string_view text) {
        try {
            (void)eval_text(m, text);
        } catch (const EvalError& e) {
            return e.kind();
        }
        ADD_FAILURE() << "no error for " << text;
        return EvalErrorKind::TypeError;
    };
    EXPECT_EQ(kind_of("5 / z"), EvalErrorKind::DivisionByZero);
    EXPECT_EQ(kind_of("5 % z"), EvalErrorKind::DivisionByZero);
    EXPECT_EQ(kind_of("sqrt(neg)"), EvalErrorKind::SqrtOfNegative);
    EXPECT_EQ(kind_of("big + 1"), EvalErrorKind::Int32Overflow);
    EXPECT_EQ(kind_of("big * 2"), EvalErrorKind::Int32Overflow);
    EXPECT_EQ(kind_of("-(0 - big - 1)"), EvalErrorKind::Int32Overflow);
}

TEST(Eval, FloatDivisionByZeroIsAnError)
{
    Model m = dict_model("var z : float64 init 0.0;");
    EXPECT_THROW((void)eval_text(m, "1.0 / z"), EvalError);
}

TEST(Eval, DeterministicBitPattern)
{
    Model m = dict_model("var a : float32 init 0.1; var b : float64 init 0.3;");
    Value x = eval_text(m, "sqrt(a * b + 1.5) / 3.0");
    Value y = eval_text(m, "sqrt(a * b + 1.5) / 3.0");
    EXPECT_TRUE(x.identical(y));
}

TEST(Eval, Float32AccumulationDivergesFromFloat64)
{
    Model m = parse_or_die(R"(model acc
datadict { var s32 : float32 init 0.0; var s64 : float64 init 0.0; }
module add { in { s32, s64 } out { s32, s64 } task { s32 = s32 + 0.1; s64 = s64 + 0.1; } }
mode M init { guard true; procedure period 1 { call add; } })");
    auto values = initial(m);
    Block call{Stmt{Call{"add"}, {}}};
    float ref32 = 0.0f;
    double ref64 = 0.0;
    for (int i = 0; i < 1000; ++i) {
        execute(m, call, values);
        ref32 = static_cast<float>(static_cast<double>(ref32) + 0.1);
        ref64 += 0.1;
    }
    EXPECT_EQ(std::bit_cast<std::uint32_t>(values[0].as_float32()), std::bit_cast<std::uint32_t>(ref32));
    EXPECT_EQ(values[1].as_float64(), ref64);
    EXPECT_GT(std::fabs(static_cast<double>(values[0].as_float32()) - values[1].as_float64()), 1e-5);
}

TEST(Eval, Float32StorageRoundTrips)
{
    Model m = dict_model("var f : float32 init 0.0;");
    auto values = initial(m);
    Block b{Stmt{Assign{"f", 0, parse_e("0.1", m.datadict)}, {}}};
    execute(m, b, values);
    ASSERT_EQ(values[0].type(), Type::Float32);
    EXPECT_EQ(values[0].as_float32(), 0.1f);
}

TEST(Types, PromotionTable)
{
    const Type all[] = {Type::Bool, Type::Int32, Type::Float32, Type::Float64};
    auto rank = [](Type t) { return t == Type::Int32 ? 0 : t == Type::Float32 ? 1 : 2; };
    for (Type a : all)
        for (Type b : all) {
            auto p = promote(a, b);
            if (a == Type::Bool || b == Type::Bool) {
                EXPECT_FALSE(p);
                continue;
            }
            ASSERT_TRUE(p);
            EXPECT_EQ(rank(*p), std::max(rank(a), rank(b)));
            EXPECT_EQ(promote(b, a), p);
        }
}

TEST(Types, PromotionCommutesWithEvaluation)
{
    // evaluating a mixed expression equals promoting operands by hand first
    Model m = dict_model("var i : int32 init 0; var f : float32 init 0.0; var d : float64 init 0.0;");
    auto e_if = parse_e("i + f", m.datadict);
    auto e_fd = parse_e("f * d", m.datadict);
    auto e_id = parse_e("i - d", m.datadict);
    const int ints[] = {-3, 0, 1, 7, 1000003};
    const float floats[] = {-2.5f, 0.0f, 0.1f, 3.3f};
    const double doubles[] = {-1e10, 0.0, 0.3, 2.75};
    for (int i : ints)
        for (float f : floats)
            for (double d : doubles) {
                std::vector<Value> v{Value::int32(i), Value::float32(f), Value::float64(d)};
                Value a = eval_expr(*e_if, v);
                ASSERT_EQ(a.type(), Type::Float32);
                EXPECT_EQ(a.as_float32(), static_cast<float>(i) + f);
                Value b = eval_expr(*e_fd, v);
                ASSERT_EQ(b.type(), Type::Float64);
                EXPECT_EQ(b.as_float64(), static_cast<double>(f) * d);
                Value c = eval_expr(*e_id, v);
                EXPECT_EQ(c.as_float64(), static_cast<double>(i) - d);
            }
}

TEST(Types, GuardWithConstantChecks)
{
    Model m = parse_or_die(R"(model g
datadict { var ES : int32 init 1; const ES_SLOW : int32 = 1; }
mode SLOW init { guard ES == ES_SLOW; })");
    EXPECT_TRUE(type_check(m).ok());
}

TEST(Types, BoolAssignedIntegerIsReported)
{
    Model m = parse_or_die(R"(model g
datadict { var flag : bool init false; }
module w { in { } out { flag } task { flag = 1 + 2; } }
mode M init { guard true; procedure period 1 { call w; } })");
    auto r = type_check(m);
    ASSERT_EQ(r.diagnostics.size(), 1u);
    EXPECT_EQ(r.diagnostics[0].expected, "bool");
    EXPECT_EQ(r.diagnostics[0].actual, "int32");
}

TEST(Types, Float32ComparedWithDoubleLiteralPromotes)
{
    Model m = parse_or_die(R"(model g
datadict { input N2 : float32 init 0.0; }
mode M init { guard N2 < 500.0; })");
    auto r = type_check(m);
    EXPECT_TRUE(r.ok());
    bool seen = std::any_of(r.promotions.begin(), r.promotions.end(), [](const Promotion& p) {
        return p.from == Type::Float32 && p.to == Type::Float64;
    });
    EXPECT_TRUE(seen);
}

TEST(Types, LogicalOperandsMustBeBool)
{
    Model m = parse_or_die(R"(model g
datadict { var n : int32 init 0; }
mode M init { guard n && true; })");
    EXPECT_FALSE(type_check(m).ok());
}

TEST(Types, AcceptedExpressionsEvaluateOnConformingStates)
{
    Model m = dict_model("var i : int32 init 0 min -5 max 5; var f : float64 init 0.0; var b : bool init false;");
    const char* exprs[] = {"i + 1 < 3", "f * 2.0 >= i", "!b || i == 0", "abs(i) <= 5", "-f != f + 1.0"};
    for (const char* text : exprs) {
        auto e = parse_e(text, m.datadict);
        TypeReport r;
        type_check_expr(*e, Type::Bool, r);
        ASSERT_TRUE(r.ok()) << text;
        for (int i = -5; i <= 5; ++i)
            for (double f : {-1.5, 0.0, 2.0})
                for (bool b : {false, true}) {
                    std::vector<Value> v{Value::int32(i), Value::float64(f), Value::boolean(b)};
                    EXPECT_EQ(eval_expr(*e, v).type(), Type::Bool) << text;
                }
    }
}

TEST(Values, RoundTripFormatting)
{
    for (float f : {0.1f, 1.0f / 3.0f, 1e-30f, 3.4e38f, -0.0f}) {
        auto back = parse_value(format_value(Value::float32(f)), Type::Float32);
        ASSERT_TRUE(back);
        EXPECT_EQ(std::bit_cast<std::uint32_t>(back->as_float32()), std::bit_cast<std::uint32_t>(f));
    }
    EXPECT_EQ(format_value(Value::float32(0.1f)), "0.1");
    EXPECT_EQ(format_value(Value::float64(0.1)), "0.1");
    EXPECT_EQ(format_literal(Value::float64(2.0)).find('.') != std::string::npos, true);
}
