#include "aasrdl/eval.hpp"

#include <cmath>
#include <limits>

namespace aasrdl {

std::string_view to_string(EvalErrorKind k)
{
    switch (k) {
    case EvalErrorKind::DivisionByZero: return "DivisionByZero";
    case EvalErrorKind::SqrtOfNegative: return "SqrtOfNegative";
    case EvalErrorKind::Int32Overflow: return "Int32Overflow";
    case EvalErrorKind::UndefinedVariable: return "UndefinedVariable";
    case EvalErrorKind::UnknownModule: return "UnknownModule";
    case EvalErrorKind::TypeError: return "TypeError";
    }
    return "?";
}

namespace {

[[noreturn]] void fail(EvalErrorKind kind, const Expr& e, const std::string& msg)
{
    throw EvalError(kind, e.span, std::string(to_string(kind)) + ": " + msg);
}

Value widen(const Value& v, Type t)
{
    if (v.type() == t) return v;
    switch (t) {
    case Type::Float32: return Value::float32(static_cast<float>(v.to_double()));
    case Type::Float64: return Value::float64(v.to_double());
    default: return v;
    }
}

Value checked_int(std::int64_t r, const Expr& e)
{
    if (r < std::numeric_limits<std::int32_t>::min() || r > std::numeric_limits<std::int32_t>::max())
        fail(EvalErrorKind::Int32Overflow, e, "result " + std::to_string(r) + " does not fit int32");
    return Value::int32(static_cast<std::int32_t>(r));
}

template <class F>
F get(const Value& v)
{
    if constexpr (std::is_same_v<F, float>)
        return v.as_float32();
    else
        return v.as_float64();
}

template <class F>
Value make(F f)
{
    if constexpr (std::is_same_v<F, float>)
        return Value::float32(f);
    else
        return Value::float64(f);
}

template <class F>
Value float_arith(BinaryOp op, F a, F b, const Expr& e)
{
    switch (op) {
    case BinaryOp::Add: return make<F>(a + b);
    case BinaryOp::Sub: return make<F>(a - b);
    case BinaryOp::Mul: return make<F>(a * b);
    case BinaryOp::Div:
        if (b == F(0)) fail(EvalErrorKind::DivisionByZero, e, "division by zero");
        return make<F>(a / b);
    case BinaryOp::Lt: return Value::boolean(a < b);
    case BinaryOp::Le: return Value::boolean(a <= b);
    case BinaryOp::Gt: return Value::boolean(a > b);
    case BinaryOp::Ge: return Value::boolean(a >= b);
    case BinaryOp::Eq: return Value::boolean(a == b);
    case BinaryOp::Ne: return Value::boolean(a != b);
    default: fail(EvalErrorKind::TypeError, e, "operator not defined on floats");
    }
}

Value int_arith(BinaryOp op, std::int64_t a, std::int64_t b, const Expr& e)
{
    switch (op) {
    case BinaryOp::Add: return checked_int(a + b, e);
    case BinaryOp::Sub: return checked_int(a - b, e);
    case BinaryOp::Mul: return checked_int(a * b, e);
    case BinaryOp::Div:
        if (b == 0) fail(EvalErrorKind::DivisionByZero, e, "division by zero");
        return checked_int(a / b, e);
    case BinaryOp::Mod:
        if (b == 0) fail(EvalErrorKind::DivisionByZero, e, "modulo by zero");
        return checked_int(a % b, e);
    case BinaryOp::Lt: return Value::boolean(a < b);
    case BinaryOp::Le: return Value::boolean(a <= b);
    case BinaryOp::Gt: return Value::boolean(a > b);
    case BinaryOp::Ge: return Value::boolean(a >= b);
    case BinaryOp::Eq: return Value::boolean(a == b);
    case BinaryOp::Ne: return Value::boolean(a != b);
    default: fail(EvalErrorKind::TypeError, e, "operator not defined on int32");
    }
}

Value eval_unary(const Expr& e, const Unary& u, std::span<const Value> values)
{
    Value v = eval_expr(*u.operand, values);
    switch (u.op) {
    case UnaryOp::Not: return Value::boolean(!v.as_bool());
    case UnaryOp::Neg:
        switch (v.type()) {
        case Type::Int32: return checked_int(-static_cast<std::int64_t>(v.as_int32()), e);
        case Type::Float32: return Value::float32(-v.as_float32());
        case Type::Float64: return Value::float64(-v.as_float64());
        default: break;
        }
        break;
    case UnaryOp::Abs:
        switch (v.type()) {
        case Type::Int32: return checked_int(std::llabs(static_cast<std::int64_t>(v.as_int32())), e);
        case Type::Float32: return Value::float32(std::fabs(v.as_float32()));
        case Type::Float64: return Value::float64(std::fabs(v.as_float64()));
        default: break;
        }
        break;
    case UnaryOp::Sqrt: {
        if (v.to_double() < 0) fail(EvalErrorKind::SqrtOfNegative, e, "sqrt of " + format_value(v));
        if (v.type() == Type::Float32) return Value::float32(std::sqrt(v.as_float32()));
        return Value::float64(std::sqrt(v.to_double()));
    }
    }
    fail(EvalErrorKind::TypeError, e, "ill-typed unary operand");
}

Value eval_binary(const Expr& e, const Binary& b, std::span<const Value> values)
{
    if (!b.operand_type) fail(EvalErrorKind::TypeError, e, "ill-typed operands");
    if (b.op == BinaryOp::And) {
        if (!eval_expr(*b.lhs, values).as_bool()) return Value::boolean(false);
        return Value::boolean(eval_expr(*b.rhs, values).as_bool());
    }
    if (b.op == BinaryOp::Or) {
        if (eval_expr(*b.lhs, values).as_bool()) return Value::boolean(true);
        return Value::boolean(eval_expr(*b.rhs, values).as_bool());
    }
    Value l = eval_expr(*b.lhs, values);
    Value r = eval_expr(*b.rhs, values);
    switch (*b.operand_type) {
    case Type::Bool:
        if (b.op == BinaryOp::Eq) return Value::boolean(l.as_bool() == r.as_bool());
        if (b.op == BinaryOp::Ne) return Value::boolean(l.as_bool() != r.as_bool());
        break;
    case Type::Int32: return int_arith(b.op, l.as_int32(), r.as_int32(), e);
    case Type::Float32:
        return float_arith<float>(b.op, get<float>(widen(l, Type::Float32)), get<float>(widen(r, Type::Float32)), e);
    case Type::Float64:
        return float_arith<double>(b.op, widen(l, Type::Float64).as_float64(), widen(r, Type::Float64).as_float64(),
                                   e);
    }
    fail(EvalErrorKind::TypeError, e, "ill-typed operands");
}

} // namespace

Value eval_expr(const Expr& e, std::span<const Value> values)
{
    if (!e.type) {
        if (const auto* v = e.as<VarRef>())
            fail(EvalErrorKind::UndefinedVariable, e, "undefined variable '" + v->name + "'");
        fail(EvalErrorKind::TypeError, e, "expression does not type-check");
    }
    switch (e.node.index()) {
    case 0: return std::get<Literal>(e.node).value;
    case 1: {
        const auto& v = std::get<VarRef>(e.node);
        if (v.slot < 0 || static_cast<std::size_t>(v.slot) >= values.size())
            fail(EvalErrorKind::UndefinedVariable, e, "undefined variable '" + v.name + "'");
        return values[v.slot];
    }
    case 2: return std::get<ConstRef>(e.node).value;
    case 3: return eval_unary(e, std::get<Unary>(e.node), values);
    case 4: return eval_binary(e, std::get<Binary>(e.node), values);
    case 5: {
        const auto& c = std::get<Cast>(e.node);
        return eval_expr(*c.operand, values).convert_to(c.to);
    }
    }
    fail(EvalErrorKind::TypeError, e, "unknown node");
}

bool eval_bool(const Expr& e, std::span<const Value> values) { return eval_expr(e, values).as_bool(); }

namespace {

void exec_block(const Model& model, const Block& block, std::vector<Value>& values, ExecObserver* obs, int depth)
{
    if (depth > 64) throw EvalError(EvalErrorKind::UnknownModule, {}, "module call nesting too deep");
    for (const auto& stmt : block) {
        if (const auto* a = stmt.as<Assign>()) {
            if (a->slot < 0)
                throw EvalError(EvalErrorKind::UndefinedVariable, stmt.span,
                                "UndefinedVariable: assignment to undeclared '" + a->target + "'");
            Type t = model.datadict.vars[a->slot].type;
            Value v = eval_expr(*a->value, values);
            if (!assignable(t, v.type()))
                throw EvalError(EvalErrorKind::TypeError, stmt.span, "TypeError: cannot assign to '" + a->target + "'");
            values[a->slot] = v.convert_to(t);
            if (obs) obs->on_assign(stmt, a->slot, values[a->slot]);
        } else if (const auto* i = stmt.as<If>()) {
            bool taken = eval_bool(*i->cond, values);
            if (obs) obs->on_branch(stmt, taken);
            exec_block(model, taken ? i->then_block : i->else_block, values, obs, depth);
        } else if (const auto* c = stmt.as<Call>()) {
            const ModuleDef* m = model.find_module(c->module);
            if (!m)
                throw EvalError(EvalErrorKind::UnknownModule, stmt.span,
                                "UnknownModule: call to undeclared module '" + c->module + "'");
            if (obs) obs->on_call(stmt, *m);
            exec_block(model, m->task, values, obs, depth + 1);
        }
    }
}

} // namespace

void execute(const Model& model, const Block& block, std::vector<Value>& values, ExecObserver* observer)
{
    exec_block(model, block, values, observer, 0);
}

} // namespace aasrdl
