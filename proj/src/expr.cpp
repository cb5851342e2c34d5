#include "aasrdl/expr.hpp"

namespace aasrdl {

std::string_view op_symbol(UnaryOp op)
{
    switch (op) {
    case UnaryOp::Neg: return "-";
    case UnaryOp::Not: return "!";
    case UnaryOp::Sqrt: return "sqrt";
    case UnaryOp::Abs: return "abs";
    }
    return "?";
}

std::string_view op_symbol(BinaryOp op)
{
    switch (op) {
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Mul: return "*";
    case BinaryOp::Div: return "/";
    case BinaryOp::Mod: return "%";
    case BinaryOp::Lt: return "<";
    case BinaryOp::Le: return "<=";
    case BinaryOp::Gt: return ">";
    case BinaryOp::Ge: return ">=";
    case BinaryOp::Eq: return "==";
    case BinaryOp::Ne: return "!=";
    case BinaryOp::And: return "&&";
    case BinaryOp::Or: return "||";
    }
    return "?";
}

namespace expr {

namespace {

ExprPtr make(Expr::Node node, SourceSpan span, std::optional<Type> type)
{
    return std::make_shared<const Expr>(Expr{std::move(node), std::move(span), type});
}

std::optional<Type> unary_type(UnaryOp op, std::optional<Type> t)
{
    if (!t) return std::nullopt;
    switch (op) {
    case UnaryOp::Not: return *t == Type::Bool ? t : std::nullopt;
    case UnaryOp::Neg:
    case UnaryOp::Abs: return is_numeric(*t) ? t : std::nullopt;
    case UnaryOp::Sqrt:
        if (!is_numeric(*t)) return std::nullopt;
        return *t == Type::Int32 ? Type::Float64 : *t;
    }
    return std::nullopt;
}

} // namespace

ExprPtr literal(Value v, SourceSpan span)
{
    Type t = v.type();
    return make(Literal{v}, std::move(span), t);
}

ExprPtr boolean(bool b, SourceSpan span) { return literal(Value::boolean(b), std::move(span)); }

ExprPtr var(std::string name, int slot, std::optional<Type> type, SourceSpan span)
{
    return make(VarRef{std::move(name), slot}, std::move(span), slot >= 0 ? type : std::nullopt);
}

ExprPtr constant(std::string name, Value v, SourceSpan span)
{
    Type t = v.type();
    return make(ConstRef{std::move(name), v}, std::move(span), t);
}

ExprPtr unary(UnaryOp op, ExprPtr operand, SourceSpan span)
{
    auto t = unary_type(op, operand->type);
    return make(Unary{op, std::move(operand)}, std::move(span), t);
}

ExprPtr binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs, SourceSpan span)
{
    std::optional<Type> operand_type;
    std::optional<Type> result;
    auto a = lhs->type;
    auto b = rhs->type;
    if (a && b) {
        switch (op) {
        case BinaryOp::Add:
        case BinaryOp::Sub:
        case BinaryOp::Mul:
        case BinaryOp::Div:
            operand_type = promote(*a, *b);
            result = operand_type;
            break;
        case BinaryOp::Mod:
            if (*a == Type::Int32 && *b == Type::Int32) operand_type = result = Type::Int32;
            break;
        case BinaryOp::Lt:
        case BinaryOp::Le:
        case BinaryOp::Gt:
        case BinaryOp::Ge:
            operand_type = promote(*a, *b);
            if (operand_type) result = Type::Bool;
            break;
        case BinaryOp::Eq:
        case BinaryOp::Ne:
            if (*a == Type::Bool && *b == Type::Bool)
                operand_type = Type::Bool;
            else
                operand_type = promote(*a, *b);
            if (operand_type) result = Type::Bool;
            break;
        case BinaryOp::And:
        case BinaryOp::Or:
            if (*a == Type::Bool && *b == Type::Bool) operand_type = result = Type::Bool;
            break;
        }
    }
    return make(Binary{op, std::move(lhs), std::move(rhs), operand_type}, std::move(span), result);
}

ExprPtr cast(Type to, ExprPtr operand, SourceSpan span)
{
    std::optional<Type> t;
    if (operand->type && assignable(to, *operand->type)) t = to;
    return make(Cast{to, std::move(operand)}, std::move(span), t);
}

ExprPtr conj(ExprPtr a, ExprPtr b) { return binary(BinaryOp::And, std::move(a), std::move(b)); }
ExprPtr disj(ExprPtr a, ExprPtr b) { return binary(BinaryOp::Or, std::move(a), std::move(b)); }
ExprPtr negate(ExprPtr a) { return unary(UnaryOp::Not, std::move(a)); }

ExprPtr conj_all(const std::vector<ExprPtr>& terms)
{
    if (terms.empty()) return boolean(true);
    ExprPtr acc = terms.front();
    for (std::size_t i = 1; i < terms.size(); ++i) acc = conj(acc, terms[i]);
    return acc;
}

} // namespace expr

bool structurally_equal(const Expr& a, const Expr& b)
{
    if (a.node.index() != b.node.index() || a.type != b.type) return false;
    return std::visit(
        [&](const auto& x) -> bool {
            using T = std::decay_t<decltype(x)>;
            const auto& y = std::get<T>(b.node);
            if constexpr (std::is_same_v<T, Literal>) {
                return x.value.identical(y.value);
            } else if constexpr (std::is_same_v<T, VarRef>) {
                return x.name == y.name && x.slot == y.slot;
            } else if constexpr (std::is_same_v<T, ConstRef>) {
                return x.name == y.name && x.value.identical(y.value);
            } else if constexpr (std::is_same_v<T, Unary>) {
                return x.op == y.op && structurally_equal(*x.operand, *y.operand);
            } else if constexpr (std::is_same_v<T, Binary>) {
                return x.op == y.op && structurally_equal(*x.lhs, *y.lhs) && structurally_equal(*x.rhs, *y.rhs);
            } else {
                return x.to == y.to && structurally_equal(*x.operand, *y.operand);
            }
        },
        a.node);
}

void for_each_var(const Expr& e, const std::function<void(const VarRef&, const SourceSpan&)>& fn)
{
    if (const auto* v = e.as<VarRef>()) {
        fn(*v, e.span);
    } else if (const auto* u = e.as<Unary>()) {
        for_each_var(*u->operand, fn);
    } else if (const auto* b = e.as<Binary>()) {
        for_each_var(*b->lhs, fn);
        for_each_var(*b->rhs, fn);
    } else if (const auto* c = e.as<Cast>()) {
        for_each_var(*c->operand, fn);
    }
}

ExprPtr substitute(const ExprPtr& e, const std::vector<ExprPtr>& store)
{
    if (const auto* v = e->as<VarRef>()) {
        if (v->slot < 0 || static_cast<std::size_t>(v->slot) >= store.size() || !store[v->slot]) return e;
        const ExprPtr& repl = store[v->slot];
        if (e->type && repl->type && *repl->type != *e->type) return expr::cast(*e->type, repl, e->span);
        return repl;
    }
    if (const auto* u = e->as<Unary>()) {
        auto operand = substitute(u->operand, store);
        if (operand == u->operand) return e;
        return expr::unary(u->op, std::move(operand), e->span);
    }
    if (const auto* b = e->as<Binary>()) {
        auto lhs = substitute(b->lhs, store);
        auto rhs = substitute(b->rhs, store);
        if (lhs == b->lhs && rhs == b->rhs) return e;
        return expr::binary(b->op, std::move(lhs), std::move(rhs), e->span);
    }
    if (const auto* c = e->as<Cast>()) {
        auto operand = substitute(c->operand, store);
        if (operand == c->operand) return e;
        return expr::cast(c->to, std::move(operand), e->span);
    }
    return e;
}

bool contains_logical(const Expr& e)
{
    if (const auto* u = e.as<Unary>()) return contains_logical(*u->operand);
    if (const auto* b = e.as<Binary>())
        return is_logical(b->op) || contains_logical(*b->lhs) || contains_logical(*b->rhs);
    if (const auto* c = e.as<Cast>()) return contains_logical(*c->operand);
    return false;
}

} // namespace aasrdl
