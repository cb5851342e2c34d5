#include "aasrdl/typecheck.hpp"

namespace aasrdl {

namespace {

std::string describe(std::optional<Type> t) { return t ? std::string(type_name(*t)) : std::string("unknown"); }

void add(TypeReport& r, const SourceSpan& span, std::string expected, std::string actual, std::string message)
{
    r.diagnostics.push_back({span, std::move(expected), std::move(actual), std::move(message)});
}

void check_node(const Expr& e, TypeReport& r)
{
    if (const auto* u = e.as<Unary>()) {
        check_node(*u->operand, r);
        if (!e.type && u->operand->type) {
            std::string want = u->op == UnaryOp::Not ? "bool" : "numeric";
            add(r, e.span, want, describe(u->operand->type),
                "operator '" + std::string(op_symbol(u->op)) + "' expects " + want + " operand, found " +
                    describe(u->operand->type));
        }
    } else if (const auto* b = e.as<Binary>()) {
        check_node(*b->lhs, r);
        check_node(*b->rhs, r);
        if (!b->lhs->type || !b->rhs->type) return;
        if (!e.type) {
            std::string want;
            if (is_logical(b->op))
                want = "bool";
            else if (b->op == BinaryOp::Mod)
                want = "int32";
            else if (b->op == BinaryOp::Eq || b->op == BinaryOp::Ne)
                want = "matching";
            else
                want = "numeric";
            add(r, e.span, want, describe(b->lhs->type) + "," + describe(b->rhs->type),
                "operator '" + std::string(op_symbol(b->op)) + "' expects " + want + " operands, found " +
                    describe(b->lhs->type) + " and " + describe(b->rhs->type));
            return;
        }
        for (const auto* side : {b->lhs.get(), b->rhs.get()})
            if (*side->type != *b->operand_type) r.promotions.push_back({side->span, *side->type, *b->operand_type});
    } else if (const auto* c = e.as<Cast>()) {
        check_node(*c->operand, r);
    }
}

void check_block(const Model& m, const Block& block, TypeReport& r)
{
    for (const auto& stmt : block) {
        if (const auto* a = stmt.as<Assign>()) {
            type_check_expr(*a->value, std::nullopt, r);
            if (a->slot >= 0 && a->value->type) {
                Type target = m.datadict.vars[a->slot].type;
                if (!assignable(target, *a->value->type))
                    add(r, stmt.span, std::string(type_name(target)), describe(a->value->type),
                        "cannot assign " + describe(a->value->type) + " to '" + a->target + "' of type " +
                            std::string(type_name(target)));
            }
        } else if (const auto* i = stmt.as<If>()) {
            type_check_expr(*i->cond, Type::Bool, r);
            check_block(m, i->then_block, r);
            check_block(m, i->else_block, r);
        }
    }
}

} // namespace

void type_check_expr(const Expr& e, std::optional<Type> expected, TypeReport& report)
{
    check_node(e, report);
    if (expected && e.type && *e.type != *expected)
        add(report, e.span, std::string(type_name(*expected)), describe(e.type),
            "expected " + std::string(type_name(*expected)) + " expression, found " + describe(e.type));
}

TypeReport type_check(const Model& model)
{
    TypeReport r;
    for (const auto& module : model.modules) check_block(model, module.task, r);
    for (const auto& mode : model.modes) {
        if (mode.guard) type_check_expr(*mode.guard, Type::Bool, r);
        for (const auto& p : mode.procedures) check_block(model, p.body, r);
        for (const auto& t : mode.transitions) {
            if (t.condition) type_check_expr(*t.condition, Type::Bool, r);
            check_block(model, t.action, r);
        }
    }
    return r;
}

} // namespace aasrdl
