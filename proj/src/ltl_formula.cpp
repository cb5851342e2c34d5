#include "aasrdl/ltl_formula.hpp"

#include "aasrdl/printer.hpp"

namespace aasrdl {

namespace ltl {

namespace {

LtlFormula make(LtlOp op, ExprPtr atom, LtlFormula lhs, LtlFormula rhs)
{
    auto n = std::make_shared<LtlNode>();
    n->op = op;
    n->atom = std::move(atom);
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    if (n->atom)
        n->span = n->atom->span;
    else if (n->lhs)
        n->span = n->lhs->span;
    return n;
}

} // namespace

LtlFormula atom(ExprPtr e) { return make(LtlOp::Atom, std::move(e), nullptr, nullptr); }
LtlFormula negation(LtlFormula f) { return make(LtlOp::Not, nullptr, std::move(f), nullptr); }
LtlFormula conjunction(LtlFormula a, LtlFormula b) { return make(LtlOp::And, nullptr, std::move(a), std::move(b)); }
LtlFormula disjunction(LtlFormula a, LtlFormula b) { return make(LtlOp::Or, nullptr, std::move(a), std::move(b)); }
LtlFormula implies(LtlFormula a, LtlFormula b) { return make(LtlOp::Implies, nullptr, std::move(a), std::move(b)); }
LtlFormula next(LtlFormula f) { return make(LtlOp::Next, nullptr, std::move(f), nullptr); }
LtlFormula eventually(LtlFormula f) { return make(LtlOp::Eventually, nullptr, std::move(f), nullptr); }
LtlFormula always(LtlFormula f) { return make(LtlOp::Always, nullptr, std::move(f), nullptr); }
LtlFormula until(LtlFormula a, LtlFormula b) { return make(LtlOp::Until, nullptr, std::move(a), std::move(b)); }

} // namespace ltl

bool is_unary(LtlOp op)
{
    return op == LtlOp::Not || op == LtlOp::Next || op == LtlOp::Eventually || op == LtlOp::Always;
}

std::string to_string(const LtlNode& f)
{
    switch (f.op) {
    case LtlOp::Atom: return "(" + to_string(*f.atom) + ")";
    case LtlOp::Not: return "!" + to_string(*f.lhs);
    case LtlOp::Next: return "X " + to_string(*f.lhs);
    case LtlOp::Eventually: return "F " + to_string(*f.lhs);
    case LtlOp::Always: return "G " + to_string(*f.lhs);
    case LtlOp::And: return "(" + to_string(*f.lhs) + " && " + to_string(*f.rhs) + ")";
    case LtlOp::Or: return "(" + to_string(*f.lhs) + " || " + to_string(*f.rhs) + ")";
    case LtlOp::Implies: return "(" + to_string(*f.lhs) + " -> " + to_string(*f.rhs) + ")";
    case LtlOp::Until: return "(" + to_string(*f.lhs) + " U " + to_string(*f.rhs) + ")";
    }
    return "?";
}

bool structurally_equal(const LtlNode& a, const LtlNode& b)
{
    if (a.op != b.op) return false;
    if (a.op == LtlOp::Atom) return structurally_equal(*a.atom, *b.atom);
    if (!structurally_equal(*a.lhs, *b.lhs)) return false;
    if (is_unary(a.op)) return true;
    return structurally_equal(*a.rhs, *b.rhs);
}

} // namespace aasrdl
