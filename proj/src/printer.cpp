#include "aasrdl/printer.hpp"

#include <cmath>
#include <sstream>

namespace aasrdl {

namespace {

constexpr int kUnaryPrec = 7;
constexpr int kPrimaryPrec = 8;

int precedence(BinaryOp op)
{
    switch (op) {
    case BinaryOp::Or: return 1;
    case BinaryOp::And: return 2;
    case BinaryOp::Eq:
    case BinaryOp::Ne: return 3;
    case BinaryOp::Lt:
    case BinaryOp::Le:
    case BinaryOp::Gt:
    case BinaryOp::Ge: return 4;
    case BinaryOp::Add:
    case BinaryOp::Sub: return 5;
    case BinaryOp::Mul:
    case BinaryOp::Div:
    case BinaryOp::Mod: return 6;
    }
    return 0;
}

int precedence(const Expr& e)
{
    if (const auto* b = e.as<Binary>()) return precedence(b->op);
    if (const auto* u = e.as<Unary>()) return (u->op == UnaryOp::Neg || u->op == UnaryOp::Not) ? kUnaryPrec : kPrimaryPrec;
    if (const auto* l = e.as<Literal>())
        if (is_numeric(l->value.type()) && std::signbit(l->value.to_double())) return kUnaryPrec;
    return kPrimaryPrec;
}

void emit(std::ostream& os, const Expr& e);

void emit_wrapped(std::ostream& os, const Expr& e, bool wrap)
{
    if (wrap) os << '(';
    emit(os, e);
    if (wrap) os << ')';
}

void emit(std::ostream& os, const Expr& e)
{
    if (const auto* l = e.as<Literal>()) {
        os << format_literal(l->value);
    } else if (const auto* v = e.as<VarRef>()) {
        os << v->name;
    } else if (const auto* c = e.as<ConstRef>()) {
        os << c->name;
    } else if (const auto* u = e.as<Unary>()) {
        if (u->op == UnaryOp::Sqrt || u->op == UnaryOp::Abs) {
            os << op_symbol(u->op) << '(';
            emit(os, *u->operand);
            os << ')';
        } else {
            os << op_symbol(u->op);
            emit_wrapped(os, *u->operand, precedence(*u->operand) < kUnaryPrec);
        }
    } else if (const auto* b = e.as<Binary>()) {
        int p = precedence(b->op);
        emit_wrapped(os, *b->lhs, precedence(*b->lhs) < p);
        os << ' ' << op_symbol(b->op) << ' ';
        emit_wrapped(os, *b->rhs, precedence(*b->rhs) <= p);
    } else if (const auto* c = e.as<Cast>()) {
        os << type_name(c->to) << '(';
        emit(os, *c->operand);
        os << ')';
    }
}

std::string pad(int n) { return std::string(static_cast<std::size_t>(n) * 2, ' '); }

void emit_block(std::ostream& os, const Block& b, int indent);

void emit_stmt(std::ostream& os, const Stmt& s, int indent)
{
    if (const auto* a = s.as<Assign>()) {
        os << pad(indent) << a->target << " = " << to_string(*a->value) << ";\n";
    } else if (const auto* i = s.as<If>()) {
        os << pad(indent) << "if (" << to_string(*i->cond) << ") ";
        emit_block(os, i->then_block, indent);
        if (!i->else_block.empty()) {
            os << " else ";
            emit_block(os, i->else_block, indent);
        }
        os << '\n';
    } else if (const auto* c = s.as<Call>()) {
        os << pad(indent) << "call " << c->module << ";\n";
    }
}

void emit_block(std::ostream& os, const Block& b, int indent)
{
    os << "{\n";
    for (const auto& s : b) emit_stmt(os, s, indent + 1);
    os << pad(indent) << '}';
}

std::string id_list(const std::vector<std::string>& ids)
{
    std::string out;
    for (std::size_t i = 0; i < ids.size(); ++i) out += (i ? ", " : "") + ids[i];
    return out;
}

} // namespace

std::string to_string(const Expr& e)
{
    std::ostringstream os;
    emit(os, e);
    return os.str();
}

std::string print_block(const Block& b, int indent)
{
    std::ostringstream os;
    emit_block(os, b, indent);
    return os.str();
}

std::string print_model(const Model& m)
{
    std::ostringstream os;
    os << "model " << m.name << "\n\ndatadict {\n";
    for (const auto& c : m.datadict.constants)
        os << "  const " << c.name << " : " << type_name(c.value.type()) << " = " << format_literal(c.value) << ";\n";
    for (const auto& v : m.datadict.vars) {
        os << "  " << (v.kind == VarKind::Input ? "input " : "var ") << v.name << " : " << type_name(v.type);
        if (v.init) os << " init " << format_literal(*v.init);
        if (v.min && v.max) os << " min " << format_literal(*v.min) << " max " << format_literal(*v.max);
        os << ";\n";
    }
    os << "}\n";
    for (const auto& mod : m.modules) {
        os << "\nmodule " << mod.name << " {\n";
        os << "  in { " << id_list(mod.inputs) << " }\n";
        os << "  out { " << id_list(mod.outputs) << " }\n";
        os << "  task ";
        emit_block(os, mod.task, 1);
        os << "\n}\n";
    }
    for (const auto& mode : m.modes) {
        os << "\nmode " << mode.name << (mode.name == m.initial_mode ? " init" : "") << " {\n";
        os << "  guard " << to_string(*mode.guard) << ";\n";
        for (const auto& p : mode.procedures) {
            os << "  procedure period " << p.period_ms << ' ';
            emit_block(os, p.body, 1);
            os << '\n';
        }
        for (const auto& t : mode.transitions) {
            os << "  transition priority " << t.priority << " to " << t.target << " when " << to_string(*t.condition);
            if (!t.action.empty()) {
                os << " do ";
                emit_block(os, t.action, 1);
            }
            os << ";\n";
        }
        os << "}\n";
    }
    return os.str();
}

} // namespace aasrdl
