#include "aasrdl/model.hpp"

#include <algorithm>

namespace aasrdl {

bool VarDecl::in_bounds(const Value& v) const
{
    if (type == Type::Bool) return true;
    double x = v.to_double();
    if (min && x < min->to_double()) return false;
    if (max && x > max->to_double()) return false;
    return true;
}

std::optional<int> DataDict::find_var(std::string_view name) const
{
    for (std::size_t i = 0; i < vars.size(); ++i)
        if (vars[i].name == name) return static_cast<int>(i);
    return std::nullopt;
}

const ConstDecl* DataDict::find_const(std::string_view name) const
{
    for (const auto& c : constants)
        if (c.name == name) return &c;
    return nullptr;
}

std::optional<std::size_t> Model::mode_index(std::string_view n) const
{
    for (std::size_t i = 0; i < modes.size(); ++i)
        if (modes[i].name == n) return i;
    return std::nullopt;
}

const Mode* Model::find_mode(std::string_view n) const
{
    auto i = mode_index(n);
    return i ? &modes[*i] : nullptr;
}

const ModuleDef* Model::find_module(std::string_view n) const
{
    for (const auto& m : modules)
        if (m.name == n) return &m;
    return nullptr;
}

std::size_t Model::initial_mode_index() const { return mode_index(initial_mode).value_or(0); }

State initial_state(const Model& model)
{
    State s;
    s.values.reserve(model.datadict.vars.size());
    for (const auto& v : model.datadict.vars) s.values.push_back(v.initial_value());
    s.mode = model.initial_mode_index();
    return s;
}

namespace {

bool same_expr(const ExprPtr& a, const ExprPtr& b)
{
    if (!a || !b) return !a && !b;
    return structurally_equal(*a, *b);
}

bool same_opt(const std::optional<Value>& a, const std::optional<Value>& b)
{
    if (!a || !b) return !a && !b;
    return a->identical(*b);
}

} // namespace

bool structurally_equal(const Block& a, const Block& b)
{
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const Stmt& x = a[i];
        const Stmt& y = b[i];
        if (x.node.index() != y.node.index()) return false;
        if (const auto* s = x.as<Assign>()) {
            const auto* t = y.as<Assign>();
            if (s->target != t->target || s->slot != t->slot || !same_expr(s->value, t->value)) return false;
        } else if (const auto* s = x.as<If>()) {
            const auto* t = y.as<If>();
            if (!same_expr(s->cond, t->cond) || !structurally_equal(s->then_block, t->then_block) ||
                !structurally_equal(s->else_block, t->else_block))
                return false;
        } else if (x.as<Call>()->module != y.as<Call>()->module) {
            return false;
        }
    }
    return true;
}

bool structurally_equal(const Model& a, const Model& b)
{
    if (a.name != b.name || a.initial_mode != b.initial_mode) return false;
    const auto& da = a.datadict;
    const auto& db = b.datadict;
    if (da.vars.size() != db.vars.size() || da.constants.size() != db.constants.size()) return false;
    for (std::size_t i = 0; i < da.vars.size(); ++i) {
        const auto& x = da.vars[i];
        const auto& y = db.vars[i];
        if (x.name != y.name || x.type != y.type || x.kind != y.kind || !same_opt(x.init, y.init) ||
            !same_opt(x.min, y.min) || !same_opt(x.max, y.max))
            return false;
    }
    for (std::size_t i = 0; i < da.constants.size(); ++i)
        if (da.constants[i].name != db.constants[i].name || !da.constants[i].value.identical(db.constants[i].value))
            return false;
    if (a.modules.size() != b.modules.size() || a.modes.size() != b.modes.size()) return false;
    for (std::size_t i = 0; i < a.modules.size(); ++i) {
        const auto& x = a.modules[i];
        const auto& y = b.modules[i];
        if (x.name != y.name || x.inputs != y.inputs || x.outputs != y.outputs || !structurally_equal(x.task, y.task))
            return false;
    }
    for (std::size_t i = 0; i < a.modes.size(); ++i) {
        const auto& x = a.modes[i];
        const auto& y = b.modes[i];
        if (x.name != y.name || !same_expr(x.guard, y.guard) || x.procedures.size() != y.procedures.size() ||
            x.transitions.size() != y.transitions.size())
            return false;
        for (std::size_t j = 0; j < x.procedures.size(); ++j)
            if (x.procedures[j].period_ms != y.procedures[j].period_ms ||
                !structurally_equal(x.procedures[j].body, y.procedures[j].body))
                return false;
        for (std::size_t j = 0; j < x.transitions.size(); ++j) {
            const auto& s = x.transitions[j];
            const auto& t = y.transitions[j];
            if (s.priority != t.priority || s.target != t.target || !same_expr(s.condition, t.condition) ||
                !structurally_equal(s.action, t.action))
                return false;
        }
    }
    return true;
}

void for_each_stmt(const Block& block, const std::function<void(const Stmt&)>& fn)
{
    for (const auto& s : block) {
        fn(s);
        if (const auto* i = s.as<If>()) {
            for_each_stmt(i->then_block, fn);
            for_each_stmt(i->else_block, fn);
        }
    }
}

} // namespace aasrdl
