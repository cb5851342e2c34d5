#include "aasrdl/ltl.hpp"

#include <functional>

namespace aasrdl {

namespace {

using AtomFn = std::function<bool(const Expr&, std::size_t)>;

std::vector<char> eval_rec(const LtlNode& f, std::size_t n, const AtomFn& atom)
{
    std::vector<char> r(n, 0);
    if (f.op == LtlOp::Atom) {
        for (std::size_t i = 0; i < n; ++i) r[i] = atom(*f.atom, i);
        return r;
    }
    std::vector<char> a = eval_rec(*f.lhs, n, atom);
    std::vector<char> b;
    if (!is_unary(f.op)) b = eval_rec(*f.rhs, n, atom);
    switch (f.op) {
    case LtlOp::Not:
        for (std::size_t i = 0; i < n; ++i) r[i] = !a[i];
        break;
    case LtlOp::And:
        for (std::size_t i = 0; i < n; ++i) r[i] = a[i] && b[i];
        break;
    case LtlOp::Or:
        for (std::size_t i = 0; i < n; ++i) r[i] = a[i] || b[i];
        break;
    case LtlOp::Implies:
        for (std::size_t i = 0; i < n; ++i) r[i] = !a[i] || b[i];
        break;
    case LtlOp::Next:
        for (std::size_t i = 0; i + 1 < n; ++i) r[i] = a[i + 1];
        break;
    case LtlOp::Eventually:
        for (std::size_t i = n; i-- > 0;) r[i] = a[i] || (i + 1 < n && r[i + 1]);
        break;
    case LtlOp::Always:
        for (std::size_t i = n; i-- > 0;) r[i] = a[i] && (i + 1 == n || r[i + 1]);
        break;
    case LtlOp::Until:
        for (std::size_t i = n; i-- > 0;) r[i] = b[i] || (a[i] && i + 1 < n && r[i + 1]);
        break;
    case LtlOp::Atom: break;
    }
    return r;
}

bool safe_eval(const Expr& e, std::span<const Value> values)
{
    try {
        return eval_bool(e, values);
    } catch (const EvalError&) {
        return false;
    }
}

} // namespace

std::vector<char> eval_ltl_all(const LtlNode& f, const Trace& trace, std::size_t length)
{
    std::size_t n = std::min(length, trace.size());
    return eval_rec(f, n, [&](const Expr& e, std::size_t i) { return safe_eval(e, trace.at(i)); });
}

std::vector<char> eval_ltl_all(const LtlNode& f, const std::vector<std::vector<Value>>& states)
{
    return eval_rec(f, states.size(), [&](const Expr& e, std::size_t i) { return safe_eval(e, states[i]); });
}

bool eval_ltl(const LtlNode& f, const Trace& trace, std::size_t i, std::size_t length)
{
    auto r = eval_ltl_all(f, trace, length);
    return i < r.size() && r[i];
}

} // namespace aasrdl
