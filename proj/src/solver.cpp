#include "aasrdl/solver.hpp"

#include "aasrdl/eval.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>

namespace aasrdl {

namespace {

using Rat = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

struct BudgetExceeded {
    const char* reason;
};

Rat to_rat(const Value& v)
{
    switch (v.type()) {
    case Type::Bool: return Rat(v.as_bool() ? 1 : 0);
    case Type::Int32: return Rat(v.as_int32());
    case Type::Float32: return Rat(static_cast<double>(v.as_float32()));
    case Type::Float64: return Rat(v.as_float64());
    }
    return Rat(0);
}

BigInt floor_div(const BigInt& n, const BigInt& d)
{
    BigInt q = n / d;
    if ((n % d != 0) && ((n < 0) != (d < 0))) --q;
    return q;
}

BigInt floor_rat(const Rat& r) { return floor_div(numerator(r), denominator(r)); }
BigInt ceil_rat(const Rat& r) { return -floor_div(-numerator(r), denominator(r)); }
bool is_integral(const Rat& r) { return denominator(r) == 1; }

Value domain_min(const VarDomain& d)
{
    if (d.min) return *d.min;
    switch (d.type) {
    case Type::Int32: return Value::int32(std::numeric_limits<std::int32_t>::min());
    case Type::Float32: return Value::float32(-std::numeric_limits<float>::max());
    case Type::Float64: return Value::float64(-std::numeric_limits<double>::max());
    default: return Value::boolean(false);
    }
}

Value domain_max(const VarDomain& d)
{
    if (d.max) return *d.max;
    switch (d.type) {
    case Type::Int32: return Value::int32(std::numeric_limits<std::int32_t>::max());
    case Type::Float32: return Value::float32(std::numeric_limits<float>::max());
    case Type::Float64: return Value::float64(std::numeric_limits<double>::max());
    default: return Value::boolean(true);
    }
}

Value from_double(Type t, double d)
{
    switch (t) {
    case Type::Int32: return Value::int32(static_cast<std::int32_t>(d));
    case Type::Float32: return Value::float32(static_cast<float>(d));
    case Type::Float64: return Value::float64(d);
    default: return Value::boolean(d != 0);
    }
}

Value from_rat(Type t, const Rat& r)
{
    if (t == Type::Int32) {
        BigInt i = floor_rat(r);
        i = std::clamp(i, BigInt(std::numeric_limits<std::int32_t>::min()),
                       BigInt(std::numeric_limits<std::int32_t>::max()));
        return Value::int32(i.convert_to<std::int32_t>());
    }
    return from_double(t, r.convert_to<double>());
}

// Value of the domain nearest zero.
Value default_value(const VarDomain& d)
{
    if (d.type == Type::Bool) return Value::boolean(false);
    Value lo = domain_min(d), hi = domain_max(d);
    if (lo.to_double() > 0) return lo;
    if (hi.to_double() < 0) return hi;
    return Value::zero(d.type);
}

// ---------------------------------------------------------------------------
// Linear forms

struct Lin {
    std::map<int, Rat> coef;
    Rat c;

    void add(const Lin& o, const Rat& k)
    {
        for (const auto& [s, a] : o.coef) {
            Rat& x = coef[s];
            x += a * k;
            if (x == 0) coef.erase(s);
        }
        c += o.c * k;
    }
    void scale(const Rat& k)
    {
        if (k == 0) {
            coef.clear();
            c = 0;
            return;
        }
        for (auto& [s, a] : coef) a *= k;
        c *= k;
    }
    [[nodiscard]] bool constant() const { return coef.empty(); }
};

std::optional<Lin> linearize(const Expr& e)
{
    if (const auto* l = e.as<Literal>()) {
        if (l->value.type() == Type::Bool) return std::nullopt;
        double d = l->value.to_double();
        if (!std::isfinite(d)) return std::nullopt;
        return Lin{{}, to_rat(l->value)};
    }
    if (const auto* k = e.as<ConstRef>()) {
        if (k->value.type() == Type::Bool || !std::isfinite(k->value.to_double())) return std::nullopt;
        return Lin{{}, to_rat(k->value)};
    }
    if (const auto* v = e.as<VarRef>()) {
        if (v->slot < 0 || !e.type || !is_numeric(*e.type)) return std::nullopt;
        return Lin{{{v->slot, Rat(1)}}, Rat(0)};
    }
    if (const auto* c = e.as<Cast>()) return linearize(*c->operand);
    if (const auto* u = e.as<Unary>()) {
        if (u->op != UnaryOp::Neg) return std::nullopt;
        auto l = linearize(*u->operand);
        if (l) l->scale(Rat(-1));
        return l;
    }
    const auto* b = e.as<Binary>();
    if (!b) return std::nullopt;
    auto l = linearize(*b->lhs);
    if (!l) return std::nullopt;
    auto r = linearize(*b->rhs);
    if (!r) return std::nullopt;
    switch (b->op) {
    case BinaryOp::Add: l->add(*r, Rat(1)); return l;
    case BinaryOp::Sub: l->add(*r, Rat(-1)); return l;
    case BinaryOp::Mul:
        if (l->constant()) {
            r->scale(l->c);
            return r;
        }
        if (r->constant()) {
            l->scale(r->c);
            return l;
        }
        return std::nullopt;
    case BinaryOp::Div:
        // int32 division truncates, so only float division is linear
        if (!b->operand_type || !is_float(*b->operand_type) || !r->constant() || r->c == 0) return std::nullopt;
        l->scale(Rat(1) / r->c);
        return l;
    default: return std::nullopt;
    }
}

// ---------------------------------------------------------------------------
// Fourier-Motzkin over rationals.  A row reads  a.x + c  rel  0.

enum class Rel : std::uint8_t { Lt, Le, Eq };

struct Row {
    std::vector<Rat> a;
    Rat c;
    Rel rel = Rel::Le;
    bool from_domain = false;
};

class Fm {
public:
    Fm(std::vector<bool> is_int, std::size_t row_limit) : is_int_(std::move(is_int)), row_limit_(row_limit) {}

    // Returns a point satisfying all rows; integer variables are integral
    // whenever their interval allows it.
    std::optional<std::vector<Rat>> solve(std::vector<Row> rows)
    {
        const std::size_t n = is_int_.size();
        std::vector<Row> cur;
        if (!normalize_all(rows, cur)) return std::nullopt;
        std::vector<std::vector<Row>> levels(n);
        for (std::size_t k = n; k-- > 0;) {
            levels[k] = cur;
            std::vector<Row> next;
            if (!normalize_all(eliminate(cur, k), next)) return std::nullopt;
            cur = std::move(next);
        }
        std::vector<Rat> x(n, Rat(0));
        for (std::size_t k = 0; k < n; ++k) {
            auto v = pick(levels[k], x, k);
            if (!v) return std::nullopt;
            x[k] = *v;
        }
        return x;
    }

private:
    std::vector<Row> eliminate(const std::vector<Row>& rows, std::size_t k) const
    {
        std::vector<Row> out;
        auto eq = std::find_if(rows.begin(), rows.end(), [&](const Row& r) { return r.rel == Rel::Eq && r.a[k] != 0; });
        if (eq != rows.end()) {
            for (auto it = rows.begin(); it != rows.end(); ++it) {
                if (it == eq) continue;
                Row r = *it;
                if (r.a[k] != 0) {
                    Rat f = r.a[k] / eq->a[k];
                    for (std::size_t i = 0; i < r.a.size(); ++i) r.a[i] -= f * eq->a[i];
                    r.c -= f * eq->c;
                    r.from_domain = r.from_domain && eq->from_domain;
                }
                out.push_back(std::move(r));
            }
            return out;
        }
        std::vector<const Row*> lower, upper;
        for (const auto& r : rows) {
            if (r.a[k] < 0)
                lower.push_back(&r);
            else if (r.a[k] > 0)
                upper.push_back(&r);
            else
                out.push_back(r);
        }
        for (const Row* l : lower) {
            for (const Row* u : upper) {
                Rat fl = Rat(1) / -l->a[k], fu = Rat(1) / u->a[k];
                Row r;
                r.a.resize(l->a.size());
                for (std::size_t i = 0; i < r.a.size(); ++i) r.a[i] = l->a[i] * fl + u->a[i] * fu;
                r.a[k] = 0;
                r.c = l->c * fl + u->c * fu;
                r.rel = (l->rel == Rel::Lt || u->rel == Rel::Lt) ? Rel::Lt : Rel::Le;
                r.from_domain = l->from_domain && u->from_domain;
                out.push_back(std::move(r));
                if (out.size() > row_limit_) throw BudgetExceeded{"fm-row-limit"};
            }
        }
        return out;
    }

    // Drops tautologies and duplicates, tightens all-integer rows. False when
    // a constant row is violated.
    bool normalize_all(const std::vector<Row>& in, std::vector<Row>& out) const
    {
        std::set<std::string> seen;
        for (Row r : in) {
            bool empty = std::all_of(r.a.begin(), r.a.end(), [](const Rat& q) { return q == 0; });
            if (empty) {
                bool ok = r.rel == Rel::Lt ? r.c < 0 : r.rel == Rel::Le ? r.c <= 0 : r.c == 0;
                if (!ok) return false;
                continue;
            }
            if (!tighten(r)) return false;
            std::string key;
            for (const auto& q : r.a) key += q.str() + ",";
            key += r.c.str() + (r.rel == Rel::Lt ? "<" : r.rel == Rel::Le ? "<=" : "=");
            if (seen.insert(key).second) out.push_back(std::move(r));
        }
        return true;
    }

    bool tighten(Row& r) const
    {
        bool all_int = true;
        for (std::size_t i = 0; i < r.a.size(); ++i)
            if (r.a[i] != 0 && !is_int_[i]) all_int = false;
        if (!all_int) {
            // scale so the first nonzero coefficient has magnitude one
            auto first = std::find_if(r.a.begin(), r.a.end(), [](const Rat& q) { return q != 0; });
            Rat s = abs(*first);
            for (auto& q : r.a) q /= s;
            r.c /= s;
            return true;
        }
        BigInt l = 1;
        for (const auto& q : r.a)
            if (q != 0) l = boost::multiprecision::lcm(l, denominator(q));
        for (auto& q : r.a) q *= l;
        r.c *= l;
        BigInt g = 0;
        for (const auto& q : r.a)
            if (q != 0) g = boost::multiprecision::gcd(g, BigInt(abs(numerator(q))));
        if (r.rel == Rel::Eq) {
            // a.x = -c needs an integer right side divisible by g
            if (!is_integral(r.c) || numerator(r.c) % g != 0) return false;
            for (auto& q : r.a) q /= g;
            r.c /= g;
            return true;
        }
        BigInt bound = r.rel == Rel::Lt ? ceil_rat(-r.c) - 1 : floor_rat(-r.c);
        bound = floor_div(bound, g);
        for (auto& q : r.a) q /= g;
        r.c = Rat(-bound);
        r.rel = Rel::Le;
        return true;
    }

    struct Bound {
        Rat v;
        bool strict = false;
        bool from_domain = true;
    };

    std::optional<Rat> pick(const std::vector<Row>& rows, const std::vector<Rat>& x, std::size_t k) const
    {
        std::optional<Bound> lo, hi;
        for (const auto& r : rows) {
            Rat rest = r.c;
            for (std::size_t i = 0; i < k; ++i) rest += r.a[i] * x[i];
            const Rat& a = r.a[k];
            if (a == 0) continue;
            Rat b = -rest / a;
            if (r.rel == Rel::Eq) return b;
            bool strict = r.rel == Rel::Lt;
            Bound nb{b, strict, r.from_domain};
            auto& slot = a > 0 ? hi : lo;
            bool tighter = !slot || (a > 0 ? b < slot->v : b > slot->v);
            if (tighter)
                slot = nb;
            else if (b == slot->v) {
                slot->strict = slot->strict || strict;
                slot->from_domain = slot->from_domain && r.from_domain;
            }
        }
        if (is_int_[k]) {
            // move to integer bounds where possible
            std::optional<BigInt> li, hi_i;
            if (lo) li = lo->strict ? floor_rat(lo->v) + 1 : ceil_rat(lo->v);
            if (hi) hi_i = hi->strict ? ceil_rat(hi->v) - 1 : floor_rat(hi->v);
            if (li && hi_i && *li > *hi_i) {
                // no integer here; return a fractional point for branching
                if (lo && hi) return (lo->v + hi->v) / 2;
                return lo ? lo->v : hi->v;
            }
            if (li && hi_i && !lo->from_domain && !hi->from_domain) return Rat(floor_div(*li + *hi_i, 2));
            BigInt z = 0;
            if (li && z < *li) z = *li;
            if (hi_i && z > *hi_i) z = *hi_i;
            return Rat(z);
        }
        if (lo && hi) {
            if (lo->v > hi->v || (lo->v == hi->v && (lo->strict || hi->strict))) return std::nullopt;
            if (!lo->from_domain && !hi->from_domain) return (lo->v + hi->v) / 2;
        }
        Rat z = 0;
        bool at_lo = lo && (z < lo->v || (z == lo->v && lo->strict));
        bool at_hi = hi && (z > hi->v || (z == hi->v && hi->strict));
        if (at_lo) {
            if (!lo->strict) return lo->v;
            Rat c = lo->v + 1;
            if (!hi || c < hi->v) return c;
            return (lo->v + hi->v) / 2;
        }
        if (at_hi) {
            if (!hi->strict) return hi->v;
            Rat c = hi->v - 1;
            if (!lo || c > lo->v) return c;
            return (lo->v + hi->v) / 2;
        }
        return z;
    }

    std::vector<bool> is_int_;
    std::size_t row_limit_;
};

// ---------------------------------------------------------------------------
// Cubes and the disjunctive search

struct BoolLit {
    int slot;
    bool value;
};

struct LinAtom {
    Lin lin;
    Rel rel;
};

struct Cube {
    std::vector<BoolLit> bools;
    std::vector<LinAtom> linear;
    std::vector<ExprPtr> opaque;
};

struct Goal {
    ExprPtr e;
    bool pos;
};

void collect_slots(const Expr& e, std::set<int>& out)
{
    for_each_var(e, [&](const VarRef& v, const SourceSpan&) {
        if (v.slot >= 0) out.insert(v.slot);
    });
}

class Search {
public:
    Search(const Constraint& c, const SolveOptions& o) : c_(c), opts_(o) {}

    SolveResult run()
    {
        if (!c_.formula || c_.formula->type != Type::Bool) return unknown("formula is not a boolean expression");
        std::set<int> slots;
        collect_slots(*c_.formula, slots);
        for (int s : slots)
            if (static_cast<std::size_t>(s) >= c_.vars.size()) return unknown("variable slot out of range");
        mentioned_ = slots;
        try {
            auto r = expand({{c_.formula, true}}, Cube{});
            if (r) return *r;
        } catch (const BudgetExceeded& b) {
            return unknown(b.reason);
        }
        if (!unknown_reason_.empty()) return unknown(unknown_reason_);
        SolveResult res;
        res.kind = SolveResult::Kind::Unsat;
        return res;
    }

private:
    static SolveResult unknown(std::string why)
    {
        SolveResult r;
        r.kind = SolveResult::Kind::Unknown;
        r.reason = std::move(why);
        return r;
    }

    // Depth-first over disjunctions. Returns a Sat result or nullopt.
    std::optional<SolveResult> expand(std::vector<Goal> goals, Cube cube)
    {
        while (!goals.empty()) {
            Goal g = goals.back();
            goals.pop_back();
            const Expr& e = *g.e;
            if (const auto* l = e.as<Literal>()) {
                if (l->value.as_bool() != g.pos) return std::nullopt;
                continue;
            }
            if (const auto* k = e.as<ConstRef>()) {
                if (k->value.as_bool() != g.pos) return std::nullopt;
                continue;
            }
            if (const auto* v = e.as<VarRef>()) {
                if (v->slot < 0) {
                    cube.opaque.push_back(g.pos ? g.e : expr::negate(g.e));
                    continue;
                }
                for (const auto& b : cube.bools)
                    if (b.slot == v->slot && b.value != g.pos) return std::nullopt;
                cube.bools.push_back({v->slot, g.pos});
                continue;
            }
            if (const auto* u = e.as<Unary>(); u && u->op == UnaryOp::Not) {
                goals.push_back({u->operand, !g.pos});
                continue;
            }
            const auto* b = e.as<Binary>();
            if (!b) {
                cube.opaque.push_back(g.pos ? g.e : expr::negate(g.e));
                continue;
            }
            if (is_logical(b->op)) {
                bool conj = (b->op == BinaryOp::And) == g.pos;
                if (conj) {
                    goals.push_back({b->rhs, g.pos});
                    goals.push_back({b->lhs, g.pos});
                    continue;
                }
                auto left = goals;
                left.push_back({b->lhs, g.pos});
                if (auto r = expand(std::move(left), cube)) return r;
                goals.push_back({b->rhs, g.pos});
                continue;
            }
            if ((b->op == BinaryOp::Eq || b->op == BinaryOp::Ne) && b->operand_type == Type::Bool) {
                bool same = (b->op == BinaryOp::Eq) == g.pos;
                auto left = goals;
                left.push_back({b->lhs, true});
                left.push_back({b->rhs, same});
                if (auto r = expand(std::move(left), cube)) return r;
                goals.push_back({b->lhs, false});
                goals.push_back({b->rhs, !same});
                continue;
            }
            if (is_comparison(b->op)) {
                auto l = linearize(*b->lhs);
                auto r = l ? linearize(*b->rhs) : std::nullopt;
                if (!l || !r) {
                    cube.opaque.push_back(g.pos ? g.e : expr::negate(g.e));
                    continue;
                }
                Lin d = *l;
                d.add(*r, Rat(-1)); // lhs - rhs
                BinaryOp op = b->op;
                if (!g.pos) {
                    switch (op) {
                    case BinaryOp::Lt: op = BinaryOp::Ge; break;
                    case BinaryOp::Le: op = BinaryOp::Gt; break;
                    case BinaryOp::Gt: op = BinaryOp::Le; break;
                    case BinaryOp::Ge: op = BinaryOp::Lt; break;
                    case BinaryOp::Eq: op = BinaryOp::Ne; break;
                    default: op = BinaryOp::Eq; break;
                    }
                }
                Lin neg = d;
                neg.scale(Rat(-1));
                switch (op) {
                case BinaryOp::Lt: cube.linear.push_back({d, Rel::Lt}); break;
                case BinaryOp::Le: cube.linear.push_back({d, Rel::Le}); break;
                case BinaryOp::Gt: cube.linear.push_back({neg, Rel::Lt}); break;
                case BinaryOp::Ge: cube.linear.push_back({neg, Rel::Le}); break;
                case BinaryOp::Eq: cube.linear.push_back({d, Rel::Eq}); break;
                default: {
                    Cube left = cube;
                    left.linear.push_back({d, Rel::Lt});
                    if (auto res = expand(goals, std::move(left))) return res;
                    cube.linear.push_back({neg, Rel::Lt});
                    break;
                }
                }
                continue;
            }
            cube.opaque.push_back(g.pos ? g.e : expr::negate(g.e));
        }
        return leaf(cube);
    }

    std::optional<SolveResult> leaf(const Cube& cube)
    {
        if (++cubes_ > opts_.cubes) throw BudgetExceeded{"dnf-limit"};
        // local indexing of the numeric variables in linear atoms
        std::vector<int> order;
        std::map<int, std::size_t> local;
        for (const auto& a : cube.linear)
            for (const auto& [s, q] : a.lin.coef)
                if (!local.count(s)) {
                    local[s] = order.size();
                    order.push_back(s);
                }
        std::vector<bool> is_int(order.size());
        std::vector<Row> rows;
        for (std::size_t i = 0; i < order.size(); ++i) {
            const auto& d = c_.vars[order[i]];
            is_int[i] = d.type == Type::Int32;
            Row lo{std::vector<Rat>(order.size()), to_rat(domain_min(d)), Rel::Le, true};
            lo.a[i] = -1;
            Row hi{std::vector<Rat>(order.size()), -to_rat(domain_max(d)), Rel::Le, true};
            hi.a[i] = 1;
            rows.push_back(std::move(lo));
            rows.push_back(std::move(hi));
        }
        for (const auto& a : cube.linear) {
            Row r{std::vector<Rat>(order.size()), a.lin.c, a.rel, false};
            for (const auto& [s, q] : a.lin.coef) r.a[local[s]] = q;
            rows.push_back(std::move(r));
        }

        Fm fm(is_int, 20'000);
        std::size_t nodes = 0;
        auto point = branch(fm, rows, is_int, nodes);
        if (!point) return std::nullopt; // this cube is infeasible

        std::vector<Value> values(c_.vars.size());
        for (std::size_t s = 0; s < c_.vars.size(); ++s) values[s] = default_value(c_.vars[s]);
        for (const auto& b : cube.bools) values[b.slot] = Value::boolean(b.value);
        for (std::size_t i = 0; i < order.size(); ++i)
            values[order[i]] = from_rat(c_.vars[order[i]].type, (*point)[i]);

        if (verify(values)) return sat(values);
        std::vector<int> floats;
        for (int s : order)
            if (is_float(c_.vars[s].type)) floats.push_back(s);
        if (nudge(values, floats)) return sat(values);

        if (!cube.opaque.empty()) {
            if (auto r = sample(cube, values, rows, order)) return r;
            note("nonlinear");
        } else {
            note(floats.empty() ? "int-overflow" : "float-boundary");
        }
        return std::nullopt;
    }

    std::optional<std::vector<Rat>> branch(Fm& fm, const std::vector<Row>& rows, const std::vector<bool>& is_int,
                                           std::size_t& nodes)
    {
        if (++nodes > opts_.branch_nodes) throw BudgetExceeded{"int-search-limit"};
        auto x = fm.solve(rows);
        if (!x) return std::nullopt;
        for (std::size_t i = 0; i < x->size(); ++i) {
            if (!is_int[i] || is_integral((*x)[i])) continue;
            Row down{std::vector<Rat>(x->size()), -Rat(floor_rat((*x)[i])), Rel::Le, false};
            down.a[i] = 1;
            Row up{std::vector<Rat>(x->size()), Rat(ceil_rat((*x)[i])), Rel::Le, false};
            up.a[i] = -1;
            auto r1 = rows;
            r1.push_back(std::move(down));
            if (auto y = branch(fm, r1, is_int, nodes)) return y;
            auto r2 = rows;
            r2.push_back(std::move(up));
            return branch(fm, r2, is_int, nodes);
        }
        return x;
    }

    bool verify(const std::vector<Value>& values) const
    {
        for (std::size_t s = 0; s < values.size(); ++s) {
            const auto& d = c_.vars[s];
            if (d.type == Type::Bool) continue;
            double v = values[s].to_double();
            if (std::isnan(v) || v < domain_min(d).to_double() || v > domain_max(d).to_double()) return false;
        }
        try {
            return eval_bool(*c_.formula, values);
        } catch (const EvalError&) {
            return false;
        }
    }

    bool nudge(std::vector<Value>& values, const std::vector<int>& floats) const
    {
        for (int k = 1; k <= 16; ++k) {
            for (int s : floats) {
                for (int dir : {1, -1}) {
                    Value saved = values[s];
                    if (c_.vars[s].type == Type::Float32) {
                        float f = saved.as_float32();
                        for (int i = 0; i < k; ++i) f = std::nextafter(f, dir > 0 ? INFINITY : -INFINITY);
                        values[s] = Value::float32(f);
                    } else {
                        double f = saved.as_float64();
                        for (int i = 0; i < k; ++i) f = std::nextafter(f, dir > 0 ? INFINITY : -INFINITY);
                        values[s] = Value::float64(f);
                    }
                    if (verify(values)) return true;
                    values[s] = saved;
                }
            }
        }
        return false;
    }

    // Seeded grid + random sampling for cubes with nonlinear atoms.
    std::optional<SolveResult> sample(const Cube& cube, std::vector<Value> values, const std::vector<Row>& rows,
                                      const std::vector<int>& order)
    {
        std::set<int> vs;
        for (const auto& e : cube.opaque) collect_slots(*e, vs);
        for (int s : order) vs.insert(s);
        std::vector<int> vars;
        for (int s : vs)
            if (c_.vars[s].type != Type::Bool) vars.push_back(s);
        if (vars.empty()) return std::nullopt;

        // per-variable ranges: domain narrowed by single-variable rows
        std::vector<std::pair<double, double>> range;
        for (int s : vars) {
            double lo = domain_min(c_.vars[s]).to_double(), hi = domain_max(c_.vars[s]).to_double();
            auto it = std::find(order.begin(), order.end(), s);
            if (it != order.end()) {
                std::size_t i = it - order.begin();
                for (const auto& r : rows) {
                    bool single = true;
                    for (std::size_t j = 0; j < r.a.size(); ++j)
                        if (j != i && r.a[j] != 0) single = false;
                    if (!single || r.a[i] == 0) continue;
                    double b = (-r.c / r.a[i]).convert_to<double>();
                    if (r.a[i] > 0 || r.rel == Rel::Eq) hi = std::min(hi, b);
                    if (r.a[i] < 0 || r.rel == Rel::Eq) lo = std::max(lo, b);
                }
            }
            range.emplace_back(lo, hi);
        }

        std::vector<std::vector<double>> grid(vars.size());
        for (std::size_t i = 0; i < vars.size(); ++i) {
            auto [lo, hi] = range[i];
            std::vector<double> cand = {0, 1, -1, 2, -2, 0.5, 10, -10, 100, -100, lo, hi, lo / 2 + hi / 2};
            for (double c : cand)
                if (c >= lo && c <= hi && std::isfinite(c) &&
                    std::find(grid[i].begin(), grid[i].end(), c) == grid[i].end())
                    grid[i].push_back(c);
            if (grid[i].empty()) grid[i].push_back(lo);
        }

        std::mt19937_64 rng(opts_.seed);
        auto unit = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
        std::vector<std::size_t> odo(vars.size(), 0);
        bool grid_done = false;
        const std::size_t grid_budget = opts_.samples / 2;
        for (std::size_t n = 0; n < opts_.samples; ++n) {
            if (!grid_done && n < grid_budget) {
                for (std::size_t i = 0; i < vars.size(); ++i)
                    values[vars[i]] = from_double(c_.vars[vars[i]].type, grid[i][odo[i]]);
                std::size_t i = 0;
                while (i < odo.size() && ++odo[i] == grid[i].size()) odo[i++] = 0;
                if (i == odo.size()) grid_done = true;
            } else {
                for (std::size_t i = 0; i < vars.size(); ++i) {
                    auto [lo, hi] = range[i];
                    if (unit() < 0.5) {
                        lo = std::max(lo, -1e3);
                        hi = std::min(hi, 1e3);
                        if (lo > hi) std::tie(lo, hi) = range[i];
                    }
                    lo = std::max(lo, -1e15);
                    hi = std::min(hi, 1e15);
                    if (lo > hi) lo = hi = range[i].first;
                    double u = unit();
                    double v = c_.vars[vars[i]].type == Type::Int32
                                   ? std::floor(std::ceil(lo) + u * (std::floor(hi) - std::ceil(lo) + 1))
                                   : lo + u * (hi - lo);
                    if (c_.vars[vars[i]].type == Type::Int32) v = std::min(v, std::floor(hi));
                    values[vars[i]] = from_double(c_.vars[vars[i]].type, v);
                }
            }
            if (verify(values)) return sat(values);
        }
        return std::nullopt;
    }

    SolveResult sat(const std::vector<Value>& values) const
    {
        SolveResult r;
        r.kind = SolveResult::Kind::Sat;
        r.values = values;
        for (int s : mentioned_) r.witness[c_.vars[s].name] = values[s];
        return r;
    }

    void note(const std::string& why)
    {
        if (unknown_reason_.empty()) unknown_reason_ = why;
    }

    const Constraint& c_;
    const SolveOptions& opts_;
    std::set<int> mentioned_;
    std::size_t cubes_ = 0;
    std::string unknown_reason_;
};

} // namespace

std::string_view to_string(SolveResult::Kind k)
{
    switch (k) {
    case SolveResult::Kind::Sat: return "sat";
    case SolveResult::Kind::Unsat: return "unsat";
    case SolveResult::Kind::Unknown: return "unknown";
    }
    return "?";
}

Constraint make_constraint(ExprPtr formula, const DataDict& dict)
{
    Constraint c;
    c.formula = std::move(formula);
    for (const auto& v : dict.vars) c.vars.push_back({v.name, v.type, v.min, v.max});
    return c;
}

SolveResult solve(const Constraint& c, const SolveOptions& opts)
{
    if (!opts.external_solver.empty()) return solve_external(c, opts.external_solver);
    return Search(c, opts).run();
}

} // namespace aasrdl
