#include "aasrdl/eval.hpp"
#include "aasrdl/solver.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <set>
#include <sstream>

namespace aasrdl {

namespace {

using Rat = boost::multiprecision::cpp_rational;

std::string smt_rat(const Rat& r, bool real)
{
    boost::multiprecision::cpp_int num = boost::multiprecision::abs(numerator(r));
    boost::multiprecision::cpp_int den = denominator(r);
    std::string body;
    if (!real)
        body = num.str();
    else if (den == 1)
        body = num.str() + ".0";
    else
        body = "(/ " + num.str() + ".0 " + den.str() + ".0)";
    return r < 0 ? "(- " + body + ")" : body;
}

std::string smt_value(const Value& v)
{
    switch (v.type()) {
    case Type::Bool: return v.as_bool() ? "true" : "false";
    case Type::Int32: return smt_rat(Rat(v.as_int32()), false);
    case Type::Float32: return smt_rat(Rat(static_cast<double>(v.as_float32())), true);
    case Type::Float64: return smt_rat(Rat(v.as_float64()), true);
    }
    return "false";
}

std::string sort_of(Type t) { return t == Type::Bool ? "Bool" : t == Type::Int32 ? "Int" : "Real"; }

class Emitter {
public:
    explicit Emitter(const Constraint& c) : c_(c) {}

    std::string run()
    {
        std::ostringstream os;
        os << "(set-option :produce-models true)\n";
        std::set<int> slots;
        for_each_var(*c_.formula, [&](const VarRef& v, const SourceSpan&) {
            if (v.slot >= 0) slots.insert(v.slot);
        });
        for (int s : slots) {
            const auto& d = c_.vars[s];
            os << "(declare-fun " << d.name << " () " << sort_of(d.type) << ")\n";
        }
        for (int s : slots) {
            const auto& d = c_.vars[s];
            if (d.type == Type::Bool) continue;
            Value lo = d.min ? *d.min : lowest(d.type), hi = d.max ? *d.max : highest(d.type);
            os << "(assert (and (<= " << smt_value(lo) << ' ' << d.name << ") (<= " << d.name << ' ' << smt_value(hi)
               << ")))\n";
        }
        std::string body = expr(*c_.formula);
        for (const auto& [name, def] : aux_) os << "(declare-fun " << name << " () Real)\n";
        for (const auto& [name, def] : aux_) os << "(assert " << def << ")\n";
        os << "(assert " << body << ")\n(check-sat)\n(get-model)\n";
        return os.str();
    }

private:
    static Value lowest(Type t)
    {
        if (t == Type::Int32) return Value::int32(std::numeric_limits<std::int32_t>::min());
        if (t == Type::Float32) return Value::float32(-std::numeric_limits<float>::max());
        return Value::float64(-std::numeric_limits<double>::max());
    }
    static Value highest(Type t)
    {
        if (t == Type::Int32) return Value::int32(std::numeric_limits<std::int32_t>::max());
        if (t == Type::Float32) return Value::float32(std::numeric_limits<float>::max());
        return Value::float64(std::numeric_limits<double>::max());
    }

    // Operand rendered in the sort of `want`.
    std::string as(const Expr& e, std::optional<Type> want)
    {
        std::string s = expr(e);
        if (want && is_float(*want) && e.type == Type::Int32) return "(to_real " + s + ")";
        return s;
    }

    std::string expr(const Expr& e)
    {
        if (const auto* l = e.as<Literal>()) return smt_value(l->value);
        if (const auto* k = e.as<ConstRef>()) return smt_value(k->value);
        if (const auto* v = e.as<VarRef>()) return v->name;
        if (const auto* c = e.as<Cast>()) return as(*c->operand, c->to);
        if (const auto* u = e.as<Unary>()) {
            std::string a = expr(*u->operand);
            switch (u->op) {
            case UnaryOp::Neg: return "(- " + a + ")";
            case UnaryOp::Not: return "(not " + a + ")";
            case UnaryOp::Abs: return "(ite (>= " + a + " 0) " + a + " (- " + a + "))";
            case UnaryOp::Sqrt: {
                std::string arg = as(*u->operand, Type::Float64);
                std::string name = "sqrt_" + std::to_string(aux_.size());
                aux_.emplace_back(name, "(=> (>= " + arg + " 0.0) (and (>= " + name + " 0.0) (= (* " + name + ' ' +
                                            name + ") " + arg + ")))");
                return name;
            }
            }
        }
        const auto& b = *e.as<Binary>();
        std::string l = as(*b.lhs, b.operand_type), r = as(*b.rhs, b.operand_type);
        bool ints = b.operand_type == Type::Int32;
        switch (b.op) {
        case BinaryOp::Add: return "(+ " + l + ' ' + r + ")";
        case BinaryOp::Sub: return "(- " + l + ' ' + r + ")";
        case BinaryOp::Mul: return "(* " + l + ' ' + r + ")";
        case BinaryOp::Div:
            if (!ints) return "(/ " + l + ' ' + r + ")";
            // truncating division
            return "(ite (>= (* " + l + ' ' + r + ") 0) (div (abs " + l + ") (abs " + r + ")) (- (div (abs " + l +
                   ") (abs " + r + "))))";
        case BinaryOp::Mod:
            return "(ite (>= " + l + " 0) (mod " + l + " (abs " + r + ")) (- (mod (- " + l + ") (abs " + r + "))))";
        case BinaryOp::Lt: return "(< " + l + ' ' + r + ")";
        case BinaryOp::Le: return "(<= " + l + ' ' + r + ")";
        case BinaryOp::Gt: return "(> " + l + ' ' + r + ")";
        case BinaryOp::Ge: return "(>= " + l + ' ' + r + ")";
        case BinaryOp::Eq: return "(= " + l + ' ' + r + ")";
        case BinaryOp::Ne: return "(not (= " + l + ' ' + r + "))";
        case BinaryOp::And: return "(and " + l + ' ' + r + ")";
        case BinaryOp::Or: return "(or " + l + ' ' + r + ")";
        }
        return "false";
    }

    const Constraint& c_;
    std::vector<std::pair<std::string, std::string>> aux_;
};

// Minimal s-expression reader for (define-fun ...) model entries.
struct Sexp {
    std::string atom;
    std::vector<Sexp> list;
    bool is_list = false;
};

class SexpReader {
public:
    explicit SexpReader(const std::string& s) : s_(s) {}

    std::optional<Sexp> next()
    {
        skip();
        if (i_ >= s_.size()) return std::nullopt;
        return read();
    }

private:
    void skip()
    {
        while (i_ < s_.size()) {
            if (std::isspace(static_cast<unsigned char>(s_[i_])))
                ++i_;
            else if (s_[i_] == ';')
                while (i_ < s_.size() && s_[i_] != '\n') ++i_;
            else
                break;
        }
    }

    Sexp read()
    {
        Sexp e;
        if (s_[i_] == '(') {
            ++i_;
            e.is_list = true;
            for (skip(); i_ < s_.size() && s_[i_] != ')'; skip()) e.list.push_back(read());
            ++i_;
            return e;
        }
        if (s_[i_] == '|') {
            std::size_t j = s_.find('|', i_ + 1);
            if (j == std::string::npos) j = s_.size() - 1;
            e.atom = s_.substr(i_ + 1, j - i_ - 1);
            i_ = j + 1;
            return e;
        }
        std::size_t j = i_;
        while (j < s_.size() && !std::isspace(static_cast<unsigned char>(s_[j])) && s_[j] != '(' && s_[j] != ')') ++j;
        e.atom = s_.substr(i_, std::max<std::size_t>(j - i_, 1));
        i_ = std::max(j, i_ + 1);
        return e;
    }

    const std::string& s_;
    std::size_t i_ = 0;
};

std::optional<Rat> number(const Sexp& e)
{
    if (!e.is_list) {
        std::string t = e.atom;
        std::size_t dot = t.find('.');
        try {
            if (dot == std::string::npos) return Rat(boost::multiprecision::cpp_int(t));
            std::string digits = t.substr(0, dot) + t.substr(dot + 1);
            boost::multiprecision::cpp_int scale = 1;
            for (std::size_t i = dot + 1; i < t.size(); ++i) scale *= 10;
            return Rat(boost::multiprecision::cpp_int(digits)) / Rat(scale);
        } catch (...) {
            return std::nullopt;
        }
    }
    if (e.list.size() == 2 && e.list[0].atom == "-") {
        auto v = number(e.list[1]);
        if (v) return -*v;
        return std::nullopt;
    }
    if (e.list.size() == 3 && e.list[0].atom == "/") {
        auto a = number(e.list[1]), b = number(e.list[2]);
        if (a && b && *b != 0) return *a / *b;
    }
    return std::nullopt;
}

} // namespace

std::string emit_smtlib(const Constraint& c) { return Emitter(c).run(); }

SolveResult parse_solver_output(const Constraint& c, const std::string& output)
{
    SolveResult res;
    SexpReader rd(output);
    auto first = rd.next();
    if (!first || first->is_list) {
        res.reason = "external solver gave no judgment";
        return res;
    }
    if (first->atom == "unsat") {
        res.kind = SolveResult::Kind::Unsat;
        return res;
    }
    if (first->atom != "sat") {
        res.reason = "external solver: " + first->atom;
        return res;
    }

    std::vector<Value> values(c.vars.size());
    for (std::size_t s = 0; s < c.vars.size(); ++s) {
        const auto& d = c.vars[s];
        values[s] = Value::zero(d.type);
        if (d.min && d.min->to_double() > 0) values[s] = *d.min;
        if (d.max && d.max->to_double() < 0) values[s] = *d.max;
    }
    std::vector<const Sexp*> defs;
    auto model = rd.next();
    if (model && model->is_list) {
        for (const auto& item : model->list)
            if (item.is_list && item.list.size() == 5 && item.list[0].atom == "define-fun") defs.push_back(&item);
    }
    for (const Sexp* d : defs) {
        const std::string& name = d->list[1].atom;
        for (std::size_t s = 0; s < c.vars.size(); ++s) {
            if (c.vars[s].name != name) continue;
            const Sexp& v = d->list[4];
            Type t = c.vars[s].type;
            if (t == Type::Bool) {
                values[s] = Value::boolean(v.atom == "true");
                continue;
            }
            auto q = number(v);
            if (!q) {
                res.reason = "unreadable model value for " + name;
                return res;
            }
            if (t == Type::Int32)
                values[s] = Value::int32(numerator(*q).convert_to<std::int32_t>());
            else if (t == Type::Float32)
                values[s] = Value::float32(static_cast<float>(q->convert_to<double>()));
            else
                values[s] = Value::float64(q->convert_to<double>());
        }
    }
    bool ok = false;
    try {
        ok = eval_bool(*c.formula, values);
    } catch (const EvalError&) {
    }
    if (!ok) {
        res.reason = "external model does not verify";
        return res;
    }
    res.kind = SolveResult::Kind::Sat;
    res.values = values;
    for_each_var(*c.formula, [&](const VarRef& v, const SourceSpan&) {
        if (v.slot >= 0) res.witness[v.name] = values[v.slot];
    });
    return res;
}

SolveResult solve_external(const Constraint& c, const std::string& command)
{
    namespace fs = std::filesystem;
    std::random_device rd;
    fs::path script = fs::temp_directory_path() / ("aasrdl_" + std::to_string(rd()) + ".smt2");
    {
        std::ofstream out(script);
        out << emit_smtlib(c);
    }
    std::string cmd = command + " < '" + script.string() + "' 2>/dev/null";
    std::string output;
    if (FILE* p = popen(cmd.c_str(), "r")) {
        char buf[4096];
        std::size_t n;
        while ((n = fread(buf, 1, sizeof buf, p)) > 0) output.append(buf, n);
        pclose(p);
    }
    std::error_code ec;
    fs::remove(script, ec);
    return parse_solver_output(c, output);
}

} // namespace aasrdl
